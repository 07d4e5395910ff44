//! Named randomized verification suites with JSON reports.
//!
//! Every trial draws from its own generator seeded by `(seed, suite, index)`,
//! so a report depends only on the configuration.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::affine::{affine_lemma_suite, compose_auto, degree_auto, normalizes_torus, PolyAuto};
use crate::cocycle::{coboundary, descend, trivialize, trivializes, validate_cocycle};
use crate::cremona::{CremonaMap, ProjPoint};
use crate::deformation::{build_family, extendability, scaling_map};
use crate::error::{Error, Result};
use crate::linear::{
    decomposition_bound, fixed_points, gauss_decompose, in_congruence_subgroup, projective_points,
    transvection_product, two_fixed_point_automorphism, DieudonneAutomorphism, ProjLinear, Transvection,
};
use crate::matrix::Matrix;
use crate::parse::parse_polynomial;
use crate::poly::{gcd, jacobian, Polynomial};
use crate::sample;
use crate::scalar::{AutomorphismKind, FieldAutomorphism, FieldSpec, Scalar};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Polynomials,
    Cremona,
    Deformation,
    Linear,
    Affineauto,
    Cocycles,
    All,
}

impl SuiteName {
    pub const PARTS: [SuiteName; 6] = [
        SuiteName::Polynomials,
        SuiteName::Cremona,
        SuiteName::Deformation,
        SuiteName::Linear,
        SuiteName::Affineauto,
        SuiteName::Cocycles,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Polynomials => "polynomials",
            SuiteName::Cremona => "cremona",
            SuiteName::Deformation => "deformation",
            SuiteName::Linear => "linear",
            SuiteName::Affineauto => "affineauto",
            SuiteName::Cocycles => "cocycles",
            SuiteName::All => "all",
        }
    }

    fn id(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteName::PARTS
            .into_iter()
            .chain([SuiteName::All])
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub case_id: String,
    pub inputs: Vec<String>,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub field: FieldSpec,
    pub dim: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            trials: 100,
            field: FieldSpec::Rational,
            dim: 2,
        }
    }
}

/// The generator for trial `index` of `suite`.
pub fn trial_rng(seed: u64, suite: SuiteName, index: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8] = suite.id();
    key[16..24].copy_from_slice(&(index as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Run a suite. `All` concatenates every suite with `trials` trials each;
/// its case ids are prefixed with the suite name.
pub fn run_suite(name: SuiteName, cfg: &SuiteConfig) -> Result<SuiteReport> {
    if cfg.dim == 0 {
        return Err(Error::PreconditionViolated("dimension must be positive".into()));
    }
    if name == SuiteName::All {
        let mut all = SuiteReport {
            schema: SCHEMA,
            suite: name.to_string(),
            seed: cfg.seed,
            trials: 0,
            passed: 0,
            failures: Vec::new(),
        };
        for part in SuiteName::PARTS {
            let r = run_suite(part, cfg)?;
            all.trials += r.trials;
            all.passed += r.passed;
            all.failures.extend(r.failures.into_iter().map(|mut f| {
                f.case_id = format!("{part}/{}", f.case_id);
                f
            }));
        }
        return Ok(all);
    }
    let trial: fn(&SuiteConfig, usize, &mut ChaCha8Rng) -> Outcome = match name {
        SuiteName::Polynomials => polynomials_trial,
        SuiteName::Cremona => cremona_trial,
        SuiteName::Deformation => deformation_trial,
        SuiteName::Linear => linear_trial,
        SuiteName::Affineauto => affine_trial,
        SuiteName::Cocycles => cocycles_trial,
        SuiteName::All => unreachable!(),
    };
    let failures: Vec<Failure> = (0..cfg.trials)
        .filter_map(|i| {
            let mut rng = trial_rng(cfg.seed, name, i);
            trial(cfg, i, &mut rng).err().map(|m| Failure {
                case_id: i.to_string(),
                inputs: m.inputs,
                expected: m.expected,
                actual: m.actual,
            })
        })
        .collect();
    Ok(SuiteReport {
        schema: SCHEMA,
        suite: name.to_string(),
        seed: cfg.seed,
        trials: cfg.trials,
        passed: cfg.trials - failures.len(),
        failures,
    })
}

struct Mismatch {
    inputs: Vec<String>,
    expected: String,
    actual: String,
}

type Outcome = std::result::Result<(), Mismatch>;

/// Printed inputs of the current trial, attached to any mismatch.
#[derive(Default)]
struct Case {
    inputs: Vec<String>,
}

impl Case {
    fn input(&mut self, s: impl fmt::Display) {
        self.inputs.push(s.to_string());
    }

    fn fail(&self, expected: impl Into<String>, actual: impl Into<String>) -> Mismatch {
        Mismatch {
            inputs: self.inputs.clone(),
            expected: expected.into(),
            actual: actual.into(),
        }
    }

    fn ok<T>(&self, r: Result<T>) -> std::result::Result<T, Mismatch> {
        r.map_err(|e| self.fail("no error", e.name()))
    }

    fn holds(&self, what: &str, cond: bool) -> Outcome {
        if cond {
            Ok(())
        } else {
            Err(self.fail(what, format!("violated: {what}")))
        }
    }

    fn same<T: PartialEq + fmt::Display>(&self, what: &str, expected: &T, actual: &T) -> Outcome {
        if expected == actual {
            Ok(())
        } else {
            Err(self.fail(format!("{what}: {expected}"), actual.to_string()))
        }
    }
}

fn polynomials_trial(cfg: &SuiteConfig, _: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let field = cfg.field;
    let n = cfg.dim + 1;
    let mut case = Case::default();
    let [a, b, c] = [0; 3].map(|_| sample::polynomial(field, n, 3, 4, rng));
    for p in [&a, &b, &c] {
        case.input(p);
    }
    case.same("a(b + c)", &(&(&a * &b) + &(&a * &c)), &(&a * &(&b + &c)))?;
    case.same("reparse", &a, &case.ok(parse_polynomial(field, n, 0, &a.to_string()))?)?;
    let x: Vec<Scalar> = (0..n).map(|_| sample::scalar(field, 4, rng)).collect();
    let ab = case.ok((&a * &b).evaluate(&x))?;
    let a_b = case.ok(a.evaluate(&x))? * case.ok(b.evaluate(&x))?;
    case.same("(ab)(x)", &a_b, &ab)?;
    if !c.is_zero() {
        let g = case.ok(gcd(&(&a * &c), &(&b * &c)))?;
        let divides = |p: &Polynomial, q: &Polynomial| q.div_exact(p).is_ok_and(|r| r.is_some());
        case.holds("c | gcd(ac, bc)", divides(&c, &g))?;
        case.holds("gcd(ac, bc) | ac", divides(&g, &(&a * &c)))?;
        case.holds("gcd(ac, bc) | bc", divides(&g, &(&b * &c)))?;
    }
    Ok(())
}

fn cremona_trial(cfg: &SuiteConfig, _: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let field = cfg.field;
    let d = cfg.dim;
    let mut case = Case::default();
    let f = sample::cremona_map(field, d, rng);
    let g = sample::cremona_map(field, d, rng);
    let p = sample::point(field, d, rng);
    case.input(&f);
    case.input(&g);
    case.input(&p);
    case.same("reparse", &f, &case.ok(CremonaMap::parse(field, &f.to_string()))?)?;
    let fg = case.ok(f.compose(&g))?;
    case.holds("deg(fg) <= deg f deg g", fg.degree() <= f.degree() * g.degree())?;
    if let Ok(gp) = g.apply(&p) {
        if let (Ok(lhs), Ok(rhs)) = (fg.apply(&p), f.apply(&gp)) {
            case.same("(fg)(p)", &rhs, &lhs)?;
        }
    }
    let sigma = CremonaMap::standard_involution(field, d);
    let ss = case.ok(sigma.compose(&sigma))?;
    case.holds("sigma^2 = id", ss.is_identity() && ss.degree() == 1)?;
    Ok(())
}

/// Intended shape of a deformation corpus entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseKind {
    Extendable,
    BasePoint,
    MovedInChart,
    MovedOffChart,
    SingularJacobian,
}

/// Corpus entry `index` for the deformation suite. Maps are compositions
/// of linear maps, closures of tame automorphisms and the standard
/// involution, of degree at most 6, arranged so that `[1:0:…:0]` is
/// fixed with invertible Jacobian, is a base point, is moved inside or
/// outside the chart `x0 ≠ 0`, or is fixed with singular Jacobian.
pub fn deformation_case<R: Rng + ?Sized>(field: FieldSpec, dim: usize, index: usize, rng: &mut R) -> (CremonaMap, CaseKind) {
    let kind = match index % 6 {
        0 | 1 => CaseKind::Extendable,
        2 => CaseKind::BasePoint,
        3 => CaseKind::MovedInChart,
        4 => CaseKind::MovedOffChart,
        _ => CaseKind::SingularJacobian,
    };
    let compose = |a: &CremonaMap, b: &CremonaMap| a.compose(b).expect("same shape");
    let fixing = |rng: &mut R, max_deg: u32| -> CremonaMap {
        match rng.random_range(0..3) {
            0 => CremonaMap::from_linear(&sample::linear_fixing_origin(field, dim, rng)),
            1 => sample::tame_auto(field, dim, max_deg, true, rng).closure().expect("nonzero"),
            _ if dim <= max_deg as usize => sample::involution_at_origin(field, dim),
            _ => CremonaMap::from_linear(&sample::linear_fixing_origin(field, dim, rng)),
        }
    };
    let f = match kind {
        CaseKind::Extendable if index.is_multiple_of(6) => fixing(rng, 3),
        CaseKind::Extendable => {
            let a = fixing(rng, 3);
            compose(&a, &fixing(rng, 2))
        }
        CaseKind::BasePoint => {
            let l1 = CremonaMap::from_linear(&sample::proj_linear(field, dim, rng));
            let l2 = CremonaMap::from_linear(&sample::linear_fixing_origin(field, dim, rng));
            compose(&compose(&l1, &sample::involution(field, dim)), &l2)
        }
        CaseKind::MovedInChart | CaseKind::MovedOffChart => {
            let mut m = Matrix::identity(field, dim + 1);
            if kind == CaseKind::MovedInChart {
                let k = rng.random_range(1..=dim);
                for i in 1..=dim {
                    m.set(i, 0, sample::small_int(field, 3, rng));
                }
                m.set(k, 0, sample::nonzero_scalar(field, 3, rng));
            } else {
                m.swap_rows(0, rng.random_range(1..=dim));
            }
            let l = CremonaMap::from_linear(&ProjLinear::new(m).expect("invertible"));
            compose(&l, &fixing(rng, 3))
        }
        CaseKind::SingularJacobian => {
            // the closure of (y1, y1 y2, y3, ...); on P^1, y -> y^2
            let x = |i| Polynomial::var(field, dim + 1, i);
            let comps = if dim == 1 {
                vec![x(0).pow(2), x(1).pow(2)]
            } else {
                let mut c = vec![x(0).pow(2), &x(0) * &x(1), &x(1) * &x(2)];
                c.extend((3..=dim).map(|i| &x(0) * &x(i)));
                c
            };
            let s = CremonaMap::make_map(comps).expect("valid map");
            let a = fixing(rng, 2);
            let b = CremonaMap::from_linear(&sample::linear_fixing_origin(field, dim, rng));
            compose(&compose(&a, &s), &b)
        }
    };
    (f, kind)
}

fn deformation_trial(cfg: &SuiteConfig, index: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let field = cfg.field;
    let d = cfg.dim;
    let mut case = Case::default();
    let (f, _) = deformation_case(field, d, index, rng);
    case.input(&f);
    let origin = ProjPoint::origin(field, d);
    let fam = case.ok(build_family(&f))?;
    let verdict = extendability(&fam);
    let flags = &verdict.reasons;
    let p_flag = flags.p_i0_nonzero.iter().any(|&b| b);
    let q_flag = flags.q_i0_zero.iter().any(|&b| b);
    match f.apply(&origin) {
        Err(_) => case.holds("base point flagged", !verdict.extendable && (p_flag || q_flag))?,
        Ok(img) if img != origin && img.coords()[0].is_zero() => {
            case.holds("image off chart flagged Q_i0_zero", !verdict.extendable && q_flag)?
        }
        Ok(img) if img != origin => {
            case.holds("moved point flagged P_i0_nonzero", !verdict.extendable && p_flag && !q_flag)?
        }
        Ok(_) if !f.is_local_isomorphism(&origin) => case.holds(
            "singular Jacobian flagged",
            !verdict.extendable && flags.jacobian_singular && !p_flag && !q_flag,
        )?,
        Ok(_) => {
            case.holds("extendable", verdict.extendable)?;
            let fs = case.ok(case.ok(f.to_chart())?.rational_functions())?;
            let jac = case.ok(jacobian(&fs, &vec![Scalar::zero(field); d]))?;
            let mut m = Matrix::identity(field, d + 1);
            for i in 0..d {
                for j in 0..d {
                    m.set(i + 1, j + 1, jac.get(i, j).clone());
                }
            }
            let expected = case.ok(ProjLinear::new(m))?;
            match &verdict.limit {
                Some(limit) => case.same("limit", &expected, limit)?,
                None => return Err(case.fail(expected.to_string(), "no limit")),
            }
        }
    }
    let t0 = sample::nonzero_scalar(field, 5, rng);
    case.input(&t0);
    let beta = case.ok(scaling_map(field, d, &t0))?;
    let beta_inv = case.ok(scaling_map(field, d, &case.ok(t0.inv())?))?;
    let conj = case.ok(beta_inv.compose(&f).and_then(|m| m.compose(&beta)))?;
    let direct = case.ok(conj.to_chart().and_then(|c| c.rational_functions()))?;
    let special = case.ok(fam.specialize(&t0))?;
    case.holds("specialization equals conjugation", direct == special)
}

fn automorphisms_for(field: FieldSpec) -> Vec<FieldAutomorphism> {
    let mut out = vec![FieldAutomorphism::identity(field)];
    match field {
        FieldSpec::GaussianRational => out.push(FieldAutomorphism::conjugation()),
        FieldSpec::PrimeField(_) => {
            out.push(FieldAutomorphism::new(field, AutomorphismKind::FrobeniusPower(1)).expect("prime field"))
        }
        FieldSpec::Rational => {}
    }
    out
}

fn linear_trial(cfg: &SuiteConfig, index: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let field = cfg.field;
    let d = cfg.dim;
    let n = d + 1;
    let mut case = Case::default();
    let g = sample::proj_linear(field, d, rng);
    let h = sample::proj_linear(field, d, rng);
    let k = sample::proj_linear(field, d, rng);
    for m in [&g, &h, &k] {
        case.input(m);
    }
    let autos = automorphisms_for(field);
    let alpha = autos[index % autos.len()];
    let dual = (index / autos.len()) % 2 == 1;
    let phi = case.ok(DieudonneAutomorphism::new(k, alpha, dual))?;
    let gh = case.ok(g.proj_mul(&h))?;
    let lhs = case.ok(phi.apply(&gh))?;
    let rhs = case.ok(phi.apply(&g).and_then(|a| a.proj_mul(&phi.apply(&h)?)))?;
    case.same("phi(gh)", &rhs, &lhs)?;
    case.same("double dual", &g, &g.transpose_inverse().transpose_inverse())?;

    let count = rng.random_range(0..=20);
    let ts: Vec<Transvection> = (0..count).map(|_| sample::transvection(field, n, 3, rng)).collect();
    let a = transvection_product(field, n, &ts);
    case.input(&a);
    let dec = case.ok(gauss_decompose(&a))?;
    case.holds("factor count within bound", dec.len() <= decomposition_bound(d))?;
    case.same("reconstruction", &a, &transvection_product(field, n, &dec))?;

    let q = FieldSpec::Rational;
    let conj = |rng: &mut ChaCha8Rng| -> Matrix {
        let e = Transvection::new(0, 1, Scalar::from_int(q, 3 * rng.random_range(1..=2)))
            .expect("distinct")
            .matrix(n);
        let perm = sample::permutation(n, rng);
        let e = Transvection::new(perm[0], perm[1], Scalar::from_int(q, 3 * [-2, -1, 1, 2][rng.random_range(0..4)]))
            .map(|t| &e * &t.matrix(n))
            .expect("distinct");
        let s = transvection_product(
            q,
            n,
            &(0..3).map(|_| sample::transvection(q, n, 1, rng)).collect::<Vec<_>>(),
        );
        &(&s * &e) * &s.inverse().expect("unimodular")
    };
    let x = conj(rng);
    let y = conj(rng);
    let xy = &x * &y.inverse().expect("unimodular");
    case.input(&xy);
    case.holds("Gamma_3 closure", case.ok(in_congruence_subgroup(&xy, 3))?)?;

    let p = sample::point(field, d, rng);
    let r = sample::point(field, d, rng);
    let lambda = sample::nonzero_scalar(field, 4, rng);
    if p != r && !lambda.is_one() {
        case.input(&p);
        case.input(&r);
        let alpha = case.ok(two_fixed_point_automorphism(&p, &r, &lambda))?;
        case.same("alpha(p)", &p, &case.ok(alpha.apply(&p))?)?;
        case.same("alpha(q)", &r, &case.ok(alpha.apply(&r))?)?;
        if let FieldSpec::PrimeField(pr) = field {
            if pr.pow(n as u32) <= 4096 {
                let pts = case.ok(projective_points(pr, d))?;
                let fixed = case.ok(fixed_points(&alpha, &pts))?;
                case.same("fixed point count", &2, &fixed.len())?;
            }
        }
    }
    Ok(())
}

fn affine_trial(cfg: &SuiteConfig, _: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let field = cfg.field;
    let d = cfg.dim;
    let mut case = Case::default();
    // composites are re-verified by substitution, which grows quickly with d
    let f = sample::tame_auto(field, d, 2, false, rng);
    let g = sample::tame_auto(field, d, if d >= 3 { 1 } else { 2 }, false, rng);
    case.input(&f);
    case.input(&g);
    let fg = case.ok(compose_auto(&f, &g))?;
    case.ok(PolyAuto::make_auto(fg.forward().to_vec(), fg.inverse().to_vec()))?;
    let ginv_finv = case.ok(compose_auto(&g.inv(), &f.inv()))?;
    case.holds("(fg)^-1 = g^-1 f^-1", fg.inverse() == ginv_finv.forward())?;
    case.holds("deg(fg) <= deg f deg g", degree_auto(&fg) <= degree_auto(&f) * degree_auto(&g))?;

    let perm = sample::permutation(d, rng);
    let diag: Vec<Scalar> = (0..d).map(|_| sample::nonzero_scalar(field, 5, rng)).collect();
    let p = case.ok(PolyAuto::permutation(field, &perm))?;
    let t = case.ok(PolyAuto::torus(&diag))?;
    let conj = case.ok(compose_auto(&p, &t).and_then(|m| compose_auto(&m, &p.inv())))?;
    let permuted: Vec<Scalar> = perm.iter().map(|&j| diag[j].clone()).collect();
    case.same("permuted torus", &case.ok(PolyAuto::torus(&permuted))?, &conj)?;

    let mono = case.ok(compose_auto(&p, &t))?;
    case.holds("monomial map normalizes the torus", normalizes_torus(&mono, 4, rng))?;
    // small prime fields have too few torus elements to witness failure
    if !matches!(field, FieldSpec::PrimeField(q) if q <= 7) {
        let bad = if rng.random_bool(0.5) {
            let mut b: Vec<Scalar> = vec![Scalar::zero(field); d];
            b[rng.random_range(0..d)] = sample::nonzero_scalar(field, 3, rng);
            case.ok(PolyAuto::translation(&b))?
        } else {
            sample::triangular_auto(field, d.max(2), 3, true, rng)
        };
        if bad.dim() == d && !bad.is_monomial() && degree_auto(&bad) >= 1 {
            let bad = case.ok(compose_auto(&mono, &bad))?;
            case.input(&bad);
            case.holds("non-monomial map fails", !normalizes_torus(&bad, 8, rng))?;
        }
    }

    if d >= 2 {
        let a = sample::scalar(field, 9, rng);
        let report = case.ok(affine_lemma_suite(field, d, &[a]))?;
        case.holds("affine lemma identities", report.all_passed())?;
    }
    Ok(())
}

fn cocycles_trial(_: &SuiteConfig, index: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let field = FieldSpec::GaussianRational;
    let d = 1 + index % 3;
    let mut case = Case::default();
    let a0 = sample::invertible_matrix(field, d, 3, rng);
    case.input(&a0);
    let nu = case.ok(coboundary(&a0))?;
    case.holds("coboundary validates", validate_cocycle(&nu))?;
    let a = case.ok(trivialize(&nu))?;
    case.holds("a^-1 nu(sigma) sigma(a) = 1", trivializes(&nu, &a))?;
    let f = sample::invertible_matrix(field, d, 3, rng);
    case.input(&f);
    let desc = case.ok(descend(&f))?;
    case.holds("descent cocycle validates", validate_cocycle(&desc.cocycle))?;
    case.holds(
        "descended map is rational",
        desc.rational.entries().iter().all(|v| v.gaussian_parts().is_some_and(|(_, im)| num_traits::Zero::is_zero(im))),
    )
}
