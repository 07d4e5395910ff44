//! The scaling deformation `ρ_t = β_t⁻¹ f β_t` and its limit at `t = 0`.
//!
//! On the chart `x_0 ≠ 0` write `F_i = (Σ_j P_ij) / (Σ_j Q_ij)` with `P_ij`,
//! `Q_ij` homogeneous of degree `j`. Conjugating by `β_t(x) = t·x` gives
//!
//! ```text
//! F_i^t = (t^-1 P_i0 + P_i1 + t P_i2 + …) / (Q_i0 + t Q_i1 + t^2 Q_i2 + …)
//! ```
//!
//! so the family is stored as `t`-graded pieces and the behaviour at
//! `t = 0` is read off from the lowest pieces, never by a numeric limit.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::cremona::{CremonaMap, ProjPoint};
use crate::error::{Error, Result};
use crate::linear::ProjLinear;
use crate::matrix::Matrix;
use crate::poly::{jacobian, Monomial, Polynomial, RationalFunction};
use crate::scalar::{FieldSpec, Scalar};

/// `β_t = [x_0 : t x_1 : … : t x_d]`.
pub fn scaling_map(field: FieldSpec, dim: usize, t: &Scalar) -> Result<CremonaMap> {
    if t.field() != field {
        return Err(Error::FieldMismatch);
    }
    if t.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let mut diag = vec![t.clone(); dim + 1];
    diag[0] = Scalar::one(field);
    let lin = ProjLinear::new(Matrix::diagonal(&diag))?;
    Ok(CremonaMap::from_linear(&lin))
}

/// `β_t⁻¹ f β_t` with `t` kept symbolic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformationFamily {
    source: CremonaMap,
    numerators: Vec<BTreeMap<i32, Polynomial>>,
    denominators: Vec<BTreeMap<i32, Polynomial>>,
}

pub fn build_family(f: &CremonaMap) -> Result<DeformationFamily> {
    let chart = f.to_chart()?;
    let shift = |parts: &BTreeMap<u32, Polynomial>, offset: i32| {
        parts
            .iter()
            .map(|(&j, p)| (j as i32 + offset, p.clone()))
            .collect::<BTreeMap<_, _>>()
    };
    let d = f.dim();
    Ok(DeformationFamily {
        source: f.clone(),
        numerators: (1..=d).map(|i| shift(chart.numerator_parts(i), -1)).collect(),
        denominators: (1..=d).map(|i| shift(chart.denominator_parts(i), 0)).collect(),
    })
}

impl DeformationFamily {
    pub fn source(&self) -> &CremonaMap {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    pub fn degree(&self) -> u32 {
        self.source.degree()
    }

    pub fn field(&self) -> FieldSpec {
        self.source.field()
    }

    /// Numerator of `F_i^t` as `t`-exponent to coefficient, `i` in `1..=d`.
    pub fn numerator(&self, i: usize) -> &BTreeMap<i32, Polynomial> {
        &self.numerators[i - 1]
    }

    pub fn denominator(&self, i: usize) -> &BTreeMap<i32, Polynomial> {
        &self.denominators[i - 1]
    }

    fn piece(&self, m: &BTreeMap<i32, Polynomial>, k: i32) -> Polynomial {
        m.get(&k)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.field(), self.dim()))
    }

    /// The chart form of `β_{t0}⁻¹ f β_{t0}`.
    pub fn specialize(&self, t0: &Scalar) -> Result<Vec<RationalFunction>> {
        if t0.field() != self.field() {
            return Err(Error::FieldMismatch);
        }
        if t0.is_zero() {
            return Err(Error::ZeroParameter);
        }
        let t_inv = t0.inv()?;
        let eval = |m: &BTreeMap<i32, Polynomial>| {
            m.iter().fold(Polynomial::zero(self.field(), self.dim()), |acc, (&k, p)| {
                let c = if k < 0 { t_inv.pow(k.unsigned_abs()) } else { t0.pow(k as u32) };
                &acc + &p.scale(&c)
            })
        };
        self.numerators
            .iter()
            .zip(&self.denominators)
            .map(|(n, d)| RationalFunction::new(eval(n), eval(d)))
            .collect()
    }
}

impl fmt::Display for DeformationFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let graded = |m: &BTreeMap<i32, Polynomial>| {
            m.iter()
                .map(|(k, p)| format!("t^{k}*({})", p.display_with_offset(1)))
                .collect::<Vec<_>>()
                .join(" + ")
        };
        for i in 1..=self.dim() {
            if i > 1 {
                writeln!(f)?;
            }
            write!(
                f,
                "F{i}^t = ({}) / ({})",
                graded(self.numerator(i)),
                graded(self.denominator(i))
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictFlags {
    #[serde(rename = "P_i0_nonzero")]
    pub p_i0_nonzero: Vec<bool>,
    #[serde(rename = "Q_i0_zero")]
    pub q_i0_zero: Vec<bool>,
    pub jacobian_singular: bool,
}

impl VerdictFlags {
    pub fn any(&self) -> bool {
        self.jacobian_singular || self.p_i0_nonzero.iter().chain(&self.q_i0_zero).any(|&b| b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtendabilityVerdict {
    pub extendable: bool,
    pub reasons: VerdictFlags,
    pub limit: Option<ProjLinear>,
}

/// Whether `ρ_t` extends to `t = 0` inside `Aut(P^d)`, and its value there.
///
/// Requires `P_i0 = 0` and `Q_i0 ≠ 0` for every `i`, and an invertible
/// matrix with rows `P_i1 / Q_i0`. The limit is `diag(1, M)`.
/// `jacobian_singular` is only evaluated once the first two conditions hold.
pub fn extendability(fam: &DeformationFamily) -> ExtendabilityVerdict {
    let d = fam.dim();
    let field = fam.field();
    let p_i0_nonzero: Vec<bool> = (1..=d).map(|i| !fam.piece(fam.numerator(i), -1).is_zero()).collect();
    let q_i0: Vec<Polynomial> = (1..=d).map(|i| fam.piece(fam.denominator(i), 0)).collect();
    let q_i0_zero: Vec<bool> = q_i0.iter().map(Polynomial::is_zero).collect();
    let mut reasons = VerdictFlags {
        p_i0_nonzero,
        q_i0_zero,
        jacobian_singular: false,
    };
    if reasons.any() {
        return ExtendabilityVerdict {
            extendable: false,
            reasons,
            limit: None,
        };
    }
    let mut m = Matrix::identity(field, d + 1);
    for i in 1..=d {
        let p_i1 = fam.piece(fam.numerator(i), 0);
        let q = q_i0[i - 1].constant_term();
        for j in 0..d {
            let c = p_i1.coefficient(&Monomial::var(d, j));
            m.set(i, j + 1, &c / &q);
        }
    }
    let limit = ProjLinear::new(m).ok();
    reasons.jacobian_singular = limit.is_none();
    ExtendabilityVerdict {
        extendable: limit.is_some(),
        reasons,
        limit,
    }
}

/// Compare the limit of the family with the Jacobian of the chart form at
/// the origin, computed by differentiation.
pub fn limit_vs_jacobian(f: &CremonaMap) -> Result<bool> {
    let p = ProjPoint::origin(f.field(), f.dim());
    if !f.is_fixed_point(&p) || !f.is_local_isomorphism(&p) {
        return Err(Error::PreconditionViolated(
            "map must fix [1:0:...:0] and be a local isomorphism there".into(),
        ));
    }
    let verdict = extendability(&build_family(f)?);
    let fs = f.to_chart()?.rational_functions()?;
    let zero = vec![Scalar::zero(f.field()); f.dim()];
    let jac = jacobian(&fs, &zero)?;
    let expected = ProjLinear::new(block_diag_one(&jac))?;
    Ok(verdict.limit == Some(expected))
}

/// `diag(1, m)`.
pub(crate) fn block_diag_one(m: &Matrix) -> Matrix {
    let d = m.nrows();
    let mut out = Matrix::identity(m.field(), d + 1);
    for i in 0..d {
        for j in 0..d {
            out.set(i + 1, j + 1, m.get(i, j).clone());
        }
    }
    out
}

/// A projective linear map sending `p` to `[1:0:…:0]`: swap the pivot
/// coordinate of `p` into position 0, then `x_j ↦ x_j - q_j x_0`.
pub fn move_point_to_origin(p: &ProjPoint) -> ProjLinear {
    let field = p.field();
    let n = p.dim() + 1;
    let k = p.pivot();
    let mut perm = Matrix::identity(field, n);
    perm.swap_rows(0, k);
    let q = perm.mul_vec(p.coords()).expect("matching length");
    let mut elim = Matrix::identity(field, n);
    for (j, qj) in q.iter().enumerate().skip(1) {
        elim.set(j, 0, -qj);
    }
    ProjLinear::new(&elim * &perm).expect("invertible")
}

/// The family of `α⁻¹ f⁻¹ α f`, after moving `p` to the origin.
///
/// `f_inv` must compose with `f` to the identity; the commutator must fix
/// `p` and be a local isomorphism there.
pub fn commutator_family(
    f: &CremonaMap,
    f_inv: Option<&CremonaMap>,
    alpha: &ProjLinear,
    p: &ProjPoint,
) -> Result<DeformationFamily> {
    let f_inv = f_inv.ok_or(Error::MissingInverse)?;
    if !f_inv.compose(f)?.is_identity() {
        return Err(Error::PreconditionViolated("supplied inverse does not invert f".into()));
    }
    let a = CremonaMap::from_linear(alpha);
    let a_inv = CremonaMap::from_linear(&alpha.proj_inv());
    let comm = a_inv.compose(&f_inv.compose(&a.compose(f)?)?)?;
    if !comm.is_fixed_point(p) || !comm.is_local_isomorphism(p) {
        return Err(Error::PreconditionViolated(
            "commutator must fix p and be a local isomorphism there".into(),
        ));
    }
    let m = move_point_to_origin(p);
    let moved = CremonaMap::from_linear(&m)
        .compose(&comm)?
        .compose(&CremonaMap::from_linear(&m.proj_inv()))?;
    build_family(&moved)
}
