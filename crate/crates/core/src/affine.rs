//! Polynomial automorphisms of affine space with a stored, verified inverse.
//!
//! Affine coordinates are printed as `x1..xd` and indexed `0..d` in code.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::cremona::CremonaMap;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::parse::parse_affine_map;
use crate::poly::Polynomial;
use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Clone)]
pub struct PolyAuto {
    field: FieldSpec,
    dim: usize,
    forward: Vec<Polynomial>,
    inverse: Vec<Polynomial>,
}

impl PartialEq for PolyAuto {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.forward == other.forward
    }
}

impl Eq for PolyAuto {}

fn substitute_all(outer: &[Polynomial], inner: &[Polynomial]) -> Result<Vec<Polynomial>> {
    outer.iter().map(|p| p.substitute(inner)).collect()
}

fn identity_components(field: FieldSpec, dim: usize) -> Vec<Polynomial> {
    (0..dim).map(|i| Polynomial::var(field, dim, i)).collect()
}

impl PolyAuto {
    /// Build from both directions; fails unless they compose to the
    /// identity on both sides.
    pub fn make_auto(forward: Vec<Polynomial>, inverse: Vec<Polynomial>) -> Result<Self> {
        let dim = forward.len();
        if dim == 0 {
            return Err(Error::DimMismatch { expected: 1, got: 0 });
        }
        if inverse.len() != dim {
            return Err(Error::DimMismatch {
                expected: dim,
                got: inverse.len(),
            });
        }
        let field = forward[0].field();
        for p in forward.iter().chain(&inverse) {
            if p.field() != field {
                return Err(Error::FieldMismatch);
            }
            if p.nvars() != dim {
                return Err(Error::ArityMismatch {
                    expected: dim,
                    got: p.nvars(),
                });
            }
        }
        let id = identity_components(field, dim);
        if substitute_all(&forward, &inverse)? != id || substitute_all(&inverse, &forward)? != id {
            return Err(Error::InverseCheckFailed);
        }
        Ok(PolyAuto {
            field,
            dim,
            forward,
            inverse,
        })
    }

    pub fn identity(field: FieldSpec, dim: usize) -> Self {
        let id = identity_components(field, dim);
        PolyAuto {
            field,
            dim,
            forward: id.clone(),
            inverse: id,
        }
    }

    /// `x ↦ M x`.
    pub fn linear(m: &Matrix) -> Result<Self> {
        let zero = vec![Scalar::zero(m.field()); m.nrows()];
        Self::affine(m, &zero)
    }

    /// `x ↦ M x + b`.
    pub fn affine(m: &Matrix, b: &[Scalar]) -> Result<Self> {
        let field = m.field();
        let d = m.nrows();
        if !m.is_square() || b.len() != d {
            return Err(Error::DimMismatch {
                expected: d,
                got: if m.is_square() { b.len() } else { m.ncols() },
            });
        }
        let m_inv = m.inverse().map_err(|_| Error::SingularLinearPart)?;
        let minus_b: Vec<Scalar> = b.iter().map(|v| -v).collect();
        let shift = m_inv.mul_vec(&minus_b)?;
        let build = |m: &Matrix, c: &[Scalar]| -> Vec<Polynomial> {
            (0..d)
                .map(|i| {
                    (0..d).fold(Polynomial::constant(c[i].clone(), d), |acc, j| {
                        &acc + &Polynomial::var(field, d, j).scale(m.get(i, j))
                    })
                })
                .collect()
        };
        Self::make_auto(build(m, b), build(&m_inv, &shift))
    }

    pub fn translation(b: &[Scalar]) -> Result<Self> {
        let field = b.first().ok_or(Error::DimMismatch { expected: 1, got: 0 })?.field();
        Self::affine(&Matrix::identity(field, b.len()), b)
    }

    /// `x_i ↦ t_i x_i`.
    pub fn torus(diag: &[Scalar]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::DimMismatch { expected: 1, got: 0 });
        }
        if diag.iter().any(Scalar::is_zero) {
            return Err(Error::SingularLinearPart);
        }
        Self::linear(&Matrix::diagonal(diag))
    }

    /// Component `i` is `x_{perm[i]}`.
    pub fn permutation(field: FieldSpec, perm: &[usize]) -> Result<Self> {
        let d = perm.len();
        let mut seen = vec![false; d];
        for &j in perm {
            if j >= d || std::mem::replace(&mut seen[j], true) {
                return Err(Error::PreconditionViolated("not a permutation".into()));
            }
        }
        let mut m = Matrix::zeros(field, d, d);
        for (i, &j) in perm.iter().enumerate() {
            m.set(i, j, Scalar::one(field));
        }
        Self::linear(&m)
    }

    /// The elementary map `x_i ↦ x_i + p`, where `p` does not involve `x_i`.
    pub fn triangular(i: usize, p: &Polynomial) -> Result<Self> {
        let d = p.nvars();
        if i >= d {
            return Err(Error::DimMismatch { expected: d, got: i + 1 });
        }
        if p.degree_in(i).is_some_and(|e| e > 0) {
            return Err(Error::PreconditionViolated(format!("x{} must not occur in p", i + 1)));
        }
        let mut fwd = identity_components(p.field(), d);
        let mut inv = fwd.clone();
        fwd[i] = &fwd[i] + p;
        inv[i] = &inv[i] - p;
        Self::make_auto(fwd, inv)
    }

    pub fn parse(field: FieldSpec, s: &str) -> Result<Self> {
        let (_, fwd, inv) = parse_affine_map(field, s)?;
        Self::make_auto(fwd, inv)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn forward(&self) -> &[Polynomial] {
        &self.forward
    }

    pub fn inverse(&self) -> &[Polynomial] {
        &self.inverse
    }

    /// The inverse automorphism; no recomputation needed.
    pub fn inv(&self) -> PolyAuto {
        PolyAuto {
            field: self.field,
            dim: self.dim,
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    pub fn degree(&self) -> u32 {
        degree_auto(self)
    }

    pub fn is_identity(&self) -> bool {
        self.forward == identity_components(self.field, self.dim)
    }

    /// Every component is `c x_i`, i.e. the map lies in the torus.
    pub fn is_diagonal_linear(&self) -> bool {
        self.forward
            .iter()
            .enumerate()
            .all(|(i, p)| p.num_terms() == 1 && p.degree_in(i) == Some(1) && p.total_degree() == Some(1))
    }

    /// Permutation composed with a torus element.
    pub fn is_monomial(&self) -> bool {
        let mut seen = vec![false; self.dim];
        self.forward.iter().all(|p| {
            p.num_terms() == 1
                && p.total_degree() == Some(1)
                && (0..self.dim)
                    .find(|&j| p.degree_in(j) == Some(1))
                    .is_some_and(|j| !std::mem::replace(&mut seen[j], true))
        })
    }

    pub fn apply(&self, point: &[Scalar]) -> Result<Vec<Scalar>> {
        self.forward.iter().map(|p| p.evaluate(point)).collect()
    }

    /// The birational map of `P^d` extending this one on the chart
    /// `x0 ≠ 0`, with affine `x_i` read as `x_i / x0`.
    pub fn closure(&self) -> Result<CremonaMap> {
        let deg = self.degree();
        let mut comps = vec![Polynomial::var(self.field, self.dim + 1, 0).pow(deg)];
        for p in &self.forward {
            comps.push(p.homogenize(deg));
        }
        CremonaMap::make_map(comps)
    }
}

impl fmt::Display for PolyAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |ps: &[Polynomial]| {
            ps.iter()
                .map(|p| p.display_with_offset(1).to_string())
                .collect::<Vec<_>>()
                .join("; ")
        };
        write!(f, "A^{}: ({}) inv ({})", self.dim, list(&self.forward), list(&self.inverse))
    }
}

/// `f ∘ g`, with inverse `g⁻¹ ∘ f⁻¹`.
pub fn compose_auto(f: &PolyAuto, g: &PolyAuto) -> Result<PolyAuto> {
    if f.field != g.field {
        return Err(Error::FieldMismatch);
    }
    if f.dim != g.dim {
        return Err(Error::DimMismatch {
            expected: f.dim,
            got: g.dim,
        });
    }
    Ok(PolyAuto {
        field: f.field,
        dim: f.dim,
        forward: substitute_all(&f.forward, &g.forward)?,
        inverse: substitute_all(&g.inverse, &f.inverse)?,
    })
}

pub fn degree_auto(f: &PolyAuto) -> u32 {
    f.forward
        .iter()
        .filter_map(Polynomial::total_degree)
        .max()
        .unwrap_or(0)
}

/// Element-level test that `g` normalizes the torus: conjugates of random
/// torus elements by `g` must be diagonal. Entries are pairwise distinct
/// whenever the field has enough nonzero elements. Monomial maps are
/// accepted without sampling.
pub fn normalizes_torus<R: Rng + ?Sized>(g: &PolyAuto, trials: usize, rng: &mut R) -> bool {
    if g.is_monomial() {
        return true;
    }
    let ginv = g.inv();
    for _ in 0..trials {
        let diag = distinct_nonzero(g.field, g.dim, rng);
        let t = PolyAuto::torus(&diag).expect("nonzero entries");
        let conj = compose_auto(&compose_auto(g, &t).expect("same shape"), &ginv).expect("same shape");
        if !conj.is_diagonal_linear() {
            return false;
        }
    }
    true
}

fn distinct_nonzero<R: Rng + ?Sized>(field: FieldSpec, n: usize, rng: &mut R) -> Vec<Scalar> {
    let available = match field {
        FieldSpec::PrimeField(p) => (p - 1) as usize,
        _ => usize::MAX,
    };
    let mut out: Vec<Scalar> = Vec::with_capacity(n);
    while out.len() < n {
        let s = crate::sample::nonzero_scalar(field, 30, rng);
        if out.len() >= available || !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// `g ∘ s = s ∘ g` for every `s` in `set`.
pub fn centralizes(g: &PolyAuto, set: &[PolyAuto]) -> bool {
    set.iter().all(|s| match (compose_auto(g, s), compose_auto(s, g)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub parameter: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineLemmaReport {
    pub field: String,
    pub dim: usize,
    pub checks: Vec<IdentityCheck>,
}

impl AffineLemmaReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// The identities used for translations `f = (x1 + a, x2, …)`: with
/// `t = (2 x1, x2, …)` and `h = (x1 + x2, x2, …)`, check `t f t⁻¹ = f²`
/// (characteristic not 2), `f h = h f`, that `f` commutes with the
/// embedded `GL_{d-1}` samples, and `f² = id` in characteristic 2.
pub fn affine_lemma_suite(field: FieldSpec, dim: usize, params: &[Scalar]) -> Result<AffineLemmaReport> {
    if dim < 2 {
        return Err(Error::PreconditionViolated("affine lemma needs d >= 2".into()));
    }
    let one = Scalar::one(field);
    let two = Scalar::from_int(field, 2);
    let x = |i| Polynomial::var(field, dim, i);
    let h = PolyAuto::triangular(0, &x(1))?;
    let gl_samples = gl_block_samples(field, dim)?;
    let mut checks = Vec::new();
    for a in params {
        if a.field() != field {
            return Err(Error::FieldMismatch);
        }
        let mut shift = vec![Scalar::zero(field); dim];
        shift[0] = a.clone();
        let f = PolyAuto::translation(&shift)?;
        let f2 = compose_auto(&f, &f)?;
        let mut record = |identity, passed| {
            checks.push(IdentityCheck {
                identity,
                parameter: a.to_string(),
                passed,
            })
        };
        if field.characteristic() == 2 {
            record("f^2 = id", f2.is_identity());
        } else {
            let mut diag = vec![one.clone(); dim];
            diag[0] = two.clone();
            let t = PolyAuto::torus(&diag)?;
            let conj = compose_auto(&compose_auto(&t, &f)?, &t.inv())?;
            record("t f t^-1 = f^2", conj == f2);
        }
        record("f h = h f", centralizes(&f, std::slice::from_ref(&h)));
        record("f centralizes GL_{d-1}", centralizes(&f, &gl_samples));
    }
    Ok(AffineLemmaReport {
        field: field.to_string(),
        dim,
        checks,
    })
}

/// A few elements of `GL_{d-1}` acting on `x2..xd`.
fn gl_block_samples(field: FieldSpec, dim: usize) -> Result<Vec<PolyAuto>> {
    let mut scaled = Matrix::identity(field, dim);
    let mut shear = Matrix::identity(field, dim);
    let c = if field.characteristic() == 3 { 2 } else { 3 };
    for i in 1..dim {
        scaled.set(i, i, Scalar::from_int(field, c));
        if i + 1 < dim {
            shear.set(i, i + 1, Scalar::one(field));
        }
    }
    if dim == 2 {
        shear.set(1, 1, Scalar::from_int(field, -1));
    }
    Ok(vec![PolyAuto::linear(&scaled)?, PolyAuto::linear(&shear)?])
}
