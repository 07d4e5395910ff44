//! Cocycles of `Gal(Q(i)/Q)` with values in `GL_d(Q(i))` and their
//! trivialization.
//!
//! A cocycle is determined by its value on complex conjugation `σ`; the
//! identity element always maps to the identity matrix. Coboundaries use
//! the convention `ν(σ) = a σ(a)⁻¹`, so [`trivialize`] returns `a` with
//! `a⁻¹ ν(σ) σ(a) = 1`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linear::twist_matrix;
use crate::matrix::Matrix;
use crate::parse::parse_matrix;
use crate::scalar::{FieldAutomorphism, FieldSpec, Scalar};

/// Random averaging attempts made by [`trivialize`] after `c = 1` fails.
pub const MAX_RETRIES: usize = 64;

const SEED: u64 = 0x6869_6c62_6572_7439;

fn conj(m: &Matrix) -> Matrix {
    twist_matrix(m, &FieldAutomorphism::conjugation()).expect("matrix over Q(i)")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    sigma: Matrix,
}

impl Cocycle {
    /// The cocycle with `ν(σ) = sigma`. The cocycle condition is not
    /// checked here; see [`validate_cocycle`].
    pub fn new(sigma: Matrix) -> Result<Self> {
        if sigma.field() != FieldSpec::GaussianRational {
            return Err(Error::FieldMismatch);
        }
        if !sigma.is_square() {
            return Err(Error::DimMismatch {
                expected: sigma.nrows(),
                got: sigma.ncols(),
            });
        }
        if sigma.determinant()?.is_zero() {
            return Err(Error::Singular);
        }
        Ok(Cocycle { sigma })
    }

    pub fn trivial(dim: usize) -> Self {
        Cocycle {
            sigma: Matrix::identity(FieldSpec::GaussianRational, dim),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(parse_matrix(FieldSpec::GaussianRational, s)?)
    }

    pub fn dim(&self) -> usize {
        self.sigma.nrows()
    }

    /// `ν(σ)`.
    pub fn sigma(&self) -> &Matrix {
        &self.sigma
    }

    /// `ν(g)` for `g` the identity (`false`) or conjugation (`true`).
    pub fn value(&self, conjugation: bool) -> Matrix {
        if conjugation {
            self.sigma.clone()
        } else {
            Matrix::identity(FieldSpec::GaussianRational, self.dim())
        }
    }
}

impl fmt::Display for Cocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.sigma.fmt(f)
    }
}

/// Checks `ν(gh) = ν(g) g(ν(h))` over all four pairs of group elements.
pub fn validate_cocycle(nu: &Cocycle) -> bool {
    let act = |g: bool, m: Matrix| if g { conj(&m) } else { m };
    [false, true].iter().all(|&g| {
        [false, true].iter().all(|&h| {
            let lhs = nu.value(g ^ h);
            nu.value(g)
                .checked_mul(&act(g, nu.value(h)))
                .is_ok_and(|rhs| rhs == lhs)
        })
    })
}

/// `ν(σ) = a σ(a)⁻¹`.
pub fn coboundary(a: &Matrix) -> Result<Cocycle> {
    if a.field() != FieldSpec::GaussianRational {
        return Err(Error::FieldMismatch);
    }
    let inv = conj(a).inverse().map_err(|_| Error::Singular)?;
    Cocycle::new(a.checked_mul(&inv)?)
}

/// `a⁻¹ ν(σ) σ(a) = 1`.
pub fn trivializes(nu: &Cocycle, a: &Matrix) -> bool {
    let Ok(a_inv) = a.inverse() else {
        return false;
    };
    a_inv
        .checked_mul(nu.sigma())
        .and_then(|m| m.checked_mul(&conj(a)))
        .is_ok_and(|m| m.is_identity())
}

/// Averaging witness `a = c + ν(σ) σ(c)`. Tries `c = 1` first, then up to
/// [`MAX_RETRIES`] seeded random Gaussian-integer matrices.
pub fn trivialize(nu: &Cocycle) -> Result<Matrix> {
    trivialize_with(nu, &mut ChaCha8Rng::seed_from_u64(SEED))
}

pub fn trivialize_with<R: Rng + ?Sized>(nu: &Cocycle, rng: &mut R) -> Result<Matrix> {
    if !validate_cocycle(nu) {
        return Err(Error::NotACocycle);
    }
    let n = nu.dim();
    let field = FieldSpec::GaussianRational;
    if nu.sigma().is_identity() {
        return Ok(Matrix::identity(field, n));
    }
    let average = |c: &Matrix| -> Option<Matrix> {
        let a = c.add(&nu.sigma().checked_mul(&conj(c)).ok()?);
        (!a.determinant().ok()?.is_zero()).then_some(a)
    };
    if let Some(a) = average(&Matrix::identity(field, n)) {
        return Ok(a);
    }
    for _ in 0..MAX_RETRIES {
        let entries = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| Scalar::gaussian_int(rng.random_range(-3..=3), rng.random_range(-3..=3)))
                    .collect()
            })
            .collect();
        let c = Matrix::from_rows(field, entries)?;
        if let Some(a) = average(&c) {
            return Ok(a);
        }
    }
    Err(Error::PreconditionViolated(format!(
        "no invertible average after {MAX_RETRIES} retries"
    )))
}

/// Result of descending a linear map to `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Descent {
    /// `μ(σ) = g_σ⁻¹` where `σ(f) = g_σ f`.
    pub cocycle: Cocycle,
    /// Trivializes `cocycle`.
    pub a: Matrix,
    /// `a⁻¹ f`, fixed by conjugation.
    pub rational: Matrix,
}

/// For invertible `f` over `Q(i)`, set `g_σ = σ(f) f⁻¹`, trivialize
/// `μ(σ) = g_σ⁻¹` and return `a⁻¹ f`, which has rational entries.
pub fn descend(f: &Matrix) -> Result<Descent> {
    if f.field() != FieldSpec::GaussianRational {
        return Err(Error::FieldMismatch);
    }
    let f_inv = f.inverse().map_err(|_| Error::Singular)?;
    let g = conj(f).checked_mul(&f_inv)?;
    let cocycle = Cocycle::new(g.inverse().map_err(|_| Error::Singular)?)?;
    let a = trivialize(&cocycle)?;
    let rational = a.inverse()?.checked_mul(f)?;
    Ok(Descent { cocycle, a, rational })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    const QI: FieldSpec = FieldSpec::GaussianRational;

    fn one_by_one(s: Scalar) -> Matrix {
        Matrix::from_rows(QI, vec![vec![s]]).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(validate_cocycle(&Cocycle::new(one_by_one(Scalar::i())).unwrap()));
        assert!(validate_cocycle(&Cocycle::trivial(3)));
        assert!(!validate_cocycle(&Cocycle::new(one_by_one(Scalar::gaussian_int(2, 0))).unwrap()));
        assert_eq!(Cocycle::new(one_by_one(Scalar::zero(QI))), Err(Error::Singular));
        assert_eq!(
            Cocycle::new(Matrix::identity(FieldSpec::Rational, 2)),
            Err(Error::FieldMismatch)
        );
    }

    #[test]
    fn coboundary_examples() {
        assert!(coboundary(&Matrix::identity(QI, 2)).unwrap().sigma().is_identity());
        let nu = coboundary(&one_by_one(Scalar::gaussian_int(1, 1))).unwrap();
        assert_eq!(nu.sigma(), &one_by_one(Scalar::i()));
        assert_eq!(
            coboundary(&Matrix::from_rows(QI, vec![vec![Scalar::one(QI), Scalar::i()]; 2]).unwrap()),
            Err(Error::Singular)
        );
    }

    #[test]
    fn trivialize_examples() {
        let nu = Cocycle::new(one_by_one(Scalar::i())).unwrap();
        let a = trivialize(&nu).unwrap();
        assert_eq!(a, one_by_one(Scalar::gaussian_int(1, 1)));
        assert!(trivializes(&nu, &a));
        assert!(trivialize(&Cocycle::trivial(2)).unwrap().is_identity());
        let bad = Cocycle::new(one_by_one(Scalar::gaussian_int(2, 0))).unwrap();
        assert_eq!(trivialize(&bad), Err(Error::NotACocycle));
        // c = 1 averages to 0 here, forcing a random retry
        let nu = Cocycle::new(one_by_one(Scalar::from_int(QI, -1))).unwrap();
        let a = trivialize(&nu).unwrap();
        assert!(trivializes(&nu, &a));
        assert!(num_traits::Zero::is_zero(a.get(0, 0).gaussian_parts().unwrap().0));
    }

    #[test]
    fn descent_example() {
        let f = Matrix::from_rows(
            QI,
            vec![
                vec![Scalar::gaussian_int(1, 2), Scalar::i()],
                vec![Scalar::one(QI), Scalar::gaussian_int(0, -3)],
            ],
        )
        .unwrap();
        let d = descend(&f).unwrap();
        assert!(validate_cocycle(&d.cocycle));
        assert!(trivializes(&d.cocycle, &d.a));
        assert_eq!(conj(&d.rational), d.rational);
        assert_eq!(d.a.checked_mul(&d.rational).unwrap(), f);
    }

    fn arb_invertible(n: usize) -> impl Strategy<Value = Matrix> {
        prop::collection::vec((-4i64..5, -4i64..5), n * n).prop_filter_map("singular", move |v| {
            let rows = v
                .chunks(n)
                .map(|r| r.iter().map(|&(a, b)| Scalar::gaussian_int(a, b)).collect())
                .collect();
            let m = Matrix::from_rows(QI, rows).ok()?;
            (!m.determinant().ok()?.is_zero()).then_some(m)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn coboundaries_trivialize(a in (1usize..4).prop_flat_map(arb_invertible)) {
            let nu = coboundary(&a).unwrap();
            prop_assert!(validate_cocycle(&nu));
            let b = trivialize(&nu).unwrap();
            prop_assert!(!b.determinant().unwrap().is_zero());
            prop_assert!(trivializes(&nu, &b));
        }

        #[test]
        fn descents_are_rational(f in (1usize..4).prop_flat_map(arb_invertible)) {
            let d = descend(&f).unwrap();
            prop_assert!(validate_cocycle(&d.cocycle));
            prop_assert_eq!(conj(&d.rational), d.rational);
        }

        #[test]
        fn text_round_trip(a in (1usize..4).prop_flat_map(arb_invertible)) {
            let nu = coboundary(&a).unwrap();
            prop_assert_eq!(Cocycle::parse(&nu.to_string()).unwrap(), nu);
        }
    }
}
