use std::fmt;

use super::{gcd, Polynomial};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// A reduced fraction of polynomials with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    numerator: Polynomial,
    denominator: Polynomial,
}

impl RationalFunction {
    /// Reduce `numerator / denominator` to lowest terms.
    pub fn new(numerator: Polynomial, denominator: Polynomial) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if numerator.field() != denominator.field() {
            return Err(Error::FieldMismatch);
        }
        if numerator.is_zero() {
            return Ok(RationalFunction {
                denominator: Polynomial::one(numerator.field(), numerator.nvars()),
                numerator,
            });
        }
        let g = gcd(&numerator, &denominator)?;
        let (mut n, mut d) = if g.is_constant() {
            (numerator, denominator)
        } else {
            (
                numerator.div_exact(&g)?.expect("gcd divides numerator"),
                denominator.div_exact(&g)?.expect("gcd divides denominator"),
            )
        };
        let lc = d.leading_coefficient().expect("nonzero").clone();
        if !lc.is_one() {
            let inv = lc.inv()?;
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Ok(RationalFunction {
            numerator: n,
            denominator: d,
        })
    }

    /// Skip the gcd reduction; only for values that are evaluated and dropped.
    pub(crate) fn unreduced(numerator: Polynomial, denominator: Polynomial) -> Self {
        RationalFunction {
            numerator,
            denominator,
        }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction {
            denominator: Polynomial::one(p.field(), p.nvars()),
            numerator: p,
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn nvars(&self) -> usize {
        self.numerator.nvars()
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        let d = self.denominator.evaluate(point)?;
        if d.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        Ok(&self.numerator.evaluate(point)? / &d)
    }

    /// Partial derivative by the quotient rule.
    pub fn derivative(&self, var: usize) -> Result<RationalFunction> {
        let n = &self.numerator;
        let d = &self.denominator;
        let num = &(&n.derivative(var) * d) - &(n * &d.derivative(var));
        RationalFunction::new(num, d * d)
    }

    /// Partial derivatives at a point without forming the derivative
    /// fractions: `(n' d - n d') / d^2` with everything evaluated first.
    pub fn gradient_at(&self, point: &[Scalar]) -> Result<Vec<Scalar>> {
        let d = self.denominator.evaluate(point)?;
        if d.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        let n = self.numerator.evaluate(point)?;
        let d2 = &d * &d;
        (0..self.nvars())
            .map(|j| {
                let dn = self.numerator.derivative(j).evaluate(point)?;
                let dd = self.denominator.derivative(j).evaluate(point)?;
                Ok(&(&(&dn * &d) - &(&n * &dd)) / &d2)
            })
            .collect()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_constant() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / ({})", self.numerator, self.denominator)
        }
    }
}

/// Jacobian matrix of `fs` at `at`; row `i` holds the gradient of `fs[i]`.
pub fn jacobian(fs: &[RationalFunction], at: &[Scalar]) -> Result<Matrix> {
    let field = at
        .first()
        .map(Scalar::field)
        .or_else(|| fs.first().map(|f| f.numerator.field()))
        .ok_or(Error::ArityMismatch {
            expected: 1,
            got: 0,
        })?;
    let rows = fs
        .iter()
        .map(|f| f.gradient_at(at))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(field, rows)
}
