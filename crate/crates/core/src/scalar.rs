//! Exact coefficient fields: the rationals, the Gaussian rationals and
//! prime fields, together with the field automorphisms acting on them.
//!
//! Arithmetic through the `std::ops` traits panics when the operands live
//! over different fields; the `checked_*` methods report
//! [`Error::FieldMismatch`] instead. Higher-level code validates fields once
//! at its entry points and then uses the operators.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient field of every object in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rational,
    GaussianRational,
    PrimeField(u64),
}

impl FieldSpec {
    /// Prime field of order `p`; rejects composite moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::PrimeField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::PrimeField(p) => *p,
            _ => 0,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldSpec::PrimeField(_))
    }

    /// Parse the CLI field flag: `Q`, `Qi` or `Fp:<prime>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "Q" => Ok(FieldSpec::Rational),
            "Qi" => Ok(FieldSpec::GaussianRational),
            other => {
                let p = other
                    .strip_prefix("Fp:")
                    .ok_or_else(|| Error::Parse(format!("unknown field `{other}`")))?;
                let p: u64 = p
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad modulus `{p}`")))?;
                FieldSpec::prime(p)
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::GaussianRational => write!(f, "Qi"),
            FieldSpec::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Gaussian(BigRational, BigRational),
    Residue { value: u64, modulus: u64 },
}

/// An element of one of the supported exact fields.
///
/// Rationals are kept in lowest terms with positive denominator (guaranteed
/// by `BigRational`); residues are kept in `[0, p)`. Equality is therefore
/// structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn reduce(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    u64::try_from(r).expect("residue fits in u64")
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn zero(field: FieldSpec) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: FieldSpec, n: i64) -> Self {
        Self::from_bigint(field, &BigInt::from(n))
    }

    pub fn from_bigint(field: FieldSpec, n: &BigInt) -> Self {
        match field {
            FieldSpec::Rational => Scalar(Repr::Rational(BigRational::from_integer(n.clone()))),
            FieldSpec::GaussianRational => Scalar(Repr::Gaussian(
                BigRational::from_integer(n.clone()),
                BigRational::zero(),
            )),
            FieldSpec::PrimeField(p) => Scalar(Repr::Residue {
                value: reduce(n, p),
                modulus: p,
            }),
        }
    }

    /// Embed a rational number. Over `F_p` the denominator must be invertible.
    pub fn from_rational(field: FieldSpec, r: &BigRational) -> Result<Self> {
        match field {
            FieldSpec::Rational => Ok(Scalar(Repr::Rational(r.clone()))),
            FieldSpec::GaussianRational => {
                Ok(Scalar(Repr::Gaussian(r.clone(), BigRational::zero())))
            }
            FieldSpec::PrimeField(_) => {
                let n = Self::from_bigint(field, r.numer());
                let d = Self::from_bigint(field, r.denom());
                n.checked_div(&d)
            }
        }
    }

    pub fn rational(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Scalar(Repr::Rational(BigRational::new(numer.into(), denom.into())))
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        Scalar(Repr::Gaussian(re, im))
    }

    /// `a + b i` with integer parts.
    pub fn gaussian_int(a: i64, b: i64) -> Self {
        Scalar(Repr::Gaussian(q(a), q(b)))
    }

    /// The imaginary unit of `Q(i)`.
    pub fn i() -> Self {
        Self::gaussian_int(0, 1)
    }

    pub fn residue(value: i64, p: u64) -> Self {
        Scalar(Repr::Residue {
            value: reduce(&BigInt::from(value), p),
            modulus: p,
        })
    }

    pub fn field(&self) -> FieldSpec {
        match &self.0 {
            Repr::Rational(_) => FieldSpec::Rational,
            Repr::Gaussian(..) => FieldSpec::GaussianRational,
            Repr::Residue { modulus, .. } => FieldSpec::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Rational(r) => r.is_zero(),
            Repr::Gaussian(a, b) => a.is_zero() && b.is_zero(),
            Repr::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Rational(r) => r.is_one(),
            Repr::Gaussian(a, b) => a.is_one() && b.is_zero(),
            Repr::Residue { value, .. } => *value == 1,
        }
    }

    /// The rational value, if the scalar lies in the prime subfield of a
    /// characteristic-zero field.
    pub fn as_rational(&self) -> Option<BigRational> {
        match &self.0 {
            Repr::Rational(r) => Some(r.clone()),
            Repr::Gaussian(a, b) if b.is_zero() => Some(a.clone()),
            _ => None,
        }
    }

    /// Integer value for rationals with denominator 1.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    /// Real and imaginary parts of a Gaussian rational.
    pub fn gaussian_parts(&self) -> Option<(&BigRational, &BigRational)> {
        match &self.0 {
            Repr::Gaussian(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn residue_value(&self) -> Option<u64> {
        match &self.0 {
            Repr::Residue { value, .. } => Some(*value),
            _ => None,
        }
    }

    /// Image in `F_q` for a large prime `q`, with `i` sent to `sqrt_m1`.
    /// `None` when a denominator vanishes mod `q`. Residues of `F_p` are
    /// returned unchanged (the caller works in `F_p` then).
    pub(crate) fn reduce_mod(&self, q: u64, sqrt_m1: u64) -> Option<u64> {
        fn rat(r: &BigRational, q: u64) -> Option<u64> {
            let qb = BigInt::from(q);
            let n = r.numer().mod_floor(&qb).to_u64()?;
            let d = r.denom().mod_floor(&qb).to_u64()?;
            if d == 0 {
                return None;
            }
            Some(crate::poly::modular::mul(n, crate::poly::modular::inv(d, q), q))
        }
        match &self.0 {
            Repr::Rational(r) => rat(r, q),
            Repr::Gaussian(a, b) => {
                let re = rat(a, q)?;
                let im = rat(b, q)?;
                Some((re + crate::poly::modular::mul(im, sqrt_m1, q)) % q)
            }
            Repr::Residue { value, .. } => Some(*value),
        }
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Rational(r) => Scalar(Repr::Rational(r.recip())),
            Repr::Gaussian(a, b) => {
                let norm = a * a + b * b;
                Scalar(Repr::Gaussian(a / &norm, -(b / &norm)))
            }
            Repr::Residue { value, modulus } => Scalar(Repr::Residue {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            }),
        })
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Scalar::one(self.field());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Complex conjugate; identity outside `Q(i)`.
    pub fn conj(&self) -> Self {
        match &self.0 {
            Repr::Gaussian(a, b) => Scalar(Repr::Gaussian(a.clone(), -b.clone())),
            _ => self.clone(),
        }
    }

    fn neg_ref(&self) -> Self {
        match &self.0 {
            Repr::Rational(r) => Scalar(Repr::Rational(-r.clone())),
            Repr::Gaussian(a, b) => Scalar(Repr::Gaussian(-a.clone(), -b.clone())),
            Repr::Residue { value, modulus } => Scalar(Repr::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            }),
        }
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a + b)),
            (Repr::Gaussian(a, b), Repr::Gaussian(c, d)) => Scalar(Repr::Gaussian(a + c, b + d)),
            (
                Repr::Residue { value: a, modulus },
                Repr::Residue { value: b, modulus: m2 },
            ) if modulus == m2 => Scalar(Repr::Residue {
                value: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            }),
            _ => panic!("scalar field mismatch"),
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a * b)),
            (Repr::Gaussian(a, b), Repr::Gaussian(c, d)) => {
                Scalar(Repr::Gaussian(a * c - b * d, a * d + b * c))
            }
            (
                Repr::Residue { value: a, modulus },
                Repr::Residue { value: b, modulus: m2 },
            ) if modulus == m2 => Scalar(Repr::Residue {
                value: mul_mod(*a, *b, *modulus),
                modulus: *modulus,
            }),
            _ => panic!("scalar field mismatch"),
        }
    }

    /// True when printing inside a product needs parentheses.
    pub(crate) fn is_compound(&self) -> bool {
        match &self.0 {
            Repr::Gaussian(a, b) => !a.is_zero() && !b.is_zero(),
            _ => false,
        }
    }

    /// True when the printed form starts with a minus sign.
    pub(crate) fn is_negative_printed(&self) -> bool {
        match &self.0 {
            Repr::Rational(r) => r.is_negative(),
            Repr::Gaussian(a, b) => {
                if a.is_zero() {
                    b.is_negative()
                } else {
                    a.is_negative()
                }
            }
            Repr::Residue { .. } => false,
        }
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

fn write_imaginary(f: &mut fmt::Formatter<'_>, b: &BigRational) -> fmt::Result {
    if b.is_one() {
        write!(f, "i")
    } else if (-b).is_one() {
        write!(f, "-i")
    } else {
        write_rational(f, b)?;
        write!(f, "*i")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(r) => write_rational(f, r),
            Repr::Gaussian(a, b) => {
                if b.is_zero() {
                    write_rational(f, a)
                } else if a.is_zero() {
                    write_imaginary(f, b)
                } else {
                    write_rational(f, a)?;
                    if b.is_negative() {
                        write!(f, "-")?;
                        write_imaginary(f, &-b)
                    } else {
                        write!(f, "+")?;
                        write_imaginary(f, b)
                    }
                }
            }
            Repr::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                #[allow(clippy::redundant_closure_call)]
                ($body)(self, rhs)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &Scalar, b: &Scalar| a.add_unchecked(b));
forward_binop!(Sub, sub, |a: &Scalar, b: &Scalar| a.add_unchecked(&b.neg_ref()));
forward_binop!(Mul, mul, |a: &Scalar, b: &Scalar| a.mul_unchecked(b));
forward_binop!(Div, div, |a: &Scalar, b: &Scalar| a
    .checked_div(b)
    .expect("scalar division"));

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

/// Arithmetic operation selector for [`scalar_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn scalar_arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => a.checked_div(b),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AutomorphismKind {
    Identity,
    Conjugation,
    /// `x -> x^(p^e)`; the identity on a prime field.
    FrobeniusPower(u32),
}

/// A field automorphism together with the field it acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldAutomorphism {
    field: FieldSpec,
    kind: AutomorphismKind,
}

impl FieldAutomorphism {
    pub fn new(field: FieldSpec, kind: AutomorphismKind) -> Result<Self> {
        match (kind, field) {
            (AutomorphismKind::Identity, _)
            | (AutomorphismKind::Conjugation, FieldSpec::GaussianRational)
            | (AutomorphismKind::FrobeniusPower(_), FieldSpec::PrimeField(_)) => {
                Ok(FieldAutomorphism { field, kind })
            }
            _ => Err(Error::UnsupportedAutomorphism),
        }
    }

    pub fn identity(field: FieldSpec) -> Self {
        FieldAutomorphism {
            field,
            kind: AutomorphismKind::Identity,
        }
    }

    pub fn conjugation() -> Self {
        FieldAutomorphism {
            field: FieldSpec::GaussianRational,
            kind: AutomorphismKind::Conjugation,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn kind(&self) -> AutomorphismKind {
        self.kind
    }

    pub fn apply(&self, a: &Scalar) -> Result<Scalar> {
        if a.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        Ok(match self.kind {
            AutomorphismKind::Conjugation => a.conj(),
            // x^(p^e) = x in F_p.
            AutomorphismKind::Identity | AutomorphismKind::FrobeniusPower(_) => a.clone(),
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        use AutomorphismKind::*;
        let kind = match (self.kind, other.kind) {
            (Identity, k) | (k, Identity) => k,
            (Conjugation, Conjugation) => Identity,
            (FrobeniusPower(a), FrobeniusPower(b)) => FrobeniusPower(a.wrapping_add(b)),
            _ => unreachable!("kinds validated against the field"),
        };
        Ok(FieldAutomorphism {
            field: self.field,
            kind,
        })
    }

    /// Equality as maps on the field (Frobenius powers on `F_p` are trivial).
    pub fn acts_trivially(&self) -> bool {
        !matches!(self.kind, AutomorphismKind::Conjugation)
    }
}

pub fn apply_field_automorphism(alpha: &FieldAutomorphism, a: &Scalar) -> Result<Scalar> {
    alpha.apply(a)
}
