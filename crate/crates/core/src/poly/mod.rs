//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose ordering is graded
//! reverse lexicographic. The map never stores a zero coefficient, so two
//! polynomials are equal exactly when their term maps are equal.

mod brown;
mod gcd;
pub(crate) mod modular;
mod rational;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};

pub use gcd::{gcd, gcd_many, lcm};
pub use rational::{jacobian, RationalFunction};

/// Exponent vector. Ordered by total degree, ties broken reverse
/// lexicographically (the monomial with the smaller exponent in the last
/// differing variable is larger).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    /// Componentwise minimum, the gcd of two monomials.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` variables over an exact field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: FieldSpec,
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(field: FieldSpec, nvars: usize) -> Self {
        Polynomial {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: FieldSpec, nvars: usize) -> Self {
        Self::constant(Scalar::one(field), nvars)
    }

    pub fn constant(c: Scalar, nvars: usize) -> Self {
        let mut p = Self::zero(c.field(), nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    /// The variable `x_i` (zero-based).
    pub fn var(field: FieldSpec, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        Self::monomial(Monomial::var(nvars, i), Scalar::one(field))
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(c.field(), m.nvars());
        p.add_term(m, c);
        p
    }

    /// Build from `(exponents, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I>(field: FieldSpec, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Scalar)>,
    {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::ArityMismatch {
                    expected: nvars,
                    got: e.len(),
                });
            }
            if c.field() != field {
                return Err(Error::FieldMismatch);
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (descending graded reverse lexicographic) order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&Scalar> {
        self.leading_term().map(|(_, c)| c)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    /// Degree in one variable; `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// The constant term.
    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Monomial::one(self.nvars))
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Single term, or zero.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() <= 1
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.field, self.nvars);
        }
        Polynomial {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.field, self.nvars);
        }
        // Multiplying by a monomial preserves the term order.
        Polynomial {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Polynomial {
        let mut acc = Self::one(self.field, self.nvars);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divide so that the leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coefficient() {
            Some(c) if !c.is_one() => self.scale(&c.inv().expect("nonzero leading coefficient")),
            _ => self.clone(),
        }
    }

    pub fn map_coefficients<F>(&self, mut f: F) -> Polynomial
    where
        F: FnMut(&Scalar) -> Scalar,
    {
        let mut p = Self::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c));
        }
        p
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        if point.iter().any(|s| s.field() != self.field) {
            return Err(Error::FieldMismatch);
        }
        let mut acc = Scalar::zero(self.field);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Substitute `images[i]` for `x_i`. The result lives in the ring of the
    /// images.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: images.len(),
            });
        }
        let target_nvars = match images.first() {
            Some(p) => p.nvars,
            None => 0,
        };
        for p in images {
            if p.field != self.field {
                return Err(Error::FieldMismatch);
            }
            if p.nvars != target_nvars {
                return Err(Error::ArityMismatch {
                    expected: target_nvars,
                    got: p.nvars,
                });
            }
        }
        let terms: Vec<(&[u32], &Scalar)> = self.terms.iter().map(|(m, c)| (&m.0[..], c)).collect();
        Ok(horner(&terms, 0, images, self.field, target_nvars))
    }

    /// Split into homogeneous parts keyed by degree; zero parts are absent.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, Polynomial> {
        let mut out: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| Self::zero(self.field, self.nvars))
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// Homogeneous part of degree `d` (possibly zero).
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            field: self.field,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut p = Self::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            p.add_term(m2, c * &Scalar::from_int(self.field, e as i64));
        }
        p
    }

    /// Insert a new variable at position `at` (all exponents zero there).
    pub fn insert_var(&self, at: usize) -> Polynomial {
        Polynomial {
            field: self.field,
            nvars: self.nvars + 1,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.insert(at, 0);
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Homogenize to degree `degree` using a new variable inserted at index 0.
    /// Requires `degree >= total_degree()`.
    pub fn homogenize(&self, degree: u32) -> Polynomial {
        let mut p = Self::zero(self.field, self.nvars + 1);
        for (m, c) in &self.terms {
            let d = m.degree();
            assert!(d <= degree, "homogenization degree too small");
            let mut e = Vec::with_capacity(self.nvars + 1);
            e.push(degree - d);
            e.extend_from_slice(&m.0);
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    /// Set `x_var = 1` and drop that variable.
    pub fn dehomogenize(&self, var: usize) -> Polynomial {
        let mut p = Self::zero(self.field, self.nvars - 1);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.remove(var);
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    /// Coefficients with respect to `var`: `self = sum_k out[k] * x_var^k`,
    /// each `out[k]` free of `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Polynomial> {
        let deg = match self.degree_in(var) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut out = vec![Self::zero(self.field, self.nvars); deg + 1];
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut e = m.clone();
            e.0[var] = 0;
            out[k].terms.insert(e, c.clone());
        }
        out
    }

    /// Multivariate division by a single divisor in the canonical order:
    /// `self = q * divisor + r` with no term of `r` divisible by the leading
    /// monomial of `divisor`. Since a single polynomial is a Gröbner basis of
    /// the ideal it generates, `r == 0` exactly when `divisor | self`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.check_compatible(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(Error::DivisionByZero)?;
        let lc_inv = lc.inv()?;
        let mut quotient = Self::zero(self.field, self.nvars);
        let mut remainder = Self::zero(self.field, self.nvars);
        let mut rest = self.clone();
        while let Some((m, c)) = rest.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            match m.checked_div(lm) {
                Some(qm) => {
                    let qc = &c * &lc_inv;
                    rest = &rest - &divisor.mul_monomial(&qm, &qc);
                    quotient.add_term(qm, qc);
                }
                None => {
                    rest.terms.remove(&m);
                    remainder.add_term(m, c);
                }
            }
        }
        Ok((quotient, remainder))
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Result<Option<Polynomial>> {
        let (q, r) = self.div_rem(divisor)?;
        Ok(if r.is_zero() { Some(q) } else { None })
    }

    /// Gcd of all exponent vectors, i.e. the largest monomial dividing `self`.
    pub fn monomial_content(&self) -> Option<Monomial> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, m| acc.gcd(m)))
    }

    /// Divide every term by a monomial that divides all of them.
    pub fn div_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            field: self.field,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.checked_div(m).expect("monomial divides every term"), c.clone()))
                .collect(),
        }
    }

    /// Display with variables numbered from `offset` (`x{offset}`, ...).
    pub fn display_with_offset(&self, offset: usize) -> impl fmt::Display + '_ {
        DisplayPoly { poly: self, offset }
    }
}

struct DisplayPoly<'a> {
    poly: &'a Polynomial,
    offset: usize,
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, offset: usize) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "x{}", i + offset)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for DisplayPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.poly;
        if p.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in p.terms().enumerate() {
            // Pull the sign out of non-compound coefficients.
            let negative = !c.is_compound() && c.is_negative_printed();
            let abs = if negative { -c } else { c.clone() };
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.degree() == 0 {
                if abs.is_compound() {
                    write!(f, "({abs})")?;
                } else {
                    write!(f, "{abs}")?;
                }
                continue;
            }
            if !abs.is_one() {
                if abs.is_compound() {
                    write!(f, "({abs})*")?;
                } else {
                    write!(f, "{abs}*")?;
                }
            }
            write_monomial(f, m, self.offset)?;
        }
        Ok(())
    }
}

/// `Σ c·Π images[j]^e_j` over `terms`, nested Horner style in `x_var`,
/// `x_{var+1}`, ... so that large products are shared between terms.
fn horner(terms: &[(&[u32], &Scalar)], var: usize, images: &[Polynomial], field: FieldSpec, nvars: usize) -> Polynomial {
    if var == images.len() {
        let c = terms.iter().fold(Scalar::zero(field), |acc, (_, c)| &acc + *c);
        return Polynomial::constant(c, nvars);
    }
    let mut groups: BTreeMap<u32, Vec<(&[u32], &Scalar)>> = BTreeMap::new();
    for &(e, c) in terms {
        groups.entry(e[var]).or_default().push((e, c));
    }
    let mut acc = Polynomial::zero(field, nvars);
    let mut prev: Option<u32> = None;
    for (&e, group) in groups.iter().rev() {
        if let Some(p) = prev {
            acc = &acc * &images[var].pow(p - e);
        }
        acc = &acc + &horner(group, var + 1, images, field, nvars);
        prev = Some(e);
    }
    if let Some(p) = prev.filter(|&p| p > 0) {
        acc = &acc * &images[var].pow(p);
    }
    acc
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_with_offset(0).fmt(f)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

/// Ring operation selector for [`poly_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(a: &Polynomial, b: &Polynomial, op: PolyOp) -> Result<Polynomial> {
    match op {
        PolyOp::Add => a.checked_add(b),
        PolyOp::Sub => a.checked_sub(b),
        PolyOp::Mul => a.checked_mul(b),
    }
}

#[cfg(test)]
mod tests;
