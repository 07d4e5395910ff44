//! Seeded random generators for the verification suites and benchmarks.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::affine::{compose_auto, PolyAuto};
use crate::cremona::{CremonaMap, ProjPoint};
use crate::deformation::move_point_to_origin;
use crate::linear::{ProjLinear, Transvection};
use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::scalar::{FieldSpec, Scalar};

/// A scalar of small height, possibly zero. Over `Q` the denominator is
/// at most 3.
pub fn scalar<R: Rng + ?Sized>(field: FieldSpec, height: i64, rng: &mut R) -> Scalar {
    match field {
        FieldSpec::Rational => Scalar::rational(rng.random_range(-height..=height), rng.random_range(1..=3)),
        FieldSpec::GaussianRational => {
            Scalar::gaussian_int(rng.random_range(-height..=height), rng.random_range(-height..=height))
        }
        FieldSpec::PrimeField(p) => Scalar::residue(rng.random_range(0..p) as i64, p),
    }
}

pub fn nonzero_scalar<R: Rng + ?Sized>(field: FieldSpec, height: i64, rng: &mut R) -> Scalar {
    loop {
        let s = scalar(field, height.max(1), rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Integer-valued scalar in `[-height, height]`.
pub fn small_int<R: Rng + ?Sized>(field: FieldSpec, height: i64, rng: &mut R) -> Scalar {
    Scalar::from_int(field, rng.random_range(-height..=height))
}

pub fn matrix<R: Rng + ?Sized>(field: FieldSpec, n: usize, height: i64, rng: &mut R) -> Matrix {
    let rows = (0..n)
        .map(|_| (0..n).map(|_| small_int(field, height, rng)).collect())
        .collect();
    Matrix::from_rows(field, rows).expect("square")
}

pub fn invertible_matrix<R: Rng + ?Sized>(field: FieldSpec, n: usize, height: i64, rng: &mut R) -> Matrix {
    loop {
        let m = matrix(field, n, height, rng);
        if m.determinant().is_ok_and(|d| !d.is_zero()) {
            return m;
        }
    }
}

pub fn proj_linear<R: Rng + ?Sized>(field: FieldSpec, dim: usize, rng: &mut R) -> ProjLinear {
    ProjLinear::new(invertible_matrix(field, dim + 1, 3, rng)).expect("invertible")
}

/// A projective linear map fixing `[1:0:…:0]`: first column `e0`.
pub fn linear_fixing_origin<R: Rng + ?Sized>(field: FieldSpec, dim: usize, rng: &mut R) -> ProjLinear {
    let block = invertible_matrix(field, dim, 3, rng);
    let mut m = Matrix::identity(field, dim + 1);
    for j in 1..=dim {
        m.set(0, j, small_int(field, 2, rng));
        for i in 1..=dim {
            m.set(i, j, block.get(i - 1, j - 1).clone());
        }
    }
    ProjLinear::new(m).expect("invertible")
}

pub fn transvection<R: Rng + ?Sized>(field: FieldSpec, n: usize, height: i64, rng: &mut R) -> Transvection {
    let i = rng.random_range(0..n);
    let j = (i + rng.random_range(1..n)) % n;
    Transvection::new(i, j, nonzero_int(field, height, rng)).expect("distinct indices")
}

fn nonzero_int<R: Rng + ?Sized>(field: FieldSpec, height: i64, rng: &mut R) -> Scalar {
    loop {
        let s = small_int(field, height.max(1), rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Up to `terms` random terms of total degree at most `max_deg`.
pub fn polynomial<R: Rng + ?Sized>(
    field: FieldSpec,
    nvars: usize,
    max_deg: u32,
    terms: usize,
    rng: &mut R,
) -> Polynomial {
    let ts = (0..terms).map(|_| {
        let deg = rng.random_range(0..=max_deg);
        (random_exponents(nvars, deg, rng), small_int(field, 4, rng))
    });
    Polynomial::from_terms(field, nvars, ts).expect("matching arity")
}

/// Up to `terms` random terms, all of total degree `deg`.
pub fn homogeneous<R: Rng + ?Sized>(field: FieldSpec, nvars: usize, deg: u32, terms: usize, rng: &mut R) -> Polynomial {
    let ts = (0..terms).map(|_| (random_exponents(nvars, deg, rng), small_int(field, 4, rng)));
    Polynomial::from_terms(field, nvars, ts).expect("matching arity")
}

fn random_exponents<R: Rng + ?Sized>(nvars: usize, deg: u32, rng: &mut R) -> Vec<u32> {
    let mut e = vec![0; nvars];
    for _ in 0..deg {
        e[rng.random_range(0..nvars)] += 1;
    }
    e
}

/// `x_i ↦ x_i + p` with `p` in the other variables, of degree in
/// `1..=max_deg`. With `fix_origin` the constant term of `p` is dropped.
pub fn triangular_auto<R: Rng + ?Sized>(
    field: FieldSpec,
    dim: usize,
    max_deg: u32,
    fix_origin: bool,
    rng: &mut R,
) -> PolyAuto {
    let i = rng.random_range(0..dim);
    let others: Vec<usize> = (0..dim).filter(|&j| j != i).collect();
    let mut p = Polynomial::zero(field, dim);
    if !others.is_empty() {
        for _ in 0..rng.random_range(1..=3) {
            let deg = rng.random_range(1..=max_deg.max(1));
            let mut e = vec![0; dim];
            for _ in 0..deg {
                e[*others.choose(rng).expect("nonempty")] += 1;
            }
            let term = Polynomial::from_terms(field, dim, [(e, nonzero_int(field, 3, rng))]).expect("arity");
            p = &p + &term;
        }
    }
    if !fix_origin {
        p = &p + &Polynomial::constant(small_int(field, 3, rng), dim);
    }
    PolyAuto::triangular(i, &p).expect("p avoids x_i")
}

/// `x ↦ M x + b`, with `b = 0` when `fix_origin`.
pub fn affine_auto<R: Rng + ?Sized>(field: FieldSpec, dim: usize, fix_origin: bool, rng: &mut R) -> PolyAuto {
    let m = invertible_matrix(field, dim, 2, rng);
    let b: Vec<Scalar> = (0..dim)
        .map(|_| if fix_origin { Scalar::zero(field) } else { small_int(field, 3, rng) })
        .collect();
    PolyAuto::affine(&m, &b).expect("invertible")
}

/// Alternating affine and triangular factors whose degree product stays
/// at most `max_deg`.
pub fn tame_auto<R: Rng + ?Sized>(
    field: FieldSpec,
    dim: usize,
    max_deg: u32,
    fix_origin: bool,
    rng: &mut R,
) -> PolyAuto {
    let mut f = affine_auto(field, dim, fix_origin, rng);
    let mut budget = max_deg.max(1);
    for _ in 0..rng.random_range(0..3) {
        if budget < 2 {
            break;
        }
        let d = rng.random_range(2..=budget.min(3));
        budget /= d;
        let t = triangular_auto(field, dim, d, fix_origin, rng);
        let a = affine_auto(field, dim, fix_origin, rng);
        f = compose_auto(&compose_auto(&a, &t).expect("shape"), &f).expect("shape");
    }
    f
}

/// `[x1⋯xd : x0 x2⋯xd : … : x0⋯x_{d-1}]`, the standard involution.
pub fn involution(field: FieldSpec, dim: usize) -> CremonaMap {
    CremonaMap::standard_involution(field, dim)
}

/// The standard involution conjugated so that its fixed point
/// `[1:…:1]` moves to `[1:0:…:0]`.
pub fn involution_at_origin(field: FieldSpec, dim: usize) -> CremonaMap {
    let ones = ProjPoint::new(vec![Scalar::one(field); dim + 1]).expect("nonzero");
    let a = move_point_to_origin(&ones);
    let am = CremonaMap::from_linear(&a);
    let ainv = CremonaMap::from_linear(&a.proj_inv());
    am.compose(&involution(field, dim))
        .and_then(|m| m.compose(&ainv))
        .expect("same shape")
}

/// A random Cremona map `L1 ∘ g ∘ L2` with `g` the involution, a tame
/// automorphism or the identity. Over a finite field, where a small
/// characteristic leaves gcds to the slow subresultant path, the tame factor
/// has degree at most 2 and the involution is only used for `dim <= 2`;
/// otherwise the bound is 3.
pub fn cremona_map<R: Rng + ?Sized>(field: FieldSpec, dim: usize, rng: &mut R) -> CremonaMap {
    let l1 = CremonaMap::from_linear(&proj_linear(field, dim, rng));
    let l2 = CremonaMap::from_linear(&proj_linear(field, dim, rng));
    let g = match rng.random_range(0..3) {
        0 if !field.is_finite() || dim <= 2 => involution(field, dim),
        0 | 1 => tame_auto(field, dim, if field.is_finite() { 2 } else { 3 }, false, rng)
            .closure()
            .expect("nonzero"),
        _ => CremonaMap::identity(field, dim),
    };
    l1.compose(&g).and_then(|m| m.compose(&l2)).expect("same shape")
}

/// A random point with small integer coordinates.
pub fn point<R: Rng + ?Sized>(field: FieldSpec, dim: usize, rng: &mut R) -> ProjPoint {
    loop {
        let coords = (0..=dim).map(|_| small_int(field, 3, rng)).collect();
        if let Ok(p) = ProjPoint::new(coords) {
            return p;
        }
    }
}

/// A random permutation of `0..n`.
pub fn permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}
