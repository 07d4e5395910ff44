//! Modular fast paths for gcds: coprimality certificates from images on a
//! line, and multi-prime gcd reconstruction over `Q` and `Q(i)`.
//!
//! For `a = g·h` with `g` nonconstant, restricting to a line `x = u + t·v`
//! and reducing mod a prime gives `a(t) = g(t)·h(t)`. When `a(t)` keeps the
//! full total degree of `a`, so does `g(t)`, hence `g(t)` is a nonconstant
//! common divisor of the images. A constant image gcd therefore proves
//! `gcd(a, b) = 1`. Any other outcome is inconclusive.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Monomial, Polynomial};
use crate::scalar::{FieldSpec, Scalar};

/// NTT-friendly prime with `q ≡ 1 (mod 4)`, so `-1` has a square root.
const Q: u64 = 998_244_353;

pub(crate) fn mul(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub(crate) fn pow(mut a: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, q);
        }
        a = mul(a, a, q);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue modulo the prime `q`.
pub(crate) fn inv(a: u64, q: u64) -> u64 {
    pow(a, q - 2, q)
}

fn trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn poly_mul(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul(x, y, q)) % q;
        }
    }
    out
}

fn poly_rem(mut a: Vec<u64>, b: &[u64], q: u64) -> Vec<u64> {
    let lead_inv = inv(*b.last().expect("nonzero divisor"), q);
    while a.len() >= b.len() {
        let c = mul(*a.last().expect("nonempty"), lead_inv, q);
        let shift = a.len() - b.len();
        for (j, &y) in b.iter().enumerate() {
            a[shift + j] = (a[shift + j] + q - mul(c, y, q)) % q;
        }
        trim(&mut a);
    }
    a
}

/// Degree of the univariate gcd over `F_q`.
fn gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>, q: u64) -> usize {
    while !b.is_empty() {
        let r = poly_rem(a, &b, q);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

/// Image of `p` on the line `x_k = u_k + t·v_k`, coefficients in `F_q`.
fn restrict(p: &Polynomial, u: &[u64], v: &[u64], q: u64, sqrt_m1: u64) -> Option<Vec<u64>> {
    let n = p.nvars();
    let deg = p.total_degree()? as usize;
    // powers[k][e] = (u_k + t v_k)^e
    let mut powers: Vec<Vec<Vec<u64>>> = Vec::with_capacity(n);
    for k in 0..n {
        let lin = vec![u[k], v[k]];
        let mut pk = vec![vec![1u64]];
        for e in 1..=p.degree_in(k).unwrap_or(0) as usize {
            let next = poly_mul(&pk[e - 1], &lin, q);
            pk.push(next);
        }
        powers.push(pk);
    }
    let mut out = vec![0u64; deg + 1];
    for (m, c) in p.terms() {
        let c = c.reduce_mod(q, sqrt_m1)?;
        let mut term = vec![c];
        for (k, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                term = poly_mul(&term, &powers[k][e as usize], q);
            }
        }
        for (i, x) in term.into_iter().enumerate() {
            out[i] = (out[i] + x) % q;
        }
    }
    trim(&mut out);
    Some(out)
}

/// `true` only when `gcd(a, b)` is provably a unit.
pub(crate) fn certainly_coprime(a: &Polynomial, b: &Polynomial) -> bool {
    let (q, sqrt_m1) = match a.field() {
        FieldSpec::PrimeField(p) => (p, 0),
        // 3 generates F_Q^*, so 3^((Q-1)/4) squares to -1.
        _ => (Q, pow(3, (Q - 1) / 4, Q)),
    };
    let (Some(da), Some(db)) = (a.total_degree(), b.total_degree()) else {
        return false;
    };
    let n = a.nvars();
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = || {
        state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
        (state >> 33) % q
    };
    // Over a small field unrelated images share a factor with probability
    // about 1/q, so several lines are tried before giving up.
    let finite = a.field().is_finite();
    for _ in 0..if finite { 24 } else { 2 } {
        let u: Vec<u64> = (0..n).map(|_| next()).collect();
        let v: Vec<u64> = (0..n).map(|_| next()).collect();
        let (Some(ra), Some(rb)) = (restrict(a, &u, &v, q, sqrt_m1), restrict(b, &u, &v, q, sqrt_m1)) else {
            return false;
        };
        if ra.len() != da as usize + 1 || rb.len() != db as usize + 1 {
            continue;
        }
        if gcd_degree(ra, rb, q) == 0 {
            return true;
        }
        if !finite {
            return false;
        }
    }
    false
}

/// Primes `q ≡ 1 (mod 4)` just below `2^31`, each with a square root of
/// `-1`, found once by trial division.
fn primes() -> &'static [(u64, u64)] {
    static PRIMES: std::sync::OnceLock<Vec<(u64, u64)>> = std::sync::OnceLock::new();
    PRIMES.get_or_init(|| {
        (1u64 << 20..1u64 << 31)
            .rev()
            .filter(|&n| n % 4 == 1 && crate::scalar::is_prime(n))
            .take(MAX_PRIMES)
            .map(|q| {
                let c = (2..q).find(|&c| pow(c, (q - 1) / 2, q) == q - 1).expect("non-residue");
                (q, pow(c, (q - 1) / 4, q))
            })
            .collect()
    })
}

const MAX_PRIMES: usize = 48;

/// Image in `F_q[x]` with `i ↦ s`, or `None` if a denominator or the
/// leading coefficient vanishes mod `q`.
fn image(p: &Polynomial, q: u64, s: u64) -> Option<Polynomial> {
    let field = FieldSpec::PrimeField(q);
    let lc = p.leading_coefficient()?.reduce_mod(q, s)?;
    if lc == 0 {
        return None;
    }
    let terms = p
        .terms()
        .map(|(m, c)| Some((m.exponents().to_vec(), Scalar::residue(c.reduce_mod(q, s)? as i64, q))))
        .collect::<Option<Vec<_>>>()?;
    Some(Polynomial::from_terms(field, p.nvars(), terms).expect("consistent arity"))
}

/// Symmetric rational reconstruction of `r mod m` with both parts below
/// `sqrt(m/2)`.
fn rational_reconstruction(r: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let qt = &r0 / &r1;
        let r2 = &r0 - &qt * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &qt * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Residues of the monic gcd image mod `q`, keyed by monomial and by
/// real (0) or imaginary (1) part. Over `Q(i)` both embeddings `i ↦ ±s`
/// are used: with images `u`, `v` the parts are `(u+v)/2` and `(u-v)/(2s)`.
/// `Ok(None)` signals a constant gcd; `Err(())` an unusable prime.
#[allow(clippy::type_complexity)]
fn gcd_image(
    a: &Polynomial,
    b: &Polynomial,
    q: u64,
    s: u64,
    gcd_p: &impl Fn(&Polynomial, &Polynomial) -> Polynomial,
) -> Result<Option<(Monomial, BTreeMap<(Monomial, u8), u64>)>, ()> {
    let one_image = |s: u64| -> Result<Option<Polynomial>, ()> {
        let (Some(ap), Some(bp)) = (image(a, q, s), image(b, q, s)) else {
            return Err(());
        };
        let g = gcd_p(&ap, &bp);
        Ok((!g.is_constant()).then_some(g))
    };
    let Some(g) = one_image(s)? else {
        return Ok(None);
    };
    let lm = g.leading_term().expect("nonzero").0.clone();
    let value = |c: &Scalar| c.residue_value().expect("residue");
    if a.field() != FieldSpec::GaussianRational {
        let res = g.terms().map(|(m, c)| ((m.clone(), 0), value(c))).collect();
        return Ok(Some((lm, res)));
    }
    let Some(h) = one_image(q - s)? else {
        return Ok(None);
    };
    if h.leading_term().expect("nonzero").0 != &lm {
        return Err(());
    }
    let (half, half_s) = (inv(2, q), inv(mul(2, s, q), q));
    let mut res = BTreeMap::new();
    let mut keys: Vec<&Monomial> = g.terms().chain(h.terms()).map(|(m, _)| m).collect();
    keys.sort();
    keys.dedup();
    for m in keys {
        let u = g.terms().find(|(k, _)| *k == m).map_or(0, |(_, c)| value(c));
        let v = h.terms().find(|(k, _)| *k == m).map_or(0, |(_, c)| value(c));
        res.insert((m.clone(), 0), mul((u + v) % q, half, q));
        res.insert((m.clone(), 1), mul((u + q - v) % q, half_s, q));
    }
    Ok(Some((lm, res)))
}

/// Leading monomial, residues per (monomial, real/imaginary part), modulus.
type Accumulated = (Monomial, BTreeMap<(Monomial, u8), BigInt>, BigInt);

/// Monic gcd over `Q` or `Q(i)` from images modulo several primes,
/// certified by exact division. `None` if the prime budget runs out.
pub(crate) fn modular_gcd(a: &Polynomial, b: &Polynomial, gcd_p: impl Fn(&Polynomial, &Polynomial) -> Polynomial) -> Option<Polynomial> {
    let field = a.field();
    debug_assert!(!field.is_finite());
    let n = a.nvars();
    let mut acc: Option<Accumulated> = None;
    let mut last: Option<Polynomial> = None;
    for &(q, s) in primes() {
        let (lm, residues) = match gcd_image(a, b, q, s, &gcd_p) {
            Err(()) => continue,
            Ok(None) => return Some(Polynomial::one(field, n)),
            Ok(Some(img)) => img,
        };
        let residues: BTreeMap<(Monomial, u8), BigInt> = residues.into_iter().map(|(k, v)| (k, BigInt::from(v))).collect();
        acc = match acc.take() {
            // A larger leading monomial means q is unlucky; a smaller one
            // means every earlier prime was.
            Some((alm, ares, am)) if alm == lm => {
                let qb = BigInt::from(q);
                let mut keys: Vec<(Monomial, u8)> = ares.keys().chain(residues.keys()).cloned().collect();
                keys.sort();
                keys.dedup();
                // x ≡ r1 (am), x ≡ r2 (q): x = r1 + am·((r2 - r1)·am^{-1} mod q)
                let am_inv = BigInt::from(inv((&am % &qb).to_u64().expect("small"), q));
                let combined = keys
                    .into_iter()
                    .map(|k| {
                        let r1 = ares.get(&k).cloned().unwrap_or_default();
                        let r2 = residues.get(&k).cloned().unwrap_or_default();
                        let t = ((r2 - &r1) * &am_inv).mod_floor(&qb);
                        (k, r1 + &am * t)
                    })
                    .collect();
                Some((alm, combined, am * qb))
            }
            Some((alm, ares, am)) if alm < lm => Some((alm, ares, am)),
            _ => Some((lm, residues, BigInt::from(q))),
        };
        let (_, res, m) = acc.as_ref().expect("just set");
        let mut parts: BTreeMap<&Monomial, (BigRational, BigRational)> = BTreeMap::new();
        let mut ok = true;
        for ((mon, part), r) in res {
            let Some(c) = rational_reconstruction(r, m) else {
                ok = false;
                break;
            };
            let e = parts.entry(mon).or_insert_with(|| (BigRational::zero(), BigRational::zero()));
            if *part == 0 {
                e.0 = c;
            } else {
                e.1 = c;
            }
        }
        if !ok {
            continue;
        }
        let terms = parts.into_iter().map(|(mon, (re, im))| {
            let c = match field {
                FieldSpec::GaussianRational => Scalar::gaussian(re, im),
                _ => Scalar::from_rational(field, &re).expect("rational"),
            };
            (mon.exponents().to_vec(), c)
        });
        let cand = Polynomial::from_terms(field, n, terms).expect("consistent arity");
        // Only test divisibility once the reconstruction has stabilised.
        if last.as_ref() == Some(&cand)
            && matches!(a.div_exact(&cand), Ok(Some(_)))
            && matches!(b.div_exact(&cand), Ok(Some(_)))
        {
            return Some(cand);
        }
        last = Some(cand);
    }
    None
}
