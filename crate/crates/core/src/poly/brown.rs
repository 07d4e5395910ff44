//! Dense evaluation and interpolation gcd over `F_q`.
//!
//! The last active variable `y` is specialised at points `α`, the gcds of
//! the images are normalised to have leading coefficient `γ(α)` with
//! `γ = gcd(lc(a), lc(b))`, and the results are combined by Newton
//! interpolation in `y` until they stabilise and divide both inputs.
//! Leading terms are taken in lex order on the remaining variables. Gives
//! up when the field has too few points.

use std::collections::BTreeMap;

use super::modular::{inv, mul, pow};
use super::Polynomial;
use crate::scalar::{FieldSpec, Scalar};

type MPoly = BTreeMap<Vec<u32>, u64>;

/// Monic (in the crate's term order) gcd of two polynomials over `F_q`,
/// or `None` when `F_q` runs out of evaluation points.
pub(crate) fn brown_gcd(a: &Polynomial, b: &Polynomial) -> Option<Polynomial> {
    let FieldSpec::PrimeField(q) = a.field() else {
        return None;
    };
    let n = a.nvars();
    let to_m = |p: &Polynomial| -> MPoly {
        p.terms()
            .map(|(m, c)| (m.exponents().to_vec(), c.residue_value().expect("residue")))
            .collect()
    };
    let vars: Vec<usize> = (0..n).collect();
    let g = rec(&to_m(a), &to_m(b), &vars, q)?;
    let terms = g.into_iter().map(|(e, c)| (e, Scalar::residue(c as i64, q)));
    Some(Polynomial::from_terms(a.field(), n, terms).ok()?.monic())
}

fn add_term(p: &mut MPoly, e: Vec<u32>, c: u64, q: u64) {
    use std::collections::btree_map::Entry;
    match p.entry(e) {
        Entry::Occupied(mut o) => {
            let v = (*o.get() + c) % q;
            if v == 0 {
                o.remove();
            } else {
                *o.get_mut() = v;
            }
        }
        Entry::Vacant(slot) if c != 0 => {
            slot.insert(c);
        }
        Entry::Vacant(_) => {}
    }
}

fn scale(p: &MPoly, c: u64, q: u64) -> MPoly {
    if c == 0 {
        return MPoly::new();
    }
    p.iter().map(|(e, &v)| (e.clone(), mul(v, c, q))).collect()
}

fn monic(p: &MPoly, q: u64) -> MPoly {
    match p.last_key_value() {
        Some((_, &c)) => scale(p, inv(c, q), q),
        None => MPoly::new(),
    }
}

fn degree_in(p: &MPoly, k: usize) -> u32 {
    p.keys().map(|e| e[k]).max().unwrap_or(0)
}

/// Coefficients in `F_q[y]` of each monomial in the other variables.
fn groups(p: &MPoly, y: usize) -> BTreeMap<Vec<u32>, Vec<u64>> {
    let mut out: BTreeMap<Vec<u32>, Vec<u64>> = BTreeMap::new();
    for (e, &c) in p {
        let mut key = e.clone();
        let d = std::mem::replace(&mut key[y], 0) as usize;
        let u = out.entry(key).or_default();
        if u.len() <= d {
            u.resize(d + 1, 0);
        }
        u[d] = c;
    }
    out
}

fn ungroup(gs: &BTreeMap<Vec<u32>, Vec<u64>>, y: usize) -> MPoly {
    let mut out = MPoly::new();
    for (key, u) in gs {
        for (d, &c) in u.iter().enumerate() {
            if c != 0 {
                let mut e = key.clone();
                e[y] = d as u32;
                out.insert(e, c);
            }
        }
    }
    out
}

fn trim(u: &mut Vec<u64>) {
    while u.last() == Some(&0) {
        u.pop();
    }
}

fn u_eval(u: &[u64], x: u64, q: u64) -> u64 {
    u.iter().rev().fold(0, |acc, &c| (mul(acc, x, q) + c) % q)
}

/// `(quotient, remainder)` of univariate division.
fn u_divrem(a: &[u64], b: &[u64], q: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let lead_inv = inv(*b.last().expect("nonzero divisor"), q);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut quo = vec![0u64; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let c = mul(*r.last().expect("nonempty"), lead_inv, q);
        let shift = r.len() - b.len();
        quo[shift] = c;
        for (j, &v) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + q - mul(c, v, q)) % q;
        }
        trim(&mut r);
    }
    (quo, r)
}

fn u_gcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let (_, r) = u_divrem(&a, &b, q);
        a = std::mem::replace(&mut b, r);
    }
    match a.last() {
        Some(&c) => {
            let ci = inv(c, q);
            a.iter().map(|&v| mul(v, ci, q)).collect()
        }
        None => a,
    }
}

fn eval(p: &MPoly, y: usize, x: u64, q: u64) -> MPoly {
    let mut out = MPoly::new();
    for (e, &c) in p {
        let mut k = e.clone();
        let d = std::mem::replace(&mut k[y], 0);
        let v = mul(c, pow(x, d as u64, q), q);
        if v != 0 {
            let slot = out.entry(k).or_insert(0);
            *slot = (*slot + v) % q;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// `p · u(y)`.
fn mul_univariate(p: &MPoly, u: &[u64], y: usize, q: u64) -> MPoly {
    let mut out = MPoly::new();
    for (e, &c) in p {
        for (d, &v) in u.iter().enumerate() {
            if v != 0 {
                let mut k = e.clone();
                k[y] += d as u32;
                let slot = out.entry(k).or_insert(0);
                *slot = (*slot + mul(c, v, q)) % q;
            }
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn add(a: &MPoly, b: &MPoly, q: u64) -> MPoly {
    let mut out = a.clone();
    for (e, &c) in b {
        add_term(&mut out, e.clone(), c, q);
    }
    out
}

fn sub(a: &MPoly, b: &MPoly, q: u64) -> MPoly {
    let mut out = a.clone();
    for (e, &c) in b {
        let slot = out.entry(e.clone()).or_insert(0);
        *slot = (*slot + q - c) % q;
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Whether `b` divides `a`, by lex division.
fn divides(b: &MPoly, a: &MPoly, q: u64) -> bool {
    let Some((lb, &cb)) = b.last_key_value() else {
        return a.is_empty();
    };
    let cb_inv = inv(cb, q);
    let mut r = a.clone();
    while let Some((m, &c)) = r.last_key_value() {
        if m.iter().zip(lb).any(|(x, y)| x < y) {
            return false;
        }
        let shift: Vec<u32> = m.iter().zip(lb).map(|(x, y)| x - y).collect();
        let f = mul(c, cb_inv, q);
        for (e, &v) in b {
            let k: Vec<u32> = e.iter().zip(&shift).map(|(x, y)| x + y).collect();
            add_term(&mut r, k, q - mul(f, v, q), q);
        }
    }
    true
}

fn rec(a: &MPoly, b: &MPoly, vars: &[usize], q: u64) -> Option<MPoly> {
    if a.is_empty() {
        return Some(monic(b, q));
    }
    if b.is_empty() {
        return Some(monic(a, q));
    }
    let active: Vec<usize> = vars
        .iter()
        .copied()
        .filter(|&k| degree_in(a, k) > 0 || degree_in(b, k) > 0)
        .collect();
    let n = a.keys().next().expect("nonzero").len();
    let one = || MPoly::from([(vec![0; n], 1)]);
    let Some((&y, rest)) = active.split_last() else {
        return Some(one());
    };
    let (ga, gb) = (groups(a, y), groups(b, y));
    if rest.is_empty() {
        let g = u_gcd(&ga[&vec![0; n]], &gb[&vec![0; n]], q);
        return Some(ungroup(&BTreeMap::from([(vec![0; n], g)]), y));
    }
    let content = |gs: &BTreeMap<Vec<u32>, Vec<u64>>| gs.values().fold(Vec::new(), |acc, u| u_gcd(&acc, u, q));
    let (ca, cb) = (content(&ga), content(&gb));
    let cont = u_gcd(&ca, &cb, q);
    let prim = |gs: &BTreeMap<Vec<u32>, Vec<u64>>, c: &[u64]| -> BTreeMap<Vec<u32>, Vec<u64>> {
        gs.iter().map(|(k, u)| (k.clone(), u_divrem(u, c, q).0)).collect()
    };
    let (pa, pb) = (prim(&ga, &ca), prim(&gb, &cb));
    let (lca, lcb) = (pa.values().next_back().expect("nonzero"), pb.values().next_back().expect("nonzero"));
    let gamma = u_gcd(lca, lcb, q);
    let (a1, b1) = (ungroup(&pa, y), ungroup(&pb, y));
    let budget = 2 * (degree_in(&a1, y) + degree_in(&b1, y)) as u64 + gamma.len() as u64 + 8;

    // Interpolant, its leading monomial and the product of (y - α).
    let mut state: Option<(MPoly, Vec<u32>, Vec<u64>)> = None;
    let mut used = 0;
    for x in 1..q {
        if u_eval(lca, x, q) == 0 || u_eval(lcb, x, q) == 0 {
            continue;
        }
        used += 1;
        if used > budget {
            return None;
        }
        let g = rec(&eval(&a1, y, x, q), &eval(&b1, y, x, q), rest, q)?;
        let lm = g.last_key_value().expect("nonzero").0.clone();
        if lm.iter().all(|&e| e == 0) {
            return Some(ungroup(&BTreeMap::from([(vec![0; n], cont)]), y));
        }
        let g = scale(&g, u_eval(&gamma, x, q), q);
        state = match state.take() {
            Some((h, hlm, m)) if hlm == lm => {
                // h + (g - h(α)) m(y) / m(α)
                let corr = scale(&sub(&g, &eval(&h, y, x, q), q), inv(u_eval(&m, x, q), q), q);
                if corr.is_empty() {
                    let (_, h_pp) = primitive_in(&h, y, q);
                    if divides(&h_pp, &a1, q) && divides(&h_pp, &b1, q) {
                        return Some(monic(&mul_univariate(&h_pp, &cont, y, q), q));
                    }
                }
                let next = add(&h, &mul_univariate(&corr, &m, y, q), q);
                Some((next, hlm, mul_linear(&m, x, q)))
            }
            // a larger leading monomial marks an unlucky point
            Some((h, hlm, m)) if hlm < lm => Some((h, hlm, m)),
            _ => Some((g, lm, mul_linear(&[1], x, q))),
        };
    }
    None
}

/// `m · (y - x)`.
fn mul_linear(m: &[u64], x: u64, q: u64) -> Vec<u64> {
    let mut out = vec![0u64; m.len() + 1];
    for (i, &c) in m.iter().enumerate() {
        out[i + 1] = (out[i + 1] + c) % q;
        out[i] = (out[i] + q - mul(c, x, q)) % q;
    }
    out
}

fn primitive_in(p: &MPoly, y: usize, q: u64) -> (Vec<u64>, MPoly) {
    let gs = groups(p, y);
    let c = gs.values().fold(Vec::new(), |acc, u| u_gcd(&acc, u, q));
    let pp = gs.iter().map(|(k, u)| (k.clone(), u_divrem(u, &c, q).0)).collect();
    (c, ungroup(&pp, y))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    const F: FieldSpec = FieldSpec::PrimeField(1_000_003);

    fn poly(terms: &[(Vec<u32>, i64)]) -> Polynomial {
        let ts = terms.iter().map(|(e, c)| (e.clone(), Scalar::residue(*c, 1_000_003)));
        Polynomial::from_terms(F, 4, ts).unwrap()
    }

    /// `x_k + p(x2, x3)`: linear and monic in `x_k`, hence irreducible.
    fn linear_in(k: usize, tail: &[(u32, u32, i64)]) -> Polynomial {
        let mut e = vec![0; 4];
        e[k] = 1;
        let mut terms = vec![(e, 1)];
        terms.extend(tail.iter().map(|&(i, j, c)| (vec![0, 0, i, j], c)));
        poly(&terms)
    }

    fn arb_tail() -> impl Strategy<Value = Vec<(u32, u32, i64)>> {
        prop::collection::vec((0u32..3, 0u32..3, -50i64..50), 0..4)
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((prop::collection::vec(0u32..3, 4), -9i64..9), 1..6)
            .prop_map(|ts| poly(&ts))
            .prop_filter("nonzero", |p| !p.is_zero())
    }

    #[test]
    fn small_fields_give_up() {
        let f2 = FieldSpec::PrimeField(2);
        let x = |i| Polynomial::var(f2, 3, i);
        let a = &(&x(0) + &x(1)).pow(3) * &(&x(2) + &x(1)).pow(2);
        let b = &(&x(0) + &x(1)).pow(2) * &x(2).pow(3);
        assert_eq!(brown_gcd(&a, &b), None);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn recovers_constructed_gcds(
            ta in prop::collection::vec(arb_tail(), 1..3),
            tb in prop::collection::vec(arb_tail(), 1..3),
            g in arb_poly(),
        ) {
            let a = ta.iter().fold(g.clone(), |acc, t| &acc * &linear_in(0, t));
            let b = tb.iter().fold(g.clone(), |acc, t| &acc * &linear_in(1, t));
            prop_assert_eq!(brown_gcd(&a, &b).unwrap(), g.monic());
        }
    }
}
