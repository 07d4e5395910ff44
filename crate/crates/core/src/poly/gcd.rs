//! Multivariate gcd by recursive primitive pseudo-remainder sequences.
//!
//! The ring `k[x_0..x_n]` is viewed as `R[x_v]` with `R` the polynomials in
//! the remaining variables. Contents (gcds of coefficients in `R`) are split
//! off recursively and the primitive parts are run through a primitive PRS.
//! Monomial content is removed first, which handles the very common case of
//! coordinate-hyperplane factors without any pseudo-division.

use super::{Monomial, Polynomial};
use crate::error::{Error, Result};

/// Monic gcd of `a` and `b`. `gcd(p, 0)` is `p` made monic; `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if a.nvars() != b.nvars() {
        return Err(Error::ArityMismatch {
            expected: a.nvars(),
            got: b.nvars(),
        });
    }
    Ok(gcd_rec(a, b))
}

/// Monic gcd of a list; stops early once the gcd is a unit.
pub fn gcd_many<'a, I>(polys: I) -> Result<Option<Polynomial>>
where
    I: IntoIterator<Item = &'a Polynomial>,
{
    let mut acc: Option<Polynomial> = None;
    for p in polys {
        acc = Some(match acc {
            None => p.monic(),
            Some(g) => {
                let g = gcd(&g, p)?;
                if g.is_constant() && !g.is_zero() {
                    return Ok(Some(g));
                }
                g
            }
        });
    }
    Ok(acc)
}

/// Monic least common multiple.
pub fn lcm(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    if a.is_zero() || b.is_zero() {
        return Ok(Polynomial::zero(a.field(), a.nvars()));
    }
    let g = gcd(a, b)?;
    let prod = a * b;
    let q = prod
        .div_exact(&g)?
        .expect("gcd divides the product");
    Ok(q.monic())
}

fn gcd_rec(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(a.field(), a.nvars());
    }
    let ma = a.monomial_content().expect("nonzero");
    let mb = b.monomial_content().expect("nonzero");
    let m = ma.gcd(&mb);
    let core = gcd_no_monomial(&a.div_monomial(&ma), &b.div_monomial(&mb));
    core.mul_monomial(&m, &crate::scalar::Scalar::one(a.field()))
        .monic()
}

fn vars_of(p: &Polynomial) -> Vec<bool> {
    let mut used = vec![false; p.nvars()];
    for (m, _) in p.terms() {
        for (u, &e) in used.iter_mut().zip(m.exponents()) {
            *u |= e > 0;
        }
    }
    used
}

/// Content of `p` with respect to `var`: the gcd of its coefficients in
/// `var`, each of which is free of `var`.
fn content_in(p: &Polynomial, var: usize) -> Polynomial {
    let mut coeffs = p.coefficients_in(var);
    coeffs.retain(|c| !c.is_zero());
    // Start from the sparsest coefficient; small inputs make the fold cheap.
    coeffs.sort_by_key(|c| c.num_terms());
    let mut acc: Option<Polynomial> = None;
    for c in &coeffs {
        let g = match acc {
            None => c.monic(),
            Some(ref g) => gcd_rec(g, c),
        };
        if g.is_constant() {
            return Polynomial::one(p.field(), p.nvars());
        }
        acc = Some(g);
    }
    acc.unwrap_or_else(|| Polynomial::zero(p.field(), p.nvars()))
}

fn exact(a: &Polynomial, b: &Polynomial) -> Polynomial {
    a.div_exact(b)
        .expect("compatible operands")
        .expect("exact division in gcd")
}

fn gcd_no_monomial(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let field = a.field();
    let n = a.nvars();
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(field, n);
    }
    if super::modular::certainly_coprime(a, b) {
        return Polynomial::one(field, n);
    }
    let gcd_p = |x: &Polynomial, y: &Polynomial| super::brown::brown_gcd(x, y).unwrap_or_else(|| gcd_rec(x, y));
    if !field.is_finite() {
        if let Some(g) = super::modular::modular_gcd(a, b, gcd_p) {
            return g;
        }
    } else if let Some(g) = super::brown::brown_gcd(a, b) {
        return g;
    }
    let va = vars_of(a);
    let vb = vars_of(b);

    // A variable occurring in only one argument cannot occur in the gcd, so
    // that argument may be replaced by its content in the variable.
    for v in 0..n {
        if va[v] && !vb[v] {
            return gcd_rec(&content_in(a, v), b);
        }
        if vb[v] && !va[v] {
            return gcd_rec(a, &content_in(b, v));
        }
    }

    // Main variable: the shared one with the smallest degree sum.
    let var = (0..n)
        .filter(|&v| va[v])
        .min_by_key(|&v| a.degree_in(v).unwrap_or(0) + b.degree_in(v).unwrap_or(0))
        .expect("non-constant inputs share a variable");

    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let pa = exact(a, &ca);
    let pb = exact(b, &cb);
    let content = gcd_rec(&ca, &cb);

    let (mut f, mut g) = if pa.degree_in(var) >= pb.degree_in(var) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let r = pseudo_remainder(&f, &g, var);
        if r.is_zero() {
            break;
        }
        if r.degree_in(var) == Some(0) {
            g = Polynomial::one(field, n);
            break;
        }
        f = g;
        g = exact(&r, &content_in(&r, var));
    }
    (&content * &g).monic()
}

/// `lc(g)^k * f mod g` in `R[x_var]`, computed without division.
fn pseudo_remainder(f: &Polynomial, g: &Polynomial, var: usize) -> Polynomial {
    let dg = g.degree_in(var).expect("nonzero divisor");
    let lc_g = g.coefficients_in(var).pop().expect("nonzero divisor");
    let one = crate::scalar::Scalar::one(f.field());
    let mut r = f.clone();
    while let Some(dr) = r.degree_in(var) {
        if r.is_zero() || dr < dg {
            break;
        }
        let lc_r = r.coefficients_in(var).pop().expect("nonzero");
        let mut shift = Monomial::one(f.nvars()).exponents().to_vec();
        shift[var] = dr - dg;
        let shifted = (&lc_r * g).mul_monomial(&Monomial::new(shift), &one);
        r = &(&lc_g * &r) - &shifted;
    }
    r
}
