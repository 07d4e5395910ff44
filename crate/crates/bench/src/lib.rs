//! Seeded inputs shared by the benchmarks.

use cremona_core::sample;
use cremona_core::{CremonaMap, FieldSpec, Matrix, Polynomial};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn polynomial_pair(field: FieldSpec, nvars: usize, max_deg: u32, terms: usize) -> (Polynomial, Polynomial) {
    let mut rng = rng(1);
    (
        sample::polynomial(field, nvars, max_deg, terms, &mut rng),
        sample::polynomial(field, nvars, max_deg, terms, &mut rng),
    )
}

/// `(a g, b g)` for random `a`, `b` and `g`, so the gcd is nontrivial.
pub fn gcd_pair(field: FieldSpec, nvars: usize, max_deg: u32, terms: usize) -> (Polynomial, Polynomial) {
    let mut rng = rng(2);
    let mut draw = || sample::polynomial(field, nvars, max_deg, terms, &mut rng);
    let (a, b, g) = (draw(), draw(), draw());
    (&a * &g, &b * &g)
}

pub fn cremona_pair(field: FieldSpec, dim: usize) -> (CremonaMap, CremonaMap) {
    let mut rng = rng(3);
    let f = sample::involution_at_origin(field, dim);
    let g = sample::tame_auto(field, dim, 3, true, &mut rng).closure().expect("nonzero");
    (f, g)
}

/// A map fixing `[1:0:…:0]` of degree at most 6.
pub fn deformation_input(field: FieldSpec, dim: usize) -> CremonaMap {
    let (f, g) = cremona_pair(field, dim);
    f.compose(&g).expect("same shape")
}

/// Product of `len` random transvections in `SL_n`.
pub fn unimodular(field: FieldSpec, n: usize, len: usize) -> Matrix {
    let mut rng = rng(4);
    let ts: Vec<_> = (0..len).map(|_| sample::transvection(field, n, 5, &mut rng)).collect();
    cremona_core::linear::transvection_product(field, n, &ts)
}
