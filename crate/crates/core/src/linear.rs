//! Projective linear maps, Dieudonné forms, transvections and the
//! two-fixed-point construction.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::cremona::ProjPoint;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{FieldAutomorphism, FieldSpec, Scalar};

/// An invertible square matrix modulo scalars, scaled so that its first
/// nonzero entry in row-major order is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjLinear {
    matrix: Matrix,
}

impl ProjLinear {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        if matrix.determinant()?.is_zero() {
            return Err(Error::Singular);
        }
        let lead = matrix
            .entries()
            .iter()
            .find(|v| !v.is_zero())
            .expect("invertible")
            .inv()?;
        Ok(ProjLinear {
            matrix: matrix.scale(&lead),
        })
    }

    pub fn identity(field: FieldSpec, dim: usize) -> Self {
        ProjLinear {
            matrix: Matrix::identity(field, dim + 1),
        }
    }

    pub fn parse(field: FieldSpec, s: &str) -> Result<Self> {
        Self::new(crate::parse::parse_matrix(field, s)?)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn field(&self) -> FieldSpec {
        self.matrix.field()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    fn check(&self, other: &ProjLinear) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }

    pub fn proj_mul(&self, other: &ProjLinear) -> Result<ProjLinear> {
        self.check(other)?;
        ProjLinear::new(self.matrix.checked_mul(&other.matrix)?)
    }

    pub fn proj_inv(&self) -> ProjLinear {
        ProjLinear::new(self.matrix.inverse().expect("invertible")).expect("invertible")
    }

    /// `g^∨`, the transpose of the inverse.
    pub fn transpose_inverse(&self) -> ProjLinear {
        ProjLinear::new(self.matrix.inverse().expect("invertible").transpose()).expect("invertible")
    }

    /// `^α g`, the field automorphism applied entrywise.
    pub fn twist(&self, alpha: &FieldAutomorphism) -> Result<ProjLinear> {
        ProjLinear::new(twist_matrix(&self.matrix, alpha)?)
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        if p.field() != self.field() {
            return Err(Error::FieldMismatch);
        }
        ProjPoint::new(self.matrix.mul_vec(p.coords())?)
    }
}

impl fmt::Display for ProjLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix.fmt(f)
    }
}

impl Serialize for ProjLinear {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Apply a field automorphism to every entry.
pub fn twist_matrix(m: &Matrix, alpha: &FieldAutomorphism) -> Result<Matrix> {
    if m.field() != alpha.field() {
        return Err(Error::FieldMismatch);
    }
    Ok(m.map(|v| alpha.apply(v).expect("same field")))
}

/// `E_ij(c)`: the identity plus `c` at entry `(i, j)`, i.e. `x_i ↦ x_i + c x_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transvection {
    i: usize,
    j: usize,
    c: Scalar,
}

impl Transvection {
    pub fn new(i: usize, j: usize, c: Scalar) -> Result<Self> {
        if i == j {
            return Err(Error::PreconditionViolated("transvection needs i != j".into()));
        }
        if c.is_zero() {
            return Err(Error::PreconditionViolated("transvection needs c != 0".into()));
        }
        Ok(Transvection { i, j, c })
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn c(&self) -> &Scalar {
        &self.c
    }

    pub fn matrix(&self, n: usize) -> Matrix {
        let mut m = Matrix::identity(self.c.field(), n);
        m.set(self.i, self.j, self.c.clone());
        m
    }
}

impl fmt::Display for Transvection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E({},{};{})", self.i, self.j, self.c)
    }
}

/// Ordered product `E_1 E_2 ⋯ E_m` as an `n × n` matrix.
pub fn transvection_product(field: FieldSpec, n: usize, ts: &[Transvection]) -> Matrix {
    ts.iter()
        .fold(Matrix::identity(field, n), |acc, t| &acc * &t.matrix(n))
}

/// Upper bound on the length of [`gauss_decompose`] output for `SL_{d+1}`.
pub fn decomposition_bound(d: usize) -> usize {
    (d + 1) * (d + 1) + 2 * (d + 1)
}

/// Write a determinant-one matrix as a product of transvections.
///
/// Gauss-Jordan elimination using only row additions. For column `k` the
/// pivot is first made equal to 1: if some lower row has a nonzero entry in
/// the column, a multiple of it is added to row `k`; otherwise row `k` is
/// added to row `k+1` first. The other entries of the column are then
/// cleared. Each column costs at most `n + 1` operations, so the output has
/// at most `n(n+1)` factors, within [`decomposition_bound`].
pub fn gauss_decompose(a: &Matrix) -> Result<Vec<Transvection>> {
    if !a.is_square() {
        return Err(Error::DimMismatch {
            expected: a.nrows(),
            got: a.ncols(),
        });
    }
    if !a.determinant()?.is_one() {
        return Err(Error::NotUnimodular);
    }
    let field = a.field();
    let n = a.nrows();
    let mut m = a.clone();
    let mut ops: Vec<Transvection> = Vec::new();
    // row_dst += c * row_src, recorded as the left factor E_{dst,src}(c)
    let mut add_row = |m: &mut Matrix, dst: usize, src: usize, c: Scalar| {
        for col in 0..n {
            let v = m.get(dst, col) + &(&c * m.get(src, col));
            m.set(dst, col, v);
        }
        ops.push(Transvection::new(dst, src, c).expect("valid row operation"));
    };
    for k in 0..n {
        if !m.get(k, k).is_one() {
            let below = (k + 1..n).find(|&r| !m.get(r, k).is_zero());
            let r = match below {
                Some(r) => r,
                None => {
                    // Only reachable for k < n-1: the last pivot is the determinant.
                    add_row(&mut m, k + 1, k, Scalar::one(field));
                    k + 1
                }
            };
            let c = &(&Scalar::one(field) - m.get(k, k)) / m.get(r, k);
            add_row(&mut m, k, r, c);
        }
        for r in 0..n {
            if r != k && !m.get(r, k).is_zero() {
                let c = -m.get(r, k);
                add_row(&mut m, r, k, c);
            }
        }
    }
    debug_assert!(m.is_identity());
    // R_m ⋯ R_1 A = I, so A = R_1^{-1} ⋯ R_m^{-1}.
    Ok(ops
        .into_iter()
        .map(|t| Transvection::new(t.i, t.j, -t.c).expect("nonzero"))
        .collect())
}

/// Whether an integer matrix of determinant 1 is congruent to the identity
/// modulo the odd prime `p`.
pub fn in_congruence_subgroup(a: &Matrix, p: u64) -> Result<bool> {
    if p.is_multiple_of(2) || !crate::scalar::is_prime(p) {
        return Err(Error::BadModulus(p));
    }
    if !a.is_square() {
        return Err(Error::DimMismatch {
            expected: a.nrows(),
            got: a.ncols(),
        });
    }
    let entries = a
        .entries()
        .iter()
        .map(|v| {
            v.as_integer()
                .ok_or_else(|| Error::PreconditionViolated("integer entries required".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    if !a.determinant()?.is_one() {
        return Err(Error::NotUnimodular);
    }
    let n = a.nrows();
    let p = num_bigint::BigInt::from(p);
    Ok(entries.iter().enumerate().all(|(k, v)| {
        let diag = k / n == k % n;
        let shifted = if diag { v - 1 } else { v.clone() };
        (shifted % &p) == num_bigint::BigInt::from(0)
    }))
}

/// A projective automorphism whose rational fixed points are exactly `p`
/// and `q`.
///
/// In the basis `b_0 = p, b_1, …, b_{d-1}, b_d = q`, where the middle
/// vectors are the first standard basis vectors completing `{p, q}` to a
/// basis, the map is a unipotent Jordan block of size `d` followed by the
/// eigenvalue `λ`. The eigenvalue-1 eigenspace is the line of `p` and the
/// `λ` eigenspace is the line of `q`, so no other point is fixed.
pub fn two_fixed_point_automorphism(p: &ProjPoint, q: &ProjPoint, lambda: &Scalar) -> Result<ProjLinear> {
    let field = p.field();
    if q.field() != field || lambda.field() != field {
        return Err(Error::FieldMismatch);
    }
    let d = p.dim();
    if q.dim() != d {
        return Err(Error::DimMismatch {
            expected: d,
            got: q.dim(),
        });
    }
    if lambda.is_zero() || lambda.is_one() {
        return Err(Error::BadEigenvalue);
    }
    let n = d + 1;
    let mut basis: Vec<Vec<Scalar>> = vec![p.coords().to_vec(), q.coords().to_vec()];
    if rank_of(field, &basis) < 2 {
        return Err(Error::DegeneratePair);
    }
    for j in 0..n {
        if basis.len() == n {
            break;
        }
        let mut e = vec![Scalar::zero(field); n];
        e[j] = Scalar::one(field);
        basis.push(e);
        if rank_of(field, &basis) < basis.len() {
            basis.pop();
        }
    }
    // Column order: p, completions, q.
    let q_col = basis.remove(1);
    basis.push(q_col);
    let b = Matrix::from_rows(field, basis)?.transpose();
    let mut j = Matrix::identity(field, n);
    for k in 0..d.saturating_sub(1) {
        j.set(k, k + 1, Scalar::one(field));
    }
    j.set(d, d, lambda.clone());
    let b_inv = b.inverse().map_err(|_| Error::DegeneratePair)?;
    ProjLinear::new(&(&b * &j) * &b_inv)
}

fn rank_of(field: FieldSpec, vectors: &[Vec<Scalar>]) -> usize {
    Matrix::from_rows(field, vectors.to_vec())
        .expect("equal-length vectors")
        .rank()
}

/// All points of `P^d(F_p)`, canonically scaled.
pub fn projective_points(p: u64, d: usize) -> Result<Vec<ProjPoint>> {
    let field = FieldSpec::prime(p)?;
    let mut out = Vec::new();
    // The first nonzero coordinate is 1 and everything after it is free.
    for pivot in 0..=d {
        let free = d - pivot;
        let count = p.pow(free as u32);
        for idx in 0..count {
            let mut coords = vec![Scalar::zero(field); d + 1];
            coords[pivot] = Scalar::one(field);
            let mut rest = idx;
            for slot in coords.iter_mut().skip(pivot + 1) {
                *slot = Scalar::residue((rest % p) as i64, p);
                rest /= p;
            }
            out.push(ProjPoint::new(coords)?);
        }
    }
    Ok(out)
}

/// Points of `points` fixed by `a`.
pub fn fixed_points(a: &ProjLinear, points: &[ProjPoint]) -> Result<Vec<ProjPoint>> {
    let mut out = Vec::new();
    for p in points {
        if a.apply(p)? == *p {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// `g ↦ h (^α g) h⁻¹`, or `g ↦ h (^α g^∨) h⁻¹` when `dual` is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DieudonneAutomorphism {
    pub h: ProjLinear,
    pub alpha: FieldAutomorphism,
    pub dual: bool,
}

impl DieudonneAutomorphism {
    pub fn new(h: ProjLinear, alpha: FieldAutomorphism, dual: bool) -> Result<Self> {
        if h.field() != alpha.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(DieudonneAutomorphism { h, alpha, dual })
    }

    pub fn apply(&self, g: &ProjLinear) -> Result<ProjLinear> {
        apply_dieudonne(self, g)
    }
}

pub fn apply_dieudonne(phi: &DieudonneAutomorphism, g: &ProjLinear) -> Result<ProjLinear> {
    phi.h.check(g)?;
    let mut inner = g.twist(&phi.alpha)?;
    if phi.dual {
        inner = inner.transpose_inverse();
    }
    phi.h.proj_mul(&inner)?.proj_mul(&phi.h.proj_inv())
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::scalar::AutomorphismKind;

    const Q: FieldSpec = FieldSpec::Rational;
    const F5: FieldSpec = FieldSpec::PrimeField(5);

    fn pl(field: FieldSpec, rows: &[&[i64]]) -> ProjLinear {
        ProjLinear::new(Matrix::from_ints(field, rows)).unwrap()
    }

    fn e(i: usize, j: usize, c: i64) -> Transvection {
        Transvection::new(i, j, Scalar::from_int(Q, c)).unwrap()
    }

    #[test]
    fn group_law_examples() {
        let a = pl(Q, &[&[2, 1], &[7, 3]]);
        assert!(a.proj_mul(&a.proj_inv()).unwrap().is_identity());
        let sum = e(0, 1, 1).matrix(2).checked_mul(&e(0, 1, 2).matrix(2)).unwrap();
        assert_eq!(sum, e(0, 1, 3).matrix(2));
        let prod = pl(Q, &[&[1, 1], &[0, 1]]).proj_mul(&pl(Q, &[&[1, 0], &[1, 1]])).unwrap();
        assert_eq!(prod, pl(Q, &[&[2, 1], &[1, 1]]));
        assert_eq!(
            a.proj_mul(&ProjLinear::identity(Q, 2)),
            Err(Error::DimMismatch { expected: 1, got: 2 })
        );
    }

    #[test]
    fn canonical_scaling() {
        let a = pl(Q, &[&[0, 3], &[6, 9]]);
        assert_eq!(a.to_string(), "[[0,1],[2,3]]");
        assert_eq!(ProjLinear::new(Matrix::from_ints(Q, &[&[1, 2], &[2, 4]])), Err(Error::Singular));
    }

    #[test]
    fn transpose_inverse_examples() {
        let g = pl(F5, &[&[1, 2], &[0, 1]]);
        assert_eq!(g.transpose_inverse(), pl(F5, &[&[1, 0], &[3, 1]]));
        assert!(ProjLinear::identity(Q, 2).transpose_inverse().is_identity());
    }

    #[test]
    fn twist_examples() {
        let qi = FieldSpec::GaussianRational;
        let m = Matrix::from_rows(
            qi,
            vec![vec![Scalar::one(qi), Scalar::i()], vec![Scalar::zero(qi), Scalar::one(qi)]],
        )
        .unwrap();
        let g = ProjLinear::new(m).unwrap();
        let t = g.twist(&FieldAutomorphism::conjugation()).unwrap();
        assert_eq!(t.to_string(), "[[1,-i],[0,1]]");
        assert_eq!(g.twist(&FieldAutomorphism::identity(qi)).unwrap(), g);
        assert_eq!(pl(Q, &[&[1, 0], &[0, 1]]).twist(&FieldAutomorphism::conjugation()), Err(Error::FieldMismatch));
    }

    #[test]
    fn dieudonne_examples() {
        let g = pl(F5, &[&[1, 2], &[0, 1]]);
        let id = FieldAutomorphism::identity(F5);
        let plain = DieudonneAutomorphism::new(ProjLinear::identity(F5, 1), id, false).unwrap();
        assert_eq!(plain.apply(&g).unwrap(), g);
        let dual = DieudonneAutomorphism::new(ProjLinear::identity(F5, 1), id, true).unwrap();
        assert_eq!(dual.apply(&g).unwrap(), pl(F5, &[&[1, 0], &[3, 1]]));
        let frob = FieldAutomorphism::new(F5, AutomorphismKind::FrobeniusPower(1)).unwrap();
        let h = pl(F5, &[&[2, 1], &[1, 1]]);
        let phi = DieudonneAutomorphism::new(h, frob, true).unwrap();
        let k = pl(F5, &[&[3, 1], &[4, 4]]);
        assert_eq!(
            phi.apply(&g.proj_mul(&k).unwrap()).unwrap(),
            phi.apply(&g).unwrap().proj_mul(&phi.apply(&k).unwrap()).unwrap()
        );
    }

    #[test]
    fn gauss_decompose_examples() {
        let a = Matrix::from_ints(Q, &[&[2, 1], &[1, 1]]);
        assert_eq!(gauss_decompose(&a).unwrap(), vec![e(0, 1, 1), e(1, 0, 1)]);
        assert_eq!(gauss_decompose(&Matrix::identity(Q, 3)).unwrap(), vec![]);
        let e02 = e(0, 2, 5).matrix(3);
        assert_eq!(gauss_decompose(&e02).unwrap(), vec![e(0, 2, 5)]);
        assert_eq!(
            gauss_decompose(&Matrix::from_ints(Q, &[&[2, 0], &[0, 1]])),
            Err(Error::NotUnimodular)
        );
        let rot = Matrix::from_ints(Q, &[&[0, 1], &[-1, 0]]);
        let ts = gauss_decompose(&rot).unwrap();
        assert_eq!(transvection_product(Q, 2, &ts), rot);
        // diag(2, 1/2, 1) has nothing below the first pivot
        let m = Matrix::from_ints(Q, &[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]])
            .checked_mul(&Matrix::diagonal(&[Scalar::one(Q), Scalar::rational(1, 2), Scalar::one(Q)]))
            .unwrap();
        let ts = gauss_decompose(&m).unwrap();
        assert_eq!(transvection_product(Q, 3, &ts), m);
        assert!(ts.len() <= decomposition_bound(2));
        assert_eq!(decomposition_bound(2), 15);
    }

    #[test]
    fn congruence_examples() {
        assert_eq!(in_congruence_subgroup(&e(0, 1, 3).matrix(2), 3), Ok(true));
        assert_eq!(in_congruence_subgroup(&e(0, 1, 1).matrix(2), 3), Ok(false));
        assert_eq!(in_congruence_subgroup(&Matrix::identity(Q, 3), 7), Ok(true));
        assert_eq!(in_congruence_subgroup(&Matrix::identity(Q, 3), 2), Err(Error::BadModulus(2)));
        assert_eq!(in_congruence_subgroup(&Matrix::identity(Q, 3), 9), Err(Error::BadModulus(9)));
        let two = Matrix::from_ints(Q, &[&[2, 0], &[0, 1]]);
        assert_eq!(in_congruence_subgroup(&two, 3), Err(Error::NotUnimodular));
    }

    #[test]
    fn two_fixed_points_example() {
        let p = ProjPoint::from_ints(Q, &[1, 0, 0]).unwrap();
        let q = ProjPoint::from_ints(Q, &[0, 0, 1]).unwrap();
        let a = two_fixed_point_automorphism(&p, &q, &Scalar::from_int(Q, 2)).unwrap();
        assert_eq!(a.to_string(), "[[1,1,0],[0,1,0],[0,0,2]]");
        assert_eq!(a.apply(&p).unwrap(), p);
        assert_eq!(a.apply(&q).unwrap(), q);
        assert_eq!(
            two_fixed_point_automorphism(&p, &p, &Scalar::from_int(Q, 2)),
            Err(Error::DegeneratePair)
        );
        assert_eq!(
            two_fixed_point_automorphism(&p, &q, &Scalar::one(Q)),
            Err(Error::BadEigenvalue)
        );
    }

    #[test]
    fn two_fixed_points_scan_over_f5() {
        let pts = projective_points(5, 2).unwrap();
        assert_eq!(pts.len(), 31);
        let p = ProjPoint::from_ints(F5, &[1, 0, 0]).unwrap();
        let q = ProjPoint::from_ints(F5, &[0, 0, 1]).unwrap();
        let a = two_fixed_point_automorphism(&p, &q, &Scalar::from_int(F5, 2)).unwrap();
        assert_eq!(a, pl(F5, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 2]]));
        assert_eq!(fixed_points(&a, &pts).unwrap(), vec![p, q]);
    }

    fn arb_gl(field: FieldSpec, n: usize) -> impl Strategy<Value = ProjLinear> {
        prop::collection::vec((-4i64..5, -4i64..5), n * n).prop_filter_map("singular", move |v| {
            let entries: Vec<Scalar> = v
                .iter()
                .map(|&(a, b)| match field {
                    FieldSpec::GaussianRational => Scalar::gaussian_int(a, b),
                    _ => Scalar::from_int(field, a),
                })
                .collect();
            let rows = entries.chunks(n).map(<[Scalar]>::to_vec).collect();
            ProjLinear::new(Matrix::from_rows(field, rows).ok()?).ok()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn transpose_inverse_is_an_involutive_automorphism(g in arb_gl(Q, 3), h in arb_gl(Q, 3)) {
            let gh = g.proj_mul(&h).unwrap();
            prop_assert_eq!(gh.transpose_inverse(), g.transpose_inverse().proj_mul(&h.transpose_inverse()).unwrap());
            prop_assert_eq!(g.transpose_inverse().transpose_inverse(), g);
        }

        #[test]
        fn conjugation_twist_is_an_involutive_automorphism(
            g in arb_gl(FieldSpec::GaussianRational, 3),
            h in arb_gl(FieldSpec::GaussianRational, 3),
        ) {
            let c = FieldAutomorphism::conjugation();
            let gh = g.proj_mul(&h).unwrap();
            prop_assert_eq!(gh.twist(&c).unwrap(), g.twist(&c).unwrap().proj_mul(&h.twist(&c).unwrap()).unwrap());
            prop_assert_eq!(g.twist(&c).unwrap().twist(&c).unwrap(), g);
        }

        #[test]
        fn dieudonne_forms_are_homomorphisms(
            h in arb_gl(FieldSpec::GaussianRational, 2),
            g in arb_gl(FieldSpec::GaussianRational, 2),
            k in arb_gl(FieldSpec::GaussianRational, 2),
            conj in any::<bool>(),
            dual in any::<bool>(),
        ) {
            let qi = FieldSpec::GaussianRational;
            let alpha = if conj { FieldAutomorphism::conjugation() } else { FieldAutomorphism::identity(qi) };
            let phi = DieudonneAutomorphism::new(h, alpha, dual).unwrap();
            let lhs = phi.apply(&g.proj_mul(&k).unwrap()).unwrap();
            let rhs = phi.apply(&g).unwrap().proj_mul(&phi.apply(&k).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn gauss_decompose_reconstructs(
            ops in prop::collection::vec((0usize..3, 0usize..3, -5i64..6), 0..20),
        ) {
            let ts: Vec<Transvection> = ops
                .into_iter()
                .filter_map(|(i, j, c)| Transvection::new(i, j, Scalar::from_int(Q, c)).ok())
                .collect();
            let a = transvection_product(Q, 3, &ts);
            let out = gauss_decompose(&a).unwrap();
            prop_assert_eq!(transvection_product(Q, 3, &out), a);
            prop_assert!(out.len() <= decomposition_bound(2));
        }
    }
}
