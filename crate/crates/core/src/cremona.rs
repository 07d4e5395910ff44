//! Cremona transformations of projective space.
//!
//! A map `P^d ⤏ P^d` is stored as its reduced homogeneous tuple
//! `[f_0 : … : f_d]`: all components share one degree, their gcd is a unit,
//! and the first nonzero component has leading coefficient 1. With that
//! normalization two maps are equal exactly when their tuples are equal.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linear::ProjLinear;
use crate::matrix::Matrix;
use crate::parse::parse_projective_map;
use crate::poly::{gcd_many, jacobian, lcm, Polynomial, RationalFunction};
use crate::scalar::{FieldSpec, Scalar};

/// A point of `P^d` with first nonzero coordinate equal to 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<Scalar>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        let field = coords.first().ok_or(Error::ZeroPoint)?.field();
        if coords.iter().any(|c| c.field() != field) {
            return Err(Error::FieldMismatch);
        }
        let pivot = coords.iter().position(|c| !c.is_zero()).ok_or(Error::ZeroPoint)?;
        let inv = coords[pivot].inv()?;
        Ok(ProjPoint {
            coords: coords.iter().map(|c| c * &inv).collect(),
        })
    }

    pub fn from_ints(field: FieldSpec, coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| Scalar::from_int(field, c)).collect())
    }

    /// `[1:0:…:0]`, the origin of the chart `x_0 ≠ 0`.
    pub fn origin(field: FieldSpec, dim: usize) -> Self {
        let mut coords = vec![Scalar::zero(field); dim + 1];
        coords[0] = Scalar::one(field);
        ProjPoint { coords }
    }

    pub fn parse(field: FieldSpec, s: &str) -> Result<Self> {
        Self::new(crate::parse::parse_point(field, s)?)
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn field(&self) -> FieldSpec {
        self.coords[0].field()
    }

    /// Index of the first nonzero coordinate (which equals 1).
    pub fn pivot(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).expect("nonzero point")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CremonaMap {
    field: FieldSpec,
    dim: usize,
    degree: u32,
    components: Vec<Polynomial>,
}

impl CremonaMap {
    /// Reduce a homogeneous tuple to its canonical representative.
    pub fn make_map(components: Vec<Polynomial>) -> Result<Self> {
        let n = components.len();
        if n < 2 {
            return Err(Error::DimMismatch { expected: 2, got: n });
        }
        let field = components[0].field();
        for c in &components {
            if c.field() != field {
                return Err(Error::FieldMismatch);
            }
            if c.nvars() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    got: c.nvars(),
                });
            }
        }
        let mut degree = None;
        for c in components.iter().filter(|c| !c.is_zero()) {
            if !c.is_homogeneous() {
                return Err(Error::NotHomogeneous);
            }
            match degree {
                None => degree = c.total_degree(),
                Some(e) if Some(e) != c.total_degree() => return Err(Error::DegreeMismatch),
                _ => {}
            }
        }
        if degree.is_none() {
            return Err(Error::ZeroMap);
        }
        let g = gcd_many(components.iter().filter(|c| !c.is_zero()))?.expect("nonzero component");
        let mut reduced = if g.is_constant() {
            components
        } else {
            components
                .iter()
                .map(|c| c.div_exact(&g).map(|q| q.expect("gcd divides every component")))
                .collect::<Result<Vec<_>>>()?
        };
        let first = reduced.iter().find(|c| !c.is_zero()).expect("nonzero component");
        let degree = first.total_degree().expect("nonzero");
        if degree == 0 {
            return Err(Error::ConstantMap);
        }
        let lc = first.leading_coefficient().expect("nonzero").clone();
        if !lc.is_one() {
            let inv = lc.inv()?;
            for c in &mut reduced {
                *c = c.scale(&inv);
            }
        }
        Ok(CremonaMap {
            field,
            dim: n - 1,
            degree,
            components: reduced,
        })
    }

    pub fn identity(field: FieldSpec, dim: usize) -> Self {
        let comps = (0..=dim).map(|i| Polynomial::var(field, dim + 1, i)).collect();
        CremonaMap::make_map(comps).expect("identity is a valid map")
    }

    /// `[x_1⋯x_d : …]` with component `i` the product of all variables but `x_i`.
    /// For `d = 2` this is the standard quadratic involution `[x1x2 : x0x2 : x0x1]`.
    pub fn standard_involution(field: FieldSpec, dim: usize) -> Self {
        let n = dim + 1;
        let comps = (0..n)
            .map(|i| {
                let mut e = vec![1u32; n];
                e[i] = 0;
                Polynomial::monomial(crate::poly::Monomial::new(e), Scalar::one(field))
            })
            .collect();
        CremonaMap::make_map(comps).expect("involution is a valid map")
    }

    /// The map `x ↦ M x` of a projective linear transformation.
    pub fn from_linear(a: &ProjLinear) -> Self {
        let m = a.matrix();
        let n = m.nrows();
        let comps = (0..n)
            .map(|i| {
                let mut p = Polynomial::zero(m.field(), n);
                for j in 0..n {
                    let v = Polynomial::var(m.field(), n, j).scale(m.get(i, j));
                    p = &p + &v;
                }
                p
            })
            .collect();
        CremonaMap::make_map(comps).expect("invertible linear map")
    }

    /// The matrix of a degree-one map, if it is invertible.
    pub fn to_linear(&self) -> Option<ProjLinear> {
        if self.degree != 1 {
            return None;
        }
        let n = self.dim + 1;
        let mut m = Matrix::zeros(self.field, n, n);
        for (i, c) in self.components.iter().enumerate() {
            for j in 0..n {
                m.set(i, j, c.coefficient(&crate::poly::Monomial::var(n, j)));
            }
        }
        ProjLinear::new(m).ok()
    }

    pub fn parse(field: FieldSpec, s: &str) -> Result<Self> {
        let (_, comps) = parse_projective_map(field, s)?;
        CremonaMap::make_map(comps)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn is_identity(&self) -> bool {
        *self == CremonaMap::identity(self.field, self.dim)
    }

    /// `self ∘ other`: substitute the components of `other` into `self`.
    pub fn compose(&self, other: &CremonaMap) -> Result<CremonaMap> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let comps = self
            .components
            .iter()
            .map(|f| f.substitute(&other.components))
            .collect::<Result<Vec<_>>>()?;
        CremonaMap::make_map(comps)
    }

    fn values_at(&self, p: &ProjPoint) -> Result<Vec<Scalar>> {
        if p.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        if p.dim() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: p.dim(),
            });
        }
        self.components.iter().map(|c| c.evaluate(p.coords())).collect()
    }

    pub fn is_indeterminate_at(&self, p: &ProjPoint) -> Result<bool> {
        Ok(self.values_at(p)?.iter().all(Scalar::is_zero))
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        let v = self.values_at(p)?;
        if v.iter().all(Scalar::is_zero) {
            return Err(Error::IndeterminateAtPoint);
        }
        ProjPoint::new(v)
    }

    pub fn is_fixed_point(&self, p: &ProjPoint) -> bool {
        self.apply(p).is_ok_and(|q| q == *p)
    }

    /// Defined at `p` with invertible Jacobian, read on the chart around `p`
    /// given by its pivot coordinate and the chart around `f(p)` given by
    /// the pivot of the image.
    pub fn is_local_isomorphism(&self, p: &ProjPoint) -> bool {
        let Ok(q) = self.apply(p) else {
            return false;
        };
        let (a, b) = (p.pivot(), q.pivot());
        let den = self.components[b].dehomogenize(a);
        let fs: Vec<RationalFunction> = (0..=self.dim)
            .filter(|&k| k != b)
            .map(|k| RationalFunction::unreduced(self.components[k].dehomogenize(a), den.clone()))
            .collect();
        let point: Vec<Scalar> = p
            .coords()
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != a)
            .map(|(_, c)| c.clone())
            .collect();
        jacobian(&fs, &point)
            .and_then(|j| j.determinant())
            .is_ok_and(|det| !det.is_zero())
    }

    /// Affine form on the chart `x_0 ≠ 0`, split into homogeneous pieces.
    pub fn to_chart(&self) -> Result<ChartDecomposition> {
        let f0 = self.components[0].dehomogenize(0);
        if f0.is_zero() {
            return Err(Error::ChartDegenerate);
        }
        let mut numerators = Vec::with_capacity(self.dim);
        let mut denominators = Vec::with_capacity(self.dim);
        for c in &self.components[1..] {
            let r = RationalFunction::new(c.dehomogenize(0), f0.clone())?;
            numerators.push(r.numerator().homogeneous_components());
            denominators.push(r.denominator().homogeneous_components());
        }
        Ok(ChartDecomposition {
            field: self.field,
            dim: self.dim,
            numerators,
            denominators,
        })
    }

    pub fn from_chart(dec: &ChartDecomposition) -> Result<CremonaMap> {
        CremonaMap::from_rational_functions(&dec.rational_functions()?)
    }

    /// Homogenize affine rational functions `F_1..F_d` on the chart `x_0 ≠ 0`.
    pub fn from_rational_functions(fs: &[RationalFunction]) -> Result<CremonaMap> {
        let first = fs.first().ok_or(Error::DimMismatch { expected: 1, got: 0 })?;
        let mut l = first.denominator().clone();
        for f in &fs[1..] {
            l = lcm(&l, f.denominator())?;
        }
        let mut affine = vec![l.clone()];
        for f in fs {
            let cof = l.div_exact(f.denominator())?.expect("lcm is a multiple");
            affine.push(f.numerator() * &cof);
        }
        let e = affine
            .iter()
            .filter_map(Polynomial::total_degree)
            .max()
            .expect("nonzero lcm");
        CremonaMap::make_map(affine.iter().map(|p| p.homogenize(e)).collect())
    }
}

impl fmt::Display for CremonaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P^{}: [", self.dim)?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " : ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Largest degree in a finite family.
pub fn max_degree<'a, I>(family: I) -> Result<u32>
where
    I: IntoIterator<Item = &'a CremonaMap>,
{
    family
        .into_iter()
        .map(CremonaMap::degree)
        .max()
        .ok_or(Error::EmptyFamily)
}

/// Chart form `F_i = (Σ_j P_ij) / (Σ_j Q_ij)`, `i = 1..d`, with `P_ij` and
/// `Q_ij` homogeneous of degree `j` in the affine variables `x_1..x_d`
/// (stored with indices `0..d`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartDecomposition {
    field: FieldSpec,
    dim: usize,
    numerators: Vec<BTreeMap<u32, Polynomial>>,
    denominators: Vec<BTreeMap<u32, Polynomial>>,
}

impl ChartDecomposition {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `P_ij` for `i` in `1..=d`; zero when absent.
    pub fn p(&self, i: usize, j: u32) -> Polynomial {
        self.piece(&self.numerators[i - 1], j)
    }

    /// `Q_ij` for `i` in `1..=d`; zero when absent.
    pub fn q(&self, i: usize, j: u32) -> Polynomial {
        self.piece(&self.denominators[i - 1], j)
    }

    fn piece(&self, m: &BTreeMap<u32, Polynomial>, j: u32) -> Polynomial {
        m.get(&j)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.field, self.dim))
    }

    pub fn numerator_parts(&self, i: usize) -> &BTreeMap<u32, Polynomial> {
        &self.numerators[i - 1]
    }

    pub fn denominator_parts(&self, i: usize) -> &BTreeMap<u32, Polynomial> {
        &self.denominators[i - 1]
    }

    /// Largest piece degree over all numerators and denominators.
    pub fn max_piece_degree(&self) -> u32 {
        self.numerators
            .iter()
            .chain(&self.denominators)
            .filter_map(|m| m.keys().next_back().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn rational_functions(&self) -> Result<Vec<RationalFunction>> {
        let sum = |m: &BTreeMap<u32, Polynomial>| {
            m.values()
                .fold(Polynomial::zero(self.field, self.dim), |acc, p| &acc + p)
        };
        self.numerators
            .iter()
            .zip(&self.denominators)
            .map(|(n, d)| RationalFunction::new(sum(n), sum(d)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::parse::parse_polynomial;

    const Q: FieldSpec = FieldSpec::Rational;

    fn p3(s: &str) -> Polynomial {
        parse_polynomial(Q, 3, 0, s).unwrap()
    }

    fn map(s: &str) -> CremonaMap {
        CremonaMap::parse(Q, s).unwrap()
    }

    fn sigma() -> CremonaMap {
        CremonaMap::standard_involution(Q, 2)
    }

    #[test]
    fn make_map_examples() {
        let f = CremonaMap::make_map(vec![
            p3("x0*x1*x2*x0"),
            p3("x0*x1*x2*x1"),
            p3("x0*x1*x2*x2"),
        ])
        .unwrap();
        assert!(f.is_identity());
        assert_eq!(f.degree(), 1);
        let s = CremonaMap::make_map(vec![p3("x1*x2"), p3("x0*x2"), p3("x0*x1")]).unwrap();
        assert_eq!(s, sigma());
        assert_eq!(s.degree(), 2);
        let v = CremonaMap::make_map(vec![p3("x0^2"), p3("x0*x1"), p3("x1^2")]).unwrap();
        assert_eq!(v.components(), &[p3("x0^2"), p3("x0*x1"), p3("x1^2")]);
    }

    #[test]
    fn make_map_rejections() {
        let z = Polynomial::zero(Q, 3);
        assert_eq!(
            CremonaMap::make_map(vec![p3("x0 + x1^2"), p3("x1"), p3("x2")]),
            Err(Error::NotHomogeneous)
        );
        assert_eq!(
            CremonaMap::make_map(vec![p3("x0"), p3("x1^2"), p3("x2")]),
            Err(Error::DegreeMismatch)
        );
        assert_eq!(CremonaMap::make_map(vec![z.clone(), z.clone(), z]), Err(Error::ZeroMap));
        assert_eq!(
            CremonaMap::make_map(vec![p3("x0"), p3("2x0"), p3("3x0")]),
            Err(Error::ConstantMap)
        );
        assert_eq!(CremonaMap::parse(Q, "P^2: [x0 : x1 + x0^2 : x2]"), Err(Error::NotHomogeneous));
        assert_eq!(CremonaMap::parse(Q, "P^2: [x0 : x1^2 : x2]"), Err(Error::DegreeMismatch));
    }

    #[test]
    fn scalar_normalization() {
        let f = map("P^2: [3x0 : 6x1 : -3x2]");
        assert_eq!(f.to_string(), "P^2: [x0 : 2*x1 : -x2]");
        let g = map("P^2: [0 : 2x1*x2 : 4x0*x1]");
        // common factor x1 removed, then scaled so x2 is monic
        assert_eq!(g.to_string(), "P^2: [0 : x2 : 2*x0]");
    }

    #[test]
    fn involution_squares_to_identity() {
        let s = sigma();
        // Unreduced substitution has degree 4 with gcd x0*x1*x2.
        let raw: Vec<_> = s.components().iter().map(|c| c.substitute(s.components()).unwrap()).collect();
        assert_eq!(raw, vec![p3("x0^2*x1*x2"), p3("x0*x1^2*x2"), p3("x0*x1*x2^2")]);
        let ss = s.compose(&s).unwrap();
        assert!(ss.is_identity());
        assert_eq!(ss.degree(), 1);
        assert_eq!(max_degree([&CremonaMap::identity(Q, 2), &s]), Ok(2));
        assert_eq!(max_degree(std::iter::empty()), Err(Error::EmptyFamily));
    }

    #[test]
    fn apply_and_fixed_points() {
        let s = sigma();
        let ones = ProjPoint::from_ints(Q, &[1, 1, 1]).unwrap();
        let origin = ProjPoint::origin(Q, 2);
        assert_eq!(s.apply(&ones).unwrap(), ones);
        assert_eq!(s.apply(&origin), Err(Error::IndeterminateAtPoint));
        assert!(!s.is_fixed_point(&origin));
        assert!(!s.is_local_isomorphism(&origin));
        assert!(s.is_local_isomorphism(&ones));
        // (x, y) -> (y, x + y^2)
        let f = map("P^2: [x0^2 : x0*x2 : x0*x1 + x2^2]");
        assert!(f.is_fixed_point(&origin));
        assert!(f.is_local_isomorphism(&origin));
        let id = CremonaMap::identity(Q, 2);
        let pt = ProjPoint::from_ints(Q, &[0, 3, -2]).unwrap();
        assert_eq!(id.apply(&pt).unwrap(), pt);
        assert!(id.is_local_isomorphism(&pt));
    }

    #[test]
    fn chart_examples() {
        let dec = sigma().to_chart().unwrap();
        let x = parse_polynomial(Q, 2, 1, "x1").unwrap();
        let y = parse_polynomial(Q, 2, 1, "x2").unwrap();
        let one = Polynomial::one(Q, 2);
        assert_eq!((dec.p(1, 0), dec.q(1, 1)), (one.clone(), x));
        assert_eq!((dec.p(2, 0), dec.q(2, 1)), (one, y));
        assert!(dec.q(1, 0).is_zero());

        let lin = map("P^2: [x0 : 3x1 : 5x2]");
        let fs = lin.to_chart().unwrap().rational_functions().unwrap();
        assert_eq!(fs[0].to_string(), "3*x0");

        // Homogenizing (x, y + x^2) by hand: multiply through by x0^2.
        let tri = map("P^2: [x0^2 : x0*x1 : x0*x2 + x1^2]");
        assert_eq!(CremonaMap::from_chart(&tri.to_chart().unwrap()).unwrap(), tri);
        assert_eq!(
            map("P^2: [0 : x1 : x2]").to_chart(),
            Err(Error::ChartDegenerate)
        );
    }

    #[test]
    fn linear_maps_compose_as_matrices() {
        let a = ProjLinear::new(Matrix::from_ints(Q, &[&[1, 2, 0], &[0, 1, 0], &[3, 0, 1]])).unwrap();
        let b = ProjLinear::new(Matrix::from_ints(Q, &[&[2, 0, 1], &[1, 1, 0], &[0, 0, 1]])).unwrap();
        let ab = CremonaMap::from_linear(&a)
            .compose(&CremonaMap::from_linear(&b))
            .unwrap();
        // Hand product A*B = [[4,2,1],[1,1,0],[6,0,4]].
        let expected = ProjLinear::new(Matrix::from_ints(Q, &[&[4, 2, 1], &[1, 1, 0], &[6, 0, 4]])).unwrap();
        assert_eq!(ab.to_linear().unwrap(), expected);
        let s = sigma();
        let conj = s.compose(&CremonaMap::from_linear(&a)).unwrap();
        assert_eq!(max_degree([&s, &conj]), Ok(2));
    }

    fn arb_linear() -> impl Strategy<Value = CremonaMap> {
        prop::collection::vec(-3i64..4, 9).prop_filter_map("singular", |v| {
            let rows: Vec<&[i64]> = v.chunks(3).collect();
            ProjLinear::new(Matrix::from_ints(Q, &rows)).ok().map(|a| CremonaMap::from_linear(&a))
        })
    }

    fn arb_map() -> impl Strategy<Value = CremonaMap> {
        (arb_linear(), arb_linear(), 0usize..3).prop_map(|(a, b, k)| {
            let s = sigma();
            let tri = map("P^2: [x0^2 : x0*x1 : x0*x2 + x1^2]");
            match k {
                0 => a.compose(&s).unwrap().compose(&b).unwrap(),
                1 => a.compose(&tri).unwrap().compose(&b).unwrap(),
                _ => a.compose(&b).unwrap(),
            }
        })
    }

    fn arb_point() -> impl Strategy<Value = ProjPoint> {
        prop::collection::vec(-4i64..5, 3).prop_filter_map("zero point", |v| ProjPoint::from_ints(Q, &v).ok())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn compose_agrees_with_pointwise_application(f in arb_map(), g in arb_map(), p in arb_point()) {
            let fg = f.compose(&g).unwrap();
            prop_assert!(fg.degree() <= f.degree() * g.degree());
            if let Ok(gp) = g.apply(&p) {
                if let (Ok(lhs), Ok(rhs)) = (fg.apply(&p), f.apply(&gp)) {
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }

        #[test]
        fn compose_is_associative(f in arb_map(), g in arb_map(), h in arb_map()) {
            let left = f.compose(&g).unwrap().compose(&h).unwrap();
            let right = f.compose(&g.compose(&h).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn make_map_is_idempotent_and_text_round_trips(f in arb_map()) {
            prop_assert_eq!(CremonaMap::make_map(f.components().to_vec()).unwrap(), f.clone());
            prop_assert_eq!(CremonaMap::parse(Q, &f.to_string()).unwrap(), f);
        }

        #[test]
        fn linear_maps_are_local_isomorphisms_everywhere(a in arb_linear(), p in arb_point()) {
            prop_assert!(a.is_local_isomorphism(&p));
        }

        #[test]
        fn chart_round_trip(f in arb_map()) {
            if let Ok(dec) = f.to_chart() {
                prop_assert_eq!(CremonaMap::from_chart(&dec).unwrap(), f);
            }
        }
    }
}
