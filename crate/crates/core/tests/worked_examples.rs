//! Small hand-computed instances, exercised through the public API.

use cremona_core::affine::{centralizes, compose_auto, normalizes_torus};
use cremona_core::cocycle::{coboundary, trivialize, trivializes, validate_cocycle};
use cremona_core::cremona::max_degree;
use cremona_core::deformation::{
    build_family, commutator_family, extendability, limit_vs_jacobian, move_point_to_origin, scaling_map,
};
use cremona_core::linear::{
    fixed_points, gauss_decompose, in_congruence_subgroup, projective_points, transvection_product,
    two_fixed_point_automorphism,
};
use cremona_core::parse::parse_polynomial;
use cremona_core::poly::{gcd, jacobian};
use cremona_core::{
    Cocycle, CremonaMap, DieudonneAutomorphism, FieldAutomorphism, FieldSpec, Matrix, PolyAuto, Polynomial,
    ProjLinear, ProjPoint, RationalFunction, Scalar, Transvection,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const Q: FieldSpec = FieldSpec::Rational;
const QI: FieldSpec = FieldSpec::GaussianRational;
const F5: FieldSpec = FieldSpec::PrimeField(5);

fn hom(s: &str) -> Polynomial {
    parse_polynomial(Q, 3, 0, s).unwrap()
}

fn aff(s: &str) -> Polynomial {
    parse_polynomial(Q, 2, 1, s).unwrap()
}

fn sigma() -> CremonaMap {
    CremonaMap::parse(Q, "P^2: [x1*x2 : x0*x2 : x0*x1]").unwrap()
}

fn chart_map(fs: &[&str]) -> CremonaMap {
    let one = Polynomial::one(Q, 2);
    let rs: Vec<_> = fs.iter().map(|s| RationalFunction::new(aff(s), one.clone()).unwrap()).collect();
    CremonaMap::from_rational_functions(&rs).unwrap()
}

fn point(field: FieldSpec, coords: &[i64]) -> ProjPoint {
    ProjPoint::from_ints(field, coords).unwrap()
}

fn mat(field: FieldSpec, rows: &[&[i64]]) -> Matrix {
    Matrix::from_ints(field, rows)
}

fn q(n: i64) -> Scalar {
    Scalar::from_int(Q, n)
}

#[test]
fn polynomial_products_and_gcds() {
    assert_eq!(&hom("x0*x2") * &hom("x0*x1"), hom("x0^2*x1*x2"));
    assert_eq!(gcd(&hom("x0^2*x1*x2"), &hom("x0*x1^2*x2")).unwrap(), hom("x0*x1*x2"));
    let g = gcd(&aff("x1^2 - x2^2"), &aff("x1^2 + 2*x1*x2 + x2^2")).unwrap();
    assert_eq!(g.monic(), aff("x1 + x2"));
    let parts = aff("x1 + x2^2").homogeneous_components();
    assert_eq!(parts[&1], aff("x1"));
    assert_eq!(parts[&2], aff("x2^2"));
}

#[test]
fn chart_jacobians() {
    let one = Polynomial::one(Q, 2);
    let rf = |s| RationalFunction::new(aff(s), one.clone()).unwrap();
    let zero = [q(0), q(0)];
    assert_eq!(jacobian(&[rf("x2"), rf("x1 + x2^2")], &zero).unwrap(), mat(Q, &[&[0, 1], &[1, 0]]));
    assert_eq!(jacobian(&[rf("x1"), rf("x2 + x1^2")], &zero).unwrap(), Matrix::identity(Q, 2));
}

#[test]
fn maps_reduce_and_compose() {
    let s = sigma();
    assert_eq!(s.degree(), 2);
    let veronese = CremonaMap::parse(Q, "P^2: [x0^2 : x0*x1 : x1^2]");
    assert_eq!(veronese.map(|m| m.degree()), Ok(2));
    let ss = s.compose(&s).unwrap();
    assert!(ss.is_identity());
    assert_eq!(ss.degree(), 1);
    let a = ProjLinear::new(mat(Q, &[&[1, 2, 0], &[0, 1, 0], &[3, 0, 1]])).unwrap();
    let b = ProjLinear::new(mat(Q, &[&[2, 0, 1], &[0, 1, 1], &[0, 0, 1]])).unwrap();
    let ab = CremonaMap::from_linear(&a).compose(&CremonaMap::from_linear(&b)).unwrap();
    assert_eq!(ab, CremonaMap::from_linear(&ProjLinear::new(a.matrix() * b.matrix()).unwrap()));
    let st = s.compose(&CremonaMap::from_linear(&a)).unwrap();
    assert_eq!(max_degree([&CremonaMap::identity(Q, 2), &s]).unwrap(), 2);
    assert_eq!(max_degree([&s, &st]).unwrap(), 2);
}

#[test]
fn evaluation_and_local_behaviour() {
    let s = sigma();
    assert_eq!(s.apply(&point(Q, &[1, 1, 1])).unwrap(), point(Q, &[1, 1, 1]));
    assert!(s.apply(&point(Q, &[1, 0, 0])).is_err());
    let origin = ProjPoint::origin(Q, 2);
    let f = chart_map(&["x2", "x1 + x2^2"]);
    assert!(f.is_fixed_point(&origin));
    assert!(f.is_local_isomorphism(&origin));
    assert!(!s.is_local_isomorphism(&origin));
    let chart = s.to_chart().unwrap();
    for i in 1..=2 {
        assert!(!chart.p(i, 0).is_zero());
        assert!(chart.q(i, 0).is_zero());
    }
    let tri = chart_map(&["x1", "x2 + x1^2"]);
    assert_eq!(CremonaMap::from_chart(&tri.to_chart().unwrap()).unwrap(), tri);
}

#[test]
fn deformation_families() {
    let f = chart_map(&["x2", "x1 + x2^2"]);
    let fam = build_family(&f).unwrap();
    let t = q(7);
    let spec = fam.specialize(&t).unwrap();
    assert_eq!(spec[0].numerator(), &aff("x2"));
    assert_eq!(spec[1], RationalFunction::new(aff("x1 + 7*x2^2"), Polynomial::one(Q, 2)).unwrap());
    let v = extendability(&fam);
    assert!(v.extendable);
    assert_eq!(v.limit.unwrap(), ProjLinear::new(mat(Q, &[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]])).unwrap());
    assert!(limit_vs_jacobian(&f).unwrap());

    let v = extendability(&build_family(&sigma()).unwrap());
    assert!(!v.extendable);
    assert_eq!(v.reasons.p_i0_nonzero, vec![true, true]);

    let v = extendability(&build_family(&chart_map(&["x1", "x2 + x1^2"])).unwrap());
    assert!(v.extendable && v.limit.unwrap().is_identity());
    assert!(limit_vs_jacobian(&chart_map(&["x1 + x2^2", "x2"])).unwrap());
}

#[test]
fn scaling_group_law() {
    let b = |t: i64| scaling_map(Q, 2, &q(t)).unwrap();
    assert_eq!(b(2).compose(&b(3)).unwrap(), b(6));
    assert!(scaling_map(Q, 2, &q(0)).is_err());
}

#[test]
fn moving_points_and_commutators() {
    let p = point(Q, &[1, 1, 1]);
    let a = move_point_to_origin(&p);
    assert_eq!(a.apply(&p).unwrap(), ProjPoint::origin(Q, 2));

    let f = chart_map(&["x1", "x2 + x1^2"]);
    let f_inv = chart_map(&["x1", "x2 - x1^2"]);
    let alpha = ProjLinear::new(Matrix::diagonal(&[q(1), q(1), q(2)])).unwrap();
    let fam = commutator_family(&f, Some(&f_inv), &alpha, &ProjPoint::origin(Q, 2)).unwrap();
    let v = extendability(&fam);
    assert!(v.extendable);
    let comm = CremonaMap::from_linear(&alpha.proj_inv())
        .compose(&f_inv.compose(&CremonaMap::from_linear(&alpha).compose(&f).unwrap()).unwrap())
        .unwrap();
    let fs = comm.to_chart().unwrap().rational_functions().unwrap();
    let j = jacobian(&fs, &[q(0), q(0)]).unwrap();
    let mut expected = Matrix::identity(Q, 3);
    for r in 0..2 {
        for c in 0..2 {
            expected.set(r + 1, c + 1, j.get(r, c).clone());
        }
    }
    assert_eq!(v.limit.unwrap(), ProjLinear::new(expected).unwrap());

    let s = sigma();
    let swap = ProjLinear::new(mat(Q, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])).unwrap();
    let fam = commutator_family(&s, Some(&s), &swap, &p).unwrap();
    assert!(extendability(&fam).extendable);
    assert!(commutator_family(&s, None, &swap, &p).is_err());
}

#[test]
fn linear_examples() {
    let a = ProjLinear::new(mat(Q, &[&[1, 1], &[0, 1]])).unwrap();
    let b = ProjLinear::new(mat(Q, &[&[1, 0], &[1, 1]])).unwrap();
    assert_eq!(a.proj_mul(&b).unwrap(), ProjLinear::new(mat(Q, &[&[2, 1], &[1, 1]])).unwrap());
    let g = ProjLinear::new(mat(F5, &[&[1, 2], &[0, 1]])).unwrap();
    let expected = ProjLinear::new(mat(F5, &[&[1, 0], &[3, 1]])).unwrap();
    assert_eq!(g.transpose_inverse(), expected);
    let phi = DieudonneAutomorphism::new(ProjLinear::identity(F5, 1), FieldAutomorphism::identity(F5), true).unwrap();
    assert_eq!(phi.apply(&g).unwrap(), expected);
    let phi0 = DieudonneAutomorphism::new(ProjLinear::identity(F5, 1), FieldAutomorphism::identity(F5), false).unwrap();
    assert_eq!(phi0.apply(&g).unwrap(), g);
}

#[test]
fn gauss_and_congruence() {
    let a = mat(Q, &[&[2, 1], &[1, 1]]);
    let ts = gauss_decompose(&a).unwrap();
    assert_eq!(transvection_product(Q, 2, &ts), a);
    let e01 = Transvection::new(0, 1, q(1)).unwrap().matrix(2);
    let e10 = Transvection::new(1, 0, q(1)).unwrap().matrix(2);
    assert_eq!(&e01 * &e10, a);
    let e = Transvection::new(0, 1, q(3)).unwrap().matrix(2);
    assert!(in_congruence_subgroup(&e, 3).unwrap());
    assert!(!in_congruence_subgroup(&a, 3).unwrap());
}

#[test]
fn two_fixed_points() {
    let p = point(Q, &[1, 0, 0]);
    let r = point(Q, &[0, 0, 1]);
    let a = two_fixed_point_automorphism(&p, &r, &q(2)).unwrap();
    assert_eq!(a, ProjLinear::new(mat(Q, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 2]])).unwrap());
    let m = ProjLinear::new(mat(F5, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 2]])).unwrap();
    let pts = projective_points(5, 2).unwrap();
    assert_eq!(pts.len(), 31);
    let mut fixed = fixed_points(&m, &pts).unwrap();
    fixed.sort_by_key(|x| x.to_string());
    assert_eq!(fixed, vec![point(F5, &[0, 0, 1]), point(F5, &[1, 0, 0])]);
}

#[test]
fn affine_automorphisms() {
    let x = |i| Polynomial::var(Q, 2, i);
    let f = PolyAuto::triangular(1, &x(0).pow(2)).unwrap();
    assert_eq!(f.forward(), &[x(0), &x(1) + &x(0).pow(2)]);
    assert_eq!(f.inverse(), &[x(0), &x(1) - &x(0).pow(2)]);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let translation = PolyAuto::translation(&[q(1), q(0)]).unwrap();
    assert!(!normalizes_torus(&translation, 8, &mut rng));
    assert!(!normalizes_torus(&f, 8, &mut rng));

    let two = PolyAuto::linear(&Matrix::diagonal(&[q(2), q(2)])).unwrap();
    assert!(!centralizes(&f, &[two]));
    let a = q(5);
    let fa = PolyAuto::translation(&[a.clone(), q(0)]).unwrap();
    let c = PolyAuto::linear(&Matrix::diagonal(&[q(1), q(7)])).unwrap();
    assert!(centralizes(&fa, &[c]));

    let t = PolyAuto::torus(&[q(2), q(1)]).unwrap();
    let one = PolyAuto::translation(&[q(1), q(0)]).unwrap();
    let conj = compose_auto(&compose_auto(&t, &one).unwrap(), &t.inv()).unwrap();
    assert_eq!(conj.forward(), &[&x(0) + &Polynomial::constant(q(2), 2), x(1)]);
    assert_eq!(conj, compose_auto(&one, &one).unwrap());

    let h = PolyAuto::triangular(0, &x(1)).unwrap();
    let expected = [&(&x(0) + &x(1)) + &Polynomial::constant(a, 2), x(1)];
    assert_eq!(compose_auto(&fa, &h).unwrap().forward(), &expected);
    assert_eq!(compose_auto(&h, &fa).unwrap().forward(), &expected);
}

#[test]
fn cocycle_examples() {
    let one_by_one = |s: Scalar| Matrix::from_rows(QI, vec![vec![s]]).unwrap();
    assert!(validate_cocycle(&Cocycle::parse("[[i]]").unwrap()));
    assert!(!validate_cocycle(&Cocycle::parse("[[2]]").unwrap()));
    let nu = coboundary(&one_by_one(Scalar::gaussian_int(1, 1))).unwrap();
    assert_eq!(nu.sigma(), &one_by_one(Scalar::i()));
    let a = trivialize(&nu).unwrap();
    assert_eq!(a, one_by_one(Scalar::gaussian_int(1, 1)));
    assert!(trivializes(&nu, &a));
}
