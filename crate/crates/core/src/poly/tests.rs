use proptest::prelude::*;

use super::*;
use crate::parse::parse_polynomial;

const Q: FieldSpec = FieldSpec::Rational;

fn p(nvars: usize, s: &str) -> Polynomial {
    parse_polynomial(Q, nvars, 0, s).unwrap()
}

#[test]
fn arithmetic_examples() {
    assert_eq!(&p(2, "x0+x1") * &p(2, "x0-x1"), p(2, "x0^2 - x1^2"));
    let a = p(2, "3x0 - x1^2 + 1");
    assert_eq!(&a + &Polynomial::zero(Q, 2), a);
    // Monomial product feeding the involution composition check.
    assert_eq!(&p(3, "x0*x2") * &p(3, "x0*x1"), p(3, "x0^2*x1*x2"));
}

#[test]
fn arithmetic_errors() {
    let a = p(2, "x0");
    let b = p(3, "x0");
    assert!(matches!(poly_arith(&a, &b, PolyOp::Add), Err(Error::ArityMismatch { .. })));
    let c = parse_polynomial(FieldSpec::PrimeField(5), 2, 0, "x0").unwrap();
    assert_eq!(poly_arith(&a, &c, PolyOp::Mul), Err(Error::FieldMismatch));
}

#[test]
fn evaluation_examples() {
    let two = Scalar::from_int(Q, 2);
    let three = Scalar::from_int(Q, 3);
    assert_eq!(p(2, "x0^2 + x1").evaluate(&[two, three]).unwrap(), Scalar::from_int(Q, 7));
    let zero = vec![Scalar::zero(Q); 2];
    assert_eq!(p(2, "5 + x0*x1 - x1").evaluate(&zero).unwrap(), Scalar::from_int(Q, 5));
    let pt = [Scalar::one(Q), Scalar::zero(Q)];
    assert!(p(2, "x0*x1").evaluate(&pt).unwrap().is_zero());
    assert!(matches!(p(2, "x0").evaluate(&pt[..1]), Err(Error::ArityMismatch { .. })));
}

#[test]
fn homogeneous_component_examples() {
    let comps = p(2, "1 + x0 + x0*x1").homogeneous_components();
    assert_eq!(comps.len(), 3);
    assert_eq!(comps[&0], p(2, "1"));
    assert_eq!(comps[&1], p(2, "x0"));
    assert_eq!(comps[&2], p(2, "x0*x1"));
    let h = p(2, "x0^2 + 3x0*x1");
    assert_eq!(h.homogeneous_components().into_iter().collect::<Vec<_>>(), vec![(2, h.clone())]);
    let f2 = p(2, "x0 + x1^2").homogeneous_components();
    assert_eq!((f2[&1].clone(), f2[&2].clone()), (p(2, "x0"), p(2, "x1^2")));
    assert_eq!(Polynomial::zero(Q, 2).total_degree(), None);
}

#[test]
fn gcd_examples() {
    let g = gcd(&p(3, "x0^2*x1*x2"), &p(3, "x0*x1^2*x2")).unwrap();
    assert_eq!(g, p(3, "x0*x1*x2"));
    let three = [p(3, "x0^2*x1*x2"), p(3, "x0*x1^2*x2"), p(3, "x0*x1*x2^2")];
    assert_eq!(gcd_many(&three).unwrap().unwrap(), p(3, "x0*x1*x2"));
    let a = p(2, "-2x0 + 4x1^2");
    assert_eq!(gcd(&a, &Polynomial::zero(Q, 2)).unwrap(), a.monic());
    let g = gcd(&p(2, "x0^2 - x1^2"), &p(2, "x0^2 + 2x0*x1 + x1^2")).unwrap();
    assert_eq!(g, p(2, "x0 + x1"));
    // (x0 - x2)(x0*x1 + x1*x2 + 1) against its second factor
    let g = gcd(&p(3, "x0^2*x1 - x1*x2^2 + x0 - x2"), &p(3, "x0*x1 + x1*x2 + 1")).unwrap();
    assert_eq!(g, p(3, "x0*x1 + x1*x2 + 1"));
    let g = gcd(&p(3, "x0^2*x1 + x2"), &p(3, "x0*x1 + x2 + 1")).unwrap();
    assert!(g.is_constant());
}

#[test]
fn gcd_over_prime_field() {
    let f5 = FieldSpec::PrimeField(5);
    let a = parse_polynomial(f5, 2, 0, "(x0 + 2x1)*(x0 - x1^2)").unwrap();
    let b = parse_polynomial(f5, 2, 0, "(x0 + 2x1)*(x0 + 1)").unwrap();
    assert_eq!(gcd(&a, &b).unwrap(), parse_polynomial(f5, 2, 0, "x0 + 2x1").unwrap());
}

#[test]
fn exact_division_reports_remainder() {
    let (q, r) = p(2, "x0^2 + x1").div_rem(&p(2, "x0")).unwrap();
    assert_eq!(q, p(2, "x0"));
    assert_eq!(r, p(2, "x1"));
    assert_eq!(p(2, "x0^2 - x1^2").div_exact(&p(2, "x0 - x1")).unwrap(), Some(p(2, "x0 + x1")));
    assert_eq!(p(2, "x0^2 + x1").div_exact(&p(2, "x0")).unwrap(), None);
}

#[test]
fn jacobian_examples() {
    let rf = |s: &str| RationalFunction::from_polynomial(p(2, s));
    let origin = vec![Scalar::zero(Q); 2];
    let j = jacobian(&[rf("x1"), rf("x0 + x1^2")], &origin).unwrap();
    assert_eq!(j, crate::Matrix::from_ints(Q, &[&[0, 1], &[1, 0]]));
    let j = jacobian(&[rf("x0"), rf("x1 + x0^2")], &origin).unwrap();
    assert!(j.is_identity());
    let pt = vec![Scalar::from_int(Q, 3), Scalar::rational(-1, 2)];
    assert!(jacobian(&[rf("x0"), rf("x1")], &pt).unwrap().is_identity());
    let inv_x = RationalFunction::new(p(2, "1"), p(2, "x0")).unwrap();
    assert_eq!(jacobian(&[inv_x], &origin), Err(Error::PoleAtPoint));
}

#[test]
fn rational_function_is_reduced_and_normalized() {
    let f = RationalFunction::new(p(2, "2x1"), p(2, "4x0*x1")).unwrap();
    assert_eq!(f.numerator(), &p(2, "1/2"));
    assert_eq!(f.denominator(), &p(2, "x0"));
    let d = f.derivative(0).unwrap();
    assert_eq!(d.numerator(), &p(2, "-1/2"));
    assert_eq!(d.denominator(), &p(2, "x0^2"));
}

#[test]
fn homogenize_round_trip() {
    let a = p(2, "x0 + x1^2 + 1");
    let h = a.homogenize(2);
    assert!(h.is_homogeneous());
    assert_eq!(h, p(3, "x0*x1 + x2^2 + x0^2"));
    assert_eq!(h.dehomogenize(0), a);
}

// Random polynomials in three variables of small degree over Q.
fn arb_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -5i64..6), 0..6).prop_map(|terms| {
        Polynomial::from_terms(
            Q,
            3,
            terms
                .into_iter()
                .map(|((a, b, c), k)| (vec![a, b, c], Scalar::from_int(Q, k))),
        )
        .unwrap()
    })
}

fn arb_point() -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec((-6i64..7, 1i64..4).prop_map(|(n, d)| Scalar::rational(n, d)), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn components_reassemble(a in arb_poly()) {
        let comps = a.homogeneous_components();
        let mut sum = Polynomial::zero(Q, 3);
        for (d, c) in &comps {
            prop_assert!(c.is_homogeneous());
            prop_assert_eq!(c.total_degree(), Some(*d));
            sum = &sum + c;
        }
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in arb_poly(), b in arb_poly(), x in arb_point()) {
        let lhs = (&a * &b).evaluate(&x).unwrap();
        let rhs = &a.evaluate(&x).unwrap() * &b.evaluate(&x).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gcd_divides_and_leaves_coprime_cofactors(g in arb_poly(), a in arb_poly(), b in arb_poly()) {
        let ga = &g * &a;
        let gb = &g * &b;
        prop_assume!(!ga.is_zero() || !gb.is_zero());
        let d = gcd(&ga, &gb).unwrap();
        let ca = ga.div_exact(&d).unwrap();
        let cb = gb.div_exact(&d).unwrap();
        prop_assert!(ca.is_some() && cb.is_some());
        let cofactor_gcd = gcd(&ca.unwrap(), &cb.unwrap()).unwrap();
        prop_assert!(cofactor_gcd.is_constant());
        // g divides the gcd of the multiples
        if !g.is_zero() && !(a.is_zero() && b.is_zero()) {
            prop_assert!(d.div_exact(&g).unwrap().is_some());
        }
    }

    #[test]
    fn printed_form_reparses(a in arb_poly()) {
        prop_assert_eq!(parse_polynomial(Q, 3, 0, &a.to_string()).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // Chain rule: J(F∘G)(x) = J(F)(G(x)) · J(G)(x) for polynomial maps.
    #[test]
    fn jacobian_chain_rule(
        f in prop::collection::vec(arb_poly(), 3),
        g in prop::collection::vec(arb_poly(), 3),
        x in arb_point(),
    ) {
        let comp: Vec<Polynomial> = f.iter().map(|fi| fi.substitute(&g).unwrap()).collect();
        let rf = |ps: &[Polynomial]| ps.iter().cloned().map(RationalFunction::from_polynomial).collect::<Vec<_>>();
        let gx: Vec<Scalar> = g.iter().map(|gi| gi.evaluate(&x).unwrap()).collect();
        let lhs = jacobian(&rf(&comp), &x).unwrap();
        let rhs = &jacobian(&rf(&f), &gx).unwrap() * &jacobian(&rf(&g), &x).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn coprimality_certificate_never_claims_a_shared_factor() {
    use super::modular::certainly_coprime;
    let g = p(3, "x0 + 2x1 - x2");
    let a = &g * &p(3, "x0^2 + x1*x2");
    let b = &g * &p(3, "x2^2 - 3x0*x1");
    assert!(!certainly_coprime(&a, &b));
    assert!(certainly_coprime(&p(3, "x0^2 + x1*x2"), &p(3, "x2^2 - 3x0*x1")));
    let f5 = FieldSpec::PrimeField(5);
    let h = parse_polynomial(f5, 2, 0, "x0 + x1").unwrap();
    let c = &h * &parse_polynomial(f5, 2, 0, "x0^3 + 2x1^3").unwrap();
    assert!(!certainly_coprime(&c, &h.pow(2)));
    let qi = FieldSpec::GaussianRational;
    let l = parse_polynomial(qi, 2, 0, "x0 + i*x1").unwrap();
    assert!(!certainly_coprime(&(&l * &l), &(&l * &parse_polynomial(qi, 2, 0, "x0 - i*x1").unwrap())));
}

#[test]
fn gcd_with_coefficients_wider_than_one_prime() {
    let g = p(3, "x0^2 - 123456789012345678901/7 * x1*x2 + 5/3*x2^2");
    let a = &g * &p(3, "x0 + 99999999977*x1 - x2");
    let b = &g * &p(3, "x1^2 - 31/1000000007 * x0*x2 + x2^2");
    assert_eq!(gcd(&a, &b).unwrap(), g);
    assert_eq!(gcd(&(&a * &a), &(&a * &b)).unwrap(), (&a * &g).monic());
}

#[test]
fn gcd_over_gaussian_rationals() {
    let qi = |s: &str| parse_polynomial(FieldSpec::GaussianRational, 4, 0, s).unwrap();
    let g = qi("x0^2 + (3 - 2*i)*x1*x3 - (1/5)*i*x2^2");
    let a = &g * &qi("(2 + i)*x0^3 + x1*x2*x3 - 7*x3^3");
    let b = &g * &qi("x1^2 - (123456789 + 987654321*i)*x0*x2");
    assert_eq!(gcd(&a, &b).unwrap(), g);
    assert_eq!(gcd(&(&a * &b), &(&a * &a)).unwrap(), (&a * &g).monic());
    let c = qi("x0 + i*x1");
    assert!(gcd(&c, &qi("x0 - i*x1")).unwrap().is_constant());
}
