use proptest::prelude::*;

use locring::hensel::StructureIsomorphism;
use locring::lift::{induced_residue_morphism, lift_morphism};
use locring::{
    find_residue_isomorphisms, parse_field, Field, FieldAutomorphism, Poly, QuotientRing,
};

fn field(idx: usize) -> Field {
    match idx {
        0 => Field::prime(2).unwrap(),
        1 => Field::prime(3).unwrap(),
        2 => Field::prime(7).unwrap(),
        3 => Field::rationals(),
        _ => parse_field("F2[a]/(a^2+a+1)").unwrap(),
    }
}

fn poly_in(f: &Field, coeffs: &[i64]) -> Poly {
    Poly::from_i64s(f, coeffs)
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, 0..=max_len)
}

/// Horner composition without intermediate reduction, reduced at the end.
fn naive_compose_mod(p: &Poly, q: &Poly, m: &Poly) -> Poly {
    let f = p.field();
    let mut acc = Poly::zero(f);
    let mut pw = Poly::one(f);
    for c in p.coeffs() {
        acc = &acc + &pw.scale(c);
        pw = &pw * q;
    }
    acc.rem(m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn divmod_round_trip(fi in 0usize..5, a in coeffs(8), b in coeffs(5)) {
        let f = field(fi);
        let (a, b) = (poly_in(&f, &a), poly_in(&f, &b));
        prop_assume!(!b.is_zero());
        let (q, r) = a.divmod(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
    }

    #[test]
    fn bezout_identity(fi in 0usize..5, a in coeffs(6), b in coeffs(6)) {
        let f = field(fi);
        let (a, b) = (poly_in(&f, &a), poly_in(&f, &b));
        prop_assume!(!(a.is_zero() && b.is_zero()));
        let (g, u, v) = a.ext_gcd(&b).unwrap();
        prop_assert!(g.is_monic());
        prop_assert_eq!(&(&u * &a) + &(&v * &b), g.clone());
        prop_assert!(a.rem(&g).unwrap().is_zero() && b.rem(&g).unwrap().is_zero());
    }

    #[test]
    fn derivative_product_rule(fi in 0usize..5, a in coeffs(6), b in coeffs(6)) {
        let f = field(fi);
        let (a, b) = (poly_in(&f, &a), poly_in(&f, &b));
        let lhs = (&a * &b).derivative();
        let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_mod_matches_naive(fi in 0usize..5, p in coeffs(6), q in coeffs(4), m in coeffs(4)) {
        let f = field(fi);
        let (p, q) = (poly_in(&f, &p), poly_in(&f, &q));
        let mut m = poly_in(&f, &m);
        m = &m * &Poly::x(&f) + Poly::one(&f);
        prop_assume!(m.degree().unwrap_or(0) >= 1);
        prop_assert_eq!(p.compose_mod(&q, &m).unwrap(), naive_compose_mod(&p, &q, &m));
        prop_assert_eq!(p.compose(&q).unwrap().rem(&m).unwrap(), naive_compose_mod(&p, &q, &m));
    }

    #[test]
    fn automorphism_extension_is_a_ring_map(a in coeffs(5), b in coeffs(5), e in 1u32..4) {
        let f = field(4);
        let s = FieldAutomorphism::frobenius(e).unwrap();
        let gen = Poly::constant(&f, f.generator().unwrap());
        let (a, b) = (&poly_in(&f, &a) * &gen, &poly_in(&f, &b) + &gen);
        let sa = a.map_coeffs(s).unwrap();
        let sb = b.map_coeffs(s).unwrap();
        prop_assert_eq!((&a * &b).map_coeffs(s).unwrap(), &sa * &sb);
        prop_assert_eq!((&a + &b).map_coeffs(s).unwrap(), &sa + &sb);
    }

    #[test]
    fn digit_round_trip_over_rationals(k in 1usize..5, c in prop::collection::vec(-20i64..=20, 1..10)) {
        let f = Field::rationals();
        let ring = QuotientRing::make(poly_in(&f, &[-2, 0, 1]), k).unwrap();
        let iso = StructureIsomorphism::new(&ring).unwrap();
        let a = ring.element(&poly_in(&f, &c)).unwrap();
        let d = iso.to_digits(&a).unwrap();
        prop_assert_eq!(d.digits().len(), k);
        prop_assert_eq!(iso.from_digits(&d).unwrap(), a);
        prop_assert_eq!(iso.to_digits(&iso.from_digits(&d).unwrap()).unwrap(), d);
    }

    #[test]
    fn digit_product_is_ring_product(k in 1usize..5, a in coeffs(12), b in coeffs(12)) {
        let f = field(1);
        let ring = QuotientRing::make(poly_in(&f, &[1, 2, 0, 1]), k).unwrap();
        let iso = StructureIsomorphism::new(&ring).unwrap();
        let x = ring.element(&poly_in(&f, &a)).unwrap();
        let y = ring.element(&poly_in(&f, &b)).unwrap();
        let prod = iso.digit_mul(&iso.to_digits(&x).unwrap(), &iso.to_digits(&y).unwrap());
        prop_assert_eq!(iso.from_digits(&prod).unwrap(), &x * &y);
    }

    #[test]
    fn lifts_commute_with_projection(n in 2usize..5, m in 1usize..5, c in coeffs(12)) {
        prop_assume!(m <= n);
        let f = field(1);
        let p1 = poly_in(&f, &[1, 0, 1]);
        let p2 = poly_in(&f, &[2, 1, 1]);
        for g in find_residue_isomorphisms(&p1, &p2, FieldAutomorphism::Identity).unwrap() {
            let fn_ = lift_morphism(&g, n).unwrap();
            let fm = lift_morphism(&g, m).unwrap();
            let a = fn_.source().element(&poly_in(&f, &c)).unwrap();
            let left = fn_.apply(&a).unwrap().project(m).unwrap();
            let right = fm.apply(&a.project(m).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            prop_assert_eq!(induced_residue_morphism(&fn_).unwrap(), g);
        }
    }
}
