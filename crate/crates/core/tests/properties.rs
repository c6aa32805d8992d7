use num_rational::BigRational;
use proptest::prelude::*;

use srlab::field::{AnyField, FieldCfg, FiniteField, Gf, HahnField, HahnSeries};
use srlab::groups::{norm_n, norm_r, s_inv, s_mul, t_inv, t_mul, SElem, TElem};
use srlab::roots::{RootSystem, SystemKind};
use srlab::Quad;

fn quad(a: (i32, i32), b: (i32, i32), p: u32) -> Quad {
    let r = |(n, d): (i32, i32)| BigRational::new(n.into(), d.max(1).into());
    Quad::new(r(a), r(b), p)
}

fn ratio() -> impl Strategy<Value = (i32, i32)> {
    (-50i32..50, 1i32..12)
}

fn hahn(p: u32) -> HahnField {
    match FieldCfg::hahn_default(p, 1).build().unwrap() {
        AnyField::Hahn(h) => h,
        AnyField::Finite(_) => unreachable!(),
    }
}

/// An exact series from `(a, b, coefficient)` triples at exponents `(a + b sqrt p)/2`.
fn series(f: &HahnField, terms: &[(i64, i64, u16)]) -> HahnSeries {
    let q = f.coefficients().order() as u16;
    f.exact(
        terms
            .iter()
            .map(|&(a, b, c)| (f.exponent(a, b), Gf(c % q)))
            .collect(),
    )
}

fn terms() -> impl Strategy<Value = Vec<(i64, i64, u16)>> {
    prop::collection::vec((-3i64..6, 0i64..3, 1u16..3), 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quad_field_laws(a in ratio(), b in ratio(), c in ratio(), d in ratio(), p in prop::sample::select(vec![2u32, 3])) {
        let x = quad(a, b, p);
        let y = quad(c, d, p);
        let s = x.try_add(&y).unwrap();
        prop_assert_eq!(s.try_sub(&y).unwrap(), x.clone());
        if !y.is_zero() {
            prop_assert_eq!(x.try_mul(&y).unwrap().try_div(&y).unwrap(), x.clone());
        }
        prop_assert_eq!(x.try_mul(&y).unwrap(), y.try_mul(&x).unwrap());
    }

    #[test]
    fn quad_order_is_translation_invariant(a in ratio(), b in ratio(), c in ratio(), d in ratio(), e in ratio()) {
        let (x, y, z) = (quad(a, b, 3), quad(c, d, 3), quad(e, (0, 1), 3));
        prop_assert_eq!(x < y, x.try_add(&z).unwrap() < y.try_add(&z).unwrap());
        let gap = (x.to_f64() - y.to_f64()).abs();
        if gap > 1e-9 {
            prop_assert_eq!(x < y, x.to_f64() < y.to_f64());
        }
    }

    #[test]
    fn theta_squared_is_frobenius(p in prop::sample::select(vec![2u32, 3]), i in 0u16..27) {
        let f = FiniteField::new(p, 3).unwrap();
        let x = Gf(i % f.order() as u16);
        prop_assert_eq!(f.theta(f.theta(x)), f.frobenius(x));
    }

    #[test]
    fn suzuki_group_laws(v in prop::collection::vec(0u16..8, 6)) {
        let f = FiniteField::new(2, 3).unwrap();
        let e = |i: usize| SElem::new(Gf(v[i]), Gf(v[i + 1]));
        let (a, b, c) = (e(0), e(2), e(4));
        prop_assert_eq!(s_mul(&f, &s_mul(&f, &a, &b), &c), s_mul(&f, &a, &s_mul(&f, &b, &c)));
        prop_assert_eq!(s_mul(&f, &a, &s_inv(&f, &a)), SElem::new(Gf::ZERO, Gf::ZERO));
        prop_assert_eq!(norm_r(&f, &a) == Gf::ZERO, a == SElem::new(Gf::ZERO, Gf::ZERO));
    }

    #[test]
    fn ree_group_laws(v in prop::collection::vec(0u16..27, 9)) {
        let f = FiniteField::new(3, 3).unwrap();
        let e = |i: usize| TElem::new(Gf(v[i]), Gf(v[i + 1]), Gf(v[i + 2]));
        let (a, b, c) = (e(0), e(3), e(6));
        let zero = TElem::new(Gf::ZERO, Gf::ZERO, Gf::ZERO);
        prop_assert_eq!(t_mul(&f, &t_mul(&f, &a, &b), &c), t_mul(&f, &a, &t_mul(&f, &b, &c)));
        prop_assert_eq!(t_mul(&f, &a, &t_inv(&f, &a)), zero.clone());
        prop_assert_eq!(norm_n(&f, &t_inv(&f, &a)), norm_n(&f, &a));
        prop_assert_eq!(norm_n(&f, &a) == Gf::ZERO, a == zero);
    }

    #[test]
    fn reflections_are_involutions(kind in prop::sample::select(vec![SystemKind::B2, SystemKind::G2, SystemKind::F4]), i in 0usize..48, j in 0usize..48) {
        let sys = RootSystem::new(kind).unwrap();
        let (a, v) = (i % sys.len(), j % sys.len());
        let w = sys.reflect(a, v).unwrap();
        prop_assert_eq!(sys.reflect(a, w).unwrap(), v);
        prop_assert_eq!(sys.reflect(a, a).unwrap(), sys.negate(a).unwrap());
        prop_assert_eq!(sys.length_class(w).unwrap(), sys.length_class(v).unwrap());
    }

    #[test]
    fn hahn_ring_laws_on_exact_series(x in terms(), y in terms(), z in terms(), p in prop::sample::select(vec![2u32, 3])) {
        let f = hahn(p);
        let (a, b, c) = (series(&f, &x), series(&f, &y), series(&f, &z));
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.theta(&f.mul(&a, &b)), f.mul(&f.theta(&a), &f.theta(&b)));
    }

    #[test]
    fn hahn_valuation_is_multiplicative_and_theta_invariant(x in terms(), y in terms()) {
        let f = hahn(3);
        let (a, b) = (series(&f, &x), series(&f, &y));
        let (va, vb) = (f.val(&a).unwrap(), f.val(&b).unwrap());
        prop_assert_eq!(f.val(&f.mul(&a, &b)).unwrap(), va.try_add(&vb).unwrap());
        prop_assert_eq!(f.val(&f.theta(&a)).unwrap(), va.scale_sqrtp());
        prop_assert!(f.val(&f.add(&a, &b)).unwrap() >= va.min_of(&vb));
    }
}
