//! Ring, gcd and rational-function invariants, checked by evaluation at
//! rational points and against known factorisations.

use std::sync::Arc;

use hypres_core::algebra::rational::{q, qf, Q};
use hypres_core::algebra::{gcd, Derivation, Monomial, MultiPoly, PolyRing, RationalFn};
use num_traits::Zero;
use proptest::prelude::*;

fn ring() -> Arc<PolyRing> {
    PolyRing::new(["x", "y", "z"])
}

/// Small dense polynomial from `(exponents, coefficient)` triples.
fn poly(r: &Arc<PolyRing>, terms: &[([u32; 3], i64)]) -> MultiPoly {
    MultiPoly::from_terms(r, terms.iter().map(|(e, c)| (Monomial::from_dense(e), q(*c))))
}

fn arb_terms() -> impl Strategy<Value = Vec<([u32; 3], i64)>> {
    prop::collection::vec(([0u32..3, 0u32..3, 0u32..3], -5i64..=5), 0..5)
}

fn arb_point() -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((-7i64..=7, 1i64..=4).prop_map(|(a, b)| qf(a, b)), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_operations_commute_with_evaluation(a in arb_terms(), b in arb_terms(), c in arb_terms(), pt in arb_point()) {
        let r = ring();
        let (a, b, c) = (poly(&r, &a), poly(&r, &b), poly(&r, &c));
        let ev = |p: &MultiPoly| p.eval_q(&pt);
        prop_assert_eq!(ev(&(a.clone() * b.clone())), ev(&a) * ev(&b));
        prop_assert_eq!(ev(&(a.clone() + b.clone())), ev(&a) + ev(&b));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert!((a.clone() - a.clone()).is_zero());
    }

    #[test]
    fn derivative_is_a_derivation(a in arb_terms(), b in arb_terms(), v in 0usize..3) {
        let r = ring();
        let (a, b) = (poly(&r, &a), poly(&r, &b));
        let lhs = (a.clone() * b.clone()).derivative(v);
        let rhs = a.derivative(v) * b.clone() + a.clone() * b.derivative(v);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_division_recovers_factor(a in arb_terms(), b in arb_terms()) {
        let r = ring();
        let (a, b) = (poly(&r, &a), poly(&r, &b));
        prop_assume!(!b.is_zero());
        prop_assert_eq!((a.clone() * b.clone()).div_exact(&b), Some(a));
    }

    /// `gcd(c p, c q) = c` up to a unit when `p`, `q` are products of
    /// distinct linear forms with disjoint root sets.
    #[test]
    fn gcd_of_known_factorisations(
        common in prop::collection::vec((-4i64..=4, -4i64..=4), 0..3),
        split in prop::collection::vec(any::<bool>(), 6),
    ) {
        let r = ring();
        let x = MultiPoly::var(&r, 0);
        let y = MultiPoly::var(&r, 1);
        let lin = |a: i64, b: i64| x.clone() - y.scale(&q(a)) - MultiPoly::constant(q(b));
        let mut c = MultiPoly::one();
        let mut used = std::collections::BTreeSet::new();
        for &(a, b) in &common {
            if used.insert((a, b)) {
                c = c * lin(a, b);
            }
        }
        let (mut p, mut qq) = (MultiPoly::one(), MultiPoly::one());
        for (i, s) in split.iter().enumerate() {
            let f = lin(10 + i as i64, 0);
            if *s { p = p * f } else { qq = qq * f }
        }
        let g = gcd(&(c.clone() * p), &(c.clone() * qq));
        prop_assert_eq!(g.monic(), c.monic());
    }

    #[test]
    fn rational_functions_evaluate_consistently(a in arb_terms(), b in arb_terms(), d in arb_terms(), pt in arb_point()) {
        let r = ring();
        let (a, b, d) = (poly(&r, &a), poly(&r, &b), poly(&r, &d));
        prop_assume!(!d.is_zero() && !d.eval_q(&pt).is_zero() && !b.eval_q(&pt).is_zero());
        let f = RationalFn::new(a.clone(), d.clone()).unwrap();
        let g = RationalFn::new(d.clone(), b.clone()).unwrap();
        let want = a.eval_q(&pt) / b.eval_q(&pt);
        prop_assert_eq!(f.mul_fn(&g).eval_q(&pt).unwrap(), want);
        let s = f.add_fn(&g).eval_q(&pt).unwrap();
        prop_assert_eq!(s, a.eval_q(&pt) / d.eval_q(&pt) + d.eval_q(&pt) / b.eval_q(&pt));
        prop_assert!(f.sub_fn(&f).is_zero());
    }

    #[test]
    fn derivation_commutator_is_a_derivation(a in arb_terms(), b in arb_terms(), p in arb_terms()) {
        let r = ring();
        let (a, b, p) = (poly(&r, &a), poly(&r, &b), poly(&r, &p));
        let d1 = Derivation::new(&r, [(0, a), (2, MultiPoly::var(&r, 1))]);
        let d2 = Derivation::new(&r, [(1, b)]);
        let c = d1.commutator(&d2).unwrap();
        let lhs = c.apply_poly(&p).unwrap();
        let rhs = d1.apply_poly(&d2.apply_poly(&p).unwrap()).unwrap() - d2.apply_poly(&d1.apply_poly(&p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
