//! End-to-end runs through the public API, one per layer.

use hypres_core::algebra::rational::{q, qf, GaussRat};
use hypres_core::bands::{correspondence_table, p_rk, BandPolynomial};
use hypres_core::liealg::{representation_sign, verify_structure_constants};
use hypres_core::poisson::quadrature::sphere_volume;
use proptest::prelude::*;

#[test]
fn lie_layer() {
    for n in 2..=4 {
        assert!(verify_structure_constants(n).unwrap().all_pass(), "n = {n}");
        let s = representation_sign(n).unwrap();
        assert!(s.anchor_ok);
        assert!(s.epsilon.is_some());
    }
}

#[test]
fn band_table_at_generic_real_point() {
    let t = correspondence_table(&GaussRat::real(qf(-11, 5)), 2).unwrap();
    // Re λ₀ = -2.2, so bands m = 0, 1, 2 are nonempty and m >= 3 are empty.
    assert_eq!(t.first_empty_band, 3);
    assert_eq!(t.entries.len(), 4);
    assert!(t.entries.iter().all(|e| !e.excluded));
    // s0 = λ₀ + m + n for every entry
    for e in &t.entries {
        assert_eq!(e.s0, GaussRat::real(qf(-11, 5) + q(e.m as i64 + 2)));
    }
}

#[test]
fn sphere_volumes() {
    let pi = std::f64::consts::PI;
    assert!((sphere_volume(1) - 2.0 * pi).abs() < 1e-14);
    assert!((sphere_volume(2) - 4.0 * pi).abs() < 1e-14);
    assert!((sphere_volume(3) - 2.0 * pi * pi).abs() < 1e-13);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The expanded band polynomial agrees with the unexpanded product.
    #[test]
    fn band_polynomial_expansion(n in 2usize..7, r in 0usize..4, k in 0usize..3, a in -20i64..20, b in 1i64..6) {
        let p = p_rk(n, r, k).unwrap();
        let x = qf(a, b);
        prop_assert_eq!(p.eval_q(&x), BandPolynomial::eval_product(n, r, k, &x));
        prop_assert_eq!(p.degree(), 2 * k + r);
    }
}
