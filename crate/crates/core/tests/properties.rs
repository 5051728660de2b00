//! Structural identities over random arguments.

use dunkl::heat::{heat_kernel_nd, HeatKernel1D};
use dunkl::specfn::{dunkl_kernel_1d, kernel_symmetry_defect};
use dunkl::translation::TranslationMeasure;
use dunkl::MultiplicityVector;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_is_symmetric_and_scales(k in 0.0..3.0f64, x in -6.0..6.0f64, y in -6.0..6.0f64, lambda in -3.0..3.0f64) {
        prop_assert!(kernel_symmetry_defect(k, x, y, lambda) <= 1e-12);
    }

    #[test]
    fn kernel_is_positive_and_one_at_origin(k in 0.0..3.0f64, x in -20.0..20.0f64, y in -20.0..20.0f64) {
        prop_assert!(dunkl_kernel_1d(k, x, y) > 0.0);
        prop_assert_eq!(dunkl_kernel_1d(k, 0.0, y), 1.0);
    }

    #[test]
    fn heat_kernel_is_symmetric_and_even(k in 0.0..3.0f64, t in 0.05..20.0f64, x in -5.0..5.0f64, y in -5.0..5.0f64) {
        let h = HeatKernel1D::new(k).unwrap();
        let a = h.value(t, x, y);
        prop_assert!(a > 0.0);
        approx::assert_relative_eq!(a, h.value(t, y, x), max_relative = 1e-12);
        approx::assert_relative_eq!(a, h.value(t, -x, -y), max_relative = 1e-12);
    }

    #[test]
    fn product_heat_kernel_factorizes(k1 in 0.0..2.0f64, k2 in 0.0..2.0f64, t in 0.1..5.0f64, x in prop::array::uniform2(-3.0..3.0f64), y in prop::array::uniform2(-3.0..3.0f64)) {
        let m = MultiplicityVector::new(vec![k1, k2]).unwrap();
        let prod = HeatKernel1D::new(k1).unwrap().value(t, x[0], y[0]) * HeatKernel1D::new(k2).unwrap().value(t, x[1], y[1]);
        approx::assert_relative_eq!(heat_kernel_nd(&m, t, &x, &y).unwrap(), prod, max_relative = 1e-12);
    }

    #[test]
    fn translation_measure_has_unit_mass(k in 0.05..3.0f64, x in -4.0..4.0f64, y in -4.0..4.0f64) {
        prop_assume!(x.abs() > 1e-3 && y.abs() > 1e-3);
        let nu = TranslationMeasure::new(k, x, y).unwrap();
        prop_assert!((nu.mass() - 1.0).abs() <= 1e-8);
        prop_assert!(nu.total_variation() >= 1.0 - 1e-8);
    }
}
