//! ₁F₁(k, 2k+1, z) against its Taylor series summed in exact rational arithmetic.

mod common;

use common::{exact_ks, rat, taylor_oracle, worst_taylor_deviation};
use dunkl::specfn::{dunkl_kernel_1d, KummerParams};
use num::BigRational;

#[test]
fn series_matches_exact_taylor_sum() {
    for (k, kr) in exact_ks() {
        let worst = worst_taylor_deviation(k, &kr);
        assert!(worst <= 1e-10, "k={k}: {worst:e}");
    }
}

#[test]
fn oracle_reproduces_exponential() {
    // ₁F₁(a; a; z) = e^z
    let a = rat(7, 10);
    for zi in [-20, -3, 0, 5, 25] {
        let v = taylor_oracle(&a, &a, &BigRational::from_integer(zi.into()));
        assert!((v / (zi as f64).exp() - 1.0).abs() < 1e-15);
    }
}

#[test]
fn zero_multiplicity_is_the_exponential() {
    assert!(KummerParams::new(0.0, 1.0, 3.0).is_err());
    for (x, y) in [(-5.0, 2.0), (0.0, 7.0), (1.5, 3.0)] {
        let e = dunkl_kernel_1d(0.0, x, y);
        assert!((e / f64::exp(x * y) - 1.0).abs() < 1e-15);
    }
}
