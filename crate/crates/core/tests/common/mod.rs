//! Shared oracles for the integration tests.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// ₁F₁(a; b; z) by its Taylor series in exact rational arithmetic, summed
/// until the last term is below 1e-40 of the sum.
pub fn taylor_oracle(a: &BigRational, b: &BigRational, z: &BigRational) -> f64 {
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    let eps = rat(1, 10).pow(40);
    let mut n = 0i64;
    loop {
        let nn = BigRational::from_integer(BigInt::from(n));
        term = term * (a + &nn) * z / ((b + &nn) * (&nn + BigRational::one()));
        sum += &term;
        n += 1;
        // Past n > 2|z| the terms shrink geometrically.
        if BigRational::from_integer(BigInt::from(n)) > z.abs() * rat(2, 1)
            && (term.abs() <= &eps * sum.abs() || term.is_zero())
        {
            break;
        }
    }
    sum.to_f64().unwrap()
}

/// The scalar multiplicities with their exact fractions.
pub fn exact_ks() -> Vec<(f64, BigRational)> {
    vec![
        (0.3, rat(3, 10)),
        (0.7, rat(7, 10)),
        (1.5, rat(3, 2)),
        (2.5, rat(5, 2)),
    ]
}

/// Largest relative deviation of ₁F₁(k; 2k+1; z) from the oracle over
/// z = i/4, |z| ≤ 25.
pub fn worst_taylor_deviation(k: f64, kr: &BigRational) -> f64 {
    let b = kr * rat(2, 1) + BigRational::one();
    (-100..=100)
        .step_by(5)
        .map(|zi| {
            let exact = taylor_oracle(kr, &b, &rat(zi, 4));
            let p = dunkl::specfn::KummerParams::new(k, 2.0 * k + 1.0, zi as f64 / 4.0).unwrap();
            let got = dunkl::specfn::hyp1f1(p).unwrap();
            ((got - exact) / exact).abs()
        })
        .fold(0.0, f64::max)
}
