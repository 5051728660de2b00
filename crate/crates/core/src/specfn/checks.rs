//! Numerical identities of ₁F₁ and the one-dimensional Dunkl kernel.

use super::kernel::{asymptotic_envelope, dunkl_kernel_1d};
use super::kummer::{hyp1f1_asymptotic, hyp1f1_series, KummerParams};
use crate::error::Result;

/// Largest relative gap between the series and asymptotic branches of
/// ₁F₁(k; 2k+1; ±z) over z ∈ `zs`. Zero when k = 0, where ₁F₁ ≡ 1.
pub fn branch_agreement(k: f64, zs: &[f64]) -> Result<f64> {
    if k == 0.0 {
        return Ok(0.0);
    }
    let mut worst = 0.0f64;
    for &z in zs {
        for sz in [z, -z] {
            let p = KummerParams::new(k, 2.0 * k + 1.0, sz)?;
            let s = hyp1f1_series(p)?.value();
            let a = hyp1f1_asymptotic(p)?.value();
            worst = worst.max((s - a).abs() / s.abs());
        }
    }
    Ok(worst)
}

/// |D_x E(x, y) − y E(x, y)| relative to |y E| + |∂_x E|, with the Dunkl
/// operator D f(x) = f′(x) + k (f(x) − f(−x))/x and a fourth-order
/// difference of step `h` for f′. x must be nonzero.
pub fn eigen_residual(k: f64, x: f64, y: f64, h: f64) -> f64 {
    let e = |u: f64| dunkl_kernel_1d(k, u, y);
    let d1 = (e(x - 2.0 * h) - 8.0 * e(x - h) + 8.0 * e(x + h) - e(x + 2.0 * h)) / (12.0 * h);
    let ex = e(x);
    let d = d1 + k * (ex - e(-x)) / x;
    (d - y * ex).abs() / ((y * ex).abs() + d1.abs())
}

/// max of the relative gaps in E(x, y) = E(y, x) and E(λx, y) = E(x, λy).
pub fn kernel_symmetry_defect(k: f64, x: f64, y: f64, lambda: f64) -> f64 {
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    let swap = rel(dunkl_kernel_1d(k, x, y), dunkl_kernel_1d(k, y, x));
    let scale = rel(
        dunkl_kernel_1d(k, lambda * x, y),
        dunkl_kernel_1d(k, x, lambda * y),
    );
    swap.max(scale)
}

/// E(x, y)/envelope − 1, see [`asymptotic_envelope`].
pub fn envelope_ratio_defect(k: f64, xy: f64) -> f64 {
    let x = xy.abs().sqrt();
    let y = xy / x;
    (super::kernel::dunkl_kernel_1d_scaled(k, x, y).ln_abs() - asymptotic_envelope(k, xy).ln())
        .exp_m1()
}

/// First-order term of E/envelope − 1 at large |xy|: −k²/(2xy) for xy > 0
/// and (1 − k²)/(2|xy|) for xy < 0.
pub fn envelope_correction(k: f64, xy: f64) -> f64 {
    if xy > 0.0 {
        -k * k / (2.0 * xy)
    } else {
        (1.0 - k * k) / (2.0 * xy.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branches_agree() {
        let zs: Vec<f64> = (0..=20).map(|i| 25.0 + 0.5 * i as f64).collect();
        assert!(branch_agreement(0.7, &zs).unwrap() < 1e-8);
        assert_eq!(branch_agreement(0.0, &zs).unwrap(), 0.0);
    }

    #[test]
    fn eigenfunction() {
        for &(k, x, y) in &[(0.7, 0.8, 1.3), (2.5, -1.2, 0.4), (0.0, 0.5, -2.0)] {
            let r = eigen_residual(k, x, y, 1e-3);
            assert!(r < 1e-9, "{k} {x} {y}: {r}");
        }
    }

    #[test]
    fn corrections_track_the_ratio() {
        for &k in &[0.3, 1.5] {
            for &xy in &[100.0, -100.0] {
                let d = envelope_ratio_defect(k, xy);
                let c = envelope_correction(k, xy);
                assert!((d - c).abs() < 0.1 * c.abs(), "{k} {xy}: {d} vs {c}");
            }
        }
        assert!(kernel_symmetry_defect(0.7, 1.1, -2.3, 0.6) < 1e-13);
    }
}
