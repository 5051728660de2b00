//! The Dunkl kernel E(x, y) for the reflection x ↦ −x and its product over
//! coordinates.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{gamma, ln_gamma};
use super::kummer::{hyp1f1_scaled, KummerParams, Scaled};
use super::MultiplicityVector;
use crate::error::{DunklError, Result};
use crate::quadrature::GaussRule;

/// Node count the complex kernel starts from before doubling.
pub const COMPLEX_KERNEL_START_NODES: usize = 64;
const COMPLEX_KERNEL_MAX_NODES: usize = 8192;
const COMPLEX_KERNEL_TOL: f64 = 1e-12;

/// |xξ| from which [`ComplexKernel`] switches to the large-argument expansion.
pub const COMPLEX_ASYMPTOTIC_OMEGA: f64 = 30.0;

fn assert_multiplicity(k: f64) {
    assert!(
        k.is_finite() && k >= 0.0,
        "multiplicity must be finite and non-negative, got {k}"
    );
}

/// E(x, y) in one dimension as a [`Scaled`] value.
///
/// # Panics
/// If `k` is negative or not finite.
pub fn dunkl_kernel_1d_scaled(k: f64, x: f64, y: f64) -> Scaled {
    assert_multiplicity(k);
    let xy = x * y;
    if k == 0.0 || xy == 0.0 {
        return Scaled::new(1.0, xy);
    }
    let p = KummerParams::new(k, 2.0 * k + 1.0, -2.0 * xy).expect("valid Kummer parameters");
    let m = hyp1f1_scaled(p).expect("Kummer function converges for kernel parameters");
    m.shift(xy)
}

/// E(x, y) = e^{xy} ₁F₁(k; 2k+1; −2xy); e^{xy} when k = 0.
///
/// # Panics
/// If `k` is negative or not finite.
pub fn dunkl_kernel_1d(k: f64, x: f64, y: f64) -> f64 {
    if k == 0.0 {
        return (x * y).exp();
    }
    dunkl_kernel_1d_scaled(k, x, y).value()
}

/// Product kernel ∏_j E_{k_j}(x_j, y_j).
pub fn dunkl_kernel_nd(mult: &MultiplicityVector, x: &[f64], y: &[f64]) -> Result<f64> {
    mult.check_point(x)?;
    mult.check_point(y)?;
    let mut log_scale = 0.0;
    let mut mantissa = 1.0;
    for j in 0..mult.dim() {
        let e = dunkl_kernel_1d_scaled(mult.get(j), x[j], y[j]);
        mantissa *= e.mantissa;
        log_scale += e.log_scale;
    }
    Ok(Scaled::new(mantissa, log_scale).value())
}

fn integral_prefactor(k: f64) -> f64 {
    (ln_gamma(k + 0.5) - ln_gamma(k) - 0.5 * PI.ln()).exp()
}

fn complex_kernel_with_rule(rule: &GaussRule, prefactor: f64, omega: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (&u, &w) in rule.nodes().iter().zip(rule.weights()) {
        acc += w * Complex64::from_polar(1.0, -omega * u);
    }
    acc * prefactor
}

/// E(x, −iξ) by Gauss–Jacobi quadrature of the integral representation,
/// doubling the node count until successive values agree to 1e-12.
pub fn dunkl_kernel_complex_1d(k: f64, x: f64, xi: f64) -> Result<Complex64> {
    if !(k.is_finite() && k >= 0.0) {
        return Err(DunklError::InvalidParameter {
            name: "k",
            value: k,
            reason: "complex kernel needs k >= 0",
        });
    }
    let omega = x * xi;
    if k == 0.0 {
        return Ok(Complex64::from_polar(1.0, -omega));
    }
    if omega == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let pre = integral_prefactor(k);
    let mut n = COMPLEX_KERNEL_START_NODES;
    let mut prev = complex_kernel_with_rule(&GaussRule::jacobi(n, k - 1.0, k)?, pre, omega);
    while n < COMPLEX_KERNEL_MAX_NODES {
        n *= 2;
        let next = complex_kernel_with_rule(&GaussRule::jacobi(n, k - 1.0, k)?, pre, omega);
        if (next - prev).norm() < COMPLEX_KERNEL_TOL {
            return Ok(next);
        }
        prev = next;
    }
    Err(DunklError::NonConvergence {
        z: omega,
        strategy: "gauss-jacobi node doubling",
    })
}

/// Leading-order comparator for E(x, y) as a function of xy.
///
/// Returns 1 for |xy| < 1, otherwise the large-|xy| leading term.
pub fn asymptotic_envelope(k: f64, xy: f64) -> f64 {
    assert!(k > 0.0, "envelope requires k > 0");
    if xy.abs() < 1.0 {
        return 1.0;
    }
    let c = gamma(k + 0.5) / PI.sqrt();
    if xy > 0.0 {
        (k * 2f64.ln() + c.ln() + xy - k * xy.ln()).exp()
    } else {
        let w = -xy;
        ((k - 1.0) * 2f64.ln() + (k * c).ln() + w - (k + 1.0) * w.ln()).exp()
    }
}

/// Reusable evaluator of E(x, ±iξ) for a fixed multiplicity.
///
/// Uses Gauss–Jacobi rules with 16 to 64 points, sized to |xξ|, below
/// [`COMPLEX_ASYMPTOTIC_OMEGA`] and the large-argument expansion of ₁F₁ on
/// the imaginary axis beyond it.
#[derive(Debug, Clone)]
pub struct ComplexKernel {
    k: f64,
    prefactor: f64,
    /// (bound on |ω|, rule) in increasing order.
    rules: Vec<(f64, GaussRule)>,
    ln_ratio_a: f64,
    ln_ratio_ba: f64,
}

impl ComplexKernel {
    pub fn new(k: f64) -> Result<Self> {
        if !(k.is_finite() && k >= 0.0) {
            return Err(DunklError::InvalidParameter {
                name: "k",
                value: k,
                reason: "must be finite and non-negative",
            });
        }
        if k == 0.0 {
            return Ok(Self {
                k,
                prefactor: 1.0,
                rules: Vec::new(),
                ln_ratio_a: 0.0,
                ln_ratio_ba: 0.0,
            });
        }
        let a = k;
        let b = 2.0 * k + 1.0;
        Ok(Self {
            k,
            prefactor: integral_prefactor(k),
            // an n-point rule integrates e^{−iωu} to ~1e-16 while |ω|^{2n}/(2n)! is that small
            rules: [
                (4.0, 16),
                (13.0, 32),
                (24.0, 48),
                (COMPLEX_ASYMPTOTIC_OMEGA, COMPLEX_KERNEL_START_NODES),
            ]
            .iter()
            .map(|&(w, n)| GaussRule::jacobi(n, k - 1.0, k).map(|r| (w, r)))
            .collect::<Result<_>>()?,
            ln_ratio_a: ln_gamma(b) - ln_gamma(a),
            ln_ratio_ba: ln_gamma(b) - ln_gamma(b - a),
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// E(x, −iξ) as a function of ω = xξ.
    pub fn minus_i(&self, omega: f64) -> Complex64 {
        if self.rules.is_empty() {
            return Complex64::from_polar(1.0, -omega);
        }
        if omega == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        if let Some((_, rule)) = self.rules.iter().find(|(w, _)| omega.abs() < *w) {
            return complex_kernel_with_rule(rule, self.prefactor, omega);
        }
        let v = self.asymptotic_positive(omega.abs());
        if omega > 0.0 {
            v
        } else {
            v.conj()
        }
    }

    /// E(x, iξ) as a function of ω = xξ.
    pub fn plus_i(&self, omega: f64) -> Complex64 {
        self.minus_i(-omega)
    }

    /// e^{−iω} ₁F₁(k; 2k+1; 2iω) for large ω > 0.
    fn asymptotic_positive(&self, omega: f64) -> Complex64 {
        let a = self.k;
        let b = 2.0 * a + 1.0;
        let y = 2.0 * omega;
        let iy = Complex64::new(0.0, y);
        // first expansion: Γ(b)/Γ(a) e^{iy} (iy)^{a−b} Σ (1−a)_s (b−a)_s / s! (iy)^{−s}
        let s1 = asymptotic_sum(1.0 - a, b - a, iy);
        let p1 = Complex64::from_polar(
            (self.ln_ratio_a + (a - b) * y.ln()).exp(),
            y + 0.5 * PI * (a - b),
        );
        // second: Γ(b)/Γ(b−a) e^{iπa} (iy)^{−a} Σ (a)_s (a−b+1)_s / s! (−iy)^{−s}
        let s2 = asymptotic_sum(a, a - b + 1.0, -iy);
        let p2 =
            Complex64::from_polar((self.ln_ratio_ba - a * y.ln()).exp(), PI * a - 0.5 * PI * a);
        let m = p1 * s1 + p2 * s2;
        m * Complex64::from_polar(1.0, -omega)
    }
}

fn asymptotic_sum(alpha: f64, beta: f64, w: Complex64) -> Complex64 {
    let inv = 1.0 / w;
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for s in 0..200 {
        let sf = s as f64;
        let next = term * inv * ((alpha + sf) * (beta + sf) / (sf + 1.0));
        if next.norm() >= term.norm() && s > 0 {
            break;
        }
        term = next;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfn::hyp1f1;

    #[test]
    fn trivial_values() {
        assert_eq!(dunkl_kernel_1d(0.7, 3.0, 0.0), 1.0);
        assert_eq!(dunkl_kernel_1d(0.0, 1.2, -0.5), (-0.6f64).exp());
    }

    #[test]
    fn matches_kummer_definition() {
        for &(k, x, y) in &[(0.7, 1.0, 2.0), (0.3, -1.5, 2.0), (2.5, 0.4, -0.9)] {
            let p = KummerParams::new(k, 2.0 * k + 1.0, -2.0 * x * y).unwrap();
            let direct = (x * y).exp() * hyp1f1(p).unwrap();
            let got = dunkl_kernel_1d(k, x, y);
            assert!((got - direct).abs() < 1e-13 * direct);
        }
    }

    #[test]
    fn product_kernel() {
        let m = MultiplicityVector::new(vec![0.5, 1.2]).unwrap();
        assert_eq!(dunkl_kernel_nd(&m, &[0.0, 0.0], &[3.0, -7.0]).unwrap(), 1.0);
        let m = MultiplicityVector::new(vec![0.7, 0.7]).unwrap();
        let v = dunkl_kernel_nd(&m, &[1.0, 2.0], &[3.0, -1.0]).unwrap();
        let w = dunkl_kernel_1d(0.7, 1.0, 3.0) * dunkl_kernel_1d(0.7, 2.0, -1.0);
        assert!((v - w).abs() < 1e-14 * w);
        let z = MultiplicityVector::new(vec![0.0, 0.0]).unwrap();
        let v = dunkl_kernel_nd(&z, &[1.0, 2.0], &[0.3, -1.0]).unwrap();
        assert!((v - (0.3f64 - 2.0).exp()).abs() < 1e-15);
        assert!(matches!(
            dunkl_kernel_nd(&m, &[1.0], &[1.0, 2.0]),
            Err(DunklError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn complex_kernel_trivial_points() {
        let one = Complex64::new(1.0, 0.0);
        assert!((dunkl_kernel_complex_1d(0.7, 5.0, 0.0).unwrap() - one).norm() < 1e-15);
        assert!((dunkl_kernel_complex_1d(0.7, 0.0, 7.0).unwrap() - one).norm() < 1e-15);
        assert!(dunkl_kernel_complex_1d(-0.1, 1.0, 1.0).is_err());
    }

    #[test]
    fn complex_kernel_reduces_to_real_kernel_at_real_argument() {
        // the same quadrature with a real exponent reproduces E(x, y)
        let k = 0.7;
        let rule = GaussRule::jacobi(64, k - 1.0, k).unwrap();
        let pre = integral_prefactor(k);
        let xy = 1.3;
        let v = pre * rule.integrate(|u| (xy * u).exp());
        assert!((v - dunkl_kernel_1d(k, 1.0, xy)).abs() < 1e-13 * v);
    }

    #[test]
    fn fast_kernel_agrees_with_doubling_quadrature() {
        for &k in &[0.3, 0.7, 1.5, 2.5] {
            let ck = ComplexKernel::new(k).unwrap();
            for &omega in &[
                -120.0, -45.0, -30.5, -29.5, -23.9, -3.0, 0.2, 3.99, 4.01, 7.0, 12.99, 13.01,
                23.99, 24.01, 29.9, 30.1, 44.0, 95.0, 200.0,
            ] {
                let slow = dunkl_kernel_complex_1d(k, 1.0, omega).unwrap();
                let fast = ck.minus_i(omega);
                assert!(
                    (slow - fast).norm() < 1e-11,
                    "k={k} ω={omega}: {slow} vs {fast}"
                );
            }
        }
    }

    #[test]
    fn envelope_trivial_branch() {
        assert_eq!(asymptotic_envelope(0.7, 0.0), 1.0);
        let expected = 2f64.powf(0.7) * gamma(1.2) / PI.sqrt() * 50f64.exp() * 50f64.powf(-0.7);
        assert!((asymptotic_envelope(0.7, 50.0) - expected).abs() < 1e-12 * expected);
        let expected =
            2f64.powf(-0.3) * 0.7 * gamma(1.2) / PI.sqrt() * 50f64.exp() * 50f64.powf(-1.7);
        assert!((asymptotic_envelope(0.7, -50.0) - expected).abs() < 1e-12 * expected);
    }
}
