//! The heat kernel h_t(x, y) of the Dunkl Laplacian and its product form.

use std::f64::consts::PI;

use crate::error::{check_positive, DunklError, Result};
use crate::specfn::gamma::ln_gamma;
use crate::specfn::{hyp1f1_scaled, KummerParams, MultiplicityVector, Scaled};

/// h_t(x,y) = c_k⁻¹ t^{−k−½} e^{−(x−y)²/4t} ₁F₁(k; 2k+1; −xy/t) with
/// c_k = 2^{2k+1} Γ(k+½).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatKernel1D {
    k: f64,
    ln_ck: f64,
}

impl HeatKernel1D {
    pub fn new(k: f64) -> Result<Self> {
        if !(k.is_finite() && k >= 0.0) {
            return Err(DunklError::InvalidParameter {
                name: "k",
                value: k,
                reason: "multiplicity must be finite and non-negative",
            });
        }
        let ln_ck = (2.0 * k + 1.0) * std::f64::consts::LN_2 + ln_gamma(k + 0.5);
        Ok(Self { k, ln_ck })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// The normalization c_k; 2√π at k = 0.
    pub fn c_k(&self) -> f64 {
        self.ln_ck.exp()
    }

    /// h_t(x, y) as a [`Scaled`] value, so that arguments with −xy/t far
    /// beyond the overflow range stay representable.
    pub fn scaled(&self, t: f64, x: f64, y: f64) -> Scaled {
        debug_assert!(t > 0.0);
        let pre = -self.ln_ck - (self.k + 0.5) * t.ln() - (x - y) * (x - y) / (4.0 * t);
        if self.k == 0.0 || x * y == 0.0 {
            return Scaled::new(1.0, pre);
        }
        Self::kummer(self.k, 2.0 * self.k + 1.0, -x * y / t).shift(pre)
    }

    fn kummer(a: f64, b: f64, z: f64) -> Scaled {
        let p = KummerParams::new(a, b, z).expect("heat kernel Kummer parameters");
        hyp1f1_scaled(p).expect("Kummer function converges for heat kernel parameters")
    }

    pub fn value(&self, t: f64, x: f64, y: f64) -> f64 {
        self.scaled(t, x, y).value()
    }

    /// ln h_t(x, y).
    pub fn ln_value(&self, t: f64, x: f64, y: f64) -> f64 {
        self.scaled(t, x, y).ln_abs()
    }

    /// ∂h_t(x, y)/∂y from the closed form
    /// c_k⁻¹ t^{−k−½} e^{−(x−y)²/4t} {(x−y)/2t ₁F₁(k;2k+1;−xy/t) − k/(2k+1) x/t ₁F₁(k+1;2k+2;−xy/t)}.
    pub fn grad_y_scaled(&self, t: f64, x: f64, y: f64) -> Scaled {
        let pre = -self.ln_ck - (self.k + 0.5) * t.ln() - (x - y) * (x - y) / (4.0 * t);
        let lead = (x - y) / (2.0 * t);
        if self.k == 0.0 {
            return Scaled::new(lead, pre);
        }
        let z = -x * y / t;
        let (m0, m1) = if z == 0.0 {
            (Scaled::from_f64(1.0), Scaled::from_f64(1.0))
        } else {
            (
                Self::kummer(self.k, 2.0 * self.k + 1.0, z),
                Self::kummer(self.k + 1.0, 2.0 * self.k + 2.0, z),
            )
        };
        let second = self.k / (2.0 * self.k + 1.0) * x / t;
        m0.scale(lead).sub(m1.scale(second)).shift(pre)
    }

    pub fn grad_y(&self, t: f64, x: f64, y: f64) -> f64 {
        self.grad_y_scaled(t, x, y).value()
    }
}

/// Classical Gaussian (4πt)^{−½} e^{−(x−y)²/4t}.
pub fn gaussian_kernel(t: f64, x: f64, y: f64) -> f64 {
    (-(x - y) * (x - y) / (4.0 * t)).exp() / (4.0 * PI * t).sqrt()
}

/// Product heat kernel ∏_j h^{(j)}_t(x_j, y_j).
pub fn heat_kernel_nd(mult: &MultiplicityVector, t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    check_positive("t", t)?;
    mult.check_point(x)?;
    mult.check_point(y)?;
    let mut ln = 0.0;
    let mut sign = 1.0;
    for j in 0..mult.dim() {
        let s = HeatKernel1D::new(mult.get(j))?.scaled(t, x[j], y[j]);
        sign *= s.mantissa.signum();
        ln += s.ln_abs();
    }
    Ok(sign * ln.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_case() {
        let hk = HeatKernel1D::new(0.0).unwrap();
        assert!((hk.c_k() - 2.0 * PI.sqrt()).abs() < 1e-14);
        for &(t, x, y) in &[(1.0, 0.3, -0.5), (0.01, 1.0, 1.05), (50.0, -3.0, 7.0)] {
            let g = gaussian_kernel(t, x, y);
            assert!((hk.value(t, x, y) - g).abs() <= 1e-13 * g);
        }
        let d = hk.grad_y(1.0, 0.0, 2.0);
        let exact = -(2.0 / 2.0) * (-1.0f64).exp() / (4.0 * PI).sqrt();
        assert!((d - exact).abs() < 1e-14);
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let hk = HeatKernel1D::new(0.7).unwrap();
        let (t, x, y) = (1.0, 1.0, 0.5);
        let h = 1e-5;
        let fd = (hk.value(t, x, y + h) - hk.value(t, x, y - h)) / (2.0 * h);
        let g = hk.grad_y(t, x, y);
        assert!((g - fd).abs() <= 1e-7 * g.abs(), "{g} vs {fd}");
        assert_eq!(hk.grad_y(1.0, 0.0, 0.0), 0.0);
    }

    #[test]
    fn symmetric_and_positive() {
        let hk = HeatKernel1D::new(1.5).unwrap();
        for &(t, x, y) in &[
            (0.3, 1.0, -2.0),
            (2.0, 0.1, 4.0),
            (1e-3, 5.0, -5.0),
            (1e-3, 5.0, 5.01),
        ] {
            let a = hk.value(t, x, y);
            let b = hk.value(t, y, x);
            assert!(a > 0.0);
            assert!((a - b).abs() <= 1e-12 * a);
        }
    }

    #[test]
    fn extreme_arguments_stay_finite() {
        let hk = HeatKernel1D::new(0.7).unwrap();
        // −xy/t = 10⁶: the Kummer factor alone overflows
        let ln = hk.ln_value(1e-6, 1.0, -1.0);
        assert!(ln.is_finite());
        let v = hk.value(1e-4, 10.0, 10.0);
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn reflected_asymptotic_branch() {
        let k = 0.7;
        let hk = HeatKernel1D::new(k).unwrap();
        let (x, y): (f64, f64) = (1.0, -1.0);
        let mut prev = f64::INFINITY;
        for &t in &[0.1f64, 0.01, 0.001] {
            let cmp =
                t.sqrt() * (-x * y).powf(-k - 1.0) * (-(x + y) * (x + y) / (4.0 * t)).exp() * k
                    / (2.0 * PI.sqrt());
            let err = (hk.value(t, x, y) / cmp - 1.0).abs();
            assert!(err < prev);
            prev = err;
        }
        assert!(prev < 0.01);
    }

    #[test]
    fn product_rescaling() {
        let m = MultiplicityVector::new(vec![0.7, 1.2]).unwrap();
        let nn = m.homogeneous_dimension();
        let (t, x, y) = (0.4, [0.3, -1.0], [1.1, 0.5]);
        let lam = 2.0;
        let a = heat_kernel_nd(
            &m,
            lam * lam * t,
            &[lam * x[0], lam * x[1]],
            &[lam * y[0], lam * y[1]],
        )
        .unwrap();
        let b = lam.powf(-nn) * heat_kernel_nd(&m, t, &x, &y).unwrap();
        assert!((a - b).abs() < 1e-12 * b);
    }
}
