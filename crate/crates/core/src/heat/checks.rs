//! Pointwise identities of the one-dimensional heat kernel: unit mass, the
//! semigroup law and the heat equation.

use super::kernel::HeatKernel1D;
use crate::error::{check_positive, Result};
use crate::measure::QuadratureSpec;
use crate::quadrature::{weighted_panel, GaussRule};

/// ∫ g(z) dμ(z) over [−r, r], panels of width ≤ `width` broken at 0 and at
/// the given marks.
fn integrate_dmu(k: f64, r: f64, width: f64, marks: &[f64], g: impl Fn(f64) -> f64) -> Result<f64> {
    let mut breaks = vec![-r, 0.0, r];
    breaks.extend(marks.iter().copied().filter(|m| m.abs() < r));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let plain = GaussRule::legendre(32);
    let at_zero = if k > 0.0 {
        Some(GaussRule::jacobi(32, 0.0, 2.0 * k)?)
    } else {
        None
    };
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let m = ((w[1] - w[0]) / width).ceil().max(1.0) as usize;
        for i in 0..m {
            let a = w[0] + (w[1] - w[0]) * i as f64 / m as f64;
            let b = w[0] + (w[1] - w[0]) * (i + 1) as f64 / m as f64;
            let (nodes, weights) = weighted_panel(&plain, at_zero.as_ref(), k, a, b);
            total += nodes
                .iter()
                .zip(&weights)
                .map(|(&z, &wz)| wz * g(z))
                .sum::<f64>();
        }
    }
    Ok(total)
}

/// |∫ h_t(x, y) dμ(y) − 1|.
pub fn heat_mass_defect(k: f64, t: f64, x: f64) -> Result<f64> {
    check_positive("t", t)?;
    let hk = HeatKernel1D::new(k)?;
    let r = x.abs() + QuadratureSpec::default().truncation_radius(t, k, x.abs()) + t.sqrt();
    let mass = integrate_dmu(k, r, 0.5 * t.sqrt(), &[x, -x], |y| hk.value(t, x, y))?;
    Ok((mass - 1.0).abs())
}

/// |∫ h_s(x, z) h_t(z, y) dμ(z) − h_{s+t}(x, y)| / h_{s+t}(x, y).
pub fn semigroup_defect(k: f64, s: f64, t: f64, x: f64, y: f64) -> Result<f64> {
    check_positive("s", s)?;
    check_positive("t", t)?;
    let hk = HeatKernel1D::new(k)?;
    let c = x.abs().max(y.abs());
    let r = c + QuadratureSpec::default().truncation_radius(s.max(t), k, c) + s.max(t).sqrt();
    let width = 0.5 * s.min(t).sqrt();
    let lhs = integrate_dmu(k, r, width, &[x, -x, y, -y], |z| {
        hk.value(s, x, z) * hk.value(t, z, y)
    })?;
    let rhs = hk.value(s + t, x, y);
    Ok((lhs - rhs).abs() / rhs)
}

/// Fourth-order central first and second derivatives of `f` at `p`.
fn central(f: impl Fn(f64) -> f64, p: f64, h: f64) -> (f64, f64) {
    let (m2, m1, z, p1, p2) = (f(p - 2.0 * h), f(p - h), f(p), f(p + h), f(p + 2.0 * h));
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let d2 = (-m2 + 16.0 * m1 - 30.0 * z + 16.0 * p1 - p2) / (12.0 * h * h);
    (d1, d2)
}

/// |∂_t h_t(x, y) − L_x h_t(x, y)| relative to max(|∂_t h|, h/t), with
/// L f(x) = f″(x) + (2k/x) f′(x) − k (f(x) − f(−x))/x². Derivatives are
/// fourth-order finite differences; x must be nonzero.
pub fn heat_equation_residual(k: f64, t: f64, x: f64, y: f64) -> Result<f64> {
    check_positive("t", t)?;
    check_positive("|x|", x.abs())?;
    let hk = HeatKernel1D::new(k)?;
    let h = hk.value(t, x, y);
    // Steps follow the Gaussian's own scales so log h moves by ~1e-2 per step.
    let spread = x.abs() + y.abs();
    let (dt, _) = central(
        |s| hk.value(s, x, y),
        t,
        1e-2 * t / (1.0 + spread * spread / (4.0 * t)),
    );
    let step = (1e-2 * t.sqrt().min(2.0 * t / spread.max(1e-300))).min(0.1 * x.abs());
    let (d1, d2) = central(|z| hk.value(t, z, y), x, step);
    let reflect = hk.value(t, -x, y);
    let lx = d2 + 2.0 * k / x * d1 - k * (h - reflect) / (x * x);
    Ok((dt - lx).abs() / dt.abs().max(h / t))
}

/// |h_t(x, y) − (4πt)^{−½} e^{−(x−y)²/4t}| relative to the Gaussian, for k = 0.
pub fn euclidean_defect(t: f64, x: f64, y: f64) -> Result<f64> {
    check_positive("t", t)?;
    let hk = HeatKernel1D::new(0.0)?;
    let g = super::kernel::gaussian_kernel(t, x, y);
    Ok((hk.value(t, x, y) - g).abs() / g)
}
