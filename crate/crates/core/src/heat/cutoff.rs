//! The smooth cutoff χ_t(x, y) = χ₁((x+y)/x) χ₂(t/x²) and the splitting
//! h_t = H_t + Q_t it induces.

use super::kernel::HeatKernel1D;
use crate::error::{check_positive, DunklError, Result};
use crate::specfn::MultiplicityVector;

/// Smooth step: 0 for s ≤ 0, 1 for s ≥ 1, built from φ(s) = e^{−1/s}.
pub fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else {
        // φ(s)/(φ(s)+φ(1−s)) without underflow
        1.0 / (1.0 + (1.0 / s - 1.0 / (1.0 - s)).exp())
    }
}

pub fn smooth_step_deriv(s: f64) -> f64 {
    if s <= 0.0 || s >= 1.0 {
        return 0.0;
    }
    let g = smooth_step(s);
    g * (1.0 - g) * (1.0 / (s * s) + 1.0 / ((1.0 - s) * (1.0 - s)))
}

/// A [0,1]-valued bump equal to 1 on the plateau and vanishing outside the
/// open support interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub support_lo: f64,
    pub plateau_lo: f64,
    pub plateau_hi: f64,
    pub support_hi: f64,
}

impl Bump {
    pub fn new(support_lo: f64, plateau_lo: f64, plateau_hi: f64, support_hi: f64) -> Result<Self> {
        if !(support_lo < plateau_lo && plateau_lo <= plateau_hi && plateau_hi < support_hi) {
            return Err(DunklError::Config(
                "bump needs support_lo < plateau_lo <= plateau_hi < support_hi".into(),
            ));
        }
        Ok(Self {
            support_lo,
            plateau_lo,
            plateau_hi,
            support_hi,
        })
    }

    fn rise(&self, s: f64) -> f64 {
        (s - self.support_lo) / (self.plateau_lo - self.support_lo)
    }

    fn fall(&self, s: f64) -> f64 {
        (self.support_hi - s) / (self.support_hi - self.plateau_hi)
    }

    pub fn value(&self, s: f64) -> f64 {
        smooth_step(self.rise(s)) * smooth_step(self.fall(s))
    }

    pub fn deriv(&self, s: f64) -> f64 {
        let (r, f) = (self.rise(s), self.fall(s));
        smooth_step_deriv(r) / (self.plateau_lo - self.support_lo) * smooth_step(f)
            - smooth_step(r) * smooth_step_deriv(f) / (self.support_hi - self.plateau_hi)
    }
}

/// The pair (χ₁, χ₂) defining the cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    pub chi1: Bump,
    pub chi2: Bump,
}

impl Default for CutoffSpec {
    /// χ₁: plateau [−1, ½], support [−2, ⅔]; χ₂: plateau [0, ½], support [−1, 1].
    fn default() -> Self {
        Self {
            chi1: Bump {
                support_lo: -2.0,
                plateau_lo: -1.0,
                plateau_hi: 0.5,
                support_hi: 2.0 / 3.0,
            },
            chi2: Bump {
                support_lo: -1.0,
                plateau_lo: 0.0,
                plateau_hi: 0.5,
                support_hi: 1.0,
            },
        }
    }
}

impl CutoffSpec {
    /// χ_t(x, y); zero when x = 0.
    pub fn chi(&self, t: f64, x: f64, y: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        self.chi1.value((x + y) / x) * self.chi2.value(t / (x * x))
    }

    /// ∂χ_t(x, y)/∂y.
    pub fn chi_grad_y(&self, t: f64, x: f64, y: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        self.chi1.deriv((x + y) / x) / x * self.chi2.value(t / (x * x))
    }
}

/// χ_t(x, y) for the given cutoff.
pub fn cutoff_chi(spec: &CutoffSpec, t: f64, x: f64, y: f64) -> f64 {
    spec.chi(t, x, y)
}

/// H_t = (1 − χ_t) h_t.
pub fn truncated_kernel_1d(hk: &HeatKernel1D, spec: &CutoffSpec, t: f64, x: f64, y: f64) -> f64 {
    (1.0 - spec.chi(t, x, y)) * hk.value(t, x, y)
}

/// Q_t = χ_t h_t.
pub fn error_kernel_1d(hk: &HeatKernel1D, spec: &CutoffSpec, t: f64, x: f64, y: f64) -> f64 {
    let c = spec.chi(t, x, y);
    if c == 0.0 {
        return 0.0;
    }
    c * hk.value(t, x, y)
}

/// ln H_t(x, y); −∞ where the cutoff removes everything.
pub fn ln_truncated_kernel_1d(hk: &HeatKernel1D, spec: &CutoffSpec, t: f64, x: f64, y: f64) -> f64 {
    (1.0 - spec.chi(t, x, y)).ln() + hk.ln_value(t, x, y)
}

/// ∂H_t(x, y)/∂y = (1 − χ) ∂_y h − (∂_y χ) h.
pub fn truncated_grad_y_1d(hk: &HeatKernel1D, spec: &CutoffSpec, t: f64, x: f64, y: f64) -> f64 {
    let c = spec.chi(t, x, y);
    let dc = spec.chi_grad_y(t, x, y);
    let g = hk.grad_y_scaled(t, x, y);
    let h = hk.scaled(t, x, y);
    g.scale(1.0 - c).sub(h.scale(dc)).value()
}

/// One-dimensional kernels for every coordinate of a product.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductKernel {
    mult: MultiplicityVector,
    axes: Vec<HeatKernel1D>,
    spec: CutoffSpec,
}

impl ProductKernel {
    pub fn new(mult: &MultiplicityVector, spec: CutoffSpec) -> Result<Self> {
        let axes = mult
            .k()
            .iter()
            .map(|&k| HeatKernel1D::new(k))
            .collect::<Result<_>>()?;
        Ok(Self {
            mult: mult.clone(),
            axes,
            spec,
        })
    }

    pub fn mult(&self) -> &MultiplicityVector {
        &self.mult
    }

    pub fn axes(&self) -> &[HeatKernel1D] {
        &self.axes
    }

    pub fn cutoff(&self) -> &CutoffSpec {
        &self.spec
    }

    fn check(&self, t: f64, x: &[f64], y: &[f64]) -> Result<()> {
        check_positive("t", t)?;
        self.mult.check_point(x)?;
        self.mult.check_point(y)
    }

    /// h_t(x, y) = ∏ h^{(j)}.
    pub fn heat(&self, t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check(t, x, y)?;
        Ok(self
            .axes
            .iter()
            .enumerate()
            .map(|(j, hk)| hk.value(t, x[j], y[j]))
            .product())
    }

    /// H_t(x, y) = ∏ H^{(j)}.
    pub fn truncated(&self, t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check(t, x, y)?;
        Ok(self
            .axes
            .iter()
            .enumerate()
            .map(|(j, hk)| truncated_kernel_1d(hk, &self.spec, t, x[j], y[j]))
            .product())
    }

    /// ln H_t(x, y).
    pub fn ln_truncated(&self, t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check(t, x, y)?;
        Ok(self
            .axes
            .iter()
            .enumerate()
            .map(|(j, hk)| ln_truncated_kernel_1d(hk, &self.spec, t, x[j], y[j]))
            .sum())
    }

    /// P_t = h_t − H_t.
    pub fn error_sum(&self, t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
        Ok(self.heat(t, x, y)? - self.truncated(t, x, y)?)
    }

    /// P_t as the sum over all products with at least one Q factor.
    pub fn error_sum_expanded(&self, t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check(t, x, y)?;
        let n = self.axes.len();
        let parts: Vec<(f64, f64)> = self
            .axes
            .iter()
            .enumerate()
            .map(|(j, hk)| {
                (
                    truncated_kernel_1d(hk, &self.spec, t, x[j], y[j]),
                    error_kernel_1d(hk, &self.spec, t, x[j], y[j]),
                )
            })
            .collect();
        let mut total = 0.0;
        for mask in 1u32..(1 << n) {
            total += (0..n)
                .map(|j| {
                    if mask >> j & 1 == 1 {
                        parts[j].1
                    } else {
                        parts[j].0
                    }
                })
                .product::<f64>();
        }
        Ok(total)
    }

    /// ∇_y H_t(x, y).
    pub fn truncated_grad_y(&self, t: f64, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check(t, x, y)?;
        let n = self.axes.len();
        let vals: Vec<f64> = (0..n)
            .map(|j| truncated_kernel_1d(&self.axes[j], &self.spec, t, x[j], y[j]))
            .collect();
        Ok((0..n)
            .map(|j| {
                let d = truncated_grad_y_1d(&self.axes[j], &self.spec, t, x[j], y[j]);
                d * (0..n).filter(|&i| i != j).map(|i| vals[i]).product::<f64>()
            })
            .collect())
    }
}

/// Which two-point kernel a [`KernelField`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Heat,
    Truncated,
    Error,
}

/// A two-point kernel bound to a multiplicity vector, evaluated on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelField {
    kernel: ProductKernel,
    kind: KernelKind,
}

impl KernelField {
    pub fn new(mult: &MultiplicityVector, spec: CutoffSpec, kind: KernelKind) -> Result<Self> {
        Ok(Self {
            kernel: ProductKernel::new(mult, spec)?,
            kind,
        })
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn eval(&self, t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
        match self.kind {
            KernelKind::Heat => self.kernel.heat(t, x, y),
            KernelKind::Truncated => self.kernel.truncated(t, x, y),
            KernelKind::Error => self.kernel.error_sum(t, x, y),
        }
    }
}
