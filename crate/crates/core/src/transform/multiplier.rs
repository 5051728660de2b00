//! Multiplier operators T_m f = 𝓕⁻¹(m 𝓕f) and the Hörmander-type
//! constant sup_t ‖χ m(t·)‖_{W₂^σ}.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::fourier::TransformPlan;
use crate::error::{DunklError, Result};
use crate::grid::{GridFunction, TensorGrid};
use crate::heat::Bump;
use crate::scan::log_space;

type Symbol = dyn Fn(&[f64]) -> Complex64 + Send + Sync;

/// A bounded symbol m(ξ) together with a claim about radiality.
#[derive(Clone)]
pub struct MultiplierSpec {
    name: String,
    radial: bool,
    m: Arc<Symbol>,
}

impl fmt::Debug for MultiplierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierSpec")
            .field("name", &self.name)
            .field("radial", &self.radial)
            .finish()
    }
}

fn norm(xi: &[f64]) -> f64 {
    xi.iter().map(|v| v * v).sum::<f64>().sqrt()
}

impl MultiplierSpec {
    pub fn new<F>(name: impl Into<String>, radial: bool, m: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            radial,
            m: Arc::new(m),
        }
    }

    pub fn identity() -> Self {
        Self::new("identity", true, |_| Complex64::new(1.0, 0.0))
    }

    /// e^{−t|ξ|²}, the symbol of the heat semigroup.
    pub fn heat(t: f64) -> Self {
        Self::new(format!("heat(t={t})"), true, move |xi| {
            Complex64::new((-t * xi.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0)
        })
    }

    /// −i ξ_j/|ξ|, the j-th Riesz transform (0 at the origin).
    pub fn riesz(j: usize) -> Self {
        Self::new(format!("riesz({j})"), false, move |xi| {
            let r = norm(xi);
            if r == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -xi[j] / r)
            }
        })
    }

    /// |ξ|^{iτ} (0 at the origin).
    pub fn imaginary_power(tau: f64) -> Self {
        Self::new(format!("imaginary_power(tau={tau})"), true, move |xi| {
            let r = norm(xi);
            if r == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::from_polar(1.0, tau * r.ln())
            }
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_radial(&self) -> bool {
        self.radial
    }

    pub fn eval(&self, xi: &[f64]) -> Complex64 {
        (self.m)(xi)
    }

    /// Spot-checks m(ξ) = m(|ξ| e₁) on a few directions and radii.
    pub fn looks_radial(&self, dim: usize) -> bool {
        let mut dirs: Vec<Vec<f64>> = Vec::new();
        for j in 0..dim {
            let mut d = vec![0.0; dim];
            d[j] = -1.0;
            dirs.push(d);
        }
        let diag = vec![1.0 / (dim as f64).sqrt(); dim];
        dirs.push(diag);
        if dim >= 2 {
            let mut d = vec![0.0; dim];
            d[0] = 0.6;
            d[1] = -0.8;
            dirs.push(d);
        }
        [0.3, 1.0, 2.7].iter().all(|&r| {
            let mut e = vec![0.0; dim];
            e[0] = r;
            let base = self.eval(&e);
            dirs.iter().all(|d| {
                let p: Vec<f64> = d.iter().map(|v| v * r).collect();
                (self.eval(&p) - base).norm() <= 1e-12 * (1.0 + base.norm())
            })
        })
    }
}

/// T_m f sampled back on the space grid of `plan`.
pub fn multiplier_apply_with(
    plan: &TransformPlan,
    mspec: &MultiplierSpec,
    f: &GridFunction,
) -> Result<GridFunction> {
    let g = plan.forward(f)?;
    let xi_grid = plan.xi_grid().clone();
    let values: Vec<Complex64> = g
        .values()
        .par_iter()
        .enumerate()
        .map(|(i, v)| {
            let m = mspec.eval(&xi_grid.node(i));
            if m.is_finite() {
                Ok(v * m)
            } else {
                Err(DunklError::NonFinite(format!(
                    "multiplier {} at node {i}",
                    mspec.name()
                )))
            }
        })
        .collect::<Result<_>>()?;
    plan.inverse(&GridFunction::new(xi_grid, values)?)
}

/// T_m f on the grid of `f`, with the frequency side discretized by `xi_grid`.
pub fn multiplier_apply(
    mspec: &MultiplierSpec,
    f: &GridFunction,
    xi_grid: Arc<TensorGrid>,
) -> Result<GridFunction> {
    let plan = TransformPlan::new(f.grid().clone(), xi_grid)?;
    multiplier_apply_with(&plan, mspec, f)
}

/// The radial cutoff χ: 1 for |ξ| ∈ [½, 2], supported in ¼ < |ξ| < 4.
pub fn annulus_cutoff() -> Bump {
    Bump::new(0.25, 0.5, 2.0, 4.0).expect("fixed breakpoints are ordered")
}

/// Discretization of the Sobolev-norm computation.
#[derive(Debug, Clone, PartialEq)]
pub struct HormanderGrid {
    /// The periodized box is [−half_width, half_width)^n.
    pub half_width: f64,
    pub points_per_axis: usize,
    pub ts: Vec<f64>,
}

impl HormanderGrid {
    pub fn standard(dim: usize) -> Self {
        let points_per_axis = if dim == 1 { 2048 } else { 256 };
        Self {
            half_width: 4.5,
            points_per_axis,
            ts: log_space(1e-2, 1e2, 41),
        }
    }

    pub fn refined(&self) -> Self {
        Self {
            half_width: self.half_width,
            points_per_axis: 2 * self.points_per_axis,
            ts: crate::scan::densify(&self.ts, true),
        }
    }
}

/// Result of [`hormander_m`].
#[derive(Debug, Clone, PartialEq)]
pub struct HormanderEstimate {
    pub value: f64,
    pub sobolev_order: f64,
    pub worst_t: f64,
    /// False when the symbol is not declared radial: the bound is computed
    /// but the boundedness theorem does not cover it.
    pub within_theorem: bool,
}

/// ‖g‖_{W₂^σ} = (∫ (1+|x|²)^σ |ĝ(x)|² dx)^{1/2} of a function sampled on the
/// periodized box, ĝ with the unitary (2π)^{−n/2} normalization.
fn sobolev_norm(samples: Vec<Complex64>, dim: usize, p: usize, h: f64, sigma: f64) -> f64 {
    let mut data = samples;
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(p);
    for axis in 0..dim {
        let stride = p.pow((dim - 1 - axis) as u32);
        let block = stride * p;
        let mut line = vec![Complex64::new(0.0, 0.0); p];
        for outer in 0..data.len() / block {
            for inner in 0..stride {
                let base = outer * block + inner;
                for (m, l) in line.iter_mut().enumerate() {
                    *l = data[base + m * stride];
                }
                fft.process(&mut line);
                for (m, l) in line.iter().enumerate() {
                    data[base + m * stride] = *l;
                }
            }
        }
    }
    let dx = 2.0 * std::f64::consts::PI / (p as f64 * h);
    let scale = (h / (2.0 * std::f64::consts::PI).sqrt()).powi(dim as i32);
    let freq = |m: usize| {
        let s = if m < p / 2 {
            m as f64
        } else {
            m as f64 - p as f64
        };
        s * dx
    };
    let mut total = 0.0;
    for (idx, v) in data.iter().enumerate() {
        let mut r2 = 0.0;
        let mut rest = idx;
        for _ in 0..dim {
            let x = freq(rest % p);
            r2 += x * x;
            rest /= p;
        }
        total += (1.0 + r2).powf(sigma) * (v.norm() * scale).powi(2);
    }
    (total * dx.powi(dim as i32)).sqrt()
}

/// M = sup_t ‖χ m(t·)‖_{W₂^{N/2+ε}} over the time grid.
pub fn hormander_m(
    mspec: &MultiplierSpec,
    epsilon: f64,
    homogeneous_dim: f64,
    dim: usize,
    grid: &HormanderGrid,
) -> Result<HormanderEstimate> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(DunklError::InvalidParameter {
            name: "epsilon",
            value: epsilon,
            reason: "must be positive",
        });
    }
    if dim == 0 || grid.points_per_axis < 8 || grid.half_width <= 4.0 || grid.ts.is_empty() {
        return Err(DunklError::Config(
            "Sobolev grid must cover the annulus 1/4 < |xi| < 4".into(),
        ));
    }
    let sigma = homogeneous_dim / 2.0 + epsilon;
    let chi = annulus_cutoff();
    let p = grid.points_per_axis;
    let h = 2.0 * grid.half_width / p as f64;
    let total = p.pow(dim as u32);
    let norms: Vec<Result<f64>> = grid
        .ts
        .par_iter()
        .map(|&t| {
            let mut samples = vec![Complex64::new(0.0, 0.0); total];
            let mut xi = vec![0.0; dim];
            for (idx, s) in samples.iter_mut().enumerate() {
                let mut rest = idx;
                for a in (0..dim).rev() {
                    xi[a] = -grid.half_width + (rest % p) as f64 * h;
                    rest /= p;
                }
                let c = chi.value(norm(&xi));
                if c == 0.0 {
                    continue;
                }
                let scaled: Vec<f64> = xi.iter().map(|v| v * t).collect();
                let m = mspec.eval(&scaled);
                if !m.is_finite() {
                    return Err(DunklError::NonFinite(format!(
                        "multiplier {} at t = {t}",
                        mspec.name()
                    )));
                }
                *s = m * c;
            }
            Ok(sobolev_norm(samples, dim, p, h, sigma))
        })
        .collect();
    let mut best = (f64::NEG_INFINITY, grid.ts[0]);
    for (r, &t) in norms.into_iter().zip(&grid.ts) {
        let v = r?;
        if v > best.0 {
            best = (v, t);
        }
    }
    Ok(HormanderEstimate {
        value: best.0,
        sobolev_order: sigma,
        worst_t: best.1,
        within_theorem: mspec.is_radial(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::AxisGrid;
    use crate::heat::heat_apply;
    use crate::specfn::MultiplicityVector;

    fn axis(k: f64, r: f64, pps: usize) -> Arc<TensorGrid> {
        Arc::new(TensorGrid::single(
            AxisGrid::uniform(k, r, pps, 24).unwrap(),
        ))
    }

    #[test]
    fn sobolev_norm_of_gaussian() {
        // ‖e^{−x²/2}‖² in W₂^0 equals √π
        let p = 512;
        let h = 20.0 / p as f64;
        let s: Vec<Complex64> = (0..p)
            .map(|j| Complex64::new((-(-10.0 + j as f64 * h).powi(2) / 2.0).exp(), 0.0))
            .collect();
        let v = sobolev_norm(s.clone(), 1, p, h, 0.0);
        assert!((v * v - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        // order 1 adds ∫ x² e^{−x²} dx = √π/2
        let v1 = sobolev_norm(s, 1, p, h, 1.0);
        assert!((v1 * v1 - 1.5 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn constant_and_imaginary_power_are_scale_free() {
        let grid = HormanderGrid {
            half_width: 4.5,
            points_per_axis: 1024,
            ts: vec![0.1, 1.0, 10.0],
        };
        let one = hormander_m(&MultiplierSpec::identity(), 0.1, 2.4, 1, &grid).unwrap();
        let per_t: Vec<f64> = [0.1, 1.0, 10.0]
            .iter()
            .map(|&t| {
                hormander_m(
                    &MultiplierSpec::imaginary_power(1.5),
                    0.1,
                    2.4,
                    1,
                    &HormanderGrid {
                        ts: vec![t],
                        ..grid.clone()
                    },
                )
                .unwrap()
                .value
            })
            .collect();
        assert!(one.value.is_finite() && one.value > 0.0);
        for v in &per_t {
            assert!((v - per_t[1]).abs() < 1e-6 * per_t[1]);
        }
    }

    #[test]
    fn riesz_is_flagged_out_of_theorem() {
        let e = hormander_m(
            &MultiplierSpec::riesz(0),
            0.1,
            3.0,
            2,
            &HormanderGrid {
                ts: vec![1.0],
                ..HormanderGrid::standard(2)
            },
        )
        .unwrap();
        assert!(!e.within_theorem);
        assert!(e.value.is_finite());
        assert!(!MultiplierSpec::riesz(0).looks_radial(2));
        assert!(MultiplierSpec::heat(0.3).looks_radial(2));
    }

    #[test]
    fn heat_multiplier_matches_semigroup() {
        let k = 0.7;
        let m = MultiplicityVector::scalar(k).unwrap();
        let f = GridFunction::sample_real(axis(k, 12.0, 24), |x| {
            (-(x[0] - 1.0) * (x[0] - 1.0)).exp() * (2.0 + x[0].sin())
        });
        let t = 0.3;
        let g = multiplier_apply(&MultiplierSpec::heat(t), &f, axis(k, 14.0, 28)).unwrap();
        for &x in &[-2.0, -0.4, 0.0, 0.9, 2.5] {
            let direct = heat_apply(&m, &f, t, &[x]).unwrap();
            let via = g.eval(&[x]);
            assert!(
                (direct - via).norm() < 1e-6 * direct.norm().max(1e-3),
                "x={x}: {direct} vs {via}"
            );
        }
    }

    #[test]
    fn sign_multiplier_makes_even_input_odd() {
        let k = 0.7;
        let f = GridFunction::sample_real(axis(k, 12.0, 24), |x| (-x[0] * x[0]).exp());
        let g = multiplier_apply(&MultiplierSpec::riesz(0), &f, axis(k, 14.0, 28)).unwrap();
        for &x in &[0.3, 1.1, 2.0] {
            let a = g.eval(&[x]);
            let b = g.eval(&[-x]);
            assert!((a + b).norm() < 1e-9 * a.norm().max(1e-6));
        }
    }
}
