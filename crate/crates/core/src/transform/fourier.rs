//! The Dunkl transform 𝓕f(ξ) = γ⁻¹ ∫ f(x) E(x, −iξ) dμ(x) on grids.
//!
//! γ = ∫ e^{−|x|²/2} dμ(x) = 2^{N/2} ∏ Γ(k_j + ½) makes 𝓕 unitary on
//! L²(dμ) and reduces to (2π)^{−n/2} when k = 0.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{DunklError, Result};
use crate::grid::{GridFunction, TensorGrid};
use crate::heat::EDGE_TOLERANCE;
use crate::specfn::gamma::ln_gamma;
use crate::specfn::{ComplexKernel, MultiplicityVector};

/// γ_k = 2^{k+½} Γ(k+½) for one coordinate.
pub fn axis_normalization(k: f64) -> f64 {
    ((k + 0.5) * std::f64::consts::LN_2 + ln_gamma(k + 0.5)).exp()
}

/// γ = ∏ γ_{k_j} = ∫ e^{−|x|²/2} dμ(x).
pub fn transform_normalization(mult: &MultiplicityVector) -> f64 {
    mult.k().iter().map(|&k| axis_normalization(k)).product()
}

pub(crate) fn check_coverage(f: &GridFunction, what: &str) -> Result<()> {
    let r = f.edge_magnitudes().ratio();
    if r > EDGE_TOLERANCE {
        return Err(DunklError::GridCoverage(format!(
            "{what} is not negligible at the grid edge (edge/sup = {r:.3e})"
        )));
    }
    Ok(())
}

fn kernels(mult: &MultiplicityVector) -> Result<Vec<ComplexKernel>> {
    mult.k().iter().map(|&k| ComplexKernel::new(k)).collect()
}

/// Applies one matrix per axis to row-major tensor data.
/// `mats[j]` is `rows_j × shape[j]`, row-major.
pub fn apply_axes(
    values: &[Complex64],
    shape: &[usize],
    mats: &[(usize, Vec<Complex64>)],
) -> Vec<Complex64> {
    let mut cur = values.to_vec();
    let mut shape = shape.to_vec();
    for (j, (rows, m)) in mats.iter().enumerate() {
        let s = shape[j];
        let pre: usize = shape[..j].iter().product();
        let post: usize = shape[j + 1..].iter().product();
        let mut out = vec![Complex64::new(0.0, 0.0); pre * rows * post];
        out.par_chunks_mut(rows * post)
            .enumerate()
            .for_each(|(p, block)| {
                let src = &cur[p * s * post..(p + 1) * s * post];
                for r in 0..*rows {
                    let row = &m[r * s..(r + 1) * s];
                    for q in 0..post {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (i, a) in row.iter().enumerate() {
                            acc += a * src[i * post + q];
                        }
                        block[r * post + q] = acc;
                    }
                }
            });
        cur = out;
        shape[j] = *rows;
    }
    cur
}

/// 𝓕f(ξ) at one frequency.
pub fn dunkl_transform(
    mult: &MultiplicityVector,
    f: &GridFunction,
    xi: &[f64],
) -> Result<Complex64> {
    mult.check_point(xi)?;
    check_coverage(f, "f")?;
    point_sum(mult, f, xi, -1.0)
}

/// 𝓕⁻¹g(x) = γ⁻¹ ∫ g(ξ) E(x, iξ) dμ(ξ) = 𝓕g(−x).
pub fn dunkl_inverse(mult: &MultiplicityVector, g: &GridFunction, x: &[f64]) -> Result<Complex64> {
    mult.check_point(x)?;
    check_coverage(g, "g")?;
    point_sum(mult, g, x, 1.0)
}

fn point_sum(
    mult: &MultiplicityVector,
    f: &GridFunction,
    p: &[f64],
    sign: f64,
) -> Result<Complex64> {
    if f.multiplicity() != *mult {
        return Err(DunklError::Config(
            "grid function carries a different multiplicity vector".into(),
        ));
    }
    let ks = kernels(mult)?;
    let grid = f.grid();
    let mats: Vec<(usize, Vec<Complex64>)> = grid
        .axes()
        .iter()
        .enumerate()
        .map(|(j, axis)| {
            let g = axis_normalization(mult.get(j));
            let row = axis
                .nodes()
                .iter()
                .zip(axis.weights())
                .map(|(&x, &w)| ks[j].minus_i(-sign * x * p[j]) * (w / g))
                .collect();
            (1, row)
        })
        .collect();
    let shape: Vec<usize> = grid.axes().iter().map(|a| a.len()).collect();
    Ok(apply_axes(f.values(), &shape, &mats)[0])
}

/// Precomputed kernel matrices E(x_i, −iξ_q) between a space grid and a
/// frequency grid, for repeated transforms.
#[derive(Debug, Clone)]
pub struct TransformPlan {
    mult: MultiplicityVector,
    x_grid: Arc<TensorGrid>,
    xi_grid: Arc<TensorGrid>,
    /// Per axis, row-major `[q][i]`.
    kernel: Vec<Vec<Complex64>>,
}

impl TransformPlan {
    pub fn new(x_grid: Arc<TensorGrid>, xi_grid: Arc<TensorGrid>) -> Result<Self> {
        let mult = x_grid.multiplicity();
        if xi_grid.multiplicity() != mult {
            return Err(DunklError::Config(
                "space and frequency grids carry different multiplicities".into(),
            ));
        }
        let ks = kernels(&mult)?;
        let kernel = (0..mult.dim())
            .map(|j| {
                let xs = x_grid.axes()[j].nodes();
                let xis = xi_grid.axes()[j].nodes();
                let kj = &ks[j];
                xis.par_iter()
                    .flat_map_iter(|&xi| xs.iter().map(move |&x| kj.minus_i(x * xi)))
                    .collect()
            })
            .collect();
        Ok(Self {
            mult,
            x_grid,
            xi_grid,
            kernel,
        })
    }

    pub fn mult(&self) -> &MultiplicityVector {
        &self.mult
    }

    pub fn x_grid(&self) -> &Arc<TensorGrid> {
        &self.x_grid
    }

    pub fn xi_grid(&self) -> &Arc<TensorGrid> {
        &self.xi_grid
    }

    /// E(x_i, −iξ_q) on axis j.
    pub fn kernel_entry(&self, j: usize, q: usize, i: usize) -> Complex64 {
        self.kernel[j][q * self.x_grid.axes()[j].len() + i]
    }

    /// 𝓕f on the frequency grid.
    /// |‖𝓕f‖₂ − ‖f‖₂| / ‖f‖₂; 0 for f = 0.
    pub fn plancherel_defect(&self, f: &GridFunction) -> Result<f64> {
        let nf = f.lp_norm(2.0);
        if nf == 0.0 {
            return Ok(0.0);
        }
        Ok((self.forward(f)?.lp_norm(2.0) - nf).abs() / nf)
    }

    pub fn forward(&self, f: &GridFunction) -> Result<GridFunction> {
        if **f.grid() != *self.x_grid {
            return Err(DunklError::Config(
                "function is not sampled on the plan's space grid".into(),
            ));
        }
        check_coverage(f, "f")?;
        let mats: Vec<(usize, Vec<Complex64>)> = (0..self.mult.dim())
            .map(|j| {
                let g = axis_normalization(self.mult.get(j));
                let w = self.x_grid.axes()[j].weights();
                let nx = w.len();
                let nq = self.xi_grid.axes()[j].len();
                let m = (0..nq * nx)
                    .map(|idx| self.kernel[j][idx] * (w[idx % nx] / g))
                    .collect();
                (nq, m)
            })
            .collect();
        let shape: Vec<usize> = self.x_grid.axes().iter().map(|a| a.len()).collect();
        GridFunction::new(self.xi_grid.clone(), apply_axes(f.values(), &shape, &mats))
    }

    /// 𝓕⁻¹g on the space grid.
    pub fn inverse(&self, g: &GridFunction) -> Result<GridFunction> {
        if **g.grid() != *self.xi_grid {
            return Err(DunklError::Config(
                "function is not sampled on the plan's frequency grid".into(),
            ));
        }
        check_coverage(g, "g")?;
        let mats: Vec<(usize, Vec<Complex64>)> = (0..self.mult.dim())
            .map(|j| {
                let gam = axis_normalization(self.mult.get(j));
                let w = self.xi_grid.axes()[j].weights();
                let nx = self.x_grid.axes()[j].len();
                let nq = w.len();
                // E(x, iξ) is the conjugate of E(x, −iξ) for real arguments
                let m = (0..nx * nq).map(|idx| {
                    let (i, q) = (idx / nq, idx % nq);
                    self.kernel[j][q * nx + i].conj() * (w[q] / gam)
                });
                (nx, m.collect())
            })
            .collect();
        let shape: Vec<usize> = self.xi_grid.axes().iter().map(|a| a.len()).collect();
        GridFunction::new(self.x_grid.clone(), apply_axes(g.values(), &shape, &mats))
    }
}

/// 𝓕f sampled on the nodes of `xi_grid`.
pub fn dunkl_transform_grid(f: &GridFunction, xi_grid: Arc<TensorGrid>) -> Result<GridFunction> {
    TransformPlan::new(f.grid().clone(), xi_grid)?.forward(f)
}

/// |‖𝓕f‖₂ − ‖f‖₂| / ‖f‖₂, with 𝓕f computed on `xi_grid`; 0 for f = 0.
pub fn plancherel_defect(f: &GridFunction, xi_grid: Arc<TensorGrid>) -> Result<f64> {
    TransformPlan::new(f.grid().clone(), xi_grid)?.plancherel_defect(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::AxisGrid;
    use std::f64::consts::PI;

    fn axis(k: f64, r: f64, pps: usize) -> Arc<TensorGrid> {
        Arc::new(TensorGrid::single(
            AxisGrid::uniform(k, r, pps, 24).unwrap(),
        ))
    }

    #[test]
    fn normalization_values() {
        let m0 = MultiplicityVector::new(vec![0.0, 0.0]).unwrap();
        assert!((transform_normalization(&m0) - 2.0 * PI).abs() < 1e-13);
        // γ equals ∫ e^{−x²/2} |x|^{2k} dx
        let k = 0.7;
        let g = AxisGrid::uniform(k, 14.0, 14, 24).unwrap();
        let integral: f64 = g
            .nodes()
            .iter()
            .zip(g.weights())
            .map(|(x, w)| w * (-x * x / 2.0).exp())
            .sum();
        assert!((integral - axis_normalization(k)).abs() < 1e-12 * integral);
    }

    #[test]
    fn euclidean_gaussian_is_fixed() {
        let m = MultiplicityVector::scalar(0.0).unwrap();
        let f = GridFunction::sample_real(axis(0.0, 14.0, 14), |x| (-x[0] * x[0] / 2.0).exp());
        for &xi in &[0.0, 0.7, 2.0] {
            let v = dunkl_transform(&m, &f, &[xi]).unwrap();
            assert!((v - Complex64::new((-xi * xi / 2.0).exp(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn gaussian_fixed_point_for_any_k() {
        let m = MultiplicityVector::scalar(1.5).unwrap();
        let f = GridFunction::sample_real(axis(1.5, 14.0, 14), |x| (-x[0] * x[0] / 2.0).exp());
        for &xi in &[0.3, 1.0, 3.0] {
            let v = dunkl_transform(&m, &f, &[xi]).unwrap();
            assert!((v.re - (-xi * xi / 2.0).exp()).abs() < 1e-11);
            assert!(v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn heat_slice_transform() {
        let k = 0.7;
        let m = MultiplicityVector::scalar(k).unwrap();
        let hk = crate::heat::HeatKernel1D::new(k).unwrap();
        let t = 0.5;
        let f = GridFunction::sample_real(axis(k, 16.0, 16), |x| hk.value(t, x[0], 0.0));
        let gam = transform_normalization(&m);
        for &xi in &[0.0, 0.5, 2.0, 4.0] {
            let v = dunkl_transform(&m, &f, &[xi]).unwrap();
            assert!((v.re - (-t * xi * xi).exp() / gam).abs() < 1e-11);
        }
    }

    #[test]
    fn odd_part_gives_imaginary_part() {
        let m = MultiplicityVector::scalar(0.7).unwrap();
        let f = GridFunction::sample_real(axis(0.7, 14.0, 14), |x| {
            (1.0 + x[0] * x[0]) * (-x[0] * x[0]).exp()
        });
        let v = dunkl_transform(&m, &f, &[1.3]).unwrap();
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn plan_round_trip_and_plancherel() {
        let k = 0.7;
        let xg = axis(k, 12.0, 24);
        let xig = axis(k, 14.0, 28);
        let f = GridFunction::sample_real(xg.clone(), |x| {
            (-(x[0] - 0.8) * (x[0] - 0.8)).exp() * (1.0 + 0.3 * x[0])
        });
        let plan = TransformPlan::new(xg, xig.clone()).unwrap();
        let g = plan.forward(&f).unwrap();
        let back = plan.inverse(&g).unwrap();
        let err = f
            .values()
            .iter()
            .zip(back.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-9, "round trip {err}");
        assert!(plancherel_defect(&f, xig).unwrap() < 1e-10);
    }

    #[test]
    fn product_transform_separates() {
        let m = MultiplicityVector::new(vec![0.7, 1.2]).unwrap();
        let ax = |k: f64| AxisGrid::uniform(k, 12.0, 12, 20).unwrap();
        let g = Arc::new(TensorGrid::new(vec![ax(0.7), ax(1.2)]).unwrap());
        let f =
            GridFunction::sample_real(g, |x| (-(x[0] - 0.5) * (x[0] - 0.5) - x[1] * x[1]).exp());
        let g1 = GridFunction::sample_real(axis(0.7, 12.0, 12), |x| {
            (-(x[0] - 0.5) * (x[0] - 0.5)).exp()
        });
        let g2 = GridFunction::sample_real(axis(1.2, 12.0, 12), |x| (-x[0] * x[0]).exp());
        let xi = [0.9, -1.7];
        let v = dunkl_transform(&m, &f, &xi).unwrap();
        let a = dunkl_transform(&MultiplicityVector::scalar(0.7).unwrap(), &g1, &xi[..1]).unwrap();
        let b = dunkl_transform(&MultiplicityVector::scalar(1.2).unwrap(), &g2, &xi[1..]).unwrap();
        assert!((v - a * b).norm() < 1e-12);
    }

    #[test]
    fn truncated_function_is_rejected() {
        let m = MultiplicityVector::scalar(0.7).unwrap();
        let f = GridFunction::sample_real(axis(0.7, 2.0, 2), |_| 1.0);
        assert!(matches!(
            dunkl_transform(&m, &f, &[1.0]),
            Err(DunklError::GridCoverage(_))
        ));
    }
}
