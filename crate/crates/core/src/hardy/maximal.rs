//! The H¹ norm ‖h_* f‖_{L¹(dμ)} and its value on multiplier images of atoms.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::atom::{make_atom, AtomProfile};
use crate::error::{DunklError, Result};
use crate::grid::{AxisGrid, GridFunction, TensorGrid};
use crate::heat::{HeatSemigroup, TimeGrid};
use crate::report::EstimateReport;
use crate::specfn::{ComplexKernel, MultiplicityVector};
use crate::transform::{
    apply_axes, axis_normalization, hormander_m, HormanderGrid, MultiplierSpec, TransformPlan,
};

/// A multiplier image m 𝓕f may be cut off at the frequency-grid edge once it
/// has dropped below this fraction of its sup.
pub const SPECTRAL_TOLERANCE: f64 = 1e-4;

/// Outer integration grid for h_* f: fine panels (width `fine·scale`)
/// within 2·scale of the origin and of ±center_j, geometrically coarser
/// panels out to |center_j| + reach.
pub fn maximal_window(
    mult: &MultiplicityVector,
    center: &[f64],
    scale: f64,
    reach: f64,
    order: usize,
) -> Result<TensorGrid> {
    mult.check_point(center)?;
    let fine = 0.25 * scale;
    let axes = (0..mult.dim())
        .map(|j| {
            let c = center[j].abs();
            let end = c + reach;
            let near = |p: f64| p.min((p - c).abs()) <= 2.0 * scale;
            let mut right = vec![0.0];
            let mut p: f64 = 0.0;
            while p < end {
                let d = p.min((p - c).abs());
                let h = if near(p) {
                    fine
                } else {
                    (fine + 0.35 * (d - 2.0 * scale)).min(4.0 * scale).max(fine)
                };
                p = (p + h).min(end);
                right.push(p);
            }
            let mut breaks: Vec<f64> = right.iter().skip(1).rev().map(|v| -v).collect();
            breaks.extend(right);
            AxisGrid::from_breakpoints(mult.get(j), &breaks, order)
        })
        .collect::<Result<Vec<_>>>()?;
    TensorGrid::new(axes)
}

/// ∫ dμ(x) max_t |e^{tL} f(x)| over the nodes of `window`, with e^{tL}
/// applied by kernel quadrature.
pub fn h1_maximal_norm(f: &GridFunction, tg: &TimeGrid, window: &TensorGrid) -> Result<f64> {
    let hs = HeatSemigroup::new(&f.multiplicity())?;
    let parts = (0..window.len())
        .into_par_iter()
        .map(|i| Ok(hs.maximal(f, tg, &window.node(i))? * window.weight(i)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(parts.iter().sum())
}

/// Frequency grid for [`spectral_maximal`]: uniform panels of width at
/// most 1.4·order/extent so that E(x, iξ) is resolved for |x| ≤ extent.
pub fn spectral_grid(
    mult: &MultiplicityVector,
    xi_radius: f64,
    extent: f64,
    order: usize,
) -> Result<TensorGrid> {
    let width = (1.4 * order as f64 / extent.max(1.0)).min(1.0);
    let pps = (xi_radius / width).ceil() as usize;
    TensorGrid::uniform(mult, xi_radius, pps, order)
}

/// h_*(T_m f) on the nodes of `window`, computed from
/// e^{tL} T_m f(x) = γ⁻¹ ∫ e^{−t|ξ|²} m(ξ) 𝓕f(ξ) E(x, iξ) dμ(ξ).
pub fn spectral_maximal(
    f: &GridFunction,
    mspec: &MultiplierSpec,
    tg: &TimeGrid,
    window: Arc<TensorGrid>,
    xi_grid: Arc<TensorGrid>,
) -> Result<GridFunction> {
    let table = SpectralTable::new(window, xi_grid.clone())?;
    let plan = TransformPlan::new(f.grid().clone(), xi_grid)?;
    table.maximal(&plan.forward(f)?, mspec, tg)
}

/// E(x, iξ) tabulated between a window and a frequency grid, reusable for
/// any number of multipliers applied to the same transform.
pub struct SpectralTable {
    window: Arc<TensorGrid>,
    xi_grid: Arc<TensorGrid>,
    rows: Rows,
}

enum Rows {
    /// Mirror-symmetric 1D grids: x, ξ > 0 only, using
    /// E(−x, iξ) = E(x, −iξ) = conj E(x, iξ).
    Mirrored {
        re: Vec<f64>,
        im: Vec<f64>,
        xis: Vec<f64>,
    },
    Axes(Vec<(usize, Vec<Complex64>)>),
}

fn mirrored(nodes: &[f64]) -> bool {
    let n = nodes.len();
    let scale = nodes.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    n % 2 == 0 && (0..n / 2).all(|i| (nodes[i] + nodes[n - 1 - i]).abs() <= 1e-12 * scale)
}

/// e^{−tξ²} below e^{−40} is dropped.
const GAUSSIAN_CUTOFF: f64 = 40.0;

impl SpectralTable {
    pub fn new(window: Arc<TensorGrid>, xi_grid: Arc<TensorGrid>) -> Result<Self> {
        let mult = xi_grid.multiplicity();
        if window.multiplicity() != mult {
            return Err(DunklError::Config(
                "window carries a different multiplicity vector".into(),
            ));
        }
        let rows = if mult.dim() == 1
            && mirrored(xi_grid.axes()[0].nodes())
            && mirrored(window.axes()[0].nodes())
        {
            let (xi_axis, w_axis) = (&xi_grid.axes()[0], &window.axes()[0]);
            let ker = ComplexKernel::new(mult.get(0))?;
            let gam = axis_normalization(mult.get(0));
            let hq = xi_axis.len() / 2;
            let xis = &xi_axis.nodes()[hq..];
            let wq = &xi_axis.weights()[hq..];
            let xs = &w_axis.nodes()[w_axis.len() / 2..];
            let (re, im) = xs
                .par_iter()
                .flat_map_iter(|&x| xis.iter().zip(wq).map(move |(&xi, &w)| (x, xi, w)))
                .map(|(x, xi, w)| {
                    let e = ker.plus_i(x * xi) * (w / gam);
                    (e.re, e.im)
                })
                .unzip();
            Rows::Mirrored {
                re,
                im,
                xis: xis.to_vec(),
            }
        } else {
            let mats = (0..mult.dim())
                .map(|j| {
                    let ker = ComplexKernel::new(mult.get(j))?;
                    let gam = axis_normalization(mult.get(j));
                    let xs = window.axes()[j].nodes();
                    let xi_axis = &xi_grid.axes()[j];
                    let ker = &ker;
                    let m = xs
                        .par_iter()
                        .flat_map_iter(|&x| {
                            xi_axis
                                .nodes()
                                .iter()
                                .zip(xi_axis.weights())
                                .map(move |(&xi, &w)| ker.plus_i(x * xi) * (w / gam))
                        })
                        .collect();
                    Ok((xs.len(), m))
                })
                .collect::<Result<_>>()?;
            Rows::Axes(mats)
        };
        Ok(Self {
            window,
            xi_grid,
            rows,
        })
    }

    /// h_*(T_m f) on the window, given 𝓕f on the frequency grid.
    pub fn maximal(
        &self,
        transform: &GridFunction,
        mspec: &MultiplierSpec,
        tg: &TimeGrid,
    ) -> Result<GridFunction> {
        if transform.grid().as_ref() != self.xi_grid.as_ref() {
            return Err(DunklError::Config(
                "transform is not sampled on the table's frequency grid".into(),
            ));
        }
        let mut vals = Vec::with_capacity(transform.len());
        for (i, v) in transform.values().iter().enumerate() {
            let xi = self.xi_grid.node(i);
            let m = mspec.eval(&xi);
            if !m.is_finite() {
                return Err(DunklError::NonFinite(format!(
                    "multiplier {} at ξ = {xi:?}",
                    mspec.name()
                )));
            }
            vals.push(v * m);
        }
        let image = GridFunction::new(self.xi_grid.clone(), vals)?;
        let ratio = image.edge_magnitudes().ratio();
        if ratio > SPECTRAL_TOLERANCE {
            return Err(DunklError::GridCoverage(format!(
                "m·𝓕f is not negligible at the frequency-grid edge (edge/sup = {ratio:.3e})"
            )));
        }
        let ts = tg.points();
        let best = match &self.rows {
            Rows::Mirrored { re, im, xis } => {
                maximal_1d(image.values(), re, im, xis, self.window.len(), &ts)
            }
            Rows::Axes(mats) => {
                let r2: Vec<f64> = (0..self.xi_grid.len())
                    .map(|i| self.xi_grid.node(i).iter().map(|c| c * c).sum())
                    .collect();
                let shape: Vec<usize> = self.xi_grid.axes().iter().map(|a| a.len()).collect();
                let n_out = self.window.len();
                ts.par_iter()
                    .map(|&t| {
                        let v: Vec<Complex64> = image
                            .values()
                            .iter()
                            .zip(&r2)
                            .map(|(v, &q)| v * (-t * q).exp())
                            .collect();
                        apply_axes(&v, &shape, mats)
                            .iter()
                            .map(|u| u.norm())
                            .collect::<Vec<f64>>()
                    })
                    .reduce(
                        || vec![0.0; n_out],
                        |a, b| a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect(),
                    )
            }
        };
        GridFunction::new(
            self.window.clone(),
            best.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
        )
    }
}

fn maximal_1d(
    image: &[Complex64],
    er: &[f64],
    ei: &[f64],
    xis: &[f64],
    n_out: usize,
    ts: &[f64],
) -> Vec<f64> {
    let hq = xis.len();
    let hx = n_out / 2;
    // v_± at ±ξ_j
    let plus = &image[hq..];
    let minus: Vec<Complex64> = (0..hq).map(|j| image[hq - 1 - j]).collect();
    ts.par_iter()
        .map(|&t| {
            let cut = xis.partition_point(|&xi| t * xi * xi <= GAUSSIAN_CUTOFF);
            let (p, m): (Vec<Complex64>, Vec<Complex64>) = (0..cut)
                .map(|j| {
                    let g = (-t * xis[j] * xis[j]).exp();
                    ((plus[j] + minus[j]) * g, (plus[j] - minus[j]) * g)
                })
                .unzip();
            let mut out = vec![0.0; n_out];
            for i in 0..hx {
                let (row_r, row_i) = (&er[i * hq..i * hq + cut], &ei[i * hq..i * hq + cut]);
                let mut a = Complex64::new(0.0, 0.0);
                let mut b = Complex64::new(0.0, 0.0);
                for j in 0..cut {
                    a += p[j] * row_r[j];
                    b += m[j] * row_i[j];
                }
                let ib = Complex64::new(-b.im, b.re);
                out[hx + i] = (a + ib).norm();
                out[hx - 1 - i] = (a - ib).norm();
            }
            out
        })
        .reduce(
            || vec![0.0; n_out],
            |a, b| a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect(),
        )
}

/// ‖h_*(T_m f)‖_{L¹(dμ)} over the window.
pub fn spectral_h1_norm(
    f: &GridFunction,
    mspec: &MultiplierSpec,
    tg: &TimeGrid,
    window: Arc<TensorGrid>,
    xi_grid: Arc<TensorGrid>,
) -> Result<f64> {
    Ok(spectral_maximal(f, mspec, tg, window, xi_grid)?
        .integral()
        .re)
}

/// Atom centers, radii and discretization for [`multiplier_atom_bound`].
#[derive(Debug, Clone, PartialEq)]
pub struct AtomFamily {
    pub centers: Vec<f64>,
    pub radii: Vec<f64>,
    pub profile: AtomProfile,
    /// Outer window reaches this far beyond the atom, in units of its radius.
    pub reach: f64,
    /// Frequency cutoff, in units of 1/radius.
    pub xi_radius: f64,
    pub window_order: usize,
    pub xi_order: usize,
}

impl AtomFamily {
    /// Centers {0, ½, 1, 5} on every axis and radii {0.1, 1, 10}.
    pub fn standard() -> Self {
        Self {
            centers: vec![0.0, 0.5, 1.0, 5.0],
            radii: vec![0.1, 1.0, 10.0],
            profile: AtomProfile::TwoBump,
            reach: 32.0,
            xi_radius: 128.0,
            window_order: 8,
            xi_order: 24,
        }
    }

    /// Twice as many window panels and frequency nodes, same extent.
    pub fn refined(&self) -> Self {
        Self {
            window_order: 2 * self.window_order,
            xi_order: 2 * self.xi_order,
            ..self.clone()
        }
    }
}

/// ‖h_*(T_m a)‖ for the atom centered at `center` with radius `radius`,
/// computed on the unit-radius atom at center/radius with the symbol
/// m(·/radius). Dilations preserve atoms, the H¹ norm and μ-homogeneity,
/// so this is the same quantity on grids of fixed size. One value per
/// multiplier; the kernel table is shared between them.
pub fn atom_image_norms(
    mult: &MultiplicityVector,
    mspecs: &[MultiplierSpec],
    center: &[f64],
    radius: f64,
    family: &AtomFamily,
    tg: &TimeGrid,
) -> Result<Vec<f64>> {
    let unit: Vec<f64> = center.iter().map(|c| c / radius).collect();
    let atom = make_atom(mult, &unit, 1.0, family.profile)?;
    let window = Arc::new(maximal_window(
        mult,
        &unit,
        1.0,
        family.reach,
        family.window_order,
    )?);
    let extent = unit.iter().fold(0.0f64, |a, c| a.max(c.abs())) + family.reach;
    let xi_grid = Arc::new(spectral_grid(
        mult,
        family.xi_radius,
        extent,
        family.xi_order,
    )?);
    let transform = TransformPlan::new(atom.values().grid().clone(), xi_grid.clone())?
        .forward(atom.values())?;
    let table = SpectralTable::new(window, xi_grid)?;
    mspecs
        .iter()
        .map(|mspec| {
            let inner = mspec.clone();
            let scaled = MultiplierSpec::new(
                format!("{}@{radius}", mspec.name()),
                mspec.is_radial(),
                move |xi| {
                    let s: Vec<f64> = xi.iter().map(|v| v / radius).collect();
                    inner.eval(&s)
                },
            );
            Ok(table.maximal(&transform, &scaled, tg)?.integral().re)
        })
        .collect()
}

pub fn atom_image_norm(
    mult: &MultiplicityVector,
    mspec: &MultiplierSpec,
    center: &[f64],
    radius: f64,
    family: &AtomFamily,
    tg: &TimeGrid,
) -> Result<f64> {
    Ok(atom_image_norms(
        mult,
        std::slice::from_ref(mspec),
        center,
        radius,
        family,
        tg,
    )?[0])
}

/// sup over the atom family of ‖h_*(T_m a)‖_{L¹(dμ)} for each multiplier,
/// with the Hörmander constant of m and the ratio recorded alongside.
/// One-dimensional centers are repeated on every axis.
pub fn multiplier_atom_bounds(
    mult: &MultiplicityVector,
    mspecs: &[MultiplierSpec],
    family: &AtomFamily,
    tg: &TimeGrid,
    grid_id: &str,
) -> Result<Vec<EstimateReport>> {
    let cases: Vec<(f64, f64)> = family
        .centers
        .iter()
        .flat_map(|&c| family.radii.iter().map(move |&r| (c, r)))
        .collect();
    let norms = cases
        .iter()
        .map(|&(c, r)| atom_image_norms(mult, mspecs, &vec![c; mult.dim()], r, family, tg))
        .collect::<Result<Vec<Vec<f64>>>>()?;
    mspecs
        .iter()
        .enumerate()
        .map(|(j, mspec)| {
            let col: Vec<f64> = norms.iter().map(|row| row[j]).collect();
            let (i, sup) = crate::scan::argmax(&col)
                .ok_or_else(|| DunklError::Config("empty atom family".into()))?;
            let hm = hormander_m(
                mspec,
                0.1,
                mult.homogeneous_dimension(),
                mult.dim(),
                &HormanderGrid::standard(mult.dim()),
            )?;
            let id = format!(
                "hardy.multiplier_atom.{}",
                mspec.name().split('(').next().unwrap_or("m")
            );
            Ok(EstimateReport::new(id, mult, grid_id, sup).with_witness(
                &["center", "radius", "hormander_m", "bound_over_m"],
                &[cases[i].0, cases[i].1, hm.value, sup / hm.value],
            ))
        })
        .collect()
}

pub fn multiplier_atom_bound(
    mult: &MultiplicityVector,
    mspec: &MultiplierSpec,
    family: &AtomFamily,
    tg: &TimeGrid,
    grid_id: &str,
) -> Result<EstimateReport> {
    Ok(multiplier_atom_bounds(mult, std::slice::from_ref(mspec), family, tg, grid_id)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_covers_center_and_reflection() {
        let m = MultiplicityVector::scalar(0.7).unwrap();
        let w = maximal_window(&m, &[5.0], 1.0, 10.0, 8).unwrap();
        let a = &w.axes()[0];
        assert!((a.lo() + 15.0).abs() < 1e-12 && (a.hi() - 15.0).abs() < 1e-12);
        let b = a.breakpoints();
        let fine = |p: f64| {
            b.windows(2)
                .any(|s| s[0] <= p && p <= s[1] && s[1] - s[0] <= 0.25 + 1e-12)
        };
        assert!(fine(5.0) && fine(-5.0) && fine(0.0));
    }

    #[test]
    fn spectral_and_kernel_routes_agree() {
        let k = 0.7;
        let m = MultiplicityVector::scalar(k).unwrap();
        let atom = make_atom(&m, &[1.0], 1.0, AtomProfile::TwoBump).unwrap();
        let tg = TimeGrid::new(1e-2, 1e2, 21).unwrap();
        let window = Arc::new(maximal_window(&m, &[1.0], 1.0, 6.0, 4).unwrap());
        let xi = Arc::new(spectral_grid(&m, 96.0, 8.0, 24).unwrap());
        let a = spectral_maximal(
            atom.values(),
            &MultiplierSpec::identity(),
            &tg,
            window.clone(),
            xi,
        )
        .unwrap();
        let hs = HeatSemigroup::new(&m).unwrap();
        for i in (0..window.len()).step_by(7) {
            let x = window.node(i);
            let b = hs.maximal(atom.values(), &tg, &x).unwrap();
            assert!(
                (a.values()[i].re - b).abs() < 1e-4 * a.sup_norm(),
                "x={x:?}: {} vs {b}",
                a.values()[i].re
            );
        }
    }

    #[test]
    fn positive_function_dominates_single_time() {
        let m = MultiplicityVector::scalar(0.7).unwrap();
        let g = Arc::new(TensorGrid::single(
            AxisGrid::uniform(0.7, 3.0, 6, 16).unwrap(),
        ));
        let f = GridFunction::sample_real(g, |x| crate::translation::classic_bump(x[0] / 2.0));
        let window = maximal_window(&m, &[0.0], 1.0, 6.0, 4).unwrap();
        let tg = TimeGrid::new(0.1, 10.0, 9).unwrap();
        let hs = HeatSemigroup::new(&m).unwrap();
        let at_one: f64 = (0..window.len())
            .map(|i| hs.apply(&f, 1.0, &window.node(i)).unwrap().norm() * window.weight(i))
            .sum();
        assert!(h1_maximal_norm(&f, &tg, &window).unwrap() >= at_one * (1.0 - 1e-12));
    }
}
