use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::density::{total_variation, TranslationMeasure, TranslationRules, DEFAULT_ORDER};
use crate::error::{DunklError, Result};
use crate::grid::{AxisGrid, GridFunction, TensorGrid};
use crate::heat::EDGE_TOLERANCE;
use crate::report::EstimateReport;
use crate::scan::{lin_space, par_argmax};
use crate::specfn::{ComplexKernel, MultiplicityVector};
use crate::transform::{axis_normalization, TransformPlan};

/// Per-axis rules, shared by all translations with the same multiplicities.
#[derive(Debug, Clone)]
pub struct Translator {
    mult: MultiplicityVector,
    rules: Vec<Option<Arc<TranslationRules>>>,
}

impl Translator {
    pub fn new(mult: &MultiplicityVector) -> Result<Self> {
        let rules = mult
            .k()
            .iter()
            .map(|&k| {
                if k == 0.0 {
                    Ok(None)
                } else {
                    TranslationRules::new(k, DEFAULT_ORDER).map(|r| Some(Arc::new(r)))
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            mult: mult.clone(),
            rules,
        })
    }

    pub fn mult(&self) -> &MultiplicityVector {
        &self.mult
    }

    /// The product measure ν_{x,y} as one 1D measure per axis.
    pub fn measure(&self, x: &[f64], y: &[f64]) -> Result<Vec<TranslationMeasure>> {
        self.mult.check_point(x)?;
        self.mult.check_point(y)?;
        self.rules
            .iter()
            .enumerate()
            .map(|(j, r)| match r {
                Some(r) => TranslationMeasure::with_rules(r, x[j], y[j]),
                None => TranslationMeasure::new(0.0, x[j], y[j]),
            })
            .collect()
    }

    /// (τ_y f)(x) = ∫ f dν_{x,y} for a function given in closed form.
    pub fn translate_fn<F: Fn(&[f64]) -> Complex64>(
        &self,
        f: F,
        y: &[f64],
        x: &[f64],
    ) -> Result<Complex64> {
        let axes = self.measure(x, y)?;
        let mut z = vec![0.0; axes.len()];
        Ok(tensor_sum(&axes, 0, 1.0, &mut z, &f))
    }

    /// (τ_y f)(x) for a sampled f, interpolated off the grid nodes.
    pub fn translate(&self, f: &GridFunction, y: &[f64], x: &[f64]) -> Result<Complex64> {
        if f.multiplicity() != self.mult {
            return Err(DunklError::Config(
                "grid function carries a different multiplicity vector".into(),
            ));
        }
        let axes = self.measure(x, y)?;
        check_reach(f, &axes)?;
        let mut z = vec![0.0; axes.len()];
        Ok(tensor_sum(&axes, 0, 1.0, &mut z, &|p: &[f64]| f.eval(p)))
    }
}

fn tensor_sum<F: Fn(&[f64]) -> Complex64>(
    axes: &[TranslationMeasure],
    j: usize,
    w: f64,
    z: &mut Vec<f64>,
    f: &F,
) -> Complex64 {
    if j == axes.len() {
        return f(z) * w;
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (&zj, &wj) in axes[j].nodes().iter().zip(axes[j].weights()) {
        z[j] = zj;
        acc += tensor_sum(axes, j + 1, w * wj, z, f);
    }
    acc
}

/// The measure may reach outside the grid only where f is negligible.
fn check_reach(f: &GridFunction, axes: &[TranslationMeasure]) -> Result<()> {
    let outside = f.grid().axes().iter().zip(axes).any(|(a, m)| {
        let b = m.nodes().iter().fold(0.0f64, |s, z| s.max(z.abs()));
        -b < a.lo() || b > a.hi()
    });
    if outside {
        let r = f.edge_magnitudes().ratio();
        if r > EDGE_TOLERANCE {
            return Err(DunklError::GridCoverage(format!("translation support leaves the grid where f is not negligible (edge/sup = {r:.3e})")));
        }
    }
    Ok(())
}

/// (τ_y f)(x) by quadrature against ν_{x,y}.
pub fn translate(
    mult: &MultiplicityVector,
    f: &GridFunction,
    y: &[f64],
    x: &[f64],
) -> Result<Complex64> {
    Translator::new(mult)?.translate(f, y, x)
}

/// (τ_y f)(x) = γ⁻¹ ∫ 𝓕f(ξ) E(x, iξ) E(y, iξ) dμ(ξ), with f on the plan's
/// space grid and ξ on its frequency grid.
pub fn translate_via_transform(
    plan: &TransformPlan,
    f: &GridFunction,
    y: &[f64],
    x: &[f64],
) -> Result<Complex64> {
    let mult = plan.mult().clone();
    mult.check_point(x)?;
    mult.check_point(y)?;
    let g = plan.forward(f)?;
    let xi_grid = plan.xi_grid();
    let mats: Vec<(usize, Vec<Complex64>)> = xi_grid
        .axes()
        .iter()
        .enumerate()
        .map(|(j, axis)| {
            let ker = ComplexKernel::new(mult.get(j))?;
            let gam = axis_normalization(mult.get(j));
            let row = axis
                .nodes()
                .iter()
                .zip(axis.weights())
                .map(|(&xi, &w)| ker.plus_i(x[j] * xi) * ker.plus_i(y[j] * xi) * (w / gam))
                .collect();
            Ok((1, row))
        })
        .collect::<Result<_>>()?;
    let shape: Vec<usize> = xi_grid.axes().iter().map(|a| a.len()).collect();
    Ok(crate::transform::apply_axes(g.values(), &shape, &mats)[0])
}

/// f ∗ g (x) = ∫ (τ_{−y} f)(x) g(y) dμ(y), on the grid of f.
pub fn convolve(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    let mult = f.multiplicity();
    if g.multiplicity() != mult {
        return Err(DunklError::Config(
            "convolution factors carry different multiplicities".into(),
        ));
    }
    let tr = Translator::new(&mult)?;
    let sources: Vec<(Vec<f64>, Complex64)> = (0..g.len())
        .filter(|&i| g.values()[i] != Complex64::new(0.0, 0.0))
        .map(|i| {
            (
                g.grid().node(i).iter().map(|v| -v).collect(),
                g.values()[i] * g.grid().weight(i),
            )
        })
        .collect();
    let grid = f.grid().clone();
    let values = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let x = grid.node(i);
            let mut acc = Complex64::new(0.0, 0.0);
            for (ny, gw) in &sources {
                acc += tr.translate(f, ny, &x)? * gw;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    GridFunction::new(grid, values)
}

/// f ∗ g = 𝓕⁻¹(γ 𝓕f 𝓕g), both factors on the plan's space grid.
pub fn convolve_via_transform(
    plan: &TransformPlan,
    f: &GridFunction,
    g: &GridFunction,
) -> Result<GridFunction> {
    let gamma = crate::transform::transform_normalization(plan.mult());
    let ff = plan.forward(f)?;
    let fg = plan.forward(g)?;
    let prod = ff
        .values()
        .iter()
        .zip(fg.values())
        .map(|(a, b)| a * b * gamma)
        .collect();
    plan.inverse(&GridFunction::new(plan.xi_grid().clone(), prod)?)
}

/// 𝒪(y, r) = {x : ||x_j| − |y_j|| ≤ r for all j}, the orbit of B(y, r)
/// under the coordinate reflections.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRegion {
    center: Vec<f64>,
    radius: f64,
}

impl OrbitRegion {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(DunklError::InvalidParameter {
                name: "r",
                value: radius,
                reason: "must be finite and positive",
            });
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(&self.center)
            .all(|(a, b)| (a.abs() - b.abs()).abs() <= self.radius)
    }
}

/// Result of [`orbit_tail_mass`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitTail {
    /// ∫ over the complement of 𝒪(y, r) of |τ_{−y} f| dμ.
    pub mass: f64,
    /// ‖f‖ in L¹((1+|x|)^δ dμ).
    pub weighted_norm: f64,
    /// mass / (r^{−δ} weighted_norm).
    pub ratio: f64,
}

/// Space grid for the tail integral: covers the support of τ_{−y} f and
/// puts breakpoints on the orbit boundary.
fn tail_grid(
    mult: &MultiplicityVector,
    reach: &[f64],
    y: &[f64],
    r: f64,
    order: usize,
) -> Result<TensorGrid> {
    let axes = (0..mult.dim())
        .map(|j| {
            let big = reach[j] + y[j].abs();
            let mut marks = vec![0.0, big, y[j].abs(), y[j].abs() + r, y[j].abs() - r];
            marks.retain(|m| *m >= 0.0 && *m <= big);
            marks.sort_by(f64::total_cmp);
            marks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
            let mut pos = vec![0.0];
            for w in marks.windows(2) {
                let n = ((w[1] - w[0]) / 0.5).ceil().max(1.0) as usize;
                for i in 1..=n {
                    pos.push(w[0] + (w[1] - w[0]) * i as f64 / n as f64);
                }
            }
            let mut breaks: Vec<f64> = pos.iter().rev().map(|v| -v).collect();
            breaks.extend(pos.iter().skip(1));
            AxisGrid::from_breakpoints(mult.get(j), &breaks, order)
        })
        .collect::<Result<Vec<_>>>()?;
    TensorGrid::new(axes)
}

/// ∫_{ℝⁿ∖𝒪(y,r)} |(τ_{−y} f)(x)| dμ(x) against r^{−δ} ‖f‖_{L¹((1+|x|)^δ dμ)}.
pub fn orbit_tail_mass(
    mult: &MultiplicityVector,
    f: &GridFunction,
    y: &[f64],
    r: f64,
    delta: f64,
) -> Result<OrbitTail> {
    mult.check_point(y)?;
    let orbit = OrbitRegion::new(y.to_vec(), r)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(DunklError::InvalidParameter {
            name: "delta",
            value: delta,
            reason: "must be finite and positive",
        });
    }
    let reach: Vec<f64> = f
        .grid()
        .axes()
        .iter()
        .map(|a| a.lo().abs().max(a.hi().abs()))
        .collect();
    let grid = tail_grid(mult, &reach, y, r, 16)?;
    let tr = Translator::new(mult)?;
    let neg: Vec<f64> = y.iter().map(|v| -v).collect();
    let parts = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let x = grid.node(i);
            if orbit.contains(&x) {
                return Ok(0.0);
            }
            Ok(tr.translate(f, &neg, &x)?.norm() * grid.weight(i))
        })
        .collect::<Result<Vec<f64>>>()?;
    let mass: f64 = parts.iter().sum();
    let weighted_norm = f.weighted_l1(delta);
    let ratio = if weighted_norm == 0.0 {
        0.0
    } else {
        mass / (r.powf(-delta) * weighted_norm)
    };
    Ok(OrbitTail {
        mass,
        weighted_norm,
        ratio,
    })
}

/// Points (x, y) for the total-variation scan.
pub fn total_variation_grid() -> Vec<(f64, f64)> {
    let v = lin_space(-5.0, 5.0, 41);
    v.iter()
        .flat_map(|&x| v.iter().map(move |&y| (x, y)))
        .collect()
}

/// sup |ν_{x,y}|(ℝ) over the grid.
pub fn total_variation_scan(
    k: f64,
    points: &[(f64, f64)],
    grid_id: &str,
) -> Result<EstimateReport> {
    let mult = MultiplicityVector::scalar(k)?;
    let rules = if k > 0.0 {
        Some(TranslationRules::new(k, DEFAULT_ORDER)?)
    } else {
        None
    };
    let (i, c) = par_argmax(points, |&(x, y)| match &rules {
        Some(r) => {
            TranslationMeasure::with_rules(r, x, y).map_or(f64::NAN, |m| m.total_variation())
        }
        None => total_variation(0.0, x, y).unwrap_or(f64::NAN),
    })
    .ok_or_else(|| DunklError::Config("empty total-variation grid".into()))?;
    Ok(
        EstimateReport::new("translation.total_variation", &mult, grid_id, c)
            .with_witness(&["x", "y"], &[points[i].0, points[i].1]),
    )
}

/// sup |ν_{x,y}(ℝ) − 1| over the grid, as a tolerance check.
pub fn mass_defect_scan(
    k: f64,
    points: &[(f64, f64)],
    grid_id: &str,
    tol: f64,
) -> Result<EstimateReport> {
    let mult = MultiplicityVector::scalar(k)?;
    let (i, c) = par_argmax(points, |&(x, y)| {
        TranslationMeasure::new(k, x, y).map_or(f64::NAN, |m| (m.mass() - 1.0).abs())
    })
    .ok_or_else(|| DunklError::Config("empty mass grid".into()))?;
    Ok(EstimateReport::new("translation.mass", &mult, grid_id, c)
        .with_witness(&["x", "y"], &[points[i].0, points[i].1])
        .with_threshold(tol))
}

/// exp(−1/(1−u²)) on (−1, 1), zero outside.
pub fn classic_bump(u: f64) -> f64 {
    if u.abs() < 1.0 {
        (-1.0 / (1.0 - u * u)).exp()
    } else {
        0.0
    }
}

/// Families for the algebra and tail scans, in one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraGrid {
    pub centers: Vec<f64>,
    pub radius: f64,
    pub deltas: Vec<f64>,
    pub panels_per_side: usize,
}

impl Default for AlgebraGrid {
    fn default() -> Self {
        Self {
            centers: vec![-3.0, 0.0, 0.5, 2.0],
            radius: 1.0,
            deltas: vec![0.0, 1.0],
            panels_per_side: 12,
        }
    }
}

/// sup over pairs of bumps of ‖f∗g‖_δ / (‖f‖_δ ‖g‖_δ), δ-weighted L¹(dμ) norms.
pub fn algebra_scan(k: f64, grid: &AlgebraGrid, grid_id: &str) -> Result<EstimateReport> {
    let mult = MultiplicityVector::scalar(k)?;
    let reach = 2.0 * (grid.centers.iter().fold(0.0f64, |a, c| a.max(c.abs())) + grid.radius) + 0.5;
    let space = Arc::new(TensorGrid::single(AxisGrid::uniform(
        k,
        reach,
        grid.panels_per_side,
        16,
    )?));
    let bumps: Vec<GridFunction> = grid
        .centers
        .iter()
        .map(|&c| {
            GridFunction::sample_real(space.clone(), |x| {
                classic_bump((x[0] - c) / grid.radius) * (1.0 + 0.3 * x[0])
            })
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..bumps.len())
        .flat_map(|i| (i..bumps.len()).map(move |j| (i, j)))
        .collect();
    let convs = pairs
        .par_iter()
        .map(|&(i, j)| convolve(&bumps[i], &bumps[j]))
        .collect::<Result<Vec<_>>>()?;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0, 0.0);
    for &delta in &grid.deltas {
        for (p, &(i, j)) in pairs.iter().enumerate() {
            let q = convs[p].weighted_l1(delta)
                / (bumps[i].weighted_l1(delta) * bumps[j].weighted_l1(delta));
            if q > best.0 {
                best = (q, grid.centers[i], grid.centers[j], delta);
            }
        }
    }
    Ok(
        EstimateReport::new("translation.weighted_algebra", &mult, grid_id, best.0)
            .with_witness(&["c_f", "c_g", "delta"], &[best.1, best.2, best.3]),
    )
}

/// sup over (y, r) of the orbit tail ratio for a fixed smooth f.
pub fn orbit_tail_scan(
    k: f64,
    ys: &[f64],
    rs: &[f64],
    delta: f64,
    grid_id: &str,
) -> Result<EstimateReport> {
    let mult = MultiplicityVector::scalar(k)?;
    let space = Arc::new(TensorGrid::single(AxisGrid::uniform(k, 4.0, 8, 16)?));
    let f = GridFunction::sample_real(space, |x| classic_bump(x[0] / 3.0) * (1.0 + 0.5 * x[0]));
    let cases: Vec<(f64, f64)> = ys
        .iter()
        .flat_map(|&y| rs.iter().map(move |&r| (y, r)))
        .collect();
    let vals = cases
        .par_iter()
        .map(|&(y, r)| orbit_tail_mass(&mult, &f, &[y], r, delta).map(|t| t.ratio))
        .collect::<Result<Vec<_>>>()?;
    let (i, c) =
        crate::scan::argmax(&vals).ok_or_else(|| DunklError::Config("empty orbit grid".into()))?;
    Ok(
        EstimateReport::new("translation.orbit_tail", &mult, grid_id, c)
            .with_witness(&["y", "r", "delta"], &[cases[i].0, cases[i].1, delta]),
    )
}
