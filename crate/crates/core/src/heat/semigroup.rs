//! The heat semigroup e^{tL} acting on grid functions and the maximal heat
//! operator sup_t |e^{tL} f|.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::kernel::HeatKernel1D;
use crate::error::{check_positive, DunklError, Result};
use crate::grid::{AxisGrid, EdgeMagnitudes, GridFunction, TensorGrid};
use crate::measure::QuadratureSpec;
use crate::quadrature::{weighted_panel, GaussRule};
use crate::scan::log_space;
use crate::specfn::MultiplicityVector;

const APPLY_ORDER: usize = 40;
/// Relative size of f at the grid edge below which the grid counts as
/// covering f's support.
pub const EDGE_TOLERANCE: f64 = 1e-6;

/// Logarithmically spaced times realizing sup over t > 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    t_min: f64,
    t_max: f64,
    count: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            t_min: 1e-4,
            t_max: 1e4,
            count: 200,
        }
    }
}

impl TimeGrid {
    pub fn new(t_min: f64, t_max: f64, count: usize) -> Result<Self> {
        check_positive("t_min", t_min)?;
        check_positive("t_max", t_max)?;
        if !(t_min < t_max) {
            return Err(DunklError::Config(format!(
                "time grid needs t_min < t_max, got {t_min} >= {t_max}"
            )));
        }
        if count < 2 {
            return Err(DunklError::InvalidParameter {
                name: "count",
                value: count as f64,
                reason: "time grid needs at least two points",
            });
        }
        Ok(Self {
            t_min,
            t_max,
            count,
        })
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn points(&self) -> Vec<f64> {
        log_space(self.t_min, self.t_max, self.count)
    }

    /// Inserts the geometric midpoints; the old points are kept.
    pub fn refined(&self) -> Self {
        Self {
            count: 2 * self.count - 1,
            ..self.clone()
        }
    }

    /// The same grid for a problem rescaled by `length` (times scale as length²).
    pub fn rescaled(&self, length: f64) -> Self {
        let s = length * length;
        Self {
            t_min: self.t_min * s,
            t_max: self.t_max * s,
            count: self.count,
        }
    }
}

/// e^{tL} for a fixed multiplicity vector, with quadrature rules built once.
#[derive(Debug, Clone)]
pub struct HeatSemigroup {
    mult: MultiplicityVector,
    kernels: Vec<HeatKernel1D>,
    plain: GaussRule,
    at_zero: Vec<Option<GaussRule>>,
    truncation: QuadratureSpec,
}

impl HeatSemigroup {
    pub fn new(mult: &MultiplicityVector) -> Result<Self> {
        let kernels = mult
            .k()
            .iter()
            .map(|&k| HeatKernel1D::new(k))
            .collect::<Result<_>>()?;
        let at_zero = mult
            .k()
            .iter()
            .map(|&k| {
                if k > 0.0 {
                    GaussRule::jacobi(APPLY_ORDER, 0.0, 2.0 * k).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            mult: mult.clone(),
            kernels,
            plain: GaussRule::legendre(APPLY_ORDER),
            at_zero,
            truncation: QuadratureSpec::default(),
        })
    }

    pub fn mult(&self) -> &MultiplicityVector {
        &self.mult
    }

    /// w_i = ∫ h_t(x, y) ℓ_i(y) |y|^{2k} dy for the Lagrange basis ℓ_i of
    /// the axis grid, integrated on panels adapted to the kernel scale √t.
    /// Also reports whether the kernel's effective support leaves the grid
    /// on the low and high side.
    fn axis_weights(&self, j: usize, axis: &AxisGrid, t: f64, x: f64) -> (Vec<f64>, bool, bool) {
        let k = self.mult.get(j);
        let hk = &self.kernels[j];
        let s = self.truncation.truncation_radius(t, k, x.abs());
        let a = x.abs();
        let region: Vec<(f64, f64)> = if a - s <= 0.0 {
            vec![(-(a + s), a + s)]
        } else {
            vec![(-(a + s), -(a - s)), (a - s, a + s)]
        };
        let (lo, hi) = (axis.lo(), axis.hi());
        let leaves_lo = -(a + s) < lo;
        let leaves_hi = a + s > hi;

        let mut bp: Vec<f64> = axis.breakpoints();
        for &(r0, r1) in &region {
            bp.push(r0);
            bp.push(r1);
        }
        let step = t.sqrt();
        let m = (s / step).ceil() as i64;
        for c in [x, -x] {
            for i in -m..=m {
                bp.push(c + i as f64 * step);
            }
        }
        if lo < 0.0 && hi > 0.0 {
            bp.push(0.0);
        }
        bp.retain(|&b| b >= lo && b <= hi);
        bp.sort_by(f64::total_cmp);
        bp.dedup_by(|b, a| (*b - *a).abs() <= 1e-13 * (1.0 + a.abs()));

        let mut w = vec![0.0; axis.len()];
        let in_region = |v: f64| region.iter().any(|&(r0, r1)| v >= r0 && v <= r1);
        for pair in bp.windows(2) {
            let (p0, p1) = (pair[0], pair[1]);
            if !in_region(0.5 * (p0 + p1)) {
                continue;
            }
            let (nodes, weights) = weighted_panel(&self.plain, self.at_zero[j].as_ref(), k, p0, p1);
            for (&y, &wy) in nodes.iter().zip(&weights) {
                let hv = hk.value(t, x, y) * wy;
                if hv == 0.0 {
                    continue;
                }
                if let Some((start, basis)) = axis.basis(y) {
                    for (l, b) in basis.iter().enumerate() {
                        w[start + l] += hv * b;
                    }
                }
            }
        }
        (w, leaves_lo, leaves_hi)
    }

    fn apply_with(
        &self,
        f: &GridFunction,
        edge: &EdgeMagnitudes,
        t: f64,
        x: &[f64],
    ) -> Result<Complex64> {
        let grid = f.grid();
        let mut ws = Vec::with_capacity(grid.dim());
        for (j, axis) in grid.axes().iter().enumerate() {
            let (w, leaves_lo, leaves_hi) = self.axis_weights(j, axis, t, x[j]);
            coverage(edge, j, leaves_lo, leaves_hi, axis, t, x[j])?;
            ws.push(w);
        }
        Ok(contract(f.values(), &ws))
    }

    /// e^{tL} f(x) = ∫ h_t(x, y) f(y) dμ(y), with f extended by zero
    /// outside its grid.
    pub fn apply(&self, f: &GridFunction, t: f64, x: &[f64]) -> Result<Complex64> {
        self.check(f, x)?;
        check_positive("t", t)?;
        self.apply_with(f, &f.edge_magnitudes(), t, x)
    }

    /// e^{tL} f(x) for every f in `fs` and every x in `xs`, as `out[f][x]`.
    /// The functions must share one grid; kernel rows are computed once per
    /// distinct coordinate and reused across points and functions.
    pub fn apply_at(
        &self,
        fs: &[GridFunction],
        t: f64,
        xs: &[Vec<f64>],
    ) -> Result<Vec<Vec<Complex64>>> {
        check_positive("t", t)?;
        let Some(first) = fs.first() else {
            return Ok(Vec::new());
        };
        let grid = first.grid().clone();
        if fs.iter().any(|f| **f.grid() != *grid) {
            return Err(DunklError::Config(
                "apply_at needs functions on one grid".into(),
            ));
        }
        for x in xs {
            self.check(first, x)?;
        }
        let rows: Vec<Vec<(f64, (Vec<f64>, bool, bool))>> = grid
            .axes()
            .iter()
            .enumerate()
            .map(|(j, axis)| {
                let mut cs: Vec<f64> = xs.iter().map(|x| x[j]).collect();
                cs.sort_by(f64::total_cmp);
                cs.dedup();
                cs.into_par_iter()
                    .map(|c| (c, self.axis_weights(j, axis, t, c)))
                    .collect()
            })
            .collect();
        let row = |j: usize, c: f64| {
            let i = rows[j].partition_point(|(v, _)| v.total_cmp(&c).is_lt());
            &rows[j][i].1
        };
        let edges: Vec<EdgeMagnitudes> = fs.iter().map(GridFunction::edge_magnitudes).collect();
        fs.iter()
            .zip(&edges)
            .map(|(f, edge)| {
                xs.par_iter()
                    .map(|x| {
                        let mut ws = Vec::with_capacity(x.len());
                        for (j, &c) in x.iter().enumerate() {
                            let (w, lo, hi) = row(j, c);
                            coverage(edge, j, *lo, *hi, &grid.axes()[j], t, c)?;
                            ws.push(w.clone());
                        }
                        Ok(contract(f.values(), &ws))
                    })
                    .collect()
            })
            .collect()
    }

    /// e^{tL} f sampled on the nodes of `target`.
    pub fn evolve(
        &self,
        f: &GridFunction,
        t: f64,
        target: Arc<TensorGrid>,
    ) -> Result<GridFunction> {
        check_positive("t", t)?;
        let edge = f.edge_magnitudes();
        let vals: Vec<Complex64> = (0..target.len())
            .into_par_iter()
            .map(|i| {
                let x = target.node(i);
                self.apply_with(f, &edge, t, &x)
            })
            .collect::<Result<_>>()?;
        GridFunction::new(target, vals)
    }

    /// max over the time grid of |e^{tL} f(x)|.
    pub fn maximal(&self, f: &GridFunction, tg: &TimeGrid, x: &[f64]) -> Result<f64> {
        self.check(f, x)?;
        let edge = f.edge_magnitudes();
        let mut best = 0.0f64;
        for t in tg.points() {
            best = best.max(self.apply_with(f, &edge, t, x)?.norm());
        }
        Ok(best)
    }

    fn check(&self, f: &GridFunction, x: &[f64]) -> Result<()> {
        self.mult.check_point(x)?;
        if f.multiplicity() != self.mult {
            return Err(DunklError::Config(
                "grid function carries a different multiplicity vector".into(),
            ));
        }
        Ok(())
    }
}

fn coverage(
    edge: &EdgeMagnitudes,
    j: usize,
    leaves_lo: bool,
    leaves_hi: bool,
    axis: &AxisGrid,
    t: f64,
    x: f64,
) -> Result<()> {
    let bad = (leaves_lo && edge.lo[j] > EDGE_TOLERANCE * edge.sup)
        || (leaves_hi && edge.hi[j] > EDGE_TOLERANCE * edge.sup);
    if bad {
        return Err(DunklError::GridCoverage(format!(
            "axis {j} spans [{}, {}] but the heat kernel at t = {t}, x = {x} reaches beyond it where f is not negligible",
            axis.lo(),
            axis.hi(),
        )));
    }
    Ok(())
}

/// Σ_i v_i ∏_j w_j(i_j) for row-major v.
fn contract(values: &[Complex64], ws: &[Vec<f64>]) -> Complex64 {
    let mut cur: Vec<Complex64> = values.to_vec();
    for w in ws.iter().rev() {
        let n = w.len();
        cur = cur
            .chunks(n)
            .map(|row| row.iter().zip(w).map(|(v, &wi)| v * wi).sum())
            .collect();
    }
    cur[0]
}

/// e^{tL} f(x).
pub fn heat_apply(
    mult: &MultiplicityVector,
    f: &GridFunction,
    t: f64,
    x: &[f64],
) -> Result<Complex64> {
    HeatSemigroup::new(mult)?.apply(f, t, x)
}

/// h_* f(x) restricted to the time grid.
pub fn maximal_heat(
    mult: &MultiplicityVector,
    f: &GridFunction,
    tg: &TimeGrid,
    x: &[f64],
) -> Result<f64> {
    HeatSemigroup::new(mult)?.maximal(f, tg, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(k: f64, r: f64, pps: usize) -> Arc<TensorGrid> {
        Arc::new(TensorGrid::single(
            AxisGrid::uniform(k, r, pps, 24).unwrap(),
        ))
    }

    #[test]
    fn time_grid_refinement_keeps_points() {
        let tg = TimeGrid::new(1e-2, 1e2, 5).unwrap();
        let r = tg.refined();
        let (a, b) = (tg.points(), r.points());
        for (i, v) in a.iter().enumerate() {
            assert!((b[2 * i] - v).abs() <= 1e-14 * v);
        }
        assert!(TimeGrid::new(1.0, 0.5, 3).is_err());
    }

    #[test]
    fn batched_apply_matches_pointwise() {
        let m = MultiplicityVector::new(vec![0.7, 1.2]).unwrap();
        let axis = |k| AxisGrid::uniform(k, 8.0, 4, 12).unwrap();
        let g = Arc::new(TensorGrid::new(vec![axis(0.7), axis(1.2)]).unwrap());
        let fs = [
            GridFunction::sample_real(g.clone(), |x| (-x[0] * x[0] - x[1] * x[1]).exp()),
            GridFunction::sample_real(g, |x| x[1] * (-(x[0] - 1.0).powi(2) - x[1] * x[1]).exp()),
        ];
        let xs = vec![vec![0.5, -1.0], vec![0.5, 2.0], vec![-1.5, -1.0]];
        let sg = HeatSemigroup::new(&m).unwrap();
        let out = sg.apply_at(&fs, 0.4, &xs).unwrap();
        for (f, row) in fs.iter().zip(&out) {
            for (x, v) in xs.iter().zip(row) {
                assert!((sg.apply(f, 0.4, x).unwrap() - v).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn mass_is_conserved() {
        for &k in &[0.0, 0.7, 2.5] {
            let m = MultiplicityVector::scalar(k).unwrap();
            let g = grid(k, 60.0, 12);
            let one = GridFunction::sample_real(g, |_| 1.0);
            let sg = HeatSemigroup::new(&m).unwrap();
            for &(t, x) in &[(0.01, 0.3), (1.0, -2.0), (10.0, 5.0)] {
                let v = sg.apply(&one, t, &[x]).unwrap();
                assert!((v.re - 1.0).abs() < 1e-8, "k={k} t={t} x={x}: {}", v.re);
            }
        }
    }

    #[test]
    fn euclidean_gaussian_evolution() {
        let m = MultiplicityVector::scalar(0.0).unwrap();
        let f = GridFunction::sample_real(grid(0.0, 12.0, 6), |y| (-y[0] * y[0]).exp());
        for &(t, x) in &[(0.1, 0.5), (0.5, -1.0), (2.0, 2.0)] {
            let got = heat_apply(&m, &f, t, &[x]).unwrap().re;
            let exact = (1.0 + 4.0 * t).powf(-0.5) * (-x * x / (1.0 + 4.0 * t)).exp();
            assert!((got - exact).abs() < 1e-10, "{got} vs {exact}");
        }
    }

    #[test]
    fn semigroup_property() {
        let m = MultiplicityVector::scalar(0.7).unwrap();
        let sg = HeatSemigroup::new(&m).unwrap();
        let g = grid(0.7, 14.0, 14);
        let f = GridFunction::sample_real(g.clone(), |y| (-(y[0] - 0.5) * (y[0] - 0.5)).exp());
        let (s, t) = (0.2, 0.3);
        let mid = sg.evolve(&f, s, g).unwrap();
        for &x in &[-1.0, 0.0, 0.7, 2.0] {
            let two = sg.apply(&mid, t, &[x]).unwrap().re;
            let one = sg.apply(&f, s + t, &[x]).unwrap().re;
            assert!((two - one).abs() < 1e-6, "x={x}: {two} vs {one}");
        }
    }

    #[test]
    fn coverage_violation_is_reported() {
        let m = MultiplicityVector::scalar(0.7).unwrap();
        let one = GridFunction::sample_real(grid(0.7, 2.0, 2), |_| 1.0);
        let err = heat_apply(&m, &one, 1.0, &[0.0]).unwrap_err();
        assert!(matches!(err, DunklError::GridCoverage(_)));
    }

    #[test]
    fn maximal_function_basics() {
        let m = MultiplicityVector::scalar(0.7).unwrap();
        let tg = TimeGrid::new(1e-3, 10.0, 9).unwrap();
        let one = GridFunction::sample_real(grid(0.7, 60.0, 12), |_| 1.0);
        assert!((maximal_heat(&m, &one, &tg, &[0.4]).unwrap() - 1.0).abs() < 1e-8);
        let bump =
            GridFunction::sample_real(grid(0.7, 4.0, 8), |y| (1.0 - y[0] * y[0]).max(0.0).powi(4));
        assert!(maximal_heat(&m, &bump, &tg, &[3.0]).unwrap() > 0.0);
    }

    #[test]
    fn approximate_identity() {
        let m = MultiplicityVector::scalar(0.7).unwrap();
        let sg = HeatSemigroup::new(&m).unwrap();
        let f = GridFunction::sample_real(grid(0.7, 3.0, 6), |y| {
            (1.0 - (y[0] - 0.2) * (y[0] - 0.2)).max(0.0).powi(6)
        });
        let x = 0.5;
        let target = (1.0 - 0.09f64).powi(6);
        let mut prev = f64::INFINITY;
        for &t in &[1e-1, 1e-2, 1e-3] {
            let err = (sg.apply(&f, t, &[x]).unwrap().re - target).abs();
            assert!(err < prev);
            prev = err;
        }
    }
}
