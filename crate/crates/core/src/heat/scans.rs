//! Grid scans measuring the constants in the heat kernel estimates.

use rayon::prelude::*;

use super::cutoff::{error_kernel_1d, truncated_kernel_1d, CutoffSpec, ProductKernel};
use super::kernel::HeatKernel1D;
use super::semigroup::TimeGrid;
use crate::error::{check_positive, DunklError, Result};
use crate::grid::AxisGrid;
use crate::measure::{mu_ball_1d, mu_ball_nd, BallMeasureContext, QuadratureSpec};
use crate::quadrature::{weighted_panel, GaussRule};
use crate::report::EstimateReport;
use crate::scan::{densify, lin_space, log_space, par_argmax};
use crate::specfn::MultiplicityVector;

/// Decay constant in e^{−|x−y|²/ct} used when none is given.
pub const DEFAULT_DECAY_CONSTANT: f64 = 72.0;

/// Points for the global behaviour scan.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalGrid {
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
}

impl Default for GlobalGrid {
    fn default() -> Self {
        Self {
            xs: lin_space(-8.0, 8.0, 33),
            ts: log_space(1e-2, 1e2, 13),
        }
    }
}

impl GlobalGrid {
    pub fn refined(&self) -> Self {
        Self {
            xs: densify(&self.xs, false),
            ts: densify(&self.ts, true),
        }
    }
}

/// Regime of (t, x, y) for the three-case description of h_t.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// |xy| ≤ t.
    Near,
    /// xy ≥ t.
    Direct,
    /// −xy ≥ t.
    Reflected,
}

impl Regime {
    pub fn of(t: f64, x: f64, y: f64) -> Self {
        let xy = x * y;
        if xy.abs() <= t {
            Regime::Near
        } else if xy > 0.0 {
            Regime::Direct
        } else {
            Regime::Reflected
        }
    }
}

/// ln of the order of magnitude of h_t(x, y) in its regime:
/// t^{−k−½}e^{−(x²+y²)/4t}, t^{−½}(xy)^{−k}e^{−(x−y)²/4t} or
/// t^{½}(−xy)^{−k−1}e^{−(x+y)²/4t}.
pub fn ln_global_comparator(k: f64, t: f64, x: f64, y: f64) -> f64 {
    match Regime::of(t, x, y) {
        Regime::Near => -(k + 0.5) * t.ln() - (x * x + y * y) / (4.0 * t),
        Regime::Direct => -0.5 * t.ln() - k * (x * y).ln() - (x - y) * (x - y) / (4.0 * t),
        Regime::Reflected => {
            0.5 * t.ln() - (k + 1.0) * (-x * y).ln() - (x + y) * (x + y) / (4.0 * t)
        }
    }
}

fn two_sided_ln(ln_q: f64) -> f64 {
    if ln_q.is_nan() {
        return f64::INFINITY;
    }
    ln_q.abs().exp()
}

/// Two-sided constants for h_t against its regime comparators, for the
/// diagonal h_t(x,x)μ(B(x,√t)) and, when k > 0, for the reflected diagonal
/// h_t(x,−x)μ(B(x,√t))(t+x²)/t. With k = 0 the reflected regime has no
/// comparator (the kernel is then Gaussian in x − y) and is skipped.
pub fn global_behavior_scan(
    k: f64,
    grid: &GlobalGrid,
    grid_id: &str,
) -> Result<Vec<EstimateReport>> {
    let mult = MultiplicityVector::scalar(k)?;
    let hk = HeatKernel1D::new(k)?;
    let mut triples = Vec::new();
    for &t in &grid.ts {
        for &x in &grid.xs {
            for &y in &grid.xs {
                if k == 0.0 && Regime::of(t, x, y) == Regime::Reflected {
                    continue;
                }
                triples.push((t, x, y));
            }
        }
    }
    let (i, c) = par_argmax(&triples, |&(t, x, y)| {
        two_sided_ln(hk.ln_value(t, x, y) - ln_global_comparator(k, t, x, y))
    })
    .ok_or_else(|| DunklError::Config("empty grid".into()))?;
    let (t, x, y) = triples[i];
    let mut out = vec![
        EstimateReport::new("heat.global_behavior", &mult, grid_id, c)
            .with_witness(&["t", "x", "y"], &[t, x, y]),
    ];

    let pairs: Vec<(f64, f64)> = grid
        .ts
        .iter()
        .flat_map(|&t| grid.xs.iter().map(move |&x| (t, x)))
        .collect();
    let (i, c) = par_argmax(&pairs, |&(t, x)| {
        two_sided_ln(hk.ln_value(t, x, x) + mu_ball_1d(k, x, t.sqrt()).ln())
    })
    .unwrap();
    out.push(
        EstimateReport::new("heat.diagonal", &mult, grid_id, c)
            .with_witness(&["t", "x"], &[pairs[i].0, pairs[i].1]),
    );
    if k > 0.0 {
        let (i, c) = par_argmax(&pairs, |&(t, x)| {
            two_sided_ln(
                hk.ln_value(t, x, -x) + mu_ball_1d(k, x, t.sqrt()).ln() + ((t + x * x) / t).ln(),
            )
        })
        .unwrap();
        out.push(
            EstimateReport::new("heat.reflected_diagonal", &mult, grid_id, c)
                .with_witness(&["t", "x"], &[pairs[i].0, pairs[i].1]),
        );
    }
    Ok(out)
}

/// Points for the truncated-kernel scans. In one dimension the reduction
/// to x ∈ {0, 1} by rescaling leaves y and t free.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedGrid {
    pub xs: Vec<Vec<f64>>,
    pub ys: Vec<Vec<f64>>,
    pub ts: Vec<f64>,
    /// Lipschitz offsets |y − y′| in units of √t.
    pub offsets: Vec<f64>,
}

fn axis_with_marks(lo: f64, hi: f64, n: usize, marks: &[f64]) -> Vec<f64> {
    let mut v = lin_space(lo, hi, n);
    v.extend_from_slice(marks);
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

impl TruncatedGrid {
    pub fn standard(dim: usize) -> Self {
        let offsets = vec![0.05, 0.25, 1.0, 3.0];
        // the cutoff derivative peaks sharply inside the transition bands
        // of χ₁ (y ∈ [−3, −2] ∪ [−½, −⅓] at x = 1) and of χ₂ (t ∈ [½, 1])
        let mut bands = lin_space(-3.0, -2.0, 17);
        bands.extend(lin_space(-0.5, -1.0 / 3.0, 17));
        let mut ts = log_space(1e-3, 1e3, 31);
        ts.extend(lin_space(0.5, 1.0, 9));
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        if dim == 1 {
            let mut marks = vec![-1.0, 0.0, 1.0];
            marks.extend(&bands);
            let ys = axis_with_marks(-6.0, 6.0, 97, &marks);
            Self {
                xs: vec![vec![0.0], vec![1.0]],
                ys: ys.into_iter().map(|y| vec![y]).collect(),
                ts,
                offsets,
            }
        } else {
            let mut marks = vec![-1.0, 1.0];
            marks.extend(bands.iter().step_by(2));
            let axis = axis_with_marks(-4.0, 4.0, 17, &marks);
            let mut ys = Vec::new();
            for &a in &axis {
                for &b in &axis {
                    let mut p = vec![a, b];
                    p.resize(dim, 0.0);
                    ys.push(p);
                }
            }
            let xs = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, -1.0]]
                .iter()
                .map(|p| {
                    let mut v = p.to_vec();
                    v.resize(dim, 0.0);
                    v
                })
                .collect();
            let ts = ts.into_iter().step_by(2).collect();
            Self {
                xs,
                ys,
                ts,
                offsets,
            }
        }
    }

    /// Twice as dense in y and t.
    pub fn refined(&self) -> Self {
        let dim = self.ys.first().map_or(1, |y| y.len());
        let ys = if dim == 1 {
            let v: Vec<f64> = self.ys.iter().map(|y| y[0]).collect();
            densify(&v, false).into_iter().map(|y| vec![y]).collect()
        } else {
            let mut axis: Vec<f64> = self.ys.iter().map(|y| y[0]).collect();
            axis.sort_by(f64::total_cmp);
            axis.dedup();
            let axis = densify(&axis, false);
            let mut ys = Vec::new();
            for &a in &axis {
                for &b in &axis {
                    let mut p = vec![a, b];
                    p.resize(dim, 0.0);
                    ys.push(p);
                }
            }
            ys
        };
        Self {
            xs: self.xs.clone(),
            ys,
            ts: densify(&self.ts, true),
            offsets: self.offsets.clone(),
        }
    }
}

fn sq_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// The truncated-kernel estimates as five reports: on-diagonal two-sided,
/// off-diagonal Gaussian, gradient, plain Lipschitz and improved Lipschitz
/// (|y − y′| ≤ ½|x − y|). In one dimension the ball measure is taken at x;
/// for products the larger of the measures at x and y is used in the
/// off-diagonal and gradient bounds.
pub fn truncated_gaussian_scan(
    mult: &MultiplicityVector,
    spec: &CutoffSpec,
    c: f64,
    grid: &TruncatedGrid,
    grid_id: &str,
) -> Result<Vec<EstimateReport>> {
    check_positive("c", c)?;
    let pk = ProductKernel::new(mult, *spec)?;
    let n = mult.dim();
    let ctx = BallMeasureContext::with_default_quadrature(mult.clone())?;
    let ln_mu = |p: &[f64], t: f64| -> f64 {
        if n == 1 {
            mu_ball_1d(mult.get(0), p[0], t.sqrt()).ln()
        } else {
            mu_ball_nd(&ctx, p, t.sqrt()).expect("ball measure").ln()
        }
    };
    // ball measures are reused across many pairs
    let nt = grid.ts.len();
    let mu_x: Vec<f64> = grid
        .xs
        .iter()
        .flat_map(|x| grid.ts.iter().map(|&t| ln_mu(x, t)))
        .collect::<Vec<_>>();
    let mu_y: Vec<f64> = if n == 1 {
        Vec::new()
    } else {
        let idx: Vec<(usize, usize)> = (0..grid.ys.len())
            .flat_map(|i| (0..nt).map(move |j| (i, j)))
            .collect();
        idx.par_iter()
            .map(|&(i, j)| ln_mu(&grid.ys[i], grid.ts[j]))
            .collect()
    };
    let ln_mu_off = |xi: usize, yi: usize, ti: usize| -> f64 {
        let a = mu_x[xi * nt + ti];
        if n == 1 {
            a
        } else {
            a.max(mu_y[yi * nt + ti])
        }
    };

    let diag: Vec<(usize, usize)> = (0..grid.xs.len())
        .flat_map(|i| (0..nt).map(move |j| (i, j)))
        .collect();
    let (id, cd) = par_argmax(&diag, |&(xi, ti)| {
        let x = &grid.xs[xi];
        two_sided_ln(pk.ln_truncated(grid.ts[ti], x, x).unwrap() + mu_x[xi * nt + ti])
    })
    .unwrap();

    let cases: Vec<(usize, usize, usize)> = (0..grid.xs.len())
        .flat_map(|xi| (0..grid.ys.len()).flat_map(move |yi| (0..nt).map(move |ti| (xi, yi, ti))))
        .collect();
    let (io, co) = par_argmax(&cases, |&(xi, yi, ti)| {
        let (x, y, t) = (&grid.xs[xi], &grid.ys[yi], grid.ts[ti]);
        (pk.ln_truncated(t, x, y).unwrap() + ln_mu_off(xi, yi, ti) + sq_dist(x, y) / (c * t)).exp()
    })
    .unwrap();
    let (ig, cg) = par_argmax(&cases, |&(xi, yi, ti)| {
        let (x, y, t) = (&grid.xs[xi], &grid.ys[yi], grid.ts[ti]);
        let g = pk.truncated_grad_y(t, x, y).unwrap();
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        (norm.ln() + 0.5 * t.ln() + ln_mu_off(xi, yi, ti) + sq_dist(x, y) / (c * t)).exp()
    })
    .unwrap();

    // Lipschitz pairs: y′ = y ± δ√t e_j
    let lip = |xi: usize, yi: usize, ti: usize, improved: bool| -> (f64, f64) {
        let (x, y, t) = (&grid.xs[xi], &grid.ys[yi], grid.ts[ti]);
        let h0 = pk.truncated(t, x, y).unwrap();
        let dxy = sq_dist(x, y).sqrt();
        let mut best = (0.0f64, 0.0);
        for &d in &grid.offsets {
            let step = d * t.sqrt();
            if improved && step > 0.5 * dxy {
                continue;
            }
            for j in 0..n {
                for sgn in [-1.0, 1.0] {
                    let mut yp = y.clone();
                    yp[j] += sgn * step;
                    let diff = (h0 - pk.truncated(t, x, &yp).unwrap()).abs();
                    if diff == 0.0 {
                        continue;
                    }
                    let mut ln = diff.ln() + mu_x[xi * nt + ti] + 0.5 * t.ln() - step.ln();
                    if improved {
                        ln += dxy * dxy / (c * t);
                    }
                    let v = ln.exp();
                    if v > best.0 {
                        best = (v, sgn * d);
                    }
                }
            }
        }
        best
    };
    let (il, cl) = par_argmax(&cases, |&(xi, yi, ti)| lip(xi, yi, ti, false).0).unwrap();
    let (ii, ci) = par_argmax(&cases, |&(xi, yi, ti)| lip(xi, yi, ti, true).0).unwrap();

    let names = |with_y: bool| -> Vec<String> {
        let mut v: Vec<String> = vec!["t".into()];
        v.extend((0..n).map(|j| format!("x{j}")));
        if with_y {
            v.extend((0..n).map(|j| format!("y{j}")));
        }
        v
    };
    let witness = |ti: usize, xi: usize, yi: Option<usize>| -> Vec<f64> {
        let mut v = vec![grid.ts[ti]];
        v.extend(&grid.xs[xi]);
        if let Some(yi) = yi {
            v.extend(&grid.ys[yi]);
        }
        v
    };
    let rep = |id: &str, c: f64, ti: usize, xi: usize, yi: Option<usize>| {
        let nm = names(yi.is_some());
        let nm: Vec<&str> = nm.iter().map(String::as_str).collect();
        EstimateReport::new(id, mult, grid_id, c).with_witness(&nm, &witness(ti, xi, yi))
    };
    let (dx, dt) = diag[id];
    let (ox, oy, ot) = cases[io];
    let (gx, gy, gt) = cases[ig];
    let (lx, ly, lt) = cases[il];
    let (mx, my, mt) = cases[ii];
    Ok(vec![
        rep("heat.truncated.on_diagonal", cd, dt, dx, None),
        rep("heat.truncated.off_diagonal", co, ot, ox, Some(oy)),
        rep("heat.truncated.gradient", cg, gt, gx, Some(gy)),
        rep("heat.truncated.lipschitz", cl, lt, lx, Some(ly)),
        rep("heat.truncated.lipschitz_improved", ci, mt, mx, Some(my)),
    ])
}

/// Breakpoints shared by the x-integrals: panel ends split uniformly.
fn split(breaks: &[f64], per_unit: f64) -> Vec<f64> {
    let mut out = vec![breaks[0]];
    for w in breaks.windows(2) {
        let m = ((w[1] - w[0]) * per_unit).ceil().max(1.0) as usize;
        for i in 1..=m {
            out.push(w[0] + (w[1] - w[0]) * i as f64 / m as f64);
        }
    }
    out
}

/// ∫ dμ(x) sup_{t ∈ tg} Q_t(x, y) in one dimension, or the same with P_t for
/// products. `resolution` scales the number of x-panels.
pub fn q_star_l1(
    mult: &MultiplicityVector,
    spec: &CutoffSpec,
    y: &[f64],
    resolution: usize,
    tg: &TimeGrid,
) -> Result<f64> {
    mult.check_point(y)?;
    if y.iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }
    let n = mult.dim();
    let res = resolution.max(1) as f64;
    let ts = tg.points();
    let ymax = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let axes: Vec<AxisGrid> = (0..n)
        .map(|j| {
            let k = mult.get(j);
            let yj = y[j];
            let breaks = if n == 1 {
                let s = yj.signum();
                let mut b = vec![-3.0 * yj, -yj, -yj / 3.0];
                if s < 0.0 {
                    b.reverse();
                }
                split(&b, 2.0 * res / yj.abs())
            } else {
                let r = yj.abs() + 36.0 * ymax;
                let mut b = vec![-r, r, 0.0];
                for m in [yj, -yj, 3.0 * yj, -3.0 * yj, yj / 3.0, -yj / 3.0] {
                    if m != 0.0 {
                        b.push(m);
                    }
                }
                b.sort_by(f64::total_cmp);
                b.dedup();
                // finer panels near the supports of Q, coarser in the Gaussian tails
                let mut out = vec![b[0]];
                for w in b.windows(2) {
                    let near = w[0].abs().max(w[1].abs()) <= 3.0 * ymax + 1e-12;
                    let per = if near {
                        2.0 * res / ymax
                    } else {
                        0.2 * res / ymax
                    };
                    let m = ((w[1] - w[0]) * per).ceil().max(1.0) as usize;
                    for i in 1..=m {
                        out.push(w[0] + (w[1] - w[0]) * i as f64 / m as f64);
                    }
                }
                out
            };
            AxisGrid::from_breakpoints(k, &breaks, 16)
        })
        .collect::<Result<_>>()?;
    let kernels: Vec<HeatKernel1D> = mult
        .k()
        .iter()
        .map(|&k| HeatKernel1D::new(k))
        .collect::<Result<_>>()?;
    // per-axis tables of (H, Q) over nodes × times
    let tables: Vec<Vec<(f64, f64)>> = (0..n)
        .map(|j| {
            let nodes = axes[j].nodes();
            nodes
                .par_iter()
                .flat_map_iter(|&x| {
                    let hk = &kernels[j];
                    ts.iter().map(move |&t| {
                        (
                            truncated_kernel_1d(hk, spec, t, x, y[j]),
                            error_kernel_1d(hk, spec, t, x, y[j]),
                        )
                    })
                })
                .collect()
        })
        .collect();
    let nt = ts.len();
    match n {
        1 => {
            let w = axes[0].weights();
            Ok((0..axes[0].len())
                .map(|i| {
                    w[i] * (0..nt)
                        .map(|ti| tables[0][i * nt + ti].1)
                        .fold(0.0, f64::max)
                })
                .sum())
        }
        2 => {
            let (w0, w1) = (axes[0].weights(), axes[1].weights());
            let total: f64 = (0..axes[0].len())
                .into_par_iter()
                .map(|i| {
                    let mut row = 0.0;
                    for l in 0..axes[1].len() {
                        let mut best = 0.0f64;
                        for ti in 0..nt {
                            let (h1, q1) = tables[0][i * nt + ti];
                            let (h2, q2) = tables[1][l * nt + ti];
                            best = best.max(q1 * (h2 + q2) + h1 * q2);
                        }
                        row += w1[l] * best;
                    }
                    w0[i] * row
                })
                .collect::<Vec<f64>>()
                .iter()
                .sum();
            Ok(total)
        }
        _ => Err(DunklError::Config(format!(
            "q_star_l1 is implemented for n <= 2, got n = {n}"
        ))),
    }
}

/// sup over the listed y of [`q_star_l1`].
pub fn q_star_l1_scan(
    mult: &MultiplicityVector,
    spec: &CutoffSpec,
    ys: &[Vec<f64>],
    resolution: usize,
    tg: &TimeGrid,
    grid_id: &str,
) -> Result<EstimateReport> {
    let vals: Vec<f64> = ys
        .iter()
        .map(|y| q_star_l1(mult, spec, y, resolution, tg))
        .collect::<Result<_>>()?;
    let (i, c) =
        crate::scan::argmax(&vals).ok_or_else(|| DunklError::Config("no y points".into()))?;
    let names: Vec<String> = (0..mult.dim()).map(|j| format!("y{j}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(EstimateReport::new("heat.q_star_l1", mult, grid_id, c).with_witness(&names, &ys[i]))
}

/// ∫ dμ(x) |∂h_t(x, y)/∂y| in one dimension.
///
/// Panels break at 0, ±y and at the sign changes of the integrand, which
/// are located by bisection.
pub fn grad_l1_norm(k: f64, t: f64, y: f64) -> Result<f64> {
    check_positive("t", t)?;
    let hk = HeatKernel1D::new(k)?;
    let q = QuadratureSpec::default();
    let s = q.truncation_radius(t, k, y.abs()) + t.sqrt();
    let r = y.abs() + s;
    let mut breaks = vec![-r, r, 0.0];
    for v in [y, -y] {
        if v != 0.0 {
            breaks.push(v);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let breaks = split(&breaks, 2.0 / t.sqrt());
    let g = |x: f64| hk.grad_y(t, x, y);
    let mut cuts = breaks.clone();
    for w in breaks.windows(2) {
        let m = 32;
        let mut prev = (w[0], g(w[0]));
        for i in 1..=m {
            let x = w[0] + (w[1] - w[0]) * i as f64 / m as f64;
            let gx = g(x);
            if prev.1 * gx < 0.0 {
                let (mut a, mut b) = (prev.0, x);
                let ga = prev.1;
                for _ in 0..80 {
                    let mid = 0.5 * (a + b);
                    if g(mid) * ga > 0.0 {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                cuts.push(0.5 * (a + b));
            }
            prev = (x, gx);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|b, a| (*b - *a).abs() <= 1e-14 * (1.0 + a.abs()));
    let plain = GaussRule::legendre(32);
    let at_zero = if k > 0.0 {
        Some(GaussRule::jacobi(32, 0.0, 2.0 * k)?)
    } else {
        None
    };
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (nodes, weights) = weighted_panel(&plain, at_zero.as_ref(), k, w[0], w[1]);
        total += nodes
            .iter()
            .zip(&weights)
            .map(|(&x, &wx)| wx * g(x).abs())
            .sum::<f64>();
    }
    Ok(total)
}

/// sup over y of √t ∫ dμ(x) |∂_y h_t(x, y)|, evaluated at t = 1 (the
/// quantity is scale invariant).
pub fn grad_l1_scan(k: f64, ys: &[f64], grid_id: &str) -> Result<EstimateReport> {
    let mult = MultiplicityVector::scalar(k)?;
    let vals: Vec<f64> = ys
        .par_iter()
        .map(|&y| grad_l1_norm(k, 1.0, y))
        .collect::<Result<_>>()?;
    let (i, c) =
        crate::scan::argmax(&vals).ok_or_else(|| DunklError::Config("no y points".into()))?;
    Ok(EstimateReport::new("heat.grad_l1", &mult, grid_id, c).with_witness(&["y"], &[ys[i]]))
}
