//! The measure dμ(x) = ∏|x_j|^{2k_j} dx_j: ball measures, the quasi-distance
//! and the associated doubling geometry.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{check_positive, DunklError, Result};
use crate::quadrature::GaussRule;
use crate::report::EstimateReport;
use crate::scan::{par_argmax, par_two_sided};
use crate::specfn::MultiplicityVector;

/// Closed ball B(center, radius).
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    center: Vec<f64>,
    radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        check_positive("radius", radius)?;
        if center.iter().any(|c| !c.is_finite()) {
            return Err(DunklError::Config("ball center must be finite".into()));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        dist(&self.center, x) <= self.radius
    }
}

/// Panel layout for the iterated ball quadrature, plus the truncation rule
/// for Gaussian-type integrands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub panels: usize,
    pub order: usize,
    /// Relative size of neglected tails.
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            panels: 2,
            order: 32,
            tolerance: 1e-12,
        }
    }
}

impl QuadratureSpec {
    pub fn new(panels: usize, order: usize, tolerance: f64) -> Result<Self> {
        if order < 16 {
            return Err(DunklError::InvalidParameter {
                name: "order",
                value: order as f64,
                reason: "quadrature order must be at least 16",
            });
        }
        if panels == 0 {
            return Err(DunklError::InvalidParameter {
                name: "panels",
                value: 0.0,
                reason: "need at least one panel",
            });
        }
        check_positive("tolerance", tolerance)?;
        Ok(Self {
            panels,
            order,
            tolerance,
        })
    }

    /// Half-width s such that a Gaussian factor e^{−u²/4t} times the
    /// polynomial growth |c + u|^{2k} is below `tolerance` beyond |u| = s.
    pub fn truncation_radius(&self, t: f64, k: f64, center_abs: f64) -> f64 {
        let base = (-self.tolerance.ln()).max(1.0);
        let mut s = 2.0 * (t * base).sqrt();
        for _ in 0..50 {
            let growth = 2.0 * k * (1.0 + center_abs + s).ln() + 0.5 * (1.0 + s * s / t).ln();
            let next = 2.0 * (t * (base + growth.max(0.0) + 2.0)).sqrt();
            if (next - s).abs() <= 1e-9 * s {
                break;
            }
            s = next;
        }
        s
    }
}

/// Multiplicities together with the quadrature used for n ≥ 2 balls.
#[derive(Debug, Clone, PartialEq)]
pub struct BallMeasureContext {
    mult: MultiplicityVector,
    quadrature: QuadratureSpec,
    plain: GaussRule,
    singular: Vec<Option<GaussRule>>,
}

impl BallMeasureContext {
    pub fn new(mult: MultiplicityVector, quadrature: QuadratureSpec) -> Result<Self> {
        if quadrature.order < 16 {
            return Err(DunklError::InvalidParameter {
                name: "order",
                value: quadrature.order as f64,
                reason: "quadrature order must be at least 16",
            });
        }
        let plain = GaussRule::legendre(quadrature.order);
        let singular = mult
            .k()
            .iter()
            .map(|&k| {
                if k > 0.0 {
                    GaussRule::jacobi(quadrature.order, 0.0, 2.0 * k).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            mult,
            quadrature,
            plain,
            singular,
        })
    }

    pub fn with_default_quadrature(mult: MultiplicityVector) -> Result<Self> {
        Self::new(mult, QuadratureSpec::default())
    }

    pub fn mult(&self) -> &MultiplicityVector {
        &self.mult
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        self.quadrature
    }

    /// Context with twice the per-panel order (for refinement checks).
    pub fn doubled(&self) -> Result<Self> {
        let q = QuadratureSpec {
            order: 2 * self.quadrature.order,
            ..self.quadrature
        };
        Self::new(self.mult.clone(), q)
    }
}

pub(crate) fn dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// μ(B(x, r)) in one dimension: A(x+r) − A(x−r) with A(y) = sign(y)|y|^{2k+1}/(2k+1).
pub fn mu_ball_1d(k: f64, x: f64, r: f64) -> f64 {
    assert!(k >= 0.0 && r > 0.0, "need k >= 0 and r > 0");
    if k == 0.0 {
        return 2.0 * r;
    }
    let p = 2.0 * k + 1.0;
    let a = x.abs();
    if a <= r {
        ((a + r).powf(p) + (r - a).powf(p)) / p
    } else {
        // a^p [(1+u)^p − (1−u)^p] / p without cancellation
        let u = r / a;
        let l1 = u.ln_1p();
        let l2 = (-u).ln_1p();
        a.powf(p) * (p * l2).exp() * (p * (l1 - l2)).exp_m1() / p
    }
}

/// r^n ∏(|x_j| + r)^{2k_j}, the comparison function for ball measures.
pub fn mu_ball_model(mult: &MultiplicityVector, x: &[f64], r: f64) -> f64 {
    mult.k()
        .iter()
        .zip(x)
        .map(|(&k, &xj)| r * (xj.abs() + r).powf(2.0 * k))
        .product()
}

/// μ(B(x, r)) for any dimension; closed form when n = 1.
///
/// For n ≥ 2 the first coordinate is integrated as z₁ = x₁ + r sin θ with
/// Gauss panels split where z₁ = 0 (Jacobi exponent 2k₁ there) and where
/// the chord radius r cos θ crosses |x₂|; the remaining coordinates recurse
/// down to the one-dimensional closed form.
pub fn mu_ball_nd(ctx: &BallMeasureContext, x: &[f64], r: f64) -> Result<f64> {
    ctx.mult.check_point(x)?;
    check_positive("r", r)?;
    Ok(mu_ball_rec(ctx, 0, x, r))
}

fn mu_ball_rec(ctx: &BallMeasureContext, axis: usize, x: &[f64], r: f64) -> f64 {
    let k = ctx.mult.get(axis);
    if axis + 1 == ctx.mult.dim() {
        return mu_ball_1d(k, x[axis], r);
    }
    if r <= 0.0 {
        return 0.0;
    }
    let x1 = x[axis];
    let mut breaks = vec![-FRAC_PI_2, FRAC_PI_2];
    let theta0 = if k > 0.0 && x1.abs() < r {
        Some((-x1 / r).asin())
    } else {
        None
    };
    if let Some(t0) = theta0 {
        breaks.push(t0);
    }
    let x2 = x[axis + 1].abs();
    if x2 > 0.0 && x2 < r {
        let tc = (x2 / r).acos();
        breaks.push(tc);
        breaks.push(-tc);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

    let sub = ctx.quadrature.panels.max(1);
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        for s in 0..sub {
            let lo = a + (b - a) * s as f64 / sub as f64;
            let hi = a + (b - a) * (s + 1) as f64 / sub as f64;
            let left_sing = theta0 == Some(a) && s == 0;
            let right_sing = theta0 == Some(b) && s + 1 == sub;
            total += theta_panel(ctx, axis, x, r, k, lo, hi, left_sing, right_sing, theta0);
        }
    }
    total
}

#[allow(clippy::too_many_arguments)]
fn theta_panel(
    ctx: &BallMeasureContext,
    axis: usize,
    x: &[f64],
    r: f64,
    k: f64,
    lo: f64,
    hi: f64,
    left_sing: bool,
    right_sing: bool,
    theta0: Option<f64>,
) -> f64 {
    let x1 = x[axis];
    let inner = |theta: f64| -> f64 {
        let rho = r * theta.cos();
        if rho <= 0.0 {
            return 0.0;
        }
        mu_ball_rec(ctx, axis + 1, x, rho) * rho
    };
    // |x1 + r sin θ|^{2k} = |θ − θ0|^{2k} · g(θ) with g smooth near θ0
    let (nodes, weights, sing_at) = match (&ctx.singular[axis], left_sing, right_sing) {
        (Some(rule), true, _) => {
            let (n, w) = rule.mapped(lo, hi);
            (n, w, Some(lo))
        }
        (Some(rule), false, true) => {
            let (n, w) = rule.mapped(0.0, hi - lo);
            let nodes: Vec<f64> = n.iter().rev().map(|u| hi - u).collect();
            let weights: Vec<f64> = w.iter().rev().copied().collect();
            (nodes, weights, Some(hi))
        }
        _ => {
            let (n, w) = ctx.plain.mapped(lo, hi);
            (n, w, None)
        }
    };
    let mut acc = 0.0;
    for (&th, &w) in nodes.iter().zip(&weights) {
        let z1 = x1 + r * th.sin();
        let weight = match sing_at {
            Some(t0) => {
                let d = (th - t0).abs();
                if d == 0.0 {
                    continue;
                }
                (z1.abs() / d).powf(2.0 * k)
            }
            None => z1.abs().powf(2.0 * k),
        };
        acc += w * weight * inner(th);
    }
    let _ = theta0;
    acc
}

/// Quasi-distance d̃(x, y): measure of the smallest ball centred on the
/// segment [x, y] that contains both points.
///
/// Balls centred on the segment and containing x and y are nested around
/// the one centred at the midpoint with radius |x − y|/2, so the minimum is
/// attained there.
pub fn quasi_distance(ctx: &BallMeasureContext, x: &[f64], y: &[f64]) -> Result<f64> {
    ctx.mult.check_point(x)?;
    ctx.mult.check_point(y)?;
    let d = dist(x, y);
    if d == 0.0 {
        return Ok(0.0);
    }
    let mid: Vec<f64> = x.iter().zip(y).map(|(a, b)| 0.5 * (a + b)).collect();
    mu_ball_nd(ctx, &mid, 0.5 * d)
}

/// The radius ρ with μ(B(x, ρ)) = target, by bisection in log ρ.
pub fn radius_for_measure(ctx: &BallMeasureContext, x: &[f64], target: f64) -> Result<f64> {
    ctx.mult.check_point(x)?;
    check_positive("target", target)?;
    let f = |rho: f64| mu_ball_nd(ctx, x, rho);
    // initial guess from the model r^n ∏(|x_j| + r)^{2k_j}
    let mut lo = 1.0;
    let mut hi = 1.0;
    let mut flo = f(lo)?;
    if flo > target {
        while flo > target {
            hi = lo;
            lo *= 0.5;
            flo = f(lo)?;
        }
    } else {
        let mut fhi = flo;
        while fhi < target {
            lo = hi;
            hi *= 2.0;
            fhi = f(hi)?;
        }
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if f(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-14 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// μ(B̃(x, r)) for the quasi-ball B̃(x, r) = {y : d̃(x, y) ≤ r}.
///
/// In one dimension d̃(x, y) is the measure of the interval between x and
/// y, so the quasi-ball is an interval found by inverting the
/// antiderivative. For n = 2 the quasi-ball is star-shaped about x (the
/// midpoint balls grow monotonically along rays); its radial function is
/// found by bisection and the area integral uses `angles` equally spaced
/// directions.
pub fn quasi_ball_measure(
    ctx: &BallMeasureContext,
    x: &[f64],
    r: f64,
    angles: usize,
) -> Result<f64> {
    ctx.mult.check_point(x)?;
    check_positive("r", r)?;
    match ctx.mult.dim() {
        1 => {
            let k = ctx.mult.get(0);
            let p = 2.0 * k + 1.0;
            let anti = |v: f64| v.signum() * v.abs().powf(p) / p;
            let inv = |v: f64| v.signum() * (p * v.abs()).powf(1.0 / p);
            let a = anti(x[0]);
            let (up, down) = (inv(a + r), inv(a - r));
            Ok(anti(up) - anti(down))
        }
        2 => quasi_ball_2d(ctx, x, r, angles.max(8)),
        n => Err(DunklError::Config(format!(
            "quasi-ball measure implemented for n <= 2, got n = {n}"
        ))),
    }
}

fn quasi_ball_2d(ctx: &BallMeasureContext, x: &[f64], r: f64, angles: usize) -> Result<f64> {
    let (k1, k2) = (ctx.mult.get(0), ctx.mult.get(1));
    let radial = GaussRule::legendre(24);
    let mut total = 0.0;
    for a in 0..angles {
        let th = 2.0 * PI * (a as f64 + 0.5) / angles as f64;
        let u = [th.cos(), th.sin()];
        let dq =
            |s: f64| -> Result<f64> { quasi_distance(ctx, x, &[x[0] + s * u[0], x[1] + s * u[1]]) };
        // bracket the boundary along the ray
        let mut hi = 1.0;
        while dq(hi)? < r {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        while hi - lo > 1e-12 * hi {
            let mid = 0.5 * (lo + hi);
            if dq(mid)? < r {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let rho = 0.5 * (lo + hi);
        // ∫_0^ρ |x1 + s u1|^{2k1} |x2 + s u2|^{2k2} s ds, split at axis crossings
        let mut cuts = vec![0.0, rho];
        for j in 0..2 {
            if u[j] != 0.0 {
                let s = -x[j] / u[j];
                if s > 0.0 && s < rho {
                    cuts.push(s);
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        let mut ray = 0.0;
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi <= lo {
                continue;
            }
            // graded sub-panels toward both ends absorb the |·|^{2k} kinks
            let sub = 8;
            for i in 0..sub {
                let a = lo + (hi - lo) * grade(i as f64 / sub as f64);
                let b = lo + (hi - lo) * grade((i + 1) as f64 / sub as f64);
                let (ns, ws) = radial.mapped(a, b);
                for (&s, &w) in ns.iter().zip(&ws) {
                    let z1 = x[0] + s * u[0];
                    let z2 = x[1] + s * u[1];
                    ray += w * z1.abs().powf(2.0 * k1) * z2.abs().powf(2.0 * k2) * s;
                }
            }
        }
        total += ray * 2.0 * PI / angles as f64;
    }
    Ok(total)
}

/// Map of [0,1] onto itself clustering points near both ends.
fn grade(s: f64) -> f64 {
    0.5 - 0.5 * (PI * s).cos()
}

/// Point sets for the volume-ratio scan.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeRatioGrid {
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
}

impl Default for VolumeRatioGrid {
    fn default() -> Self {
        Self {
            xs: crate::scan::lin_space(-10.0, 10.0, 41),
            ts: crate::scan::log_space(1e-2, 1e2, 21),
        }
    }
}

impl VolumeRatioGrid {
    pub fn doubled(&self) -> Self {
        Self {
            xs: crate::scan::densify(&self.xs, false),
            ts: crate::scan::densify(&self.ts, true),
        }
    }
}

/// sup over the grid of μ(B(x,√t))/μ(B(y,√t)) · e^{−ε(x−y)²/t} in one
/// dimension.
pub fn volume_ratio_scan(
    k: f64,
    epsilon: f64,
    grid: &VolumeRatioGrid,
    grid_id: &str,
) -> Result<EstimateReport> {
    check_positive("epsilon", epsilon)?;
    let mult = MultiplicityVector::scalar(k)?;
    let mut triples = Vec::with_capacity(grid.xs.len() * grid.xs.len() * grid.ts.len());
    for &x in &grid.xs {
        for &y in &grid.xs {
            for &t in &grid.ts {
                triples.push((x, y, t));
            }
        }
    }
    let (i, c) = par_argmax(&triples, |&(x, y, t)| {
        let s = t.sqrt();
        let ln =
            mu_ball_1d(k, x, s).ln() - mu_ball_1d(k, y, s).ln() - epsilon * (x - y) * (x - y) / t;
        ln.exp()
    })
    .ok_or_else(|| DunklError::Config("empty grid".into()))?;
    let (x, y, t) = triples[i];
    Ok(
        EstimateReport::new("measure.volume_ratio", &mult, grid_id, c)
            .with_witness(&["x", "y", "t"], &[x, y, t]),
    )
}

/// Points and radius pairs for the doubling scan.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublingGrid {
    pub points: Vec<Vec<f64>>,
    pub radii: Vec<f64>,
}

impl DoublingGrid {
    pub fn standard(dim: usize) -> Self {
        let axis = [-5.0, -1.0, -0.2, 0.0, 0.3, 1.0, 4.0];
        let points = match dim {
            1 => axis.iter().map(|&a| vec![a]).collect(),
            _ => {
                let mut pts = Vec::new();
                for &a in &axis {
                    for &b in &axis {
                        let mut p = vec![a, b];
                        p.resize(dim, 0.5);
                        pts.push(p);
                    }
                }
                pts
            }
        };
        Self {
            points,
            radii: crate::scan::log_space(1e-2, 1e2, 9),
        }
    }
}

/// Two reports: the lower bound (R/r)^n ≲ μ(B(x,R))/μ(B(x,r)) and the upper
/// bound μ(B(x,R))/μ(B(x,r)) ≲ (R/r)^N, each as its constant C.
pub fn doubling_ratio_scan(
    ctx: &BallMeasureContext,
    grid: &DoublingGrid,
    grid_id: &str,
) -> Result<Vec<EstimateReport>> {
    let n = ctx.mult.dim() as f64;
    let nn = ctx.mult.homogeneous_dimension();
    let mut cases = Vec::new();
    for (pi, _) in grid.points.iter().enumerate() {
        for (a, &r) in grid.radii.iter().enumerate() {
            for &big in &grid.radii[a..] {
                cases.push((pi, r, big));
            }
        }
    }
    let eval = |&(pi, r, big): &(usize, f64, f64)| -> f64 {
        let x = &grid.points[pi];
        mu_ball_nd(ctx, x, big).unwrap() / mu_ball_nd(ctx, x, r).unwrap()
    };
    let (il, cl) = par_argmax(&cases, |c| (c.2 / c.1).powf(n) / eval(c)).unwrap();
    let (iu, cu) = par_argmax(&cases, |c| eval(c) * (c.1 / c.2).powf(nn)).unwrap();
    let w = |i: usize| {
        let (pi, r, big) = cases[i];
        let mut v = grid.points[pi].clone();
        v.push(r);
        v.push(big);
        v
    };
    let names: Vec<String> = (0..ctx.mult.dim())
        .map(|j| format!("x{j}"))
        .chain(["r".to_string(), "R".to_string()])
        .collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(vec![
        EstimateReport::new("measure.doubling_lower", &ctx.mult, grid_id, cl)
            .with_witness(&names, &w(il)),
        EstimateReport::new("measure.doubling_upper", &ctx.mult, grid_id, cu)
            .with_witness(&names, &w(iu)),
    ])
}

/// Two-sided constant in μ(B(x, r)) ≍ r^n ∏(|x_j| + r)^{2k_j}.
pub fn ball_model_scan(
    ctx: &BallMeasureContext,
    grid: &DoublingGrid,
    grid_id: &str,
) -> Result<EstimateReport> {
    let mut cases = Vec::new();
    for (pi, _) in grid.points.iter().enumerate() {
        for &r in &grid.radii {
            cases.push((pi, r));
        }
    }
    let (i, c) = par_two_sided(&cases, |&(pi, r)| {
        let x = &grid.points[pi];
        mu_ball_nd(ctx, x, r).unwrap() / mu_ball_model(&ctx.mult, x, r)
    })
    .unwrap();
    let (pi, r) = cases[i];
    let mut wv = grid.points[pi].clone();
    wv.push(r);
    let names: Vec<String> = (0..ctx.mult.dim())
        .map(|j| format!("x{j}"))
        .chain(["r".to_string()])
        .collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(EstimateReport::new("measure.ball_model", &ctx.mult, grid_id, c).with_witness(&names, &wv))
}

/// Pairs and triples of points for the quasi-distance scans.
pub fn quasi_metric_points(dim: usize) -> Vec<Vec<f64>> {
    let axis = [-3.0, -1.0, -0.25, 0.0, 0.1, 0.5, 1.0, 2.0, 5.0];
    match dim {
        1 => axis.iter().map(|&a| vec![a]).collect(),
        _ => {
            let axis2 = [-3.0, -0.5, 0.0, 0.2, 1.0, 4.0];
            let mut pts = Vec::new();
            for &a in &axis2 {
                for &b in &axis2 {
                    let mut p = vec![a, b];
                    p.resize(dim, 0.3);
                    pts.push(p);
                }
            }
            pts
        }
    }
}

/// Reports for d̃(x,y) ≍ μ(B(x,|x−y|)) and the quasi-triangle constant.
pub fn quasi_distance_scan(
    ctx: &BallMeasureContext,
    points: &[Vec<f64>],
    grid_id: &str,
) -> Result<Vec<EstimateReport>> {
    let n = points.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .collect();
    let (ip, cp) = par_two_sided(&pairs, |&(i, j)| {
        let d = quasi_distance(ctx, &points[i], &points[j]).unwrap();
        d / mu_ball_nd(ctx, &points[i], dist(&points[i], &points[j])).unwrap()
    })
    .unwrap();
    // cache pairwise quasi-distances for the triangle scan
    let dmat: Vec<f64> = {
        let idx: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        use rayon::prelude::*;
        idx.par_iter()
            .map(|&(i, j)| quasi_distance(ctx, &points[i], &points[j]).unwrap())
            .collect()
    };
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |l| (i, j, l))))
        .filter(|(i, j, _)| i != j)
        .collect();
    let (it, ct) = par_argmax(&triples, |&(i, j, l)| {
        dmat[i * n + j] / (dmat[i * n + l] + dmat[l * n + j])
    })
    .unwrap();
    let (a, b) = pairs[ip];
    let (ti, tj, tl) = triples[it];
    Ok(vec![
        EstimateReport::new("measure.quasi_distance_ball", &ctx.mult, grid_id, cp)
            .with_witness(&["i", "j"], &[a as f64, b as f64]),
        EstimateReport::new("measure.quasi_triangle", &ctx.mult, grid_id, ct)
            .with_witness(&["i", "j", "l"], &[ti as f64, tj as f64, tl as f64]),
    ])
}

/// Two-sided constant in μ(B̃(x, r)) ≍ r.
pub fn quasi_ball_scan(
    ctx: &BallMeasureContext,
    points: &[Vec<f64>],
    radii: &[f64],
    angles: usize,
    grid_id: &str,
) -> Result<EstimateReport> {
    let cases: Vec<(usize, f64)> = (0..points.len())
        .flat_map(|i| radii.iter().map(move |&r| (i, r)))
        .collect();
    let (i, c) = par_two_sided(&cases, |&(pi, r)| {
        quasi_ball_measure(ctx, &points[pi], r, angles).unwrap() / r
    })
    .unwrap();
    let (pi, r) = cases[i];
    let mut w = points[pi].clone();
    w.push(r);
    let names: Vec<String> = (0..ctx.mult.dim())
        .map(|j| format!("x{j}"))
        .chain(["r".to_string()])
        .collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(EstimateReport::new("measure.quasi_ball", &ctx.mult, grid_id, c).with_witness(&names, &w))
}
