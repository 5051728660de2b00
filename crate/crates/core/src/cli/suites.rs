//! The verification suites behind `verify` and `pin`.

use std::sync::Arc;

use rayon::prelude::*;

use super::config::{RunConfig, Suite};
use crate::error::Result;
use crate::grid::{AxisGrid, GridFunction, TensorGrid};
use crate::hardy::{
    make_atom, multiplier_atom_bounds, uchiyama_conditions_scan, validate_atom, AtomFamily,
    AtomProfile, UchiyamaGrid, UchiyamaKernel,
};
use crate::heat::{
    euclidean_defect, global_behavior_scan, grad_l1_scan, heat_equation_residual, heat_mass_defect,
    q_star_l1_scan, semigroup_defect, truncated_gaussian_scan, CutoffSpec, GlobalGrid,
    HeatSemigroup, TimeGrid, TruncatedGrid,
};
use crate::measure::{
    ball_model_scan, doubling_ratio_scan, mu_ball_nd, quasi_ball_scan, quasi_distance_scan,
    quasi_metric_points, volume_ratio_scan, BallMeasureContext, DoublingGrid, VolumeRatioGrid,
};
use crate::report::EstimateReport;
use crate::scan::{densify, lin_space, log_space};
use crate::specfn::{
    branch_agreement, eigen_residual, envelope_correction, envelope_ratio_defect,
    kernel_symmetry_defect, MultiplicityVector,
};
use crate::transform::{
    hormander_m, multiplier_apply_with, HormanderGrid, MultiplierSpec, TransformPlan,
};
use crate::translation::{
    algebra_scan, mass_defect_scan, orbit_tail_scan, total_variation_grid, total_variation_scan,
    translate, translate_via_transform, AlgebraGrid,
};

/// Time grid for maximal functions of unit-scale atoms.
pub fn hardy_time_grid() -> TimeGrid {
    TimeGrid::new(1e-3, 1e3, 49).expect("valid time grid")
}

/// Runs the configured suites in parallel and returns their reports in
/// suite order.
pub fn run_suites(cfg: &RunConfig) -> Result<Vec<EstimateReport>> {
    let parts = cfg
        .suites
        .par_iter()
        .map(|&s| run_suite(s, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.into_iter().flatten().collect())
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Vec<EstimateReport>> {
    match suite {
        Suite::Specfn => specfn_suite(cfg),
        Suite::Measure => measure_suite(cfg),
        Suite::Heat => heat_suite(cfg),
        Suite::Transform => transform_suite(cfg),
        Suite::Translation => translation_suite(cfg),
        Suite::Hardy => hardy_suite(cfg),
    }
}

/// Distinct multiplicities in coordinate order, for the one-dimensional checks.
fn axis_ks(mult: &MultiplicityVector) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for &k in mult.k() {
        if !out.contains(&k) {
            out.push(k);
        }
    }
    out
}

/// Largest value of `f` over `items` with the item that attains it. NaN wins.
fn worst<T: Copy>(items: &[T], f: impl Fn(T) -> Result<f64>) -> Result<(f64, T)> {
    let mut best: Option<(f64, T)> = None;
    for &it in items {
        let v = f(it)?;
        let v = if v.is_nan() { f64::INFINITY } else { v };
        if best.map_or(true, |(b, _)| v > b) {
            best = Some((v, it));
        }
    }
    Ok(best.expect("nonempty scan"))
}

fn scalar(k: f64) -> Result<MultiplicityVector> {
    MultiplicityVector::scalar(k)
}

fn specfn_suite(cfg: &RunConfig) -> Result<Vec<EstimateReport>> {
    let g = cfg.grid.id();
    let dense = cfg.grid.is_refined();
    let zs = lin_space(25.0, 35.0, if dense { 41 } else { 21 });
    let xs = if dense {
        lin_space(-3.0, 3.0, 26)
    } else {
        lin_space(-3.0, 3.0, 12)
    };
    let ys = [-2.0, -0.5, 0.7, 1.9];
    let pairs: Vec<(f64, f64)> = xs
        .iter()
        .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
        .collect();
    let mut out = Vec::new();
    for k in axis_ks(&cfg.mult) {
        let m = scalar(k)?;
        out.push(
            EstimateReport::new("specfn.hyp1f1_branches", &m, g, branch_agreement(k, &zs)?)
                .with_threshold(cfg.tolerance(1e-8)),
        );
        let (r, (x, y)) = worst(&pairs, |(x, y)| Ok(eigen_residual(k, x, y, 1e-3)))?;
        out.push(
            EstimateReport::new("specfn.eigen_residual", &m, g, r)
                .with_witness(&["x", "y"], &[x, y])
                .with_threshold(cfg.tolerance(1e-6)),
        );
        let (s, (x, y)) = worst(&pairs, |(x, y)| {
            Ok(kernel_symmetry_defect(k, x, y, 0.5).max(kernel_symmetry_defect(k, x, y, -1.7)))
        })?;
        out.push(
            EstimateReport::new("specfn.kernel_symmetry", &m, g, s)
                .with_witness(&["x", "y"], &[x, y])
                .with_threshold(cfg.tolerance(1e-12)),
        );
        if k > 0.0 {
            // second-order coefficient of E/envelope − 1 at large |xy|
            let xys = [10.0, 30.0, 100.0, -10.0, -30.0, -100.0];
            let (c, xy) = worst(&xys, |xy| {
                Ok((envelope_ratio_defect(k, xy) - envelope_correction(k, xy)).abs() * xy * xy)
            })?;
            out.push(
                EstimateReport::new("specfn.envelope_second_order", &m, g, c)
                    .with_witness(&["xy"], &[xy]),
            );
        }
    }
    Ok(out)
}

fn measure_suite(cfg: &RunConfig) -> Result<Vec<EstimateReport>> {
    let g = cfg.grid.id();
    let dense = cfg.grid.is_refined();
    let dim = cfg.mult.dim();
    let ctx = BallMeasureContext::with_default_quadrature(cfg.mult.clone())?;
    let mut dg = DoublingGrid::standard(dim);
    if dense {
        dg.radii = densify(&dg.radii, true);
    }
    let mut out = doubling_ratio_scan(&ctx, &dg, g)?;
    out.push(ball_model_scan(&ctx, &dg, g)?);
    let points = quasi_metric_points(dim);
    out.extend(quasi_distance_scan(&ctx, &points, g)?);
    if dim == 1 {
        let radii = log_space(1e-2, 1e2, if dense { 17 } else { 9 });
        out.push(quasi_ball_scan(&ctx, &points, &radii, 64, g)?);
    } else {
        let pts: Vec<Vec<f64>> = points.iter().step_by(6).cloned().collect();
        let radii = log_space(1e-2, 1e2, if dense { 9 } else { 5 });
        out.push(quasi_ball_scan(
            &ctx,
            &pts,
            &radii,
            if dense { 64 } else { 32 },
            g,
        )?);
    }
    // μ(B(λx, |λ|r)) = |λ|^N μ(B(x, r))
    let nn = cfg.mult.homogeneous_dimension();
    let cases: Vec<(usize, f64, f64)> = (0..dg.points.len())
        .flat_map(|i| {
            dg.radii
                .iter()
                .flat_map(move |&r| [0.5, 3.0, -2.0].map(|l| (i, r, l)))
        })
        .collect();
    let (h, (i, r, l)) = worst(&cases, |(i, r, l)| {
        let x = &dg.points[i];
        let lx: Vec<f64> = x.iter().map(|v| l * v).collect();
        let a = mu_ball_nd(&ctx, &lx, l.abs() * r)?;
        let b = l.abs().powf(nn) * mu_ball_nd(&ctx, x, r)?;
        Ok((a - b).abs() / b)
    })?;
    let mut w = dg.points[i].clone();
    w.extend([r, l]);
    let names: Vec<String> = (0..dim)
        .map(|j| format!("x{j}"))
        .chain(["r".into(), "lambda".into()])
        .collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    out.push(
        EstimateReport::new("measure.homogeneity", &cfg.mult, g, h)
            .with_witness(&names, &w)
            .with_threshold(cfg.tolerance(1e-8)),
    );
    for k in axis_ks(&cfg.mult) {
        let vg = if dense {
            VolumeRatioGrid::default().doubled()
        } else {
            VolumeRatioGrid::default()
        };
        out.push(volume_ratio_scan(k, 0.1, &vg, g)?);
    }
    Ok(out)
}

/// The 48 (t, x) pairs of the mass check.
fn mass_cases() -> Vec<(f64, f64)> {
    let ts = [1e-2, 1e-1, 0.5, 1.0, 10.0, 100.0];
    let xs = [-5.0, -1.0, -0.2, 0.0, 0.1, 0.7, 2.0, 10.0];
    ts.iter()
        .flat_map(|&t| xs.iter().map(move |&x| (t, x)))
        .collect()
}

fn heat_suite(cfg: &RunConfig) -> Result<Vec<EstimateReport>> {
    let g = cfg.grid.id();
    let dense = cfg.grid.is_refined();
    let dim = cfg.mult.dim();
    let spec = CutoffSpec::default();
    let mut out = Vec::new();
    const PTS: [f64; 5] = [-3.0, -0.7, 0.4, 1.0, 2.5];
    let triples: Vec<(f64, f64, f64)> = [0.05, 0.5, 2.0]
        .iter()
        .flat_map(|&t| {
            PTS.iter()
                .flat_map(move |&x| PTS.iter().map(move |&y| (t, x, y)))
        })
        .collect();
    for k in axis_ks(&cfg.mult) {
        let m = scalar(k)?;
        let (v, (t, x)) = worst(&mass_cases(), |(t, x)| heat_mass_defect(k, t, x))?;
        out.push(
            EstimateReport::new("heat.mass", &m, g, v)
                .with_witness(&["t", "x"], &[t, x])
                .with_threshold(cfg.tolerance(1e-8)),
        );
        let (v, (t, x, y)) = worst(&triples, |(t, x, y)| semigroup_defect(k, 0.5 * t, t, x, y))?;
        out.push(
            EstimateReport::new("heat.semigroup", &m, g, v)
                .with_witness(&["t", "x", "y"], &[t, x, y])
                .with_threshold(cfg.tolerance(1e-6)),
        );
        let (v, (t, x, y)) = worst(&triples, |(t, x, y)| heat_equation_residual(k, t, x, y))?;
        out.push(
            EstimateReport::new("heat.equation_residual", &m, g, v)
                .with_witness(&["t", "x", "y"], &[t, x, y])
                .with_threshold(cfg.tolerance(1e-4)),
        );
        if k == 0.0 {
            let (v, (t, x, y)) = worst(&triples, |(t, x, y)| euclidean_defect(t, x, y))?;
            out.push(
                EstimateReport::new("heat.euclidean", &m, g, v)
                    .with_witness(&["t", "x", "y"], &[t, x, y])
                    .with_threshold(cfg.tolerance(1e-12)),
            );
        }
        let gg = if dense {
            GlobalGrid::default().refined()
        } else {
            GlobalGrid::default()
        };
        out.extend(global_behavior_scan(k, &gg, g)?);
        out.push(grad_l1_scan(
            k,
            &lin_space(-4.0, 4.0, if dense { 33 } else { 17 }),
            g,
        )?);
    }
    let tgrid = if dense {
        TruncatedGrid::standard(dim).refined()
    } else {
        TruncatedGrid::standard(dim)
    };
    out.extend(truncated_gaussian_scan(
        &cfg.mult,
        &spec,
        cfg.decay_c,
        &tgrid,
        g,
    )?);
    let ys: Vec<Vec<f64>> = if dim == 1 {
        vec![vec![1.0]]
    } else {
        vec![vec![1.0, 0.0], vec![1.0, 0.5], vec![1.0, 1.0]]
    };
    let tg = cfg.time_grid.clone().unwrap_or_default();
    let (tg, res) = if dense { (tg.refined(), 4) } else { (tg, 2) };
    out.push(q_star_l1_scan(&cfg.mult, &spec, &ys, res, &tg, g)?);
    Ok(out)
}

fn transform_grids(
    mult: &MultiplicityVector,
    dense: bool,
) -> Result<(Arc<TensorGrid>, Arc<TensorGrid>)> {
    let s = if dense { 2 } else { 1 };
    let (xs, xis): (Vec<AxisGrid>, Vec<AxisGrid>) = if mult.dim() == 1 {
        let k = mult.get(0);
        (
            vec![AxisGrid::uniform(k, 12.0, 24 * s, 24)?],
            vec![AxisGrid::uniform(k, 14.0, 28 * s, 24)?],
        )
    } else {
        let x = mult
            .k()
            .iter()
            .map(|&k| AxisGrid::uniform(k, 8.0, 4, 16 * s))
            .collect::<Result<_>>()?;
        let xi = mult
            .k()
            .iter()
            .map(|&k| AxisGrid::uniform(k, 12.0, 4, 16 * s))
            .collect::<Result<_>>()?;
        (x, xi)
    };
    Ok((
        Arc::new(TensorGrid::new(xs)?),
        Arc::new(TensorGrid::new(xis)?),
    ))
}

/// Smooth, rapidly decaying test functions for the transform checks.
pub fn smooth_family(grid: &Arc<TensorGrid>) -> Vec<GridFunction> {
    let r2 = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
    vec![
        GridFunction::sample_real(grid.clone(), move |x| (-r2(x)).exp()),
        GridFunction::sample_real(grid.clone(), move |x| {
            (-(x[0] - 0.8) * (x[0] - 0.8) - r2(&x[1..])).exp() * (1.0 + 0.3 * x[0])
        }),
        GridFunction::sample_real(grid.clone(), move |x| x[0] * (-0.5 * r2(x)).exp()),
        GridFunction::sample_real(grid.clone(), move |x| {
            (-(x[0] + 1.0) * (x[0] + 1.0) - 0.7 * r2(&x[1..])).exp() * (2.0 + x[0].sin())
        }),
    ]
}

fn rel_sup_gap(a: &GridFunction, b: &GridFunction) -> f64 {
    let gap = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(u, v)| (u - v).norm())
        .fold(0.0, f64::max);
    gap / a.sup_norm()
}

fn transform_suite(cfg: &RunConfig) -> Result<Vec<EstimateReport>> {
    let g = cfg.grid.id();
    let dense = cfg.grid.is_refined();
    let mult = &cfg.mult;
    let (xg, xig) = transform_grids(mult, dense)?;
    let plan = TransformPlan::new(xg.clone(), xig.clone())?;
    let family = smooth_family(&xg);
    let idx: Vec<usize> = (0..family.len()).collect();
    let mut out = Vec::new();
    let (v, i) = worst(&idx, |i| plan.plancherel_defect(&family[i]))?;
    out.push(
        EstimateReport::new("transform.plancherel", mult, g, v)
            .with_witness(&["member"], &[i as f64])
            .with_threshold(cfg.tolerance(1e-6)),
    );
    let (v, i) = worst(&idx, |i| {
        let back = plan.inverse(&plan.forward(&family[i])?)?;
        Ok(rel_sup_gap(&family[i], &back))
    })?;
    out.push(
        EstimateReport::new("transform.round_trip", mult, g, v)
            .with_witness(&["member"], &[i as f64])
            .with_threshold(cfg.tolerance(1e-6)),
    );
    let sg = HeatSemigroup::new(mult)?;
    // direct quadrature costs one contraction per node, so 2D checks a subsample
    let stride = if mult.dim() == 1 { 1 } else { 17 };
    let nodes: Vec<usize> = (0..xg.len()).step_by(stride).collect();
    let points: Vec<Vec<f64>> = nodes.iter().map(|&n| xg.node(n)).collect();
    let mut gaps = Vec::new();
    for t in [0.1, 0.5, 1.0] {
        let direct = sg.apply_at(&family, t, &points)?;
        for (i, d) in direct.iter().enumerate() {
            let via = multiplier_apply_with(&plan, &MultiplierSpec::heat(t), &family[i])?;
            let gap = nodes
                .iter()
                .zip(d)
                .map(|(&n, v)| (v - via.values()[n]).norm())
                .fold(0.0, f64::max);
            gaps.push((gap / via.sup_norm(), (i, t)));
        }
    }
    let (v, (i, t)) = worst(&gaps, |(g, _)| Ok(g)).map(|(v, (_, w))| (v, w))?;
    out.push(
        EstimateReport::new("transform.heat_multiplier", mult, g, v)
            .with_witness(&["member", "t"], &[i as f64, t])
            .with_threshold(cfg.tolerance(1e-6)),
    );
    let hg = if dense {
        HormanderGrid::standard(mult.dim()).refined()
    } else {
        HormanderGrid::standard(mult.dim())
    };
    for m in [
        MultiplierSpec::heat(1.0),
        MultiplierSpec::riesz(0),
        MultiplierSpec::imaginary_power(1.0),
    ] {
        let est = hormander_m(&m, 0.1, mult.homogeneous_dimension(), mult.dim(), &hg)?;
        let id = format!(
            "transform.hormander.{}",
            m.name().split('(').next().unwrap_or("m")
        );
        out.push(EstimateReport::new(id, mult, g, est.value).with_witness(
            &["sobolev_order", "worst_t"],
            &[est.sobolev_order, est.worst_t],
        ));
    }
    Ok(out)
}

fn translation_suite(cfg: &RunConfig) -> Result<Vec<EstimateReport>> {
    let g = cfg.grid.id();
    let dense = cfg.grid.is_refined();
    let s = if dense { 2 } else { 1 };
    let mut out = Vec::new();
    for k in axis_ks(&cfg.mult) {
        let m = scalar(k)?;
        let xg = Arc::new(TensorGrid::single(AxisGrid::uniform(k, 10.0, 20 * s, 24)?));
        let f = GridFunction::sample_real(xg.clone(), |x| (-(x[0] - 0.5) * (x[0] - 0.5)).exp());
        let plan = TransformPlan::new(
            xg,
            Arc::new(TensorGrid::single(AxisGrid::uniform(k, 12.0, 24 * s, 24)?)),
        )?;
        let sup = f.sup_norm();
        let pairs = [
            (1.0, 0.5),
            (-0.8, 1.7),
            (2.0, -1.0),
            (0.6, 0.6),
            (-1.5, -0.4),
            (3.0, 0.2),
        ];
        let (v, (y, x)) = worst(&pairs, |(y, x)| {
            let a = translate(&m, &f, &[y], &[x])?;
            let b = translate_via_transform(&plan, &f, &[y], &[x])?;
            Ok((a - b).norm() / sup)
        })?;
        out.push(
            EstimateReport::new("translation.two_path", &m, g, v)
                .with_witness(&["y", "x"], &[y, x])
                .with_threshold(cfg.tolerance(1e-5)),
        );
        let mut tv = total_variation_grid();
        if dense {
            let v = lin_space(-5.0, 5.0, 81);
            tv = v
                .iter()
                .flat_map(|&x| v.iter().map(move |&y| (x, y)))
                .collect();
        }
        out.push(mass_defect_scan(k, &tv, g, cfg.tolerance(1e-8))?);
        out.push(total_variation_scan(k, &tv, g)?);
        let ag = if dense {
            AlgebraGrid {
                panels_per_side: 24,
                ..AlgebraGrid::default()
            }
        } else {
            AlgebraGrid::default()
        };
        out.push(algebra_scan(k, &ag, g)?);
        let rs = if dense {
            vec![0.5, 0.75, 1.0, 1.5, 2.0]
        } else {
            vec![0.5, 1.0, 2.0]
        };
        out.push(orbit_tail_scan(k, &[0.5, 1.0, 2.0, 4.0], &rs, 1.0, g)?);
    }
    Ok(out)
}

fn hardy_suite(cfg: &RunConfig) -> Result<Vec<EstimateReport>> {
    let g = cfg.grid.id();
    let dense = cfg.grid.is_refined();
    let mult = &cfg.mult;
    let dim = mult.dim();
    let ctx = BallMeasureContext::with_default_quadrature(mult.clone())?;
    let mut out = Vec::new();
    let cases: Vec<(f64, f64, AtomProfile)> = [0.0, 1.0, 5.0]
        .iter()
        .flat_map(|&c| {
            [0.5, 2.0].iter().flat_map(move |&r| {
                [AtomProfile::TwoBump, AtomProfile::DerivativeOfBump].map(|p| (c, r, p))
            })
        })
        .collect();
    let (v, (c, r, _)) = worst(&cases, |(c, r, p)| {
        Ok(validate_atom(&make_atom(mult, &vec![c; dim], r, p)?, &ctx)?.mean)
    })?;
    out.push(
        EstimateReport::new("hardy.atom_mean", mult, g, v)
            .with_witness(&["center", "radius"], &[c, r])
            .with_threshold(cfg.tolerance(1e-10)),
    );
    let uk = UchiyamaKernel::new(mult, CutoffSpec::default())?;
    let ug = if dense {
        UchiyamaGrid::standard(dim).refined()
    } else {
        UchiyamaGrid::standard(dim)
    };
    out.extend(uchiyama_conditions_scan(&uk, &ug, g)?);
    if dim == 1 {
        let family = if dense {
            AtomFamily::standard().refined()
        } else {
            AtomFamily::standard()
        };
        let tg = cfg.time_grid.clone().unwrap_or_else(hardy_time_grid);
        let ms = [
            MultiplierSpec::identity(),
            MultiplierSpec::heat(1.0),
            MultiplierSpec::riesz(0),
        ];
        out.extend(multiplier_atom_bounds(mult, &ms, &family, &tg, g)?);
    }
    Ok(out)
}
