//! The ten acceptance criteria, run in order at their stated tolerances.
//! Each prints one PASS/FAIL line; the test fails if any criterion does.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use dunkl::cli::{hardy_time_grid, run_suite, RawArgs, RunConfig, Suite, DEFAULT_FROZEN_PATH};
use dunkl::hardy::{
    multiplier_atom_bounds, uchiyama_conditions_scan, AtomFamily, UchiyamaGrid, UchiyamaKernel,
};
use dunkl::heat::{q_star_l1, truncated_gaussian_scan, CutoffSpec, TimeGrid, TruncatedGrid};
use dunkl::report::{EstimateReport, FrozenTable};
use dunkl::scan::lin_space;
use dunkl::specfn::{branch_agreement, envelope_correction, envelope_ratio_defect};
use dunkl::transform::MultiplierSpec;
use dunkl::MultiplicityVector;

const SCALAR_KS: [f64; 5] = [0.0, 0.3, 0.7, 1.5, 2.5];
const PLANE_K: &str = "0.7,1.2";

type Outcome = Result<String, String>;

fn mult(k: &str) -> MultiplicityVector {
    k.parse().unwrap()
}

fn configs() -> Vec<String> {
    let mut v: Vec<String> = SCALAR_KS.iter().map(|k| k.to_string()).collect();
    v.push(PLANE_K.into());
    v
}

fn suite(k: &str, s: Suite) -> Vec<EstimateReport> {
    let raw = RawArgs {
        k: Some(k.into()),
        suite: Some(s.name().into()),
        ..Default::default()
    };
    run_suite(s, &RunConfig::from_args(&raw).unwrap()).unwrap()
}

fn frozen() -> FrozenTable {
    FrozenTable::load(Path::new(DEFAULT_FROZEN_PATH)).expect("frozen constants table")
}

fn find<'a>(reports: &'a [EstimateReport], id: &str) -> Vec<&'a EstimateReport> {
    let v: Vec<_> = reports.iter().filter(|r| r.estimate_id == id).collect();
    assert!(!v.is_empty(), "no report {id}");
    v
}

fn at_most(reports: &[EstimateReport], id: &str, tol: f64) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for r in find(reports, id) {
        let v = r.empirical_constant;
        if !(v <= tol) {
            return Err(format!("{id} at k={} is {v:e} > {tol:e}", r.k_config));
        }
        worst = worst.max(v);
    }
    Ok(worst)
}

/// Finite, and within 5% of the pinned constant.
fn within_frozen(table: &FrozenTable, r: &EstimateReport) -> Result<(), String> {
    let v = r.empirical_constant;
    let f = table.lookup(r).ok_or_else(|| {
        format!(
            "{} k={} {} is not pinned",
            r.estimate_id, r.k_config, r.grid_id
        )
    })?;
    if v.is_finite() && v <= 1.05 * f {
        Ok(())
    } else {
        Err(format!(
            "{} k={} {}: {v:e} against frozen {f:e}",
            r.estimate_id, r.k_config, r.grid_id
        ))
    }
}

fn criterion(n: usize, name: &str, limit: Duration, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = body();
    let took = start.elapsed();
    let outcome = outcome.and_then(|d| {
        if took <= limit {
            Ok(d)
        } else {
            Err(format!("{d}; took {took:.1?}, limit {limit:?}"))
        }
    });
    match &outcome {
        Ok(d) => println!("PASS criterion {n:>2} {name}: {d} ({took:.1?})"),
        Err(e) => println!("FAIL criterion {n:>2} {name}: {e} ({took:.1?})"),
    }
    outcome.is_ok()
}

fn c1_special_functions() -> Outcome {
    let zs = lin_space(25.0, 35.0, 41);
    let mut branches = 0.0f64;
    for k in SCALAR_KS {
        let g = branch_agreement(k, &zs).map_err(|e| e.to_string())?;
        if g > 1e-8 {
            return Err(format!("branches differ by {g:e} at k={k}"));
        }
        branches = branches.max(g);
    }
    let mut taylor = 0.0f64;
    for (k, kr) in common::exact_ks() {
        let d = common::worst_taylor_deviation(k, &kr);
        if d > 1e-10 {
            return Err(format!("Taylor oracle deviation {d:e} at k={k}"));
        }
        taylor = taylor.max(d);
    }
    Ok(format!(
        "branch gap {branches:.2e}, Taylor gap {taylor:.2e}"
    ))
}

fn c2_kernel() -> Outcome {
    let mut eig = 0.0f64;
    let mut sym = 0.0f64;
    for k in configs() {
        let r = suite(&k, Suite::Specfn);
        eig = eig.max(at_most(&r, "specfn.eigen_residual", 1e-6)?);
        sym = sym.max(at_most(&r, "specfn.kernel_symmetry", 1e-12)?);
    }
    // E/envelope − 1 against its first-order term at growing |xy|
    let mut ratio_at_100 = Vec::new();
    for k in SCALAR_KS.into_iter().filter(|&k| k > 0.0) {
        for sign in [1.0, -1.0] {
            let d: Vec<f64> = [10.0, 30.0, 100.0]
                .iter()
                .map(|m| envelope_ratio_defect(k, sign * m))
                .collect();
            let c: Vec<f64> = [10.0, 30.0, 100.0]
                .iter()
                .map(|m| envelope_correction(k, sign * m))
                .collect();
            for i in 0..3 {
                if d[i].signum() != c[i].signum() {
                    return Err(format!(
                        "k={k} xy={}: defect {:e} vs correction {:e}",
                        sign * [10.0, 30.0, 100.0][i],
                        d[i],
                        c[i]
                    ));
                }
            }
            if !(d[0].abs() > d[1].abs() && d[1].abs() > d[2].abs()) {
                return Err(format!("k={k} sign {sign}: defects {d:?} do not decrease"));
            }
            let q: Vec<f64> = (0..3).map(|i| (d[i] / c[i] - 1.0).abs()).collect();
            if !(q[2] < q[0] && q[2] < 0.2) {
                return Err(format!("k={k} sign {sign}: defect/correction − 1 = {q:?}"));
            }
            ratio_at_100.push(q[2]);
        }
    }
    let worst = ratio_at_100.iter().fold(0.0f64, |a, &b| a.max(b));
    Ok(format!(
        "eigen {eig:.2e}, symmetry {sym:.2e}, |defect/correction − 1| at 100 ≤ {worst:.3}"
    ))
}

fn c3_heat() -> Outcome {
    let (mut mass, mut semi, mut res) = (0.0f64, 0.0f64, 0.0f64);
    let mut eu = 0.0;
    for k in SCALAR_KS {
        let r = suite(&k.to_string(), Suite::Heat);
        mass = mass.max(at_most(&r, "heat.mass", 1e-8)?);
        semi = semi.max(at_most(&r, "heat.semigroup", 1e-6)?);
        res = res.max(at_most(&r, "heat.equation_residual", 1e-4)?);
        if k == 0.0 {
            eu = at_most(&r, "heat.euclidean", 1e-12)?;
        }
    }
    Ok(format!(
        "mass {mass:.2e}, semigroup {semi:.2e}, residual {res:.2e}, Gaussian {eu:.2e}"
    ))
}

fn c4_truncated() -> Outcome {
    let table = frozen();
    let spec = CutoffSpec::default();
    let mut drift = 0.0f64;
    let mut count = 0;
    for k in configs() {
        let m = mult(&k);
        let std_grid = TruncatedGrid::standard(m.dim());
        let a = truncated_gaussian_scan(&m, &spec, 72.0, &std_grid, "standard")
            .map_err(|e| e.to_string())?;
        let b = truncated_gaussian_scan(&m, &spec, 72.0, &std_grid.refined(), "refined")
            .map_err(|e| e.to_string())?;
        for (x, y) in a.iter().zip(&b) {
            within_frozen(&table, x)?;
            within_frozen(&table, y)?;
            let d = (y.empirical_constant / x.empirical_constant - 1.0).abs();
            if d > 0.05 {
                return Err(format!(
                    "{} k={k} moves {:.1}% under refinement",
                    x.estimate_id,
                    100.0 * d
                ));
            }
            drift = drift.max(d);
            count += 1;
        }
    }
    Ok(format!(
        "{count} constants within frozen bounds, refinement drift {:.2}%",
        100.0 * drift
    ))
}

fn c5_q_star() -> Outcome {
    let spec = CutoffSpec::default();
    let mut drift = 0.0f64;
    let mut values = Vec::new();
    for k in configs() {
        let m = mult(&k);
        let ys = if m.dim() == 1 {
            vec![vec![1.0]]
        } else {
            vec![vec![1.0, 0.0], vec![1.0, 0.5], vec![1.0, 1.0]]
        };
        for y in ys {
            let tg = TimeGrid::default();
            let q = |res: usize, tg: &TimeGrid| {
                q_star_l1(&m, &spec, &y, res, tg).map_err(|e| e.to_string())
            };
            let base = q(2, &tg)?;
            if !base.is_finite() {
                return Err(format!("k={k} y={y:?}: {base}"));
            }
            for (what, v) in [("t-grid", q(2, &tg.refined())?), ("x-grid", q(4, &tg)?)] {
                let d = (v / base - 1.0).abs();
                if d >= 0.02 {
                    return Err(format!(
                        "k={k} y={y:?}: {what} doubling moves {base:e} by {:.2}%",
                        100.0 * d
                    ));
                }
                drift = drift.max(d);
            }
            values.push(base);
        }
    }
    let hi = values.iter().fold(0.0f64, |a, &b| a.max(b));
    Ok(format!(
        "{} values ≤ {hi:.3}, doubling drift {:.3}%",
        values.len(),
        100.0 * drift
    ))
}

fn c6_transform() -> Outcome {
    let (mut p, mut r, mut h) = (0.0f64, 0.0f64, 0.0f64);
    for k in configs() {
        let rep = suite(&k, Suite::Transform);
        p = p.max(at_most(&rep, "transform.plancherel", 1e-6)?);
        r = r.max(at_most(&rep, "transform.round_trip", 1e-6)?);
        h = h.max(at_most(&rep, "transform.heat_multiplier", 1e-6)?);
    }
    Ok(format!(
        "Plancherel {p:.2e}, round trip {r:.2e}, heat multiplier {h:.2e}"
    ))
}

fn c7_translation() -> Outcome {
    let table = frozen();
    let (mut two, mut mass) = (0.0f64, 0.0f64);
    for k in SCALAR_KS {
        let r = suite(&k.to_string(), Suite::Translation);
        two = two.max(at_most(&r, "translation.two_path", 1e-5)?);
        mass = mass.max(at_most(&r, "translation.mass", 1e-8)?);
        for id in ["translation.total_variation", "translation.orbit_tail"] {
            for x in find(&r, id) {
                within_frozen(&table, x)?;
            }
        }
    }
    Ok(format!(
        "two-path {two:.2e}, mass {mass:.2e}, variation and tail within frozen"
    ))
}

fn c8_appendices() -> Outcome {
    let table = frozen();
    let mut hom = 0.0f64;
    for k in configs() {
        let r = suite(&k, Suite::Measure);
        hom = hom.max(at_most(&r, "measure.homogeneity", 1e-8)?);
        for id in [
            "measure.quasi_distance_ball",
            "measure.quasi_triangle",
            "measure.quasi_ball",
        ] {
            for x in find(&r, id) {
                within_frozen(&table, x)?;
            }
        }
        let m = mult(&k);
        let uk = UchiyamaKernel::new(&m, CutoffSpec::default()).map_err(|e| e.to_string())?;
        let u = uchiyama_conditions_scan(&uk, &UchiyamaGrid::standard(m.dim()), "standard")
            .map_err(|e| e.to_string())?;
        for x in &u {
            within_frozen(&table, x)?;
        }
    }
    Ok(format!(
        "homogeneity {hom:.2e}, quasi-metric and Uchiyama constants within frozen"
    ))
}

fn c9_multipliers() -> Outcome {
    let table = frozen();
    let ms = [
        MultiplierSpec::identity(),
        MultiplierSpec::heat(1.0),
        MultiplierSpec::riesz(0),
    ];
    let mut riesz = Vec::new();
    for k in SCALAR_KS {
        let m = MultiplicityVector::scalar(k).unwrap();
        let r = multiplier_atom_bounds(
            &m,
            &ms,
            &AtomFamily::standard(),
            &hardy_time_grid(),
            "standard",
        )
        .map_err(|e| e.to_string())?;
        for x in &r {
            within_frozen(&table, x)?;
        }
        let last = r.last().unwrap();
        riesz.push(format!("k={k}: {:.3e}", last.worst_case["bound_over_m"]));
    }
    Ok(format!(
        "all bounds within frozen; Riesz bound/M {}",
        riesz.join(", ")
    ))
}

fn c10_full_verify() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |name: &str| -> Result<(Vec<u8>, Vec<u8>, Vec<u8>), String> {
        let out = dir.path().join(format!("{name}.json"));
        let o = Command::new(env!("CARGO_BIN_EXE_dunkl"))
            .args(["verify", "--suite", "all", "--out"])
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        if !o.status.success() {
            return Err(format!(
                "exit {:?}: {}",
                o.status.code(),
                String::from_utf8_lossy(&o.stdout)
            ));
        }
        let json = std::fs::read(&out).map_err(|e| e.to_string())?;
        let csv = std::fs::read(out.with_extension("csv")).map_err(|e| e.to_string())?;
        Ok((o.stdout, json, csv))
    };
    let a = run("first")?;
    let b = run("second")?;
    if a != b {
        return Err("outputs differ between runs".into());
    }
    Ok(format!("two runs, {} JSON bytes identical", a.1.len()))
}

#[test]
fn acceptance_criteria() {
    let s = Duration::from_secs;
    let results = [
        criterion(1, "special functions", s(10), c1_special_functions),
        criterion(2, "Dunkl kernel", s(30), c2_kernel),
        criterion(3, "heat kernel", s(120), c3_heat),
        criterion(4, "truncated kernel estimates", s(180), c4_truncated),
        criterion(5, "q* L1 norm", s(120), c5_q_star),
        criterion(6, "transform", s(120), c6_transform),
        criterion(7, "translation", s(120), c7_translation),
        criterion(8, "homogeneous type and Uchiyama", s(120), c8_appendices),
        criterion(9, "multipliers on atoms", s(180), c9_multipliers),
        criterion(10, "full verify", s(900), c10_full_verify),
    ];
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
