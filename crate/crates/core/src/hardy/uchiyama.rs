//! The kernel K_r(x, y) = H_t(x, y), μ(B(x, √t)) = r, and its three
//! Uchiyama conditions.

use rayon::prelude::*;

use crate::error::Result;
use crate::heat::{CutoffSpec, ProductKernel};
use crate::measure::{mu_ball_nd, quasi_distance, radius_for_measure, BallMeasureContext};
use crate::report::EstimateReport;
use crate::scan::{argmax, densify, lin_space, log_space};
use crate::specfn::MultiplicityVector;

/// Truncated heat kernel indexed by ball measure, with decay exponent δ = 1/N.
#[derive(Debug, Clone)]
pub struct UchiyamaKernel {
    kernel: ProductKernel,
    ctx: BallMeasureContext,
    delta: f64,
}

impl UchiyamaKernel {
    pub fn new(mult: &MultiplicityVector, cutoff: CutoffSpec) -> Result<Self> {
        Ok(Self {
            kernel: ProductKernel::new(mult, cutoff)?,
            ctx: BallMeasureContext::with_default_quadrature(mult.clone())?,
            delta: 1.0 / mult.homogeneous_dimension(),
        })
    }

    pub fn mult(&self) -> &MultiplicityVector {
        self.ctx.mult()
    }

    pub fn cutoff(&self) -> &CutoffSpec {
        self.kernel.cutoff()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn context(&self) -> &BallMeasureContext {
        &self.ctx
    }

    /// The time t(x, r) with μ(B(x, √t)) = r.
    pub fn time_for(&self, x: &[f64], r: f64) -> Result<f64> {
        Ok(radius_for_measure(&self.ctx, x, r)?.powi(2))
    }

    /// K_r at a known time: returns (r, H_t(x, y)).
    pub fn at_time(&self, t: f64, x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
        let r = mu_ball_nd(&self.ctx, x, t.sqrt())?;
        Ok((r, self.kernel.truncated(t, x, y)?))
    }
}

/// K_r(x, y).
pub fn uchiyama_kernel(uk: &UchiyamaKernel, r: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    let t = uk.time_for(x, r)?;
    uk.kernel.truncated(t, x, y)
}

/// Triples (x, y, y′) for the Uchiyama scan. Offsets and steps are in units
/// of √t; y runs over x + √t·u and y′ over y + √t·v. Triples violating
/// d̃(y, y′) ≤ c3·max(r, d̃(x, y)) are skipped by the Lipschitz check.
#[derive(Debug, Clone, PartialEq)]
pub struct UchiyamaGrid {
    pub xs: Vec<Vec<f64>>,
    pub ts: Vec<f64>,
    pub offsets: Vec<Vec<f64>>,
    pub steps: Vec<Vec<f64>>,
    pub c3: f64,
}

fn directions(count: usize, phase: f64) -> Vec<[f64; 2]> {
    (0..count)
        .map(|i| {
            let a = phase + std::f64::consts::TAU * i as f64 / count as f64;
            [a.cos(), a.sin()]
        })
        .collect()
}

impl UchiyamaGrid {
    pub fn standard(dim: usize) -> Self {
        if dim == 1 {
            let mut offsets: Vec<Vec<f64>> = lin_space(-6.0, 6.0, 25)
                .into_iter()
                .map(|u| vec![u])
                .collect();
            let peak = 5f64.sqrt() - 1.0;
            offsets.extend([peak, -peak, 10.0, -10.0].map(|u| vec![u]));
            let steps = [1e-3, 0.03, 0.3, 1.0]
                .iter()
                .flat_map(|&v| [vec![v], vec![-v]])
                .collect();
            Self {
                xs: [-2.0, -0.3, 0.0, 0.25, 1.0, 4.0].map(|x| vec![x]).to_vec(),
                ts: log_space(1e-2, 1e2, 9),
                offsets,
                steps,
                c3: 0.5,
            }
        } else {
            let mut offsets = vec![vec![0.0; 2]];
            for u in [0.5, 1.0, 2.0, 4.0] {
                offsets.extend(directions(8, 0.3).iter().map(|d| vec![u * d[0], u * d[1]]));
            }
            let mut steps = Vec::new();
            for v in [1e-2, 0.1, 0.5] {
                steps.extend(directions(4, 0.1).iter().map(|d| vec![v * d[0], v * d[1]]));
            }
            Self {
                xs: vec![
                    vec![0.5, 1.0],
                    vec![-1.0, 0.0],
                    vec![0.0, 0.0],
                    vec![2.0, -0.3],
                ],
                ts: log_space(1e-2, 1e2, 9),
                offsets,
                steps,
                c3: 0.5,
            }
        }
    }

    /// Geometric midpoints inserted between the times.
    pub fn refined(&self) -> Self {
        Self {
            ts: densify(&self.ts, true),
            ..self.clone()
        }
    }
}

/// Worst value found for one (x, t) pair, with its witness.
#[derive(Debug, Clone, Copy)]
struct Worst {
    value: f64,
    y_index: usize,
    step_index: usize,
}

struct CaseResult {
    r: f64,
    lower: f64,
    upper: Worst,
    lipschitz: Worst,
}

fn shift(base: &[f64], dir: &[f64], scale: f64) -> Vec<f64> {
    base.iter().zip(dir).map(|(b, d)| b + scale * d).collect()
}

fn scan_case(uk: &UchiyamaKernel, grid: &UchiyamaGrid, x: &[f64], t: f64) -> Result<CaseResult> {
    let s = t.sqrt();
    let (r, kxx) = uk.at_time(t, x, x)?;
    let d = uk.delta;
    let mut upper = Worst {
        value: 0.0,
        y_index: 0,
        step_index: 0,
    };
    let mut lipschitz = Worst {
        value: 0.0,
        y_index: 0,
        step_index: 0,
    };
    for (iy, u) in grid.offsets.iter().enumerate() {
        let y = shift(x, u, s);
        let kxy = uk.kernel.truncated(t, x, &y)?;
        let dxy = quasi_distance(&uk.ctx, x, &y)?;
        let decay = (1.0 + dxy / r).powf(1.0 + d);
        let up = r * kxy * decay;
        if up > upper.value || up.is_nan() {
            upper = Worst {
                value: up,
                y_index: iy,
                step_index: 0,
            };
        }
        for (is, v) in grid.steps.iter().enumerate() {
            let yp = shift(&y, v, s);
            let dyy = quasi_distance(&uk.ctx, &y, &yp)?;
            if dyy == 0.0 || dyy > grid.c3 * r.max(dxy) {
                continue;
            }
            let diff = (kxy - uk.kernel.truncated(t, x, &yp)?).abs();
            let lip = diff * r * decay / (dyy / r).powf(d);
            if lip > lipschitz.value || lip.is_nan() {
                lipschitz = Worst {
                    value: lip,
                    y_index: iy,
                    step_index: is,
                };
            }
        }
    }
    Ok(CaseResult {
        r,
        lower: 1.0 / (r * kxx),
        upper,
        lipschitz,
    })
}

/// Empirical constants for the three Uchiyama conditions:
/// `hardy.uchiyama.lower` = sup 1/(r K_r(x, x)),
/// `hardy.uchiyama.upper` = sup r K_r(x, y) (1 + d̃(x, y)/r)^{1+δ},
/// `hardy.uchiyama.lipschitz` = sup |K_r(x, y) − K_r(x, y′)| r (1 + d̃(x, y)/r)^{1+δ} (d̃(y, y′)/r)^{−δ}.
pub fn uchiyama_conditions_scan(
    uk: &UchiyamaKernel,
    grid: &UchiyamaGrid,
    grid_id: &str,
) -> Result<Vec<EstimateReport>> {
    let cases: Vec<(usize, usize)> = (0..grid.xs.len())
        .flat_map(|i| (0..grid.ts.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<CaseResult> = cases
        .par_iter()
        .map(|&(i, j)| scan_case(uk, grid, &grid.xs[i], grid.ts[j]))
        .collect::<Result<_>>()?;
    let mult = uk.mult();
    let pick = |vals: Vec<f64>| {
        argmax(
            &vals
                .into_iter()
                .map(|v| if v.is_nan() { f64::INFINITY } else { v })
                .collect::<Vec<_>>(),
        )
    };

    let (il, lower) = pick(results.iter().map(|c| c.lower).collect()).unwrap_or((0, f64::NAN));
    let (iu, upper) =
        pick(results.iter().map(|c| c.upper.value).collect()).unwrap_or((0, f64::NAN));
    let (ip, lip) =
        pick(results.iter().map(|c| c.lipschitz.value).collect()).unwrap_or((0, f64::NAN));

    let witness = |ci: usize, w: Option<Worst>| {
        let (i, j) = cases[ci];
        let x = &grid.xs[i];
        let t = grid.ts[j];
        let mut names = vec!["t".to_string(), "r".to_string()];
        let mut vals = vec![t, results[ci].r];
        for (a, v) in x.iter().enumerate() {
            names.push(format!("x{a}"));
            vals.push(*v);
        }
        if let Some(w) = w {
            let y = shift(x, &grid.offsets[w.y_index], t.sqrt());
            for (a, v) in y.iter().enumerate() {
                names.push(format!("y{a}"));
                vals.push(*v);
            }
            if !grid.steps.is_empty() {
                let yp = shift(&y, &grid.steps[w.step_index], t.sqrt());
                for (a, v) in yp.iter().enumerate() {
                    names.push(format!("yp{a}"));
                    vals.push(*v);
                }
            }
        }
        (names, vals)
    };
    let build = |id: &str, value: f64, (names, vals): (Vec<String>, Vec<f64>)| {
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        EstimateReport::new(id, mult, grid_id, value).with_witness(&refs, &vals)
    };
    let mut upper_w = witness(iu, Some(results[iu].upper));
    // y′ is meaningless for the upper bound
    let keep = upper_w
        .0
        .iter()
        .position(|n| n.starts_with("yp"))
        .unwrap_or(upper_w.0.len());
    upper_w.0.truncate(keep);
    upper_w.1.truncate(keep);
    Ok(vec![
        build("hardy.uchiyama.lower", lower, witness(il, None)),
        build("hardy.uchiyama.upper", upper, upper_w),
        build(
            "hardy.uchiyama.lipschitz",
            lip,
            witness(ip, Some(results[ip].lipschitz)),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uk(k: &[f64]) -> UchiyamaKernel {
        UchiyamaKernel::new(
            &MultiplicityVector::new(k.to_vec()).unwrap(),
            CutoffSpec::default(),
        )
        .unwrap()
    }

    #[test]
    fn classical_diagonal() {
        let u = uk(&[0.0]);
        assert_eq!(u.delta(), 1.0);
        for r in [0.1, 1.0, 7.0] {
            for x in [-1.0, 0.0, 2.5] {
                let v = uchiyama_kernel(&u, r, &[x], &[x]).unwrap();
                let exact = 2.0 / ((4.0 * std::f64::consts::PI).sqrt() * r);
                assert!((v - exact).abs() < 1e-10 * exact, "{r} {x}: {v} vs {exact}");
            }
        }
    }

    #[test]
    fn homogeneity() {
        let u = uk(&[0.7, 1.2]);
        let n = u.mult().homogeneous_dimension();
        let (x, y) = ([0.4, -0.9], [0.7, -0.5]);
        let r = 1.3;
        let base = uchiyama_kernel(&u, r, &x, &y).unwrap();
        for lam in [0.5f64, 2.0, -1.5] {
            let lx: Vec<f64> = x.iter().map(|v| lam * v).collect();
            let ly: Vec<f64> = y.iter().map(|v| lam * v).collect();
            let v = uchiyama_kernel(&u, lam.abs().powf(n) * r, &lx, &ly).unwrap();
            let want = lam.abs().powf(-n) * base;
            assert!((v - want).abs() < 1e-8 * want, "{lam}: {v} vs {want}");
        }
    }

    #[test]
    fn lipschitz_vanishes_when_y_equals_y_prime() {
        let u = uk(&[0.7]);
        let mut grid = UchiyamaGrid::standard(1);
        grid.steps = vec![vec![0.0]];
        let reps = uchiyama_conditions_scan(&u, &grid, "test").unwrap();
        assert_eq!(reps[2].estimate_id, "hardy.uchiyama.lipschitz");
        assert_eq!(reps[2].empirical_constant, 0.0);
    }

    #[test]
    fn classical_constants() {
        // k = 0: r = 2√t, r K_r(x, x) = π^{−½}, and with u = |x − y|/r the
        // upper quantity is π^{−½} e^{−u²} (1 + u)², maximal at u² + u = 1.
        let u = uk(&[0.0]);
        let grid = UchiyamaGrid::standard(1);
        let reps = uchiyama_conditions_scan(&u, &grid, "test").unwrap();
        let pi = std::f64::consts::PI;
        assert!((reps[0].empirical_constant - pi.sqrt()).abs() < 1e-10);
        let us = 0.5 * (5f64.sqrt() - 1.0);
        let upper = (-us * us).exp() * (1.0 + us).powi(2) / pi.sqrt();
        assert!(
            (reps[1].empirical_constant - upper).abs() < 1e-10,
            "{} vs {upper}",
            reps[1].empirical_constant
        );
        let lip = reps[2].empirical_constant;
        assert!(lip.is_finite() && lip > 0.0, "{lip}");
    }
}
