//! `dunkl eval`: CSV tables of the basic objects on a one-dimensional grid.

use std::sync::Arc;

use super::config::{parse_mult, parse_range, parse_real, EvalTarget, RawArgs};
use crate::error::{check_finite, check_positive, DunklError, Result};
use crate::grid::{AxisGrid, GridFunction, TensorGrid};
use crate::heat::HeatKernel1D;
use crate::scan::lin_space;
use crate::specfn::{dunkl_kernel_1d, MultiplicityVector};
use crate::transform::dunkl_transform;
use crate::translation::{classic_bump, translate};

/// Test function for transform and translate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    Gaussian,
    Bump,
}

impl TestFunction {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Self::Gaussian),
            "bump" => Ok(Self::Bump),
            _ => Err(DunklError::Config(format!(
                "--f: expected `gaussian` or `bump`, got `{s}`"
            ))),
        }
    }

    /// The function sampled on a grid wide enough for its support.
    fn sample(self, k: f64) -> Result<GridFunction> {
        let grid = Arc::new(TensorGrid::single(match self {
            TestFunction::Gaussian => AxisGrid::uniform(k, 10.0, 20, 24)?,
            TestFunction::Bump => AxisGrid::uniform(k, 1.5, 12, 24)?,
        }));
        Ok(match self {
            TestFunction::Gaussian => GridFunction::sample_real(grid, |x| (-x[0] * x[0]).exp()),
            TestFunction::Bump => GridFunction::sample_real(grid, |x| classic_bump(x[0])),
        })
    }
}

/// A validated eval request.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRequest {
    pub what: EvalTarget,
    pub k: f64,
    pub points: Vec<f64>,
    pub y: f64,
    pub t: f64,
    pub f: TestFunction,
}

impl EvalRequest {
    pub fn from_args(what: EvalTarget, raw: &RawArgs) -> Result<Self> {
        let mult: MultiplicityVector = parse_mult(raw.k.as_deref().unwrap_or("0.7"))?;
        if mult.dim() != 1 {
            return Err(DunklError::Config(
                "eval takes a single multiplicity --k".into(),
            ));
        }
        let (lo, hi, count) = parse_range("grid", raw.grid.as_deref().unwrap_or("0:5:51"))?;
        let default_y = if what == EvalTarget::Heat { "0" } else { "1" };
        let y = parse_real("y", raw.y.as_deref().unwrap_or(default_y))?;
        let t = parse_real("t", raw.t.as_deref().unwrap_or("1"))?;
        check_finite("y", y)?;
        check_positive("t", t).map_err(|e| DunklError::Config(format!("--t: {e}")))?;
        Ok(Self {
            what,
            k: mult.get(0),
            points: lin_space(lo, hi, count),
            y,
            t,
            f: TestFunction::parse(raw.f.as_deref().unwrap_or("gaussian"))?,
        })
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// The CSV text for a request: header row, one row per grid point.
pub fn eval_csv(req: &EvalRequest) -> Result<String> {
    let k = req.k;
    let mult = MultiplicityVector::scalar(k)?;
    let mut out = String::new();
    match req.what {
        EvalTarget::Kernel => {
            out.push_str("x,y,E\n");
            for &x in &req.points {
                out.push_str(&format!(
                    "{},{},{}\n",
                    num(x),
                    num(req.y),
                    num(dunkl_kernel_1d(k, x, req.y))
                ));
            }
        }
        EvalTarget::Heat => {
            let hk = HeatKernel1D::new(k)?;
            out.push_str("x,y,t,h\n");
            for &x in &req.points {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    num(x),
                    num(req.y),
                    num(req.t),
                    num(hk.value(req.t, x, req.y))
                ));
            }
        }
        EvalTarget::Transform => {
            let f = req.f.sample(k)?;
            out.push_str("xi,re,im\n");
            for &xi in &req.points {
                let v = dunkl_transform(&mult, &f, &[xi])?;
                out.push_str(&format!("{},{},{}\n", num(xi), num(v.re), num(v.im)));
            }
        }
        EvalTarget::Translate => {
            let f = req.f.sample(k)?;
            out.push_str("x,y,re,im\n");
            for &x in &req.points {
                let v = translate(&mult, &f, &[req.y], &[x])?;
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    num(x),
                    num(req.y),
                    num(v.re),
                    num(v.im)
                ));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(what: EvalTarget, k: &str, grid: &str) -> EvalRequest {
        let raw = RawArgs {
            k: Some(k.into()),
            grid: Some(grid.into()),
            ..Default::default()
        };
        EvalRequest::from_args(what, &raw).unwrap()
    }

    #[test]
    fn heat_table_is_gaussian_at_k0() {
        let csv = eval_csv(&req(EvalTarget::Heat, "0", "-2:2:5")).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,y,t,h");
        assert_eq!(lines.len(), 6);
        for line in &lines[1..] {
            let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
            let g = (-(v[0] - v[1]).powi(2) / (4.0 * v[2])).exp()
                / (4.0 * std::f64::consts::PI * v[2]).sqrt();
            assert!((v[3] - g).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_requests() {
        let raw = RawArgs {
            k: Some("0.7,1.2".into()),
            ..Default::default()
        };
        assert!(EvalRequest::from_args(EvalTarget::Kernel, &raw).is_err());
        let raw = RawArgs {
            t: Some("-1".into()),
            ..Default::default()
        };
        assert!(EvalRequest::from_args(EvalTarget::Heat, &raw).is_err());
        let raw = RawArgs {
            f: Some("box".into()),
            ..Default::default()
        };
        assert!(EvalRequest::from_args(EvalTarget::Translate, &raw).is_err());
    }

    #[test]
    fn kernel_rows_use_seventeen_digits() {
        let csv = eval_csv(&req(EvalTarget::Kernel, "0.7", "0:1:2")).unwrap();
        let row = csv.lines().nth(2).unwrap();
        let e = row.split(',').nth(2).unwrap();
        assert_eq!(
            e.split('e').next().unwrap().replace(['.', '-'], "").len(),
            17
        );
    }
}
