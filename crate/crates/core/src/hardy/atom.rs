//! Test atoms: mean-zero, ball-supported, size-normalized functions.

use std::sync::Arc;

use crate::error::{DunklError, Result};
use crate::grid::{AxisGrid, GridFunction, TensorGrid};
use crate::measure::{mu_ball_nd, Ball, BallMeasureContext};
use crate::specfn::MultiplicityVector;
use crate::translation::classic_bump;

/// Nodes per panel on atom grids.
pub const ATOM_ORDER: usize = 16;

/// Shape of a test atom along its first axis. The remaining axes carry a
/// plain bump, so the product has mean zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomProfile {
    /// A positive bump on the left half and a balanced negative bump on the
    /// right half.
    TwoBump,
    /// The derivative of a bump, balanced by a multiple of the bump.
    DerivativeOfBump,
}

impl AtomProfile {
    pub fn name(self) -> &'static str {
        match self {
            AtomProfile::TwoBump => "two-bump",
            AtomProfile::DerivativeOfBump => "derivative-of-bump",
        }
    }
}

impl std::str::FromStr for AtomProfile {
    type Err = DunklError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-bump" => Ok(AtomProfile::TwoBump),
            "derivative-of-bump" => Ok(AtomProfile::DerivativeOfBump),
            _ => Err(DunklError::Config(format!("unknown atom profile `{s}`"))),
        }
    }
}

fn bump_deriv(u: f64) -> f64 {
    if u.abs() < 1.0 {
        let d = 1.0 - u * u;
        -2.0 * u / (d * d) * classic_bump(u)
    } else {
        0.0
    }
}

/// An atom a supported in a ball B with ‖a‖_∞ ≤ 1/μ(B) and ∫ a dμ = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    ball: Ball,
    values: GridFunction,
}

impl Atom {
    /// Wraps sampled values; see [`validate_atom`] for the checks.
    pub fn new(ball: Ball, values: GridFunction) -> Self {
        Self { ball, values }
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    pub fn values(&self) -> &GridFunction {
        &self.values
    }

    /// λ·a, again an atom when |λ| ≤ 1.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            ball: self.ball.clone(),
            values: self.values.scale(lambda),
        }
    }
}

/// Breakpoints covering [c−s−margin, c+s+margin] with panels of width at
/// most s/4, the points c−s, c, c+s and the origin when inside.
fn atom_breaks(c: f64, s: f64) -> Vec<f64> {
    let margin = 0.5 * s;
    let (lo, hi) = (c - s - margin, c + s + margin);
    let mut marks = vec![lo, c - s, c, c + s, hi];
    if lo < 0.0 && hi > 0.0 {
        marks.push(0.0);
    }
    marks.sort_by(f64::total_cmp);
    marks.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * s);
    let mut out = vec![marks[0]];
    for w in marks.windows(2) {
        let n = ((w[1] - w[0]) / (0.25 * s)).ceil().max(1.0) as usize;
        for i in 1..=n {
            out.push(w[0] + (w[1] - w[0]) * i as f64 / n as f64);
        }
    }
    out
}

/// A validated atom centered at `center` with the given radius. Its
/// support is the cube of half-side radius/√n, which sits inside the ball.
pub fn make_atom(
    mult: &MultiplicityVector,
    center: &[f64],
    radius: f64,
    profile: AtomProfile,
) -> Result<Atom> {
    mult.check_point(center)?;
    let ball = Ball::new(center.to_vec(), radius)?;
    let n = mult.dim();
    let s = radius / (n as f64).sqrt();
    let axes = (0..n)
        .map(|j| AxisGrid::from_breakpoints(mult.get(j), &atom_breaks(center[j], s), ATOM_ORDER))
        .collect::<Result<Vec<_>>>()?;
    let grid = Arc::new(TensorGrid::new(axes)?);

    // balance the first-axis profile against its own weighted measure
    let first = &grid.axes()[0];
    let c0 = center[0];
    let (pos, neg): (Box<dyn Fn(f64) -> f64>, Box<dyn Fn(f64) -> f64>) = match profile {
        AtomProfile::TwoBump => (
            Box::new(|u: f64| classic_bump(2.0 * u + 1.0)),
            Box::new(|u: f64| classic_bump(2.0 * u - 1.0)),
        ),
        AtomProfile::DerivativeOfBump => (Box::new(bump_deriv), Box::new(classic_bump)),
    };
    let integrate = |g: &dyn Fn(f64) -> f64| -> f64 {
        first
            .nodes()
            .iter()
            .zip(first.weights())
            .map(|(&x, &w)| w * g((x - c0) / s))
            .sum()
    };
    let lambda = integrate(&*pos) / integrate(&*neg);
    let profile_1d = |u: f64| pos(u) - lambda * neg(u);

    let raw = GridFunction::sample_real(grid.clone(), |x| {
        let mut v = profile_1d((x[0] - center[0]) / s);
        for j in 1..n {
            v *= classic_bump((x[j] - center[j]) / s);
        }
        v
    });
    let ctx = BallMeasureContext::with_default_quadrature(mult.clone())?;
    let mu = mu_ball_nd(&ctx, center, radius)?;
    let sup = raw.sup_norm();
    if sup == 0.0 {
        return Err(DunklError::InvalidAtom(
            "profile vanished on the grid".into(),
        ));
    }
    let atom = Atom::new(ball, raw.scale(1.0 / (sup * mu)));
    validate_atom(&atom, &ctx)?;
    Ok(atom)
}

/// Measured quantities behind [`validate_atom`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomCheck {
    /// ‖a‖_∞ μ(B), at most 1.
    pub size: f64,
    /// |∫ a dμ| / (‖a‖_∞ μ(B)).
    pub mean: f64,
    /// Largest |a| at grid nodes outside the ball.
    pub outside: f64,
}

/// Checks support, size and cancellation. Fails with `InvalidAtom` naming
/// the violated condition.
pub fn validate_atom(atom: &Atom, ctx: &BallMeasureContext) -> Result<AtomCheck> {
    let f = atom.values();
    let ball = atom.ball();
    let mu = mu_ball_nd(ctx, ball.center(), ball.radius())?;
    let sup = f.sup_norm();
    let grid = f.grid();
    let outside = (0..f.len())
        .filter(|&i| !ball.contains(&grid.node(i)))
        .map(|i| f.values()[i].norm())
        .fold(0.0, f64::max);
    let size = sup * mu;
    let mean = if sup == 0.0 {
        0.0
    } else {
        f.integral().norm() / size
    };
    let check = AtomCheck {
        size,
        mean,
        outside,
    };
    if outside > 0.0 {
        return Err(DunklError::InvalidAtom(format!(
            "nonzero value {outside:.3e} outside the ball"
        )));
    }
    if size > 1.0 + 1e-12 {
        return Err(DunklError::InvalidAtom(format!(
            "sup times ball measure is {size:.6} > 1"
        )));
    }
    if mean > 1e-10 {
        return Err(DunklError::InvalidAtom(format!(
            "mean residual {mean:.3e} exceeds 1e-10"
        )));
    }
    Ok(check)
}
