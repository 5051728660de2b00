//! Kummer's confluent hypergeometric function ₁F₁(a; b; z) for 0 < a < b.
//!
//! For |z| below [`ASYMPTOTIC_THRESHOLD`] the Taylor series is summed, after
//! Kummer's transformation ₁F₁(a;b;z) = e^z ₁F₁(b−a;b;−z) when z < 0 so that
//! every term is positive. Beyond the threshold the large-|z| expansions are
//! used, truncated at their smallest term. Results are carried as
//! [`Scaled`] values so that callers can combine the exponential factor with
//! their own exponents without overflow.

use super::gamma::ln_gamma;
use crate::error::{DunklError, Result};

/// Switch-over point |z| between the Taylor series and the asymptotic series.
pub const ASYMPTOTIC_THRESHOLD: f64 = 30.0;

/// Relative size of the neglected exponentially small companion term above
/// which the asymptotic branch is refused in favour of the series.
const COMPANION_TOLERANCE: f64 = 1e-10;

/// Largest acceptable relative size of the smallest asymptotic term.
const SMALLEST_TERM_TOLERANCE: f64 = 1e-8;

/// Truncation error the automatic strategy accepts from the asymptotic branch.
const AUTO_TRUNCATION_TOLERANCE: f64 = 1e-11;

const MAX_ASYMPTOTIC_TERMS: usize = 400;
const SERIES_EXTRA_TERMS: usize = 500;
const RESCALE_AT: f64 = 1e250;

/// Parameters of ₁F₁(a; b; z) with 0 < a < b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerParams {
    a: f64,
    b: f64,
    z: f64,
}

impl KummerParams {
    pub fn new(a: f64, b: f64, z: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(DunklError::InvalidParameter {
                name: "a",
                value: a,
                reason: "must be positive",
            });
        }
        if !(b.is_finite() && b > a) {
            return Err(DunklError::InvalidParameter {
                name: "b",
                value: b,
                reason: "must exceed a",
            });
        }
        if !z.is_finite() {
            return Err(DunklError::InvalidParameter {
                name: "z",
                value: z,
                reason: "must be finite",
            });
        }
        Ok(Self { a, b, z })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// Same a and b, different argument.
    pub fn with_z(&self, z: f64) -> Self {
        Self { z, ..*self }
    }
}

/// Which evaluation path produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Series,
    KummerSeries,
    AsymptoticPositive,
    AsymptoticNegative,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Series => "taylor series",
            Strategy::KummerSeries => "kummer-transformed taylor series",
            Strategy::AsymptoticPositive => "large-positive asymptotic series",
            Strategy::AsymptoticNegative => "large-negative asymptotic series",
        }
    }
}

/// A real number stored as `mantissa · exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mantissa: f64,
    pub log_scale: f64,
}

impl Scaled {
    pub fn new(mantissa: f64, log_scale: f64) -> Self {
        Self {
            mantissa,
            log_scale,
        }
    }

    pub fn from_f64(v: f64) -> Self {
        Self {
            mantissa: v,
            log_scale: 0.0,
        }
    }

    pub fn value(&self) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        self.mantissa * self.log_scale.exp()
    }

    /// ln|value|; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.abs().ln() + self.log_scale
    }

    pub fn scale(self, factor: f64) -> Self {
        Self {
            mantissa: self.mantissa * factor,
            ..self
        }
    }

    pub fn shift(self, dlog: f64) -> Self {
        Self {
            log_scale: self.log_scale + dlog,
            ..self
        }
    }

    /// Rewrites the value with the given log scale.
    pub fn rebase(self, log_scale: f64) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        self.mantissa * (self.log_scale - log_scale).exp()
    }

    pub fn add(self, other: Scaled) -> Scaled {
        let base = self.log_scale.max(other.log_scale);
        Scaled::new(self.rebase(base) + other.rebase(base), base)
    }

    pub fn sub(self, other: Scaled) -> Scaled {
        self.add(other.scale(-1.0))
    }
}

/// ₁F₁(a; b; z).
pub fn hyp1f1(p: KummerParams) -> Result<f64> {
    Ok(hyp1f1_scaled(p)?.value())
}

/// d/dz ₁F₁(a; b; z) = (a/b) ₁F₁(a+1; b+1; z).
pub fn hyp1f1_deriv(p: KummerParams) -> Result<f64> {
    let shifted = KummerParams::new(p.a + 1.0, p.b + 1.0, p.z)?;
    Ok(p.a / p.b * hyp1f1(shifted)?)
}

/// ₁F₁(a; b; z) as a [`Scaled`] value, choosing the strategy automatically.
pub fn hyp1f1_scaled(p: KummerParams) -> Result<Scaled> {
    Ok(hyp1f1_with_strategy(p)?.0)
}

/// The strategy [`hyp1f1`] selects for the given parameters.
pub fn select_strategy(p: KummerParams) -> Strategy {
    let z = p.z;
    if z.abs() < ASYMPTOTIC_THRESHOLD {
        if z < 0.0 {
            Strategy::KummerSeries
        } else {
            Strategy::Series
        }
    } else if companion_ratio(p) > COMPANION_TOLERANCE {
        if z < 0.0 {
            Strategy::KummerSeries
        } else {
            Strategy::Series
        }
    } else if z > 0.0 {
        Strategy::AsymptoticPositive
    } else {
        Strategy::AsymptoticNegative
    }
}

/// Value together with the strategy that produced it.
pub fn hyp1f1_with_strategy(p: KummerParams) -> Result<(Scaled, Strategy)> {
    if p.z == 0.0 {
        return Ok((Scaled::from_f64(1.0), Strategy::Series));
    }
    let s = select_strategy(p);
    let v = match s {
        Strategy::Series | Strategy::KummerSeries => hyp1f1_series(p)?,
        Strategy::AsymptoticPositive | Strategy::AsymptoticNegative => {
            let (v, truncation) = asymptotic_with_error(p)?;
            if truncation > AUTO_TRUNCATION_TOLERANCE {
                let fallback = if p.z < 0.0 {
                    Strategy::KummerSeries
                } else {
                    Strategy::Series
                };
                return Ok((hyp1f1_series(p)?, fallback));
            }
            v
        }
    };
    Ok((v, s))
}

/// Relative size of the exponentially small term dropped by the
/// large-|z| expansion, compared to the dominant one.
fn companion_ratio(p: KummerParams) -> f64 {
    let (a, b) = (p.a, p.b);
    let w = p.z.abs();
    let ln_ratio = if p.z > 0.0 {
        ln_gamma(a) - ln_gamma(b - a) + (b - 2.0 * a) * w.ln() - w
    } else {
        ln_gamma(b - a) - ln_gamma(a) + (2.0 * a - b) * w.ln() - w
    };
    ln_ratio.exp()
}

/// Taylor series, with Kummer's transformation applied for negative z.
pub fn hyp1f1_series(p: KummerParams) -> Result<Scaled> {
    if p.z >= 0.0 {
        positive_series(p.a, p.b, p.z, Strategy::Series)
    } else {
        let s = positive_series(p.b - p.a, p.b, -p.z, Strategy::KummerSeries)?;
        Ok(s.shift(p.z))
    }
}

fn positive_series(a: f64, b: f64, z: f64, strategy: Strategy) -> Result<Scaled> {
    let max_terms = (2.0 * z) as usize + SERIES_EXTRA_TERMS;
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut log_scale = 0.0;
    for n in 0..max_terms {
        let nf = n as f64;
        term *= (a + nf) / (b + nf) * z / (nf + 1.0);
        sum += term;
        if sum > RESCALE_AT {
            sum /= RESCALE_AT;
            term /= RESCALE_AT;
            log_scale += RESCALE_AT.ln();
        }
        if term <= f64::EPSILON * 0.25 * sum && nf + 1.0 > z - b {
            return Ok(Scaled::new(sum, log_scale));
        }
    }
    Err(DunklError::NonConvergence {
        z,
        strategy: strategy.name(),
    })
}

/// Large-|z| asymptotic expansion, truncated at the smallest term.
pub fn hyp1f1_asymptotic(p: KummerParams) -> Result<Scaled> {
    Ok(asymptotic_with_error(p)?.0)
}

/// Asymptotic value and the relative size of its last retained term.
fn asymptotic_with_error(p: KummerParams) -> Result<(Scaled, f64)> {
    let (a, b, z) = (p.a, p.b, p.z);
    if z == 0.0 {
        return Err(DunklError::NonConvergence {
            z,
            strategy: "asymptotic series at z = 0",
        });
    }
    let w = z.abs();
    let (alpha, beta, strategy, log_prefactor) = if z > 0.0 {
        (
            1.0 - a,
            b - a,
            Strategy::AsymptoticPositive,
            ln_gamma(b) - ln_gamma(a) + z + (a - b) * w.ln(),
        )
    } else {
        (
            a,
            a - b + 1.0,
            Strategy::AsymptoticNegative,
            ln_gamma(b) - ln_gamma(b - a) - a * w.ln(),
        )
    };
    let mut sum = 1.0;
    let mut term: f64 = 1.0;
    for l in 0..MAX_ASYMPTOTIC_TERMS {
        let lf = l as f64;
        let next = term * (alpha + lf) * (beta + lf) / ((lf + 1.0) * w);
        if next == 0.0 {
            return Ok((Scaled::new(sum, log_prefactor), 0.0));
        }
        if next.abs() >= term.abs() {
            // smallest term reached
            let rel = (term / sum).abs();
            if rel <= SMALLEST_TERM_TOLERANCE {
                return Ok((Scaled::new(sum, log_prefactor), rel));
            }
            return Err(DunklError::NonConvergence {
                z,
                strategy: strategy.name(),
            });
        }
        term = next;
        sum += term;
        if term.abs() <= f64::EPSILON * 0.25 * sum.abs() {
            return Ok((Scaled::new(sum, log_prefactor), (term / sum).abs()));
        }
    }
    Err(DunklError::NonConvergence {
        z,
        strategy: strategy.name(),
    })
}
