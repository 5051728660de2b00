//! Command-line grammar, `key=value` config files and the validated
//! [`RunConfig`].

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{check_positive, DunklError, Result};
use crate::heat::{TimeGrid, DEFAULT_DECAY_CONSTANT};
use crate::specfn::MultiplicityVector;

/// Frozen-constants table shipped with the crate.
pub const DEFAULT_FROZEN_PATH: &str =
    concat!(env!("CARGO_MANIFEST_DIR"), "/data/frozen_constants.txt");

#[derive(Debug, Parser)]
#[command(
    name = "dunkl",
    version,
    about = "Grid checks for rational Dunkl analysis with product reflections"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run suites and compare constants against the frozen table.
    Verify(RawArgs),
    /// Run suites and write their constants into the frozen table.
    Pin(RawArgs),
    /// Tabulate a kernel, heat kernel, transform or translate as CSV.
    Eval {
        #[arg(value_enum)]
        what: EvalTarget,
        #[command(flatten)]
        args: RawArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalTarget {
    Kernel,
    Heat,
    Transform,
    Translate,
}

/// Flags as typed. Every flag can also come from a `--config` file.
#[derive(Debug, Clone, Default, Args)]
pub struct RawArgs {
    /// specfn, measure, heat, transform, translation, hardy or all (comma separated).
    #[arg(long)]
    pub suite: Option<String>,
    /// Multiplicities k₁,…,k_n.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Decay constant c in e^{−|x−y|²/ct}.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// Overrides every tolerance-type threshold.
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<String>,
    /// Time grid MIN:MAX:COUNT for maximal functions.
    #[arg(long, allow_hyphen_values = true)]
    pub tgrid: Option<String>,
    /// `standard` or `refined` for verify/pin; MIN:MAX:COUNT for eval.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    /// Frozen-constants table (defaults to the one shipped with the crate).
    #[arg(long)]
    pub frozen: Option<String>,
    /// Allow pin to replace existing constants.
    #[arg(long)]
    pub force: bool,
    /// File of `key=value` lines; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Second argument y for eval.
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    /// Time t for eval heat.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Test function for eval transform/translate: gaussian or bump.
    #[arg(long)]
    pub f: Option<String>,
}

const KEYS: [&str; 12] = [
    "suite", "k", "c", "tol", "tgrid", "grid", "out", "frozen", "force", "y", "t", "f",
];

impl RawArgs {
    fn slot(&mut self, key: &str) -> Option<&mut Option<String>> {
        Some(match key {
            "suite" => &mut self.suite,
            "k" => &mut self.k,
            "c" => &mut self.c,
            "tol" => &mut self.tol,
            "tgrid" => &mut self.tgrid,
            "grid" => &mut self.grid,
            "out" => &mut self.out,
            "frozen" => &mut self.frozen,
            "y" => &mut self.y,
            "t" => &mut self.t,
            "f" => &mut self.f,
            _ => return None,
        })
    }

    /// Fills unset flags from `key=value` text. `#` starts a comment.
    pub fn merge_config_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                DunklError::Config(format!("config line {}: expected key=value", n + 1))
            })?;
            let (key, value) = (key.trim(), value.trim().to_string());
            if key == "force" {
                self.force |= parse_bool(&value)?;
                continue;
            }
            let slot = self.slot(key).ok_or_else(|| {
                DunklError::Config(format!(
                    "config line {}: unknown key `{key}` (expected one of {})",
                    n + 1,
                    KEYS.join(", ")
                ))
            })?;
            if slot.is_none() {
                *slot = Some(value);
            }
        }
        Ok(())
    }

    /// Merges the `--config` file, if any.
    pub fn resolved(mut self) -> Result<Self> {
        if let Some(path) = self.config.clone() {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| DunklError::Config(format!("cannot read {}: {e}", path.display())))?;
            self.merge_config_text(&text)?;
        }
        Ok(self)
    }
}

fn parse_bool(s: &str) -> Result<bool> {
    match s {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(DunklError::Config(format!("expected a boolean, got `{s}`"))),
    }
}

pub(crate) fn parse_real(name: &str, s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| DunklError::Config(format!("--{name}: `{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(DunklError::Config(format!("--{name}: must be finite")));
    }
    Ok(v)
}

/// `MIN:MAX:COUNT`.
pub(crate) fn parse_range(name: &str, s: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(DunklError::Config(format!(
            "--{name}: expected MIN:MAX:COUNT, got `{s}`"
        )));
    }
    let lo = parse_real(name, parts[0])?;
    let hi = parse_real(name, parts[1])?;
    let count: usize = parts[2].trim().parse().map_err(|_| {
        DunklError::Config(format!("--{name}: COUNT `{}` is not a count", parts[2]))
    })?;
    if count < 2 || lo >= hi {
        return Err(DunklError::Config(format!(
            "--{name}: need MIN < MAX and COUNT >= 2"
        )));
    }
    Ok((lo, hi, count))
}

/// Test suites, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Specfn,
    Measure,
    Heat,
    Transform,
    Translation,
    Hardy,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Specfn,
        Suite::Measure,
        Suite::Heat,
        Suite::Transform,
        Suite::Translation,
        Suite::Hardy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Specfn => "specfn",
            Suite::Measure => "measure",
            Suite::Heat => "heat",
            Suite::Transform => "transform",
            Suite::Translation => "translation",
            Suite::Hardy => "hardy",
        }
    }
}

impl FromStr for Suite {
    type Err = DunklError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| DunklError::Config(format!("unknown suite `{s}` (expected specfn, measure, heat, transform, translation, hardy or all)")))
    }
}

/// Grid resolution for the scans; its name is the report `grid_id`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridLevel {
    Standard,
    Refined,
}

impl GridLevel {
    pub fn id(self) -> &'static str {
        match self {
            GridLevel::Standard => "standard",
            GridLevel::Refined => "refined",
        }
    }

    pub fn is_refined(self) -> bool {
        self == GridLevel::Refined
    }
}

impl FromStr for GridLevel {
    type Err = DunklError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(GridLevel::Standard),
            "refined" => Ok(GridLevel::Refined),
            _ => Err(DunklError::Config(format!(
                "--grid: expected `standard` or `refined`, got `{s}`"
            ))),
        }
    }
}

impl fmt::Display for GridLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Validated settings for `verify` and `pin`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mult: MultiplicityVector,
    pub suites: Vec<Suite>,
    pub decay_c: f64,
    pub tol: Option<f64>,
    pub time_grid: Option<TimeGrid>,
    pub grid: GridLevel,
    pub out: Option<PathBuf>,
    pub frozen: PathBuf,
    pub force: bool,
}

pub(crate) fn parse_mult(s: &str) -> Result<MultiplicityVector> {
    let ks = s
        .split(',')
        .map(|v| parse_real("k", v))
        .collect::<Result<Vec<f64>>>()?;
    MultiplicityVector::new(ks).map_err(|e| DunklError::Config(format!("--k: {e}")))
}

pub(crate) fn parse_time_grid(s: &str) -> Result<TimeGrid> {
    let (lo, hi, count) = parse_range("tgrid", s)?;
    TimeGrid::new(lo, hi, count).map_err(|e| DunklError::Config(format!("--tgrid: {e}")))
}

impl RunConfig {
    pub fn from_args(raw: &RawArgs) -> Result<Self> {
        let mult = parse_mult(raw.k.as_deref().unwrap_or("0.7"))?;
        let suites = match raw.suite.as_deref().unwrap_or("all") {
            "all" => Suite::ALL.to_vec(),
            list => {
                let mut v = list
                    .split(',')
                    .map(|s| s.trim().parse())
                    .collect::<Result<Vec<Suite>>>()?;
                v.sort();
                v.dedup();
                v
            }
        };
        let decay_c = match &raw.c {
            Some(s) => parse_real("c", s)?,
            None => DEFAULT_DECAY_CONSTANT,
        };
        check_positive("c", decay_c).map_err(|e| DunklError::Config(format!("--c: {e}")))?;
        let tol = raw
            .tol
            .as_deref()
            .map(|s| parse_real("tol", s))
            .transpose()?;
        if let Some(t) = tol {
            check_positive("tol", t).map_err(|e| DunklError::Config(format!("--tol: {e}")))?;
        }
        Ok(Self {
            mult,
            suites,
            decay_c,
            tol,
            time_grid: raw.tgrid.as_deref().map(parse_time_grid).transpose()?,
            grid: raw.grid.as_deref().unwrap_or("standard").parse()?,
            out: raw.out.as_ref().map(PathBuf::from),
            frozen: PathBuf::from(raw.frozen.as_deref().unwrap_or(DEFAULT_FROZEN_PATH)),
            force: raw.force,
        })
    }

    /// Threshold for a tolerance-type check: `--tol` if given, else `default`.
    pub fn tolerance(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    /// The settings that determine the report contents (paths excluded).
    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            k: self.mult.k().to_vec(),
            suites: self.suites.iter().map(|s| s.name()).collect(),
            c: self.decay_c,
            tol: self.tol,
            tgrid: self
                .time_grid
                .as_ref()
                .map(|t| format!("{}:{}:{}", t.t_min(), t.t_max(), t.count())),
            grid: self.grid.id(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub k: Vec<f64>,
    pub suites: Vec<&'static str>,
    pub c: f64,
    pub tol: Option<f64>,
    pub tgrid: Option<String>,
    pub grid: &'static str,
}
