//! The `dunkl` command line: `verify`, `pin` and `eval`.
//!
//! Exit status is 0 on success, 1 when a check fails or a run cannot
//! complete, and 2 for invalid arguments or configuration.

mod config;
mod eval;
mod suites;

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Serialize;

pub use config::{
    Cli, Command, ConfigEcho, EvalTarget, GridLevel, RawArgs, RunConfig, Suite, DEFAULT_FROZEN_PATH,
};
pub use eval::{eval_csv, EvalRequest, TestFunction};
pub use suites::{hardy_time_grid, run_suite, run_suites, smooth_family};

use crate::error::{DunklError, Result};
use crate::report::{EstimateReport, FrozenTable, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// The JSON document written by `verify` and `pin`.
#[derive(Debug, Serialize)]
pub struct ReportFile<'a> {
    pub version: &'static str,
    pub config_echo: ConfigEcho,
    pub reports: &'a [EstimateReport],
}

/// Serialized report document; identical inputs give identical bytes.
pub fn render_json(cfg: &RunConfig, reports: &[EstimateReport]) -> Result<String> {
    let doc = ReportFile {
        version: env!("CARGO_PKG_VERSION"),
        config_echo: cfg.echo(),
        reports,
    };
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| DunklError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

/// One CSV row per report.
pub fn render_csv(reports: &[EstimateReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| DunklError::Io(e.to_string());
    w.write_record([
        "estimate_id",
        "k_config",
        "grid_id",
        "empirical_constant",
        "frozen_constant",
        "threshold",
        "status",
    ])
    .map_err(io)?;
    for r in reports {
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Pinning => "pinning",
        };
        w.write_record([
            r.estimate_id.as_str(),
            &r.k_config.to_string(),
            r.grid_id.as_str(),
            &format!("{:.16e}", r.empirical_constant),
            &opt(r.frozen_constant),
            &opt(r.threshold),
            status,
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| DunklError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| DunklError::Io(e.to_string()))
}

fn load_frozen(path: &Path) -> Result<FrozenTable> {
    if path.exists() {
        FrozenTable::load(path)
    } else {
        Ok(FrozenTable::default())
    }
}

fn write_outputs(cfg: &RunConfig, reports: &[EstimateReport]) -> Result<()> {
    if let Some(out) = &cfg.out {
        std::fs::write(out, render_json(cfg, reports)?)?;
        std::fs::write(out.with_extension("csv"), render_csv(reports)?)?;
    }
    Ok(())
}

fn status_line(r: &EstimateReport) -> String {
    let tag = match r.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Pinning => "PIN ",
    };
    format!(
        "{tag} {} k={} grid={} value={:.6e}",
        r.estimate_id, r.k_config, r.grid_id, r.empirical_constant
    )
}

/// Runs the suites and judges every report against the frozen table.
pub fn verify(cfg: &RunConfig) -> Result<Vec<EstimateReport>> {
    let table = load_frozen(&cfg.frozen)?;
    let mut reports = run_suites(cfg)?;
    for r in &mut reports {
        r.judge(table.lookup(r));
    }
    Ok(reports)
}

/// Runs the suites and pins every constant without a hard threshold.
/// Refuses to replace existing constants unless `cfg.force`.
pub fn pin(cfg: &RunConfig, timestamp: u64) -> Result<Vec<EstimateReport>> {
    let mut table = load_frozen(&cfg.frozen)?;
    let mut reports = run_suites(cfg)?;
    let pinnable = |r: &EstimateReport| r.threshold.is_none();
    // re-pinning an identical value, e.g. a per-axis report shared with a
    // scalar run, is not a replacement
    let changes = |r: &EstimateReport| table.lookup(r).is_some_and(|f| f != r.empirical_constant);
    let clashes = reports.iter().filter(|r| pinnable(r) && changes(r)).count();
    if clashes > 0 && !cfg.force {
        return Err(DunklError::Config(format!(
            "{clashes} constants are already pinned in {}; rerun with --force to replace them",
            cfg.frozen.display()
        )));
    }
    for r in &mut reports {
        if pinnable(r) {
            if !r.empirical_constant.is_finite() {
                return Err(DunklError::NonFinite(format!(
                    "{} cannot be pinned",
                    r.estimate_id
                )));
            }
            if table.lookup(r) != Some(r.empirical_constant) {
                table.pin(r, timestamp);
            }
            r.mark_pinning();
        } else {
            r.judge(None);
        }
    }
    if let Some(dir) = cfg.frozen.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(&cfg.frozen, table.render())?;
    Ok(reports)
}

fn now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn summarize(reports: &[EstimateReport], out: &mut impl std::io::Write) -> bool {
    for r in reports {
        let _ = writeln!(out, "{}", status_line(r));
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let _ = writeln!(out, "{} reports, {} failed", reports.len(), failed);
    failed == 0
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (what, raw) = match cli.command {
        Command::Verify(raw) => (None, raw),
        Command::Pin(raw) => (Some(None), raw),
        Command::Eval { what, args } => (Some(Some(what)), args),
    };
    let raw = match raw.resolved() {
        Ok(r) => r,
        Err(e) => return usage_error(&e),
    };
    match what {
        Some(Some(target)) => run_eval(target, &raw),
        Some(None) => run_pin(&raw),
        None => run_verify(&raw),
    }
}

fn usage_error(e: &DunklError) -> i32 {
    eprintln!("dunkl: {e}");
    EXIT_USAGE
}

fn run_verify(raw: &RawArgs) -> i32 {
    let cfg = match RunConfig::from_args(raw) {
        Ok(c) => c,
        Err(e) => return usage_error(&e),
    };
    let result = verify(&cfg).and_then(|reports| write_outputs(&cfg, &reports).map(|_| reports));
    match result {
        Ok(reports) => {
            if summarize(&reports, &mut std::io::stdout().lock()) {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("dunkl verify: {e}");
            EXIT_FAIL
        }
    }
}

fn run_pin(raw: &RawArgs) -> i32 {
    let cfg = match RunConfig::from_args(raw) {
        Ok(c) => c,
        Err(e) => return usage_error(&e),
    };
    match pin(&cfg, now()).and_then(|reports| write_outputs(&cfg, &reports).map(|_| reports)) {
        Ok(reports) => {
            let ok = summarize(&reports, &mut std::io::stdout().lock());
            println!("pinned into {}", cfg.frozen.display());
            if ok {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("dunkl pin: {e}");
            EXIT_FAIL
        }
    }
}

fn run_eval(what: EvalTarget, raw: &RawArgs) -> i32 {
    let req = match EvalRequest::from_args(what, raw) {
        Ok(r) => r,
        Err(e) => return usage_error(&e),
    };
    let csv = match eval_csv(&req) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("dunkl eval: {e}");
            return EXIT_FAIL;
        }
    };
    let written = match &raw.out {
        Some(path) => std::fs::write(PathBuf::from(path), csv),
        None => std::io::stdout().lock().write_all(csv.as_bytes()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("dunkl eval: {e}");
            EXIT_FAIL
        }
    }
}
