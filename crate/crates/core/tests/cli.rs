//! The `dunkl` binary: exit codes, outputs and the frozen-table workflow.

use std::path::Path;
use std::process::{Command, Output};

fn dunkl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dunkl"))
        .args(args)
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(dunkl(&[]).status.code(), Some(2));
    assert_eq!(dunkl(&["verify", "--k", "-0.5"]).status.code(), Some(2));
    assert_eq!(
        dunkl(&["verify", "--suite", "optics"]).status.code(),
        Some(2)
    );
    assert_eq!(
        dunkl(&["verify", "--tgrid", "1:0.1:5"]).status.code(),
        Some(2)
    );
    assert_eq!(dunkl(&["eval", "heat", "--t", "0"]).status.code(), Some(2));
    assert_eq!(dunkl(&["--help"]).status.code(), Some(0));
}

#[test]
fn eval_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("kernel.csv");
    let o = dunkl(&[
        "eval",
        "kernel",
        "--k",
        "0",
        "--y",
        "1",
        "--grid",
        "-1:1:3",
        "--out",
        path(&out),
    ]);
    assert!(o.status.success());
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["x", "y", "E"]);
    for row in rdr.records() {
        let row = row.unwrap();
        let x: f64 = row[0].parse().unwrap();
        let e: f64 = row[2].parse().unwrap();
        approx::assert_relative_eq!(e, x.exp(), max_relative = 1e-14);
    }
}

#[test]
fn pin_refuses_to_replace_without_force() {
    let dir = tempfile::tempdir().unwrap();
    let frozen = dir.path().join("frozen.txt");
    let args = [
        "pin",
        "--suite",
        "specfn",
        "--k",
        "0.7",
        "--frozen",
        path(&frozen),
    ];
    assert!(dunkl(&args).status.success());
    let pinned = std::fs::read_to_string(&frozen).unwrap();
    assert!(pinned.contains("specfn.envelope_second_order 0.7 standard"));
    // identical values pin again without complaint
    assert!(dunkl(&args).status.success());

    let altered: String = pinned
        .lines()
        .map(|l| {
            if l.starts_with("specfn.") {
                format!(
                    "{} 1.0e9 0\n",
                    l.split(' ').take(3).collect::<Vec<_>>().join(" ")
                )
            } else {
                format!("{l}\n")
            }
        })
        .collect();
    std::fs::write(&frozen, altered).unwrap();
    let o = dunkl(&args);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--force"));

    let mut forced = args.to_vec();
    forced.push("--force");
    assert!(dunkl(&forced).status.success());
    let text = std::fs::read_to_string(&frozen).unwrap();
    assert!(text.contains("# replaced specfn.envelope_second_order"));
    assert!(!text
        .lines()
        .any(|l| l.starts_with("specfn.") && l.contains(" 1.0e9 ")));
}

#[test]
fn verify_fails_against_a_tighter_frozen_constant() {
    let dir = tempfile::tempdir().unwrap();
    let frozen = dir.path().join("frozen.txt");
    let out = dir.path().join("report.json");
    std::fs::write(
        &frozen,
        "specfn.envelope_second_order 0.7 standard 1.0e-3 0\n",
    )
    .unwrap();
    let o = dunkl(&[
        "verify",
        "--suite",
        "specfn",
        "--k",
        "0.7",
        "--frozen",
        path(&frozen),
        "--out",
        path(&out),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout
        .lines()
        .any(|l| l.starts_with("FAIL specfn.envelope_second_order")));

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["config_echo"]["k"], serde_json::json!([0.7]));
    let reports = doc["reports"].as_array().unwrap();
    let env = reports
        .iter()
        .find(|r| r["estimate_id"] == "specfn.envelope_second_order")
        .unwrap();
    assert_eq!(env["status"], "fail");
    assert_eq!(env["frozen_constant"], 1.0e-3);

    let csv = std::fs::read_to_string(out.with_extension("csv")).unwrap();
    assert!(csv.starts_with(
        "estimate_id,k_config,grid_id,empirical_constant,frozen_constant,threshold,status\n"
    ));
    assert_eq!(csv.lines().count(), reports.len() + 1);
}

#[test]
fn tolerance_flag_tightens_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    let frozen = dir.path().join("none.txt");
    let ok = dunkl(&[
        "verify",
        "--suite",
        "specfn",
        "--k",
        "0.3",
        "--frozen",
        path(&frozen),
    ]);
    assert!(
        ok.status.success(),
        "{}",
        String::from_utf8_lossy(&ok.stdout)
    );
    let tight = dunkl(&[
        "verify",
        "--suite",
        "specfn",
        "--k",
        "0.3",
        "--tol",
        "1e-30",
        "--frozen",
        path(&frozen),
    ]);
    assert_eq!(tight.status.code(), Some(1));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    let out = dir.path().join("r.json");
    std::fs::write(&cfg, "# quick run\nsuite = specfn\nk = 1.5\n").unwrap();
    let o = dunkl(&[
        "verify",
        "--config",
        path(&cfg),
        "--frozen",
        path(&dir.path().join("f.txt")),
        "--out",
        path(&out),
    ]);
    assert!(o.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["config_echo"]["k"], serde_json::json!([1.5]));
    assert_eq!(doc["config_echo"]["suites"], serde_json::json!(["specfn"]));

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(
        dunkl(&["verify", "--config", path(&cfg)]).status.code(),
        Some(2)
    );
}
