//! Command-level contracts: exit codes, error messages, file formats.

use std::path::{Path, PathBuf};
use std::process::Command;

fn blrain() -> Command {
    Command::new(env!("CARGO_BIN_EXE_blrain"))
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("blrain_cli_contracts").join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_params(dir: &Path) -> PathBuf {
    let path = dir.join("params.json");
    std::fs::write(
        &path,
        r#"{
  "units": { "time": "hours", "depth": "mm" },
  "months": [
    { "month": 1, "variant": "BLRPR_X", "lambda": 0.022, "iota": 0.164,
      "alpha": 2.075, "nu": 0.413842, "kappa": 0.996, "phi": 0.042 }
  ]
}"#,
    )
    .unwrap();
    path
}

#[test]
fn missing_data_file_exits_2_and_names_path() {
    let dir = workdir("missing");
    let out = blrain()
        .args(["stats", "--data", "nope_not_here.csv", "--months", "1"])
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("nope_not_here.csv"), "stderr: {stderr}");
}

#[test]
fn malformed_data_reports_line_number() {
    let dir = workdir("malformed");
    let data = dir.join("bad.csv");
    std::fs::write(&data, "timestamp,depth_mm\n2001-01-01T00:00:00,0.5\nnot a line\n").unwrap();
    let out = blrain()
        .args(["stats", "--months", "1"])
        .arg("--data")
        .arg(&data)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 3"), "stderr: {stderr}");
}

#[test]
fn simulate_output_is_loadable_and_month_scoped() {
    let dir = workdir("simload");
    let params = write_params(&dir);
    let status = blrain()
        .args(["simulate", "--months", "1", "--years", "2", "--replicates", "1", "--seed", "5"])
        .arg("--params")
        .arg(&params)
        .arg("--out")
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    let record = blrain::stats::load_series(dir.join("sim_r000.csv")).unwrap();
    // two calendar years on the 5-minute lattice
    assert_eq!(record.len(), (365 + 365) * 288);
    // only January is simulated; February is missing
    let jan = record.month_slots(2001, 1).unwrap();
    assert!(jan.iter().all(Option::is_some));
    let feb = record.month_slots(2001, 2).unwrap();
    assert!(feb.iter().all(Option::is_none));
}

#[test]
fn fit_respects_alpha_floor() {
    let dir = workdir("alphafloor");
    let params = write_params(&dir);
    // generate a short record, then fit with alpha_min 2
    assert!(blrain()
        .args(["simulate", "--months", "1", "--years", "8", "--replicates", "1", "--seed", "9"])
        .arg("--params")
        .arg(&params)
        .arg("--out")
        .arg(&dir)
        .status()
        .unwrap()
        .success());
    let out = blrain()
        .args(["fit", "--months", "1", "--alpha-min", "2", "--model", "BLRPR_X", "--seed", "3"])
        .arg("--data")
        .arg(dir.join("sim_r000.csv"))
        .arg("--out")
        .arg(dir.join("fit"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("fit/fit_BLRPR_X_m01.json")).unwrap())
            .unwrap();
    let alpha = doc["result"]["params"]["alpha"].as_f64().unwrap();
    assert!(alpha >= 2.0, "fitted alpha {alpha} below the floor");
}

#[test]
fn unknown_model_is_an_input_error() {
    let out = blrain().args(["fit", "--model", "BLXYZ"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

fn write_full_year_params(dir: &Path) -> PathBuf {
    // the January row replicated for all twelve months keeps the fixture
    // small; per-month distinctions are irrelevant to these contracts
    let months: Vec<String> = (1..=12)
        .map(|m| {
            format!(
                r#"{{ "month": {m}, "variant": "BLRPR_X", "lambda": 0.022, "iota": 0.164,
                     "alpha": 2.075, "nu": 0.413842, "kappa": 0.996, "phi": 0.042 }}"#
            )
        })
        .collect();
    let path = dir.join("params12.json");
    std::fs::write(
        &path,
        format!(
            r#"{{ "units": {{ "time": "hours", "depth": "mm" }}, "months": [{}] }}"#,
            months.join(",")
        ),
    )
    .unwrap();
    path
}

#[test]
fn stats_on_two_synthetic_years_yields_twelve_monthly_rows() {
    let dir = workdir("twelve");
    let params = write_full_year_params(&dir);
    assert!(blrain()
        .args(["simulate", "--years", "2", "--replicates", "1", "--seed", "12"])
        .arg("--params")
        .arg(&params)
        .arg("--out")
        .arg(&dir)
        .status()
        .unwrap()
        .success());
    let out = blrain()
        .args(["stats", "--seed", "12"])
        .arg("--data")
        .arg(dir.join("sim_r000.csv"))
        .arg("--out")
        .arg(dir.join("stats"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.join("stats/stats_summary.csv")).unwrap();
    let months: std::collections::BTreeSet<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("month"))
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(months.len(), 12, "expected rows for all 12 months");
}

#[test]
fn partial_month_failure_exits_1() {
    let dir = workdir("partial");
    let params = write_params(&dir);
    assert!(blrain()
        .args(["simulate", "--months", "1", "--years", "3", "--replicates", "1", "--seed", "6"])
        .arg("--params")
        .arg(&params)
        .arg("--out")
        .arg(&dir)
        .status()
        .unwrap()
        .success());
    // month 2 has no data at all, so stats on months 1,2 is a partial success
    let out = blrain()
        .args(["stats", "--months", "1,2"])
        .arg("--data")
        .arg(dir.join("sim_r000.csv"))
        .arg("--out")
        .arg(dir.join("stats"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("month 2"));
    // month 1 results still produced
    assert!(dir.join("stats/stats.json").exists());
}

#[test]
fn fit_compares_both_models_side_by_side() {
    let dir = workdir("twomodels");
    let params = write_params(&dir);
    assert!(blrain()
        .args(["simulate", "--months", "1", "--years", "10", "--replicates", "1", "--seed", "13"])
        .arg("--params")
        .arg(&params)
        .arg("--out")
        .arg(&dir)
        .status()
        .unwrap()
        .success());
    let out = blrain()
        .args([
            "fit", "--months", "1", "--model", "BLIPR", "--model", "BLRPR_X", "--seed", "13",
        ])
        .arg("--data")
        .arg(dir.join("sim_r000.csv"))
        .arg("--out")
        .arg(dir.join("fit"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("month,BLIPR,BLRPR_X"), "table header missing: {stdout}");
    let summary = std::fs::read_to_string(dir.join("fit/fit_summary.csv")).unwrap();
    assert!(summary.lines().any(|l| l.starts_with("1,BLIPR,")));
    assert!(summary.lines().any(|l| l.starts_with("1,BLRPR_X,")));
    assert!(dir.join("fit/params_BLIPR.json").exists());
    assert!(dir.join("fit/params_BLRPR_X.json").exists());
}

#[test]
fn extremes_envelope_contains_self_simulated_observations() {
    let dir = workdir("envelope");
    let params = write_params(&dir);
    // observed record: one replicate drawn from the very same parameters
    assert!(blrain()
        .args(["simulate", "--months", "1", "--years", "10", "--replicates", "1", "--seed", "31"])
        .arg("--params")
        .arg(&params)
        .arg("--out")
        .arg(&dir)
        .status()
        .unwrap()
        .success());
    let out = blrain()
        .args(["extremes", "--months", "1", "--replicates", "60", "--seed", "77"])
        .arg("--data")
        .arg(dir.join("sim_r000.csv"))
        .arg("--params")
        .arg(&params)
        .arg("--out")
        .arg(dir.join("ext"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for ts in ["5min", "1h", "6h", "24h"] {
        let text = std::fs::read_to_string(dir.join(format!("ext/extremes_{ts}.csv"))).unwrap();
        let mut inside = 0usize;
        let mut total = 0usize;
        let mut last_median = f64::NEG_INFINITY;
        for line in text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("rank")) {
            let f: Vec<&str> = line.split(',').collect();
            let (obs, lo, med, hi): (f64, f64, f64, f64) = (
                f[4].parse().unwrap(),
                f[5].parse().unwrap(),
                f[6].parse().unwrap(),
                f[7].parse().unwrap(),
            );
            assert!(med >= last_median, "{ts}: medians not monotone");
            last_median = med;
            total += 1;
            if obs >= lo && obs <= hi {
                inside += 1;
            }
        }
        assert!(total >= 10);
        assert!(
            inside as f64 >= 0.9 * total as f64,
            "{ts}: observed inside envelope at only {inside}/{total} points"
        );
    }
}

#[test]
fn validate_handles_deliberately_wrong_params_without_crashing() {
    let dir = workdir("wrongparams");
    let params = write_params(&dir);
    assert!(blrain()
        .args(["simulate", "--months", "1", "--years", "4", "--replicates", "1", "--seed", "2"])
        .arg("--params")
        .arg(&params)
        .arg("--out")
        .arg(&dir)
        .status()
        .unwrap()
        .success());
    // wrong parameters: ten times the storm rate and depth scale
    let wrong = dir.join("wrong.json");
    std::fs::write(
        &wrong,
        r#"{
  "units": { "time": "hours", "depth": "mm" },
  "months": [
    { "month": 1, "variant": "BLRPR_X", "lambda": 0.22, "iota": 1.64,
      "alpha": 2.075, "nu": 0.413842, "kappa": 0.996, "phi": 0.042 }
  ]
}"#,
    )
    .unwrap();
    let out = blrain()
        .args(["validate", "--months", "1", "--replicates", "10", "--seed", "4"])
        .arg("--data")
        .arg(dir.join("sim_r000.csv"))
        .arg("--params")
        .arg(&wrong)
        .arg("--out")
        .arg(dir.join("val"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.join("val/validate.csv")).unwrap();
    // observed and model columns populated for every moment property and
    // every wet/dry property at every timescale
    for property in ["mean_1h", "cv_5min", "skew_24h", "p_dry_1h", "p_ww_6h", "p_dd_5min"] {
        let row = text
            .lines()
            .find(|l| l.starts_with(&format!("1,{property},")))
            .unwrap_or_else(|| panic!("missing row for {property}"));
        let fields: Vec<&str> = row.split(',').collect();
        assert!(!fields[2].is_empty() && !fields[3].is_empty(), "row: {row}");
        let (obs, model): (f64, f64) = (fields[2].parse().unwrap(), fields[3].parse().unwrap());
        assert!(obs.is_finite() && model.is_finite());
    }
}
