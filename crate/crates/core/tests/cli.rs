use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use swag_core::io::tables::Table;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn swag(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swag"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

/// Copies the prototype fixture into `dir` with `edit` applied.
fn edited_config(dir: &Path, edit: impl Fn(String) -> String) -> PathBuf {
    for csv in ["force_pressure.csv", "joint_trials.csv"] {
        std::fs::copy(fixtures().join(csv), dir.join(csv)).unwrap();
    }
    let text = std::fs::read_to_string(fixtures().join("prototype.toml")).unwrap();
    let path = dir.join("run.toml");
    std::fs::write(&path, edit(text)).unwrap();
    path
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn stiffness_writes_every_sample_for_each_count() {
    let out = tempfile::tempdir().unwrap();
    let o = swag(
        &["stiffness"],
        &fixtures().join("prototype.toml"),
        out.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = Table::read(&out.path().join("stiffness.csv")).unwrap();
    assert_eq!(t.header, ["n", "theta_deg", "s_normalized"]);
    assert_eq!(t.rows.len(), 4 * 360);
    assert_eq!(t.rows[0], ["1", "0", "0.0320000000"]);
    assert_eq!(t.rows[90][2], "0.516000000");
    assert_eq!(t.rows[180][1..], ["90.0000000", "1.00000000"]);
}

#[test]
fn trace_reads_back_with_exact_payout() {
    let out = tempfile::tempdir().unwrap();
    let o = swag(
        &["simulate"],
        &fixtures().join("prototype.toml"),
        out.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = Table::read(&out.path().join("trace.csv")).unwrap();
    assert_eq!(t.rows.len(), 241);
    let s = t.column("s_m").unwrap();
    let payout = t.column("payout_m").unwrap();
    let factor = t.column("limiting_factor").unwrap();
    for row in &t.rows {
        let s: f64 = row[s].parse().unwrap();
        let p: f64 = row[payout].parse().unwrap();
        assert!((p - 2.0 * s).abs() <= 1e-9 * p.max(1.0));
        assert!(row[factor]
            .parse::<swag_core::deploy::LimitingFactor>()
            .is_ok());
    }
    assert_eq!(t.rows.last().unwrap()[s], "0.600000000");
}

#[test]
fn calibration_output_recovers_fixture_ratios() {
    let out = tempfile::tempdir().unwrap();
    let o = swag(
        &["calibrate"],
        &fixtures().join("prototype.toml"),
        out.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = Table::read(&out.path().join("calibration.csv")).unwrap();
    let c = t.column("ratio_c").unwrap();
    let got: Vec<f64> = t.rows.iter().map(|r| r[c].parse().unwrap()).collect();
    for (est, truth) in got.iter().zip([0.2313, 0.2678, 0.2841]) {
        assert!((est - truth).abs() / truth < 0.02, "{est} vs {truth}");
    }
}

#[test]
fn input_flag_overrides_config_path() {
    let out = tempfile::tempdir().unwrap();
    let other = out.path().join("only_n2.csv");
    let text = std::fs::read_to_string(fixtures().join("force_pressure.csv")).unwrap();
    let kept: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with("1,") && !l.starts_with("3,"))
        .collect();
    std::fs::write(&other, kept.join("\n") + "\n").unwrap();
    let o = swag(
        &["calibrate", "--input", other.to_str().unwrap()],
        &fixtures().join("prototype.toml"),
        out.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = Table::read(&out.path().join("calibration.csv")).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert_eq!(t.rows[0][0], "2");
}

#[test]
fn infeasible_pressure_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = edited_config(dir.path(), |t| {
        t.replace("garment_mass_kg = 0.2", "garment_mass_kg = 5")
    });
    let o = swag(&["pressure"], &cfg, dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let t = Table::read(&dir.path().join("pressure.csv")).unwrap();
    assert_eq!(t.rows.len(), 2);
    assert!(t.rows.iter().all(|r| r[4] == "false"));
}

#[test]
fn over_burst_deployment_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = edited_config(dir.path(), |t| {
        t.replace("burst_pressure_kpa = 60", "burst_pressure_kpa = 25")
    });
    let o = swag(&["simulate"], &cfg, dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let t = Table::read(&dir.path().join("trace.csv")).unwrap();
    let col = t.column("limiting_factor").unwrap();
    assert!(t.rows.iter().any(|r| r[col] == "burst"));
}

#[test]
fn design_writes_infeasible_rows_after_ranked_ones() {
    let out = tempfile::tempdir().unwrap();
    let o = swag(&["design"], &fixtures().join("prototype.toml"), out.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = Table::read(&out.path().join("designs.csv")).unwrap();
    assert_eq!(t.rows.len(), 4 * 3 * 4);
    let feasible = t.column("feasible").unwrap();
    let first_bad = t.rows.iter().position(|r| r[feasible] == "false").unwrap();
    assert!(t.rows[first_bad..]
        .iter()
        .all(|r| r[feasible] == "false" && r[0].is_empty()));
    let jam = t
        .rows
        .iter()
        .find(|r| r[1] == "3" && r[2] == "0.0320000000" && r[3] == "0.120000000")
        .unwrap();
    assert!(jam[t.column("reasons").unwrap()].contains("jam-risk"));
}

#[test]
fn malformed_csv_lists_bad_lines_and_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = edited_config(dir.path(), |t| t);
    let path = dir.path().join("joint_trials.csv");
    let mut text = std::fs::read_to_string(&path).unwrap();
    text.push_str("150,0,oops,0.9\n-5,1,10,0.1\n");
    std::fs::write(&path, text).unwrap();
    let o = swag(&["joint-fit"], &cfg, dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("E_CSV_ROWS"), "{err}");
    assert!(err.contains("line 27") && err.contains("line 28"), "{err}");
    assert!(!dir.path().join("joint_model.csv").exists());
}

#[test]
fn bad_config_value_names_its_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = edited_config(dir.path(), |t| {
        t.replace("ratio_c = 0.2678", "ratio_c = 1.5")
    });
    let o = swag(&["props"], &cfg, dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(
        err.contains("E_CONFIG") && err.contains("transmission.ratio_c"),
        "{err}"
    );
}

#[test]
fn usage_errors_exit_two() {
    let out = tempfile::tempdir().unwrap();
    let o = swag(
        &["levitate"],
        &fixtures().join("prototype.toml"),
        out.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    let missing = out.path().join("absent.toml");
    let o = swag(&["props"], &missing, out.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("E_IO"));
}
