//! End-to-end tests of the `calmetrics` binary: file ingestion, output
//! formats, exit codes and the command-level calibration identities.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_calmetrics"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

const FOUR_ROWS: &str = "label,score\n1,0.9\n0,0.8\n1,0.4\n0,0.2\n";

#[test]
fn eval_reports_the_expected_areas() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(dir.path(), "four.csv", FOUR_ROWS);
    let out = run(&["eval", file.to_str().unwrap()]);
    let json: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(json["n"], 4);
    assert_eq!(json["pi"], 0.5);
    assert!((json["values"]["auc_roc"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    assert!((json["values"]["auc_pr"].as_f64().unwrap() - 5.0 / 6.0).abs() < 1e-12);
    // No --pi0: no calibrated values, no pi0 key.
    assert!(json.get("pi0").is_none());
    assert!(json["values"].get("auc_pr_c").is_none());
}

#[test]
fn eval_with_pi0_at_the_file_prior_matches_uncalibrated() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(dir.path(), "four.csv", FOUR_ROWS);
    let out = run(&["eval", file.to_str().unwrap(), "--pi0", "0.5"]);
    let json: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    for (cal, plain) in [
        ("precision_c", "precision"),
        ("f1_c", "f1"),
        ("best_f1_c", "best_f1"),
        ("auc_pr_c", "auc_pr"),
        ("auc_pr_gain_c", "auc_pr_gain"),
    ] {
        assert_eq!(json["values"][cal], json["values"][plain], "{cal}");
    }
}

/// Two groups identical except positives are tripled in group b: prior
/// invariance at the CLI level. Negatives above tau make the uncalibrated
/// precision move.
#[test]
fn grouped_eval_shows_prior_invariance() {
    let group_a = [
        (1, 0.9),
        (0, 0.8),
        (1, 0.7),
        (0, 0.6),
        (1, 0.4),
        (0, 0.3),
        (0, 0.2),
    ];
    let mut rows = String::from("label,score,group\n");
    for (label, score) in group_a {
        rows.push_str(&format!("{label},{score},a\n"));
    }
    for (label, score) in group_a {
        let copies = if label == 1 { 3 } else { 1 };
        for _ in 0..copies {
            rows.push_str(&format!("{label},{score},b\n"));
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(dir.path(), "grouped.csv", &rows);
    let out = run(&["eval", file.to_str().unwrap(), "--pi0", "0.2", "--by-group"]);
    let json: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let reports = json.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["group"], "a");
    assert_eq!(reports[1]["group"], "b");
    // pi differs per group, pi0 is shared.
    assert_ne!(reports[0]["pi"], reports[1]["pi"]);
    assert_eq!(reports[0]["pi0"], reports[1]["pi0"]);
    for cal in [
        "precision_c",
        "f1_c",
        "best_f1_c",
        "auc_pr_c",
        "auc_pr_gain_c",
    ] {
        let a = reports[0]["values"][cal].as_f64().unwrap();
        let b = reports[1]["values"][cal].as_f64().unwrap();
        assert!((a - b).abs() <= 1e-9, "{cal}: {a} vs {b}");
    }
    let pa = reports[0]["values"]["precision"].as_f64().unwrap();
    let pb = reports[1]["values"]["precision"].as_f64().unwrap();
    assert!((pa - pb).abs() > 1e-6, "uncalibrated precision must move");
}

#[test]
fn eval_csv_output_has_one_row_per_group() {
    let rows = "label,score,group\n1,0.9,a\n0,0.4,a\n1,0.8,b\n0,0.3,b\n";
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(dir.path(), "two_groups.csv", rows);
    let out = run(&["eval", file.to_str().unwrap(), "--by-group", "--csv"]);
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("group,n,n_pos,pi,pi0,"));
    assert!(lines[1].starts_with("a,2,1,0.5,"));
    assert!(lines[2].starts_with("b,2,1,0.5,"));
}

#[test]
fn parse_error_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(
        dir.path(),
        "bad.csv",
        "label,score\n1,0.9\n0,0.8\n1,0.7\n0,0.6\n1,0.5\n2,0.4\n",
    );
    let out = run(&["eval", file.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 3);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 7"), "stderr: {stderr}");
    assert!(stderr.contains('2'), "stderr: {stderr}");
}

#[test]
fn exit_codes_distinguish_failure_classes() {
    let dir = tempfile::tempdir().unwrap();
    let one_class = write_file(dir.path(), "onec.csv", "label,score\n1,0.9\n1,0.8\n");
    let four = write_file(dir.path(), "four.csv", FOUR_ROWS);

    // Missing file: I/O.
    assert_eq!(exit_code(&run(&["eval", "missing.csv"])), 1);
    // Usage error: unknown flag (clap).
    assert_eq!(
        exit_code(&bin().arg("eval").arg("--bogus").output().unwrap()),
        2
    );
    // Degenerate data for a curve metric.
    assert_eq!(
        exit_code(&run(&[
            "eval",
            one_class.to_str().unwrap(),
            "--metrics",
            "auc_pr"
        ])),
        4
    );
    // Invalid reference prior.
    assert_eq!(
        exit_code(&run(&["eval", four.to_str().unwrap(), "--pi0", "1.5"])),
        5
    );
    // Unknown metric name.
    assert_eq!(
        exit_code(&run(&[
            "eval",
            four.to_str().unwrap(),
            "--metrics",
            "auc_banana"
        ])),
        5
    );
}

#[test]
fn curve_on_a_perfect_file_has_unit_area() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(
        dir.path(),
        "perfect.csv",
        "label,score\n1,0.9\n1,0.8\n0,0.2\n0,0.1\n",
    );
    for kind in ["roc", "pr", "prgain"] {
        let out = run(&["curve", file.to_str().unwrap(), "--kind", kind]);
        let text = stdout_of(&out);
        assert!(text.contains("# auc: 1\n"), "{kind}: {text}");
    }
}

#[test]
fn pr_curve_with_pi0_at_the_prior_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(dir.path(), "four.csv", FOUR_ROWS);
    let plain = stdout_of(&run(&["curve", file.to_str().unwrap(), "--kind", "pr"]));
    let calibrated = stdout_of(&run(&[
        "curve",
        file.to_str().unwrap(),
        "--kind",
        "pr",
        "--pi0",
        "0.5",
    ]));
    assert_eq!(plain, calibrated);
}

#[test]
fn roc_curve_rejects_pi0() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(dir.path(), "four.csv", FOUR_ROWS);
    let out = run(&[
        "curve",
        file.to_str().unwrap(),
        "--kind",
        "roc",
        "--pi0",
        "0.5",
    ]);
    assert_eq!(exit_code(&out), 5);
}

/// Gain curves collapse towards the top-right corner on heavily imbalanced
/// data and spread over the unit square on balanced data.
#[test]
fn prgain_geometry_reflects_the_prior() {
    let dir = tempfile::tempdir().unwrap();
    let balanced = dir.path().join("balanced.csv");
    let imbalanced = dir.path().join("imbalanced.csv");
    stdout_of(&run(&[
        "synth",
        "--n",
        "20000",
        "--pi",
        "0.5",
        "--mu1",
        "2.8",
        "--out",
        balanced.to_str().unwrap(),
    ]));
    stdout_of(&run(&[
        "synth",
        "--n",
        "20000",
        "--pi",
        "0.003",
        "--mu1",
        "2.8",
        "--out",
        imbalanced.to_str().unwrap(),
    ]));

    let gain_xs = |path: &Path| -> Vec<f64> {
        let text = stdout_of(&run(&["curve", path.to_str().unwrap(), "--kind", "prgain"]));
        text.lines()
            .skip_while(|l| l.starts_with('#'))
            .skip(1)
            .map(|l| l.split(',').next().unwrap().parse().unwrap())
            .collect()
    };
    let frac_high = |xs: &[f64]| xs.iter().filter(|&&x| x > 0.8).count() as f64 / xs.len() as f64;
    let min = |xs: &[f64]| xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let balanced_xs = gain_xs(&balanced);
    let imbalanced_xs = gain_xs(&imbalanced);
    // Balanced: the curve starts at recall gain 0 and spreads over the
    // square. Imbalanced: already the first qualifying point sits far right
    // and almost everything crowds the x ~ 1 edge.
    assert!(
        min(&balanced_xs) < 0.1,
        "balanced gain curve should reach x ~ 0: min {}",
        min(&balanced_xs)
    );
    assert!(
        min(&imbalanced_xs) > 0.5,
        "imbalanced gain curve should start far right: min {}",
        min(&imbalanced_xs)
    );
    assert!(
        frac_high(&imbalanced_xs) > frac_high(&balanced_xs) + 0.3,
        "collapse contrast too weak: {} vs {}",
        frac_high(&imbalanced_xs),
        frac_high(&balanced_xs)
    );
}

#[test]
fn oracle_with_matching_prior_reports_zero_std() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(dir.path(), "four.csv", FOUR_ROWS);
    let out = run(&[
        "oracle",
        file.to_str().unwrap(),
        "--pi0",
        "0.5",
        "--runs",
        "8",
    ]);
    let json: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(json["std"], 0.0);
    assert_eq!(json["mean"], json["closed_form"]);
    assert_eq!(json["achieved_pi"], 0.5);
    assert_eq!(json["runs"], 8);
}

#[test]
fn oracle_closed_form_lands_near_the_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("synth.csv");
    stdout_of(&run(&[
        "synth",
        "--n",
        "20000",
        "--pi",
        "0.05",
        "--out",
        file.to_str().unwrap(),
    ]));
    let out = run(&[
        "oracle",
        file.to_str().unwrap(),
        "--pi0",
        "0.3",
        "--runs",
        "200",
    ]);
    let json: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let mean = json["mean"].as_f64().unwrap();
    let std = json["std"].as_f64().unwrap();
    let closed = json["closed_form"].as_f64().unwrap();
    let band = 3.0 * std / 200f64.sqrt() + 0.01;
    assert!(
        (closed - mean).abs() <= band,
        "{closed} vs {mean} +/- {band}"
    );
}

#[test]
fn rankcorr_matches_the_committed_golden_matrix() {
    let pool_a = fixture("pool_a.csv");
    let pool_b = fixture("pool_b.csv");
    let golden = std::fs::read_to_string(fixture("rankcorr_golden.csv")).unwrap();
    let out = run(&[
        "rankcorr",
        pool_a.to_str().unwrap(),
        pool_b.to_str().unwrap(),
    ]);
    assert_eq!(stdout_of(&out), golden);
}

#[test]
fn report_json_round_trips_through_the_library_type() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(dir.path(), "four.csv", FOUR_ROWS);
    let text = stdout_of(&run(&["eval", file.to_str().unwrap(), "--pi0", "0.4"]));
    let report = calmetrics::MetricReport::from_json(&text).unwrap();
    assert_eq!(report.to_json().trim_end(), text.trim_end());
}
