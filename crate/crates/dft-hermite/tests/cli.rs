use std::process::{Command, Output};

use dft_hermite::config::Format;
use dft_hermite::core::{
    build_basis, dot, hermitian_norm, DftOperator, IndexSet, PeriodicVector, PrecisionContext, Real, Scalar,
};
use dft_hermite::export::{parse_entries, parse_table};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dft-hermite")).args(args).env_remove("DFT_HERMITE_DIGITS").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn generate_n8_table_shape() {
    let out = run(&["generate", "--n-dim", "8", "--digits", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(!text.contains('\r'));
    let rows = parse_table(&text, Format::Tsv).unwrap();
    assert_eq!(rows.len(), 8);
    // T_2 has width 3 on k = -3..4, so only k = 4 vanishes.
    let t2 = &rows[2];
    assert_eq!(t2.iter().filter(|e| *e != "0").count(), 7);
    assert_eq!(t2[7], "0");
    assert!(rows.iter().flatten().all(|e| e != "0e0"));
}

#[test]
fn generate_round_trip_reverifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t8.tsv");
    let out = run(&["generate", "-n", "8", "--max-output-digits", "60", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let c = PrecisionContext::new(120).unwrap();
    let entries = parse_entries(&parse_table(&text, Format::Tsv).unwrap(), &c).unwrap();
    let index = IndexSet::new(8).unwrap();
    let vectors: Vec<_> = entries.into_iter().map(|row| PeriodicVector::new(index, row).unwrap()).collect();
    let labels = build_basis::<Real>(8, &c).unwrap();
    let f = DftOperator::<Real>::new(8, &c).unwrap();
    let bound = -(60.0 - 5.0);
    for (i, v) in vectors.iter().enumerate() {
        let image = f.forward_real(v, &c).unwrap();
        let target = v.to_complex(&c).mul_neg_i_pow(labels.eigenvalue(i).power());
        assert!(hermitian_norm(&image.sub(&target)).log10_abs() <= bound);
        for (j, w) in vectors.iter().enumerate() {
            let mut g = dot(v, w).unwrap();
            if i == j {
                g = g.sub(&Real::one(&c));
            }
            assert!(g.log10_abs() <= bound, "pair ({i}, {j})");
        }
    }
}

#[test]
fn generate_formats_agree() {
    let tsv = stdout(&run(&["generate", "-n", "6"]));
    let csv = stdout(&run(&["generate", "-n", "6", "--format", "csv"]));
    let js = stdout(&run(&["generate", "-n", "6", "--format", "json"]));
    let rows = parse_table(&tsv, Format::Tsv).unwrap();
    assert_eq!(rows, parse_table(&csv, Format::Csv).unwrap());
    assert_eq!(rows, parse_table(&js, Format::Json).unwrap());
    let value: Value = serde_json::from_str(&js).unwrap();
    assert_eq!(value["schema_version"], 1);
}

#[test]
fn generate_sign_toggle_only_flips_rows() {
    let plain = parse_table(&stdout(&run(&["generate", "-n", "11"])), Format::Tsv).unwrap();
    let raw = parse_table(&stdout(&run(&["generate", "-n", "11", "--no-sign-convention"])), Format::Tsv).unwrap();
    let negate = |e: &String| {
        if e == "0" {
            e.clone()
        } else if let Some(s) = e.strip_prefix('-') {
            s.to_string()
        } else {
            format!("-{e}")
        }
    };
    for (p, r) in plain.iter().zip(&raw) {
        assert!(p == r || p.iter().map(negate).collect::<Vec<_>>() == *r);
    }
}

#[test]
fn insufficient_precision_is_reported() {
    let out = run(&["generate", "-n", "128", "--digits", "40", "--max-output-digits", "30"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nsufficient precision"));
    assert!(out.stdout.is_empty());
}

#[test]
fn printed_digits_survive_more_precision() {
    let low = run(&["generate", "-n", "64", "--digits", "40", "--max-output-digits", "30"]);
    let high = run(&["generate", "-n", "64", "--digits", "80", "--max-output-digits", "30"]);
    assert_eq!(low.status.code(), Some(0));
    assert_eq!(low.stdout, high.stdout);
}

#[test]
fn invalid_configuration_exits_with_usage_status() {
    assert_eq!(run(&["generate", "-n", "8", "--digits", "20"]).status.code(), Some(2));
    assert_eq!(run(&["generate", "-n", "8", "--digits", "50", "--max-output-digits", "45"]).status.code(), Some(2));
    assert_eq!(run(&["generate"]).status.code(), Some(2));
    assert_eq!(run(&["generate", "-n", "1"]).status.code(), Some(2));
}

#[test]
fn verify_n5_passes() {
    let out = run(&["verify", "-n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("result                     ok"));
}

#[test]
fn verify_both_reports_oracle_deviation() {
    let out = run(&["verify", "-n", "8", "--digits", "100", "--construction", "both", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["constructions"].as_array().unwrap().len(), 2);
    let deviation = &report["oracle_deviation"]["log10"];
    assert!(deviation.is_null() || deviation.as_f64().unwrap() <= -60.0);
    assert_eq!(report["constructions"][0]["expected_dims"], serde_json::json!([3, 2, 2, 1]));
}

#[test]
fn verify_precision_loss_at_n256() {
    let out = run(&["verify", "-n", "256", "--digits", "500", "--track-error", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let loss = report["constructions"][0]["precision_loss_digits"].as_f64().unwrap();
    assert!((80.0..=140.0).contains(&loss), "loss {loss}");
}

#[test]
fn environment_sets_default_digits() {
    let out = Command::new(env!("CARGO_BIN_EXE_dft-hermite"))
        .args(["verify", "-n", "6", "--format", "json"])
        .env("DFT_HERMITE_DIGITS", "90")
        .output()
        .unwrap();
    assert_eq!(json(&out)["digits"], 90);
    let out = Command::new(env!("CARGO_BIN_EXE_dft-hermite"))
        .args(["verify", "-n", "6", "--format", "json", "--digits", "70"])
        .env("DFT_HERMITE_DIGITS", "90")
        .output()
        .unwrap();
    assert_eq!(json(&out)["digits"], 70);
    let bad = Command::new(env!("CARGO_BIN_EXE_dft-hermite"))
        .args(["verify", "-n", "6"])
        .env("DFT_HERMITE_DIGITS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "n-dim = 9\ndigits = 80\nformat = \"json\"\n").unwrap();
    let out = run(&["verify", "--config", path.to_str().unwrap()]);
    let report = json(&out);
    assert_eq!((report["n_dim"].as_u64(), report["digits"].as_u64()), (Some(9), Some(80)));
    let out = run(&["verify", "--config", path.to_str().unwrap(), "-n", "10"]);
    assert_eq!(json(&out)["n_dim"], 10);
    std::fs::write(&path, "dimension = 9\n").unwrap();
    assert_eq!(run(&["verify", "--config", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn convergence_table_is_monotone() {
    let out = run(&["convergence", "--orders", "0-3", "--dims", "64,128", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    for row in report["rows"].as_array().unwrap() {
        assert_eq!(row["monotone"], true);
        let ratio = row["ratios"][0].as_f64().unwrap();
        assert!((1.6..=2.4).contains(&ratio));
    }
    let first = &report["rows"][0]["errors"];
    assert!(first.as_array().unwrap().iter().all(|e| e.as_f64().unwrap() < 0.1));
    let tsv = stdout(&run(&["convergence", "--orders", "0,1", "--dims", "32,64"]));
    assert_eq!(tsv.lines().count(), 3);
}

#[test]
fn seeds_tables() {
    let n7 = json(&run(&["seeds", "-n", "7", "--format", "json"]));
    assert!(n7["s"][6].as_str().unwrap().starts_with("7.000"));
    assert!(n7["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    let n8 = json(&run(&["seeds", "-n", "8", "--format", "json"]));
    let u4: Vec<&str> = n8["u"][4].as_array().unwrap().iter().map(|e| e.as_str().unwrap()).collect();
    assert!(u4.iter().all(|e| *e == u4[0]));
    assert!(u4[0].starts_with("1.767766952966368811002110905"));
    let n9 = json(&run(&["seeds", "-n", "9", "--format", "json"]));
    assert_eq!(n9["t"][4], "0");
    let text = run(&["seeds", "-n", "9"]);
    assert_eq!(text.status.code(), Some(0));
    assert!(!stdout(&text).contains("VIOLATION"));
}
