//! End-to-end tests driving the compiled binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use entrotree::samples;

const EXE: &str = env!("CARGO_BIN_EXE_entrotree");

fn write_table3(dir: &Path) -> (String, String) {
    let csv = dir.join("table3.csv");
    let schema = dir.join("table3.schema");
    fs::write(&csv, samples::TABLE3_CSV).unwrap();
    fs::write(&schema, samples::TABLE3_SCHEMA).unwrap();
    (
        csv.to_str().unwrap().to_string(),
        schema.to_str().unwrap().to_string(),
    )
}

fn write_table1(dir: &Path) -> (String, String, String) {
    let csv = dir.join("table1.csv");
    let schema = dir.join("table1.schema");
    let hier = dir.join("region.hier");
    fs::write(&csv, samples::TABLE1_CSV).unwrap();
    fs::write(&schema, samples::TABLE1_SCHEMA).unwrap();
    fs::write(&hier, samples::REGION_HIERARCHY).unwrap();
    (
        csv.to_str().unwrap().to_string(),
        schema.to_str().unwrap().to_string(),
        hier.to_str().unwrap().to_string(),
    )
}

fn run(args: &[&str]) -> Output {
    Command::new(EXE).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn score_prints_twelve_decimal_columns() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, schema) = write_table3(dir.path());
    let out = run(&["score", "--data", &csv, "--schema", &schema]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("I(income_level) = 1.565653111646"), "{text}");
    assert!(
        text.contains("avg_edu_level: E=0.447625910261 Gain=1.118027201385"),
        "{text}"
    );
    assert!(text.contains("country: E="), "{text}");
}

#[test]
fn baseline_induction_never_tests_country() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, schema) = write_table3(dir.path());
    let out = run(&["induce", "--data", &csv, "--schema", &schema]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("[avg_edu_level]"), "{text}");
    assert!(!text.contains("[country]"), "{text}");
}

#[test]
fn priority_induction_roots_at_country() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, schema) = write_table3(dir.path());
    let out = run(&[
        "induce", "--data", &csv, "--schema", &schema, "--mode", "priority", "--priority",
        "country",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("[country]\n"), "{text}");
    assert_eq!(text.matches("  country=").count(), 4, "{text}");
    assert!(text.contains("IF country=Cuba THEN Low [3, 1.000]"), "{text}");
}

#[test]
fn unknown_priority_attribute_fails_with_one_diagnostic_line() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, schema) = write_table3(dir.path());
    let out = run(&[
        "induce", "--data", &csv, "--schema", &schema, "--mode", "priority", "--priority",
        "nosuchattr",
    ]);
    assert!(!out.status.success());
    let err = stderr(&out);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("nosuchattr"), "{err}");
}

#[test]
fn query_generalizes_the_region_table() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, schema, hier) = write_table1(dir.path());
    let qfile = dir.path().join("q.dmql");
    fs::write(&qfile, samples::EXAMPLE_2_1).unwrap();
    let out = run(&[
        "query",
        "--file",
        qfile.to_str().unwrap(),
        "--data",
        &format!("edu_dataset={csv}"),
        "--schema",
        &format!("edu_dataset={schema}"),
        "--hierarchy",
        &format!("edu_dataset={hier}"),
        "--sum",
        "family_income_per_year",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.starts_with("avg_edu_level,Country,family_income_per_year,count\n"),
        "{text}"
    );
    assert!(text.contains("Graduate school,China,114000,3"), "{text}");
    assert!(text.contains("USA,120000,4"), "{text}");
    assert_eq!(text.lines().count(), 11, "{text}"); // header + 10 rows
}

#[test]
fn query_builds_the_priority_tree() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, schema) = write_table3(dir.path());
    let out = run(&[
        "query",
        samples::EXAMPLE_4_1,
        "--data",
        &format!("edu_dataset={csv}"),
        "--schema",
        &format!("edu_dataset={schema}"),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("[country]\n"), "{text}");
    assert_eq!(text.matches("  country=").count(), 4, "{text}");
    assert!(text.contains("requested country: baseline=pruned priority=present"), "{text}");
}

#[test]
fn catalog_directory_supplies_named_datasets() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("edu_dataset.csv"), samples::TABLE3_CSV).unwrap();
    fs::write(dir.path().join("edu_dataset.schema"), samples::TABLE3_SCHEMA).unwrap();
    let out = Command::new(EXE)
        .args(["query", samples::EXAMPLE_4_1])
        .env("ENTROTREE_CATALOG", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("[country]\n"));
}

#[test]
fn malformed_query_reports_its_position() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, schema) = write_table3(dir.path());
    let out = run(&[
        "query",
        "classify T in relevance to c",
        "--data",
        &format!("t={csv}"),
        "--schema",
        &format!("t={schema}"),
    ]);
    assert!(!out.status.success());
    let err = stderr(&out);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("1:29"), "{err}");
}

#[test]
fn generalize_rolls_regions_up_to_countries() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, schema, hier) = write_table1(dir.path());
    let out = run(&[
        "generalize",
        "--data",
        &csv,
        "--schema",
        &schema,
        "--hierarchy",
        &hier,
        "--sum",
        "family_income_per_year",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("China"), "{text}");
    assert!(!text.contains("China.south"), "{text}");
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, schema) = write_table3(dir.path());
    let args = [
        "induce", "--data", &csv, "--schema", &schema, "--mode", "priority", "--priority",
        "country", "--merge", "--balance",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
}
