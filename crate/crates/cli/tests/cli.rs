use std::process::{Command, Output};

use serde_json::{Map, Value};

fn umoments(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_umoments"))
        .args(args)
        .env_remove("UM_THREADS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = umoments(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn is_exact(s: &str) -> bool {
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    match s.split_once('/') {
        Some((num, den)) => digits(num.strip_prefix('-').unwrap_or(num)) && digits(den),
        None => false,
    }
}

#[test]
fn m_ratio_json_example() {
    let v = json(&[
        "m-ratio", "--k", "1", "--r", "2", "--N", "2", "--format", "json",
    ]);
    assert_eq!(v["value"], "1/3");
    assert_eq!(v["i_power"], 2);
    assert_eq!(v["convention"], "i-normalized");
    assert_eq!(v["N"], 2);
}

#[test]
fn integers_keep_their_denominator() {
    let v = json(&["moment-zero", "--k", "2", "--N", "2"]);
    assert_eq!(v["value"], "20/1");
    assert_eq!(v["approx"], 20.0);
}

#[test]
fn domain_error_wins_over_missing_size() {
    let out = umoments(&["m-ratio", "--k", "1", "--r", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("requires r <= 2k"));
}

#[test]
fn usage_errors_exit_with_one_and_name_the_flag() {
    let out = umoments(&["m-ratio", "--k", "1", "--r", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--N"));

    let out = umoments(&["m-ratio", "--k", "x", "--r", "2", "--N", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--k"));

    let out = umoments(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn other_exit_codes() {
    assert_eq!(
        umoments(&["v-moment", "--k", "1", "--h", "2", "--N", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(umoments(&["ratfunc", "--r", "201"]).status.code(), Some(4));
    assert_eq!(umoments(&["--help"]).status.code(), Some(0));
}

#[test]
fn csv_sweep_has_one_row_per_valid_pair() {
    let out = umoments(&[
        "m-ratio",
        "--k-range",
        "1..3",
        "--r-range",
        "0..4",
        "--N",
        "5",
        "--format",
        "csv",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        [
            "kind",
            "k",
            "r",
            "N",
            "value",
            "approx",
            "i_power",
            "convention"
        ]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    // k=1: r=0..2, k=2 and k=3: r=0..4
    assert_eq!(rows.len(), 3 + 5 + 5);
    for row in &rows {
        if &row[2] == "1" {
            assert_eq!(&row[4], "5/2");
        }
    }
}

#[test]
fn rational_functions_as_coefficient_arrays() {
    let v = json(&["v-ratfunc", "--h", "1"]);
    assert_eq!(v["numerator"], serde_json::json!(["1/16"]));
    assert_eq!(v["denominator"], serde_json::json!(["-1/4", "0/1", "1/1"]));
    assert_eq!(v["leading_constant"], v["scaled_limit"]);
    let v = json(&["ratfunc", "--r", "2"]);
    assert_eq!(v["limit_at_infinity"], "1/4");
    assert_eq!(v["even"], true);
}

#[test]
fn hypergeom_defaults_to_the_confluent_series() {
    let v = json(&[
        "hypergeom",
        "--k",
        "1",
        "--N",
        "2",
        "--max-degree",
        "3",
        "--z",
        "1/2",
    ]);
    assert_eq!(v["layers"], serde_json::json!(["1/1", "1/1", "1/6", "0/1"]));
    // 1 + 1/2 + 1/24
    assert_eq!(v["value"], "37/24");
    let out = umoments(&[
        "hypergeom",
        "--upper",
        "1",
        "--lower",
        "-1",
        "--N",
        "2",
        "--max-degree",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let v = json(&["selftest"]);
    let suites = v.as_array().unwrap();
    assert!(!suites.is_empty());
    assert!(suites.iter().all(|s| s["passed"] == true), "{v:#}");
}

#[test]
fn mc_verify_is_reproducible_across_thread_counts() {
    let args = |threads: &'static str| {
        [
            "mc-verify",
            "--k",
            "1",
            "--r",
            "1",
            "--N",
            "3",
            "--samples",
            "4000",
            "--seed",
            "42",
            "--threads",
            threads,
        ]
    };
    let one = umoments(&args("1"));
    let three = umoments(&args("3"));
    assert!(one.status.success(), "{}", stderr(&one));
    assert_eq!(one.stdout, three.stdout);
    let v: Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["exact"], "3/2");
    assert_eq!(v["seed"], 42);
    assert_eq!(v["within_4se"], true);
}

fn check_record(schema: &Value, def: &str, record: &Map<String, Value>) {
    let def = &schema["$defs"][def];
    let props = def["properties"].as_object().unwrap();
    for key in record.keys() {
        assert!(props.contains_key(key), "field {key} is not in the schema");
    }
    for key in def["required"].as_array().unwrap() {
        assert!(record.contains_key(key.as_str().unwrap()), "missing {key}");
    }
    for (key, value) in record {
        let exact_ref = serde_json::json!("#/$defs/exact");
        let prop = &props[key];
        if prop["$ref"] == exact_ref {
            assert!(is_exact(value.as_str().unwrap()), "{key} = {value}");
        }
        if prop["$ref"] == "#/$defs/exactArray" {
            for item in value.as_array().unwrap() {
                assert!(is_exact(item.as_str().unwrap()), "{key} item {item}");
            }
        }
    }
}

#[test]
fn outputs_follow_the_documented_schema() {
    let schema: Value =
        serde_json::from_str(include_str!("../../../docs/output-schema.json")).unwrap();
    let runs: &[&[&str]] = &[
        &["m-ratio", "--k", "2", "--r", "3", "--N", "4"],
        &["m-ratio-limit", "--k", "2", "--r", "4"],
        &["m-ratio-limit", "--k-range", "1..2", "--r", "1"],
        &["ratfunc", "--r", "4"],
        &["v-moment", "--k", "2", "--h", "1", "--N", "3"],
        &["v-ratfunc", "--h", "2"],
        &["moment-zero", "--k", "3"],
        &["moment-zero", "--k", "3", "--N", "2"],
        &["hypergeom", "--k", "2", "--N", "3", "--max-degree", "5"],
        &["egf-check", "--k", "2", "--N", "2", "--r-max", "4"],
        &[
            "mc-verify",
            "--k",
            "1",
            "--h",
            "1",
            "--N",
            "2",
            "--samples",
            "2000",
        ],
        &["selftest"],
    ];
    for args in runs {
        let def = schema["commands"][args[0]].as_str().unwrap();
        match json(args) {
            Value::Array(rows) => rows
                .iter()
                .for_each(|r| check_record(&schema, def, r.as_object().unwrap())),
            Value::Object(record) => check_record(&schema, def, &record),
            other => panic!("{args:?}: unexpected output {other}"),
        }
    }
}
