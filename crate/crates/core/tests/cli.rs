use std::process::{Command, Output};

use serde_json::Value;

fn permpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permpoly"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("JSON line"))
        .collect()
}

#[test]
fn check_reports_permutation_status() {
    for (field, poly, expected) in [
        ("3^1", "x^3+x", true),
        ("5^1", "x^2", false),
        ("3^2", "x^9+x", true),
        ("2^3", "x^3", true),
    ] {
        let out = permpoly(&["check", "--field", field, "--poly", poly]);
        assert_eq!(out.status.code(), Some(0));
        let v = &json_lines(&out)[0];
        assert_eq!(v["permutes"], expected, "{field} {poly}");
        assert!(v["q"].is_u64());
    }
}

#[test]
fn parse_and_usage_errors_exit_with_two() {
    for args in [
        vec!["check", "--field", "3^2", "--poly", "x^^2"],
        vec!["check", "--field", "6^1", "--poly", "x"],
        vec!["check", "--field", "3^2"],
        vec!["frobnicate"],
        vec![
            "certify", "--field", "7^1", "--r", "1", "--d", "5", "--h", "x+1",
        ],
        vec!["lucas", "--d", "4", "--n", "3"],
    ] {
        let out = permpoly(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn certify_binomial_and_cyclotomic() {
    let out = permpoly(&[
        "certify", "--field", "3^2", "--u", "9", "--r", "1", "--a", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out)[0];
    assert_eq!(v["bruteforce"], true);
    assert_eq!(v["agreement"], true);
    let bin = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["criterion"] == "bin")
        .unwrap();
    assert_eq!(bin["hypothesis_ok"], true);
    assert_eq!(bin["verdict"], true);

    let out = permpoly(&[
        "certify", "--field", "3^2", "--r", "1", "--d", "2", "--h", "x^2+1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out)[0];
    let laigle = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["criterion"] == "laigle" && r["hypothesis_ok"] == true)
        .unwrap();
    assert_eq!(laigle["verdict"], true);
}

#[test]
fn certify_other_families() {
    let cases: [&[&str]; 3] = [
        &[
            "certify", "--field", "5^2", "--k", "2", "--d", "3", "--r", "1",
        ],
        &[
            "certify", "--field", "5^2", "--v", "8", "--r", "1", "--k", "2", "--l", "2", "--hhat",
            "x+1",
        ],
        &[
            "certify", "--field", "3^2", "--hhat", "1", "--r", "1", "--d", "1", "--a", "1",
        ],
    ];
    for args in cases {
        let out = permpoly(args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?} {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v = &json_lines(&out)[0];
        assert_eq!(v["agreement"], true);
        assert!(!v["results"].as_array().unwrap().is_empty());
    }
}

#[test]
fn lucas_lines() {
    let out = permpoly(&["lucas", "--d", "5", "--n", "5"]);
    let values: Vec<i64> = json_lines(&out)
        .iter()
        .map(|v| v["a_n"].as_i64().unwrap())
        .collect();
    assert_eq!(values, [2, 1, 3, 4, 7, 11]);

    let out = permpoly(&["lucas", "--d", "3", "--n", "3"]);
    let values: Vec<i64> = json_lines(&out)
        .iter()
        .map(|v| v["a_n"].as_i64().unwrap())
        .collect();
    assert_eq!(values, [1, 1, 1, 1]);

    let out = permpoly(&["lucas", "--d", "5", "--n", "12", "--field", "11"]);
    for v in json_lines(&out) {
        let exact = v["a_n"].as_i64().unwrap();
        assert_eq!(v["a_n_mod_p"].as_i64().unwrap(), exact.rem_euclid(11));
    }

    // Large terms stay exact integers rather than floats.
    let out = permpoly(&["lucas", "--d", "21", "--n", "200"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let last = text.lines().last().unwrap();
    let digits = last.split("\"a_n\":").nth(1).unwrap().trim_end_matches('}');
    assert!(digits.len() > 20 && digits.bytes().all(|b| b.is_ascii_digit() || b == b'-'));
}

#[test]
fn aw_reports_hypothesis_and_implication() {
    let out = permpoly(&["aw", "--q", "81", "--d", "5", "--r", "1", "--e", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    assert_eq!(lines[0]["hypothesis_ok"], true);
    assert_eq!(lines[0]["sufficient_only"], true);
    assert_eq!(lines[1]["aw_implies_bin"], true);
}

#[test]
fn search_writes_consistent_files_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("census.csv");
    let out = permpoly(&[
        "search",
        "--max-q",
        "16",
        "--form",
        "binomial",
        "--a-sweep",
        "all",
        "--out",
        csv.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary = &json_lines(&out)[0];
    assert!(summary["inconsistencies"].as_array().unwrap().is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("q,p,m,form,u,r,a,d,s,bruteforce,"));
    assert_eq!(lines.count() as u64, summary["records"].as_u64().unwrap());

    let jsonl = dir.path().join("census.jsonl");
    let out = permpoly(&[
        "search",
        "--max-q",
        "9",
        "--form",
        "cyclotomic",
        "--out",
        jsonl.to_str().unwrap(),
        "--format",
        "jsonl",
        "--threads",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for line in std::fs::read_to_string(&jsonl).unwrap().lines() {
        let rec: Value = serde_json::from_str(line).unwrap();
        assert_eq!(rec["form"], "cyclotomic");
        assert!(rec["results"].is_array());
    }
}

#[test]
fn search_output_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for threads in ["1", "4"] {
        let path = dir.path().join(format!("t{threads}.csv"));
        let out = permpoly(&[
            "search",
            "--max-q",
            "25",
            "--a-sweep",
            "all",
            "--out",
            path.to_str().unwrap(),
            "--threads",
            threads,
        ]);
        assert_eq!(out.status.code(), Some(0));
        files.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn search_rejects_oversized_bounds_and_unwritable_paths() {
    let out = permpoly(&["search", "--max-q", "2000000", "--out", "/tmp/never.csv"]);
    assert_eq!(out.status.code(), Some(2));
    let out = permpoly(&["search", "--max-q", "5", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(2));
}
