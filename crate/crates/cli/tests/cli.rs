use std::fs;
use std::process::Command;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_gausshappy");

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    run_env(args, None)
}

fn run_env(args: &[&str], cache_env: Option<&std::path::Path>) -> Run {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("GAUSSHAPPY_CACHE_DIR");
    if let Some(dir) = cache_env {
        cmd.env("GAUSSHAPPY_CACHE_DIR", dir);
    }
    let out = cmd.output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let r = run(&full);
    (r.code, serde_json::from_str(&r.stdout).expect(&r.stdout))
}

#[test]
fn classify_seven_is_happy_with_height_five() {
    let (code, doc) = json(&["classify", "7", "--base", "10"]);
    assert_eq!(code, 0);
    assert_eq!(doc["terminal"], "happy");
    assert_eq!(doc["height"], 5);
    assert_eq!(doc["trajectory"][1], serde_json::json!([49, 0]));
    let text = run(&["classify", "7"]).stdout;
    assert!(
        text.contains("trajectory: 7 -> 49 -> 97 -> 130 -> 10 -> 1\n"),
        "{text}"
    );
    assert!(text.contains("height: 5\n"));
}

#[test]
fn classify_reports_cycles_and_zero() {
    let (code, doc) = json(&["classify", "-15+116i", "--base", "7"]);
    assert_eq!(code, 0);
    assert_eq!(doc["terminal"], "cycle");
    assert_eq!(doc["height"], Value::Null);
    assert_eq!(doc["cycle"]["length"], 2);
    let (_, doc) = json(&["classify", "0"]);
    assert_eq!(doc["terminal"], "zero");
    let (_, doc) = json(&["classify", "\u{2212}i", "--base", "3"]);
    assert_eq!(doc["input"], serde_json::json!([0, -1]));
}

#[test]
fn text_and_json_agree() {
    for z in [
        "12+12i",
        "-1",
        "2+11i",
        "4",
        "123456789123456789+987654321987654321i",
    ] {
        let (_, doc) = json(&["classify", z, "--base", "3"]);
        let text = run(&["classify", z, "--base", "3"]).stdout;
        let steps: Vec<String> = doc["trajectory"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| {
                let z = gausshappy::GaussianInt::new(
                    p[0].to_string().parse::<num_bigint::BigInt>().unwrap(),
                    p[1].to_string().parse::<num_bigint::BigInt>().unwrap(),
                );
                z.to_string()
            })
            .collect();
        assert!(
            text.contains(&format!("trajectory: {}\n", steps.join(" -> "))),
            "{text}"
        );
        assert!(text.contains(&format!(
            "terminal: {}\n",
            doc["terminal"].as_str().unwrap()
        )));
    }
}

#[test]
fn cycles_base_two_has_only_zero_and_one() {
    let (code, doc) = json(&["cycles", "--base", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["complete"], true);
    assert_eq!(doc["bound"], 16);
    let cycles: Vec<&Value> = doc["cycles"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| &c["elements"])
        .collect();
    assert_eq!(
        cycles,
        [&serde_json::json!([[0, 0]]), &serde_json::json!([[1, 0]])]
    );
}

#[test]
fn cycles_csv_and_digits() {
    let r = run(&["cycles", "--base", "3", "--format", "csv", "--digits"]);
    assert_eq!(r.code, 0);
    let mut reader = csv::Reader::from_reader(r.stdout.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 11);
    let anchors: Vec<&str> = rows.iter().map(|r| &r[3]).collect();
    for fixed in ["12", "22", "2+11i", "2-11i"] {
        assert!(anchors.contains(&fixed), "{anchors:?}");
    }
    let headers: Vec<&str> = reader.headers().unwrap().iter().collect();
    assert_eq!(headers, ["index", "class", "length", "anchor", "elements"]);
}

#[test]
fn partial_bound_is_flagged() {
    let (code, doc) = json(&["cycles", "--base", "10", "--bound", "50"]);
    assert_eq!(code, 0);
    assert_eq!(doc["complete"], false);
    assert_eq!(doc["bound"], 50);
}

#[test]
fn cache_hit_and_miss_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let miss = run(&[
        "cycles",
        "--base",
        "5",
        "--format",
        "json",
        "--cache-dir",
        path,
    ]);
    let files: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(files.len(), 1);
    let cached = fs::read_to_string(&files[0]).unwrap();
    let doc: Value = serde_json::from_str(&cached).unwrap();
    assert_eq!(doc["format_version"], 1);
    assert_eq!(doc["generator"]["tool"], "gausshappy");
    // Byte-for-byte re-serializable.
    assert_eq!(serde_json::to_string(&doc).unwrap() + "\n", cached);

    let hit = run(&[
        "cycles",
        "--base",
        "5",
        "--format",
        "json",
        "--cache-dir",
        path,
    ]);
    assert_eq!(miss.stdout, hit.stdout);
    assert_eq!(
        fs::read_to_string(&files[0]).unwrap(),
        cached,
        "hit must not rewrite"
    );

    let via_env = run_env(
        &["cycles", "--base", "5", "--format", "json"],
        Some(dir.path()),
    );
    assert_eq!(via_env.stdout, miss.stdout);
    let uncached = run(&["cycles", "--base", "5", "--format", "json"]);
    assert_eq!(uncached.stdout, miss.stdout);
}

#[test]
fn stale_or_corrupt_cache_is_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let fresh = run(&["cycles", "--base", "3", "--format", "json"]).stdout;
    run(&["cycles", "--base", "3", "--cache-dir", path]);
    let file = fs::read_dir(dir.path())
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();

    // A cache whose cycles are not cycles.
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
    doc["cycles"][2] = serde_json::json!([[2, 0]]);
    fs::write(&file, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = run(&[
        "cycles",
        "--base",
        "3",
        "--format",
        "json",
        "--cache-dir",
        path,
    ]);
    assert_eq!(out.stdout, fresh);

    // A different format version ignores and then replaces the file.
    doc["format_version"] = serde_json::json!(99);
    fs::write(&file, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = run(&[
        "cycles",
        "--base",
        "3",
        "--format",
        "json",
        "--cache-dir",
        path,
    ]);
    assert_eq!(out.stdout, fresh);
    let rewritten: Value = serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(rewritten["format_version"], 1);

    fs::write(&file, "not json").unwrap();
    let out = run(&[
        "cycles",
        "--base",
        "3",
        "--format",
        "json",
        "--cache-dir",
        path,
    ]);
    assert_eq!(out.stdout, fresh);
}

#[test]
fn smallest_heights_tables() {
    let (code, doc) = json(&["smallest-heights", "--base", "10", "--max-height", "6"]);
    assert_eq!(code, 0);
    let reps: Vec<&Value> = doc["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| &r["representative"])
        .collect();
    assert_eq!(
        serde_json::to_value(&reps).unwrap(),
        serde_json::json!([[1, 0], [-1, 0], [0, 1], [12, 12], [4, 4], [7, 0], [19, 5]])
    );
    let (code, doc) = json(&["smallest-heights", "--base", "10", "--rational-only"]);
    assert_eq!(code, 0);
    let reps: Vec<&Value> = doc["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| &r["representative"][0])
        .collect();
    assert_eq!(
        serde_json::to_value(&reps).unwrap(),
        serde_json::json!([1, 10, 13, 23, 19, 7, 356])
    );

    let r = run(&[
        "smallest-heights",
        "--base",
        "10",
        "--max-height",
        "4",
        "--format",
        "csv",
    ]);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines[0], "height,status,norm,representative,classes");
    assert_eq!(lines[4], "3,found,288,12+12i,12+12i");
}

#[test]
fn smallest_heights_not_found_exits_one() {
    let (code, doc) = json(&["smallest-heights", "--base", "7", "--max-height", "3"]);
    assert_eq!(code, 1);
    assert_eq!(doc["rows"][3]["status"], "not_found");
    let (code, doc) = json(&[
        "smallest-heights",
        "--base",
        "7",
        "--max-height",
        "3",
        "--norm-limit",
        "2000",
    ]);
    assert_eq!(code, 0);
    assert_eq!(doc["rows"][3]["norm"], 1129);
}

#[test]
fn odd_base_unit_difference_is_not_found() {
    let (code, doc) = json(&[
        "sequences",
        "find",
        "--base",
        "3",
        "--diff",
        "1",
        "--length",
        "2",
        "--bound",
        "100000",
    ]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["code"], "not_found");
    assert_eq!(doc["error"]["reason"], "obstructed");
    let r = run(&["sequences", "find", "--base", "3", "--diff", "1"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("error:"), "{}", r.stderr);
}

#[test]
fn find_and_rational_sequences() {
    let (code, doc) = json(&["sequences", "find", "--diff", "1+i", "--length", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["start"], serde_json::json!([-1, 0]));
    assert_eq!(doc["terms"], serde_json::json!([[-1, 0], [0, 1]]));
    assert_eq!(doc["related"].as_array().unwrap().len(), 3);

    let (code, doc) = json(&["sequences", "rational", "--d", "1", "--length", "4"]);
    assert_eq!(code, 0);
    assert_eq!(doc["start"], 7839);
    let (code, doc) = json(&["sequences", "rational", "--base", "3", "--length", "4"]);
    assert_eq!(
        (code, &doc["d"], &doc["start"]),
        (0, &serde_json::json!(2), &serde_json::json!(69))
    );
    let (code, doc) = json(&[
        "sequences",
        "rational",
        "--d",
        "1",
        "--length",
        "3",
        "--bound",
        "1000",
    ]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["reason"], "bound_exhausted");
}

#[test]
fn witness_report() {
    let (code, doc) = json(&["sequences", "witness", "-m", "1", "--rational", "7839,1,4"]);
    assert_eq!(code, 0);
    assert_eq!(doc["valid"], true);
    assert_eq!(
        doc["params"],
        serde_json::json!({ "run_length": 4, "shift": 3 })
    );
    assert_eq!(doc["checks"][0]["landing"], serde_json::json!([7839, 0]));
    assert_eq!(doc["target"], 7843);
    let (code, searched) = json(&["sequences", "witness", "-m", "1"]);
    assert_eq!(code, 0);
    assert_eq!(searched, doc);

    let (code, doc) = json(&["sequences", "witness", "-m", "2", "--rational", "7839,1,4"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["code"], "run_too_short");
    let (code, doc) = json(&[
        "sequences",
        "witness",
        "--base",
        "3",
        "-m",
        "1",
        "--rational",
        "69,1,4",
    ]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["code"], "wrong_step");
    let (code, doc) = json(&["sequences", "witness", "-m", "1", "--rational", "7840,1,4"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["code"], "unhappy_term");
    let r = run(&["sequences", "witness", "-m", "1", "--rational", "1,2"]);
    assert_eq!(r.code, 2);
}

#[test]
fn check_is_deterministic() {
    let a = run(&[
        "check",
        "--samples",
        "200",
        "--seed",
        "9",
        "--format",
        "json",
    ]);
    let b = run(&[
        "check",
        "--samples",
        "200",
        "--seed",
        "9",
        "--format",
        "json",
    ]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let doc: Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(doc["passed"], true);
    let bases: std::collections::BTreeSet<u64> = doc["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["base"].as_u64().unwrap())
        .collect();
    assert_eq!(bases, (2..=12).collect());
    let (_, one) = json(&["check", "--samples", "50", "--base", "7"]);
    assert!(one["suites"]
        .as_array()
        .unwrap()
        .iter()
        .all(|s| s["base"] == 7));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["classify", "1+2"][..],
        &["classify", "7", "--base", "1"],
        &["classify", "7", "--format", "csv"],
        &["frobnicate"],
        &["cycles", "--base", "40"],
    ] {
        let r = run(args);
        assert_eq!(r.code, 2, "{args:?}: {}", r.stderr);
    }
    let (code, doc) = json(&["classify", "12+x"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["code"], "parse_error");
    assert!(doc["error"]["message"]
        .as_str()
        .unwrap()
        .contains("position 3"));
}
