use std::process::{Command, Output};

fn eaqec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eaqec"))
        .args(args)
        .env_remove("EAQEC_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn distance_reports_json() {
    let o = eaqec(&["distance", "catalog:example1_5_1_5_4", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["d"], 5);
    assert_eq!(v["c"], 4);
    assert_eq!(v["singleton_saturated"], true);
}

#[test]
fn nrc_counts_partner_subspaces() {
    let o = eaqec(&["nrc", "--r", "4", "--c", "2"]);
    assert_eq!(stdout(&o).trim(), "35");
}

#[test]
fn exhaustive_optimize_row() {
    let o = eaqec(&[
        "optimize",
        "catalog:bch_7_1_3",
        "--c",
        "6",
        "--exhaustive",
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("c,d_opt,N_opt,total,elapsed"));
    assert!(lines.next().unwrap().starts_with("6,7,36,4096,"));
}

#[test]
fn exit_codes() {
    assert_eq!(eaqec(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(eaqec(&["nrc", "--r", "4"]).status.code(), Some(1));
    assert_eq!(eaqec(&["--help"]).status.code(), Some(0));
    let refused = eaqec(&[
        "optimize",
        "catalog:shor_9_1_3",
        "--c",
        "5",
        "--exhaustive",
        "--max-cost",
        "1000",
    ]);
    assert_eq!(refused.status.code(), Some(3));
    assert_eq!(eaqec(&["distance", "catalog:missing"]).status.code(), Some(2));
}

#[test]
fn parse_errors_name_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "n=2\n10|00\n01|1z\n").unwrap();
    let o = eaqec(&["distance", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3, column 5"), "{err}");
}

#[test]
fn validate_flags_bad_logicals() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("code.txt");
    let logical = dir.path().join("logical.txt");
    std::fs::write(&code, "n=2\n00|11\n").unwrap();
    std::fs::write(&logical, "n=2\n00|10\n11|00\n").unwrap();
    let ok = eaqec(&[
        "validate",
        code.to_str().unwrap(),
        "--logical",
        logical.to_str().unwrap(),
    ]);
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));
    std::fs::write(&logical, "n=2\n00|10\n10|00\n").unwrap();
    let bad = eaqec(&[
        "validate",
        code.to_str().unwrap(),
        "--logical",
        logical.to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(2));
    std::fs::write(&code, "n=2\n00|11\n00|11\n").unwrap();
    assert_eq!(eaqec(&["validate", code.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--no-timing",
        "--format",
        "csv",
        "random-search",
        "catalog:shor_9_1_3",
        "--c",
        "2",
        "--iters",
        "300",
        "--seed",
        "9",
    ];
    let a = eaqec(&args);
    let b = eaqec(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut outputs = Vec::new();
    for name in ["a.txt", "b.txt"] {
        let path = dir.path().join(name);
        assert!(
            eaqec(&["synth", "catalog:eaqec_7_1_5_2", "--out", path.to_str().unwrap()])
                .status
                .success()
        );
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert!(String::from_utf8(outputs[0].clone()).unwrap().starts_with("# n=7"));
}

#[test]
fn circulant_scan_csv() {
    let o = eaqec(&["--format", "csv", "circulant-scan", "--n", "4", "--full"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("n,r,k,c,d,seed_hex,degenerate,saturates_singleton\n"));
    let tuples: Vec<(String, String, String)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[2].to_string(), f[4].to_string(), f[3].to_string())
        })
        .collect();
    for want in [("0", "4", "2"), ("1", "3", "1")] {
        assert!(tuples.contains(&(want.0.into(), want.1.into(), want.2.into())));
    }
    assert_eq!(eaqec(&["circulant-scan", "--n", "9"]).status.code(), Some(2));
}

#[test]
fn catalog_show_round_trips_as_input() {
    let dir = tempfile::tempdir().unwrap();
    let o = eaqec(&["catalog", "show", "shor_9_1_3"]);
    let path = dir.path().join("shor.txt");
    std::fs::write(&path, o.stdout).unwrap();
    let d = eaqec(&["--format", "json", "distance", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&d)).unwrap();
    assert_eq!((v["n"].as_u64(), v["d"].as_u64()), (Some(9), Some(3)));
}
