use std::path::PathBuf;
use std::process::Command;

use peakcount::cli::{run, EXIT_CAPABILITY, EXIT_OK, EXIT_VALIDATION};

fn peakcount(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("peakcount").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("peakcount-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn recognize_reports_axis() {
    let f = temp_file(
        "two_votes.txt",
        "# two votes\n2 7\n4 5 6 3 2 7 1\n3 5 4 2 6 1 7\n",
    );
    let (code, out, _) = peakcount(&["recognize", f.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("single-peaked: yes"), "{out}");
    assert!(out.contains("axis: 1 2 3 5 4 6 7"), "{out}");
}

#[test]
fn recognize_explains_failures() {
    let f = temp_file("no.txt", "3 3\n2 3 1\n1 3 2\n1 2 3\n");
    let (code, out, _) = peakcount(&["recognize", "--explain", f.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("single-peaked: no"));
    assert!(out.contains("contains (bca, acb, abc)"), "{out}");
}

#[test]
fn recognize_rejects_bad_files() {
    let empty = temp_file("empty.txt", "0 3\n");
    let (code, _, err) = peakcount(&["recognize", empty.to_str().unwrap()]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(err.contains("line 1"), "{err}");
    let dup = temp_file("dup.txt", "2 3\n1 2 3\n1 1 3\n");
    let (code, _, err) = peakcount(&["recognize", dup.to_str().unwrap()]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(err.contains("line 3"), "{err}");
    let (code, _, _) = peakcount(&["recognize", "/nonexistent/peakcount.txt"]);
    assert_eq!(code, EXIT_VALIDATION);
}

#[test]
fn count_and_capability_exit_code() {
    let (code, out, _) = peakcount(&["count", "--model", "ic", "--n", "5", "--m", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("2976 of 7776"), "{out}");
    assert!(out.contains("0.382716"), "{out}");
    let (code, _, err) = peakcount(&["count", "--model", "ic", "--n", "50", "--m", "10"]);
    assert_eq!(code, EXIT_CAPABILITY);
    assert!(err.contains("peakcount bound"), "{err}");
    let (code, _, _) = peakcount(&["count", "--model", "polya", "--n", "5", "--m", "3"]);
    assert_eq!(code, EXIT_CAPABILITY);
}

#[test]
fn bounds_from_the_command_line() {
    let (code, out, _) = peakcount(&[
        "bound", "--model", "mallows", "--n", "10", "--m", "5", "--phi", "0.1",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(
        out.contains("lower: >= ") && out.contains("≈ 0.590"),
        "{out}"
    );

    let (code, out, _) = peakcount(&[
        "bound", "--model", "polya", "--n", "10", "--m", "10", "--a", "3628800",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("≈ 0.10"), "{out}");
    assert!(out.contains("guaranteed"), "{out}");

    let (code, out, _) = peakcount(&["bound", "--model", "ic", "--n", "50", "--m", "10", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    let lower = v["bounds"][0]["lower"].as_f64().unwrap();
    assert!((lower / 4.6e-189 - 1.0).abs() < 0.01);
    assert_eq!(v["model"], "ic");
}

#[test]
fn parameter_validation() {
    for args in [
        &["bound", "--model", "mallows", "--n", "10", "--m", "5"][..],
        &[
            "bound", "--model", "mallows", "--n", "10", "--m", "5", "--phi", "2",
        ],
        &[
            "bound", "--model", "mallows", "--n", "10", "--m", "5", "--phi", "1/0",
        ],
        &[
            "bound", "--model", "ic", "--n", "10", "--m", "5", "--phi", "0.1",
        ],
        &[
            "bound", "--model", "polya", "--n", "10", "--m", "5", "--a", "0",
        ],
        &["count", "--model", "ic", "--n", "0", "--m", "3"],
        &[
            "sample",
            "--model",
            "mallows",
            "--phi",
            "0.5",
            "--reference",
            "1 2 2",
            "--n",
            "2",
            "--m",
            "3",
        ],
        &["frobnicate"],
    ] {
        let (code, _, err) = peakcount(args);
        assert_eq!(code, EXIT_VALIDATION, "{args:?}");
        assert!(!err.is_empty());
    }
    let (code, out, _) = peakcount(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("estimate"));
}

#[test]
fn tables_reproduce_spot_cells() {
    let (_, ic, _) = peakcount(&["tables", "ic"]);
    let row = ic.lines().find(|l| l.starts_with("(25,4)")).unwrap();
    assert!(row.contains("1.42e-11"), "{row}");
    let (_, iac, _) = peakcount(&["tables", "iac"]);
    let row = iac.lines().find(|l| l.starts_with("(50,3)")).unwrap();
    assert!(row.contains("0.02"), "{row}");
    let (_, mallows, _) = peakcount(&["tables", "mallows"]);
    let row = mallows.lines().find(|l| l.starts_with("(50,5)")).unwrap();
    assert!(row.split_whitespace().nth(4) == Some("0.49"), "{row}");
}

#[test]
fn sampling_is_byte_identical() {
    let args = [
        "sample", "--model", "ic", "--n", "3", "--m", "3", "--count", "2", "--seed", "7",
    ];
    let (c1, a, _) = peakcount(&args);
    let (c2, b, _) = peakcount(&args);
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(a, b);
    // The output is itself a valid election file.
    assert_eq!(peakcount::io::parse_elections(&a).unwrap().len(), 2);

    let path = std::env::temp_dir().join(format!("peakcount-sample-{}.txt", std::process::id()));
    let (code, out, _) = peakcount(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap().trim_end(),
        a.trim_end()
    );
}

#[test]
fn estimate_records() {
    let (code, out, _) = peakcount(&[
        "estimate", "--model", "ic", "--n", "2", "--m", "3", "--trials", "1000", "--seed", "1",
        "--json",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["estimate"].as_f64(), Some(1.0));
    assert_eq!(v["successes"], 1000);
    for key in [
        "model",
        "n",
        "m",
        "params",
        "trials",
        "successes",
        "estimate",
        "ci_low",
        "ci_high",
        "seed",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }

    let args = [
        "estimate",
        "--model",
        "mallows",
        "--phi",
        "0.1",
        "--n",
        "10",
        "--m",
        "5",
        "--trials",
        "100000",
        "--seed",
        "1",
        "--workers",
        "4",
        "--json",
    ];
    let (_, out, _) = peakcount(&args);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    let p = v["estimate"].as_f64().unwrap();
    let sigma = (p * (1.0 - p) / 100_000.0).sqrt();
    assert!(p >= 0.59 - 3.0 * sigma, "{p}");
    assert_eq!(v["params"]["phi"], "1/10");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_peakcount");
    let ok = Command::new(bin)
        .args(["count", "--model", "iac", "--n", "2", "--m", "3"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("probability: 1"));
    let cap = Command::new(bin)
        .args(["count", "--model", "ic", "--n", "50", "--m", "10"])
        .output()
        .unwrap();
    assert_eq!(cap.status.code(), Some(2));
    let bad = Command::new(bin)
        .args(["count", "--model", "xx"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
