use std::fs;
use std::process::{Command, Output};

fn freearr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freearr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn chi_of_all_planes_over_f2() {
    let o = freearr(&["chi", "--fixture", "all", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(
        out.contains("t^3 - 7t^2 + 14t - 8 = (t-1)(t-2)(t-4)"),
        "{out}"
    );
    assert!(!out.contains("DISAGREE"));
}

#[test]
fn chi_of_empty_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.arr");
    fs::write(&path, "# nothing but a header\nq=2^1 ell=3\n").unwrap();
    let o = freearr(&["chi", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("chi(A,t) = t^3"));
    assert!(out.contains("chi(2) = 8 complement = 8 AGREE"), "{out}");
}

#[test]
fn chi_of_ziegler_fixture() {
    let o = freearr(&["chi", "--fixture", "ziegler", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["factored"], "(t-1)(t-4)^2");
    assert_eq!(v["evaluations"][0]["chi"], 2);
    assert_eq!(v["agree"], true);
}

#[test]
fn free_exit_codes() {
    let o = freearr(&["free", "--fixture", "all", "--q", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("exponents: [1, 3, 9]"));

    let o = freearr(&["free", "--fixture", "ziegler"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict: not_free"));

    let o = freearr(&["free", "--fixture", "boolean", "--q", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "free");
    assert_eq!(v["exponents"], serde_json::json!([1, 1, 1]));
    assert_eq!(v["certificate"]["kind"], "saito_basis");
}

#[test]
fn extension_field_flags() {
    let a = freearr(&["chi", "--fixture", "all", "--q", "4", "--json"]);
    let b = freearr(&["chi", "--fixture", "all", "--q", "2", "--e", "2", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let bad = freearr(&["chi", "--fixture", "all", "--q", "4", "--e", "2"]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn count_examples() {
    let o = freearr(&["count", "--fixture", "ziegler", "--k", "1"]);
    assert!(stdout(&o).contains("k=1: 2 / 2 / 2 AGREE"));
    let o = freearr(&["count", "--fixture", "all", "--q", "2", "--k", "2"]);
    assert!(stdout(&o).contains("k=2: 0 / 0 / 0 AGREE"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.arr");
    fs::write(&path, "q=2^1 ell=3\n1 0 0\n").unwrap();
    let o = freearr(&["count", path.to_str().unwrap(), "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("k=2: 48 / 48 / 48 AGREE"));
}

#[test]
fn errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.arr");
    fs::write(&path, "q=3^1 ell=3\n1 0 0\n1 2\n").unwrap();
    let o = freearr(&["chi", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let o = freearr(&["chi", dir.path().join("missing.arr").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let o = freearr(&["chi"]);
    assert_eq!(o.status.code(), Some(3));
    let o = freearr(&["chi", "--fixture", "ziegler", "--q", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let o = freearr(&["census", "--q", "4", "--mode", "exhaustive"]);
    assert_eq!(o.status.code(), Some(3));
    let o = freearr(&["free", "--fixture", "nonsense"]);
    assert_eq!(o.status.code(), Some(3));
    let o = freearr(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn census_writes_tsv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q2");
    let o = freearr(&[
        "census",
        "--q",
        "2",
        "--ell",
        "3",
        "--mode",
        "exhaustive",
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let tsv = fs::read_to_string(out.join("census.tsv")).unwrap();
    assert_eq!(tsv.lines().count(), 129);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["records"], 128);
    assert_eq!(summary["findings"].as_array().unwrap().len(), 0);
    assert!(!out.join("findings").exists());
}

#[test]
fn sample_census_is_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (run, threads) in [("a", "1"), ("b", "2")] {
        let out = dir.path().join(run);
        let o = freearr(&[
            "census",
            "--q",
            "4",
            "--ell",
            "3",
            "--mode",
            "sample",
            "--n",
            "100",
            "--seed",
            "7",
            "--threads",
            threads,
            "--out-dir",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        outputs.push((
            fs::read(out.join("census.tsv")).unwrap(),
            fs::read(out.join("summary.json")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(String::from_utf8_lossy(&outputs[0].0).lines().count(), 101);
}
