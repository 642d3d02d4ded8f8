use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lensforge"))
        .args(args)
        .output()
        .expect("spawn lensforge")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

const WORKED: [&str; 6] = ["-p", "56", "-q", "17", "--n", "2,1,4,1,2"];

#[test]
fn fillings_lists_every_tuple() {
    let out = run(&["fillings", "-p", "56", "-q", "17", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["b"], serde_json::json!([2, 2, 5, 2, 3]));
    let ns: Vec<_> = v["fillings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["n"].clone())
        .collect();
    assert_eq!(ns.len(), 4);
    assert!(ns.contains(&serde_json::json!([2, 1, 4, 1, 2])));
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(
        run(&["fillings", "-p", "4", "-q", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["diagram", "-p", "56", "-q", "17", "--n", "1,1,1,1,1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "diagram",
            "-p",
            "56",
            "-q",
            "17",
            "--n",
            "2,1,4,1,2",
            "--format",
            "png"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn ascii_diagram_is_deterministic() {
    let a = run(&[&["diagram"][..], &WORKED, &["--format", "ascii"]].concat());
    let b = run(&[&["diagram"][..], &WORKED, &["--format", "ascii"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).map(|l| &l[..2]).collect();
    assert_eq!(rows, ["w1", "w2", "w4", "w3", "w5"]);
}

#[test]
fn svg_has_one_marker_per_event() {
    let out = run(&[&["diagram"][..], &WORKED, &["--format", "svg"]].concat());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("<circle").count(), 8);
    assert_eq!(text.matches("<polyline").count(), 5);
}

#[test]
fn diagram_json_round_trips_shape() {
    let v = json(&run(
        &[&["diagram"][..], &WORKED, &["--format", "json"]].concat()
    ));
    assert_eq!(v["k"], 5);
    assert_eq!(v["right_order"], serde_json::json!([1, 2, 4, 3, 5]));
    assert_eq!(v["events"].as_array().unwrap().len(), 8);
}

#[test]
fn cycles_match_and_chirality_flip_fails() {
    let ok = run(&[&["cycles"][..], &WORKED, &["--json"]].concat());
    assert_eq!(ok.status.code(), Some(0));
    let v = json(&ok);
    assert!(v["cycles"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["matches"] == true));
    let flipped = run(&[&["cycles"][..], &WORKED, &["--chirality", "-1"]].concat());
    assert_eq!(flipped.status.code(), Some(1));
}

#[test]
fn incidence_csv_and_homology() {
    let out = run(&[&["incidence"][..], &WORKED].concat());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines().next(),
        Some(",x1,x2,x3,x4,y2.1,y3.1,y4.1,y5.1")
    );
    let v = json(&run(&[
        &["incidence"][..],
        &WORKED,
        &["--homology", "--json"],
    ]
    .concat()));
    assert_eq!(v["invariants"]["euler"], 4);
    assert_eq!(v["invariants"]["h1"], serde_json::json!([]));
}

#[test]
fn verify_small_corpus_and_report_file() {
    let path = std::env::temp_dir().join(format!("lensforge-verify-{}.json", std::process::id()));
    let out = Command::new(env!("CARGO_BIN_EXE_lensforge"))
        .args(["verify", "--pmax", "2", "--out", path.to_str().unwrap()])
        .env("LENSFORGE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v["passed"], true);
    assert_eq!(v["pairs"], 1);
    assert_eq!(v["conventions"]["chirality"], "plus");

    let bad = run(&["verify", "--pmax", "8", "--chirality", "-1"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn thread_bound_must_be_positive() {
    let out = Command::new(env!("CARGO_BIN_EXE_lensforge"))
        .args(["verify", "--pmax", "3"])
        .env("LENSFORGE_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn artin_prints_the_artin_matrix() {
    let out = run(&["artin", "-p", "56", "-q", "17"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("w3,0,1,0,0,0,1,1,1,1,1"));
    assert!(text.contains("l = [6, 6, 6, 3, 3]"));
}
