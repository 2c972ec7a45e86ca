use std::path::PathBuf;

use serde_json::Value;

use cuweb::cli::{run, EXIT_FAILED, EXIT_INPUT, EXIT_OK};
use cuweb::json::{document_to_canonical, parse_document};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn fixtures() -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut out: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .map(|p| p.display().to_string())
        .collect();
    out.sort();
    out
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.out).unwrap_or_else(|e| panic!("{e}: {}", self.out))
    }
}

fn cuweb(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("cuweb").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

#[test]
fn every_fixture_validates_and_is_canonical() {
    let files = fixtures();
    assert!(files.len() >= 15);
    for f in &files {
        let r = cuweb(&["validate", f]);
        assert_eq!(r.code, EXIT_OK, "{f}: {}", r.err);
        let v = r.json();
        assert_eq!(v["valid"], true);
        assert_eq!(v["canonical"], true, "{f}");
        assert_eq!(v["cuweb_schema"], 1);
        let text = std::fs::read_to_string(f).unwrap();
        assert_eq!(
            document_to_canonical(&parse_document(&text).unwrap()),
            text,
            "{f}"
        );
    }
}

#[test]
fn output_is_deterministic_and_canonical() {
    let runs: Vec<Vec<String>> = vec![
        vec!["axioms".into(), fixture("w5.json")],
        vec!["ideals".into(), fixture("levels-z4-z2.json")],
        vec!["colimit".into(), fixture("diagram.json")],
        vec![
            "exact".into(),
            fixture("morphism-f.json"),
            fixture("morphism-g.json"),
        ],
        vec![
            "web".into(),
            fixture("chain-z3.json"),
            "--window".into(),
            "1".into(),
        ],
        vec![
            "circle".into(),
            "--n".into(),
            "0".into(),
            "--M".into(),
            "2".into(),
            "--B".into(),
            "1".into(),
        ],
        vec![
            "metric".into(),
            fixture("circle-identity.json"),
            fixture("circle-rotation-1-8.json"),
        ],
    ];
    for args in runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = cuweb(&args);
        let b = cuweb(&args);
        assert_eq!(a.code, b.code, "{args:?}");
        assert_eq!(a.out, b.out, "{args:?}");
        assert!(a.out.ends_with('\n'));
        let v = a.json();
        assert_eq!(
            serde_json::to_string_pretty(&v).unwrap() + "\n",
            a.out,
            "keys sorted, pretty printed"
        );
        assert_eq!(v["holds"] == true, a.code == EXIT_OK, "{args:?}");
    }
    let timed = cuweb(&["--timing", "validate", &fixture("w5.json")]);
    assert!(timed.json()["elapsed_ms"].is_u64());
    assert!(cuweb(&["validate", &fixture("w5.json")])
        .json()
        .get("elapsed_ms")
        .is_none());
}

#[test]
fn w5_axioms_report_the_au_witness() {
    let r = cuweb(&["axioms", &fixture("w5.json"), "--axiom", "AU"]);
    assert_eq!(r.code, EXIT_FAILED);
    let v = r.json();
    let verdict = &v["verdicts"][0];
    assert_eq!(verdict["axiom"], "AU");
    assert_eq!(
        verdict["witness"]["labels"],
        serde_json::json!(["(1,1)", "(∞,0)"])
    );
    assert_eq!(verdict["witness"]["n"], 1);
    let r = cuweb(&[
        "axioms",
        &fixture("w5.json"),
        "--axiom",
        "PC",
        "--axiom",
        "PD",
        "--axiom",
        "S0",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.out);
}

#[test]
fn exit_codes_over_the_corpus() {
    assert_eq!(cuweb(&["ideals", &fixture("w5.json")]).code, EXIT_OK);
    assert_eq!(cuweb(&["exact", &fixture("w5.json")]).code, EXIT_OK);
    assert_eq!(cuweb(&["colimit", &fixture("diagram.json")]).code, EXIT_OK);
    assert_eq!(
        cuweb(&[
            "quotient",
            &fixture("trivial-square.json"),
            "--ideal",
            "gen:((1,0),0)"
        ])
        .code,
        EXIT_OK
    );
    let m = cuweb(&[
        "metric",
        &fixture("circle-identity.json"),
        &fixture("circle-rotation-3-16.json"),
        "--max-n",
        "4",
    ]);
    assert_eq!(m.code, EXIT_FAILED);
    let v = m.json();
    assert_eq!(v["dd_le_d_le_2dd"], false);
    assert_eq!(v["d_le_dd_le_2d"], true);
    assert_eq!(v["dd"]["bracket"]["lo"], "1/4");
    let far = cuweb(&[
        "metric",
        &fixture("circle-identity.json"),
        &fixture("circle-negation.json"),
    ]);
    assert_eq!(far.json()["dd"]["bracket"]["lo"], "inf");
}

#[test]
fn input_errors_exit_two() {
    let cases: Vec<Vec<String>> = vec![
        vec![],
        vec!["frobnicate".into()],
        vec!["validate".into(), "/nonexistent/file.json".into()],
        vec![
            "axioms".into(),
            fixture("w5.json"),
            "--axiom".into(),
            "O7".into(),
        ],
        vec!["web".into(), fixture("diagram.json")],
        vec![
            "quotient".into(),
            fixture("trivial-square.json"),
            "--ideal".into(),
            "gen:nope".into(),
        ],
        vec![
            "quotient".into(),
            fixture("w5.json"),
            "--ideal".into(),
            "set:99".into(),
        ],
        vec![
            "metric".into(),
            fixture("circle-identity.json"),
            fixture("w5.json"),
        ],
        vec![
            "circle".into(),
            "--n".into(),
            "9".into(),
            "--M".into(),
            "1".into(),
            "--B".into(),
            "1".into(),
        ],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let r = cuweb(&args);
        assert_eq!(r.code, EXIT_INPUT, "{args:?}: {}", r.out);
        assert!(r.out.is_empty(), "{args:?}");
        assert!(!r.err.is_empty(), "{args:?}");
    }
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"cuweb_schema\": 2, \"elements\": []}").unwrap();
    let r = cuweb(&["validate", bad.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("cuweb_schema"), "{}", r.err);
    assert_eq!(cuweb(&["--help"]).code, EXIT_OK);
}

#[test]
fn inputs_are_hashed() {
    let f = fixture("w5.json");
    let v = cuweb(&["validate", &f]).json();
    let bytes = std::fs::read(&f).unwrap();
    assert_eq!(v["inputs"][0]["sha256"], cuweb::json::sha256_hex(&bytes));
    assert_eq!(v["inputs"][0]["path"], f);
}
