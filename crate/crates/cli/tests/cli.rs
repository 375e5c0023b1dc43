use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use eigconf_cli::condfile::ConditionFile;
use tempfile::TempDir;

fn eigconf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eigconf")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn ec_examples() {
    let dir = tempfile::tempdir().unwrap();
    for (text, want) in [
        ("F:\n4 0\n0 4\nG:\n2 0 0\n0 2 0\n0 0 8\n", "EC = (0, 1)"),
        ("F:\n0\nG:\n1\n", "EC = (1)"),
        (
            r#"{"F": [[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,1,0,0,0],[0,0,0,3,0,0],[0,0,0,0,5,0],[0,0,0,0,0,8]],
                "G": [[-1,0,0,0],[0,2,0,0],[0,0,2,0],[0,0,0,6]]}"#,
            "EC = (0, 0, 2, 0, 1, 0)",
        ),
    ] {
        let f = write(&dir, "m.txt", text);
        let o = eigconf(&["ec", s(&f)]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let out = stdout(&o);
        assert!(out.contains(&format!("oracle   {want}")), "{out}");
        assert!(out.contains(&format!("theorem  {want}")), "{out}");
    }
}

#[test]
fn ec_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let asym = write(&dir, "a.txt", "F:\n1 2\n3 4\nG:\n1\n");
    assert_eq!(eigconf(&["ec", s(&asym)]).status.code(), Some(3));
    let para = write(&dir, "p.txt", "params: p\nF:\np\nG:\n1\n");
    assert_eq!(eigconf(&["ec", s(&para)]).status.code(), Some(3));
    assert_eq!(eigconf(&["ec", "/nonexistent/file"]).status.code(), Some(3));
    let o = eigconf(&["--format", "machine", "ec", s(&asym)]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["exit_code"], 3);
}

#[test]
fn usage_exit_codes() {
    assert_eq!(eigconf(&[]).status.code(), Some(3));
    assert_eq!(eigconf(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(eigconf(&["transform", "-1"]).status.code(), Some(3));
    assert_eq!(eigconf(&["transform", "0"]).status.code(), Some(3));
    assert_eq!(eigconf(&["--help"]).status.code(), Some(0));
    assert_eq!(eigconf(&["--version"]).status.code(), Some(0));
}

#[test]
fn transform_reports() {
    let o = eigconf(&["transform", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("T_1 =\n[ 1 ]\n"), "{}", stdout(&o));
    let o = eigconf(&["--format", "machine", "transform", "6"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["det"], "-32768");
    assert_eq!(doc["T"][0], serde_json::json!(["1", "2", "3", "4", "5", "6"]));
    assert_eq!(eigconf(&["transform", "13"]).status.code(), Some(4));
}

#[test]
fn condition_then_eval() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(&dir, "m.txt", "params: p q\nF:\np\nG:\nq\n");
    let cf = dir.path().join("c.json");
    let o = eigconf(&["condition", s(&m), "--ec", "1", "-o", s(&cf)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("v(d_1)=1"));
    let file = ConditionFile::from_json(&std::fs::read_to_string(&cf).unwrap()).unwrap();
    // x + a1 - b1
    assert_eq!(file.clauses[0].coefficients[0], vec![("-1".to_string(), vec![0, 1]), ("1".to_string(), vec![1, 0])]);
    assert_eq!(file.clauses[0].coefficients[1], vec![("1".to_string(), vec![0, 0])]);

    let eval = |b: &[&str]| {
        let mut args = vec!["eval", s(&cf)];
        args.extend_from_slice(b);
        eigconf(&args)
    };
    assert_eq!(eval(&["p=0", "q=1"]).status.code(), Some(0));
    assert_eq!(eval(&["p=2", "q=1/2"]).status.code(), Some(1));
    let ng = eval(&["p=0.5", "q=1/2"]);
    assert_eq!(ng.status.code(), Some(2));
    assert!(stdout(&ng).contains("z - 1/2"), "{}", stdout(&ng));
    assert_eq!(eval(&["p=1"]).status.code(), Some(3));
    assert_eq!(eval(&["p=1", "q=2", "r=3"]).status.code(), Some(3));
    assert_eq!(eval(&["p=1", "q=two"]).status.code(), Some(3));
}

#[test]
fn condition_targets_and_caps() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(&dir, "m.txt", "params: p q r s\nF:\np q\nq r\nG:\ns\n");
    let o = eigconf(&["--format", "machine", "condition", s(&m), "--ec", "0,1"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["summary"], "v(d_1)=2 ∧ v(d_2)=0");
    assert_eq!(eigconf(&["condition", s(&m), "--ec", "0,1,0"]).status.code(), Some(3));
    let o = eigconf(&["condition", s(&m), "--ec", "0,1", "--degree-cap", "1"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("is 2"));
}

#[test]
fn condition_output_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(&dir, "m.txt", "params: p q r\nF:\np, q\nq, 1\nG:\nr, 1/2\n1/2, p + r\n");
    for extra in [&[][..], &["--expand", "--sign-patterns"][..]] {
        let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
        for out in [&a, &b] {
            let mut args = vec!["condition", s(&m), "--ec", "1,0", "-o", s(out)];
            args.extend_from_slice(extra);
            assert_eq!(eigconf(&args).status.code(), Some(0));
        }
        let text = std::fs::read_to_string(&a).unwrap();
        assert_eq!(text, std::fs::read_to_string(&b).unwrap());
        let parsed = ConditionFile::from_json(&text).unwrap();
        let again = ConditionFile::from_condition(&parsed.to_condition().unwrap()).to_json();
        assert_eq!(again, text);
    }
}

#[test]
fn verify_runs_and_is_reproducible() {
    let o = eigconf(&["verify", "--m-max", "1", "--n-max", "1", "--count", "50", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("50/50 agree"));
    let args = ["--format", "machine", "verify", "--m-max", "3", "--n-max", "3", "--count", "40", "--seed", "7"];
    let (a, b) = (eigconf(&args), eigconf(&args));
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["agree"], 40);
    assert!(doc["skipped_non_generic"].as_u64().unwrap() > 0);
}
