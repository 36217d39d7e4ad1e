use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qgame::catalog;
use serde_json::Value;

fn qgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgame")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> String {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

struct Fixture {
    _dir: tempfile::TempDir,
    root: PathBuf,
    chicken: String,
    chicken2: String,
    three: String,
    battle: String,
    coordination: String,
    bell: String,
}

fn fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().to_path_buf();
    Fixture {
        chicken: write_json(&root, "g1.json", &catalog::chicken()),
        chicken2: write_json(&root, "g2.json", &catalog::chicken_relabelled()),
        three: write_json(&root, "psi.json", &catalog::three_term_state()),
        battle: write_json(&root, "k1.json", &catalog::battle_game()),
        coordination: write_json(&root, "k2.json", &catalog::coordination_game()),
        bell: write_json(&root, "bell.json", &catalog::bell_state()),
        root,
        _dir: dir,
    }
}

#[test]
fn nash_lists_label_pairs() {
    let f = fixture();
    let o = qgame(&["nash", &f.chicken]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(t, r)\n(b, l)\n");
}

#[test]
fn iso_exit_codes() {
    let f = fixture();
    let o = qgame(&["iso", &f.chicken, &f.chicken2]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("phi2=(0 1)"));
    assert!(stdout(&o).contains("l->r'"));

    let o = qgame(&["iso", &f.battle, &f.coordination]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "NOT ISOMORPHIC");
    let o = qgame(&["iso", "--strict", &f.battle, &f.coordination]);
    assert_eq!(o.status.code(), Some(1));

    let o = qgame(&["--format", "json", "iso", "--all", &f.chicken, &f.chicken2]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn quantize_both_paths_agree() {
    let f = fixture();
    for scheme in ["refined", "correlated"] {
        let o = qgame(&["--format", "json", "quantize", "--scheme", scheme, "--game", &f.chicken, "--state", &f.three, "--both"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert!(v["max_discrepancy"].as_f64().unwrap() < 1e-9);
        assert!(v["trace"].is_object() && v["oracle"].is_object());
    }
    let o = qgame(&[
        "quantize", "--scheme", "mw", "--ops1", "identity-sigma", "--ops2", "identity-sigma", "--game", &f.battle,
        "--state", &f.bell, "--format", "table",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(2, 2)"));
}

#[test]
fn input_errors_exit_two() {
    let f = fixture();
    let o = qgame(&["quantize", "--scheme", "refined", "--game", &f.chicken, "--state", &f.chicken]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("state"));

    let bad = f.root.join("bad.json");
    fs::write(&bad, "{\"rows\": [\"a\"],\n \"cols\": [\"b\"], \"payoffs\": [[[1, ]]]}").unwrap();
    let o = qgame(&["nash", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let qutrit = write_json(&f.root, "q.json", &catalog::qubit_qutrit_state());
    let o = qgame(&["quantize", "--scheme", "refined", "--game", &f.chicken, "--state", &qutrit]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("dims"));

    let o = qgame(&["quantize", "--scheme", "mw", "--ops1", "iqbal3", "--ops2", "iqbal3", "--game", &f.chicken, "--state", &f.bell]);
    assert_eq!(o.status.code(), Some(2));

    let o = qgame(&["quantize", "--scheme", "mw", "--ops1", "nonsense", "--ops2", "perm", "--game", &f.chicken, "--state", &f.bell]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invariance_strict_exit() {
    let f = fixture();
    let base = ["invariance", "--scheme", "correlated", "--g1", &f.chicken, "--g2", &f.chicken2, "--state", &f.three];
    let o = qgame(&base);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: VIOLATES"));
    let mut strict = base.to_vec();
    strict.push("--strict");
    assert_eq!(qgame(&strict).status.code(), Some(1));
}

#[test]
fn random_trials_are_thread_independent_and_replayable() {
    let f = fixture();
    let run = |threads: &str| {
        let o = qgame(&[
            "--format", "json", "--threads", threads, "invariance", "--scheme", "correlated", "--random", "--shape",
            "2x2", "--trials", "30", "--seed", "11",
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        stdout(&o)
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    let v: Value = serde_json::from_str(&one).unwrap();
    assert_eq!(v["trials"], 30);
    if let Some(cert) = v["certificates"].as_array().unwrap().first() {
        let path = write_json(&f.root, "cert.json", cert);
        let o = qgame(&["invariance", "--replay", &path, "--format", "table"]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("verdict: VIOLATES"));
    }
}

fn collect(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files = Vec::new();
    for sub in ["example1", "example2", "counterexample"] {
        let mut entries: Vec<_> = fs::read_dir(dir.join(sub)).unwrap().map(|e| e.unwrap().path()).collect();
        entries.sort();
        for p in entries {
            files.push((p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap()));
        }
    }
    files
}

#[test]
fn demo_is_byte_stable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = qgame(&["demo", "--out", d.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let (fa, fb) = (collect(a.path()), collect(b.path()));
    assert!(fa.len() > 30);
    assert_eq!(fa, fb);
    let summary = String::from_utf8(fs::read(a.path().join("example1/summary.txt")).unwrap()).unwrap();
    assert!(summary.contains("correlated: verdict: VIOLATES"));
    assert!(summary.contains("refined: verdict: PRESERVES"));
}
