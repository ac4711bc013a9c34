use serde_json::Value;
use std::path::Path;
use std::process::Command;
use treeramsey::colouring::TwoColouring;
use treeramsey::counterexamples::{CounterexampleCertificate, Thm62Report};
use treeramsey::ramsey::RamseyOutcome;
use treeramsey::tree::Tree;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_treeramsey"))
        .args(args)
        .env_remove("TREERAMSEY_BUDGET")
        .env_remove("TREERAMSEY_SEED")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).expect("stdout is one JSON document")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(&serde_json::to_value(v).unwrap()).unwrap()
}

#[test]
fn documented_examples() {
    let (code, out) = run(&["lower-bound", "--t1", "8", "--t2", "5", "--s1", "8", "--s2", "3"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out), serde_json::json!({ "rbar": 15 }));

    let (code, out) = run(&["ramsey", "--tree", "path4", "--other", "path4", "--nmax", "8"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!((v["R"].as_u64(), v["certificateN"].as_u64()), (Some(5), Some(4)));
    assert_eq!(v["budget"].as_u64(), Some(50_000_000));

    let (code, out) = run(&["verify-thm13", "--C", "1", "--r", "2"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["impliedLowerBound"].as_u64(), Some(16));
}

#[test]
fn exit_code_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let (_, b1) = run(&["gen-construction", "--kind", "B1", "--t1", "3", "--t2", "2", "--s1", "2", "--s2", "2"]);
    let b1 = write(dir.path(), "b1.json", &b1);
    let (_, k5) = run(&["gen-construction", "--kind", "A2", "--t1", "6", "--t2", "2"]);
    let k5 = write(dir.path(), "k5.json", &k5);
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["lower-bound", "--tree", "path5", "--other", "star3"], 0),
        (vec!["lower-bound", "--t1", "2", "--t2", "3", "--s1", "2", "--s2", "2"], 3),
        (vec!["lower-bound", "--tree", "path3", "--other", "path5"], 3),
        (vec!["ramsey", "--tree", "path4", "--other", "path4", "--nmax", "4"], 1),
        (vec!["ramsey", "--tree", "path6", "--other", "path6", "--budget", "5"], 2),
        (vec!["ramsey", "--tree", "tree4", "--other", "path4"], 3),
        (vec!["check-arrows", "--colouring-file", &b1, "--tree", "caterpillar:3,2", "--other", "path4"], 1),
        (vec!["check-arrows", "--colouring-file", &k5, "--tree", "path5", "--other", "path2"], 0),
        (vec!["check-arrows", "--colouring-file", "/nonexistent.json", "--tree", "path5", "--other", "path2"], 3),
        (vec!["verify-thm13", "--C", "2", "--r", "2"], 1),
        (vec!["verify-thm14", "--C", "2", "--rho", "2", "--r", "1"], 1),
        (vec!["verify-thm14", "--C", "1", "--rho", "2", "--r", "2"], 3),
        (vec!["decompose", "--tree", "path9"], 0),
        (vec!["decompose", "--tree", "path10", "--mode", "skew"], 1),
        (vec!["gen-tree", "--tree", "caterpillar:2,3"], 3),
        (vec!["no-such-verb"], 3),
        (vec!["--help"], 0),
    ];
    for (args, want) in cases {
        let (code, out) = run(&args);
        assert_eq!(code, want, "{args:?} printed {out}");
        if code != 3 && !args.contains(&"--help") {
            json(&out);
        }
    }
}

#[test]
fn json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (_, tree) = run(&["gen-tree", "--tree", "random12", "--seed", "5"]);
    let parsed = Tree::from_json(&json(&tree)).unwrap();
    assert_eq!(serde_json::to_string_pretty(&parsed.to_json()).unwrap(), tree.trim_end());
    let file = write(dir.path(), "t.json", &tree);
    assert_eq!(run(&["gen-tree", "--tree-file", &file]).1, tree);
    let text = write(dir.path(), "t.txt", &parsed.to_text());
    assert_eq!(run(&["gen-tree", "--tree-file", &text]).1, tree);

    let (_, col) = run(&["gen-construction", "--kind", "B3", "--t1", "4", "--t2", "2", "--s1", "3", "--s2", "2"]);
    let c = TwoColouring::from_json(&json(&col)).unwrap();
    assert_eq!(serde_json::to_string_pretty(&c.to_json()).unwrap(), col.trim_end());

    let (_, out) = run(&["ramsey", "--tree", "star3", "--other", "star2"]);
    let r: RamseyOutcome = serde_json::from_str(&out).unwrap();
    assert_eq!(r.value, Some(5));
    let mut back = serde_json::to_value(&r).unwrap();
    back["certificateN"] = json(&out)["certificateN"].clone();
    back["jobs"] = serde_json::json!(1);
    assert_eq!(back, json(&out));

    let (_, out) = run(&["verify-thm14", "--C", "2", "--rho", "2", "--r", "2"]);
    let cert: CounterexampleCertificate = serde_json::from_str(&out).unwrap();
    assert_eq!(pretty(&cert), out.trim_end());

    let (code, out) = run(&["demo-thm62", "--n", "3", "--c", "5", "--trials", "2", "--seed", "1", "--max-sets", "200"]);
    assert!(code == 0 || code == 1);
    let report: Thm62Report = serde_json::from_str(&out).unwrap();
    assert_eq!(report.trials.len(), 2);
    assert_eq!(pretty(&report), out.trim_end());
}

#[test]
fn weights_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let cycle = write(dir.path(), "d.json", r#"{"n": 2, "arcs": [[0, 1], [1, 0]]}"#);
    let (code, out) = run(&["weights", "--digraph-file", &cycle, "--alpha", "2"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["solution"]["wMax"], "4/3");
    assert_eq!(v["verified"], true);

    let (_, col) = run(&["gen-construction", "--kind", "B2", "--t1", "3", "--t2", "2", "--s1", "2", "--s2", "2"]);
    let col = write(dir.path(), "c.json", &col);
    let (code, out) = run(&["weights", "--colouring-file", &col, "--x", "0", "--colour", "blue", "--alpha", "3/2"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["qr1"], true);

    let (code, dot) = run(&["gen-tree", "--tree", "star3", "--dot"]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("graph T {") && dot.contains("0 -- 3;"));
    let (_, dot) = run(&["verify-thm13", "--C", "1", "--r", "2", "--dot"]);
    assert!(dot.contains("[color=blue]"));
}

#[test]
fn environment_overrides() {
    let out = Command::new(env!("CARGO_BIN_EXE_treeramsey"))
        .args(["ramsey", "--tree", "path6", "--other", "path6"])
        .env("TREERAMSEY_BUDGET", "7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&String::from_utf8(out.stdout).unwrap())["budget"].as_u64(), Some(7));

    let a = Command::new(env!("CARGO_BIN_EXE_treeramsey"))
        .args(["gen-tree", "--tree", "random9"])
        .env("TREERAMSEY_SEED", "3")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(a.stdout).unwrap(), run(&["gen-tree", "--tree", "random9", "--seed", "3"]).1);
}
