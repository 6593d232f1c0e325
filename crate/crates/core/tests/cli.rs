use std::path::PathBuf;

use ringlab::classify::ClassificationRecord;
use ringlab::cli::run;

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("ringlab-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn construct(&self, name: &str, p: Option<u64>) -> String {
        let path = self.0.join(format!("{name}-{}.ring", p.unwrap_or(0)));
        let path = path.to_str().unwrap().to_string();
        let mut args = vec!["construct".to_string(), name.into(), "--out".into(), path.clone()];
        if let Some(p) = p {
            args.extend(["--p".into(), p.to_string()]);
        }
        assert_eq!(run(&args).0, 0);
        path
    }

    fn write(&self, name: &str, text: &str) -> String {
        let path = self.0.join(name);
        std::fs::write(&path, text).unwrap();
        path.to_str().unwrap().to_string()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

#[test]
fn classify_json_for_the_twisted_ring() {
    let s = Scratch::new("twisted");
    let file = s.construct("twisted", None);
    let (code, out) = run(["classify", &file, "--format", "json"]);
    assert_eq!(code, 0, "{out}");
    let record: ClassificationRecord = serde_json::from_str(&out).unwrap();
    record.validate().unwrap();
    assert_eq!(record.classes["idempotent_ring"].verdict, "yes");
    assert_eq!(record.classes["s_unital"].verdict, "no");
    let left = record.classes["left_s_unital"].counterexample.as_ref().unwrap();
    assert!(left.as_array().unwrap().iter().any(|v| v == "(0,0,1,1)"));
}

#[test]
fn classify_json_validates_for_every_corpus_ring() {
    let s = Scratch::new("corpus");
    for entry in ringlab::constructions::finite_corpus() {
        let file = s.construct(entry.key, None);
        let (code, out) = run(["classify", &file, "--format", "json"]);
        assert_eq!(code, 0, "{}: {out}", entry.key);
        let record: ClassificationRecord = serde_json::from_str(&out).unwrap();
        record.validate().unwrap();
        assert_eq!(record.size, Some(entry.ring.size()));
    }
}

#[test]
fn infinite_targets() {
    for target in ["sum:b_l-f2", "finite-rank:f2", "functions"] {
        let (code, out) = run(["classify", target, "--bound", "3", "--format", "json"]);
        assert_eq!(code, 0, "{target}: {out}");
        let record: ClassificationRecord = serde_json::from_str(&out).unwrap();
        record.validate().unwrap();
        assert_eq!(record.size, None);
        assert_eq!(record.classes["unital"].bound, Some(3), "{target}");
    }
    let (code, out) = run(["classify", "sum:b_l-f2", "--bound", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("left_unital") && out.contains("refuted up to 2"), "{out}");
    assert_eq!(run(["classify", "finite-rank:zero-z2", "--bound", "2"]).0, 1);
}

#[test]
fn witnesses() {
    let s = Scratch::new("witness");
    let m2 = s.construct("m2", None);
    let (code, out) = run(["witness", &m2, "--kind", "regular-unit", "--elements", "(E01)", "--side", "left"]);
    assert_eq!((code, out.as_str()), (0, "e = E00\n"));

    let (code, out) = run(["witness", &m2, "--kind", "join", "--elements", "E00;E01+E11"]);
    assert_eq!(code, 0);
    assert!(out.contains("idempotent: no") && out.contains("expansion identity: holds"), "{out}");

    let (code, out) = run(["witness", &m2, "--kind", "join", "--elements", "E01;E00"]);
    assert_eq!(code, 2, "{out}");

    let f2f2 = s.construct("f2xf2", None);
    let (code, out) = run(["witness", &f2f2, "--kind", "common-unit", "--elements", "(1,0);(0,1)", "--side", "both", "--trace"]);
    assert_eq!(code, 0);
    let trace: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(trace["unit"], "(1,1)");

    let bl = s.construct("b_l", None);
    assert_eq!(run(["witness", &bl, "--kind", "common-unit", "--elements", "(0,1)", "--side", "right"]).0, 2);
    let (code, out) = run(["witness", &bl, "--kind", "common-unit", "--elements", "(0,1);(1,1)"]);
    assert_eq!(code, 0, "{out}");

    let br = s.construct("b_r", None);
    let (code, out) = run(["witness", &br, "--kind", "promote", "--side", "right"]);
    assert_eq!(code, 2);
    assert!(out.contains("hypothesis failed"), "{out}");
    let z4 = s.construct("z4", None);
    assert_eq!(run(["witness", &z4, "--kind", "promote"]), (0, "identity = (1)\n".to_string()));
}

#[test]
fn parse_errors_exit_with_one() {
    let s = Scratch::new("errors");
    let missing = s.write("missing.ring", "ring x\nadditive 2\n");
    let (code, out) = run(["validate", &missing]);
    assert_eq!(code, 1);
    assert!(out.contains("e1*e1"), "{out}");
    let bad = s.write("bad.ring", "ring x\nadditive 2\nmul e1 e1 = (1\n");
    let (code, out) = run(["validate", &bad]);
    assert_eq!(code, 1);
    assert!(out.contains("line 3"), "{out}");
    assert_eq!(run(["validate", "/nonexistent/file.ring"]).0, 1);
    assert_eq!(run(["frobnicate"]).0, 1);
    let z = s.write("zero.ring", "ring z\nadditive 2\ndefault zero\n");
    assert_eq!(run(["validate", &z]), (0, "ok z: 2 elements, additive group Z2\n".into()));
    let f2 = s.construct("field", None);
    assert_eq!(run(["witness", &f2, "--kind", "common-unit", "--elements", "(1,1)"]).0, 1);
}

#[test]
fn tables_and_idempotents() {
    let s = Scratch::new("tables");
    let bl = s.construct("b_l", None);
    let (code, out) = run(["table", &bl, "--op", "mul"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 6);
    assert!(rows[4].starts_with("(1,0) | (0,0) (0,1) (1,0) (1,1)"), "{out}");
    let (code, out) = run(["idempotents", &bl]);
    assert_eq!((code, out.as_str()), (0, "(0,0)\n(1,0)\n(1,1)\n"));
    let (code, out) = run(["table", &bl, "--op", "add"]);
    assert_eq!(code, 0);
    assert!(out.lines().nth(5).unwrap().ends_with("(1,0) (0,1) (0,0)"), "{out}");
}

#[test]
fn demo_bound_comes_from_flag_then_environment() {
    let (code, out) = run(["demo", "hierarchy", "--bound", "2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("hierarchy tour (probe bound N = 2)"));
    assert_eq!(run(["demo", "hierarchy", "--bound", "2"]).1, out);
    std::env::set_var("RINGLAB_BOUND", "3");
    let (code, out) = run(["demo", "hierarchy"]);
    std::env::remove_var("RINGLAB_BOUND");
    assert_eq!(code, 0);
    assert!(out.starts_with("hierarchy tour (probe bound N = 3)"), "{out}");
}
