use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cinfty(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cinfty"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn tree_counts() {
    let o = cinfty(&["trees", "--leaves", "4", "--count-only"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "11\n");
    assert_eq!(stdout(&cinfty(&["trees", "--leaves", "5", "--count-only"])), "45\n");
    assert_eq!(stdout(&cinfty(&["trees", "--leaves", "2"])), "(* *)\n");
    let listed = stdout(&cinfty(&["trees", "--leaves", "4"]));
    assert_eq!(listed.lines().count(), 11);
    assert!(listed.lines().any(|l| l == "((* *) * *)"));
}

#[test]
fn contraction_passes() {
    let o = cinfty(&["contraction", "--dim", "1", "--max-poly-degree", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
    let o = cinfty(&["contraction", "--dim", "2", "--max-poly-degree", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cinfty(&["contraction", "--dim", "-1"]).status.code(), Some(2));
    assert_eq!(cinfty(&["contraction", "--dim", "0"]).status.code(), Some(2));
    assert_eq!(cinfty(&["trees"]).status.code(), Some(2));
    assert_eq!(cinfty(&["bogus"]).status.code(), Some(2));
    assert_eq!(cinfty(&["trees", "--leaves", "3", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(
        cinfty(&["complex", "--file", "/nonexistent/complex.json", "whitney-check"]).status.code(),
        Some(2)
    );
}

#[test]
fn interval_table() {
    let o = cinfty(&["interval", "--max-arity", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<String> = text.lines().map(|l| l.split_whitespace().collect::<Vec<_>>().join(" ")).collect();
    for row in ["m_2(t,t) = t", "m_3(t,dt,dt) = 1/12 dt", "m_3(t,t,dt) = 0", "m_3(dt,t,dt) = -1/6 dt"] {
        assert!(rows.iter().any(|r| r == row), "{row} missing from\n{text}");
    }
    let j: serde_json::Value = serde_json::from_str(&stdout(&cinfty(&["interval", "--max-arity", "3", "--format", "json"]))).unwrap();
    assert_eq!(j["passed"], true);
    assert!(j["table"]["entries"].as_array().unwrap().iter().any(|e| e["word"] == "t,t" && e["value"] == "t"));
}

#[test]
fn verify_passes_and_break_signs_fails() {
    let o = cinfty(&["verify", "--dim", "1", "--max-arity", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = cinfty(&["verify", "--dim", "2", "--max-arity", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = cinfty(&["verify", "--dim", "1", "--max-arity", "3", "--break-signs", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], false);
    assert!(v["reports"].as_array().unwrap().iter().any(|r| !r["counterexamples"].as_array().unwrap().is_empty()));
}

#[test]
fn complex_operations() {
    let dir = tempfile::tempdir().unwrap();
    let delta2 = write(dir.path(), "delta2.json", r#"{"vertices": ["a", "b", "c"], "simplices": [[0, 1, 2]]}"#);
    let boundary = write(dir.path(), "boundary2.json", r#"{"vertices": [0, 1, 2], "simplices": [[0, 1], [1, 2], [0, 2]]}"#);
    let a = write(dir.path(), "a.json", r#"{"entries": [{"simplex": [0], "coeff": "1"}, {"simplex": [1], "coeff": "-1/2"}]}"#);
    let b = write(dir.path(), "b.json", r#"{"entries": [{"simplex": [0, 1], "coeff": "3"}, {"simplex": [0, 2], "coeff": "1/3"}]}"#);

    let o = cinfty(&["complex", "--file", &delta2, "cup", "--a", &a, "--b", &b, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let first = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["entries"][0]["simplex"], serde_json::json!([0, 1]));
    assert_eq!(v["entries"][0]["coeff"], "3/4");
    assert_eq!(v["entries"][1]["coeff"], "1/6");
    // byte-deterministic
    let again = cinfty(&["complex", "--file", &delta2, "cup", "--a", &a, "--b", &b, "--format", "json"]);
    assert_eq!(stdout(&again), first);
    // the output is itself a cochain file
    let out = write(dir.path(), "out.json", &first);
    let o = cinfty(&["complex", "--file", &delta2, "cup", "--a", &a, "--b", &out, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));

    let unit = write(dir.path(), "one.json", r#"{"entries": [{"simplex": [0], "coeff": "1"}, {"simplex": [1], "coeff": "1"}, {"simplex": [2], "coeff": "1"}]}"#);
    let o = cinfty(&["complex", "--file", &delta2, "cup", "--a", &unit, "--b", &b, "--format", "json"]);
    assert_eq!(stdout(&o), fs::read_to_string(&out).unwrap().replace("3/4", "3").replace("1/6", "1/3"));

    let o = cinfty(&["complex", "--file", &boundary, "whitney-check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = cinfty(&["complex", "--file", &delta2, "product", "--inputs", &a, &b]);
    assert_eq!(o.status.code(), Some(0));

    let bad = write(dir.path(), "bad.json", r#"{"entries": [{"simplex": [0, 3], "coeff": "1"}]}"#);
    assert_eq!(cinfty(&["complex", "--file", &delta2, "coboundary", "--a", &bad]).status.code(), Some(2));
    let broken = write(dir.path(), "broken.json", r#"{"vertices": [0, 1], "simplices": [[1, 0]]}"#);
    assert_eq!(cinfty(&["complex", "--file", &broken, "whitney-check"]).status.code(), Some(2));
}
