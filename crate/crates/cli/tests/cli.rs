use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn orthologic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orthologic"))
        .args(args)
        .env_remove("ORTHOLOGIC_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_n_as_json() {
    let o = orthologic(&["classify", "--input", &data("n.poset"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lattice"], false);
    assert_eq!(v["dacey"], false);
    assert_eq!(v["orthomodular"], false);
    assert_eq!(v["bounded"], true);
    assert_eq!(v["theorems"]["main"], "holds");
}

#[test]
fn witness_for_n() {
    let o = orthologic(&["witness", "--input", &data("n.poset")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("non-dacey set: {[0<a], [0<b]} with basis {[0<a]}"), "{out}");
    assert!(out.contains("closed ideal with several maxima: {0, a, b}"), "{out}");
}

#[test]
fn witness_none_for_diamond() {
    let o = orthologic(&["witness", "--input", &data("diamond.poset")]);
    assert_eq!(o.status.code(), Some(0));
    // the diamond is not a chain, so only the Boolean failure remains
    let out = stdout(&o);
    assert!(out.starts_with("disjoint but not orthogonal"), "{out}");
    let o = orthologic(&["witness", "--text", "elements: 0 m 1; covers: 0<m, m<1"]);
    assert_eq!(stdout(&o), "none\n");
}

#[test]
fn harness_to_six() {
    let o = orthologic(&["harness", "--max", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("all theorems verified, 0 discrepancies"));
}

#[test]
fn harness_strict_mutation_exits_three() {
    let o = orthologic(&["harness", "--max", "5", "--graphs", "3", "--mutate", "flip-adjacency"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("all theorems verified"));
    let o = orthologic(&["harness", "--max", "5", "--graphs", "3", "--mutate", "orthocomplement", "--strict"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn cap_from_environment() {
    let o = orthologic(&["harness", "--max", "8"]);
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_orthologic"))
        .args(["harness", "--max", "8", "--graphs", "2", "--format", "json"])
        .env("ORTHOLOGIC_CAP", "8")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    // bounded posets on 8 points correspond to all 318 posets on 6
    assert_eq!(v["catalogue_size"], 89 + 318);
    assert_eq!(v["discrepancies"].as_array().unwrap().len(), 0);
}

#[test]
fn exit_codes() {
    assert_eq!(orthologic(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(orthologic(&["classify"]).status.code(), Some(1));
    assert_eq!(orthologic(&["classify", "--input", &data("n.poset"), "--format", "dot"]).status.code(), Some(1));
    assert_eq!(orthologic(&["classify", "--text", "elements: a; covers: a<b"]).status.code(), Some(1));
    assert_eq!(orthologic(&["classify", "--text", "elements: a b; covers: a<b, b<a"]).status.code(), Some(1));
    assert_eq!(orthologic(&["kalmbach", "--text", "elements: a b"]).status.code(), Some(1));
    assert_eq!(orthologic(&["classify", "--input", "/no/such/file"]).status.code(), Some(2));
    assert_eq!(orthologic(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("orthologic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("k.json");
    let o = orthologic(&["kalmbach", "-i", &data("diamond.poset"), "-f", "json", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["elements"].as_array().unwrap().len(), 6);
    assert_eq!(v["orthomodular"], true);
    assert_eq!(v["isomorphism"].as_array().unwrap().len(), 6);
    let bad = dir.join("missing").join("k.json");
    let o = orthologic(&["kalmbach", "-i", &data("diamond.poset"), "-o", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_is_stable() {
    for cmd in ["classify", "logic", "kalmbach", "macneille", "witness"] {
        let a = orthologic(&[cmd, "-i", &data("n.poset"), "-f", "json"]);
        let b = orthologic(&[cmd, "-i", &data("n.poset"), "-f", "json"]);
        assert_eq!(a.status.code(), Some(0), "{cmd}");
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
    let a = orthologic(&["harness", "--max", "7", "-f", "json"]);
    let b = orthologic(&["harness", "--max", "7", "-f", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

/// Edges `nX -> nY` of a DOT file, excluding the dashed complement pairs.
fn hasse_edges(dot: &str) -> Vec<(usize, usize)> {
    dot.lines()
        .map(str::trim)
        .filter(|l| l.contains("->") && !l.contains("dashed"))
        .map(|l| {
            let l = l.trim_end_matches(';');
            let (a, b) = l.split_once(" -> ").unwrap();
            let b = b.split_whitespace().next().unwrap();
            (a[1..].parse().unwrap(), b[1..].parse().unwrap())
        })
        .collect()
}

fn assert_transitively_reduced(edges: &[(usize, usize)]) {
    let n = edges.iter().map(|&(a, b)| a.max(b)).max().map_or(0, |m| m + 1);
    let mut reach = vec![vec![false; n]; n];
    for &(a, b) in edges {
        reach[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    for &(a, b) in edges {
        let implied = (0..n).any(|k| k != a && k != b && reach[a][k] && reach[k][b]);
        assert!(!implied, "edge n{a} -> n{b} is not a cover");
    }
}

#[test]
fn dot_outputs_are_hasse_diagrams() {
    for (cmd, file) in [
        ("logic", "n.poset"),
        ("kalmbach", "diamond.poset"),
        ("kalmbach", "n.poset"),
        ("macneille", "n.poset"),
    ] {
        let o = orthologic(&[cmd, "-i", &data(file), "-f", "dot"]);
        assert_eq!(o.status.code(), Some(0), "{cmd}");
        let dot = stdout(&o);
        assert!(dot.starts_with("digraph "), "{cmd}");
        assert_eq!(dot.matches('{').count(), dot.matches('}').count(), "{cmd}");
        assert!(dot.trim_end().ends_with('}'));
        let edges = hasse_edges(&dot);
        assert!(!edges.is_empty());
        assert_transitively_reduced(&edges);
    }
}

#[test]
fn logic_of_path_space() {
    let o = orthologic(&["logic", "--space", "-i", &data("path.space"), "-f", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let els: Vec<&str> = v["elements"].as_array().unwrap().iter().map(|e| e.as_str().unwrap()).collect();
    assert_eq!(els, ["∅", "{b}", "{c}", "{a, c}", "{b, d}", "{a, b, c, d}"]);
}
