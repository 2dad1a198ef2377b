use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn stripspan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stripspan")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    for out in [&a, &b] {
        let o = stripspan(&["gen", "--model", "gnp", "--n", "500", "--param", "0.02", "--seed", "9", "--out", p(out)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let g = stripspan::io::read_graph(&a).unwrap();
    assert_eq!(g.n(), 500);
    assert_eq!(stripspan::io::format_edge_list(&g), text);

    let o = stripspan(&["gen", "--model", "grid", "--n", "9", "--param", "3", "--out", p(&a)]);
    assert_eq!(code(&o), 0);
    let g = stripspan::io::read_graph(&a).unwrap();
    assert_eq!((g.n(), g.edge_count()), (9, 12));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.txt");
    assert_eq!(code(&stripspan(&["gen", "--model", "gnp", "--n", "10", "--param", "1.5", "--out", p(&out)])), 1);
    assert_eq!(code(&stripspan(&["gen", "--model", "torus", "--n", "10", "--param", "1", "--out", p(&out)])), 1);
    assert_eq!(code(&stripspan(&["frobnicate"])), 1);
    assert_eq!(code(&stripspan(&["--help"])), 0);
    let missing = dir.path().join("missing.txt");
    let o = stripspan(&["build", "--graph", p(&missing), "--construction", "spanner1", "--epsilon", "0.1", "--out", p(&out)]);
    assert_eq!(code(&o), 1);
}

#[test]
fn emulator_epsilon_range() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let art = dir.path().join("a.json");
    assert_eq!(code(&stripspan(&["gen", "--model", "grid", "--n", "144", "--param", "12", "--out", p(&g)])), 0);
    let o = stripspan(&["build", "--graph", p(&g), "--construction", "emulator", "--epsilon", "0.25", "--out", p(&art)]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("[0, 0.2]"), "{err}");
    assert!(!art.exists());
    let o = stripspan(&["build", "--graph", p(&g), "--construction", "emulator", "--epsilon", "0.2", "--out", p(&art)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&art)["kind"], "emulator");
}

#[test]
fn tree_spanner1_keeps_the_tree() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("tree.txt");
    let edges: String = (1..40).map(|v| format!("{} {v}\n", (v - 1) / 2)).collect();
    fs::write(&g, edges).unwrap();
    let art = dir.path().join("a.json");
    let o = stripspan(&["build", "--graph", p(&g), "--construction", "spanner1", "--epsilon", "0", "--out", p(&art)]);
    assert_eq!(code(&o), 0);
    let a = json(&art);
    assert_eq!(a["subgraph_edges"].as_array().unwrap().len(), 39);
    let report = dir.path().join("r.json");
    let o = stripspan(&["verify", "--graph", p(&g), "--artifact", p(&art), "--out", p(&report)]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&report)["max_additive_error"], 0);
}

#[test]
fn build_verify_audit_flow() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let o = stripspan(&["gen", "--model", "gnp", "--n", "300", "--param", "0.03", "--seed", "2", "--largest-component", "--out", p(&g)]);
    assert_eq!(code(&o), 0);
    let graph_sha = stripspan::formats::sha256_hex(&fs::read(&g).unwrap());
    for kind in ["spanner1", "emulator", "spanner2"] {
        let art = dir.path().join(format!("{kind}.json"));
        let stats = dir.path().join(format!("{kind}-stats.json"));
        let clus = dir.path().join(format!("{kind}-clusters.json"));
        let strips = dir.path().join(format!("{kind}-strips.json"));
        let o = stripspan(&[
            "build", "--graph", p(&g), "--construction", kind, "--epsilon", "0.1", "--seed", "3",
            "--out", p(&art), "--stats", p(&stats), "--clustering-out", p(&clus), "--strips-out", p(&strips),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let a = json(&art);
        assert_eq!(a["config"]["graph_sha256"], graph_sha.as_str());
        let s = json(&stats);
        let art_sha = stripspan::formats::sha256_hex(&fs::read(&art).unwrap());
        assert_eq!(s["artifact_sha256"], art_sha.as_str());
        assert_eq!(s["edges"], a["subgraph_edges"].as_array().unwrap().len() + a["weighted_edges"].as_array().unwrap().len());
        assert!(json(&clus)["e"].as_u64().unwrap() >= 1);
        assert!(json(&strips)["strips"].is_array());

        // exact, then sampled twice with the same seed
        let r = dir.path().join(format!("{kind}-exact.json"));
        let o = stripspan(&["verify", "--graph", p(&g), "--artifact", p(&art), "--out", p(&r)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let exact = json(&r);
        assert_eq!(exact["pass"], true);
        assert_eq!(exact["kind"], if kind == "emulator" { "emulator" } else { "spanner" });
        assert_eq!(exact["config"]["artifact_sha256"], art_sha.as_str());
        let mut sampled = Vec::new();
        for i in 0..2 {
            let r = dir.path().join(format!("{kind}-s{i}.json"));
            let o = stripspan(&[
                "verify", "--graph", p(&g), "--artifact", p(&art), "--mode", "sampled", "--pairs", "3000", "--seed", "5", "--out", p(&r),
            ]);
            assert_eq!(code(&o), 0);
            sampled.push(fs::read(&r).unwrap());
        }
        assert_eq!(sampled[0], sampled[1]);

        // an impossible bound is a verification failure
        if exact["max_additive_error"].as_u64().unwrap() > 0 {
            let o = stripspan(&["verify", "--graph", p(&g), "--artifact", p(&art), "--bound", "0"]);
            assert_eq!(code(&o), 2);
            let v: Value = serde_json::from_slice(&o.stdout).unwrap();
            assert_eq!(v["pass"], false);
        }

        let audit = dir.path().join(format!("{kind}-audit.json"));
        let o = stripspan(&["audit", "--graph", p(&g), "--construction", kind, "--epsilon", "0.1", "--seed", "3", "--out", p(&audit)]);
        assert_eq!(code(&o), 0, "{}", fs::read_to_string(&audit).unwrap_or_default());
        assert_eq!(json(&audit)["clean"], true);
    }
}

#[test]
fn verify_rejects_artifact_of_another_graph() {
    let dir = tempfile::tempdir().unwrap();
    let (g1, g2, art) = (dir.path().join("1.txt"), dir.path().join("2.txt"), dir.path().join("a.json"));
    assert_eq!(code(&stripspan(&["gen", "--model", "grid", "--n", "64", "--param", "8", "--out", p(&g1)])), 0);
    assert_eq!(code(&stripspan(&["gen", "--model", "grid", "--n", "100", "--param", "10", "--out", p(&g2)])), 0);
    assert_eq!(code(&stripspan(&["build", "--graph", p(&g1), "--construction", "spanner1", "--epsilon", "0.1", "--out", p(&art)])), 0);
    assert_eq!(code(&stripspan(&["verify", "--graph", p(&g2), "--artifact", p(&art)])), 1);
}

#[test]
fn sweep_writes_versioned_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_stripspan"))
        .args([
            "sweep", "--model", "gnp", "--sizes", "128,64", "--epsilons", "0.1,0.25", "--constructions", "emulator,spanner1",
            "--param", "6", "--largest-component", "--out", p(&out),
        ])
        .env("STRIPSPAN_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "# stripspan-sweep v1");
    assert_eq!(lines.len(), 2 + 8);
    // the emulator cell at ε = 0.25 fails on its own row
    let bad: Vec<_> = lines.iter().filter(|l| l.contains("outside the admissible interval")).collect();
    assert_eq!(bad.len(), 2);
    assert!(lines[2].starts_with("gnp,"));
}
