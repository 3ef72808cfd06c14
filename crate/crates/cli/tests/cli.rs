use std::path::{Path, PathBuf};
use std::process::Command;

use arbor::arborescence::{dfs_build, is_normal, load_arborescence, Priority};
use arbor::digraph::load_digraph;
use arbor::{Arborescence, Digraph, VertexId};
use arbor_verify::corpus::{corpus, DEFAULT_SEED};
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn arbor(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_arbor"))
        .args(args)
        .env_remove("ARBOR_SEED")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn files(dir: &Path, d: &Digraph, t: &Arborescence) -> (String, String) {
    let g = write(dir, "g.json", &d.to_json());
    let t = write(dir, "t.json", &t.to_json());
    (g.display().to_string(), t.display().to_string())
}

fn two_cycle_star(dir: &Path) -> (String, String) {
    let d = Digraph::on_range(3, &[(0, 1), (0, 2), (1, 2), (2, 1)]).unwrap();
    let t = Arborescence::from_raw(0, &[(0, 1), (0, 2)]).unwrap();
    files(dir, &d, &t)
}

#[test]
fn check_normal_reports_the_cycle() {
    let dir = TempDir::new().unwrap();
    let (g, t) = two_cycle_star(dir.path());
    let r = arbor(&["check-normal", "-d", &g, "-t", &t]);
    assert_eq!(r.code, 1);
    let v = r.json();
    assert_eq!(v["verdict"], "not_normal");
    assert_eq!(v["certificate"]["cycle"], serde_json::json!([1, 2]));
}

#[test]
fn dfs_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let d = Digraph::on_range(3, &[(0, 1), (0, 2), (1, 2), (2, 1)]).unwrap();
    let g = write(dir.path(), "g.json", &d.to_json());
    let r = arbor(&["dfs", "-d", g.to_str().unwrap(), "--root", "0", "--priority", "2,1,0"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let t = load_arborescence(&r.stdout).unwrap();
    assert_eq!(t, dfs_build(&d, VertexId(0), &Priority::from_raw(&[2, 1, 0])).unwrap());
    assert_eq!(t.parent(VertexId(1)), Some(VertexId(2)));
}

#[test]
fn ladder_reflects_and_comb_does_not() {
    let r = arbor(&["horizon", "--family", "directed_ladder", "--depth", "20"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["verdict"]["verdict"], "reflects");

    let r = arbor(&["horizon", "--family", "comb_of_columns", "--depth", "12"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["verdict"]["verdict"], "counter_example");
}

#[test]
fn family_spec_files_are_accepted() {
    let dir = TempDir::new().unwrap();
    let spec = write(dir.path(), "f.json", r#"{"family":"directed_ladder","params":{},"depth":8}"#);
    let r = arbor(&["ends", "--family", spec.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["depth"], 8);
}

#[test]
fn usage_and_io_errors_exit_two() {
    assert_eq!(arbor(&["no-such-verb"]).code, 2);
    assert_eq!(arbor(&["check-normal", "-d", "missing.json"]).code, 2);
    let r = arbor(&["check-normal", "-d", "missing.json", "-t", "missing.json"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("missing.json"));
    assert_eq!(arbor(&["horizon", "--family", "no_such_family"]).code, 2);
}

#[test]
fn separation_on_a_non_normal_tree_carries_a_certificate() {
    let dir = TempDir::new().unwrap();
    let (g, t) = two_cycle_star(dir.path());
    let r = arbor(&["separate", "-d", &g, "-t", &t, "-v", "1", "-w", "2"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["normality"]["verdict"], "not_normal");
}

#[test]
fn exit_codes_follow_normality_across_the_corpus() {
    let dir = TempDir::new().unwrap();
    for inst in corpus(DEFAULT_SEED).iter().step_by(25) {
        let (g, t) = files(dir.path(), &inst.d, &inst.t);
        let want = if is_normal(&inst.d, &inst.t).unwrap().is_normal() { 0 } else { 1 };
        let r = arbor(&["check-normal", "-d", &g, "-t", &t]);
        assert_eq!(r.code, want, "{}", inst.label);
        let r = arbor(&["order", "-d", &g, "-t", &t]);
        assert_eq!(r.code, want, "{}", inst.label);
    }
}

#[test]
fn solidification_reloads() {
    let dir = TempDir::new().unwrap();
    let d = Digraph::on_range(3, &[(0, 1), (1, 2)]).unwrap();
    let t = Arborescence::from_raw(0, &[(0, 1), (1, 2)]).unwrap();
    let (g, tp) = files(dir.path(), &d, &t);
    let out = dir.path().join("s.json");
    let r = arbor(&["solidify", "-d", &g, "-t", &tp, "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.is_empty());
    let s = load_digraph(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert!(s.has_edge(VertexId(2), VertexId(1)) && s.has_edge(VertexId(1), VertexId(0)));
    assert_eq!(s.edge_count(), 4);
}

#[test]
fn jung_covers_the_targets() {
    let dir = TempDir::new().unwrap();
    let d = Digraph::complete_symmetric(4);
    let g = write(dir.path(), "g.json", &d.to_json());
    let u = write(dir.path(), "u.json", r#"{"order":[3,1,2]}"#);
    let r = arbor(&["jung", "-d", g.to_str().unwrap(), "--root", "0", "--targets", u.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    let t: Arborescence = load_arborescence(&v["tree"].to_string()).unwrap();
    assert!([1, 2, 3].iter().all(|&x| t.contains(VertexId(x))));
    assert!(is_normal(&d, &t).unwrap().is_normal());
}

#[test]
fn dot_output() {
    let dir = TempDir::new().unwrap();
    let (g, t) = two_cycle_star(dir.path());
    let r = arbor(&["export-dot", "-d", &g, "-t", &t]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("0 -> 1 [style=solid]") && r.stdout.contains("1 -> 2 [style=dashed]"));
    let r = arbor(&["assistant", "-d", &g, "-t", &t, "--format", "dot"]);
    assert!(r.stdout.contains("color=red"));
    let r = arbor(&["horizon", "--family", "directed_ladder", "--depth", "6", "--format", "dot"]);
    assert!(r.stdout.starts_with("digraph Horizon"));
}

#[test]
fn lazy_verbs() {
    let r = arbor(&["faithful", "--family", "directed_ladder", "--depth", "12"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["ok"], true);
    let r = arbor(&["comb", "--family", "infinite_star", "--star", "-k", "3", "--depth", "6"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["kind"], "star");
    let r = arbor(&["closure", "--family", "symmetric_ray", "--end", "0", "--set", "even"]);
    assert_eq!(r.json()["in_closure"], true);
    let r = arbor(&["necklace", "--family", "apex_necklace", "--end", "0", "-k", "3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn oracle_reads_the_seed_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_arbor"))
        .args(["oracle", "--count", "20"])
        .env("ARBOR_SEED", "17")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 17);
    assert_eq!(v["ok"], true);
}
