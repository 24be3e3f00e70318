use std::path::PathBuf;

use apollonius::cli::run;
use apollonius::scene::parse_scene;

const FIX_H: &str = "\
# three unit spheres
site i 0 0 0 1
site j 4 0 0 1
site k 2 4 0 1
site a 2 1 5 1
site l 2 1 0 0.5
site m 2 1 20 1
site q 2 1 12 1
site g 2 -1/2 0 1/2
site big 0 0 0 5
";

fn scene_file(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("apollonius-cli-{}-{name}.txt", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

fn apollonius(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("apollonius").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn eval(name: &str, args: &[&str]) -> (i32, String) {
    let path = scene_file(name, FIX_H);
    let mut full = vec!["eval"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--scene", path.to_str().unwrap()]);
    let (code, out, _) = apollonius(&full);
    (code, out)
}

#[test]
fn eval_trisector() {
    assert_eq!(eval("trisector", &["trisector", "i", "j", "k"]), (0, "HYPERBOLIC\n".into()));
    let (code, out) = eval("trisector-audit", &["trisector", "i", "j", "k", "--audit"]);
    assert_eq!(code, 0);
    assert_eq!(out, "HYPERBOLIC\nmax_degree=4\n");
}

#[test]
fn eval_edge_conflict() {
    let (code, out) = eval("edge", &["edge-conflict", "i", "j", "k", "l", "m", "q", "--compare-oracle"]);
    assert_eq!(code, 0);
    assert_eq!(out, "RIGHT_VERTEX\noracle=RIGHT_VERTEX\n");
}

#[test]
fn eval_other_predicates() {
    assert_eq!(eval("distance", &["distance", "i", "j", "k", "a"]), (0, "(POS,NEG)\n".into()));
    assert_eq!(eval("shadow", &["shadow", "i", "j", "k", "a"]), (0, "RIGHT_RAY\n".into()));
    assert_eq!(eval("order", &["order", "i", "j", "k", "l", "m"]), (0, "ikja,ijka,ikjb\n".into()));
}

#[test]
fn exit_codes() {
    // The shadow of `g` is a single point of the trisector.
    assert_eq!(eval("degenerate", &["shadow", "i", "j", "k", "g"]), (2, "DEGENERATE_SHADOW\n".into()));
    assert_eq!(eval("contained", &["trisector", "i", "j", "big"]), (3, "CONTAINED_SITES\n".into()));
    assert_eq!(eval("arity", &["shadow", "i", "j", "k"]).0, 4);
    assert_eq!(eval("unknown-id", &["shadow", "i", "j", "k", "nope"]).0, 4);
    assert_eq!(eval("unknown-predicate", &["voronoi", "i", "j", "k"]).0, 4);
    let bad = scene_file("bad", "site a 0 0 0 -1\n");
    assert_eq!(apollonius(&["eval", "trisector", "a", "a", "a", "--scene", bad.to_str().unwrap()]).0, 4);
    assert_eq!(apollonius(&["frobnicate"]).0, 4);
}

#[test]
fn fuzz_reports() {
    let (code, out, _) = apollonius(&["fuzz", "shadow", "--count", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("compared 0, agreed 0"), "{out}");
    let first = apollonius(&["fuzz", "all", "--seed", "5", "--count", "30"]);
    let second = apollonius(&["fuzz", "all", "--seed", "5", "--count", "30"]);
    assert_eq!(first.0, 0, "{}", first.1);
    assert_eq!(first, second);
}

#[test]
fn generated_scenes_evaluate() {
    let (code, out, _) = apollonius(&["gen", "edge-conflict", "--seed", "9", "--count", "3"]);
    assert_eq!(code, 0);
    let scene = parse_scene(&out).unwrap();
    assert_eq!(scene.len(), 18);
    let path = scene_file("generated", &out);
    for line in out.lines().filter_map(|l| l.strip_prefix("# eval ")) {
        let mut args = vec!["eval"];
        args.extend(line.split_whitespace());
        args.extend_from_slice(&["--scene", path.to_str().unwrap()]);
        let (code, result, _) = apollonius(&args);
        assert!(matches!(code, 0 | 2), "{line}: {result}");
        assert_eq!(result.lines().count(), 1);
    }
}

#[test]
fn degree_audit_runs() {
    let (code, out, _) = apollonius(&["degree-audit", "--count", "20"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().any(|l| l.starts_with("shadow max_degree=") && l.ends_with("ok")), "{out}");
    assert!(out.contains("order-orient3d max_degree="));
}
