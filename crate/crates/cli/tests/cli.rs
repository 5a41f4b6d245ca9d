use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

/// Exit code and stdout.
fn elegant(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_elegant")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn f(name: &str) -> String {
    fixture(name).display().to_string()
}

fn tmp(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

#[test]
fn unknown_suite_is_invalid_input() {
    let (code, out) = elegant(&["props", "run", "unknown"]);
    assert_eq!(code, 2);
    assert!(out.contains("unknown suite"));
}

#[test]
fn bad_arguments_are_invalid_input() {
    assert_eq!(elegant(&["cat", "frobnicate"]).0, 2);
}

#[test]
fn soa_with_tiny_caps_reports_bounds() {
    let (code, out) = elegant(&["props", "run", "soa-invariants", "--max-nodes", "10"]);
    assert_eq!(code, 3, "{out}");
    assert!(out.contains("Bounds"));
    let (code, out) = elegant(&["props", "run", "soa-invariants", "--max-stages", "1"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn universe_build_over_budget() {
    assert_eq!(elegant(&["univ", "build", "--max-nodes", "5"]).0, 3);
}

#[test]
fn dangling_dom_is_reported_by_path() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(fixture("category-chain3")).unwrap()).unwrap();
    v["body"]["morphisms"][3]["dom"] = 9.into();
    v.as_object_mut().unwrap().remove("sha256");
    let path = tmp(dir.path(), "bad.json");
    fs::write(&path, v.to_string()).unwrap();
    let (code, out) = elegant(&["cat", "validate", &path]);
    assert_eq!(code, 2);
    assert!(out.contains("body.morphisms[3].dom"), "{out}");
}

#[test]
fn broken_composition_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(fixture("category-delta2")).unwrap()).unwrap();
    // redirect one composite to a parallel arrow, keeping it well typed
    let morphisms = v["body"]["morphisms"].clone();
    let compose = v["body"]["compose"].as_array_mut().unwrap();
    let ends = |k: u64| (morphisms[k as usize]["dom"].clone(), morphisms[k as usize]["cod"].clone());
    let (k, alt) = compose
        .iter()
        .enumerate()
        .find_map(|(k, e)| {
            let h = e[2].as_u64().unwrap();
            (0..morphisms.as_array().unwrap().len() as u64).find(|&o| o != h && ends(o) == ends(h)).map(|o| (k, o))
        })
        .expect("some parallel arrow");
    compose[k][2] = alt.into();
    v.as_object_mut().unwrap().remove("sha256");
    let path = tmp(dir.path(), "bad.json");
    fs::write(&path, v.to_string()).unwrap();
    let (code, out) = elegant(&["cat", "validate", &path]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("violation"));
}

#[test]
fn predicates_exit_with_their_verdict() {
    assert_eq!(elegant(&["sset", "fib", &f("map1-simplex1-x-2pt")]).0, 0);
    assert_eq!(elegant(&["sset", "fib", &f("map1-horn-incl")]).0, 1);
    assert_eq!(elegant(&["reedy", "elegance", &f("reedy-delta2")]).0, 0);
    assert_eq!(elegant(&["reedy", "elegance", &f("reedy-non-split-epi")]).0, 1);
    let s = f("map1-simplex1-x-2pt");
    assert_eq!(elegant(&["equiv", "weq", &f("map1-swap-over-simplex1"), &s, &s]).0, 0);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let path = tmp(dir.path(), tag);
        let (code, out) = elegant(&["props", "run", "generators", "--seed", "7", "--instances", "10", "--json-out", &path]);
        assert_eq!(code, 0);
        (out, fs::read(&path).unwrap())
    };
    assert_eq!(run("a.json"), run("b.json"));
    let build = |tag: &str| {
        let path = tmp(dir.path(), tag);
        assert_eq!(elegant(&["univ", "build", "-o", &path]).0, 0);
        fs::read_to_string(&path).unwrap()
    };
    let u = build("u1.json");
    assert_eq!(u, build("u2.json"));
    assert_eq!(u, fs::read_to_string(fixture("universe-k3-n1")).unwrap());
}

#[test]
fn extend_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let (q, top) = (tmp(dir.path(), "q.json"), tmp(dir.path(), "top.json"));
    let (r, i, p) = (f("reedy-arrow"), f("arrow1-generator-0-0"), f("arrow1-fibration-2pt"));
    let (code, out) = elegant(&["extend-reedy", "run", &r, &i, &p, "-o", &q, "--top-out", &top]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = elegant(&["extend-reedy", "verify", &r, &i, &p, &q, &top]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn equivalence_extension_from_files() {
    let (code, out) = elegant(&[
        "univ",
        "equiv-extend",
        &f("map1-boundary-incl"),
        &f("map1-simplex1-x-2pt"),
        &f("map1-restricted-2pt"),
        &f("map1-restricted-swap"),
        "--kappa",
        "5",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("i*v = w true"));
}

#[test]
fn outputs_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = tmp(dir.path(), "h.json");
    assert_eq!(elegant(&["sset", "object", "horn", "2", "1", "--trunc-dim", "2", "-o", &out]).0, 0);
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text, fs::read_to_string(fixture("sset2-horn2-1")).unwrap());
    let prod = tmp(dir.path(), "p.json");
    assert_eq!(elegant(&["psh", "limit", &f("sset1-simplex1"), &f("sset1-2pt"), "-o", &prod]).0, 0);
    let doc = elegant_cli::format::parse_presheaf(&fs::read_to_string(&prod).unwrap()).unwrap();
    assert_eq!(doc.value.sizes(), &[4, 6]);
}
