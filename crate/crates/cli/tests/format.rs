use std::fs;
use std::path::PathBuf;

use elegant_cli::corpus::corpus;
use elegant_cli::format::{parse, parse_category, print, Document};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[test]
#[ignore = "rewrites fixtures/"]
fn regenerate_fixtures() {
    for (name, doc) in corpus().unwrap() {
        fs::write(dir().join(format!("{name}.json")), print(&doc)).unwrap();
    }
}

#[test]
fn shipped_fixtures_match_the_generator() {
    for (name, doc) in corpus().unwrap() {
        let shipped = fs::read_to_string(dir().join(format!("{name}.json"))).unwrap();
        assert_eq!(print(&doc), shipped, "{name}");
    }
}

#[test]
fn every_fixture_round_trips() {
    let mut n = 0;
    for entry in fs::read_dir(dir()).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let doc = parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(print(&doc), text, "{}", path.display());
        n += 1;
    }
    assert!(n >= 20);
}

#[test]
fn delta2_hash_is_pinned() {
    let text = fs::read_to_string(dir().join("category-delta2.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["sha256"], "54b7215f5c0f6096b4ee1fe5236ff0a760217ffe5e5224e83e19494abecd0b6e");
    let Document::Category(c) = parse(&text).unwrap() else { panic!("not a category") };
    assert_eq!(c.num_objects(), 3);
}

#[test]
fn dangling_dom_in_a_fixture() {
    let text = fs::read_to_string(dir().join("category-chain3.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["body"]["morphisms"][3]["dom"] = 9.into();
    v.as_object_mut().unwrap().remove("sha256");
    let e = parse_category(&v.to_string()).unwrap_err();
    assert_eq!(e.path, "body.morphisms[3].dom");
}
