use std::path::{Path, PathBuf};
use std::process::Command;

use ocha::cli::{fixture_document, FixtureName};
use ocha::document::{McDocument, StructureDocument};
use ocha::structures::OchaStructure;
use serde_json::Value;

fn ocha(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ocha")).args(args).output().expect("binary runs");
    let mut text = String::from_utf8(out.stdout).unwrap();
    text.push_str(&String::from_utf8(out.stderr).unwrap());
    (out.status.code().expect("exit code"), text)
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let (code, text) = ocha(&all);
    (code, serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")))
}

struct Scratch(PathBuf);

impl Scratch {
    fn new(name: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("ocha-cli-{name}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn path(&self, file: &str) -> String {
        self.0.join(file).display().to_string()
    }

    fn fixture(&self, name: FixtureName, bound: usize) -> String {
        let path = self.path(&format!("{name:?}-{bound}.json"));
        std::fs::write(&path, fixture_document(name, bound).unwrap()).unwrap();
        path
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn fact<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["facts"].as_array().unwrap().iter().find(|f| f["name"] == name).map(|f| &f["value"]).unwrap_or_else(|| panic!("no fact {name}"))
}

#[test]
fn bundled_fixture_files_are_current() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for (name, file) in [
        (FixtureName::DualNumbers, "dual-numbers"),
        (FixtureName::CorruptedDualNumbers, "corrupted-dual-numbers"),
        (FixtureName::Massey, "massey"),
        (FixtureName::AbelianLie, "abelian-lie"),
        (FixtureName::ExactSquareLie, "exact-square-lie"),
        (FixtureName::ObstructedLie, "obstructed-lie"),
        (FixtureName::SmallDgLie, "small-dg-lie"),
        (FixtureName::Leibniz, "leibniz"),
        (FixtureName::ExtendedLeibniz, "extended-leibniz"),
        (FixtureName::Frobenius, "frobenius"),
        (FixtureName::Empty, "empty"),
    ] {
        let on_disk = std::fs::read_to_string(dir.join(format!("{file}.json"))).unwrap();
        assert_eq!(on_disk, fixture_document(name, 4).unwrap(), "{file}");
    }
}

#[test]
fn check_verdicts_and_exit_codes() {
    let dir = Scratch::new("check");
    let good = dir.fixture(FixtureName::DualNumbers, 4);
    let (code, report) = json(&["check", &good, "--kind", "ainf"]);
    assert_eq!(code, 0);
    assert_eq!(report["verdict"], "PASS");

    let bad = dir.fixture(FixtureName::CorruptedDualNumbers, 4);
    let (code, report) = json(&["check", &bad, "--kind", "ainf", "--bound", "3"]);
    assert_eq!(code, 1);
    assert_eq!(report["verdict"], "FAIL");
    let v = &report["violations"][0];
    assert_eq!(v["relation"], serde_json::json!([0, 3]));
    assert_eq!(v["open"], serde_json::json!(["1", "1", "x"]));

    let (code, _) = json(&["check", &dir.fixture(FixtureName::Empty, 4), "--kind", "ocha"]);
    assert_eq!(code, 0);
    let (code, report) = json(&["check", &good, "--kind", "ainf", "--bound", "9"]);
    assert_eq!(code, 2);
    assert!(report["error"].as_str().unwrap().contains("exceeds"));
    for (kind, fixture) in [("linf", FixtureName::SmallDgLie), ("ocha", FixtureName::Leibniz), ("module", FixtureName::Leibniz), ("cyclic", FixtureName::Frobenius)] {
        let (code, report) = json(&["check", &dir.fixture(fixture, 4), "--kind", kind]);
        assert_eq!(code, 0, "{kind}: {report}");
    }
}

#[test]
fn parse_errors_name_the_line() {
    let dir = Scratch::new("parse");
    let path = dir.path("broken.json");
    std::fs::write(&path, "{\n  \"format\": \"structure\",\n  \"version\": 1,\n  \"bound\": \"two\"\n}\n").unwrap();
    let (code, text) = ocha(&["check", &path, "--kind", "ocha"]);
    assert_eq!(code, 2);
    assert!(text.contains("line 4"), "{text}");
    let float = dir.path("float.json");
    let doc = fixture_document(FixtureName::DualNumbers, 2).unwrap().replacen("\"x\": \"1\"", "\"x\": \"1.0\"", 1);
    std::fs::write(&float, doc).unwrap();
    let (code, text) = ocha(&["check", &float, "--kind", "ainf"]);
    assert_eq!(code, 2);
    assert!(text.contains("exact rational"), "{text}");
    let (code, _) = ocha(&["check"]);
    assert_eq!(code, 2);
}

#[test]
fn transfer_output_round_trips_through_check() {
    let dir = Scratch::new("transfer");
    let input = dir.fixture(FixtureName::Massey, 4);
    let (minimal, inclusion) = (dir.path("minimal.json"), dir.path("inclusion.json"));
    let (code, report) = json(&["transfer", &input, "--out", &minimal, "--inclusion-out", &inclusion]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(fact(&report, "betti open"), &serde_json::json!({"0": 1, "1": 1}));
    assert_eq!(fact(&report, "n0,2 induced on cohomology"), true);
    assert_eq!(json(&["check", &minimal, "--kind", "ainf"]).0, 0);
    assert_eq!(json(&["check", &inclusion, "--kind", "morphism", "--bound", "3"]).0, 0);

    // Minimal input comes back unchanged; acyclic input has an empty model.
    let again = dir.path("again.json");
    assert_eq!(json(&["transfer", &minimal, "--out", &again]).0, 0);
    let read = |p: &str| -> OchaStructure { StructureDocument::parse(&std::fs::read_to_string(p).unwrap()).unwrap().to_structure().unwrap() };
    assert_eq!(read(&again), read(&minimal));
}

#[test]
fn maurer_cartan_commands() {
    let dir = Scratch::new("mc");
    let out = dir.path("mc.json");
    let (code, report) = json(&["mc", &dir.fixture(FixtureName::AbelianLie, 4), "--seed", "x", "--order", "3", "--out", &out]);
    assert_eq!(code, 0);
    assert_eq!(fact(&report, "solution"), &serde_json::json!({"x": ["0", "1"]}));
    let doc = McDocument::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc.order, 3);

    let (code, report) = json(&["mc", &dir.fixture(FixtureName::ObstructedLie, 4), "--seed", "x", "--order", "3"]);
    assert_eq!(code, 3);
    assert_eq!(report["verdict"], "OBSTRUCTED");
    assert_eq!(fact(&report, "obstruction order"), 2);

    let lie = dir.fixture(FixtureName::ExactSquareLie, 4);
    let (code, report) = json(&["gauge", &lie, "--cbar", "x@1,w@2=1/2", "--order", "3"]);
    assert_eq!(code, 0);
    assert_eq!(fact(&report, "closed endpoint"), &serde_json::json!({"w": ["0", "0", "1/2"], "x": ["0", "1"]}));
    let (code, _) = json(&["gauge", &lie, "--cbar", "x@1", "--order", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn deformed_structures_pass_the_checker() {
    let dir = Scratch::new("deform");
    let out = dir.path("deformed.json");
    let (code, report) = json(&["deform", &dir.fixture(FixtureName::Leibniz, 4), "--cbar", "Z@1", "--order", "3", "--out", &out]);
    assert_eq!(code, 0);
    assert_eq!(fact(&report, "weak"), false);
    assert_eq!(json(&["check", &out, "--kind", "ainf"]).0, 0);

    let (code, report) = json(&["deform", &dir.fixture(FixtureName::ExtendedLeibniz, 4), "--cbar", "Z@1", "--order", "3", "--out", &out]);
    assert_eq!(code, 0);
    assert_eq!(fact(&report, "weak"), true);
    assert_eq!(json(&["check", &out, "--kind", "ainf"]).0, 0);

    let full = dir.path("full.json");
    assert_eq!(json(&["deform", &dir.fixture(FixtureName::Leibniz, 4), "--cbar", "Z@1", "--order", "3", "--full", "--out", &full]).0, 0);
    assert_eq!(json(&["check", &full, "--kind", "ocha"]).0, 0);
}

#[test]
fn tree_counts_and_d_squared() {
    let (_, report) = json(&["trees", "--operad", "a", "--leaves", "4"]);
    assert_eq!(fact(&report, "trees"), 11);
    let (_, report) = json(&["trees", "--operad", "a", "--leaves", "2"]);
    assert_eq!(fact(&report, "trees"), 1);
    let (code, report) = json(&["trees", "--operad", "l", "--leaves", "4", "--check-d2"]);
    assert_eq!(code, 0);
    assert_eq!(report["verdict"], "PASS");
    let (code, _) = json(&["trees", "--operad", "oc", "--leaves", "20"]);
    assert_eq!(code, 2);

    let dir = Scratch::new("trees");
    let graph = dir.path("graph.txt");
    assert_eq!(json(&["trees", "--operad", "l", "--leaves", "3", "--differential", "--out", &graph]).0, 0);
    let text = std::fs::read_to_string(&graph).unwrap();
    assert_eq!(text.matches("# ").count(), 4);
}

#[test]
fn reports_are_deterministic() {
    let dir = Scratch::new("determinism");
    let file = dir.fixture(FixtureName::CorruptedDualNumbers, 4);
    let strip = |mut v: Value| {
        v["timing_ms"] = Value::Null;
        v
    };
    let first = strip(json(&["check", &file, "--kind", "ocha"]).1);
    let second = strip(json(&["check", &file, "--kind", "ocha"]).1);
    assert_eq!(first, second);
}
