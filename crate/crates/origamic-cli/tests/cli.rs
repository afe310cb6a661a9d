use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../origamic/tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_origamic")).args(args).env_remove("ORIGAMIC_CONFIG").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn compile_writes_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["compile", data("half_adder.json").to_str().unwrap(), "-o", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for ext in ["fold", "svg", "txt"] {
        assert!(dir.path().join(format!("half_adder.{ext}")).exists());
    }
    let v = run(&["validate", dir.path().join("half_adder.fold").to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains("kawasaki failures 0"));
}

#[test]
fn nand_reports_four_useful_pleats() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["compile", data("nand.json").to_str().unwrap(), "-o", dir.path().to_str().unwrap()]);
    assert!(stdout(&o).contains("useful pleats 4"));
}

#[test]
fn malformed_netlist_fails_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        "{\"gates\": [\n  {\"id\": \"a\", \"kind\": \"INPUT\", \"out\": \"x\"},\n  {\"id\": \"b\", \"kind\": \"INPUT\", \"out\": \"x\"}\n]}\n",
    )
    .unwrap();
    let o = run(&["compile", bad.to_str().unwrap(), "-o", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let e = stderr(&o);
    assert!(e.contains("more than one driver"), "{e}");
    assert!(e.contains("bad.json:2:"), "{e}");
}

#[test]
fn simulate_nand_truth_table() {
    let o = run(&["simulate", data("nand.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<String> = stdout(&o).lines().skip(1).map(String::from).collect();
    assert_eq!(rows, ["0 0 0 | 1", "1 0 1 | 1", "2 1 0 | 1", "3 1 1 | 0"]);
    let r = run(&["simulate", "--reference", data("nand.json").to_str().unwrap()]);
    assert_eq!(stdout(&r), stdout(&o));
}

#[test]
fn simulate_register_with_stimulus() {
    let o = run(&["simulate", data("register2.json").to_str().unwrap(), data("register2_stimulus.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = run(&[
        "simulate",
        "--reference",
        data("register2.json").to_str().unwrap(),
        data("register2_stimulus.json").to_str().unwrap(),
    ]);
    assert_eq!(stdout(&o), stdout(&r));
    // Loaded on cycles 0, 3 and 4.
    let q: Vec<String> = stdout(&o).lines().skip(1).map(|l| l.split(" | ").nth(1).unwrap().to_string()).collect();
    assert_eq!(q, ["1 0", "1 0", "1 0", "0 1", "1 0", "1 0"]);
    assert_eq!(run(&["simulate", data("dff.json").to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn gadget_theta_limits() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.fold");
    let out = out.to_str().unwrap();
    assert_eq!(run(&["gadget", "nae", "--theta", "60", "-o", out]).status.code(), Some(0));
    let e = run(&["gadget", "nae", "--theta", "30", "-o", out]);
    assert_eq!(e.status.code(), Some(1));
    assert!(stderr(&e).contains("30"));
    assert_eq!(run(&["gadget", "reflector", "--theta", "90", "-o", out]).status.code(), Some(1));
    assert_eq!(run(&["gadget", "spiral", "-o", out]).status.code(), Some(2));
}

#[test]
fn validate_nae_states_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nae.fold");
    let out = out.to_str().unwrap();
    // Port order is a, b, out; the relation is NAE(a, b, not out).
    assert_eq!(run(&["gadget", "nae", "--states", "0,1,0", "-o", out]).status.code(), Some(0));
    let o = run(&["validate", out, "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("oracle Foldable"));
    assert_eq!(run(&["gadget", "nae", "--states", "1,1,0", "-o", out]).status.code(), Some(0));
    let o = run(&["validate", out, "--oracle"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("oracle Unfoldable"));
}

#[test]
fn validate_too_large() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["compile", data("nand.json").to_str().unwrap(), "-o", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let fold = dir.path().join("nand.fold");
    let v = run(&["validate", fold.to_str().unwrap(), "--oracle"]);
    assert_eq!(v.status.code(), Some(1));
    assert!(stdout(&v).contains("oracle TooLarge"));
    assert_eq!(run(&["validate", fold.to_str().unwrap(), "--face-limit", "4"]).status.code(), Some(2));
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.cfg");
    std::fs::write(&cfg, "pitch = 2\nface_limit = 3\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_origamic"))
        .args(["simulate", data("nand.json").to_str().unwrap()])
        .env("ORIGAMIC_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("c.cfg:2:"));
    std::fs::write(&cfg, "spacing = 1/2\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_origamic"))
        .args(["compile", data("not.json").to_str().unwrap(), "-o", dir.path().to_str().unwrap(), "--spacing", "2"])
        .env("ORIGAMIC_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn export_svg_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let fold = dir.path().join("p.fold");
    assert_eq!(run(&["gadget", "pleat", "-o", fold.to_str().unwrap()]).status.code(), Some(0));
    let svg = dir.path().join("p.svg");
    assert_eq!(run(&["export", fold.to_str().unwrap(), "-o", svg.to_str().unwrap()]).status.code(), Some(0));
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["validate", "/nonexistent.fold"]).status.code(), Some(2));
}
