use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cssreduce::io::{serialize_code, CodeFile};
use cssreduce::transforms::{alt_qubit_split_all, split_all_x_generators, thicken_all_first};
use cssreduce::{fixtures, CssCode};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cssreduce"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_fixture(dir: &Path, name: &str, code: &CssCode) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serialize_code(code)).unwrap();
    p
}

fn read(p: &Path) -> CodeFile {
    CodeFile::parse(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn labelled(c: CssCode) -> CssCode {
    let l = c.labels_or_numeric();
    c.with_labels(l).unwrap()
}

#[test]
fn params_prints_summary() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixture(dir.path(), "steane.json", &fixtures::steane());
    let out = cli(&["params", s(&f)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "N=7 K=1 wX=4 wZ=4 qX=3 qZ=3 nX=3 nZ=3 WX=12 WZ=12\n");
    let out = cli(&["params", s(&f), "--distance-cap", "4"]);
    assert!(String::from_utf8(out.stdout).unwrap().ends_with("dX=3 dZ=3\n"));
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_fixture(dir.path(), "good.json", &fixtures::toric(2).unwrap());
    assert_eq!(cli(&["validate", s(&good)]).status.code(), Some(0));

    let bad = CssCode::from_supports(2, &[vec![0]], &[vec![0, 1]]).unwrap();
    let bad = write_fixture(dir.path(), "bad.json", &bad);
    let out = cli(&["validate", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("anticommuting: X row 0, Z row 0"));
    assert_eq!(cli(&["params", s(&bad)]).status.code(), Some(1));

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\n  \"format_version\": \"1\",\n  \"n\": [\n}").unwrap();
    let out = cli(&["validate", s(&broken)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 3, column 7"));

    let range = dir.path().join("range.json");
    std::fs::write(&range, r#"{"format_version":"1","n":2,"x_generators":[[2]],"z_generators":[]}"#).unwrap();
    assert_eq!(cli(&["validate", s(&range)]).status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(cli(&[]).status.code(), Some(2));
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixture(dir.path(), "t.json", &fixtures::toric(2).unwrap());
    assert_eq!(cli(&["thicken", s(&f), "--l", "2", "--w", "2"]).status.code(), Some(2));
    assert_eq!(cli(&["thicken", s(&f), "--l", "2"]).status.code(), Some(2));
    assert_eq!(cli(&["reduce", s(&f), "--w", "2", "--l", "2"]).status.code(), Some(2));
    assert_eq!(cli(&["reduce", s(&f), "--epsilon", "1", "--w", "2", "--l", "2", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(cli(&["fixture", "nonsense"]).status.code(), Some(2));
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
}

#[test]
fn transforms_match_library() {
    let dir = tempfile::tempdir().unwrap();
    let steane = write_fixture(dir.path(), "steane.json", &fixtures::steane());
    let out = dir.path().join("out.json");

    assert_eq!(cli(&["split-x", s(&steane), "-o", s(&out)]).status.code(), Some(0));
    let expected = split_all_x_generators(&labelled(fixtures::steane())).unwrap().0;
    let file = read(&out);
    assert_eq!(file.to_code().unwrap(), expected);
    assert!(file.metadata["transform"].starts_with("split-x"));

    assert_eq!(cli(&["thicken", s(&steane), "--l", "3", "--all-k-one", "-o", s(&out)]).status.code(), Some(0));
    assert_eq!(read(&out).to_code().unwrap(), thicken_all_first(&labelled(fixtures::steane()), 3).unwrap());

    assert_eq!(cli(&["alt-split", s(&steane), "-o", s(&out)]).status.code(), Some(0));
    assert_eq!(read(&out).to_code().unwrap(), alt_qubit_split_all(&labelled(fixtures::steane())).unwrap());

    let toric = write_fixture(dir.path(), "toric.json", &fixtures::toric(3).unwrap());
    assert_eq!(cli(&["dualize", s(&toric), "-o", s(&out)]).status.code(), Some(0));
    assert_eq!(read(&out).to_code().unwrap(), fixtures::toric(3).unwrap().dualize());
}

#[test]
fn seeded_commands_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixture(dir.path(), "toric.json", &fixtures::toric(3).unwrap());
    let run = |args: &[&str]| cli(args).stdout;
    let a = run(&["thicken", s(&f), "--l", "3", "--w", "2", "--seed", "5"]);
    assert_eq!(a, run(&["thicken", s(&f), "--l", "3", "--w", "2", "--seed", "5"]));
    assert!(!a.is_empty());
    let a = run(&["reduce", s(&f), "--w", "2", "--l", "2", "--seed", "3"]);
    assert_eq!(a, run(&["reduce", s(&f), "--w", "2", "--l", "2", "--seed", "3"]));
    CodeFile::parse(std::str::from_utf8(&a).unwrap()).unwrap();
}

#[test]
fn reduce_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixture(dir.path(), "toric3.json", &fixtures::toric(3).unwrap());
    let out = dir.path().join("out.json");
    let rep = dir.path().join("r.json");
    let o = cli(&["reduce", s(&f), "--w", "2", "--l", "2", "--seed", "7", "-o", s(&out), "--report", s(&rep)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8(o.stdout).unwrap().contains("[final]"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(v["k_preserved"], true);
    let checks: Vec<&serde_json::Value> = v["stages"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|s| s["checks"].as_array().unwrap())
        .collect();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["holds"] == true));

    let code = read(&out).to_code().unwrap();
    assert!(code.commutes());
    assert_eq!(code.k(), 2);
    assert_eq!(v["output"]["n"], code.n());
    let labels = code.labels().unwrap();
    assert_eq!(labels.qubits.len(), code.n());
}

#[test]
fn reduce_with_epsilon() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixture(dir.path(), "rep.json", &fixtures::repetition_triangle());
    let o = cli(&["reduce", s(&f), "--epsilon", "1", "--seed", "1"]);
    // Without X checks there is nothing to bound, so ε gives no usable parameters.
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let f = write_fixture(dir.path(), "steane.json", &fixtures::steane());
    assert_eq!(cli(&["reduce", s(&f), "--epsilon", "1/0", "--seed", "1"]).status.code(), Some(2));
}

#[test]
fn balance_with_hints_and_search() {
    let dir = tempfile::tempdir().unwrap();
    let th = thicken_all_first(&fixtures::steane(), 2).unwrap();
    let f = write_fixture(dir.path(), "th.json", &th);
    let out = dir.path().join("b.json");
    let o = cli(&["balance", s(&f), "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let searched = read(&out);
    let o = cli(&["balance", s(&f), "--dx", "6", "--dz", "3", "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read(&out).to_code().unwrap(), searched.to_code().unwrap());
    assert_eq!(cli(&["balance", s(&f), "--dx", "6"]).status.code(), Some(2));
}

#[test]
fn soundness_and_exponents() {
    let dir = tempfile::tempdir().unwrap();
    let pair = CssCode::from_supports(2, &[vec![0, 1]], &[] as &[Vec<usize>]).unwrap();
    let f = write_fixture(dir.path(), "pair.json", &pair);
    let o = cli(&["soundness", s(&f), "--side", "z", "--w-cap", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["epsilon"], serde_json::json!([1, 1]));

    let o = cli(&[
        "exponents", "--alpha-x", "0.25", "--alpha-z", "0.25", "--beta-x", "0.25", "--beta-z", "0.25", "--sigma-x",
        "1.25", "--sigma-z", "1.25", "--tau-x", "1", "--tau-z", "1", "--epsilon", "1e-9",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["tau_new_x"].as_f64().unwrap() - 0.5).abs() < 1e-6);

    let o = cli(&["exponents", "--epsilon", "1", "--clasympt"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["sigma_prime_z"], 1.0);
    assert_eq!(cli(&["exponents", "--nu", "3"]).status.code(), Some(1));
    assert_eq!(cli(&["exponents", "--epsilon", "0"]).status.code(), Some(1));
}

#[test]
fn fixtures_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for (args, code) in [
        (vec!["steane"], fixtures::steane()),
        (vec!["toric", "--size", "4"], fixtures::toric(4).unwrap()),
        (vec!["repetition_triangle"], fixtures::repetition_triangle()),
        (vec!["random_css", "--n", "12", "--n-x", "4", "--seed", "9"], fixtures::random_css(12, 4, 9).unwrap()),
    ] {
        let out = dir.path().join("f.json");
        let mut a = vec!["fixture"];
        a.extend(args);
        a.extend(["-o", s(&out)]);
        assert_eq!(cli(&a).status.code(), Some(0));
        let text = std::fs::read_to_string(&out).unwrap();
        let file = CodeFile::parse(&text).unwrap();
        assert_eq!(file.to_code().unwrap(), code);
        assert_eq!(file.to_json(), text);
    }
    assert_eq!(cli(&["fixture", "toric", "--size", "1"]).status.code(), Some(1));
}
