use std::process::Command;

use tourndecomp::verify::*;

fn strip(records: Vec<VerifyRecord>) -> Vec<VerifyRecord> {
    records.iter().map(VerifyRecord::without_timings).collect()
}

#[test]
fn reruns_are_identical_up_to_timings() {
    let dir = tempfile::tempdir().unwrap();
    let a = VerifyConfig::new(8, Selection::Sample { k: 20, seed: 5 }, Strategy::Both, dir.path().join("a.jsonl"));
    let b = VerifyConfig { out: dir.path().join("b.jsonl"), ..a.clone() };
    let sa = run_verify(&a).unwrap();
    let sb = run_verify(&b).unwrap();
    assert_eq!(sa, sb);
    assert!(sa.ok());
    assert_eq!(strip(read_records(&a.out).unwrap()), strip(read_records(&b.out).unwrap()));
}

#[test]
fn resume_completes_the_same_record_set() {
    let dir = tempfile::tempdir().unwrap();
    let full = VerifyConfig::new(5, Selection::All, Strategy::Exact, dir.path().join("full.jsonl"));
    run_verify(&full).unwrap();
    let mut part = VerifyConfig { out: dir.path().join("part.jsonl"), ..full.clone() };
    run_verify_limited(&part, 300).unwrap();
    assert_eq!(read_records(&part.out).unwrap().len(), 300);
    // A torn final line, as left by an interrupted write, is ignored on resume.
    let mut text = std::fs::read_to_string(&part.out).unwrap();
    text.push_str("{\"encoding\":\"1");
    std::fs::write(&part.out, text).unwrap();
    part.resume = true;
    run_verify(&part).unwrap();
    assert_eq!(strip(read_records(&part.out).unwrap()), strip(read_records(&full.out).unwrap()));
}

#[test]
fn five_vertex_gaps() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = VerifyConfig::new(5, Selection::All, Strategy::Exact, dir.path().join("r.jsonl"));
    let s = run_verify(&cfg).unwrap();
    assert_eq!(s.records, 1024);
    for r in read_records(&cfg.out).unwrap() {
        let exceptional = r.class != "Generic";
        assert_eq!(r.gap, Some(exceptional as i64), "{}", r.encoding);
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tourndecomp"))
}

#[test]
fn cli_commands() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("tt4.txt");
    std::fs::write(&file, "4\n0111\n0011\n0001\n0000\n").unwrap();

    let out = bin().arg("pn").arg(&file).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pn"], 4);

    let out = bin().arg("classify").arg(&file).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["class"], "Generic");

    let out = bin().args(["expander"]).arg(&file).args(["--nu", "1/4", "--tau", "1/4"]).output().unwrap();
    assert!(out.status.success());

    let out = bin().arg("decompose").arg(&file).args(["--strategy", "pipeline", "--trace"]).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["decomposition"].as_array().unwrap().len(), 4);

    let report = dir.path().join("v.jsonl");
    let out = bin().args(["verify", "--n", "4", "--all", "--strategy", "both", "--out"]).arg(&report).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read_records(&report).unwrap().len(), 64);
    assert!(dir.path().join("v.jsonl.summary.json").exists());

    let out = bin().arg("pn").arg(dir.path().join("missing.txt")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
