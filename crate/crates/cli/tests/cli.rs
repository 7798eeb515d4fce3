use std::path::{Path, PathBuf};
use std::process::Command;

use scaletop_core::verifier::{load_fixture, FixtureInstance, FIXTURE_NAMES};
use serde_json::Value;

struct Run {
    code: i32,
    json: Value,
    stderr: String,
}

fn scaletop(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_scaletop")).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    Run {
        code: out.status.code().unwrap(),
        json: serde_json::from_str(&stdout).unwrap_or(Value::Null),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("scaletop-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &str) -> PathBuf {
    let path = scratch(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn fixture_file(name: &str) -> PathBuf {
    let r = scaletop(&["--quiet", "fixtures", "--name", name]);
    assert_eq!(r.code, 0, "{name}");
    write(&format!("{name}.json"), &r.json.to_string())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fixtures_round_trip_through_the_cli() {
    for name in FIXTURE_NAMES {
        let r = scaletop(&["--quiet", "fixtures", "--name", name]);
        assert_eq!(r.code, 0);
        let back: FixtureInstance = serde_json::from_value(r.json).unwrap();
        assert_eq!(back, load_fixture(name).unwrap(), "{name}");
    }
    assert_eq!(scaletop(&["fixtures", "--name", "ex99"]).code, 2);
    let table = scaletop(&["fixtures"]);
    assert_eq!(table.code, 0);
    assert!(table.json.as_array().unwrap().iter().all(|row| row["expected"] == row["computed"]));
    assert!(!table.stderr.is_empty());
}

#[test]
fn check_reports_fixture_verdicts() {
    let ex12 = fixture_file("ex12");
    let local = scaletop(&["--quiet", "check", "--map", s(&ex12), "--mode", "local-strong"]);
    assert_eq!((local.code, &local.json["holds"]), (0, &Value::Bool(true)));
    assert!(local.stderr.is_empty());
    let global = scaletop(&["check", "--map", s(&ex12), "--mode", "global-strong"]);
    assert_eq!(global.code, 1);
    assert_eq!(global.json["certificate"]["violation"], "PREIMAGE_NOT_Q_OPEN");

    let ex13 = fixture_file("ex13");
    assert_eq!(scaletop(&["check", "--map", s(&ex13), "--mode", "global-strong"]).code, 0);
    for at in ["0", "sqrt2"] {
        let r = scaletop(&["check", "--map", s(&ex13), "--mode", "point-strong", "--at", at]);
        assert_eq!(r.code, 1, "{at}");
        assert!(r.json["certificate"].is_object());
    }

    let ex15 = fixture_file("ex15");
    assert_eq!(scaletop(&["check", "--map", s(&ex15), "--mode", "global-weak"]).code, 0);
    assert_eq!(scaletop(&["check", "--map", s(&ex15), "--mode", "point-weak", "--at", "1:1/2"]).code, 0);
    assert_eq!(scaletop(&["check", "--map", s(&ex15), "--mode", "point-strong", "--at", "2:1/2"]).code, 1);

    let probes = write(
        "probes.json",
        r#"[[{"set":[{"lo":{"a":"1/4","b":"0"},"hi":{"a":"1/2","b":"0"},"lo_closed":false,"hi_closed":false}],"sheet":0}]]"#,
    );
    let r = scaletop(&["--quiet", "check", "--map", s(&ex12), "--mode", "global-strong", "--probes", s(&probes)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["exhaustive"], false);
    let closed = write(
        "closed-probe.json",
        r#"[[{"set":[{"lo":{"a":"1/4","b":"0"},"hi":{"a":"1/2","b":"0"},"lo_closed":true,"hi_closed":false}],"sheet":0}]]"#,
    );
    assert_eq!(scaletop(&["check", "--map", s(&ex12), "--mode", "global-strong", "--probes", s(&closed)]).code, 2);
}

#[test]
fn check_rejects_bad_input() {
    let ex12 = fixture_file("ex12");
    assert_eq!(scaletop(&["check", "--map", s(&ex12), "--mode", "sideways-strong"]).code, 2);
    assert_eq!(scaletop(&["check", "--map", s(&ex12), "--mode", "point-strong"]).code, 2);
    let junk = write("junk.json", "{ not json");
    assert_eq!(scaletop(&["check", "--map", s(&junk), "--mode", "local-strong"]).code, 2);
    assert_eq!(scaletop(&["check", "--map", "/nonexistent/map.json", "--mode", "local-strong"]).code, 2);
    assert_eq!(scaletop(&["check", "--unknown-flag"]).code, 2);
    assert_eq!(scaletop(&[]).code, 2);
}

#[test]
fn finite_maps_are_checked() {
    let space = r#"{"n":2,"opens":[[],[0],[0,1]]}"#;
    let trivial = format!(r#"{{"space":{space},"tq":[[0],[0,1]],"assignment":[[0,1],[1]]}}"#);
    let map = write("finite-map.json", &format!(r#"{{"table":[1,0],"domain":{trivial},"codomain":{trivial}}}"#));
    let r = scaletop(&["check", "--map", s(&map), "--mode", "global-strong"]);
    assert_eq!(r.code, 1);
    assert!(r.json["certificate"].is_object());
    let id = write("finite-id.json", &format!(r#"{{"table":[0,1],"domain":{trivial},"codomain":{trivial}}}"#));
    assert_eq!(scaletop(&["check", "--map", s(&id), "--mode", "point-weak", "--at", "1"]).code, 0);
    assert_eq!(scaletop(&["check", "--map", s(&id), "--mode", "point-weak", "--at", "7"]).code, 2);
}

#[test]
fn validate_and_classify() {
    let good = write("space.json", r#"{"n":2,"opens":[[],[0],[0,1]]}"#);
    let r = scaletop(&["validate", "--space", s(&good)]);
    assert_eq!((r.code, r.json["validation"]["status"].as_str()), (0, Some("VALID")));
    let bad = write("bad-space.json", r#"{"n":2,"opens":[[],[0],[1]]}"#);
    let r = scaletop(&["validate", "--space", s(&bad)]);
    assert_eq!(r.code, 1);
    assert!(r.json["validation"]["violation"].is_object());

    let scale = write(
        "scale.json",
        r#"{"space":{"n":2,"opens":[[],[0],[0,1]]},"tq":[[0],[0,1]],"assignment":[[0,1],[1]]}"#,
    );
    assert_eq!(scaletop(&["validate", "--scale", s(&scale)]).code, 0);
    let c = scaletop(&["classify", "--scale", s(&scale)]);
    assert_eq!(c.code, 0);
    assert_eq!(c.json["is_F"], true);
    let broken = write(
        "broken-scale.json",
        r#"{"space":{"n":2,"opens":[[],[0],[0,1]]},"tq":[[0],[0,1]],"assignment":[[0,1],[0]]}"#,
    );
    assert_eq!(scaletop(&["validate", "--scale", s(&broken)]).code, 1);
    assert_eq!(scaletop(&["classify", "--scale", s(&broken)]).code, 2);
    assert_eq!(scaletop(&["validate", "--space", s(&good), "--scale", s(&scale)]).code, 2);

    let interval = r#"{"carrier":[{"set":[{"lo":{"a":"0","b":"0"},"hi":{"a":"1","b":"0"},"lo_closed":true,"hi_closed":true}],"sheet":0}],"kind":{"kind":"BQ_Oa","a":{"a":"A","b":"0"}}}"#;
    let ok = write("interval-scale.json", &interval.replace('A', "1"));
    assert_eq!(scaletop(&["validate", "--scale", s(&ok)]).code, 0);
    let negative = write("negative-scale.json", &interval.replace('A', "-1"));
    let r = scaletop(&["validate", "--scale", s(&negative)]);
    assert_eq!((r.code, r.json["validation"]["status"].as_str()), (1, Some("INVALID")));
}

#[test]
fn gaps_follow_the_threshold() {
    let f = fixture_file("ex17-f");
    let ff = fixture_file("ex17-ff");
    let r = scaletop(&["gaps", "--fn", s(&f), "--threshold", "1/10"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["gaps"][0]["gap"]["a"], "1/11");
    assert_eq!(r.json["gaps"][0]["x"]["value"]["a"], "1");
    let r = scaletop(&["gaps", "--fn", s(&ff), "--threshold", "1/10"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json["verdict"]["witnesses"][0]["gap"]["a"], "21/121");
    assert_eq!(scaletop(&["gaps", "--fn", s(&ff)]).code, 0);
    assert_eq!(scaletop(&["gaps", "--fn", s(&ff), "--threshold", "-1"]).code, 2);
    assert_eq!(scaletop(&["gaps", "--fn", s(&ff), "--threshold", "abc"]).code, 2);
}

#[test]
fn verify_and_enumerate() {
    let r = scaletop(&["verify", "--property", "P4", "--max-n", "2", "--mode", "exhaustive"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["verdict"], "CONFIRMED_ON_SWEEP");
    assert_eq!(r.json["property"], "P4");
    let p7b = scaletop(&["verify", "--property", "P7B", "--max-n", "3", "--mode", "sampled", "--seed", "1"]);
    assert_eq!(p7b.code, 1);
    assert!(!p7b.json["violations"].as_array().unwrap().is_empty());
    let budget = scaletop(&["--quiet", "verify", "--property", "T1", "--max-n", "2", "--mode", "sampled", "--budget", "4"]);
    assert_eq!(budget.json["config"]["scale_budget"], 4);
    assert_eq!(scaletop(&["verify", "--property", "T1", "--max-n", "3", "--mode", "exhaustive"]).code, 2);
    assert_eq!(scaletop(&["verify", "--property", "P4", "--max-n", "5", "--mode", "sampled"]).code, 2);
    assert_eq!(scaletop(&["verify", "--property", "P4", "--max-n", "2", "--mode", "random"]).code, 2);

    let out = Command::new(env!("CARGO_BIN_EXE_scaletop")).args(["--quiet", "enumerate", "--n", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> =
        String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 29);
    assert!(lines.iter().all(|l| l["n"] == 3));
    assert_eq!(scaletop(&["enumerate", "--n", "4", "--count"]).json["count"], 355);
    assert_eq!(scaletop(&["enumerate", "--n", "9"]).code, 2);
}
