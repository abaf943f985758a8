//! The binary's JSON contract and exit codes.

use std::process::{Command, Output};

use serde_json::Value;

fn lodim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lodim")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> Value {
    let out = lodim(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("wall time"));
    doc
}

fn code(args: &[&str]) -> Option<i32> {
    lodim(args).status.code()
}

#[test]
fn dimension_of_the_integer_lattice() {
    let doc = ok(&["dim", "floor(x) = x and floor(y) = y", "--vars", "x,y"]);
    assert_eq!(doc["command"], "dim");
    assert_eq!(doc["result"]["dim"], 0);
    assert_eq!(doc["input"]["vars"], serde_json::json!(["x", "y"]));
    let line = ok(&["dim", "y = floor(x)", "--vars", "x,y"]);
    assert_eq!(line["result"]["dim"], 1);
    assert_eq!(line["result"]["witness_projection"], serde_json::json!([0]));
    assert_eq!(ok(&["dim", "x < x", "--vars", "x"])["result"]["dim"], "-inf");
}

#[test]
fn chain_of_the_line() {
    let doc = ok(&["dimrank", "true", "--vars", "x", "--emit-chain"]);
    assert_eq!(doc["result"], serde_json::json!({ "D": 1, "chain": ["true", "x = 0"] }));
    assert!(!doc["certificates"].as_array().unwrap().is_empty());
    let bare = ok(&["dimrank", "int(x)", "--vars", "x,y"]);
    assert_eq!(bare["result"], serde_json::json!({ "D": 1 }));
}

#[test]
fn set_operations() {
    assert_eq!(ok(&["qe", "exists y . y = x + 1 and y > 0", "--vars", "x"])["result"], "x > -1");
    assert_eq!(ok(&["decide", "forall x . exists y . y > x and int(y)"])["result"], true);
    assert_eq!(ok(&["interior", "0 <= x and x <= 1", "--vars", "x"])["result"], "x > 0 and x < 1");
    assert_eq!(ok(&["frontier", "int(x)", "--vars", "x"])["result"], "false");
    let cl = ok(&["closure", "0 < x and x < 1", "--vars", "x"]);
    assert!(cl["result"].is_string());
    let cells = ok(&["decompose", "x = 0 or y = 0", "--vars", "x,y", "--json"]);
    assert_eq!(cells["result"].as_array().unwrap().len(), 3);
    assert!(cells["certificates"].as_array().unwrap().iter().any(|c| c == "cells cover the set"));
    let rank = ok(&["rank", "0 < x and x < 1 and 0 < y and y < 1", "--vars", "x,y", "--witness"]);
    assert_eq!(rank["result"]["rank"], 2);
    assert_eq!(rank["witness"]["point"], serde_json::json!(["1/2 + eps1", "1/2 + eps2"]));
}

#[test]
fn discrete_closure_commands() {
    let m = ok(&["discl", "member", "alpha + beta", "--params", "alpha,beta", "--over", "alpha"]);
    assert_eq!(m["result"]["member"], false);
    let w = ok(&["discl", "witness", "alpha + 3/2", "--params", "alpha", "--over", "alpha"]);
    assert_eq!(w["witness"]["formula"], "int(2*(x - alpha))");
    assert_eq!(code(&["discl", "witness", "alpha", "--params", "alpha"]), Some(1));
}

#[test]
fn suites_report_and_exit_zero() {
    let doc = ok(&["suite", "--suite", "dim-laws", "--seed", "7", "--cases", "50"]);
    assert_eq!(doc["result"]["failures"], serde_json::json!([]));
    let pre = ok(&["suite", "--suite", "pregeometry", "--oracle", "discl", "--seed", "2", "--cases", "30"]);
    assert_eq!(pre["result"]["cases"], 30);
    let dir = std::env::temp_dir().join(format!("lodim-corpus-{}", std::process::id()));
    std::fs::write(&dir, "# vars: x\nint(x)\n0 < x and x < 1\n").unwrap();
    let cells = ok(&["suite", "--suite", "cells", "--corpus", dir.to_str().unwrap()]);
    assert_eq!(cells["result"]["cases"], 2);
    std::fs::remove_file(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    let args = ["suite", "--suite", "shadow", "--seed", "4", "--cases", "20"];
    assert_eq!(lodim(&args).stdout, lodim(&args).stdout);
    let args = ["rank", "int(y - x)", "--vars", "x,y", "--witness"];
    assert_eq!(lodim(&args).stdout, lodim(&args).stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["dim", "x +", "--vars", "x"]), Some(1));
    assert_eq!(code(&["dim", "x < y", "--vars", "x"]), Some(1));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["suite", "--suite", "nope"]), Some(1));
    assert_eq!(code(&["dimrank", "x > a", "--vars", "x", "--params", "a"]), Some(2));
    assert_eq!(code(&["decompose", "true", "--vars", "w,x,y,z"]), Some(2));
    assert_eq!(code(&["--help"]), Some(0));
}
