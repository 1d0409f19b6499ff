use std::fs;
use std::path::PathBuf;

use assert_cmd::Command;
use serde_json::Value;

use nilricci::rational::parse_q;

fn cli() -> Command {
    let mut cmd = Command::cargo_bin("nilricci").expect("binary builds");
    cmd.env_remove("NILRICCI_FORMAT");
    cmd
}

fn json_of(args: &[&str]) -> (Value, i32) {
    let out = cli().arg("--format").arg("json").args(args).output().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout))
    });
    (v, out.status.code().unwrap())
}

fn triple(v: &Value) -> [u64; 3] {
    let a = v.as_array().unwrap();
    [a[0].as_u64().unwrap(), a[1].as_u64().unwrap(), a[2].as_u64().unwrap()]
}

fn write_tmp(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn catalog_source() -> Value {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/catalog.json");
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn catalog_list_and_show() {
    let (ids, code) = json_of(&["catalog", "list"]);
    assert_eq!(code, 0);
    let ids: Vec<&str> = ids.as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(ids.len() >= 40);
    for id in ["L3_2", "L5_9", "L6_11", "L6_19(-1)", "L6_26", "12457L1"] {
        assert!(ids.contains(&id), "{id}");
    }

    let out = cli().args(["catalog", "show", "L6_11"]).assert().success();
    let text = String::from_utf8_lossy(&out.get_output().stdout).to_string();
    assert!(text.contains("[e2, e5] = e6"), "{text}");

    let (m9, _) = json_of(&["catalog", "show", "m0(9)"]);
    assert_eq!(m9["dim"], 9);
    assert_eq!(m9["brackets"].as_array().unwrap().len(), 7);

    cli().args(["catalog", "show", "L7_1"]).assert().code(2);
}

#[test]
fn ricci_reports() {
    let (r, code) = json_of(&["ricci", "--algebra", "L3_2", "--metric", "diag:1,1,1"]);
    assert_eq!(code, 0);
    assert_eq!(triple(&r["signature"]), [2, 0, 1]);
    assert_eq!(r["ric_form"][0][0], "-1/2");
    assert_eq!(r["ric_form"][1][1], "-1/2");
    assert_eq!(r["ric_form"][2][2], "1/2");

    let (r, _) = json_of(&["ricci", "--algebra", "L6_11", "--metric", "diag:1,1,1,1,1,1"]);
    assert_eq!(triple(&r["signature"]), [3, 2, 1]);
    for row in r["reduced"].as_array().unwrap() {
        assert!(row.as_array().unwrap().iter().all(|c| c == "0"));
    }

    let dir = tempfile::tempdir().unwrap();
    let abelian = write_tmp(&dir, "abelian.json", r#"{"dim": 4, "brackets": []}"#);
    let (r, _) = json_of(&["ricci", "--algebra", abelian.to_str().unwrap(), "--metric", "diag:1,2,3,4"]);
    assert_eq!(triple(&r["signature"]), [0, 4, 0]);
}

#[test]
fn ricci_with_basis_change() {
    let (r, code) = json_of(&[
        "ricci",
        "--algebra",
        "L5_3",
        "--metric",
        "diag:1,1,2,1,1",
        "--basis-change",
        "e4,e3,e5+e3+e1,e1,e2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["p"], 0);
    assert_eq!(triple(&r["signature"]), [3, 0, 2]);
}

#[test]
fn ricci_rejects_bad_metrics() {
    let out = cli()
        .args(["ricci", "--algebra", "L3_2", "--metric", "diag:1,-1,1"])
        .assert()
        .code(2);
    assert!(String::from_utf8_lossy(&out.get_output().stderr).contains("positive definite"));
    cli()
        .args(["ricci", "--algebra", "L3_2", "--metric", "diag:1,1"])
        .assert()
        .code(2);
}

#[test]
fn invalid_algebra_files() {
    let dir = tempfile::tempdir().unwrap();
    // [e1,e2]=e3, [e1,e3]=e1 is not nilpotent
    let solvable = write_tmp(
        &dir,
        "s.json",
        r#"{"dim":3,"brackets":[{"i":1,"j":2,"rhs":{"3":"1"}},{"i":1,"j":3,"rhs":{"1":"1"}}]}"#,
    );
    cli()
        .args(["sign-set", "--algebra", solvable.to_str().unwrap()])
        .assert()
        .code(2);
    let jacobi = write_tmp(
        &dir,
        "j.json",
        r#"{"dim":3,"brackets":[{"i":1,"j":2,"rhs":{"3":"1"}},{"i":2,"j":3,"rhs":{"1":"1"}}]}"#,
    );
    cli()
        .args(["sign-set", "--algebra", jacobi.to_str().unwrap()])
        .assert()
        .code(2);
}

#[test]
fn sign_sets() {
    let (s, _) = json_of(&["sign-set", "--algebra", "L5_3"]);
    let got: Vec<[u64; 3]> = s["sign_set"].as_array().unwrap().iter().map(|r| triple(&r["signature"])).collect();
    assert_eq!(got, vec![[2, 1, 2], [2, 2, 1], [3, 0, 2], [3, 1, 1], [4, 0, 1]]);

    let (s, _) = json_of(&["sign-set", "--algebra", "L6_26"]);
    assert_eq!(s["sign_set"].as_array().unwrap().len(), 1);
    assert_eq!(triple(&s["sign_set"][0]["signature"]), [3, 0, 3]);

    // free 2-step algebra on three generators
    let dir = tempfile::tempdir().unwrap();
    let f = write_tmp(
        &dir,
        "n32.json",
        r#"{"dim":6,"brackets":[{"i":1,"j":2,"rhs":{"4":"1"}},{"i":1,"j":3,"rhs":{"5":"1"}},{"i":2,"j":3,"rhs":{"6":"1"}}]}"#,
    );
    let (s, _) = json_of(&["sign-set", "--algebra", f.to_str().unwrap()]);
    assert_eq!(s["sign_set"].as_array().unwrap().len(), 1);
    assert_eq!(triple(&s["sign_set"][0]["signature"]), [3, 0, 3]);
}

#[test]
fn realize_rejects_target_outside_sign_set() {
    let out = cli()
        .args(["realize", "--algebra", "L3_2", "--target", "1,1,1"])
        .assert()
        .code(2);
    assert!(String::from_utf8_lossy(&out.get_output().stderr).contains("not in Sign"));
}

#[test]
fn realize_target_round_trips_through_ricci() {
    let (r, code) = json_of(&["realize", "--algebra", "m0(6)", "--target", "3,1,2"]);
    assert_eq!(code, 0);
    let cert = &r["outcomes"][0];
    assert_eq!(cert["status"], "realized");
    assert_eq!(triple(&cert["achieved"]), [3, 1, 2]);
    for row in cert["gram"].as_array().unwrap() {
        for c in row.as_array().unwrap() {
            let s = c.as_str().unwrap();
            assert_eq!(parse_q(s).unwrap().to_string(), s);
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let metric = write_tmp(&dir, "g.json", &cert["metric"].to_string());
    let (back, _) = json_of(&["ricci", "--algebra", "m0(6)", "--metric", metric.to_str().unwrap()]);
    assert_eq!(triple(&back["signature"]), [3, 1, 2]);
    assert_eq!(back["gram"], cert["gram"]);
}

#[test]
fn realize_all_reports_obstructed_target() {
    let (r, code) = json_of(&["realize", "--algebra", "L6_6", "--all"]);
    let outs = r["outcomes"].as_array().unwrap();
    assert_eq!(outs.len(), 9);
    let unrealized: Vec<[u64; 3]> = outs
        .iter()
        .filter(|o| o["status"] == "unrealized")
        .map(|o| triple(&o["target"]))
        .collect();
    assert_eq!(unrealized, vec![[5, 0, 1]]);
    assert_eq!(code, 3);
}

#[test]
fn output_is_deterministic_and_env_selects_json() {
    let run = || {
        cli()
            .env("NILRICCI_FORMAT", "json")
            .args(["realize", "--algebra", "L6_14", "--all", "--seed", "7"])
            .output()
            .unwrap()
            .stdout
    };
    let a = run();
    assert_eq!(a, run());
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["outcomes"].as_array().unwrap().len(), 10);
}

#[test]
fn newton_overrides_are_accepted() {
    cli()
        .args(["realize", "--algebra", "L5_6", "--all", "--max-iters", "50", "--eps-ladder", "1/4,1/16"])
        .assert()
        .success();
    cli()
        .args(["realize", "--algebra", "L5_6", "--all", "--eps-ladder", "0"])
        .assert()
        .code(2);
}

#[test]
fn report_surfaces_corrupted_row() {
    let mut cat = catalog_source();
    let entries = cat["algebras"].as_array_mut().unwrap();
    entries.retain(|e| ["L4_3", "L5_6", "L6_10"].contains(&e["id"].as_str().unwrap()));
    let l43 = entries.iter_mut().find(|e| e["id"] == "L4_3").unwrap();
    l43["expected_signatures"] = serde_json::json!([[2, 0, 2], [2, 1, 1]]);
    let dir = tempfile::tempdir().unwrap();
    let f = write_tmp(&dir, "cat.json", &cat.to_string());

    let (r, code) = json_of(&["table3", "--catalog", f.to_str().unwrap()]);
    assert_eq!(code, 3);
    let rows = r["rows"].as_array().unwrap();
    let status: Vec<(&str, &str)> = rows
        .iter()
        .map(|r| (r["id"].as_str().unwrap(), r["status"].as_str().unwrap()))
        .collect();
    assert_eq!(status, vec![("L4_3", "FAIL"), ("L5_6", "PASS"), ("L6_10", "PASS")]);
    assert_eq!(rows[0]["sign_set_match"], false);

    let out = cli().args(["table3", "--catalog", f.to_str().unwrap()]).assert().code(3);
    assert!(String::from_utf8_lossy(&out.get_output().stdout).contains("MISMATCH"));
}

#[test]
fn report_on_uncorrupted_subset_passes() {
    let mut cat = catalog_source();
    cat["algebras"]
        .as_array_mut()
        .unwrap()
        .retain(|e| ["L3_2", "L5_9", "L6_11", "L6_21(0)"].contains(&e["id"].as_str().unwrap()));
    let dir = tempfile::tempdir().unwrap();
    let f = write_tmp(&dir, "cat.json", &cat.to_string());
    let (r, code) = json_of(&["table3", "--catalog", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["summary"]["fail"], 0);
}

#[test]
fn builtin_report_fails_only_on_centre_bound() {
    let (r, code) = json_of(&["table3"]);
    assert_eq!(code, 3);
    let rows = r["rows"].as_array().unwrap();
    assert!(rows.iter().all(|r| r["dim"].as_u64().unwrap() <= 6));
    assert!(rows.iter().all(|r| r["sign_set_match"] == true));
    let failed: Vec<&str> = rows
        .iter()
        .filter(|r| r["status"] == "FAIL")
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    assert_eq!(failed, vec!["L5_3", "L6_3", "L6_5", "L6_6", "L6_7", "L6_9"]);
    for row in rows.iter().filter(|r| r["status"] == "FAIL") {
        let missing: Vec<&Value> = row["outcomes"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|o| o["status"] == "unrealized")
            .collect();
        assert_eq!(missing.len(), 1);
        assert!(missing[0]["reason"].as_str().unwrap().contains("centre"));
    }
}

#[test]
fn corrupted_catalog_file_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_tmp(&dir, "bad.json", r#"{"algebras":[{"id":"X","dim":3,"brackets":[{"i":1,"j":2,"rhs":{"7":"1"}}]}]}"#);
    cli()
        .args(["table3", "--catalog", f.to_str().unwrap()])
        .assert()
        .code(2);
}
