use std::process::{Command, Output};

use serde_json::Value;

fn gconst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gconst")).args(args).env_remove("GCONST_DIGITS").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&gconst(&a))).unwrap()
}

#[test]
fn table_row_zero() {
    let o = gconst(&["table", "--n-max", "0", "--digits", "10", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n,eta,gamma,delta\n0,0.6321205588,1.0,-1.0\n");
}

#[test]
fn table_csv_has_sixteen_rows() {
    let o = gconst(&["table", "-n", "15", "-d", "10", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 17);
    assert_eq!(lines[8], "7,5020.6842841603,5019.8488726298,2.2708839827");
    assert_eq!(lines[16].split(',').nth(3), Some("313.9164765016"));
    assert!(!out.contains('\r'));
}

#[test]
fn text_uses_thousands_separators() {
    let out = stdout(&gconst(&["table", "-n", "8"]));
    assert!(out.contains("5,020.6842841603"));
    assert!(out.contains("40,243.6215733357"));
    assert!(out.trim_end().ends_with("verdict: pass"));
}

#[test]
fn format_parity() {
    let args = ["table", "-n", "12", "-d", "12"];
    let text = stdout(&gconst(&args));
    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let csv = stdout(&gconst(&csv_args));
    let doc = json(&args);
    for (line, row) in csv.lines().skip(1).zip(doc["rows"].as_array().unwrap()) {
        let cells: Vec<&str> = line.split(',').collect();
        for (i, key) in ["eta", "gamma", "delta"].iter().enumerate() {
            assert_eq!(row[key].as_str().unwrap(), cells[i + 1]);
            assert!(text.replace(',', "").contains(cells[i + 1]));
        }
    }
}

#[test]
fn json_envelope() {
    let doc = json(&["table", "-n", "3"]);
    assert_eq!(doc["command"], "table");
    assert_eq!(doc["precision"]["target_digits"], 10);
    assert!(doc["precision"]["working_bits"].as_u64().unwrap() > 0);
    assert_eq!(doc["verdict"], "pass");
    let row = &doc["rows"][2];
    assert_eq!(row["n"], 2);
    assert_eq!(row["certified"]["delta"], true);
    assert!(row["residual"].is_string());
}

#[test]
fn usage_errors() {
    assert_eq!(gconst(&["table", "--digits", "0"]).status.code(), Some(2));
    assert_eq!(gconst(&["table", "--n-max", "65"]).status.code(), Some(2));
    assert_eq!(gconst(&["asym", "delta-laplace", "--n", "2"]).status.code(), Some(2));
    assert_eq!(gconst(&["efun", "--n", "1", "--t", "1.2.3"]).status.code(), Some(2));
}

#[test]
fn digits_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_gconst"))
        .args(["value", "eta", "--n", "1", "--format", "csv"])
        .env("GCONST_DIGITS", "4")
        .output()
        .unwrap();
    assert!(stdout(&o).contains(",0.7965,"));
}

#[test]
fn values() {
    let v = |args: &[&str]| json(args)["rows"][0]["value"].as_str().unwrap().to_string();
    assert!(v(&["value", "delta-star", "--digits", "6"]).starts_with("-5.15146"));
    assert_eq!(v(&["value", "eta", "--n", "1", "--digits", "10"]), "0.7965995992");
    let g2 = v(&["value", "gamma", "--n", "2", "--digits", "100"]);
    assert_eq!(g2.split('.').nth(1).unwrap().len(), 100);
    assert!(g2.starts_with("1.978111990655945110790791303001269415878367041456428180886391567"));
    assert_eq!(v(&["value", "delta", "--n", "0"]), "-1.0");
}

#[test]
fn seed_check_cross_validates() {
    let doc = json(&["value", "delta", "--n", "6", "--seed-check"]);
    let row = &doc["rows"][0];
    assert_eq!(row["value"], "-1.4535032853");
    assert_eq!(row["cross_check"]["passed"], true);
    assert_eq!(doc["verdict"], "pass");
}

#[test]
fn efun_examples() {
    let v = |args: &[&str]| json(args)["rows"][0]["value"].as_str().unwrap().to_string();
    assert_eq!(v(&["efun", "--n", "1", "--t", "-1", "--digits", "10"]), "1.3179021514");
    assert_eq!(v(&["efun", "--n", "3", "--t", "0"]), "6.0");
    assert_eq!(v(&["efun", "--n", "0", "--t", "1"]), "0.6321205588");
}

#[test]
fn asym_reports() {
    let doc = json(&["asym", "delta-laplace", "--n", "15"]);
    let row = &doc["rows"][0];
    assert_eq!(row["certified"], "313.9164765016");
    let rel: f64 = row["relative_error"].as_str().unwrap().parse().unwrap();
    assert!(rel > 0.0 && rel < 0.05);
    let doc = json(&["asym", "eta-bracket", "--n", "1,5,10"]);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 3);
    assert!(doc["rows"].as_array().unwrap().iter().all(|r| r["contained"] == true));
    let doc = json(&["asym", "gamma-bracket", "--n", "1,5"]);
    assert!(doc["rows"].as_array().unwrap().iter().all(|r| r["contained"] == true));
}

#[test]
fn verify_exit_code_follows_verdict() {
    let o = gconst(&["verify", "--level", "quick", "--format", "json"]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = doc["rows"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["check"] == "identities" && c["passed"] == true));
    let pass = doc["verdict"] == "pass";
    assert_eq!(o.status.success(), pass);
    if !pass {
        let first = checks.iter().find(|c| c["passed"] == false).unwrap();
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(err.contains(first["check"].as_str().unwrap()));
    }
}
