use rosenthal_core::report::{render_json_rows, JsonRow, CSV_HEADER};
use serde_json::Value;
use std::process::{Command, Output};

fn rosenthal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rosenthal")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(args: &[&str]) -> Value {
    let o = rosenthal(args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn eval_even_integer_is_exact() {
    let o = rosenthal(&["eval", "--p", "6"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("K  31 ") && l.contains("route=combinatorial")));
    assert!(text.lines().any(|l| l.starts_with("L  41 ") && l.contains("route=combinatorial")));

    let v = json(&["eval", "--p", "6", "--format", "json"]);
    let by_kind = |k: &str| v.as_array().unwrap().iter().find(|r| r["kind"] == k).unwrap().clone();
    assert_eq!(by_kind("K")["value"], "31");
    assert_eq!(by_kind("L")["value"], "41");
    let s: f64 = by_kind("S")["value"].as_str().unwrap().parse().unwrap();
    let g: f64 = by_kind("G")["value"].as_str().unwrap().parse().unwrap();
    assert!((s - 31f64.powf(1.0 / 6.0)).abs() < 1e-12);
    assert!((g - 41f64.powf(1.0 / 6.0)).abs() < 1e-12);
}

#[test]
fn eval_at_two_is_one() {
    let v = json(&["eval", "--p", "2", "--format", "json"]);
    for row in v.as_array().unwrap() {
        assert_eq!(row["value"], "1", "{row}");
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&rosenthal(&["eval", "--p", "1.5"])), 2);
    assert_eq!(code(&rosenthal(&["eval", "--p", "-3"])), 2);
    assert_eq!(code(&rosenthal(&["eval"])), 2);
    assert_eq!(code(&rosenthal(&["frobnicate"])), 2);
    assert_eq!(code(&rosenthal(&["eval", "--p", "6", "--tol", "0.1"])), 2);
    assert_eq!(code(&rosenthal(&["eval", "--p", "6", "--tol", "1e-16"])), 2);
    assert_eq!(code(&rosenthal(&["table", "--p-min", "5", "--p-max", "4"])), 2);
    assert_eq!(code(&rosenthal(&["mc", "--kind", "L", "--p", "13"])), 2);
    assert_eq!(code(&rosenthal(&["mc", "--kind", "ratio", "--p", "6", "--family", "cauchy"])), 2);
    assert_eq!(code(&rosenthal(&["bounds", "--p", "10"])), 2);
    assert_eq!(code(&rosenthal(&["--help"])), 0);
}

#[test]
fn tolerance_flag_accepted() {
    let o = rosenthal(&["eval", "--p", "7.3", "--tol", "1e-6", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("p,kind,route,value,rel_error\n"));
}

#[test]
fn table_matches_printed_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("table.csv");
    let o = rosenthal(&["table", "--p-min", "2", "--p-max", "21", "--step", "0.5", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 40);
    assert!(lines.contains(&"8,379,combinatorial,715,combinatorial,2.100534898013709,2.2739884538134296,379,715,0.000e0,0.000e0"));
    for l in &lines[1..] {
        let c: Vec<&str> = l.split(',').collect();
        assert_eq!(c.len(), 11, "{l}");
        let p: f64 = c[0].parse().unwrap();
        if p.fract() == 0.0 && (p as u32).is_multiple_of(2) {
            assert_eq!((c[2], c[4]), ("combinatorial", "combinatorial"), "{l}");
        }
    }
    let row13: Vec<&str> = lines.iter().find(|l| l.starts_with("13,")).unwrap().split(',').collect();
    for dev in [row13[9], row13[10]] {
        assert!(dev.parse::<f64>().unwrap().abs() <= 5e-4);
    }

    let errata = std::fs::read_to_string(dir.path().join("table.csv.errata.txt")).unwrap();
    assert!(errata.lines().any(|l| l.starts_with("p=9 quantity=K paper=1126.5 computed=1516.48")));
    assert!(errata.lines().all(|l| l.starts_with("p=") && l.contains(" rel_dev=")));
    assert!(!errata.contains("p=8 "));
}

#[test]
fn table_json_round_trips() {
    let o = rosenthal(&["table", "--p-min", "2", "--p-max", "12", "--step", "0.5", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let rows: Vec<JsonRow> = serde_json::from_str(&text).unwrap();
    assert_eq!(rows.len(), 21);
    assert_eq!(render_json_rows(&rows), text);
    let v: Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&String> = v[0].as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), CSV_HEADER.split(',').count());
    assert!(v[1]["paper_K"].is_null());
}

#[test]
fn explicit_errata_path() {
    let dir = tempfile::tempdir().unwrap();
    let e = dir.path().join("errata.txt");
    let o = rosenthal(&["table", "--p-min", "9", "--p-max", "10", "--errata", e.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(std::fs::read_to_string(e).unwrap().contains("quantity=K paper=1126.5"));
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("t.csv");
    let o = rosenthal(&["table", "--out", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let o = rosenthal(&["eval", "--p", "4", "--out", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
}

#[test]
fn extrema_reproduces_constants() {
    let o = rosenthal(&["extrema"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(&["extrema", "--format", "json"]);
    let entries = v["entries"].as_array().unwrap();
    let get = |n: &str| entries.iter().find(|e| e["name"] == n).unwrap().clone();
    assert!(get("C3")["deviation"].as_f64().unwrap().abs() <= 5e-6);
    assert!((get("C7")["computed"].as_f64().unwrap() - 1.2054).abs() <= 1e-3);
    assert!((get("C7")["argmax"].as_f64().unwrap() - 71.430).abs() <= 0.5);

    let v = json(&["extrema", "--even", "--format", "json"]);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    let e72 = entries.iter().find(|e| e["name"] == "G(72)/h(72)").unwrap();
    assert_eq!(e72["argmax"].as_f64().unwrap(), 72.0);
    assert!((e72["computed"].as_f64().unwrap() - 1.2053).abs() <= 1e-3);
}

#[test]
fn bounds_verdicts() {
    let o = rosenthal(&["bounds", "--p", "700"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("L sandwich   holds"));

    let o = rosenthal(&["bounds", "--p", "100"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("not asserted (below P_0 = 700)"));

    let r3 = json(&["bounds", "--p", "1000", "--format", "json"]);
    let r4 = json(&["bounds", "--p", "10000", "--format", "json"]);
    assert!(r4["g_over_g"].as_f64().unwrap() < r3["g_over_g"].as_f64().unwrap());
    assert_eq!(r4["l_verdict"], "holds");
}

#[test]
fn mc_is_deterministic_and_on_target() {
    let args = ["mc", "--kind", "L", "--p", "4", "--n", "1000000", "--seed", "7"];
    let a = rosenthal(&args);
    let b = rosenthal(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let mut one_thread = args.to_vec();
    one_thread.extend(["--threads", "1"]);
    assert_eq!(rosenthal(&one_thread).stdout, a.stdout);

    let mut as_json = args.to_vec();
    as_json.extend(["--format", "json"]);
    let v = json(&as_json);
    assert_eq!(v["reference"].as_f64().unwrap(), 4.0);
    assert!(v["z"].as_f64().unwrap().abs() <= 3.0);
    assert_eq!(v["seed"], 7);
}

#[test]
fn mc_k6_against_31() {
    let v = json(&["mc", "--kind", "K", "--p", "6", "--n", "4000000", "--format", "json"]);
    assert_eq!(v["reference"].as_f64().unwrap(), 31.0);
    assert!(v["z"].as_f64().unwrap().abs() <= 4.0);
}

#[test]
fn mc_ratio_below_g() {
    let v = json(&["mc", "--kind", "ratio", "--p", "6", "--family", "two-point(1,0.2)", "--n-terms", "5", "--n", "200000", "--format", "json"]);
    assert!(v["mean"].as_f64().unwrap() < v["reference"].as_f64().unwrap());
}
