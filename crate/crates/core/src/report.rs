//! Value tables, the printed reference table and the errata report.

use crate::asymptotics::{c14, c15, x1, y1, P0, P1};
use crate::constants::{evaluate_all, k_closed_form_derivative, ConstantValue, Value};
use crate::parallel::par_map;
use crate::series::SeriesConfig;
use crate::{domain, Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_10;
use std::fmt::Write as _;

/// Relative deviation above which a printed value is reported.
pub const ERRATA_THRESHOLD: f64 = 5e-4;

/// The printed table, verbatim.
pub const PAPER_TABLE: &str = include_str!("../data/paper_table.csv");

pub const CSV_HEADER: &str = "p,K,K_route,L,L_route,S,G,paper_K,paper_L,dev_K,dev_L";

/// One printed row.
#[derive(Debug, Clone, PartialEq)]
pub struct PaperRow {
    pub p: f64,
    pub k_printed: String,
    pub l_printed: String,
    pub k: f64,
    pub l: f64,
}

/// Parses printed numbers, including the forms `1.44191E+006`,
/// `1.21607 E + 009` and `6.08476 + 011` (exponent without the `E`).
pub fn parse_printed(s: &str) -> Result<f64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Domain(format!("unparseable table entry {s:?}"));
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    // mantissa followed by a signed exponent with the E dropped
    let pos = t[1..].find(['+', '-']).map(|i| i + 1).ok_or_else(bad)?;
    let (m, e) = t.split_at(pos);
    let m: f64 = m.trim_end_matches(['E', 'e']).parse().map_err(|_| bad())?;
    let e: i32 = e.parse().map_err(|_| bad())?;
    Ok(m * 10f64.powi(e))
}

pub fn paper_table() -> Result<Vec<PaperRow>> {
    PAPER_TABLE
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("p,") && !l.trim().is_empty())
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            if c.len() != 3 {
                return domain(format!("bad table line {l:?}"));
            }
            Ok(PaperRow {
                p: parse_printed(c[0])?,
                k_printed: c[1].to_string(),
                l_printed: c[2].to_string(),
                k: parse_printed(c[1])?,
                l: parse_printed(c[2])?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub p: f64,
    pub k: ConstantValue,
    pub l: ConstantValue,
    pub s: f64,
    pub g: f64,
    pub paper_k: Option<f64>,
    pub paper_l: Option<f64>,
    pub dev_k: Option<f64>,
    pub dev_l: Option<f64>,
}

impl TableRow {
    pub fn compute(p: f64, cfg: &SeriesConfig) -> Result<TableRow> {
        let [k, l, s, g] = evaluate_all(p, cfg)?;
        let paper = paper_table()?.into_iter().find(|r| r.p == p);
        let dev = |c: &ConstantValue, v: f64| (c.ln() - v.ln()).exp_m1();
        Ok(TableRow {
            p,
            paper_k: paper.as_ref().map(|r| r.k),
            paper_l: paper.as_ref().map(|r| r.l),
            dev_k: paper.as_ref().map(|r| dev(&k, r.k)),
            dev_l: paper.as_ref().map(|r| dev(&l, r.l)),
            s: s.as_f64(),
            g: g.as_f64(),
            k,
            l,
        })
    }
}

/// `p_min, p_min + step, ...` up to `p_max` (inclusive within 1e-9).
pub fn p_grid(p_min: f64, p_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(p_min >= 2.0 && p_min < p_max && step > 0.0) {
        return domain(format!("table needs 2 <= p_min < p_max and step > 0, got {p_min}, {p_max}, {step}"));
    }
    let n = ((p_max - p_min) / step + 1e-9).floor() as usize;
    if n > 1_000_000 {
        return domain("table too long");
    }
    // round away accumulated binary noise
    Ok((0..=n).map(|i| ((p_min + i as f64 * step) * 1e9).round() / 1e9).collect())
}

pub fn build_table(p_min: f64, p_max: f64, step: f64, cfg: &SeriesConfig, threads: usize) -> Result<Vec<TableRow>> {
    let ps = p_grid(p_min, p_max, step)?;
    par_map(&ps, threads, |&p| TableRow::compute(p, cfg)).into_iter().collect()
}

/// Decimal rendering of a positive number given by its natural log.
pub fn format_log(log_value: f64) -> String {
    if log_value.abs() < 700.0 {
        return format_f64(log_value.exp());
    }
    let l10 = log_value / LN_10;
    let mut e = l10.floor();
    let mut m = format!("{:.11}", 10f64.powf(l10 - e));
    if m.starts_with("10.") {
        e += 1.0;
        m = format!("{:.11}", 1.0);
    }
    format!("{m}e{e}")
}

/// Plain decimal between 1e-5 and 1e16, scientific outside.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 || (x.abs() >= 1e-5 && x.abs() < 1e16) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn format_value(c: &ConstantValue) -> String {
    match &c.value {
        Value::Exact(n) => n.to_string(),
        Value::Series(s) => format_log(s.log_value),
        Value::Real(x) => format_f64(*x),
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_f64).unwrap_or_default()
}

fn opt_dev(x: Option<f64>) -> String {
    x.map(|d| format!("{d:.3e}")).unwrap_or_default()
}

pub fn render_csv(rows: &[TableRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            format_f64(r.p),
            format_value(&r.k),
            r.k.route.as_str(),
            format_value(&r.l),
            r.l.route.as_str(),
            format_f64(r.s),
            format_f64(r.g),
            opt(r.paper_k),
            opt(r.paper_l),
            opt_dev(r.dev_k),
            opt_dev(r.dev_l)
        );
    }
    out
}

/// JSON row with the CSV keys. `K` and `L` are strings so exact integers
/// survive a round trip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonRow {
    pub p: f64,
    #[serde(rename = "K")]
    pub k: String,
    #[serde(rename = "K_route")]
    pub k_route: String,
    #[serde(rename = "L")]
    pub l: String,
    #[serde(rename = "L_route")]
    pub l_route: String,
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "paper_K")]
    pub paper_k: Option<f64>,
    #[serde(rename = "paper_L")]
    pub paper_l: Option<f64>,
    #[serde(rename = "dev_K")]
    pub dev_k: Option<f64>,
    #[serde(rename = "dev_L")]
    pub dev_l: Option<f64>,
}

impl From<&TableRow> for JsonRow {
    fn from(r: &TableRow) -> Self {
        JsonRow {
            p: r.p,
            k: format_value(&r.k),
            k_route: r.k.route.as_str().to_string(),
            l: format_value(&r.l),
            l_route: r.l.route.as_str().to_string(),
            s: r.s,
            g: r.g,
            paper_k: r.paper_k,
            paper_l: r.paper_l,
            dev_k: r.dev_k,
            dev_l: r.dev_l,
        }
    }
}

pub fn render_json(rows: &[TableRow]) -> String {
    let j: Vec<JsonRow> = rows.iter().map(JsonRow::from).collect();
    render_json_rows(&j)
}

pub fn render_json_rows(rows: &[JsonRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

pub fn render_text(rows: &[TableRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>6}  {:>22} {:<13} {:>22} {:<13} {:>12} {:>12}  {:>10} {:>10}",
        "p", "K", "route", "L", "route", "S", "G", "dev_K", "dev_L"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:>6}  {:>22} {:<13} {:>22} {:<13} {:>12.8} {:>12.8}  {:>10} {:>10}",
            format_f64(r.p),
            format_value(&r.k),
            r.k.route.as_str(),
            format_value(&r.l),
            r.l.route.as_str(),
            r.s,
            r.g,
            opt_dev(r.dev_k),
            opt_dev(r.dev_l)
        );
    }
    out
}

/// One discrepancy between a printed and a computed value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Erratum {
    pub p: f64,
    pub quantity: String,
    pub paper: String,
    pub computed: String,
    pub rel_dev: f64,
}

impl Erratum {
    pub fn line(&self) -> String {
        format!(
            "p={} quantity={} paper={} computed={} rel_dev={:.3e}",
            format_f64(self.p),
            self.quantity,
            self.paper,
            self.computed,
            self.rel_dev
        )
    }
}

/// Table rows whose printed `K` or `L` is off by more than [`ERRATA_THRESHOLD`].
pub fn table_errata(rows: &[TableRow]) -> Result<Vec<Erratum>> {
    let printed = paper_table()?;
    let mut out = Vec::new();
    for r in rows {
        let Some(pr) = printed.iter().find(|x| x.p == r.p) else {
            continue;
        };
        for (q, dev, c, text) in [("K", r.dev_k, &r.k, &pr.k_printed), ("L", r.dev_l, &r.l, &pr.l_printed)] {
            if let Some(d) = dev {
                if d.abs() > ERRATA_THRESHOLD {
                    out.push(Erratum {
                        p: r.p,
                        quantity: q.to_string(),
                        paper: text.clone(),
                        computed: format_value(c),
                        rel_dev: d,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Printed constants outside the table that disagree with direct evaluation.
pub fn other_errata() -> Result<Vec<Erratum>> {
    let mut out = Vec::new();
    let mut push = |p: f64, quantity: &str, paper: f64, computed: f64, bound: bool| {
        // for printed upper bounds only a violation counts
        let dev = computed / paper - 1.0;
        if (bound && dev > 0.0) || (!bound && dev.abs() > ERRATA_THRESHOLD) {
            out.push(Erratum {
                p,
                quantity: quantity.to_string(),
                paper: format_f64(paper),
                computed: format!("{computed:.8}"),
                rel_dev: dev,
            });
        }
    };
    push(4.0, "dK/dp(4-0)", 3.149195, k_closed_form_derivative(4.0)?, false);
    let d = (P0.ln().ln()) / P0.ln();
    push(P0, "C14(printed formula)", 1.402365, 1.0 - d, false);
    push(P0, "C15(printed formula)", 0.928958, 2.0 * ((1.0 + 4.0 * d * d).sqrt() + 1.0), false);
    push(P0, "C14", 1.402365, c14(), false);
    push(P0, "C15", 0.928958, c15(), false);
    push(P0, "exp(X1)<", 1.7563, x1(P0).exp(), true);
    push(P1, "exp(Y1)<", 1.442, y1(P1).exp(), true);
    Ok(out)
}

pub fn render_errata(errata: &[Erratum]) -> String {
    errata.iter().map(|e| e.line() + "\n").collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_number_forms() {
        assert_eq!(parse_printed("1.44191E+006").unwrap(), 1.44191e6);
        assert!((parse_printed("1.21607 E + 009").unwrap() / 1.21607e9 - 1.0).abs() < 1e-15);
        assert!((parse_printed("6.08476 + 011").unwrap() / 6.08476e11 - 1.0).abs() < 1e-15);
        assert!((parse_printed("2.106E + 011").unwrap() / 2.106e11 - 1.0).abs() < 1e-15);
        assert_eq!(parse_printed("3425.7358").unwrap(), 3425.7358);
        assert!(parse_printed("abc").is_err());
    }

    #[test]
    fn table_file() {
        let t = paper_table().unwrap();
        assert_eq!(t.len(), 36);
        assert_eq!(t[0].p, 2.0);
        assert_eq!(t.last().unwrap().p, 21.0);
        let r13 = t.iter().find(|r| r.p == 13.0).unwrap();
        assert_eq!(r13.k, 788891.0);
        assert_eq!(r13.l, 3.63328e6);
    }

    #[test]
    fn grid() {
        let g = p_grid(2.0, 21.0, 0.5).unwrap();
        assert_eq!(g.len(), 39);
        assert_eq!(g[38], 21.0);
        assert!(p_grid(1.0, 3.0, 0.5).is_err());
        assert!(p_grid(3.0, 3.0, 0.5).is_err());
    }

    #[test]
    fn rows_and_rendering() {
        let cfg = SeriesConfig::default();
        let rows = build_table(7.5, 8.5, 0.5, &cfg, 2).unwrap();
        let r8 = &rows[1];
        assert_eq!(format_value(&r8.k), "379");
        assert_eq!(format_value(&r8.l), "715");
        assert_eq!(r8.dev_k, Some(0.0));
        let csv = render_csv(&rows);
        assert!(csv.starts_with(CSV_HEADER));
        assert!(csv.contains("\n8,379,combinatorial,715,combinatorial,"));
        let json = render_json(&rows);
        let back: Vec<JsonRow> = serde_json::from_str(&json).unwrap();
        assert_eq!(render_json_rows(&back), json);
        let errata = table_errata(&rows).unwrap();
        assert!(errata.iter().any(|e| e.p == 7.5 && e.quantity == "K"));
        assert!(errata.iter().all(|e| e.p != 8.0));
        assert!(errata[0].line().starts_with("p=7.5 quantity=K paper=192.45 computed=195.57"));
    }

    #[test]
    fn huge_values_render() {
        assert_eq!(format_log(1000.0 * LN_10), "1.00000000000e1000");
        assert_eq!(format_log(1234.5), "1.36942392019e536");
        assert_eq!(format_f64(1e20), "1e20");
        assert_eq!(format_f64(6556.0), "6556");
    }

    #[test]
    fn derivative_erratum_listed() {
        let e = other_errata().unwrap();
        assert!(e.iter().any(|x| x.quantity == "dK/dp(4-0)"));
        assert!(!e.iter().any(|x| x.quantity == "C14"));
    }
}
