#![allow(clippy::neg_cmp_op_on_partial_ord)]

use clap::{Args, Parser, Subcommand, ValueEnum};
use rosenthal_core::asymptotics::AsymptoticBundle;
use rosenthal_core::constants::{evaluate_all, g_value, ConstantValue, Kind};
use rosenthal_core::extrema::{reproduce_theorem1, ConstantEntry, SearchOptions, Theorem1Report};
use rosenthal_core::mc::{mc_k_threads, mc_l_threads, mc_rosenthal_ratio, Family, McEstimate};
use rosenthal_core::report::{
    build_table, format_f64, format_value, other_errata, render_csv, render_errata, render_json, render_text,
    table_errata,
};
use rosenthal_core::{Error, SeriesConfig};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rosenthal", version, about = "Exact constants of the Rosenthal moment inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct RunArgs {
    /// Output format; `table` defaults to csv, everything else to text.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Relative series tolerance, in [1e-15, 1e-3].
    #[arg(long, global = true, value_parser = parse_tol)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// K, L, S and G at one exponent.
    Eval {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
    },
    /// Table over a grid of exponents, compared against the printed table.
    Table {
        #[arg(long, default_value_t = 2.0)]
        p_min: f64,
        #[arg(long, default_value_t = 21.0)]
        p_max: f64,
        #[arg(long, default_value_t = 0.5)]
        step: f64,
        /// Errata report path; defaults to `<out>.errata.txt`, or stderr.
        #[arg(long)]
        errata: Option<PathBuf>,
    },
    /// Suprema of G/g, G/h, S/g, S/h.
    Extrema {
        /// Only the even-integer maxima.
        #[arg(long)]
        even: bool,
        /// Also run the branch-and-bound certificate.
        #[arg(long)]
        certify: bool,
    },
    /// Asymptotic quantities and the explicit L and K brackets.
    Bounds {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
    },
    /// Monte-Carlo estimate of L(p), K(p) or a Rosenthal ratio.
    Mc {
        #[arg(long, value_enum)]
        kind: McKind,
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        /// `rademacher`, `two-point(a,q)` or `centered-poisson(λ)`; ratio only.
        #[arg(long, default_value = "rademacher")]
        family: String,
        /// Number of summands; ratio only.
        #[arg(long, default_value_t = 10)]
        n_terms: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum McKind {
    #[value(name = "L")]
    L,
    #[value(name = "K")]
    K,
    #[value(name = "ratio")]
    Ratio,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (1e-15..=1e-3).contains(&t) {
        Ok(t)
    } else {
        Err(format!("tolerance must lie in [1e-15, 1e-3], got {t}"))
    }
}

enum Failure {
    Numeric(String),
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Numeric(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Numeric(m) | Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Capacity { .. } => Failure::Usage(e.to_string()),
            Error::Budget { .. } | Error::Inconsistency(_) => Failure::Numeric(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    format: Option<Format>,
    out: Option<PathBuf>,
    cfg: SeriesConfig,
    seed: u64,
    threads: usize,
}

impl Ctx {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn emit(&self, text: &str) -> Outcome {
        match &self.out {
            Some(path) => write_file(path, text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn write_file(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let threads = cli
        .run
        .threads
        .map(|t| t as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    let ctx = Ctx {
        format: cli.run.format,
        out: cli.run.out,
        cfg: cli.run.tol.map(SeriesConfig::with_tol).unwrap_or_default(),
        seed: cli.run.seed,
        threads,
    };
    let result = match cli.command {
        Command::Eval { p } => cmd_eval(&ctx, p),
        Command::Table { p_min, p_max, step, errata } => cmd_table(&ctx, p_min, p_max, step, errata),
        Command::Extrema { even, certify } => cmd_extrema(&ctx, even, certify),
        Command::Bounds { p } => cmd_bounds(&ctx, p),
        Command::Mc { kind, p, n, family, n_terms } => cmd_mc(&ctx, kind, p, n, &family, n_terms),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("rosenthal: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

#[derive(Serialize)]
struct EvalRow {
    p: f64,
    kind: Kind,
    route: &'static str,
    value: String,
    rel_error: f64,
}

impl From<&ConstantValue> for EvalRow {
    fn from(c: &ConstantValue) -> Self {
        EvalRow {
            p: c.p,
            kind: c.kind,
            route: c.route.as_str(),
            value: format_value(c),
            rel_error: c.rel_error(),
        }
    }
}

fn cmd_eval(ctx: &Ctx, p: f64) -> Outcome {
    if !(p >= 2.0) {
        return Err(Failure::Usage(format!("eval needs p >= 2, got {p}")));
    }
    let rows: Vec<EvalRow> = evaluate_all(p, &ctx.cfg)?.iter().map(EvalRow::from).collect();
    let mut out = String::new();
    match ctx.format_or(Format::Text) {
        Format::Json => out = json(&rows),
        Format::Csv => {
            out.push_str("p,kind,route,value,rel_error\n");
            for r in &rows {
                let _ = writeln!(out, "{},{:?},{},{},{:e}", format_f64(r.p), r.kind, r.route, r.value, r.rel_error);
            }
        }
        Format::Text => {
            let _ = writeln!(out, "p = {}", format_f64(p));
            for r in &rows {
                let _ = writeln!(out, "{:?}  {:<24} route={:<13} rel_error={:.1e}", r.kind, r.value, r.route, r.rel_error);
            }
        }
    }
    ctx.emit(&out)
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn cmd_table(ctx: &Ctx, p_min: f64, p_max: f64, step: f64, errata: Option<PathBuf>) -> Outcome {
    let rows = build_table(p_min, p_max, step, &ctx.cfg, ctx.threads)?;
    let text = match ctx.format_or(Format::Csv) {
        Format::Csv => render_csv(&rows),
        Format::Json => render_json(&rows),
        Format::Text => render_text(&rows),
    };
    ctx.emit(&text)?;
    let mut found = table_errata(&rows)?;
    found.extend(other_errata()?);
    let report = render_errata(&found);
    let path = errata.or_else(|| {
        ctx.out.as_ref().map(|o| {
            let mut s = o.clone().into_os_string();
            s.push(".errata.txt");
            PathBuf::from(s)
        })
    });
    match path {
        Some(path) => write_file(&path, &report),
        None => {
            eprint!("{report}");
            Ok(())
        }
    }
}

fn entry_line(e: &ConstantEntry) -> String {
    format!(
        "{:<12} {:<4} [{}, {}]{} computed={:.7} paper={} dev={:+.2e} tol={:.0e} argmax={:.4} paper_argmax={} halfwidth={:.1e} {}",
        e.name,
        e.ratio.label(),
        format_f64(e.interval.0),
        format_f64(e.interval.1),
        if e.even_only { " even" } else { "" },
        e.computed,
        e.paper,
        e.deviation,
        e.tolerance,
        e.argmax,
        e.paper_argmax,
        e.bracket_halfwidth,
        if e.passes() { "ok" } else { "MISMATCH" }
    )
}

fn cmd_extrema(ctx: &Ctx, even: bool, certify: bool) -> Outcome {
    let opts = SearchOptions {
        tol: 1e-6,
        threads: ctx.threads,
        ..Default::default()
    };
    let mut report: Theorem1Report = reproduce_theorem1(&opts, &ctx.cfg, certify)?;
    if even {
        report.entries.retain(|e| e.even_only);
    }
    let mut out = String::new();
    match ctx.format_or(Format::Text) {
        Format::Json => out = json(&report),
        Format::Csv => {
            out.push_str("name,ratio,lo,hi,even,computed,paper,deviation,tolerance,argmax,paper_argmax,argmax_tolerance,bracket_halfwidth,boundary,pass\n");
            for e in &report.entries {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{:e},{:e},{},{},{},{:e},{},{}",
                    e.name,
                    e.ratio.label(),
                    e.interval.0,
                    e.interval.1,
                    e.even_only,
                    e.computed,
                    e.paper,
                    e.deviation,
                    e.tolerance,
                    e.argmax,
                    e.paper_argmax,
                    e.argmax_tolerance,
                    e.bracket_halfwidth,
                    e.boundary_warning,
                    e.passes()
                );
            }
        }
        Format::Text => {
            for e in &report.entries {
                out.push_str(&entry_line(e));
                out.push('\n');
                if e.boundary_warning {
                    let _ = writeln!(out, "  warning: {} maximum on the search boundary", e.name);
                }
                if e.below_e_e {
                    let _ = writeln!(out, "  note: {} maximizer lies in [15, e^e]", e.name);
                }
                if let Some(c) = &e.certificate {
                    let _ = writeln!(
                        out,
                        "  certificate: {} over {} cells, window ±{:.3}, grid slack {:.1e}",
                        if c.certified { "certified" } else { "NOT certified" },
                        c.cells,
                        c.window,
                        c.grid_slack
                    );
                }
            }
            let _ = writeln!(out, "min G/g over integers in [4, 700]: {:.7}", report.min_g_over_g);
            let _ = writeln!(out, "G/g decreasing to 1 on 1e3, 1e4, 1e5: {}", report.g_over_g_trend_to_one);
            for c in &report.envelope {
                let _ = writeln!(
                    out,
                    "p={}: S/g = {:.6} <= envelope {:.6}",
                    format_f64(c.p),
                    c.s_over_g,
                    c.s_over_g_upper
                );
            }
        }
    }
    ctx.emit(&out)?;
    let failed: Vec<&str> = report.entries.iter().filter(|e| !e.passes()).map(|e| e.name.as_str()).collect();
    let uncertified = report
        .entries
        .iter()
        .filter(|e| e.certificate.as_ref().is_some_and(|c| !c.certified))
        .count();
    if !failed.is_empty() {
        return Err(Failure::Numeric(format!("outside tolerance: {}", failed.join(", "))));
    }
    if uncertified > 0 {
        return Err(Failure::Numeric(format!("{uncertified} maxima not certified")));
    }
    Ok(())
}

#[derive(Serialize)]
struct BoundsReport {
    #[serde(flatten)]
    bundle: AsymptoticBundle,
    g_over_g: f64,
    s_over_g: f64,
    l_verdict: String,
    k_verdict: String,
}

fn verdict(asserted: bool, holds: bool, threshold: &str) -> String {
    match (asserted, holds) {
        (false, _) => format!("not asserted (below {threshold})"),
        (true, true) => "holds".to_string(),
        (true, false) => "VIOLATED".to_string(),
    }
}

fn cmd_bounds(ctx: &Ctx, p: f64) -> Outcome {
    if !(p > 16.0) {
        return Err(Failure::Usage(format!("bounds needs p > 16, got {p}")));
    }
    let b = AsymptoticBundle::compute(p, &ctx.cfg)?;
    let r = BoundsReport {
        g_over_g: (b.log_l / p).exp() / b.g,
        s_over_g: (b.log_k / p).exp() / b.g,
        l_verdict: verdict(b.l_asserted, b.l_holds, "P_0 = 700"),
        k_verdict: verdict(b.k_asserted, b.k_holds, "P_1 = 1e6"),
        bundle: b,
    };
    let fields: [(&str, f64); 20] = [
        ("p", b.p),
        ("g", b.g),
        ("h", b.h),
        ("delta", b.delta),
        ("Delta", b.big_delta),
        ("M", b.m),
        ("N", b.n),
        ("X", b.x),
        ("Y", b.y),
        ("eps", b.eps),
        ("eps_plus", b.eps_plus),
        ("eps_minus", b.eps_minus),
        ("log_L_lower", b.l_lower),
        ("log_L", b.log_l),
        ("log_L_upper", b.l_upper),
        ("log_K_lower", b.k_lower),
        ("log_K", b.log_k),
        ("log_K_upper", b.k_upper),
        ("G/g", r.g_over_g),
        ("S/g", r.s_over_g),
    ];
    let mut out = String::new();
    match ctx.format_or(Format::Text) {
        Format::Json => out = json(&r),
        Format::Csv => {
            out.push_str("quantity,value\n");
            for (k, v) in fields {
                let _ = writeln!(out, "{k},{v}");
            }
            let _ = writeln!(out, "L_sandwich,{}", r.l_verdict);
            let _ = writeln!(out, "K_sandwich,{}", r.k_verdict);
        }
        Format::Text => {
            for (k, v) in fields {
                let _ = writeln!(out, "{k:<12} {v}");
            }
            let _ = writeln!(out, "L sandwich   {}", r.l_verdict);
            let _ = writeln!(out, "K sandwich   {}", r.k_verdict);
        }
    }
    ctx.emit(&out)?;
    if b.l_asserted && !b.l_holds {
        return Err(Failure::Numeric(format!(
            "L sandwich violated at p={p}: {} <= {} <= {}",
            b.l_lower, b.log_l, b.l_upper
        )));
    }
    if b.k_asserted && !b.k_holds {
        return Err(Failure::Numeric(format!(
            "K sandwich violated at p={p}: {} <= {} <= {}",
            b.k_lower, b.log_k, b.k_upper
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct McReport {
    kind: &'static str,
    p: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_terms: Option<u64>,
    #[serde(flatten)]
    estimate: McEstimate,
    reference: f64,
    reference_label: &'static str,
    z: f64,
}

fn cmd_mc(ctx: &Ctx, kind: McKind, p: f64, n: u64, family: &str, n_terms: u64) -> Outcome {
    if !(2.0..=12.0).contains(&p) {
        return Err(Failure::Usage(format!("mc needs 2 <= p <= 12, got {p}")));
    }
    let report = match kind {
        McKind::L | McKind::K => {
            let (estimate, label) = if kind == McKind::L {
                (mc_l_threads(p, n, ctx.seed, ctx.threads)?, "L")
            } else {
                (mc_k_threads(p, n, ctx.seed, ctx.threads)?, "K")
            };
            let [k, l, _, _] = evaluate_all(p, &ctx.cfg)?;
            let exact = if kind == McKind::L { l } else { k };
            let reference = exact.as_f64();
            McReport {
                kind: label,
                p,
                family: None,
                n_terms: None,
                z: (estimate.mean - reference) / estimate.stderr,
                estimate,
                reference,
                reference_label: exact.route.as_str(),
            }
        }
        McKind::Ratio => {
            let fam = Family::parse(family)?;
            let estimate = mc_rosenthal_ratio(fam, n_terms, p, n, ctx.seed)?;
            // every centered family stays below C(p) = G(p) for p >= 4
            let reference = if p >= 4.0 { g_value(p, &ctx.cfg)? } else { f64::NAN };
            McReport {
                kind: "ratio",
                p,
                family: Some(family.to_string()),
                n_terms: Some(n_terms),
                z: (estimate.mean - reference) / estimate.stderr,
                estimate,
                reference,
                reference_label: "G(p) upper bound",
            }
        }
    };
    let e = &report.estimate;
    let mut out = String::new();
    match ctx.format_or(Format::Text) {
        Format::Json => out = json(&report),
        Format::Csv => {
            out.push_str("kind,p,n_samples,seed,mean,stderr,reference,z\n");
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                report.kind, report.p, e.n_samples, e.seed, e.mean, e.stderr, report.reference, report.z
            );
        }
        Format::Text => {
            let _ = writeln!(out, "kind       {}", report.kind);
            let _ = writeln!(out, "p          {}", format_f64(p));
            if let (Some(f), Some(t)) = (&report.family, report.n_terms) {
                let _ = writeln!(out, "family     {f} x {t}");
            }
            let _ = writeln!(out, "samples    {}", e.n_samples);
            let _ = writeln!(out, "seed       {}", e.seed);
            let _ = writeln!(out, "generator  {}", e.generator);
            let _ = writeln!(out, "mean       {}", e.mean);
            let _ = writeln!(out, "stderr     {}", e.stderr);
            let _ = writeln!(out, "reference  {} ({})", report.reference, report.reference_label);
            let _ = writeln!(out, "z          {:.4}", report.z);
        }
    }
    ctx.emit(&out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_range() {
        assert!(parse_tol("1e-15").is_ok());
        assert!(parse_tol("1e-3").is_ok());
        assert!(parse_tol("1e-16").is_err());
        assert!(parse_tol("0.01").is_err());
        assert!(parse_tol("x").is_err());
    }

    #[test]
    fn error_codes() {
        assert_eq!(Failure::from(Error::Domain("x".into())).code(), 2);
        assert_eq!(Failure::from(Error::Inconsistency("x".into())).code(), 1);
    }
}
