//! Command-line front end for the operator-inequality verification toolkit:
//! classify function pairs, run verification suites, mine violations,
//! reformat report streams, and emit the bundled fixture set.
//!
//! Exit codes: 0 when everything passed (or nothing was asked to pass),
//! 1 when at least one inequality violation was found, 2 on configuration,
//! parse or IO errors.

use clap::{Args, Parser, Subcommand};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use opcheb::functionals::{Direction, GapReport};
use opcheb::scalarfun::{self, Interval, ScalarFunction};
use opcheb::verify::{self, fixtures, SearchSummary, SuiteConfig};

#[derive(Parser)]
#[command(
    name = "opcheb",
    version,
    about = "Verify Cebysev-type operator inequalities numerically"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the weighted synchronicity of a function pair and the
    /// weighted monotonicity of each function.
    Classify(ClassifyArgs),
    /// Run a verification suite and stream one report per inequality
    /// evaluation.
    Verify(SuiteArgs),
    /// Run a suite and summarize violations (worst cases with replayable
    /// witnesses).
    Search(SuiteArgs),
    /// Reformat or summarize a JSONL report stream.
    Report(ReportArgs),
    /// Write the bundled fixture set to a directory.
    Fixtures(FixturesArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    /// First function literal, e.g. power:2
    #[arg(long)]
    f: String,
    /// Second function literal
    #[arg(long)]
    g: String,
    /// Weight function literal (non-negative on the interval)
    #[arg(long, default_value = "constant:1")]
    h: String,
    /// Interval as lo,hi
    #[arg(long, value_parser = parse_interval)]
    interval: Interval,
    /// Grid density
    #[arg(long, default_value_t = 64)]
    grid: usize,
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args)]
struct SuiteArgs {
    /// Path to a JSON suite config
    #[arg(long)]
    config: Option<PathBuf>,
    /// Check id (required unless --config is given)
    #[arg(long)]
    check: Option<String>,
    #[arg(long)]
    dim_h: Option<usize>,
    #[arg(long)]
    dim_k: Option<usize>,
    /// Interval as lo,hi
    #[arg(long, value_parser = parse_interval)]
    interval: Option<Interval>,
    #[arg(long)]
    f: Option<String>,
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    map_psi: Option<String>,
    #[arg(long)]
    map_phi: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    /// geq or leq
    #[arg(long)]
    direction: Option<String>,
    /// Lift hypothesis validation to probe deliberately broken inputs
    #[arg(long)]
    adversarial: bool,
    /// jsonl, json, csv or text
    #[arg(long, default_value = "jsonl")]
    format: String,
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// JSONL report file produced by `verify`
    #[arg(long)]
    input: PathBuf,
    /// text, csv, json or jsonl
    #[arg(long, default_value = "text")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FixturesArgs {
    /// Output directory (created if missing)
    #[arg(long)]
    out: PathBuf,
}

fn parse_interval(s: &str) -> Result<Interval, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("interval must be lo,hi".into());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| "bad lower endpoint")?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| "bad upper endpoint")?;
    Interval::new(lo, hi).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Search(args) => cmd_search(args),
        Command::Report(args) => cmd_report(args),
        Command::Fixtures(args) => cmd_fixtures(args),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

type CmdResult = Result<ExitCode, String>;

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| format!("cannot write {path:?}: {e}")),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| format!("cannot write stdout: {e}"))
        }
    }
}

fn cmd_classify(args: ClassifyArgs) -> CmdResult {
    let f: ScalarFunction = args.f.parse().map_err(|e| format!("{e}"))?;
    let g: ScalarFunction = args.g.parse().map_err(|e| format!("{e}"))?;
    let h: ScalarFunction = args.h.parse().map_err(|e| format!("{e}"))?;
    if args.grid < 2 {
        return Err("grid must have at least 2 points".into());
    }
    let verdict = scalarfun::h_synchronicity(&f, &g, &h, args.interval, args.grid)
        .map_err(|e| format!("{e}"))?;
    let mono = |func: &ScalarFunction| {
        scalarfun::h_monotonicity(func, &h, args.interval, args.grid)
            .map(|m| m.to_string())
            .unwrap_or_else(|e| format!("not classified ({e})"))
    };
    let mf = mono(&f);
    let mg = mono(&g);
    match args.format.as_str() {
        "json" => {
            let value = serde_json::json!({
                "f": f.to_string(),
                "g": g.to_string(),
                "h": h.to_string(),
                "interval": [args.interval.lo, args.interval.hi],
                "grid": args.grid,
                "verdict": verdict,
                "f_monotonicity": mf,
                "g_monotonicity": mg,
            });
            write_output(
                &None,
                &format!("{}\n", serde_json::to_string_pretty(&value).unwrap()),
            )?;
        }
        "text" => {
            let mut text = String::new();
            text.push_str(&format!(
                "pair ({f}, {g}) with weight {h} on {}: {}\n",
                args.interval, verdict.verdict
            ));
            if let Some(w) = verdict.witness_neg {
                text.push_str(&format!(
                    "  negative defect witness: x={} y={} defect={:.6e}\n",
                    w.x, w.y, w.defect
                ));
            }
            if let Some(w) = verdict.witness_pos {
                text.push_str(&format!(
                    "  positive defect witness: x={} y={} defect={:.6e}\n",
                    w.x, w.y, w.defect
                ));
            }
            text.push_str(&format!("  {f} is {mf} with respect to {h}\n"));
            text.push_str(&format!("  {g} is {mg} with respect to {h}\n"));
            write_output(&None, &text)?;
        }
        other => return Err(format!("unsupported classify format {other:?}")),
    }
    Ok(ExitCode::SUCCESS)
}

fn load_config(args: &SuiteArgs) -> Result<SuiteConfig, String> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| format!("cannot read {path:?}: {e}"))?;
            serde_json::from_str::<SuiteConfig>(&text)
                .map_err(|e| format!("cannot parse {path:?}: {e}"))?
        }
        None => {
            let check = args
                .check
                .clone()
                .ok_or("either --config or --check is required")?;
            let id = check
                .parse::<opcheb::verify::CheckId>()
                .map_err(|e| format!("{e}"))?;
            SuiteConfig::new(id)
        }
    };
    if let Some(check) = &args.check {
        cfg.check = check.clone();
    }
    if let Some(d) = args.dim_h {
        cfg.dim_h = d;
    }
    if let Some(d) = args.dim_k {
        cfg.dim_k = d;
    }
    if let Some(i) = args.interval {
        cfg.interval = [i.lo, i.hi];
    }
    if let Some(v) = &args.f {
        cfg.f = v.clone();
    }
    if let Some(v) = &args.g {
        cfg.g = v.clone();
    }
    if let Some(v) = &args.h {
        cfg.h = v.clone();
    }
    if let Some(v) = &args.map_psi {
        cfg.map_psi = v.clone();
    }
    if let Some(v) = &args.map_phi {
        cfg.map_phi = v.clone();
    }
    if let Some(v) = args.trials {
        cfg.trials = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.tol {
        cfg.tol = v;
    }
    if let Some(v) = &args.direction {
        cfg.direction = v.parse::<Direction>().map_err(|e| format!("{e}"))?;
    }
    cfg.parsed().map_err(|e| format!("{e}"))?;
    Ok(cfg)
}

fn render_reports(reports: &[GapReport], format: &str) -> Result<String, String> {
    match format {
        "jsonl" => {
            let mut out = String::new();
            for r in reports {
                out.push_str(&serde_json::to_string(r).unwrap());
                out.push('\n');
            }
            Ok(out)
        }
        "json" => Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(reports).unwrap()
        )),
        "csv" => {
            let mut out =
                String::from("check_id,trial,seed,direction,lhs,rhs,gap,tolerance,pass\n");
            for r in reports {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    r.check_id,
                    r.context.trial,
                    r.context.seed,
                    r.direction,
                    r.lhs,
                    r.rhs,
                    r.gap,
                    r.tolerance,
                    r.pass
                ));
            }
            Ok(out)
        }
        "text" => {
            let mut out = String::new();
            let failures = reports.iter().filter(|r| !r.pass).count();
            for r in reports.iter().filter(|r| !r.pass) {
                out.push_str(&format!(
                    "FAIL {} trial {}: gap {:.6e} ({} expected, tolerance {:.3e})\n",
                    r.check_id, r.context.trial, r.gap, r.direction, r.tolerance
                ));
            }
            out.push_str(&format!(
                "{} reports, {} passed, {} failed\n",
                reports.len(),
                reports.len() - failures,
                failures
            ));
            Ok(out)
        }
        other => Err(format!("unsupported format {other:?}")),
    }
}

fn cmd_verify(args: SuiteArgs) -> CmdResult {
    let cfg = load_config(&args)?;
    let reports = verify::run_suite(&cfg, args.adversarial).map_err(|e| format!("{e}"))?;
    let body = render_reports(&reports, &args.format)?;
    write_output(&args.out, &body)?;
    if reports.iter().all(|r| r.pass) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn render_summary(summary: &SearchSummary, format: &str) -> Result<String, String> {
    match format {
        "json" | "jsonl" => Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(summary).unwrap()
        )),
        "text" => {
            let mut out = String::new();
            out.push_str(&format!(
                "check {} ({} mode): {} trials, {} reports, {} violations\n",
                summary.check,
                if summary.adversarial {
                    "adversarial"
                } else {
                    "strict"
                },
                summary.trials,
                summary.reports,
                summary.violations
            ));
            for (i, w) in summary.worst.iter().enumerate() {
                out.push_str(&format!(
                    "  worst[{i}] trial {}: {} gap {:.6e}, violates by {:.6e}\n",
                    w.report.context.trial, w.report.check_id, w.report.gap, w.violation
                ));
            }
            Ok(out)
        }
        "csv" => {
            let mut out = String::from("rank,check_id,trial,gap,violation\n");
            for (i, w) in summary.worst.iter().enumerate() {
                out.push_str(&format!(
                    "{i},{},{},{},{}\n",
                    w.report.check_id, w.report.context.trial, w.report.gap, w.violation
                ));
            }
            Ok(out)
        }
        other => Err(format!("unsupported format {other:?}")),
    }
}

fn cmd_search(args: SuiteArgs) -> CmdResult {
    let cfg = load_config(&args)?;
    let format = if args.format == "jsonl" {
        "text".to_string()
    } else {
        args.format.clone()
    };
    let summary = verify::search_violations(&cfg, args.adversarial).map_err(|e| format!("{e}"))?;
    let body = render_summary(&summary, &format)?;
    write_output(&args.out, &body)?;
    if summary.violations == 0 {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_report(args: ReportArgs) -> CmdResult {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| format!("cannot read {:?}: {e}", args.input))?;
    let mut reports = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let report: GapReport = serde_json::from_str(line)
            .map_err(|e| format!("line {}: not a report: {e}", lineno + 1))?;
        reports.push(report);
    }
    let body = render_reports(&reports, &args.format)?;
    write_output(&args.out, &body)?;
    if reports.iter().all(|r| r.pass) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_fixtures(args: FixturesArgs) -> CmdResult {
    fs::create_dir_all(&args.out).map_err(|e| format!("cannot create {:?}: {e}", args.out))?;
    let mut listing = String::new();
    for fixture in fixtures::bundled_fixtures() {
        let path: &Path = &args.out.join(format!("{}.json", fixture.name));
        let body = serde_json::to_string_pretty(&fixture.config).unwrap();
        fs::write(path, format!("{body}\n")).map_err(|e| format!("cannot write {path:?}: {e}"))?;
        listing.push_str(&format!("{}\n", path.display()));
    }
    write_output(&None, &listing)?;
    Ok(ExitCode::SUCCESS)
}
