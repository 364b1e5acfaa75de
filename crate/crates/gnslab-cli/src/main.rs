mod report;
mod runners;
mod scenario;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use gnslab::numerics::NumericPolicy;
use gnslab::selftest::{run_criterion, CheckLine, Level, NUM_CRITERIA};

use report::{checks_csv, Report};
use runners::Failure;

const EXIT_OK: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gnslab",
    about = "Operator-algebra scenario runner and self-test harness",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario file and write a machine-readable report
    Run(RunArgs),
    /// Run the built-in acceptance checks
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (JSON)
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory for result.json and optional tables/figures
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Override the scenario's seed
    #[arg(long)]
    seed: Option<u64>,
    /// Also write SVG figures where the scenario kind produces them
    #[arg(long)]
    svg: bool,
    /// Also write CSV tables (checks.csv plus kind-specific tables)
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct SelftestArgs {
    /// Reduced sample counts, fixed seeds (default)
    #[arg(long, conflicts_with = "full")]
    quick: bool,
    /// Acceptance-level sample counts; writes per-criterion timings
    #[arg(long)]
    full: bool,
    /// Output directory for selftest_timings.csv (full level only)
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let profile = match tol_profile() {
        Ok(p) => p,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    match cli.command {
        Command::Run(args) => cmd_run(args, profile),
        Command::Selftest(args) => cmd_selftest(args),
    }
}

/// Numeric-policy selection from the environment; unknown names are input
/// errors so a typo cannot silently run at the wrong tolerances.
fn tol_profile() -> Result<(String, NumericPolicy), String> {
    let name = std::env::var("GNSLAB_TOL_PROFILE").unwrap_or_else(|_| "default".to_string());
    match NumericPolicy::profile(&name) {
        Some(policy) => Ok((name, policy)),
        None => Err(format!(
            "GNSLAB_TOL_PROFILE must be \"default\" or \"strict\", got \"{name}\""
        )),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    std::fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn cmd_run(args: RunArgs, (profile_name, policy): (String, NumericPolicy)) -> ExitCode {
    let scn = match scenario::load(&args.scenario) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let seed = args.seed.unwrap_or(scn.seed);
    let outcome = match runners::run(scn.kind, seed, scn.params, &policy) {
        Ok(o) => o,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT);
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: numeric failure: {msg}");
            return ExitCode::from(EXIT_NUMERIC);
        }
    };
    // a residual that is not a finite number is a numeric failure, not a
    // tolerance violation; it must never be serialized as a pass/fail verdict
    if let Some(bad) = outcome
        .checks
        .iter()
        .find(|c| !c.residual.is_finite() || !c.tolerance.is_finite())
    {
        eprintln!(
            "error: numeric failure: non-finite residual in \"{}\"",
            bad.label
        );
        return ExitCode::from(EXIT_NUMERIC);
    }

    if let Err(e) = std::fs::create_dir_all(&args.out) {
        eprintln!("error: cannot create {}: {e}", args.out.display());
        return ExitCode::from(EXIT_INPUT);
    }
    let report = Report::new(
        scn.kind.name(),
        seed,
        profile_name,
        policy,
        outcome.results,
        outcome.checks,
    );
    let json = match serde_json::to_string_pretty(&report) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: numeric failure: cannot serialize report: {e}");
            return ExitCode::from(EXIT_NUMERIC);
        }
    };
    if let Err(msg) = write_file(&args.out.join("result.json"), &(json + "\n")) {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_INPUT);
    }
    if args.csv {
        let mut files = vec![("checks.csv".to_string(), checks_csv(&report.checks))];
        files.extend(outcome.csv);
        for (name, contents) in files {
            if let Err(msg) = write_file(&args.out.join(name), &contents) {
                eprintln!("error: {msg}");
                return ExitCode::from(EXIT_INPUT);
            }
        }
    }
    if args.svg {
        for (name, contents) in outcome.svg {
            if let Err(msg) = write_file(&args.out.join(name), &contents) {
                eprintln!("error: {msg}");
                return ExitCode::from(EXIT_INPUT);
            }
        }
    }

    for c in &report.checks {
        let verdict = if c.pass { "ok  " } else { "FAIL" };
        println!(
            "[{verdict}] {}: residual {:.3e} (tol {:.3e})",
            c.label, c.residual, c.tolerance
        );
    }
    if report.pass {
        println!(
            "{}: pass ({} checks)",
            report.scenario_kind,
            report.checks.len()
        );
        ExitCode::from(EXIT_OK)
    } else {
        let failed = report.checks.iter().filter(|c| !c.pass).count();
        println!(
            "{}: FAIL ({failed} of {} checks out of tolerance)",
            report.scenario_kind,
            report.checks.len()
        );
        ExitCode::from(EXIT_VIOLATION)
    }
}

fn cmd_selftest(args: SelftestArgs) -> ExitCode {
    let (level, level_name) = if args.full {
        (Level::Full, "full")
    } else {
        (Level::Quick, "quick")
    };
    // negative-control hook: force a named criterion to fail so the test
    // suite can watch a sabotaged run exit nonzero
    let sabotage = match std::env::var("GNSLAB_SELFTEST_SABOTAGE") {
        Err(_) => None,
        Ok(v) => match v.parse::<usize>() {
            Ok(id) if (1..=NUM_CRITERIA).contains(&id) => Some(id),
            _ => {
                eprintln!(
                    "error: GNSLAB_SELFTEST_SABOTAGE must name a criterion 1..={NUM_CRITERIA}, got \"{v}\""
                );
                return ExitCode::from(EXIT_INPUT);
            }
        },
    };

    let mut timings = Vec::with_capacity(NUM_CRITERIA);
    let mut failed = Vec::new();
    for id in 1..=NUM_CRITERIA {
        let start = Instant::now();
        let mut report = run_criterion(id, level);
        timings.push((id, start.elapsed().as_secs_f64()));
        if sabotage == Some(id) {
            report.checks.push(CheckLine {
                label: "negative control".to_string(),
                pass: false,
                detail: "tolerance sabotage injected via GNSLAB_SELFTEST_SABOTAGE".to_string(),
            });
        }
        print!("{}", report.render());
        if !report.pass() {
            failed.push(id);
        }
    }
    println!(
        "selftest ({level_name}): {}/{NUM_CRITERIA} criteria passed",
        NUM_CRITERIA - failed.len()
    );
    if !failed.is_empty() {
        let list: Vec<String> = failed.iter().map(|id| format!("criterion {id}")).collect();
        println!("failed: {}", list.join(", "));
    }
    if args.full {
        let mut csv = String::from("criterion,seconds\n");
        for (id, secs) in &timings {
            csv.push_str(&format!("{id},{secs:.3}\n"));
        }
        if let Err(e) = std::fs::create_dir_all(&args.out) {
            eprintln!("error: cannot create {}: {e}", args.out.display());
            return ExitCode::from(EXIT_INPUT);
        }
        if let Err(msg) = write_file(&args.out.join("selftest_timings.csv"), &csv) {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    if failed.is_empty() {
        ExitCode::from(EXIT_OK)
    } else {
        ExitCode::from(EXIT_VIOLATION)
    }
}
