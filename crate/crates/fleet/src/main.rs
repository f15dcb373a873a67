use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dubins_fleet::bench::{self, BenchSettings};
use dubins_fleet::exec::{default_threads, RayonExecutor, WallClock};
use dubins_fleet::files::{GeneratorSection, PlannerSection, ResultFile, ScenarioFile};
use dubins_fleet::{demo, svg};
use dubins_fleet_core::scenario::{make_scenario, ScenarioFamily, GENERATOR};
use dubins_fleet_core::{plan_fleet_with, PlanStatus};

/// Synchronized conflict-free path planning for fixed-wing fleets.
///
/// Files are JSON with distances in metres, times in seconds and angles in
/// radians. Worker threads default to the number of cores and are capped
/// by DUBINS_FLEET_THREADS.
#[derive(Parser)]
#[command(name = "dubins-fleet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Limits {
    /// Wall-clock budget per plan, s.
    #[arg(long)]
    timeout: Option<f64>,
    /// Maximum number of flight times tested per plan.
    #[arg(long = "max-iters")]
    max_iters: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Plan one scenario file and write a result file.
    Plan {
        /// Scenario JSON.
        scenario: PathBuf,
        /// Result JSON (standard output when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also render the paths to this SVG file.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Run seeded scenarios and write one CSV row per case.
    Bench {
        /// Formation, RngToFormation, FullRng or all.
        #[arg(long, default_value = "all")]
        family: String,
        /// Fleet sizes as `a-b` or a single number.
        #[arg(long, default_value = "3-8")]
        sizes: String,
        /// Cases per fleet size and family.
        #[arg(long, default_value_t = 10)]
        cases: usize,
        /// Seed of the first case; case i uses seed + i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output (standard output when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Cases planned concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        limits: Limits,
    },
    /// Circle-to-chevron transition without and with a 10 m/s wind.
    Demo {
        /// Directory receiving demo-calm.svg and demo-wind.svg.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Write a generated benchmark scenario as a scenario file.
    Generate {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_family(s: &str) -> Result<ScenarioFamily> {
    s.parse().map_err(|_| anyhow::anyhow!("unknown family {s:?} (expected Formation, RngToFormation or FullRng)"))
}

fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    let (a, b) = s.split_once('-').unwrap_or((s, s));
    let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
    if a == 0 || a > b {
        bail!("invalid size range {s:?}");
    }
    Ok((a..=b).collect())
}

fn settings(limits: Limits) -> BenchSettings {
    let mut s = BenchSettings::default();
    if let Some(t) = limits.timeout {
        s.timeout = t;
    }
    if let Some(m) = limits.max_iters {
        s.max_iterations = m;
    }
    s
}

/// Exit code 0 when solved, 2 for any other planner outcome.
fn cmd_plan(scenario: &Path, out: Option<&Path>, svg_path: Option<&Path>, limits: Limits) -> Result<ExitCode> {
    let file = ScenarioFile::load(scenario)?;
    let (scenario, mut config) = file.to_problem()?;
    if let Some(t) = limits.timeout {
        config.timeout = t;
    }
    if let Some(m) = limits.max_iters {
        config.max_iterations = m;
    }
    config.validate()?;
    let exec = RayonExecutor::from_env()?;
    let result = plan_fleet_with(&scenario, &config, &exec, &WallClock::start())?;
    write_or_print(out, &ResultFile::from_plan(&scenario, &result).to_json())?;
    if let Some(p) = svg_path {
        std::fs::write(p, svg::render(&result.paths, scenario.params.separation))
            .with_context(|| format!("cannot write {}", p.display()))?;
    }
    eprintln!("{} tau={:?} iterations={}", result.status, result.tau, result.iterations_used);
    Ok(if result.status == PlanStatus::Solved { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Plan { scenario, out, svg, limits } => cmd_plan(&scenario, out.as_deref(), svg.as_deref(), limits),
        Command::Bench { family, sizes, cases, seed, out, jobs, limits } => {
            let families = if family.eq_ignore_ascii_case("all") {
                ScenarioFamily::ALL.to_vec()
            } else {
                vec![parse_family(&family)?]
            };
            let sizes = parse_sizes(&sizes)?;
            let list = bench::cases(&families, &sizes, cases, seed);
            let inner = RayonExecutor::new(if jobs > 1 { 1 } else { default_threads() })?;
            let rows = bench::run(&list, &settings(limits), jobs, &inner)?;
            let mut buf = Vec::new();
            bench::write_csv(&rows, &mut buf)?;
            write_or_print(out.as_deref(), std::str::from_utf8(&buf)?)?;
            eprintln!("{:<15} {:>3} {:>6} {:>8} {:>9} {:>9} {:>9}", "family", "n", "cases", "success", "median_s", "p90_s", "max_s");
            for s in bench::summarize(&rows) {
                eprintln!(
                    "{:<15} {:>3} {:>6} {:>7.1}% {:>9.3} {:>9.3} {:>9.3}",
                    s.family,
                    s.n,
                    s.cases,
                    100.0 * s.success_rate,
                    s.median_s,
                    s.p90_s,
                    s.max_s
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Demo { out, limits } => {
            let exec = RayonExecutor::from_env()?;
            let runs = demo::run(&settings(limits), &exec)?;
            let mut all_solved = true;
            for (run, name) in runs.iter().zip(["demo-calm.svg", "demo-wind.svg"]) {
                let path = out.join(name);
                std::fs::write(&path, svg::render(&run.result.paths, run.scenario.params.separation))
                    .with_context(|| format!("cannot write {}", path.display()))?;
                let w = run.scenario.wind;
                eprintln!(
                    "wind ({}, {}) m/s: {} tau={:?} -> {}",
                    w.re,
                    w.im,
                    run.result.status,
                    run.result.tau,
                    path.display()
                );
                all_solved &= run.result.status == PlanStatus::Solved;
            }
            Ok(if all_solved { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Generate { family, n, seed, out } => {
            let family = parse_family(&family)?;
            let scenario = make_scenario(family, n, bench::bench_params(), seed)?;
            let generator =
                GeneratorSection { algorithm: GENERATOR.to_string(), family: family.as_str().to_string(), seed };
            let file = ScenarioFile::from_scenario(&scenario, PlannerSection::default(), Some(generator));
            write_or_print(out.as_deref(), &file.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
