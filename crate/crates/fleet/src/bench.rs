//! Monte-Carlo benchmark over seeded scenario families.

use std::io::Write;

use anyhow::Result;
use dubins_fleet_core::exec::Executor;
use dubins_fleet_core::scenario::{make_scenario, ScenarioFamily};
use dubins_fleet_core::{initial_bounds, plan_fleet_with, PlanResult, PlanStatus, PlannerConfig, Scenario, VehicleParams};
use serde::Serialize;

use crate::exec::{RayonExecutor, WallClock};
use crate::files::default_min_width;

/// Flight parameters of the benchmark aircraft.
pub fn bench_params() -> VehicleParams {
    VehicleParams::new(15.0, 40.0, 80.0).expect("valid constants")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchSettings {
    pub time_ratio: f64,
    pub resample_count: usize,
    pub max_iterations: usize,
    pub timeout: f64,
}

impl Default for BenchSettings {
    fn default() -> Self {
        Self { time_ratio: 3.0, resample_count: 2, max_iterations: 300, timeout: 60.0 }
    }
}

impl BenchSettings {
    /// Planner configuration for one scenario; `w` scales with its `τ_min`.
    pub fn config_for(&self, scenario: &Scenario) -> PlannerConfig {
        let mut config = PlannerConfig {
            time_ratio: self.time_ratio,
            resample_count: self.resample_count,
            min_width: 0.1,
            max_iterations: self.max_iterations,
            timeout: self.timeout,
        };
        let (tau_min, _) = initial_bounds(scenario, &config);
        config.min_width = default_min_width(config.time_ratio, tau_min);
        config
    }
}

/// Seed of case `index` in a run started from `base`.
pub fn case_seed(base: u64, index: usize) -> u64 {
    base.wrapping_add(index as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub family: &'static str,
    pub n: usize,
    pub seed: u64,
    pub status: &'static str,
    pub tau: Option<f64>,
    pub wall_time_s: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Case {
    pub family: ScenarioFamily,
    pub n: usize,
    pub seed: u64,
}

/// Every `(family, n, case)` combination in output order.
pub fn cases(families: &[ScenarioFamily], sizes: &[usize], per_size: usize, base_seed: u64) -> Vec<Case> {
    let mut out = Vec::new();
    for &family in families {
        for &n in sizes {
            for i in 0..per_size {
                out.push(Case { family, n, seed: case_seed(base_seed, i) });
            }
        }
    }
    out
}

/// Plans one case. Generation failures become `NoSolution` rows.
pub fn run_case<E: Executor>(case: Case, settings: &BenchSettings, exec: &E) -> (BenchRow, Option<(Scenario, PlanResult)>) {
    let row = |status: &'static str, tau, wall_time_s, iterations| BenchRow {
        family: case.family.as_str(),
        n: case.n,
        seed: case.seed,
        status,
        tau,
        wall_time_s,
        iterations,
    };
    let scenario = match make_scenario(case.family, case.n, bench_params(), case.seed) {
        Ok(s) => s,
        Err(_) => return (row(PlanStatus::NoSolution.as_str(), None, 0.0, 0), None),
    };
    let config = settings.config_for(&scenario);
    let clock = WallClock::start();
    match plan_fleet_with(&scenario, &config, exec, &clock) {
        Ok(r) => (row(r.status.as_str(), r.tau, r.wall_time, r.iterations_used), Some((scenario, r))),
        Err(_) => (row(PlanStatus::NoSolution.as_str(), None, clock_elapsed(&clock), 0), None),
    }
}

fn clock_elapsed(c: &WallClock) -> f64 {
    use dubins_fleet_core::exec::Clock;
    c.elapsed()
}

/// Runs all cases, `jobs` at a time. Rows come back in case order.
pub fn run(cases: &[Case], settings: &BenchSettings, jobs: usize, inner: &RayonExecutor) -> Result<Vec<BenchRow>> {
    if jobs <= 1 {
        return Ok(cases.iter().map(|&c| run_case(c, settings, inner).0).collect());
    }
    let outer = RayonExecutor::new(jobs)?;
    let single = RayonExecutor::new(1)?;
    Ok(outer.map(cases.len(), |i| run_case(cases[i], settings, &single).0))
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Success rate and wall-time quantiles of a group of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub family: &'static str,
    pub n: usize,
    pub cases: usize,
    pub success_rate: f64,
    pub median_s: f64,
    pub p90_s: f64,
    pub max_s: f64,
}

pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let i = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[i]
}

pub fn summarize(rows: &[BenchRow]) -> Vec<Summary> {
    let mut keys: Vec<(&'static str, usize)> = Vec::new();
    for r in rows {
        if !keys.contains(&(r.family, r.n)) {
            keys.push((r.family, r.n));
        }
    }
    keys.into_iter()
        .map(|(family, n)| {
            let group: Vec<&BenchRow> = rows.iter().filter(|r| r.family == family && r.n == n).collect();
            let solved = group.iter().filter(|r| r.status == PlanStatus::Solved.as_str()).count();
            let mut times: Vec<f64> = group.iter().map(|r| r.wall_time_s).collect();
            times.sort_by(f64::total_cmp);
            Summary {
                family,
                n,
                cases: group.len(),
                success_rate: solved as f64 / group.len() as f64,
                median_s: quantile(&times, 0.5),
                p90_s: quantile(&times, 0.9),
                max_s: times.last().copied().unwrap_or(f64::NAN),
            }
        })
        .collect()
}
