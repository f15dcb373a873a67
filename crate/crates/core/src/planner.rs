//! Synchronized fleet planning.
//!
//! A common flight time `τ` is searched over an ascending queue. For every
//! tested `τ` each aircraft gets its candidate set `L_k` from [`fit_dubins`],
//! all candidate pairs are checked for loss of separation, and a
//! conflict-free choice of one candidate per aircraft is searched with a
//! small constraint solver. Once a feasible `τ` is known, larger values are
//! dropped and the queue is refined below it until the sampling width falls
//! under `w`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dubins::{shortest_dubins, FleetPath, Pose, VehicleParams};
use crate::exec::{Clock, Executor, FrozenClock, Sequential};
use crate::fit::fit_dubins;
use crate::math::Complex;
use crate::separation::{check_prepared, PreparedPath, SeparationStats};

/// Two flight times closer than this are the same queue entry.
pub const QUEUE_TOLERANCE: f64 = 1e-9;

/// Best `τ` is replaced only by a value smaller by more than this.
pub const IMPROVEMENT_TOLERANCE: f64 = 1e-9;

/// Largest candidate set the assignment solver accepts per aircraft.
pub const MAX_CANDIDATES: usize = 64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlanError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("invalid planner configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannerConfig {
    /// `R`: the initial queue is `[τ_min, R·τ_min]`.
    pub time_ratio: f64,
    /// `b`: points inserted between two successive queue entries.
    pub resample_count: usize,
    /// `w`: gaps at or below this width are not refined, s.
    pub min_width: f64,
    /// Number of distinct flight times tested before giving up.
    pub max_iterations: usize,
    /// Wall-clock budget, s. Checked before each `τ` and between pair batches.
    pub timeout: f64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self { time_ratio: 3.0, resample_count: 2, min_width: 0.1, max_iterations: 300, timeout: 60.0 }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<(), PlanError> {
        let bad = |msg: &str| Err(PlanError::InvalidConfig(msg.into()));
        if !(self.time_ratio > 1.0) || !self.time_ratio.is_finite() {
            return bad("time ratio R must be > 1");
        }
        if self.resample_count < 1 {
            return bad("resample count b must be >= 1");
        }
        if !(self.min_width > 0.0) {
            return bad("minimum width w must be > 0");
        }
        if self.max_iterations < 1 {
            return bad("max iterations must be >= 1");
        }
        if !(self.timeout > 0.0) {
            return bad("timeout must be > 0");
        }
        Ok(())
    }
}

/// A fleet planning problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub starts: Vec<Pose>,
    pub ends: Vec<Pose>,
    pub params: VehicleParams,
    /// Uniform wind, m/s.
    pub wind: Complex,
    /// `Δt_k`: arrival delay of aircraft `k` after aircraft `k − 1`, s.
    /// The first entry is 0.
    pub arrival_offsets: Vec<f64>,
}

impl Scenario {
    /// Calm-air scenario with synchronous arrival.
    pub fn new(starts: Vec<Pose>, ends: Vec<Pose>, params: VehicleParams) -> Self {
        let n = starts.len();
        Self { starts, ends, params, wind: Complex::ZERO, arrival_offsets: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    pub fn validate(&self) -> Result<(), PlanError> {
        let bad = |msg: String| Err(PlanError::InvalidScenario(msg));
        if let Err(e) = self.params.validate() {
            return bad(alloc::format!("{e}"));
        }
        let n = self.starts.len();
        if n == 0 {
            return bad("at least one aircraft is required".into());
        }
        if self.ends.len() != n || self.arrival_offsets.len() != n {
            return bad(alloc::format!(
                "list lengths differ: {} starts, {} ends, {} arrival offsets",
                n,
                self.ends.len(),
                self.arrival_offsets.len()
            ));
        }
        let wind = self.wind.norm();
        if !(wind < self.params.speed) {
            return bad(alloc::format!("wind speed {wind} m/s must be below airspeed {} m/s", self.params.speed));
        }
        if self.arrival_offsets.iter().any(|o| !(*o >= 0.0) || !o.is_finite()) {
            return bad("arrival offsets must be finite and non-negative".into());
        }
        if self.arrival_offsets[0] != 0.0 {
            return bad("the first arrival offset must be 0".into());
        }
        let finite = |p: &Pose| p.x.is_finite() && p.y.is_finite() && p.theta.is_finite();
        if !self.starts.iter().chain(&self.ends).all(finite) {
            return bad("poses must be finite".into());
        }
        Ok(())
    }
}

/// Arrival delay of each aircraft relative to aircraft 0.
pub fn cumulative_offsets(scenario: &Scenario) -> Vec<f64> {
    let mut sum = 0.0;
    scenario
        .arrival_offsets
        .iter()
        .map(|o| {
            sum += o;
            sum
        })
        .collect()
}

/// `(τ_min, R·τ_min)`, ignoring wind.
pub fn initial_bounds(scenario: &Scenario, config: &PlannerConfig) -> (f64, f64) {
    let offsets = cumulative_offsets(scenario);
    let speed = scenario.params.speed;
    let mut tau_min: f64 = 0.0;
    for k in 0..scenario.len() {
        let own = match shortest_dubins(&scenario.starts[k], &scenario.ends[k], &scenario.params) {
            Ok((tau, _)) => tau,
            Err(_) => scenario.starts[k].distance(&scenario.ends[k]) / speed,
        };
        tau_min = tau_min.max(own - offsets[k]);
    }
    (tau_min, config.time_ratio * tau_min)
}

/// End pose in the air mass: the ground target moved against the drift
/// accumulated over `tau_k` seconds.
pub fn wind_shifted_end(end: &Pose, wind: Complex, tau_k: f64) -> Pose {
    Pose::from_position(end.position() - wind * tau_k, end.theta)
}

/// Ground position of an air-frame path at time `t` under uniform wind.
pub fn ground_position(path: &FleetPath, wind: Complex, t: f64) -> Complex {
    path.position_at(t) + wind * t
}

/// `L_k` for every aircraft at common flight time `tau`.
pub fn build_candidates(scenario: &Scenario, tau: f64) -> Vec<Vec<FleetPath>> {
    build_candidates_with(&Sequential, scenario, tau)
}

pub fn build_candidates_with<E: Executor>(exec: &E, scenario: &Scenario, tau: f64) -> Vec<Vec<FleetPath>> {
    let offsets = cumulative_offsets(scenario);
    exec.map(scenario.len(), |k| {
        let tau_k = tau + offsets[k];
        let end = wind_shifted_end(&scenario.ends[k], scenario.wind, tau_k);
        fit_dubins(&scenario.starts[k], &end, &scenario.params, tau_k)
    })
}

/// `c[a, b, g, h]`: whether candidate `g` of aircraft `a` and candidate `h`
/// of aircraft `b` lose separation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictMatrix {
    sizes: Vec<usize>,
    /// Start of the `(a, b)` block in `data`, `a < b`, row-major.
    offsets: Vec<usize>,
    data: Vec<bool>,
}

impl ConflictMatrix {
    /// All-clear matrix for the given candidate counts.
    pub fn new(sizes: &[usize]) -> Self {
        let n = sizes.len();
        let mut offsets = vec![0; n * n];
        let mut total = 0;
        for a in 0..n {
            for b in a + 1..n {
                offsets[a * n + b] = total;
                total += sizes[a] * sizes[b];
            }
        }
        Self { sizes: sizes.to_vec(), offsets, data: vec![false; total] }
    }

    /// Matrix with entries given by `conflict(a, b, g, h)` for `a < b`.
    pub fn from_fn(sizes: &[usize], mut conflict: impl FnMut(usize, usize, usize, usize) -> bool) -> Self {
        let mut m = Self::new(sizes);
        let n = sizes.len();
        for a in 0..n {
            for b in a + 1..n {
                for g in 0..sizes[a] {
                    for h in 0..sizes[b] {
                        m.set(a, b, g, h, conflict(a, b, g, h));
                    }
                }
            }
        }
        m
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn aircraft(&self) -> usize {
        self.sizes.len()
    }

    fn index(&self, a: usize, b: usize, g: usize, h: usize) -> usize {
        let (a, b, g, h) = if a < b { (a, b, g, h) } else { (b, a, h, g) };
        debug_assert!(a != b && g < self.sizes[a] && h < self.sizes[b]);
        self.offsets[a * self.sizes.len() + b] + g * self.sizes[b] + h
    }

    /// Symmetric in `(a, g) ↔ (b, h)`; `a ≠ b`.
    pub fn get(&self, a: usize, b: usize, g: usize, h: usize) -> bool {
        self.data[self.index(a, b, g, h)]
    }

    pub fn set(&mut self, a: usize, b: usize, g: usize, h: usize, conflict: bool) {
        let i = self.index(a, b, g, h);
        self.data[i] = conflict;
    }

    fn block(&self, a: usize, b: usize) -> &[bool] {
        let start = self.offsets[a * self.sizes.len() + b];
        &self.data[start..start + self.sizes[a] * self.sizes[b]]
    }

    fn block_mut(&mut self, a: usize, b: usize) -> &mut [bool] {
        let start = self.offsets[a * self.sizes.len() + b];
        let len = self.sizes[a] * self.sizes[b];
        &mut self.data[start..start + len]
    }
}

/// Conflict matrix between candidate sets.
pub fn build_conflict_matrix(candidates: &[Vec<FleetPath>], delta: f64) -> ConflictMatrix {
    let prepared = prepare(candidates);
    match fill_matrix(&Sequential, &FrozenClock, f64::INFINITY, &prepared, delta, false) {
        MatrixOutcome::Complete(m, _) => m,
        _ => unreachable!("exhaustive build neither times out nor stops early"),
    }
}

fn prepare(candidates: &[Vec<FleetPath>]) -> Vec<Vec<PreparedPath>> {
    candidates.iter().map(|l| l.iter().map(PreparedPath::new).collect()).collect()
}

enum MatrixOutcome {
    Complete(ConflictMatrix, SeparationStats),
    /// Some aircraft pair has no conflict-free combination.
    Blocked(SeparationStats),
    TimedOut(SeparationStats),
}

/// Fills the matrix one aircraft pair at a time; each pair is a batch of
/// independent row tasks. With `stop_when_blocked`, a pair whose block is
/// entirely in conflict ends the build.
fn fill_matrix<E: Executor, C: Clock>(
    exec: &E,
    clock: &C,
    deadline: f64,
    prepared: &[Vec<PreparedPath>],
    delta: f64,
    stop_when_blocked: bool,
) -> MatrixOutcome {
    let sizes: Vec<usize> = prepared.iter().map(Vec::len).collect();
    let mut matrix = ConflictMatrix::new(&sizes);
    let mut stats = SeparationStats::default();
    let n = sizes.len();
    for a in 0..n {
        for b in a + 1..n {
            if clock.elapsed() >= deadline {
                return MatrixOutcome::TimedOut(stats);
            }
            let (la, lb) = (&prepared[a], &prepared[b]);
            let rows = exec.map(la.len(), |g| {
                let mut local = SeparationStats::default();
                let row: Vec<bool> = lb
                    .iter()
                    .map(|pb| {
                        let horizon = la[g].duration.min(pb.duration);
                        !check_prepared(&la[g], pb, delta, horizon, &mut local)
                    })
                    .collect();
                (row, local)
            });
            let block = matrix.block_mut(a, b);
            for (g, (row, local)) in rows.into_iter().enumerate() {
                block[g * lb.len()..(g + 1) * lb.len()].copy_from_slice(&row);
                stats.merge(&local);
            }
            if stop_when_blocked && matrix.block(a, b).iter().all(|&c| c) {
                return MatrixOutcome::Blocked(stats);
            }
        }
    }
    MatrixOutcome::Complete(matrix, stats)
}

/// Bitmask constraint view of a conflict matrix.
struct Constraints {
    n: usize,
    /// `compatible[(a·n + b)·64 + g]`: candidates of `b` compatible with `a = g`.
    compatible: Vec<u64>,
}

impl Constraints {
    fn new(matrix: &ConflictMatrix) -> Self {
        let n = matrix.aircraft();
        let sizes = matrix.sizes();
        let mut compatible = vec![0u64; n * n * MAX_CANDIDATES];
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                for g in 0..sizes[a] {
                    let mut mask = 0u64;
                    for h in 0..sizes[b] {
                        if !matrix.get(a, b, g, h) {
                            mask |= 1 << h;
                        }
                    }
                    compatible[(a * n + b) * MAX_CANDIDATES + g] = mask;
                }
            }
        }
        Self { n, compatible }
    }

    #[inline]
    fn compatible(&self, a: usize, b: usize, g: usize) -> u64 {
        self.compatible[(a * self.n + b) * MAX_CANDIDATES + g]
    }

    /// Fixes `a = g` and prunes the other open domains; false on a wipe-out.
    fn assign(&self, domains: &mut [u64], fixed: &mut [bool], a: usize, g: usize) -> bool {
        domains[a] = 1 << g;
        fixed[a] = true;
        for b in 0..self.n {
            if b != a {
                domains[b] &= self.compatible(a, b, g);
                if domains[b] == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Backtracking with smallest-domain-first ordering and forward checking.
    fn search(&self, domains: &mut Vec<u64>, fixed: &mut Vec<bool>) -> bool {
        let next = (0..self.n).filter(|&k| !fixed[k]).min_by_key(|&k| (domains[k].count_ones(), k));
        let Some(k) = next else {
            return true;
        };
        let mut options = domains[k];
        while options != 0 {
            let g = options.trailing_zeros() as usize;
            options &= options - 1;
            let (saved_domains, saved_fixed) = (domains.clone(), fixed.clone());
            if self.assign(domains, fixed, k, g) && self.search(domains, fixed) {
                return true;
            }
            *domains = saved_domains;
            *fixed = saved_fixed;
        }
        false
    }
}

/// A conflict-free choice of one candidate per aircraft, or `None`.
///
/// Among all solutions the lexicographically smallest one (aircraft 0
/// first, lowest candidate index first) is returned.
pub fn solve_assignment(matrix: &ConflictMatrix, sizes: &[usize]) -> Option<Vec<usize>> {
    assert_eq!(matrix.sizes(), sizes, "sizes must match the matrix");
    assert!(sizes.iter().all(|&s| s <= MAX_CANDIDATES), "at most {MAX_CANDIDATES} candidates per aircraft");
    if sizes.contains(&0) {
        return None;
    }
    let n = sizes.len();
    let cons = Constraints::new(matrix);
    let mut domains: Vec<u64> = sizes.iter().map(|&s| if s == 64 { u64::MAX } else { (1u64 << s) - 1 }).collect();
    let mut fixed = vec![false; n];
    // pairwise wipe-outs before any branching
    for a in 0..n {
        for b in 0..n {
            if a != b {
                let mut support = 0u64;
                let mut options = domains[a];
                while options != 0 {
                    let g = options.trailing_zeros() as usize;
                    options &= options - 1;
                    if cons.compatible(a, b, g) & domains[b] != 0 {
                        support |= 1 << g;
                    }
                }
                domains[a] = support;
                if support == 0 {
                    return None;
                }
            }
        }
    }
    if !cons.search(&mut domains.clone(), &mut fixed.clone()) {
        return None;
    }
    // walk the aircraft in index order, keeping the smallest viable choice
    for k in 0..n {
        let mut options = domains[k];
        let mut chosen = false;
        while options != 0 {
            let g = options.trailing_zeros() as usize;
            options &= options - 1;
            let (mut d, mut f) = (domains.clone(), fixed.clone());
            if cons.assign(&mut d, &mut f, k, g) && cons.search(&mut d.clone(), &mut f.clone()) {
                domains = d;
                fixed = f;
                chosen = true;
                break;
            }
        }
        debug_assert!(chosen, "a feasible instance always admits a choice");
        if !chosen {
            return None;
        }
    }
    Some(domains.iter().map(|d| d.trailing_zeros() as usize).collect())
}

/// Ascending set of flight times with their tested flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TimeQueue {
    entries: Vec<(f64, bool)>,
}

impl TimeQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Inserts an untested `tau` unless an entry lies within the dedup
    /// tolerance. Returns whether it was added.
    pub fn insert(&mut self, tau: f64) -> bool {
        let i = self.entries.partition_point(|&(t, _)| t < tau);
        let near = |j: usize| self.entries.get(j).is_some_and(|&(t, _)| (t - tau).abs() <= QUEUE_TOLERANCE);
        if near(i) || (i > 0 && near(i - 1)) {
            return false;
        }
        self.entries.insert(i, (tau, false));
        true
    }

    pub fn taus(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|&(t, _)| t)
    }

    pub fn is_tested(&self, index: usize) -> bool {
        self.entries[index].1
    }

    /// Smallest untested entry, marked tested on return.
    pub fn take_untested(&mut self) -> Option<f64> {
        let e = self.entries.iter_mut().find(|e| !e.1)?;
        e.1 = true;
        Some(e.0)
    }

    /// Drops every entry above `tau`.
    pub fn prune_above(&mut self, tau: f64) {
        self.entries.retain(|&(t, _)| t <= tau + QUEUE_TOLERANCE);
    }
}

/// Inserts `b` equispaced points into every gap wider than `w`. Returns the
/// number of entries added.
pub fn resample(queue: &mut TimeQueue, b: usize, w: f64) -> usize {
    let taus: Vec<f64> = queue.taus().collect();
    let mut added = 0;
    for pair in taus.windows(2) {
        let gap = pair[1] - pair[0];
        if gap > w {
            for j in 1..=b {
                if queue.insert(pair[0] + j as f64 * gap / (b + 1) as f64) {
                    added += 1;
                }
            }
        }
    }
    added
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlanStatus {
    /// A conflict-free plan was found.
    Solved,
    /// The initial queue held a single flight time and it was infeasible.
    NoSolution,
    Timeout,
    IterationLimit,
    /// Refinement reached the minimum width without a feasible flight time.
    NoProgress,
}

impl PlanStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PlanStatus::Solved => "Solved",
            PlanStatus::NoSolution => "NoSolution",
            PlanStatus::Timeout => "Timeout",
            PlanStatus::IterationLimit => "IterationLimit",
            PlanStatus::NoProgress => "NoProgress",
        }
    }
}

impl core::fmt::Display for PlanStatus {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Why the search loop ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StopReason {
    Timeout,
    IterationLimit,
    NoProgress,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Telemetry {
    pub tau_min: f64,
    pub tau_max: f64,
    pub pair_checks: u64,
    pub spatial_tests: u64,
    pub temporal_solves: u64,
    pub stop_reason: StopReason,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult {
    pub status: PlanStatus,
    /// Common flight time of aircraft 0; aircraft `k` flies `tau` plus its
    /// cumulative arrival offset.
    pub tau: Option<f64>,
    /// One air-frame path per aircraft when solved, empty otherwise.
    pub paths: Vec<FleetPath>,
    /// Chosen candidate index per aircraft.
    pub assignment: Vec<usize>,
    pub iterations_used: usize,
    pub wall_time: f64,
    pub telemetry: Telemetry,
}

enum TauOutcome {
    Feasible(Vec<FleetPath>, Vec<usize>),
    Infeasible,
    TimedOut,
}

struct Search<'a, E, C> {
    scenario: &'a Scenario,
    config: &'a PlannerConfig,
    exec: &'a E,
    clock: &'a C,
    stats: SeparationStats,
}

impl<E: Executor, C: Clock> Search<'_, E, C> {
    fn test(&mut self, tau: f64) -> TauOutcome {
        let candidates = build_candidates_with(self.exec, self.scenario, tau);
        if candidates.iter().any(Vec::is_empty) {
            return TauOutcome::Infeasible;
        }
        if candidates.iter().any(|l| l.len() > MAX_CANDIDATES) {
            unreachable!("the extended family has 32 members");
        }
        let prepared = prepare(&candidates);
        let delta = self.scenario.params.separation;
        let outcome = fill_matrix(self.exec, self.clock, self.config.timeout, &prepared, delta, true);
        let matrix = match outcome {
            MatrixOutcome::Complete(m, s) => {
                self.stats.merge(&s);
                m
            }
            MatrixOutcome::Blocked(s) => {
                self.stats.merge(&s);
                return TauOutcome::Infeasible;
            }
            MatrixOutcome::TimedOut(s) => {
                self.stats.merge(&s);
                return TauOutcome::TimedOut;
            }
        };
        let sizes: Vec<usize> = candidates.iter().map(Vec::len).collect();
        match solve_assignment(&matrix, &sizes) {
            Some(choice) => {
                let paths = candidates.into_iter().zip(&choice).map(|(mut l, &g)| l.swap_remove(g)).collect();
                TauOutcome::Feasible(paths, choice)
            }
            None => TauOutcome::Infeasible,
        }
    }
}

/// Plans on the calling thread without a timeout clock.
pub fn plan_fleet(scenario: &Scenario, config: &PlannerConfig) -> Result<PlanResult, PlanError> {
    plan_fleet_with(scenario, config, &Sequential, &FrozenClock)
}

/// Plans with injected parallelism and time source. The result does not
/// depend on the executor, only on the clock through the timeout.
pub fn plan_fleet_with<E: Executor, C: Clock>(
    scenario: &Scenario,
    config: &PlannerConfig,
    exec: &E,
    clock: &C,
) -> Result<PlanResult, PlanError> {
    scenario.validate()?;
    config.validate()?;
    let (tau_min, tau_max) = initial_bounds(scenario, config);
    let mut queue = TimeQueue::new();
    queue.insert(tau_min);
    queue.insert(tau_max);
    let initial_entries = queue.len();

    let mut search = Search { scenario, config, exec, clock, stats: SeparationStats::default() };
    let mut best: Option<(f64, Vec<FleetPath>, Vec<usize>)> = None;
    let mut iterations = 0;
    let stop = 'outer: loop {
        while let Some(tau) = queue.take_untested() {
            if clock.elapsed() >= config.timeout {
                break 'outer StopReason::Timeout;
            }
            if iterations >= config.max_iterations {
                break 'outer StopReason::IterationLimit;
            }
            iterations += 1;
            match search.test(tau) {
                TauOutcome::Feasible(paths, choice) => {
                    if best.as_ref().is_none_or(|b| tau < b.0 - IMPROVEMENT_TOLERANCE) {
                        best = Some((tau, paths, choice));
                    }
                    break;
                }
                TauOutcome::Infeasible => {}
                TauOutcome::TimedOut => break 'outer StopReason::Timeout,
            }
        }
        if let Some((tau, _, _)) = &best {
            queue.prune_above(*tau);
        }
        if resample(&mut queue, config.resample_count, config.min_width) == 0 {
            break StopReason::NoProgress;
        }
    };

    let telemetry = Telemetry {
        tau_min,
        tau_max,
        pair_checks: search.stats.pair_checks,
        spatial_tests: search.stats.spatial_tests,
        temporal_solves: search.stats.temporal_solves,
        stop_reason: stop,
    };
    let wall_time = clock.elapsed();
    Ok(match best {
        Some((tau, paths, assignment)) => PlanResult {
            status: PlanStatus::Solved,
            tau: Some(tau),
            paths,
            assignment,
            iterations_used: iterations,
            wall_time,
            telemetry,
        },
        None => PlanResult {
            status: match stop {
                StopReason::Timeout => PlanStatus::Timeout,
                StopReason::IterationLimit => PlanStatus::IterationLimit,
                StopReason::NoProgress if iterations <= initial_entries => PlanStatus::NoSolution,
                StopReason::NoProgress => PlanStatus::NoProgress,
            },
            tau: None,
            paths: Vec::new(),
            assignment: Vec::new(),
            iterations_used: iterations,
            wall_time,
            telemetry,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dubins::{Extension, WordTag};
    use crate::separation::are_separated;
    use core::f64::consts::PI;
    use proptest::prelude::*;

    fn params() -> VehicleParams {
        VehicleParams::new(15.0, 40.0, 80.0).unwrap()
    }

    fn straight_pair(d0: f64, d1: f64) -> Scenario {
        // two aircraft on parallel tracks 1 km apart with straight lengths d0, d1
        Scenario::new(
            vec![Pose::new(0.0, 0.0, 0.0), Pose::new(0.0, 1000.0, 0.0)],
            vec![Pose::new(d0, 0.0, 0.0), Pose::new(d1, 1000.0, 0.0)],
            params(),
        )
    }

    #[test]
    fn bounds_examples() {
        let cfg = PlannerConfig::default();
        let (lo, hi) = initial_bounds(&straight_pair(150.0, 150.0), &cfg);
        assert!((lo - 10.0).abs() < 1e-12 && (hi - 30.0).abs() < 1e-12);
        let (lo, _) = initial_bounds(&straight_pair(150.0, 300.0), &cfg);
        assert!((lo - 20.0).abs() < 1e-12);
        let mut s = straight_pair(150.0, 150.0);
        s.arrival_offsets = vec![0.0, 5.0];
        let (lo, _) = initial_bounds(&s, &cfg);
        assert!((lo - 10.0).abs() < 1e-12);
    }

    #[test]
    fn wind_shift_examples() {
        let e = Pose::new(1000.0, 0.0, 0.0);
        assert_eq!(wind_shifted_end(&e, Complex::ZERO, 20.0), e);
        let s = wind_shifted_end(&e, Complex::new(10.0, 0.0), 20.0);
        assert_eq!((s.x, s.y, s.theta), (800.0, 0.0, 0.0));
        let e = Pose::new(3.0, 4.0, 2.5);
        assert_eq!(wind_shifted_end(&e, Complex::new(-3.0, 7.0), 11.0).theta, 2.5);
    }

    #[test]
    fn resample_examples() {
        let mut q = TimeQueue::new();
        q.insert(10.0);
        q.insert(30.0);
        assert_eq!(resample(&mut q, 2, 0.1), 2);
        let t: Vec<f64> = q.taus().collect();
        assert!((t[1] - 50.0 / 3.0).abs() < 1e-12 && (t[2] - 70.0 / 3.0).abs() < 1e-12);

        let mut q = TimeQueue::new();
        q.insert(10.0);
        q.insert(10.05);
        assert_eq!(resample(&mut q, 2, 0.1), 0);

        let mut q = TimeQueue::new();
        q.insert(4.0);
        q.insert(6.0);
        assert_eq!(resample(&mut q, 1, 0.1), 1);
        assert_eq!(q.taus().collect::<Vec<_>>(), vec![4.0, 5.0, 6.0]);
    }

    #[test]
    fn queue_dedup_and_prune() {
        let mut q = TimeQueue::new();
        assert!(q.insert(1.0));
        assert!(!q.insert(1.0 + 5e-10));
        assert!(q.insert(2.0));
        assert!(q.insert(3.0));
        assert_eq!(q.take_untested(), Some(1.0));
        assert!(q.is_tested(0) && !q.is_tested(1));
        q.prune_above(2.0);
        assert_eq!(q.taus().collect::<Vec<_>>(), vec![1.0, 2.0]);
    }

    #[test]
    fn assignment_examples() {
        let m = ConflictMatrix::from_fn(&[2, 2], |_, _, g, h| g == 0 && h == 0);
        let a = solve_assignment(&m, &[2, 2]).unwrap();
        assert!(!m.get(0, 1, a[0], a[1]));
        assert_eq!(a, vec![0, 1]);
        let m = ConflictMatrix::from_fn(&[2, 3], |_, _, _, _| true);
        assert_eq!(solve_assignment(&m, &[2, 3]), None);
        let m = ConflictMatrix::new(&[3]);
        assert_eq!(solve_assignment(&m, &[3]), Some(vec![0]));
    }

    #[test]
    fn matrix_symmetry() {
        let mut m = ConflictMatrix::new(&[2, 3, 1]);
        m.set(2, 0, 0, 1, true);
        assert!(m.get(0, 2, 1, 0));
        assert!(!m.get(0, 2, 0, 0));
    }

    fn brute_force(m: &ConflictMatrix, sizes: &[usize]) -> Option<Vec<usize>> {
        let n = sizes.len();
        let mut idx = vec![0usize; n];
        loop {
            let ok = (0..n).all(|a| (a + 1..n).all(|b| !m.get(a, b, idx[a], idx[b])));
            if ok {
                return Some(idx);
            }
            let mut k = n;
            loop {
                if k == 0 {
                    return None;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < sizes[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    proptest! {
        #[test]
        fn assignment_matches_brute_force(
            sizes in proptest::collection::vec(1usize..=6, 1..=6),
            density in 0.0f64..0.8,
            seed in any::<u64>(),
        ) {
            let mut state = seed | 1;
            let m = ConflictMatrix::from_fn(&sizes, |_, _, _, _| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state % 1000) as f64 / 1000.0 < density
            });
            // enumeration in lexicographic order finds the lex-smallest solution first
            prop_assert_eq!(solve_assignment(&m, &sizes), brute_force(&m, &sizes));
        }
    }

    #[test]
    fn single_aircraft_takes_shortest_time() {
        let s = Scenario::new(vec![Pose::new(0.0, 0.0, 0.0)], vec![Pose::new(0.0, 80.0, PI)], params());
        let r = plan_fleet(&s, &PlannerConfig::default()).unwrap();
        assert_eq!(r.status, PlanStatus::Solved);
        assert!((r.tau.unwrap() - 40.0 * PI / 15.0).abs() < 1e-9);
        assert_eq!(r.iterations_used, 1);
        assert_eq!(r.paths[0].word.tag, WordTag::Lsl);
    }

    #[test]
    fn identical_candidates_conflict() {
        let p = fit_dubins(&Pose::new(0.0, 0.0, 0.0), &Pose::new(300.0, 0.0, 0.0), &params(), 20.0);
        let m = build_conflict_matrix(&[vec![p[0].clone()], vec![p[0].clone()]], 80.0);
        assert!(m.get(0, 1, 0, 0));
        let far = fit_dubins(&Pose::new(0.0, 1e4, 0.0), &Pose::new(300.0, 1e4, 0.0), &params(), 20.0);
        let m = build_conflict_matrix(&[p.clone(), far.clone()], 80.0);
        assert!((0..p.len()).all(|g| (0..far.len()).all(|h| !m.get(0, 1, g, h))));
        let r = build_conflict_matrix(&[far.clone(), p.clone()], 80.0);
        assert!((0..p.len()).all(|g| (0..far.len()).all(|h| m.get(0, 1, g, h) == r.get(1, 0, g, h))));
    }

    fn min_distance(a: &FleetPath, b: &FleetPath, dt: f64) -> f64 {
        let t_end = a.duration().min(b.duration());
        let n = (t_end / dt).ceil() as usize;
        (0..=n)
            .map(|i| {
                let t = (i as f64 * dt).min(t_end);
                (a.position_at(t) - b.position_at(t)).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn head_on_swap_is_deconflicted() {
        let s = Scenario::new(
            vec![Pose::new(0.0, 0.0, 0.0), Pose::new(600.0, 0.0, PI)],
            vec![Pose::new(600.0, 0.0, 0.0), Pose::new(0.0, 0.0, PI)],
            params(),
        );
        let r = plan_fleet(&s, &PlannerConfig::default()).unwrap();
        assert_eq!(r.status, PlanStatus::Solved);
        let tau = r.tau.unwrap();
        assert!(tau > 40.0);
        for p in &r.paths {
            assert!((p.duration() - tau).abs() < 1e-6);
        }
        assert!(are_separated(80.0, &r.paths).unwrap());
        assert!(min_distance(&r.paths[0], &r.paths[1], 1e-3) > 80.0);
        assert!(r.paths.iter().any(|p| p.word.tag != WordTag::Lsl || p.word.extension != Extension::None));
    }

    #[test]
    fn wind_endpoints_are_reached() {
        let mut s = straight_pair(900.0, 700.0);
        s.wind = Complex::new(4.0, -3.0);
        s.arrival_offsets = vec![0.0, 6.0];
        let r = plan_fleet(&s, &PlannerConfig::default()).unwrap();
        assert_eq!(r.status, PlanStatus::Solved);
        let offsets = cumulative_offsets(&s);
        for (k, p) in r.paths.iter().enumerate() {
            let t = r.tau.unwrap() + offsets[k];
            assert!((p.duration() - t).abs() < 1e-6);
            let g = ground_position(p, s.wind, t);
            assert!((g - s.ends[k].position()).norm() < 1e-3);
        }
    }

    #[test]
    fn rejects_invalid_scenarios() {
        let mut s = straight_pair(150.0, 150.0);
        s.wind = Complex::new(15.0, 0.0);
        assert!(matches!(plan_fleet(&s, &PlannerConfig::default()), Err(PlanError::InvalidScenario(_))));
        let mut s = straight_pair(150.0, 150.0);
        s.ends.pop();
        assert!(matches!(plan_fleet(&s, &PlannerConfig::default()), Err(PlanError::InvalidScenario(_))));
        let cfg = PlannerConfig { time_ratio: 1.0, ..Default::default() };
        assert!(matches!(plan_fleet(&straight_pair(1.0, 1.0), &cfg), Err(PlanError::InvalidConfig(_))));
    }

    #[test]
    fn hold_position_at_zero_time() {
        let s = Scenario::new(
            vec![Pose::new(0.0, 0.0, 0.0), Pose::new(500.0, 0.0, 0.0)],
            vec![Pose::new(0.0, 0.0, 0.0), Pose::new(500.0, 0.0, 0.0)],
            params(),
        );
        let r = plan_fleet(&s, &PlannerConfig::default()).unwrap();
        assert_eq!(r.status, PlanStatus::Solved);
        assert_eq!(r.tau, Some(0.0));
    }
}
