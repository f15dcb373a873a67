//! Independent checks of planned paths.
//!
//! Nothing here reuses the planner's separation code: distances are
//! sampled densely in time, poses are recovered by integrating the vehicle
//! model, and ground tracks add the wind drift back.

use dubins_fleet_core::dubins::PrimitiveKind;
use dubins_fleet_core::planner::{cumulative_offsets, ground_position};
use dubins_fleet_core::{Complex, FleetPath, PlanResult, Pose, Scenario};

/// Instants covering `[0, horizon]` every `dt`, plus every primitive
/// boundary of either path.
pub fn sample_times(a: &FleetPath, b: &FleetPath, horizon: f64, dt: f64) -> Vec<f64> {
    let n = (horizon / dt).ceil() as usize;
    let mut times: Vec<f64> = (0..=n).map(|i| (i as f64 * dt).min(horizon)).collect();
    for p in [a, b] {
        let mut t = 0.0;
        for prim in &p.primitives {
            t += prim.duration;
            if t <= horizon {
                times.push(t);
            }
        }
    }
    times
}

/// Smallest sampled distance between two paths over their common span,
/// with positions given by `at(path, t)`.
pub fn dense_min_distance_by(
    a: &FleetPath,
    b: &FleetPath,
    dt: f64,
    at: impl Fn(&FleetPath, f64) -> Complex,
) -> (f64, f64) {
    let horizon = a.duration().min(b.duration());
    sample_times(a, b, horizon, dt)
        .into_iter()
        .map(|t| ((at(a, t) - at(b, t)).norm(), t))
        .fold((f64::INFINITY, 0.0), |m, x| if x.0 < m.0 { x } else { m })
}

/// Smallest air-frame distance, sampled every `dt` seconds.
pub fn dense_min_distance(a: &FleetPath, b: &FleetPath, dt: f64) -> f64 {
    dense_min_distance_by(a, b, dt, |p, t| p.position_at(t)).0
}

/// Integrates `ẋ = V cos θ, ẏ = V sin θ, θ̇ = u` with classical RK4, using
/// the constant turn rate of each primitive, `steps` steps per primitive.
pub fn integrate(path: &FleetPath, steps: usize) -> Pose {
    let v = path.speed;
    let (mut x, mut y, mut th) = (path.start.x, path.start.y, path.start.theta);
    for prim in &path.primitives {
        if prim.duration <= 0.0 {
            continue;
        }
        let u = match prim.kind {
            PrimitiveKind::Line { .. } => 0.0,
            PrimitiveKind::Arc { angular_rate, .. } => angular_rate,
        };
        let h = prim.duration / steps as f64;
        let f = |th: f64| (v * th.cos(), v * th.sin());
        for _ in 0..steps {
            let k1 = f(th);
            let k2 = f(th + 0.5 * h * u);
            let k3 = f(th + 0.5 * h * u);
            let k4 = f(th + h * u);
            x += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            y += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
            th += h * u;
        }
    }
    Pose::new(x, y, th)
}

/// Arc length from inscribed polylines: chord sums with `n` and `2n`
/// chords per primitive, combined by Richardson extrapolation.
pub fn measured_length(path: &FleetPath, n: usize) -> f64 {
    let chords = |prim: &dubins_fleet_core::PathPrimitive, m: usize| {
        let mut prev = prim.position(0.0);
        let mut sum = 0.0;
        for i in 1..=m {
            let q = prim.position(prim.duration * i as f64 / m as f64);
            sum += (q - prev).norm();
            prev = q;
        }
        sum
    };
    path.primitives
        .iter()
        .filter(|p| p.duration > 0.0)
        .map(|p| {
            let (coarse, fine) = (chords(p, n), chords(p, 2 * n));
            (4.0 * fine - coarse) / 3.0
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanReport {
    /// Largest `|duration − (τ + offset)|`, s.
    pub sync_error: f64,
    /// Largest distance between the ground-frame end of a track and its target, m.
    pub endpoint_error: f64,
    /// Smallest sampled air-frame distance between any two aircraft, m.
    pub air_separation: f64,
    /// Smallest sampled ground-frame distance between any two aircraft, m.
    pub ground_separation: f64,
}

impl PlanReport {
    pub fn passes(&self, separation: f64, sync_tolerance: f64) -> bool {
        self.sync_error <= sync_tolerance
            && self.endpoint_error <= 1e-3
            && self.air_separation > separation
            && self.ground_separation > separation
    }
}

/// Re-checks a solved plan against its scenario with dense sampling.
pub fn check_plan(scenario: &Scenario, result: &PlanResult, dt: f64) -> Option<PlanReport> {
    let tau = result.tau?;
    check_paths(scenario, tau, &result.paths, dt)
}

pub fn check_paths(scenario: &Scenario, tau: f64, paths: &[FleetPath], dt: f64) -> Option<PlanReport> {
    if paths.len() != scenario.len() {
        return None;
    }
    let offsets = cumulative_offsets(scenario);
    let wind = scenario.wind;
    let mut report = PlanReport {
        sync_error: 0.0,
        endpoint_error: 0.0,
        air_separation: f64::INFINITY,
        ground_separation: f64::INFINITY,
    };
    for (k, p) in paths.iter().enumerate() {
        let t = tau + offsets[k];
        report.sync_error = report.sync_error.max((p.duration() - t).abs());
        let end = ground_position(p, wind, p.duration());
        report.endpoint_error = report.endpoint_error.max((end - scenario.ends[k].position()).norm());
    }
    for a in 0..paths.len() {
        for b in a + 1..paths.len() {
            let air = dense_min_distance_by(&paths[a], &paths[b], dt, |p, t| p.position_at(t)).0;
            let ground = dense_min_distance_by(&paths[a], &paths[b], dt, |p, t| ground_position(p, wind, t)).0;
            report.air_separation = report.air_separation.min(air);
            report.ground_separation = report.ground_separation.min(ground);
        }
    }
    Some(report)
}
