//! Circle-to-chevron transition flown without and with wind.

use anyhow::Result;
use dubins_fleet_core::scenario::{formation_transition, FormationKind};
use dubins_fleet_core::{plan_fleet_with, Complex, PlanResult, Scenario};

use crate::bench::{bench_params, BenchSettings};
use crate::exec::{RayonExecutor, WallClock};

/// Fleet size of the demonstration.
pub const DEMO_AIRCRAFT: usize = 8;

pub const DEMO_WINDS: [(f64, f64); 2] = [(0.0, 0.0), (10.0, 0.0)];

pub fn demo_scenario(wind: Complex) -> Scenario {
    let (starts, ends) = formation_transition(FormationKind::Circle, FormationKind::Chevron, false, DEMO_AIRCRAFT)
        .expect("demo formations exist");
    let mut s = Scenario::new(starts, ends, bench_params());
    s.wind = wind;
    s
}

pub struct DemoRun {
    pub scenario: Scenario,
    pub result: PlanResult,
}

/// Plans both wind cases with the benchmark settings.
pub fn run(settings: &BenchSettings, exec: &RayonExecutor) -> Result<Vec<DemoRun>> {
    DEMO_WINDS
        .iter()
        .map(|&(wx, wy)| {
            let scenario = demo_scenario(Complex::new(wx, wy));
            let config = settings.config_for(&scenario);
            let result = plan_fleet_with(&scenario, &config, exec, &WallClock::start())?;
            Ok(DemoRun { scenario, result })
        })
        .collect()
}
