//! JSON scenario and result files.
//!
//! Distances are in metres, times in seconds, angles in radians. Both
//! documents carry `"format": 1`.

use std::path::Path;

use anyhow::{bail, Context, Result};
use dubins_fleet_core::dubins::{Extension, PathPrimitive, PathWord, PrimitiveKind, WordTag};
use dubins_fleet_core::planner::{cumulative_offsets, PlanResult, PlanStatus, StopReason};
use dubins_fleet_core::{Complex, FleetPath, PlannerConfig, Pose, Scenario, VehicleParams};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehiclesSection {
    pub speed: f64,
    pub min_turn_radius: f64,
    pub separation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AircraftEntry {
    pub start: [f64; 3],
    pub end: [f64; 3],
    #[serde(default)]
    pub arrival_offset: f64,
}

/// Planner settings. Missing keys take the defaults; a missing `w` is
/// derived from `τ_min` as `max(0.1, R·τ_min·1e-4)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlannerSection {
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub time_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timeout: Option<f64>,
}

/// Where a generated scenario came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSection {
    pub algorithm: String,
    pub family: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub format: u32,
    pub vehicles: VehiclesSection,
    #[serde(default)]
    pub wind: [f64; 2],
    pub aircraft: Vec<AircraftEntry>,
    #[serde(default)]
    pub planner: PlannerSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSection>,
}

fn pose(a: [f64; 3]) -> Pose {
    Pose::new(a[0], a[1], a[2])
}

fn triple(p: &Pose) -> [f64; 3] {
    [p.x, p.y, p.theta]
}

fn pair(c: Complex) -> [f64; 2] {
    [c.re, c.im]
}

/// Minimum refinement width used when a scenario does not set one.
pub fn default_min_width(time_ratio: f64, tau_min: f64) -> f64 {
    (time_ratio * tau_min * 1e-4).max(0.1)
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScenarioFile = serde_json::from_str(text).context("malformed scenario file")?;
        if file.format != FORMAT_VERSION {
            bail!("unsupported scenario format {} (expected {FORMAT_VERSION})", file.format);
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn from_scenario(scenario: &Scenario, planner: PlannerSection, generator: Option<GeneratorSection>) -> Self {
        let p = &scenario.params;
        Self {
            format: FORMAT_VERSION,
            vehicles: VehiclesSection { speed: p.speed, min_turn_radius: p.min_turn_radius, separation: p.separation },
            wind: pair(scenario.wind),
            aircraft: (0..scenario.len())
                .map(|k| AircraftEntry {
                    start: triple(&scenario.starts[k]),
                    end: triple(&scenario.ends[k]),
                    arrival_offset: scenario.arrival_offsets[k],
                })
                .collect(),
            planner,
            generator,
        }
    }

    /// Validated scenario and planner configuration.
    pub fn to_problem(&self) -> Result<(Scenario, PlannerConfig)> {
        let v = &self.vehicles;
        let params = VehicleParams::new(v.speed, v.min_turn_radius, v.separation)?;
        let scenario = Scenario {
            starts: self.aircraft.iter().map(|a| pose(a.start)).collect(),
            ends: self.aircraft.iter().map(|a| pose(a.end)).collect(),
            params,
            wind: Complex::new(self.wind[0], self.wind[1]),
            arrival_offsets: self.aircraft.iter().map(|a| a.arrival_offset).collect(),
        };
        scenario.validate()?;
        let defaults = PlannerConfig::default();
        let mut config = PlannerConfig {
            time_ratio: self.planner.time_ratio.unwrap_or(defaults.time_ratio),
            resample_count: self.planner.b.unwrap_or(defaults.resample_count),
            min_width: defaults.min_width,
            max_iterations: self.planner.max_iterations.unwrap_or(defaults.max_iterations),
            timeout: self.planner.timeout.unwrap_or(defaults.timeout),
        };
        config.min_width = match self.planner.w {
            Some(w) => w,
            None => {
                let (tau_min, _) = dubins_fleet_core::initial_bounds(&scenario, &config);
                default_min_width(config.time_ratio, tau_min)
            }
        };
        config.validate()?;
        Ok((scenario, config))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum PrimitiveEntry {
    /// `p(t) = anchor + velocity·(t − t_start)`.
    Line { t_start: f64, t_end: f64, anchor: [f64; 2], velocity: [f64; 2] },
    /// `p(t) = center + radius·e^{i(angular_rate·(t − t_start) + phase)}`.
    Arc { t_start: f64, t_end: f64, center: [f64; 2], radius: f64, angular_rate: f64, phase: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathEntry {
    pub word: String,
    pub radius: f64,
    pub extension_length: f64,
    pub total_length: f64,
    pub duration: f64,
    pub start: [f64; 3],
    /// Air-frame end pose (the ground target shifted against the wind).
    pub end: [f64; 3],
    pub primitives: Vec<PrimitiveEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TelemetrySection {
    pub iterations: usize,
    pub wall_time_s: f64,
    pub pair_checks: u64,
    pub spatial_tests: u64,
    pub temporal_solves: u64,
    pub tau_min: f64,
    pub stop_reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultFile {
    pub format: u32,
    pub status: String,
    pub tau: Option<f64>,
    pub wind: [f64; 2],
    /// Flight time of each aircraft: `tau` plus its cumulative arrival offset.
    pub arrival_times: Vec<f64>,
    pub aircraft: Vec<PathEntry>,
    pub telemetry: TelemetrySection,
}

fn stop_name(s: StopReason) -> &'static str {
    match s {
        StopReason::Timeout => "Timeout",
        StopReason::IterationLimit => "IterationLimit",
        StopReason::NoProgress => "NoProgress",
    }
}

fn path_entry(path: &FleetPath) -> PathEntry {
    let mut t = 0.0;
    let primitives = path
        .primitives
        .iter()
        .map(|p| {
            let (t_start, t_end) = (t, t + p.duration);
            t = t_end;
            match p.kind {
                PrimitiveKind::Line { anchor, velocity } => {
                    PrimitiveEntry::Line { t_start, t_end, anchor: pair(anchor), velocity: pair(velocity) }
                }
                PrimitiveKind::Arc { center, radius, angular_rate, phase } => {
                    PrimitiveEntry::Arc { t_start, t_end, center: pair(center), radius, angular_rate, phase }
                }
            }
        })
        .collect();
    PathEntry {
        word: path.word.to_string(),
        radius: path.radius,
        extension_length: path.extension_length,
        total_length: path.total_length,
        duration: path.duration(),
        start: triple(&path.start),
        end: triple(&path.end),
        primitives,
    }
}

/// Parses a word label such as `LSL`, `S-RSR`, `LRL-S` or `S-SLS-S`.
pub fn parse_word(label: &str) -> Result<PathWord> {
    let pre = label.starts_with("S-");
    let post = label.ends_with("-S");
    let core = label.trim_start_matches("S-").trim_end_matches("-S");
    let Some(tag) = WordTag::ALL.into_iter().find(|t| t.as_str() == core) else {
        bail!("unknown path word {label:?}");
    };
    let extension = match (pre, post) {
        (false, false) => Extension::None,
        (true, false) => Extension::StartExtended,
        (false, true) => Extension::EndExtended,
        (true, true) => Extension::BothExtended,
    };
    Ok(PathWord { tag, extension })
}

impl PathEntry {
    /// Rebuilds the path from its explicit primitives.
    pub fn to_path(&self, speed: f64) -> Result<FleetPath> {
        let primitives = self
            .primitives
            .iter()
            .map(|p| match *p {
                PrimitiveEntry::Line { t_start, t_end, anchor, velocity } => PathPrimitive {
                    kind: PrimitiveKind::Line {
                        anchor: Complex::new(anchor[0], anchor[1]),
                        velocity: Complex::new(velocity[0], velocity[1]),
                    },
                    duration: t_end - t_start,
                },
                PrimitiveEntry::Arc { t_start, t_end, center, radius, angular_rate, phase } => PathPrimitive {
                    kind: PrimitiveKind::Arc { center: Complex::new(center[0], center[1]), radius, angular_rate, phase },
                    duration: t_end - t_start,
                },
            })
            .collect();
        Ok(FleetPath {
            word: parse_word(&self.word)?,
            primitives,
            radius: self.radius,
            extension_length: self.extension_length,
            total_length: self.total_length,
            start: pose(self.start),
            end: pose(self.end),
            speed,
        })
    }
}

impl ResultFile {
    pub fn from_plan(scenario: &Scenario, result: &PlanResult) -> Self {
        let offsets = cumulative_offsets(scenario);
        let t = &result.telemetry;
        Self {
            format: FORMAT_VERSION,
            status: result.status.as_str().to_string(),
            tau: result.tau,
            wind: pair(scenario.wind),
            arrival_times: match result.tau {
                Some(tau) => offsets.iter().map(|o| tau + o).collect(),
                None => Vec::new(),
            },
            aircraft: result.paths.iter().map(path_entry).collect(),
            telemetry: TelemetrySection {
                iterations: result.iterations_used,
                wall_time_s: result.wall_time,
                pair_checks: t.pair_checks,
                spatial_tests: t.spatial_tests,
                temporal_solves: t.temporal_solves,
                tau_min: t.tau_min,
                stop_reason: stop_name(t.stop_reason).to_string(),
            },
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ResultFile = serde_json::from_str(text).context("malformed result file")?;
        if file.format != FORMAT_VERSION {
            bail!("unsupported result format {} (expected {FORMAT_VERSION})", file.format);
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }

    pub fn solved(&self) -> bool {
        self.status == PlanStatus::Solved.as_str()
    }

    pub fn paths(&self, speed: f64) -> Result<Vec<FleetPath>> {
        self.aircraft.iter().map(|a| a.to_path(speed)).collect()
    }
}
