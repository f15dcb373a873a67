//! Benchmark scenario families: formation transitions, random states to a
//! formation, and random states to random states.
//!
//! Random states are drawn from a ChaCha8 stream seeded with a `u64`, then
//! spread apart by repulsion until the minimum spacing holds.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dubins::{Pose, VehicleParams};
use crate::math::{ceil, sin, sqrt, Complex};
use crate::planner::Scenario;

/// Name of the random generator, recorded in scenario files.
pub const GENERATOR: &str = "chacha8";

/// Spacing between aircraft in a formation, m.
pub const FORMATION_SPACING: f64 = 120.0;

/// Distance between start and end formations, m.
pub const TRANSITION_DISTANCE: f64 = 1000.0;

/// Side of the square random states are drawn in, m.
pub const RANDOM_AREA: f64 = 1000.0;

pub const MAX_REPULSION_ITERATIONS: usize = 10_000;

/// Extra spacing aimed for by the repulsion so round-off cannot leave a
/// pair just short of the target.
const REPULSION_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("{kind:?} formation does not support {count} aircraft")]
    UnsupportedCount { kind: FormationKind, count: usize },
    #[error("repulsion did not reach the minimum separation within {0} iterations")]
    RepulsionDiverged(usize),
    #[error("invalid generator parameters")]
    InvalidSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormationKind {
    /// Line abreast, perpendicular to the heading.
    Line,
    /// Regular polygon with side `spacing`.
    Circle,
    /// V shape with the leader in front and wings swept back by 45°.
    Chevron,
    /// Square-ish grid, row-major.
    Grid,
}

impl FormationKind {
    pub const ALL: [FormationKind; 4] =
        [FormationKind::Line, FormationKind::Circle, FormationKind::Chevron, FormationKind::Grid];
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormationSpec {
    pub kind: FormationKind,
    pub count: usize,
    pub spacing: f64,
    /// Formation centre and common heading.
    pub anchor: Pose,
}

/// Poses of a formation, all sharing the anchor heading.
pub fn make_formation(spec: &FormationSpec) -> Result<Vec<Pose>, ScenarioError> {
    let n = spec.count;
    let s = spec.spacing;
    if n == 0 || !(s > 0.0) {
        return Err(ScenarioError::InvalidSpec);
    }
    // body frame: x forward, y to the left
    let body: Vec<Complex> = match spec.kind {
        FormationKind::Line => (0..n).map(|i| Complex::new(0.0, (i as f64 - 0.5 * (n - 1) as f64) * s)).collect(),
        FormationKind::Circle => {
            if n == 1 {
                alloc::vec![Complex::ZERO]
            } else {
                let r = s / (2.0 * sin(PI / n as f64));
                (0..n).map(|i| Complex::from_polar(r, TAU * i as f64 / n as f64)).collect()
            }
        }
        FormationKind::Chevron => {
            if n < 2 {
                return Err(ScenarioError::UnsupportedCount { kind: spec.kind, count: n });
            }
            let left = Complex::from_polar(s, PI - FRAC_PI_4);
            let right = left.conj();
            let mut pts: Vec<Complex> = (0..n)
                .map(|i| {
                    let rank = i.div_ceil(2) as f64;
                    match i {
                        0 => Complex::ZERO,
                        _ if i % 2 == 1 => left * rank,
                        _ => right * rank,
                    }
                })
                .collect();
            let centroid = pts.iter().fold(Complex::ZERO, |acc, p| acc + *p) * (1.0 / n as f64);
            for p in &mut pts {
                *p = *p - Complex::new(centroid.re, 0.0);
            }
            pts
        }
        FormationKind::Grid => {
            let cols = ceil(sqrt(n as f64)) as usize;
            let rows = n.div_ceil(cols);
            (0..n)
                .map(|i| {
                    let (r, c) = (i / cols, i % cols);
                    Complex::new(
                        -(r as f64 - 0.5 * (rows - 1) as f64) * s,
                        (c as f64 - 0.5 * (cols - 1) as f64) * s,
                    )
                })
                .collect()
        }
    };
    let frame = Complex::cis(spec.anchor.theta);
    let origin = spec.anchor.position();
    Ok(body.into_iter().map(|p| Pose::from_position(origin + frame * p, spec.anchor.theta)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RandomMode {
    /// Drawn afresh in the area square.
    Independent,
    /// Every point moved by the same random vector of length `distance`.
    Shifted { distance: f64 },
    /// Each point placed at `distance` from its partner in a random direction.
    Disk { distance: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpec {
    pub count: usize,
    /// Side of the sampling square anchored at the origin, m.
    pub area: f64,
    pub min_separation: f64,
    /// How targets relate to their starts; ignored for start states.
    pub mode: RandomMode,
    pub seed: u64,
}

fn random_heading(rng: &mut ChaCha8Rng) -> f64 {
    // (−π, π]
    PI - TAU * rng.random::<f64>()
}

/// Pushes apart every pair closer than `min_separation`.
///
/// Each iteration moves a violating point by half the deficit away from
/// each too-close neighbour; all moves of one iteration are applied
/// together.
pub fn repel(points: &mut [Complex], min_separation: f64) -> Result<usize, ScenarioError> {
    let target = min_separation + REPULSION_SLACK;
    let n = points.len();
    let mut moves = alloc::vec![Complex::ZERO; n];
    for iteration in 0..MAX_REPULSION_ITERATIONS {
        let mut violated = false;
        moves.iter_mut().for_each(|m| *m = Complex::ZERO);
        for i in 0..n {
            for j in i + 1..n {
                let d = points[i] - points[j];
                let dist = d.norm();
                if dist < min_separation {
                    violated = true;
                    // coincident points separate along x
                    let unit = if dist > 0.0 { d * (1.0 / dist) } else { Complex::new(1.0, 0.0) };
                    let push = unit * (0.5 * (target - dist));
                    moves[i] += push;
                    moves[j] += -push;
                }
            }
        }
        if !violated {
            return Ok(iteration);
        }
        for (p, m) in points.iter_mut().zip(&moves) {
            *p += *m;
        }
    }
    Err(ScenarioError::RepulsionDiverged(MAX_REPULSION_ITERATIONS))
}

fn check_spec(spec: &RandomSpec) -> Result<(), ScenarioError> {
    if spec.count == 0 || !(spec.area > 0.0) || !(spec.min_separation > 0.0) {
        return Err(ScenarioError::InvalidSpec);
    }
    Ok(())
}

/// Random start states: uniform in the square, repelled, random headings.
pub fn make_random_states(spec: &RandomSpec) -> Result<Vec<Pose>, ScenarioError> {
    check_spec(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut pts: Vec<Complex> = (0..spec.count)
        .map(|_| Complex::new(spec.area * rng.random::<f64>(), spec.area * rng.random::<f64>()))
        .collect();
    repel(&mut pts, spec.min_separation)?;
    Ok(pts.into_iter().map(|p| Pose::from_position(p, random_heading(&mut rng))).collect())
}

/// Random targets related to `starts` according to `spec.mode`.
pub fn make_random_targets(spec: &RandomSpec, starts: &[Pose]) -> Result<Vec<Pose>, ScenarioError> {
    check_spec(spec)?;
    if starts.len() != spec.count {
        return Err(ScenarioError::InvalidSpec);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut pts: Vec<Complex> = match spec.mode {
        RandomMode::Independent => (0..spec.count)
            .map(|_| Complex::new(spec.area * rng.random::<f64>(), spec.area * rng.random::<f64>()))
            .collect(),
        RandomMode::Shifted { distance } => {
            let shift = Complex::from_polar(distance, TAU * rng.random::<f64>());
            starts.iter().map(|s| s.position() + shift).collect()
        }
        RandomMode::Disk { distance } => {
            starts.iter().map(|s| s.position() + Complex::from_polar(distance, TAU * rng.random::<f64>())).collect()
        }
    };
    repel(&mut pts, spec.min_separation)?;
    Ok(pts.into_iter().map(|p| Pose::from_position(p, random_heading(&mut rng))).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioFamily {
    Formation,
    RngToFormation,
    FullRng,
}

impl ScenarioFamily {
    pub const ALL: [ScenarioFamily; 3] = [ScenarioFamily::Formation, ScenarioFamily::RngToFormation, ScenarioFamily::FullRng];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioFamily::Formation => "Formation",
            ScenarioFamily::RngToFormation => "RngToFormation",
            ScenarioFamily::FullRng => "FullRng",
        }
    }
}

impl core::str::FromStr for ScenarioFamily {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        ScenarioFamily::ALL.into_iter().find(|f| f.as_str().eq_ignore_ascii_case(s)).ok_or(())
    }
}

/// Formation transitions cycled through by seed: `(from, to, turn)`. With
/// `turn` the end formation is rotated by 90° to the left.
pub const TRANSITIONS: [(FormationKind, FormationKind, bool); 6] = [
    (FormationKind::Circle, FormationKind::Chevron, false),
    (FormationKind::Line, FormationKind::Chevron, false),
    (FormationKind::Chevron, FormationKind::Line, false),
    (FormationKind::Grid, FormationKind::Line, false),
    (FormationKind::Circle, FormationKind::Grid, false),
    (FormationKind::Line, FormationKind::Line, true),
];

/// Start and end formations `TRANSITION_DISTANCE` apart.
pub fn formation_transition(
    from: FormationKind,
    to: FormationKind,
    turn: bool,
    n: usize,
) -> Result<(Vec<Pose>, Vec<Pose>), ScenarioError> {
    let start = FormationSpec { kind: from, count: n, spacing: FORMATION_SPACING, anchor: Pose::new(0.0, 0.0, 0.0) };
    let heading = if turn { FRAC_PI_2 } else { 0.0 };
    let end = FormationSpec {
        kind: to,
        count: n,
        spacing: FORMATION_SPACING,
        anchor: Pose::new(TRANSITION_DISTANCE, 0.0, heading),
    };
    Ok((make_formation(&start)?, make_formation(&end)?))
}

/// One benchmark scenario. Aircraft keep their index between start and end
/// sets; there is no slot reassignment. Wind and arrival offsets are zero.
pub fn make_scenario(family: ScenarioFamily, n: usize, params: VehicleParams, seed: u64) -> Result<Scenario, ScenarioError> {
    let min_separation = params.separation + 4.0 * params.min_turn_radius;
    let random = |seed: u64, mode| RandomSpec { count: n, area: RANDOM_AREA, min_separation, mode, seed };
    let (starts, ends) = match family {
        ScenarioFamily::Formation => {
            let (from, to, turn) = TRANSITIONS[(seed % TRANSITIONS.len() as u64) as usize];
            formation_transition(from, to, turn, n)?
        }
        ScenarioFamily::RngToFormation => {
            let starts = make_random_states(&random(seed, RandomMode::Independent))?;
            let kind = FormationKind::ALL[(seed % FormationKind::ALL.len() as u64) as usize];
            let centre = 0.5 * RANDOM_AREA;
            let anchor = Pose::new(centre + TRANSITION_DISTANCE, centre, 0.0);
            let ends = make_formation(&FormationSpec { kind, count: n, spacing: FORMATION_SPACING, anchor })?;
            (starts, ends)
        }
        ScenarioFamily::FullRng => {
            let starts = make_random_states(&random(seed, RandomMode::Independent))?;
            let mode = match seed % 3 {
                0 => RandomMode::Independent,
                1 => RandomMode::Shifted { distance: TRANSITION_DISTANCE },
                _ => RandomMode::Disk { distance: TRANSITION_DISTANCE },
            };
            // a distinct stream for the targets
            let ends = make_random_targets(&random(seed ^ 0x9e37_79b9_7f4a_7c15, mode), &starts)?;
            (starts, ends)
        }
    };
    Ok(Scenario::new(starts, ends, params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn min_pairwise(p: &[Pose]) -> f64 {
        let mut m = f64::INFINITY;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                m = m.min(p[i].distance(&p[j]));
            }
        }
        m
    }

    fn spec(kind: FormationKind, count: usize) -> FormationSpec {
        FormationSpec { kind, count, spacing: 120.0, anchor: Pose::new(0.0, 0.0, 0.0) }
    }

    #[test]
    fn line_abreast() {
        let p = make_formation(&spec(FormationKind::Line, 3)).unwrap();
        let ys: Vec<f64> = p.iter().map(|q| q.y).collect();
        assert_eq!(ys, alloc::vec![-120.0, 0.0, 120.0]);
        assert!(p.iter().all(|q| q.x == 0.0 && q.theta == 0.0));
    }

    #[test]
    fn circle_of_four_is_a_square() {
        let p = make_formation(&spec(FormationKind::Circle, 4)).unwrap();
        let r = 120.0 / (2.0 * sin(PI / 4.0));
        for q in &p {
            assert!((q.position().norm() - r).abs() < 1e-9);
        }
        assert!((p[0].distance(&p[1]) - 120.0).abs() < 1e-9);
        assert!((p[0].distance(&p[2]) - 2.0 * r).abs() < 1e-9);
    }

    #[test]
    fn chevron_needs_two() {
        assert_eq!(
            make_formation(&spec(FormationKind::Chevron, 1)),
            Err(ScenarioError::UnsupportedCount { kind: FormationKind::Chevron, count: 1 })
        );
    }

    proptest! {
        #[test]
        fn formations_respect_spacing(k in 0usize..4, n in 2usize..25, x in -1e3f64..1e3, th in -3.0f64..3.0) {
            let s = FormationSpec { kind: FormationKind::ALL[k], count: n, spacing: 120.0, anchor: Pose::new(x, 0.0, th) };
            let p = make_formation(&s).unwrap();
            prop_assert_eq!(p.len(), n);
            prop_assert!(min_pairwise(&p) >= 120.0 - 1e-9);
            prop_assert!(p.iter().all(|q| (q.theta - s.anchor.theta).abs() < 1e-12));
        }

        #[test]
        fn random_states_are_spaced(n in 1usize..14, seed in any::<u64>()) {
            let s = RandomSpec { count: n, area: 1000.0, min_separation: 240.0, mode: RandomMode::Independent, seed };
            let p = make_random_states(&s).unwrap();
            prop_assert_eq!(p.len(), n);
            prop_assert!(min_pairwise(&p) >= 240.0);
            prop_assert!(p.iter().all(|q| q.theta > -PI && q.theta <= PI));
        }
    }

    #[test]
    fn single_random_point_stays_inside() {
        let s = RandomSpec { count: 1, area: 1000.0, min_separation: 240.0, mode: RandomMode::Independent, seed: 7 };
        let p = make_random_states(&s).unwrap();
        assert!((0.0..1000.0).contains(&p[0].x) && (0.0..1000.0).contains(&p[0].y));
    }

    #[test]
    fn ten_in_a_square_kilometre() {
        let s = RandomSpec { count: 10, area: 1000.0, min_separation: 240.0, mode: RandomMode::Independent, seed: 42 };
        let a = make_random_states(&s).unwrap();
        assert!(min_pairwise(&a) >= 240.0);
        assert_eq!(a, make_random_states(&s).unwrap());
    }

    #[test]
    fn disk_targets_keep_spacing() {
        let base = RandomSpec { count: 6, area: 1000.0, min_separation: 240.0, mode: RandomMode::Independent, seed: 3 };
        let starts = make_random_states(&base).unwrap();
        for mode in [RandomMode::Independent, RandomMode::Shifted { distance: 1000.0 }, RandomMode::Disk { distance: 1000.0 }] {
            let ends = make_random_targets(&RandomSpec { mode, seed: 4, ..base }, &starts).unwrap();
            assert_eq!(ends.len(), 6);
            assert!(min_pairwise(&ends) >= 240.0);
        }
    }

    #[test]
    fn scenario_families() {
        let params = VehicleParams::new(15.0, 40.0, 80.0).unwrap();
        let f = make_scenario(ScenarioFamily::Formation, 4, params, 0).unwrap();
        let circle = make_formation(&spec(FormationKind::Circle, 4)).unwrap();
        assert_eq!(f.starts, circle);
        assert!(f.ends.iter().all(|e| e.x > 900.0));
        for family in ScenarioFamily::ALL {
            for seed in 0..12 {
                let s = make_scenario(family, 5, params, seed).unwrap();
                assert_eq!((s.starts.len(), s.ends.len()), (5, 5));
                assert_eq!(s, make_scenario(family, 5, params, seed).unwrap());
                s.validate().unwrap();
            }
        }
        let a = make_scenario(ScenarioFamily::FullRng, 3, params, 11).unwrap();
        assert!(min_pairwise(&a.starts) >= 240.0 && min_pairwise(&a.ends) >= 240.0);
    }
}
