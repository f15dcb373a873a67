use std::f64::consts::PI;

use dubins_fleet_core::dubins::{word_length, PrimitiveKind};
use dubins_fleet_core::math::normalize_angle;
use dubins_fleet_core::{build_word, shortest_dubins, FleetPath, PathWord, Pose, VehicleParams, WordTag};
use proptest::prelude::*;

fn params() -> VehicleParams {
    VehicleParams::new(15.0, 40.0, 80.0).unwrap()
}

fn pose() -> impl Strategy<Value = Pose> {
    (0.0f64..1000.0, 0.0f64..1000.0, -PI..PI).prop_map(|(x, y, t)| Pose::new(x, y, t))
}

/// Euler-free integration of the unicycle: exact in heading, Simpson in position.
fn integrate(path: &FleetPath, steps: usize) -> Pose {
    let v = path.speed;
    let (mut x, mut y, mut th) = (path.start.x, path.start.y, path.start.theta);
    for p in &path.primitives {
        let u = match p.kind {
            PrimitiveKind::Line { .. } => 0.0,
            PrimitiveKind::Arc { angular_rate, .. } => angular_rate,
        };
        let h = p.duration / steps as f64;
        for _ in 0..steps {
            let m = th + 0.5 * h * u;
            let e = th + h * u;
            x += h * v / 6.0 * (th.cos() + 4.0 * m.cos() + e.cos());
            y += h * v / 6.0 * (th.sin() + 4.0 * m.sin() + e.sin());
            th = e;
        }
    }
    Pose::new(x, y, th)
}

/// Word flown backwards: letters in reverse order, each turn mirrored.
fn reversed(tag: WordTag) -> WordTag {
    let name: String = tag.as_str().chars().rev().map(|c| match c {
        'L' => 'R',
        'R' => 'L',
        c => c,
    }).collect();
    WordTag::ALL.into_iter().find(|t| t.as_str() == name).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn shortest_is_minimal_over_words(s in pose(), e in pose()) {
        let (tau, best) = shortest_dubins(&s, &e, &params()).unwrap();
        prop_assert!((tau * 15.0 - best.total_length).abs() < 1e-9);
        for tag in WordTag::ALL {
            if let Some(p) = build_word(PathWord::basic(tag), &s, &e, 40.0, 15.0) {
                prop_assert!(best.total_length <= p.total_length);
            }
        }
    }

    #[test]
    fn constant_speed_and_bounded_turn(s in pose(), e in pose(), frac in 0.0f64..1.0) {
        let (_, p) = shortest_dubins(&s, &e, &params()).unwrap();
        let d = p.duration();
        let h = 1e-4;
        let t = (frac * d).clamp(h, (d - h).max(h));
        if d > 4.0 * h {
            let v = (p.position_at(t + h) - p.position_at(t - h)).norm() / (2.0 * h);
            prop_assert!((v - 15.0).abs() <= 1e-4 * 15.0, "speed {}", v);
        }
        prop_assert!(p.min_arc_radius().is_none_or(|r| r >= 40.0));
        for prim in &p.primitives {
            prop_assert!(prim.turn_rate().abs() <= 15.0 / 40.0 + 1e-12);
        }
    }

    #[test]
    fn reversal_symmetry(s in pose(), e in pose()) {
        // flying backwards along the reversed problem mirrors every turn
        let flip = |p: &Pose| Pose::new(p.x, p.y, p.theta + PI);
        for tag in WordTag::ALL {
            let forward = word_length(tag, &s, &e, 40.0);
            let reverse = word_length(reversed(tag), &flip(&e), &flip(&s), 40.0);
            if let (Some(a), Some(b)) = (forward, reverse) {
                prop_assert!((a - b).abs() < 1e-6, "{:?}: {} vs {}", tag, a, b);
            }
        }
        let a = shortest_dubins(&s, &e, &params()).unwrap().0;
        let b = shortest_dubins(&flip(&e), &flip(&s), &params()).unwrap().0;
        prop_assert!((a - b).abs() < 1e-6);
    }

    #[test]
    fn every_word_reaches_its_end(s in pose(), e in pose(), w in 0usize..8, r in 40.0f64..200.0) {
        if let Some(p) = build_word(PathWord::basic(WordTag::ALL[w]), &s, &e, r, 15.0) {
            let end = p.eval(p.duration()).unwrap();
            prop_assert!(end.approx_eq(&e, 1e-6), "{:?} vs {:?}", end, e);
            prop_assert!(p.eval(0.0).unwrap() == s);
            let sim = integrate(&p, 400);
            prop_assert!((sim.position() - e.position()).norm() < 1e-5);
            prop_assert!(normalize_angle(sim.theta - e.theta).abs() < 1e-6);
        }
    }
}

#[test]
fn kilometre_round_trip() {
    let s = Pose::new(0.0, 0.0, 0.3);
    let e = Pose::new(900.0, -400.0, -2.0);
    let (_, p) = shortest_dubins(&s, &e, &params()).unwrap();
    assert!(p.total_length > 1000.0);
    let sim = integrate(&p, 2000);
    assert!((sim.position() - e.position()).norm() < 1e-5);
}

#[test]
fn eval_examples() {
    let (_, p) = shortest_dubins(&Pose::new(0.0, 0.0, 0.0), &Pose::new(100.0, 0.0, 0.0), &params()).unwrap();
    let mid = p.eval(p.duration() / 2.0).unwrap();
    assert!(mid.approx_eq(&Pose::new(50.0, 0.0, 0.0), 1e-9));
    assert!(p.eval(p.duration() + 1.0).is_err());
    assert!(p.eval(-1.0).is_err());
}
