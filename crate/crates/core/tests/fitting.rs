use std::f64::consts::PI;

use dubins_fleet_core::fit::fit_tolerance;
use dubins_fleet_core::{
    fit_dubins, fit_extension, fit_radius, shortest_dubins, Extension, FitTarget, PathWord, Pose, VehicleParams,
    WordTag,
};
use proptest::prelude::*;

fn params() -> VehicleParams {
    VehicleParams::new(15.0, 40.0, 80.0).unwrap()
}

fn pose() -> impl Strategy<Value = Pose> {
    (0.0f64..1000.0, 0.0f64..1000.0, -PI..PI).prop_map(|(x, y, t)| Pose::new(x, y, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn fitted_paths_match_the_flight_time(s in pose(), e in pose(), k in 1.0f64..3.0) {
        let (tau0, _) = shortest_dubins(&s, &e, &params()).unwrap();
        let tau = k * tau0;
        // may be empty: near-collinear pairs cannot reach some lengths
        let paths = fit_dubins(&s, &e, &params(), tau);
        let tol = fit_tolerance(tau * 15.0);
        for p in &paths {
            prop_assert!((p.total_length - tau * 15.0).abs() <= tol);
            let summed: f64 = p.primitives.iter().map(|q| q.duration).sum::<f64>() * 15.0;
            prop_assert!((summed - p.total_length).abs() <= 1e-9 * p.total_length.max(1.0));
            prop_assert!(p.radius >= 40.0);
            prop_assert!(p.extension_length >= 0.0);
            prop_assert!(p.eval(p.duration()).unwrap().approx_eq(&e, 1e-6));
        }
    }

    #[test]
    fn radius_fit_covers_longer_times(d in 400.0f64..900.0, u1 in 0.0f64..1.0, u2 in 0.0f64..1.0) {
        // LSL between opposite headings side by side: len(ρ) = d + (π − 2)ρ
        // increases continuously until the two circles meet at ρ = d/2
        let s = Pose::new(0.0, 0.0, 0.0);
        let e = Pose::new(0.0, d, PI);
        let base = shortest_dubins(&s, &e, &params()).unwrap().1.total_length;
        let top = PI * d / 2.0 - 1.0;
        let (l1, l2) = (base + u1.min(u2) * (top - base), base + u1.max(u2) * (top - base));
        let word = PathWord::basic(WordTag::Lsl);
        let first = fit_radius(word, &s, &e, &FitTarget::new(l1), &params());
        let second = fit_radius(word, &s, &e, &FitTarget::new(l2), &params());
        prop_assert!(first.is_some() && second.is_some());
        prop_assert!(second.unwrap().radius >= first.unwrap().radius - 1e-6);
    }
}

#[test]
fn shortest_time_is_always_fitted() {
    let s = Pose::new(724.6, 767.2, 0.0);
    let e = Pose::new(835.5, 765.4, 0.0);
    let (tau, best) = shortest_dubins(&s, &e, &params()).unwrap();
    let paths = fit_dubins(&s, &e, &params(), tau);
    assert!(paths.iter().any(|p| p.word == best.word && (p.total_length - best.total_length).abs() < 1e-6));
}

#[test]
fn ordering_is_word_major() {
    let s = Pose::new(0.0, 0.0, 0.0);
    let e = Pose::new(500.0, 300.0, 1.0);
    let tau = 1.4 * shortest_dubins(&s, &e, &params()).unwrap().0;
    let paths = fit_dubins(&s, &e, &params(), tau);
    let rank = |w: PathWord| {
        let t = WordTag::ALL.iter().position(|&x| x == w.tag).unwrap();
        let x = match w.extension {
            Extension::None => 0,
            Extension::StartExtended => 1,
            Extension::EndExtended => 2,
            Extension::BothExtended => 3,
        };
        t * 4 + x
    };
    let ranks: Vec<usize> = paths.iter().map(|p| rank(p.word)).collect();
    assert!(ranks.windows(2).all(|w| w[0] < w[1]), "{ranks:?}");
}

#[test]
fn extension_ratios() {
    let s = Pose::new(0.0, 0.0, 0.0);
    let e = Pose::new(0.0, 80.0, PI);
    let word = PathWord::basic(WordTag::Lsl);
    let target = FitTarget::new(150.0);
    // one-sided shifts also lengthen the straight leg; the symmetric one does not
    let one_sided = (150.0 - 40.0 * PI) / 2.0;
    for (ratio, ext, l) in [
        (1.0, Extension::StartExtended, one_sided),
        (0.0, Extension::EndExtended, one_sided),
        (0.5, Extension::BothExtended, 2.0 * one_sided),
    ] {
        let p = fit_extension(word, ratio, &s, &e, &target, &params()).unwrap();
        assert_eq!(p.word.extension, ext);
        assert!((p.total_length - 150.0).abs() <= target.length_tolerance);
        assert!((p.extension_length - l).abs() < 1e-6, "{ext:?}: {}", p.extension_length);
    }
    assert!(fit_extension(word, 1.0, &s, &e, &FitTarget::new(100.0), &params()).is_none());
}
