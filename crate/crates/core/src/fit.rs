//! Length fitting: produce the paths of the extended family whose length
//! matches a prescribed flight time.
//!
//! Two one-dimensional problems are solved with Brent's minimizer, once per
//! panel of a subdivided bracket so that the discontinuities of
//! length-versus-parameter do not trap the search:
//!
//! * radius fitting, `min_{ρ ≥ ρ_min} (len(word[S, E, ρ]) − ℓ)²`;
//! * straight extension, `min_{l ≥ 0} (len(word[S + l·r·V_S, E − l·(1−r)·V_E, ρ_min]) + l − ℓ)²`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::dubins::{
    build_extended, shortest_dubins, word_length, Extension, FleetPath, PathWord, Pose, VehicleParams,
    WordTag, POSE_TOLERANCE,
};

/// Number of panels the search bracket is split into.
pub const PANELS: usize = 8;

/// Objective value standing in for an infeasible geometry.
pub const INFEASIBLE_PENALTY: f64 = f64::MAX;

/// Absolute x tolerance handed to the minimizer by the fitting routines.
const FIT_X_TOLERANCE: f64 = 1e-12;
const FIT_MAX_EVALS: usize = 200;

/// Points closer than this at every sample are considered the same path.
pub const DEDUP_TOLERANCE: f64 = 1e-6;
pub const DEDUP_SAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum FitError {
    #[error("Brent minimization did not converge within the evaluation budget (best x = {x}, f = {fx})")]
    NoConvergence { x: f64, fx: f64 },
    #[error("invalid bracket")]
    InvalidBracket,
}

/// Length a fitted path has to reach, with the accepted deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitTarget {
    /// ℓ = τ·V, m.
    pub target_length: f64,
    /// ε_fit, m.
    pub length_tolerance: f64,
}

impl FitTarget {
    /// Target with the default tolerance `max(1e-6 m, 1e-9·ℓ)`.
    pub fn new(target_length: f64) -> Self {
        Self { target_length, length_tolerance: fit_tolerance(target_length) }
    }

    pub fn for_time(tau: f64, speed: f64) -> Self {
        Self::new(tau * speed)
    }

    fn accepts(&self, length: f64) -> bool {
        (length - self.target_length).abs() <= self.length_tolerance
    }
}

/// Default length tolerance for a target length.
pub fn fit_tolerance(target_length: f64) -> f64 {
    (1e-9 * target_length).max(1e-6)
}

/// Brent's bracketed minimizer (golden section with parabolic interpolation).
///
/// Returns a local minimizer of `objective` on `[lo, hi]` located to within
/// `x_tolerance` (plus a few ulps relative to `x`), together with its value.
/// Non-finite objective values are replaced by [`INFEASIBLE_PENALTY`].
pub fn brent_minimize<F>(
    mut objective: F,
    lo: f64,
    hi: f64,
    x_tolerance: f64,
    max_evals: usize,
) -> Result<(f64, f64), FitError>
where
    F: FnMut(f64) -> f64,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(FitError::InvalidBracket);
    }
    const GOLDEN: f64 = 0.381_966_011_250_105_1;
    const REL: f64 = 4.0 * f64::EPSILON;
    let mut eval = |x: f64| {
        let v = objective(x);
        if v.is_nan() {
            INFEASIBLE_PENALTY
        } else {
            v.min(INFEASIBLE_PENALTY)
        }
    };

    let (mut a, mut b) = (lo, hi);
    let mut x = a + GOLDEN * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = eval(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut evals = 1;
    let (mut d, mut e) = (0.0f64, 0.0f64);

    loop {
        let xm = 0.5 * (a + b);
        let tol1 = REL * x.abs() + x_tolerance / 3.0;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            return Ok((x, fx));
        }
        if evals >= max_evals {
            return Err(FitError::NoConvergence { x, fx });
        }

        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let q0 = (x - v) * (fx - fw);
            let mut p = (x - v) * q0 - (x - w) * r;
            let mut q = 2.0 * (q0 - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            e = d;
            if p.is_finite()
                && q.is_finite()
                && p.abs() < (0.5 * q * e_prev).abs()
                && p > q * (a - x)
                && p < q * (b - x)
            {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if xm >= x { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else if d >= 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = eval(u);
        evals += 1;

        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
}

/// Scans `PANELS` sub-brackets of `[lo, hi]` in ascending order and returns
/// the first parameter whose squared length error is within tolerance.
/// Panel end points are probed first so exact boundary fits are found.
fn panel_search<F>(lo: f64, hi: f64, target: &FitTarget, mut length: F) -> Option<f64>
where
    F: FnMut(f64) -> Option<f64>,
{
    let tol2 = target.length_tolerance * target.length_tolerance;
    let mut objective = |x: f64| match length(x) {
        Some(l) => {
            let err = l - target.target_length;
            err * err
        }
        None => INFEASIBLE_PENALTY,
    };
    let width = (hi - lo) / PANELS as f64;
    let bound = |i: usize| if i == PANELS { hi } else { lo + width * i as f64 };
    if objective(lo) <= tol2 {
        return Some(lo);
    }
    for i in 0..PANELS {
        let (a, b) = (bound(i), bound(i + 1));
        if let Ok((x, fx)) = brent_minimize(&mut objective, a, b, FIT_X_TOLERANCE, FIT_MAX_EVALS) {
            if fx <= tol2 {
                return Some(x);
            }
        }
        if objective(b) <= tol2 {
            return Some(b);
        }
    }
    None
}

/// Fits the length of a basic word by increasing its turn radius.
pub fn fit_radius(
    word: PathWord,
    start: &Pose,
    end: &Pose,
    target: &FitTarget,
    params: &VehicleParams,
) -> Option<FleetPath> {
    let tag = word.tag;
    let rho_min = params.min_turn_radius;
    let ell = target.target_length;
    if let Some(base) = word_length(tag, start, end, rho_min) {
        if base > ell + target.length_tolerance {
            return None;
        }
    }
    let rho_max = (10.0 * rho_min).max(ell / PI);
    let rho = panel_search(rho_min, rho_max, target, |rho| word_length(tag, start, end, rho))?;
    let path = build_extended(PathWord::basic(tag), start, end, rho, params.speed, 0.0, 0.0)?;
    target.accepts(path.total_length).then_some(path)
}

fn extension_parts(length: f64, ratio: f64) -> (f64, f64) {
    (length * ratio, length * (1.0 - ratio))
}

/// Fits the length of a basic word at `ρ_min` by adding straight segments,
/// a share `ratio` of which goes before the word and the rest after it.
/// `ratio` must be one of `0`, `1/2` or `1`.
pub fn fit_extension(
    word: PathWord,
    ratio: f64,
    start: &Pose,
    end: &Pose,
    target: &FitTarget,
    params: &VehicleParams,
) -> Option<FleetPath> {
    let extension = Extension::from_ratio(ratio)?;
    let tag = word.tag;
    let rho_min = params.min_turn_radius;
    let ell = target.target_length;
    let (u0, u1) = (start.direction(), end.direction());
    let length = |l: f64| {
        let (pre, post) = extension_parts(l, ratio);
        let s = Pose { x: start.x + u0.re * pre, y: start.y + u0.im * pre, theta: start.theta };
        let e = Pose { x: end.x - u1.re * post, y: end.y - u1.im * post, theta: end.theta };
        word_length(tag, &s, &e, rho_min).map(|len| len + l)
    };
    let l = panel_search(0.0, ell, target, length)?;
    let (pre, post) = extension_parts(l, ratio);
    let path = build_extended(PathWord::extended(tag, extension), start, end, rho_min, params.speed, pre, post)?;
    target.accepts(path.total_length).then_some(path)
}

fn same_geometry(a: &[crate::math::Complex], b: &[crate::math::Complex]) -> bool {
    a.iter().zip(b).all(|(p, q)| (*p - *q).norm() <= DEDUP_TOLERANCE)
}

/// All members of the extended family flying from `start` to `end` in
/// exactly `tau` seconds (within the fit tolerance), in word-major,
/// ratio-minor order, with geometric duplicates removed.
pub fn fit_dubins(start: &Pose, end: &Pose, params: &VehicleParams, tau: f64) -> Vec<FleetPath> {
    let mut out = Vec::new();
    if !(tau > 0.0) {
        if tau == 0.0 && start.approx_eq(end, POSE_TOLERANCE) {
            if let Ok((_, p)) = shortest_dubins(start, end, params) {
                out.push(p);
            }
        }
        return out;
    }
    let target = FitTarget::for_time(tau, params.speed);
    // no member of the family is shorter than the Dubins optimum
    match shortest_dubins(start, end, params) {
        Ok((_, p)) if p.total_length <= target.target_length + target.length_tolerance => {}
        _ => return out,
    }

    let mut samples: Vec<Vec<crate::math::Complex>> = Vec::new();
    let mut push = |path: FleetPath, out: &mut Vec<FleetPath>| {
        let s = path.sample_positions(DEDUP_SAMPLES);
        if samples.iter().any(|prev| same_geometry(prev, &s)) {
            return;
        }
        samples.push(s);
        out.push(path);
    };
    for tag in WordTag::ALL {
        let word = PathWord::basic(tag);
        if let Some(p) = fit_radius(word, start, end, &target, params) {
            push(p, &mut out);
        }
        for ext in Extension::FITTED {
            if let Some(p) = fit_extension(word, ext.start_ratio(), start, end, &target, params) {
                push(p, &mut out);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dubins::build_word;
    use core::f64::consts::FRAC_PI_2;

    fn params() -> VehicleParams {
        VehicleParams::new(15.0, 40.0, 80.0).unwrap()
    }

    #[test]
    fn brent_quadratic() {
        let (x, fx) = brent_minimize(|x| (x - 2.0) * (x - 2.0), 0.0, 5.0, 1e-10, 200).unwrap();
        assert!((x - 2.0).abs() < 1e-8, "{x}");
        assert!(fx < 1e-16);
    }

    #[test]
    fn brent_monotone_goes_to_boundary() {
        let (x, _) = brent_minimize(|x| x, 1.0, 3.0, 1e-9, 200).unwrap();
        assert!((x - 1.0).abs() < 1e-8, "{x}");
        let (x, _) = brent_minimize(|x| -x, 1.0, 3.0, 1e-9, 200).unwrap();
        assert!((x - 3.0).abs() < 1e-8, "{x}");
    }

    #[test]
    fn brent_reports_budget_exhaustion() {
        let r = brent_minimize(|x| (x - 0.3).abs(), 0.0, 1.0, 1e-15, 5);
        assert!(matches!(r, Err(FitError::NoConvergence { .. })));
        assert_eq!(brent_minimize(|x| x, 1.0, 1.0, 1e-9, 10), Err(FitError::InvalidBracket));
    }

    #[test]
    fn brent_steps_away_from_penalty() {
        // infeasible on the right half of the bracket
        let f = |x: f64| if x > 2.5 { f64::NAN } else { (x - 1.0) * (x - 1.0) };
        let (x, _) = brent_minimize(f, 0.0, 5.0, 1e-10, 200).unwrap();
        assert!((x - 1.0).abs() < 1e-8);
    }

    // For (0,0,0) -> (0,200,π) and ρ ≤ 100, LSL is a quarter turn, a straight
    // of 200 − 2ρ and another quarter turn: len(ρ) = 200 + ρ(π − 2).
    #[test]
    fn brent_on_lsl_radius_closed_form() {
        let s = Pose::new(0.0, 0.0, 0.0);
        let e = Pose::new(0.0, 200.0, PI);
        let f = |rho: f64| {
            let l = word_length(WordTag::Lsl, &s, &e, rho).unwrap();
            (l - 260.0) * (l - 260.0)
        };
        let (rho, _) = brent_minimize(f, 40.0, 100.0, 1e-12, 200).unwrap();
        assert!((rho - 60.0 / (PI - 2.0)).abs() < 1e-8, "{rho}");
    }

    #[test]
    fn radius_fit_closed_form() {
        let s = Pose::new(0.0, 0.0, 0.0);
        let e = Pose::new(0.0, 200.0, PI);
        let target = FitTarget::new(260.0);
        let p = fit_radius(PathWord::basic(WordTag::Lsl), &s, &e, &target, &params()).unwrap();
        assert!((p.radius - 60.0 / (PI - 2.0)).abs() < 1e-7, "{}", p.radius);
        assert!((p.total_length - 260.0).abs() <= target.length_tolerance);
    }

    #[test]
    fn radius_fit_identity_and_too_short() {
        let s = Pose::new(0.0, 0.0, 0.0);
        let e = Pose::new(0.0, 80.0, PI);
        let base = build_word(PathWord::basic(WordTag::Lsl), &s, &e, 40.0, 15.0).unwrap();
        let p = fit_radius(PathWord::basic(WordTag::Lsl), &s, &e, &FitTarget::new(base.total_length), &params())
            .unwrap();
        assert_eq!(p.radius, 40.0);
        assert_eq!(p.primitives, base.primitives);
        assert!(fit_radius(PathWord::basic(WordTag::Lsl), &s, &e, &FitTarget::new(100.0), &params()).is_none());
    }

    // For ρ > 40 the two left circles swap places and LSL jumps to
    // 2πρ + 2ρ − 80 ≥ 80π, so no radius gives 130 m.
    #[test]
    fn radius_fit_across_discontinuity_is_absent() {
        let s = Pose::new(0.0, 0.0, 0.0);
        let e = Pose::new(0.0, 80.0, PI);
        assert!(fit_radius(PathWord::basic(WordTag::Lsl), &s, &e, &FitTarget::new(130.0), &params()).is_none());
    }

    #[test]
    fn start_extension_closed_form() {
        let s = Pose::new(0.0, 0.0, 0.0);
        let e = Pose::new(0.0, 80.0, PI);
        let target = FitTarget::new(150.0);
        let p = fit_extension(PathWord::basic(WordTag::Lsl), 1.0, &s, &e, &target, &params()).unwrap();
        assert_eq!(p.word.extension, Extension::StartExtended);
        let expected = (150.0 - 40.0 * PI) / 2.0;
        // prefix l, half turn, then l back along the straight leg
        assert!((p.extension_length - expected).abs() < 1e-7, "{}", p.extension_length);
        assert!((p.total_length - 150.0).abs() <= target.length_tolerance);
        assert!(p.eval(p.duration()).unwrap().approx_eq(&e, 1e-6));
    }

    #[test]
    fn extension_identity_and_too_short() {
        let s = Pose::new(0.0, 0.0, 0.3);
        let e = Pose::new(300.0, 120.0, -1.0);
        let base = build_word(PathWord::basic(WordTag::Rsl), &s, &e, 40.0, 15.0).unwrap();
        for ratio in [0.0, 0.5, 1.0] {
            let p = fit_extension(
                PathWord::basic(WordTag::Rsl),
                ratio,
                &s,
                &e,
                &FitTarget::new(base.total_length),
                &params(),
            )
            .unwrap();
            assert_eq!(p.extension_length, 0.0);
            assert!((p.total_length - base.total_length).abs() < 1e-9);
        }
        let short = FitTarget::new(base.total_length - 10.0);
        assert!(fit_extension(PathWord::basic(WordTag::Lsl), 1.0, &s, &e, &short, &params())
            .is_none_or(|p| (p.total_length - short.target_length).abs() <= short.length_tolerance));
        assert!(fit_extension(PathWord::basic(WordTag::Lsl), 0.25, &s, &e, &FitTarget::new(500.0), &params()).is_none());
    }

    #[test]
    fn fit_dubins_at_minimum_contains_shortest() {
        let s = Pose::new(0.0, 0.0, 0.0);
        let e = Pose::new(0.0, 80.0, PI);
        let tau = 40.0 * PI / 15.0;
        let set = fit_dubins(&s, &e, &params(), tau);
        assert!(!set.is_empty());
        assert!(set.iter().any(|p| p.word.tag == WordTag::Lsl && p.radius == 40.0));
        for p in &set {
            assert!((p.total_length - 40.0 * PI).abs() <= fit_tolerance(40.0 * PI));
        }
    }

    #[test]
    fn fit_dubins_below_minimum_is_empty() {
        let s = Pose::new(0.0, 0.0, 0.0);
        let e = Pose::new(400.0, 100.0, FRAC_PI_2);
        let (tau, _) = shortest_dubins(&s, &e, &params()).unwrap();
        assert!(fit_dubins(&s, &e, &params(), tau * 0.99).is_empty());
        assert!(fit_dubins(&s, &e, &params(), -1.0).is_empty());
    }

    #[test]
    fn fit_dubins_lengths_and_order() {
        let s = Pose::new(-120.0, 35.0, 2.0);
        let e = Pose::new(510.0, 260.0, -0.4);
        let (tau0, _) = shortest_dubins(&s, &e, &params()).unwrap();
        let tau = 1.5 * tau0;
        let set = fit_dubins(&s, &e, &params(), tau);
        assert!(set.len() >= 4, "{}", set.len());
        let target = FitTarget::for_time(tau, 15.0);
        let mut last = (WordTag::Lsl, Extension::None);
        for p in &set {
            assert!((p.total_length - target.target_length).abs() <= target.length_tolerance);
            assert!(p.radius >= 40.0);
            assert!(p.extension_length >= 0.0);
            assert!(p.eval(p.duration()).unwrap().approx_eq(&e, 1e-6));
            let key = (p.word.tag, p.word.extension);
            assert!(key >= last, "ordering {key:?} after {last:?}");
            last = key;
        }
    }
}
