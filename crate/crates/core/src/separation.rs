//! Separation between timed paths.
//!
//! A pair of legs is first compared by shape (the exact distance between
//! the two loci, which bounds the distance at any common instant from
//! below). Only when the shapes come within `δ` is the time-dependent
//! distance `|f₁(t) − f₂(t)|` minimized: in closed form for two lines, with
//! an interval branch-and-bound otherwise.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::dubins::{FleetPath, PathPrimitive, PrimitiveKind};
use crate::exec::{Executor, Sequential};
use crate::fit::{brent_minimize, fit_tolerance};
use crate::interval::Interval;
use crate::math::{mod_two_pi, sqrt, Complex};

/// Absolute accuracy of the temporal minimum, m.
pub const SEPARATION_TOLERANCE: f64 = 1e-4;

/// Paths whose durations differ by more than this are not comparable.
pub const DURATION_TOLERANCE: f64 = 1e-9;

/// Safety cap on branch-and-bound boxes for one leg pair.
const MAX_BOXES: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum SeparationError {
    #[error("paths have different durations ({0} s vs {1} s)")]
    MismatchedDuration(f64, f64),
}

/// A primitive placed on the absolute mission time axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimedLeg {
    pub primitive: PathPrimitive,
    pub t_start: f64,
    pub t_end: f64,
}

impl TimedLeg {
    #[inline]
    pub fn position(&self, t: f64) -> Complex {
        self.primitive.position(t - self.t_start)
    }

    #[inline]
    fn velocity(&self, t: f64) -> Complex {
        self.primitive.velocity(t - self.t_start)
    }

    /// Sub-primitive covering absolute times `[t0, t1]`.
    fn window(&self, t0: f64, t1: f64) -> PathPrimitive {
        self.primitive.restricted(t0 - self.t_start, t1 - self.t_start)
    }

    /// Interval enclosure of the position over absolute times `time`.
    fn enclose(&self, time: Interval) -> (Interval, Interval) {
        let local = time + (-self.t_start);
        match self.primitive.kind {
            PrimitiveKind::Line { anchor, velocity } => {
                (local * velocity.re + anchor.re, local * velocity.im + anchor.im)
            }
            PrimitiveKind::Arc { center, radius, angular_rate, phase } => {
                let angle = local * angular_rate + phase;
                (angle.cos() * radius + center.re, angle.sin() * radius + center.im)
            }
        }
    }

    /// Interval enclosure of the velocity over absolute times `time`.
    fn enclose_velocity(&self, time: Interval) -> (Interval, Interval) {
        match self.primitive.kind {
            PrimitiveKind::Line { velocity, .. } => (Interval::point(velocity.re), Interval::point(velocity.im)),
            PrimitiveKind::Arc { radius, angular_rate, phase, .. } => {
                let angle = (time + (-self.t_start)) * angular_rate + phase;
                let k = radius * angular_rate;
                (angle.sin() * -k, angle.cos() * k)
            }
        }
    }

    /// Interval enclosure of the acceleration over absolute times `time`.
    fn enclose_acceleration(&self, time: Interval) -> (Interval, Interval) {
        match self.primitive.kind {
            PrimitiveKind::Line { .. } => (Interval::point(0.0), Interval::point(0.0)),
            PrimitiveKind::Arc { radius, angular_rate, phase, .. } => {
                let angle = (time + (-self.t_start)) * angular_rate + phase;
                let k = -radius * angular_rate * angular_rate;
                (angle.cos() * k, angle.sin() * k)
            }
        }
    }

}

/// Splits a path into legs on the mission time axis. Zero-duration
/// primitives are dropped.
pub fn timed_legs(path: &FleetPath) -> Vec<TimedLeg> {
    let mut t = 0.0;
    let mut legs = Vec::with_capacity(path.primitives.len());
    for p in &path.primitives {
        if p.duration > 0.0 {
            legs.push(TimedLeg { primitive: *p, t_start: t, t_end: t + p.duration });
            t += p.duration;
        }
    }
    legs
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Aabb {
    min: Complex,
    max: Complex,
}

impl Aabb {
    fn distance(&self, other: &Aabb) -> f64 {
        let dx = (other.min.re - self.max.re).max(self.min.re - other.max.re).max(0.0);
        let dy = (other.min.im - self.max.im).max(self.min.im - other.max.im).max(0.0);
        crate::math::hypot(dx, dy)
    }

    fn union(&self, other: &Aabb) -> Aabb {
        Aabb {
            min: Complex::new(self.min.re.min(other.min.re), self.min.im.min(other.min.im)),
            max: Complex::new(self.max.re.max(other.max.re), self.max.im.max(other.max.im)),
        }
    }
}

/// Shape of a primitive, independent of timing.
#[derive(Debug, Clone, Copy)]
enum Shape {
    Segment(Complex, Complex),
    /// Counter-clockwise from `start` over `sweep ∈ [0, 2π]`.
    Arc { center: Complex, radius: f64, start: f64, sweep: f64 },
}

impl Shape {
    fn of(p: &PathPrimitive) -> Shape {
        match p.kind {
            PrimitiveKind::Line { anchor, velocity } => Shape::Segment(anchor, anchor + velocity * p.duration),
            PrimitiveKind::Arc { center, radius, angular_rate, phase } => {
                let sweep = (angular_rate.abs() * p.duration).min(TAU);
                let start = if angular_rate >= 0.0 { phase } else { phase + angular_rate * p.duration };
                Shape::Arc { center, radius, start, sweep }
            }
        }
    }

    fn aabb(&self) -> Aabb {
        match *self {
            Shape::Segment(a, b) => Aabb {
                min: Complex::new(a.re.min(b.re), a.im.min(b.im)),
                max: Complex::new(a.re.max(b.re), a.im.max(b.im)),
            },
            Shape::Arc { center, radius, start, sweep } => {
                let p0 = center + Complex::from_polar(radius, start);
                let p1 = center + Complex::from_polar(radius, start + sweep);
                let mut bb = Shape::Segment(p0, p1).aabb();
                for k in 0..4 {
                    let a = FRAC_PI_2 * k as f64;
                    if in_span(a, start, sweep) {
                        let p = center + Complex::from_polar(radius, a);
                        bb = bb.union(&Aabb { min: p, max: p });
                    }
                }
                bb
            }
        }
    }
}

#[inline]
fn in_span(angle: f64, start: f64, sweep: f64) -> bool {
    sweep >= TAU - 1e-12 || mod_two_pi(angle - start) <= sweep + 1e-12
}

fn point_segment(p: Complex, a: Complex, b: Complex) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let s = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * s)).norm()
}

fn arc_endpoints(center: Complex, radius: f64, start: f64, sweep: f64) -> [Complex; 2] {
    [center + Complex::from_polar(radius, start), center + Complex::from_polar(radius, start + sweep)]
}

fn point_arc(p: Complex, center: Complex, radius: f64, start: f64, sweep: f64) -> f64 {
    let d = p - center;
    let dist = d.norm();
    if dist > 0.0 && in_span(d.arg(), start, sweep) {
        return (dist - radius).abs();
    }
    if dist == 0.0 {
        return radius;
    }
    let [e0, e1] = arc_endpoints(center, radius, start, sweep);
    (p - e0).norm().min((p - e1).norm())
}

fn segment_segment(a0: Complex, a1: Complex, b0: Complex, b1: Complex) -> f64 {
    let da = a1 - a0;
    let db = b1 - b0;
    let d1 = da.cross(b0 - a0);
    let d2 = da.cross(b1 - a0);
    let d3 = db.cross(a0 - b0);
    let d4 = db.cross(a1 - b0);
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return 0.0;
    }
    point_segment(a0, b0, b1)
        .min(point_segment(a1, b0, b1))
        .min(point_segment(b0, a0, a1))
        .min(point_segment(b1, a0, a1))
}

fn segment_arc(a: Complex, b: Complex, center: Complex, radius: f64, start: f64, sweep: f64) -> f64 {
    let [e0, e1] = arc_endpoints(center, radius, start, sweep);
    let mut best = point_arc(a, center, radius, start, sweep)
        .min(point_arc(b, center, radius, start, sweep))
        .min(point_segment(e0, a, b))
        .min(point_segment(e1, a, b));
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return best;
    }
    // interior critical point: foot of the perpendicular from the center
    let s = (center - a).dot(ab) / len2;
    if (0.0..=1.0).contains(&s) {
        let foot = a + ab * s;
        let d = foot - center;
        let dist = d.norm();
        if dist > 0.0 && in_span(d.arg(), start, sweep) {
            best = best.min((dist - radius).abs());
        }
    }
    // crossings of the segment with the arc
    let f = a - center;
    let qa = len2;
    let qb = 2.0 * f.dot(ab);
    let qc = f.norm_sqr() - radius * radius;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc >= 0.0 {
        let root = sqrt(disc);
        for s in [(-qb - root) / (2.0 * qa), (-qb + root) / (2.0 * qa)] {
            if (0.0..=1.0).contains(&s) {
                let p = a + ab * s - center;
                if in_span(p.arg(), start, sweep) {
                    return 0.0;
                }
            }
        }
    }
    best
}

fn spans_overlap(s1: f64, w1: f64, s2: f64, w2: f64) -> bool {
    in_span(s1, s2, w2) || in_span(s2, s1, w1)
}

fn arc_arc(c1: Complex, r1: f64, s1: f64, w1: f64, c2: Complex, r2: f64, s2: f64, w2: f64) -> f64 {
    let [a0, a1] = arc_endpoints(c1, r1, s1, w1);
    let [b0, b1] = arc_endpoints(c2, r2, s2, w2);
    let mut best = point_arc(a0, c2, r2, s2, w2)
        .min(point_arc(a1, c2, r2, s2, w2))
        .min(point_arc(b0, c1, r1, s1, w1))
        .min(point_arc(b1, c1, r1, s1, w1));
    let v = c2 - c1;
    let d = v.norm();
    if d < 1e-12 {
        if spans_overlap(s1, w1, s2, w2) {
            best = best.min((r1 - r2).abs());
        }
        return best;
    }
    let u = v.scale(1.0 / d);
    let ang = u.arg();
    // points on the line of centers
    for (t1, sign1) in [(ang, 1.0), (ang + PI, -1.0)] {
        if !in_span(t1, s1, w1) {
            continue;
        }
        let p = c1 + u * (sign1 * r1);
        for (t2, sign2) in [(ang, 1.0), (ang + PI, -1.0)] {
            if in_span(t2, s2, w2) {
                let q = c2 + u * (sign2 * r2);
                best = best.min((p - q).norm());
            }
        }
    }
    // intersections of the two circles
    if d <= r1 + r2 && d >= (r1 - r2).abs() {
        let a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
        let h = sqrt((r1 * r1 - a * a).max(0.0));
        for sign in [1.0, -1.0] {
            let p = c1 + u * a + u.perp() * (sign * h);
            if in_span((p - c1).arg(), s1, w1) && in_span((p - c2).arg(), s2, w2) {
                return 0.0;
            }
        }
    }
    best
}

/// Exact minimum distance between the loci of two primitives.
pub fn spatial_separation(a: &PathPrimitive, b: &PathPrimitive) -> f64 {
    match (Shape::of(a), Shape::of(b)) {
        (Shape::Segment(a0, a1), Shape::Segment(b0, b1)) => segment_segment(a0, a1, b0, b1),
        (Shape::Segment(a0, a1), Shape::Arc { center, radius, start, sweep })
        | (Shape::Arc { center, radius, start, sweep }, Shape::Segment(a0, a1)) => {
            segment_arc(a0, a1, center, radius, start, sweep)
        }
        (
            Shape::Arc { center: c1, radius: r1, start: s1, sweep: w1 },
            Shape::Arc { center: c2, radius: r2, start: s2, sweep: w2 },
        ) => arc_arc(c1, r1, s1, w1, c2, r2, s2, w2),
    }
}

/// Result of a temporal minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalMinimum {
    /// Smallest distance actually observed (an upper bound of the minimum).
    pub distance: f64,
    /// Certified lower bound of the minimum, within `SEPARATION_TOLERANCE`
    /// of `distance`.
    pub lower_bound: f64,
    /// Time at which `distance` is attained.
    pub time: f64,
}

/// Distance between the two legs at every instant of a time box.
struct PairDistance<'a> {
    a: &'a TimedLeg,
    b: &'a TimedLeg,
}

impl PairDistance<'_> {
    #[inline]
    fn at(&self, t: f64) -> f64 {
        (self.a.position(t) - self.b.position(t)).norm()
    }

    /// Enclosure of the distance over `[t0, t1]`.
    ///
    /// The squared distance `g` is bounded twice: by the natural interval
    /// extension, and by the second-order form `g(m) + g'(m)·s + g''(ξ)·s²/2`
    /// whose width shrinks cubically with the box.
    fn enclose(&self, t0: f64, t1: f64) -> (f64, f64) {
        let time = Interval::new(t0, t1);
        let (ax, ay) = self.a.enclose(time);
        let (bx, by) = self.b.enclose(time);
        let (dx, dy) = (ax - bx, ay - by);
        let natural = dx.sqr() + dy.sqr();

        let m = 0.5 * (t0 + t1);
        let h = 0.5 * (t1 - t0);
        let d = self.a.position(m) - self.b.position(m);
        let dv = self.a.velocity(m) - self.b.velocity(m);
        let g = d.norm_sqr();
        let g1 = 2.0 * d.dot(dv);
        let (avx, avy) = self.a.enclose_velocity(time);
        let (bvx, bvy) = self.b.enclose_velocity(time);
        let (aax, aay) = self.a.enclose_acceleration(time);
        let (bax, bay) = self.b.enclose_acceleration(time);
        let (vx, vy) = (avx - bvx, avy - bvy);
        let g2 = (vx.sqr() + vy.sqr() + dx * (aax - bax) + dy * (aay - bay)) * 2.0;
        let lo = quadratic_extreme(g, g1, 0.5 * g2.lo, h, false);
        let hi = quadratic_extreme(g, g1, 0.5 * g2.hi, h, true);
        let squared = natural.meet(Interval::new(lo.min(hi), hi.max(lo)));
        (sqrt(squared.lo.max(0.0)), sqrt(squared.hi.max(0.0)))
    }
}

/// Minimum (or maximum) of `c0 + c1·s + c2·s²` over `s ∈ [−h, h]`.
fn quadratic_extreme(c0: f64, c1: f64, c2: f64, h: f64, maximize: bool) -> f64 {
    let q = |s: f64| c0 + c1 * s + c2 * s * s;
    let ends = [q(-h), q(h)];
    let mut best = if maximize { ends[0].max(ends[1]) } else { ends[0].min(ends[1]) };
    if c2 != 0.0 && ((c2 > 0.0) != maximize) {
        let s = -c1 / (2.0 * c2);
        if s.abs() <= h {
            best = if maximize { best.max(q(s)) } else { best.min(q(s)) };
        }
    }
    best
}

fn is_line(leg: &TimedLeg) -> bool {
    matches!(leg.primitive.kind, PrimitiveKind::Line { .. })
}

/// Exact minimum of `|Δv·t + Δa|` for two lines over `[t0, t1]`.
fn line_line_minimum(a: &TimedLeg, b: &TimedLeg, t0: f64, t1: f64) -> (f64, f64) {
    let dv = a.velocity(t0) - b.velocity(t0);
    let d0 = a.position(t0) - b.position(t0);
    let v2 = dv.norm_sqr();
    let s = if v2 > 0.0 { (-d0.dot(dv) / v2).clamp(0.0, t1 - t0) } else { 0.0 };
    ((d0 + dv * s).norm(), t0 + s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Boxed {
    lower: f64,
    t0: f64,
    t1: f64,
}

impl Eq for Boxed {}

impl PartialOrd for Boxed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Boxed {
    // min-heap on the lower bound, ties broken by time for determinism
    fn cmp(&self, other: &Self) -> Ordering {
        other.lower.total_cmp(&self.lower).then_with(|| other.t0.total_cmp(&self.t0))
    }
}

/// Global minimum over `window` of the distance between two legs.
///
/// Both legs must be defined on the whole window. Two lines are solved in
/// closed form; any pair involving an arc uses best-first interval
/// branch-and-bound until the certified lower bound is within
/// [`SEPARATION_TOLERANCE`] of the best observed distance.
pub fn temporal_separation(a: &TimedLeg, b: &TimedLeg, window: (f64, f64)) -> TemporalMinimum {
    let (t0, t1) = window;
    if is_line(a) && is_line(b) {
        let (d, t) = line_line_minimum(a, b, t0, t1);
        return TemporalMinimum { distance: d, lower_bound: d, time: t };
    }
    let f = PairDistance { a, b };
    let mut best = (f.at(t0), t0);
    for t in [t1, 0.5 * (t0 + t1)] {
        let d = f.at(t);
        if d < best.0 {
            best = (d, t);
        }
    }
    let mut floor = f64::INFINITY;
    let mut heap = BinaryHeap::new();
    heap.push(Boxed { lower: f.enclose(t0, t1).0, t0, t1 });
    let mut boxes = 0usize;
    while let Some(bx) = heap.pop() {
        if bx.lower >= best.0 - SEPARATION_TOLERANCE {
            floor = floor.min(bx.lower);
            break;
        }
        boxes += 1;
        let m = 0.5 * (bx.t0 + bx.t1);
        if boxes > MAX_BOXES || m <= bx.t0 || m >= bx.t1 {
            floor = floor.min(bx.lower);
            continue;
        }
        let dm = f.at(m);
        if dm < best.0 {
            best = (dm, m);
        }
        for (lo, hi) in [(bx.t0, m), (m, bx.t1)] {
            let lower = f.enclose(lo, hi).0;
            if lower < best.0 - SEPARATION_TOLERANCE {
                heap.push(Boxed { lower, t0: lo, t1: hi });
            } else {
                floor = floor.min(lower);
            }
        }
    }
    // polish the incumbent locally; the certified floor is unaffected
    let reach = (t1 - t0) / 64.0;
    let (lo, hi) = ((best.1 - reach).max(t0), (best.1 + reach).min(t1));
    if hi > lo {
        if let Ok((t, d)) = brent_minimize(|t| f.at(t), lo, hi, 1e-12, 100) {
            if d < best.0 {
                best = (d, t);
            }
        }
    }
    TemporalMinimum { distance: best.0, lower_bound: floor.min(best.0), time: best.1 }
}

/// Whether the certified minimum distance over `window` exceeds `delta`.
///
/// Decision variant of [`temporal_separation`]: stops at the first observed
/// distance `≤ δ` and discards any box whose lower bound already exceeds
/// `δ`. A box that cannot be resolved to within `SEPARATION_TOLERANCE` is
/// counted as a conflict.
fn temporally_separated(a: &TimedLeg, b: &TimedLeg, t0: f64, t1: f64, delta: f64) -> bool {
    if is_line(a) && is_line(b) {
        return line_line_minimum(a, b, t0, t1).0 > delta;
    }
    let f = PairDistance { a, b };
    if f.at(t0) <= delta || f.at(t1) <= delta {
        return false;
    }
    let mut stack: Vec<(f64, f64)> = Vec::with_capacity(64);
    stack.push((t0, t1));
    let mut boxes = 0usize;
    while let Some((lo, hi)) = stack.pop() {
        let (lower, upper) = f.enclose(lo, hi);
        if lower > delta {
            continue;
        }
        let m = 0.5 * (lo + hi);
        if f.at(m) <= delta {
            return false;
        }
        boxes += 1;
        if upper - lower < SEPARATION_TOLERANCE || boxes > MAX_BOXES || m <= lo || m >= hi {
            return false;
        }
        stack.push((m, hi));
        stack.push((lo, m));
    }
    true
}

/// Work counters for separation checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SeparationStats {
    pub pair_checks: u64,
    pub spatial_tests: u64,
    pub temporal_solves: u64,
}

impl SeparationStats {
    pub fn merge(&mut self, other: &SeparationStats) {
        self.pair_checks += other.pair_checks;
        self.spatial_tests += other.spatial_tests;
        self.temporal_solves += other.temporal_solves;
    }
}

/// A path split into legs with cached bounding boxes, ready for repeated
/// pairwise checks.
#[derive(Debug, Clone)]
pub struct PreparedPath {
    pub legs: Vec<TimedLeg>,
    boxes: Vec<Aabb>,
    bounds: Option<Aabb>,
    pub duration: f64,
    speed: f64,
    origin: Option<Complex>,
}

impl PreparedPath {
    pub fn new(path: &FleetPath) -> Self {
        let mut prepared = Self::from_legs(timed_legs(path), path.speed);
        prepared.origin = Some(path.start.position());
        prepared
    }

    pub fn from_legs(legs: Vec<TimedLeg>, speed: f64) -> Self {
        let boxes: Vec<Aabb> = legs.iter().map(|l| Shape::of(&l.primitive).aabb()).collect();
        let bounds = boxes.iter().copied().reduce(|a, b| a.union(&b));
        let duration = legs.last().map_or(0.0, |l| l.t_end);
        let origin = legs.first().map(|l| l.position(l.t_start));
        Self { legs, boxes, bounds, duration, speed, origin }
    }
}

/// Largest duration mismatch accepted between two fitted paths of `duration`.
pub fn duration_tolerance(duration: f64, speed: f64) -> f64 {
    DURATION_TOLERANCE + 2.0 * fit_tolerance(duration * speed) / speed
}

/// Pairwise check over the common time span `[0, horizon]`.
pub fn check_prepared(a: &PreparedPath, b: &PreparedPath, delta: f64, horizon: f64, stats: &mut SeparationStats) -> bool {
    stats.pair_checks += 1;
    if a.legs.is_empty() || b.legs.is_empty() {
        // a zero-duration path only exists at t = 0
        return match (a.origin, b.origin) {
            (Some(pa), Some(pb)) => (pa - pb).norm() > delta,
            _ => true,
        };
    }
    if let (Some(ba), Some(bb)) = (&a.bounds, &b.bounds) {
        if ba.distance(bb) > delta {
            return true;
        }
    }
    let (mut i, mut j) = (0, 0);
    while i < a.legs.len() && j < b.legs.len() {
        let (la, lb) = (&a.legs[i], &b.legs[j]);
        let lo = la.t_start.max(lb.t_start);
        let hi = la.t_end.min(lb.t_end).min(horizon);
        if hi > lo && a.boxes[i].distance(&b.boxes[j]) <= delta {
            stats.spatial_tests += 1;
            if spatial_separation(&la.window(lo, hi), &lb.window(lo, hi)) <= delta {
                stats.temporal_solves += 1;
                if !temporally_separated(la, lb, lo, hi, delta) {
                    return false;
                }
            }
        }
        if la.t_end >= horizon && lb.t_end >= horizon {
            break;
        }
        if la.t_end <= lb.t_end {
            i += 1;
        } else {
            j += 1;
        }
    }
    true
}

fn legs_speed(legs: &[TimedLeg]) -> f64 {
    legs.first().map_or(1.0, |l| l.primitive.speed())
}

/// Whether two timed paths stay strictly more than `delta` apart at every
/// common instant.
pub fn is_pair_separated(a: &[TimedLeg], b: &[TimedLeg], delta: f64) -> Result<bool, SeparationError> {
    let pa = PreparedPath::from_legs(a.to_vec(), legs_speed(a));
    let pb = PreparedPath::from_legs(b.to_vec(), legs_speed(b));
    is_prepared_pair_separated(&pa, &pb, delta, &mut SeparationStats::default())
}

fn is_prepared_pair_separated(
    a: &PreparedPath,
    b: &PreparedPath,
    delta: f64,
    stats: &mut SeparationStats,
) -> Result<bool, SeparationError> {
    let tol = duration_tolerance(a.duration.max(b.duration), a.speed.min(b.speed));
    if (a.duration - b.duration).abs() > tol {
        return Err(SeparationError::MismatchedDuration(a.duration, b.duration));
    }
    Ok(check_prepared(a, b, delta, a.duration.min(b.duration), stats))
}

/// Whether every pair of paths is separated by more than `delta`.
pub fn are_separated(delta: f64, paths: &[FleetPath]) -> Result<bool, SeparationError> {
    are_separated_with(&Sequential, delta, paths)
}

/// [`are_separated`] with pair checks distributed over an executor.
pub fn are_separated_with<E: Executor>(exec: &E, delta: f64, paths: &[FleetPath]) -> Result<bool, SeparationError> {
    let prepared: Vec<PreparedPath> = paths.iter().map(PreparedPath::new).collect();
    let n = prepared.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let results = exec.map(pairs.len(), |k| {
        let (a, b) = pairs[k];
        is_prepared_pair_separated(&prepared[a], &prepared[b], delta, &mut SeparationStats::default())
    });
    let mut all = true;
    for r in results {
        all &= r?;
    }
    Ok(all)
}
