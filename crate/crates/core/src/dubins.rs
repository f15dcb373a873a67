//! Basic Dubins path family: the six classic words plus the single-turn
//! `SLS` / `SRS` paths, built as chains of timed lines and arcs.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
use core::fmt;

use crate::math::{atan2, mod_two_pi, normalize_angle, sqrt, tan, Complex};

/// Tolerance used when comparing poses.
pub const POSE_TOLERANCE: f64 = 1e-9;

/// Segments shorter than this are treated as degenerate (kept, zero-length).
pub const DEGENERATE_LENGTH: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum DubinsError {
    #[error("no Dubins path exists between the given poses")]
    NoPathExists,
    #[error("evaluation time outside of the path's time domain")]
    OutOfDomain,
}

/// Planar position and heading.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    /// Heading in radians, normalized to `(-π, π]`.
    pub theta: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self { x, y, theta: normalize_angle(theta) }
    }

    pub fn from_position(position: Complex, theta: f64) -> Self {
        Self::new(position.re, position.im, theta)
    }

    #[inline]
    pub fn position(&self) -> Complex {
        Complex::new(self.x, self.y)
    }

    #[inline]
    pub fn direction(&self) -> Complex {
        Complex::cis(self.theta)
    }

    pub fn distance(&self, other: &Pose) -> f64 {
        (self.position() - other.position()).norm()
    }

    /// Absolute heading difference wrapped to `[0, π]`.
    pub fn heading_error(&self, other: &Pose) -> f64 {
        normalize_angle(self.theta - other.theta).abs()
    }

    pub fn approx_eq(&self, other: &Pose, tol: f64) -> bool {
        self.distance(other) <= tol && self.heading_error(other) <= tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ParamsError {
    #[error("speed must be positive and finite")]
    Speed,
    #[error("minimum turn radius must be positive and finite")]
    TurnRadius,
    #[error("separation distance must be positive and finite")]
    Separation,
}

/// Shared flight characteristics of every aircraft in the fleet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleParams {
    /// Cruise air speed, m/s.
    pub speed: f64,
    /// Minimum turn radius, m.
    pub min_turn_radius: f64,
    /// Minimum separation distance between aircraft, m.
    pub separation: f64,
}

impl VehicleParams {
    pub fn new(speed: f64, min_turn_radius: f64, separation: f64) -> Result<Self, ParamsError> {
        let p = Self { speed, min_turn_radius, separation };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.speed) {
            return Err(ParamsError::Speed);
        }
        if !ok(self.min_turn_radius) {
            return Err(ParamsError::TurnRadius);
        }
        if !ok(self.separation) {
            return Err(ParamsError::Separation);
        }
        Ok(())
    }

    /// Largest admissible turn rate `V / ρ_min`.
    pub fn max_turn_rate(&self) -> f64 {
        self.speed / self.min_turn_radius
    }
}

/// The eight members of the basic path family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WordTag {
    Lsl,
    Rsr,
    Lsr,
    Rsl,
    Lrl,
    Rlr,
    Sls,
    Srs,
}

impl WordTag {
    pub const ALL: [WordTag; 8] = [
        WordTag::Lsl,
        WordTag::Rsr,
        WordTag::Lsr,
        WordTag::Rsl,
        WordTag::Lrl,
        WordTag::Rlr,
        WordTag::Sls,
        WordTag::Srs,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            WordTag::Lsl => "LSL",
            WordTag::Rsr => "RSR",
            WordTag::Lsr => "LSR",
            WordTag::Rsl => "RSL",
            WordTag::Lrl => "LRL",
            WordTag::Rlr => "RLR",
            WordTag::Sls => "SLS",
            WordTag::Srs => "SRS",
        }
    }

    /// Word obtained by swapping left and right turns.
    pub fn mirrored(self) -> WordTag {
        match self {
            WordTag::Lsl => WordTag::Rsr,
            WordTag::Rsr => WordTag::Lsl,
            WordTag::Lsr => WordTag::Rsl,
            WordTag::Rsl => WordTag::Lsr,
            WordTag::Lrl => WordTag::Rlr,
            WordTag::Rlr => WordTag::Lrl,
            WordTag::Sls => WordTag::Srs,
            WordTag::Srs => WordTag::Sls,
        }
    }
}

impl fmt::Display for WordTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Straight extension added around a basic word when fitting a length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Extension {
    None,
    StartExtended,
    EndExtended,
    BothExtended,
}

impl Extension {
    pub const FITTED: [Extension; 3] =
        [Extension::StartExtended, Extension::EndExtended, Extension::BothExtended];

    /// Share of the extension placed before the word.
    pub fn start_ratio(self) -> f64 {
        match self {
            Extension::None => 0.0,
            Extension::StartExtended => 1.0,
            Extension::EndExtended => 0.0,
            Extension::BothExtended => 0.5,
        }
    }

    pub fn from_ratio(ratio: f64) -> Option<Extension> {
        if ratio == 1.0 {
            Some(Extension::StartExtended)
        } else if ratio == 0.0 {
            Some(Extension::EndExtended)
        } else if ratio == 0.5 {
            Some(Extension::BothExtended)
        } else {
            None
        }
    }

    fn has_prefix(self) -> bool {
        matches!(self, Extension::StartExtended | Extension::BothExtended)
    }

    fn has_suffix(self) -> bool {
        matches!(self, Extension::EndExtended | Extension::BothExtended)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathWord {
    pub tag: WordTag,
    pub extension: Extension,
}

impl PathWord {
    pub const fn basic(tag: WordTag) -> Self {
        Self { tag, extension: Extension::None }
    }

    pub const fn extended(tag: WordTag, extension: Extension) -> Self {
        Self { tag, extension }
    }
}

impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.extension {
            Extension::None => write!(f, "{}", self.tag),
            Extension::StartExtended => write!(f, "S-{}", self.tag),
            Extension::EndExtended => write!(f, "{}-S", self.tag),
            Extension::BothExtended => write!(f, "S-{}-S", self.tag),
        }
    }
}

/// Geometric shape of a primitive, in complex form.
///
/// A line is `a + v·t`; an arc is `C + r·e^{i(ω·t + φ)}`, where `t` is the
/// time elapsed since the primitive began. Positive `ω` turns left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrimitiveKind {
    Line { anchor: Complex, velocity: Complex },
    Arc { center: Complex, radius: f64, angular_rate: f64, phase: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPrimitive {
    pub kind: PrimitiveKind,
    /// Seconds.
    pub duration: f64,
}

impl PathPrimitive {
    #[inline]
    pub fn position(&self, t: f64) -> Complex {
        match self.kind {
            PrimitiveKind::Line { anchor, velocity } => anchor + velocity * t,
            PrimitiveKind::Arc { center, radius, angular_rate, phase } => {
                center + Complex::from_polar(radius, angular_rate * t + phase)
            }
        }
    }

    /// Time derivative of [`position`](Self::position).
    #[inline]
    pub fn velocity(&self, t: f64) -> Complex {
        match self.kind {
            PrimitiveKind::Line { velocity, .. } => velocity,
            PrimitiveKind::Arc { radius, angular_rate, phase, .. } => {
                Complex::from_polar(radius * angular_rate, angular_rate * t + phase).perp()
            }
        }
    }

    pub fn heading(&self, t: f64) -> f64 {
        match self.kind {
            PrimitiveKind::Line { velocity, .. } => velocity.arg(),
            PrimitiveKind::Arc { angular_rate, phase, .. } => {
                let side = if angular_rate >= 0.0 { FRAC_PI_2 } else { -FRAC_PI_2 };
                normalize_angle(angular_rate * t + phase + side)
            }
        }
    }

    pub fn pose(&self, t: f64) -> Pose {
        Pose::from_position(self.position(t), self.heading(t))
    }

    pub fn end_pose(&self) -> Pose {
        self.pose(self.duration)
    }

    /// Heading rate: the control input `u` held on this primitive.
    pub fn turn_rate(&self) -> f64 {
        match self.kind {
            PrimitiveKind::Line { .. } => 0.0,
            PrimitiveKind::Arc { angular_rate, .. } => angular_rate,
        }
    }

    pub fn speed(&self) -> f64 {
        match self.kind {
            PrimitiveKind::Line { velocity, .. } => velocity.norm(),
            PrimitiveKind::Arc { radius, angular_rate, .. } => radius * angular_rate.abs(),
        }
    }

    pub fn length(&self) -> f64 {
        self.speed() * self.duration
    }

    /// The same locus restricted to local times `[t0, t1]`, re-based at `t0`.
    pub fn restricted(&self, t0: f64, t1: f64) -> PathPrimitive {
        let kind = match self.kind {
            PrimitiveKind::Line { anchor, velocity } => {
                PrimitiveKind::Line { anchor: anchor + velocity * t0, velocity }
            }
            PrimitiveKind::Arc { center, radius, angular_rate, phase } => PrimitiveKind::Arc {
                center,
                radius,
                angular_rate,
                phase: phase + angular_rate * t0,
            },
        };
        PathPrimitive { kind, duration: (t1 - t0).max(0.0) }
    }
}

/// A concrete flyable path at constant speed.
#[derive(Debug, Clone, PartialEq)]
pub struct FleetPath {
    pub word: PathWord,
    pub primitives: Vec<PathPrimitive>,
    /// Turn radius used by the arcs, m.
    pub radius: f64,
    /// Total straight extension `l`, m (zero for basic words).
    pub extension_length: f64,
    pub total_length: f64,
    pub start: Pose,
    pub end: Pose,
    pub speed: f64,
}

impl FleetPath {
    /// Travel time at the path's speed.
    pub fn duration(&self) -> f64 {
        self.total_length / self.speed
    }

    /// Pose at time `t`, `0 ≤ t ≤ duration()`.
    pub fn eval(&self, t: f64) -> Result<Pose, DubinsError> {
        let duration = self.duration();
        if !(t >= -POSE_TOLERANCE && t <= duration + POSE_TOLERANCE) {
            return Err(DubinsError::OutOfDomain);
        }
        if t <= 0.0 {
            return Ok(self.start);
        }
        let (prim, local) = self.locate(t.min(duration));
        Ok(match prim {
            Some(p) => p.pose(local),
            None => self.start,
        })
    }

    /// Position at time `t`, clamped to the time domain.
    pub fn position_at(&self, t: f64) -> Complex {
        let (prim, local) = self.locate(t.clamp(0.0, self.duration()));
        match prim {
            Some(p) => p.position(local),
            None => self.start.position(),
        }
    }

    fn locate(&self, t: f64) -> (Option<&PathPrimitive>, f64) {
        let mut elapsed = 0.0;
        let mut last = None;
        for p in &self.primitives {
            if p.duration <= 0.0 {
                continue;
            }
            if t <= elapsed + p.duration {
                return (Some(p), t - elapsed);
            }
            elapsed += p.duration;
            last = Some(p);
        }
        match last {
            Some(p) => (Some(p), p.duration),
            None => (None, 0.0),
        }
    }

    /// Positions at `count` equispaced instants over the whole path.
    pub fn sample_positions(&self, count: usize) -> Vec<Complex> {
        let duration = self.duration();
        let denom = count.saturating_sub(1).max(1) as f64;
        (0..count).map(|i| self.position_at(duration * i as f64 / denom)).collect()
    }

    /// Largest arc curvature radius violation check helper: smallest radius used.
    pub fn min_arc_radius(&self) -> Option<f64> {
        self.primitives
            .iter()
            .filter_map(|p| match p.kind {
                PrimitiveKind::Arc { radius, .. } => Some(radius),
                PrimitiveKind::Line { .. } => None,
            })
            .reduce(f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Segment {
    Straight(f64),
    Turn { left: bool, angle: f64 },
}

impl Segment {
    fn length(self, radius: f64) -> f64 {
        match self {
            Segment::Straight(l) => l,
            Segment::Turn { angle, .. } => angle * radius,
        }
    }
}

fn left_center(p: Complex, dir: Complex, radius: f64) -> Complex {
    p + dir.perp() * radius
}

fn right_center(p: Complex, dir: Complex, radius: f64) -> Complex {
    p - dir.perp() * radius
}

fn csc_same(left: bool, start: &Pose, end: &Pose, radius: f64) -> [Segment; 3] {
    let center = if left { left_center } else { right_center };
    let c0 = center(start.position(), start.direction(), radius);
    let c1 = center(end.position(), end.direction(), radius);
    let v = c1 - c0;
    let d = v.norm();
    let (t0, t1) = (start.theta, end.theta);
    if d < DEGENERATE_LENGTH {
        // coincident circles: a single arc does the whole turn
        let sweep = if left { mod_two_pi(t1 - t0) } else { mod_two_pi(t0 - t1) };
        return [
            Segment::Turn { left, angle: 0.0 },
            Segment::Straight(0.0),
            Segment::Turn { left, angle: sweep },
        ];
    }
    let phi = v.arg();
    let (a1, a2) = if left {
        (mod_two_pi(phi - t0), mod_two_pi(t1 - phi))
    } else {
        (mod_two_pi(t0 - phi), mod_two_pi(phi - t1))
    };
    [Segment::Turn { left, angle: a1 }, Segment::Straight(d), Segment::Turn { left, angle: a2 }]
}

fn csc_cross(first_left: bool, start: &Pose, end: &Pose, radius: f64) -> Option<[Segment; 3]> {
    let (c0, c1) = if first_left {
        (
            left_center(start.position(), start.direction(), radius),
            right_center(end.position(), end.direction(), radius),
        )
    } else {
        (
            right_center(start.position(), start.direction(), radius),
            left_center(end.position(), end.direction(), radius),
        )
    };
    let v = c1 - c0;
    let d2 = v.norm_sqr();
    let min2 = 4.0 * radius * radius;
    if d2 < min2 {
        return None;
    }
    let straight = sqrt(d2 - min2);
    let tilt = atan2(2.0 * radius, straight);
    let (t0, t1) = (start.theta, end.theta);
    let (a1, a2) = if first_left {
        let phi = v.arg() + tilt;
        (mod_two_pi(phi - t0), mod_two_pi(phi - t1))
    } else {
        let phi = v.arg() - tilt;
        (mod_two_pi(t0 - phi), mod_two_pi(t1 - phi))
    };
    Some([
        Segment::Turn { left: first_left, angle: a1 },
        Segment::Straight(straight),
        Segment::Turn { left: !first_left, angle: a2 },
    ])
}

/// `LRL` (outer_left) or `RLR`. Of the two admissible middle circles the one
/// giving the shorter path is kept.
fn ccc(outer_left: bool, start: &Pose, end: &Pose, radius: f64) -> Option<[Segment; 3]> {
    let center = if outer_left { left_center } else { right_center };
    let c0 = center(start.position(), start.direction(), radius);
    let c1 = center(end.position(), end.direction(), radius);
    let v = c1 - c0;
    let d = v.norm();
    if d > 4.0 * radius {
        return None;
    }
    let axis = if d < DEGENERATE_LENGTH { start.direction() } else { v.scale(1.0 / d) };
    let h = sqrt((4.0 * radius * radius - 0.25 * d * d).max(0.0));
    let mid = (c0 + c1).scale(0.5);
    let (t0, t1) = (start.theta, end.theta);
    let mut best: Option<([Segment; 3], f64)> = None;
    for side in [1.0, -1.0] {
        let c2 = mid + axis.perp() * (side * h);
        let b1 = (c2 - c0).arg();
        let b2 = (c1 - c2).arg();
        let (a1, a2, a3) = if outer_left {
            (
                mod_two_pi(b1 + FRAC_PI_2 - t0),
                mod_two_pi(b1 - b2 + PI),
                mod_two_pi(t1 - b2 + FRAC_PI_2),
            )
        } else {
            (
                mod_two_pi(t0 - b1 + FRAC_PI_2),
                mod_two_pi(b2 - b1 + PI),
                mod_two_pi(b2 + FRAC_PI_2 - t1),
            )
        };
        let len = a1 + a2 + a3;
        if best.is_none_or(|(_, l)| len < l) {
            best = Some((
                [
                    Segment::Turn { left: outer_left, angle: a1 },
                    Segment::Turn { left: !outer_left, angle: a2 },
                    Segment::Turn { left: outer_left, angle: a3 },
                ],
                len,
            ));
        }
    }
    best.map(|(s, _)| s)
}

/// Straight, single turn of less than half a circle, straight. The turn
/// circle is tangent to the start and end heading lines.
fn sts(left: bool, start: &Pose, end: &Pose, radius: f64) -> Option<[Segment; 3]> {
    let turn = if left {
        mod_two_pi(end.theta - start.theta)
    } else {
        mod_two_pi(start.theta - end.theta)
    };
    if turn <= 1e-9 || turn >= PI - 1e-9 {
        return None;
    }
    let u0 = start.direction();
    let u1 = end.direction();
    let w = end.position() - start.position();
    let det = u0.cross(u1);
    let to_vertex = w.cross(u1) / det;
    let from_vertex = u0.cross(w) / det;
    let tangent = radius * tan(0.5 * turn);
    let s1 = to_vertex - tangent;
    let s2 = from_vertex - tangent;
    if s1 < -DEGENERATE_LENGTH || s2 < -DEGENERATE_LENGTH {
        return None;
    }
    Some([
        Segment::Straight(s1.max(0.0)),
        Segment::Turn { left, angle: turn },
        Segment::Straight(s2.max(0.0)),
    ])
}

pub(crate) fn word_segments(
    tag: WordTag,
    start: &Pose,
    end: &Pose,
    radius: f64,
) -> Option<[Segment; 3]> {
    match tag {
        WordTag::Lsl => Some(csc_same(true, start, end, radius)),
        WordTag::Rsr => Some(csc_same(false, start, end, radius)),
        WordTag::Lsr => csc_cross(true, start, end, radius),
        WordTag::Rsl => csc_cross(false, start, end, radius),
        WordTag::Lrl => ccc(true, start, end, radius),
        WordTag::Rlr => ccc(false, start, end, radius),
        WordTag::Sls => sts(true, start, end, radius),
        WordTag::Srs => sts(false, start, end, radius),
    }
}

/// Length of a basic word without building its primitives.
pub fn word_length(tag: WordTag, start: &Pose, end: &Pose, radius: f64) -> Option<f64> {
    word_segments(tag, start, end, radius).map(|s| s.iter().map(|seg| seg.length(radius)).sum())
}

/// Chains segments into timed primitives starting at `start`.
fn assemble(
    start: &Pose,
    segments: &[Segment],
    radius: f64,
    speed: f64,
    out: &mut Vec<PathPrimitive>,
) -> Pose {
    let mut pos = start.position();
    let mut heading = start.theta;
    for &seg in segments {
        let prim = match seg {
            Segment::Straight(len) => PathPrimitive {
                kind: PrimitiveKind::Line { anchor: pos, velocity: Complex::from_polar(speed, heading) },
                duration: len / speed,
            },
            Segment::Turn { left, angle } => {
                let dir = Complex::cis(heading);
                let (center, rate, phase) = if left {
                    (left_center(pos, dir, radius), speed / radius, heading - FRAC_PI_2)
                } else {
                    (right_center(pos, dir, radius), -speed / radius, heading + FRAC_PI_2)
                };
                PathPrimitive {
                    kind: PrimitiveKind::Arc { center, radius, angular_rate: rate, phase },
                    duration: angle * radius / speed,
                }
            }
        };
        pos = prim.position(prim.duration);
        heading = match seg {
            Segment::Straight(_) => heading,
            Segment::Turn { left: true, angle } => heading + angle,
            Segment::Turn { left: false, angle } => heading - angle,
        };
        out.push(prim);
    }
    Pose::from_position(pos, heading)
}

/// Builds an extended word: `prefix` straight, the basic word between the
/// shifted poses, then `suffix` straight.
pub(crate) fn build_extended(
    word: PathWord,
    start: &Pose,
    end: &Pose,
    radius: f64,
    speed: f64,
    prefix: f64,
    suffix: f64,
) -> Option<FleetPath> {
    let inner_start = Pose::from_position(start.position() + start.direction() * prefix, start.theta);
    let inner_end = Pose::from_position(end.position() - end.direction() * suffix, end.theta);
    let segments = word_segments(word.tag, &inner_start, &inner_end, radius)?;
    let mut primitives = Vec::with_capacity(5);
    let mut total = 0.0;
    if word.extension.has_prefix() {
        assemble(start, &[Segment::Straight(prefix)], radius, speed, &mut primitives);
        total += prefix;
    }
    assemble(&inner_start, &segments, radius, speed, &mut primitives);
    total += segments.iter().map(|s| s.length(radius)).sum::<f64>();
    if word.extension.has_suffix() {
        assemble(&inner_end, &[Segment::Straight(suffix)], radius, speed, &mut primitives);
        total += suffix;
    }
    Some(FleetPath {
        word,
        primitives,
        radius,
        extension_length: prefix + suffix,
        total_length: total,
        start: *start,
        end: *end,
        speed,
    })
}

/// The path of `word` joining `start` to `end` at turn radius `radius`, or
/// `None` when that word cannot connect the poses.
pub fn build_word(word: PathWord, start: &Pose, end: &Pose, radius: f64, speed: f64) -> Option<FleetPath> {
    debug_assert!(radius > 0.0 && speed > 0.0);
    let word = PathWord::basic(word.tag);
    build_extended(word, start, end, radius, speed, 0.0, 0.0)
}

fn zero_length_path(start: &Pose, params: &VehicleParams) -> FleetPath {
    let mut primitives = Vec::with_capacity(3);
    let segments = [
        Segment::Turn { left: true, angle: 0.0 },
        Segment::Straight(0.0),
        Segment::Turn { left: true, angle: 0.0 },
    ];
    assemble(start, &segments, params.min_turn_radius, params.speed, &mut primitives);
    FleetPath {
        word: PathWord::basic(WordTag::Lsl),
        primitives,
        radius: params.min_turn_radius,
        extension_length: 0.0,
        total_length: 0.0,
        start: *start,
        end: *start,
        speed: params.speed,
    }
}

/// Shortest basic path at the minimum turn radius, with its travel time.
pub fn shortest_dubins(start: &Pose, end: &Pose, params: &VehicleParams) -> Result<(f64, FleetPath), DubinsError> {
    if start.approx_eq(end, POSE_TOLERANCE) {
        return Ok((0.0, zero_length_path(start, params)));
    }
    let mut best: Option<(WordTag, f64)> = None;
    for tag in WordTag::ALL {
        if let Some(len) = word_length(tag, start, end, params.min_turn_radius) {
            if best.is_none_or(|(_, l)| len < l) {
                best = Some((tag, len));
            }
        }
    }
    let (tag, _) = best.ok_or(DubinsError::NoPathExists)?;
    let path = build_word(PathWord::basic(tag), start, end, params.min_turn_radius, params.speed)
        .ok_or(DubinsError::NoPathExists)?;
    Ok((path.duration(), path))
}
