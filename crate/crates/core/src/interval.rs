//! Closed real intervals with the handful of operations needed to bound the
//! distance between two moving points over a time box.
//!
//! Bounds are widened by a relative `1e-12` after transcendental functions to
//! absorb `libm` rounding; they are not rounded outward bit-exactly.

use core::f64::consts::{PI, TAU};
use core::ops::{Add, Mul, Neg, Sub};

use crate::math::{ceil, cos, sin};

const WIDEN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    #[inline]
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "[{lo}, {hi}]");
        Self { lo, hi }
    }

    #[inline]
    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Intersection, assumed non-empty (both operands enclose the same value).
    pub fn meet(&self, other: Interval) -> Interval {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            Interval { lo, hi }
        } else {
            // rounding made the enclosures disjoint; fall back to the hull
            Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
        }
    }

    /// Enclosure of `{x² : x ∈ self}`.
    pub fn sqr(&self) -> Interval {
        if self.lo >= 0.0 {
            Interval::new(self.lo * self.lo, self.hi * self.hi)
        } else if self.hi <= 0.0 {
            Interval::new(self.hi * self.hi, self.lo * self.lo)
        } else {
            Interval::new(0.0, (self.lo * self.lo).max(self.hi * self.hi))
        }
    }

    fn widened(lo: f64, hi: f64) -> Interval {
        let pad = WIDEN * (1.0 + lo.abs().max(hi.abs()));
        Interval::new((lo - pad).max(-1.0), (hi + pad).min(1.0))
    }

    /// Enclosure of `cos` over the interval.
    pub fn cos(&self) -> Interval {
        if self.width() >= TAU {
            return Interval::new(-1.0, 1.0);
        }
        let (ca, cb) = (cos(self.lo), cos(self.hi));
        let mut lo = ca.min(cb);
        let mut hi = ca.max(cb);
        // maxima at 2kπ, minima at (2k+1)π
        let k_max = ceil(self.lo / TAU);
        if k_max * TAU <= self.hi {
            hi = 1.0;
        }
        let k_min = ceil((self.lo - PI) / TAU);
        if k_min * TAU + PI <= self.hi {
            lo = -1.0;
        }
        Self::widened(lo, hi)
    }

    /// Enclosure of `sin` over the interval.
    pub fn sin(&self) -> Interval {
        if self.width() >= TAU {
            return Interval::new(-1.0, 1.0);
        }
        let (sa, sb) = (sin(self.lo), sin(self.hi));
        let mut lo = sa.min(sb);
        let mut hi = sa.max(sb);
        // maxima at π/2 + 2kπ, minima at −π/2 + 2kπ
        let k_max = ceil((self.lo - 0.5 * PI) / TAU);
        if k_max * TAU + 0.5 * PI <= self.hi {
            hi = 1.0;
        }
        let k_min = ceil((self.lo + 0.5 * PI) / TAU);
        if k_min * TAU - 0.5 * PI <= self.hi {
            lo = -1.0;
        }
        Self::widened(lo, hi)
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, o: Interval) -> Interval {
        Interval::new(self.lo + o.lo, self.hi + o.hi)
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, x: f64) -> Interval {
        Interval::new(self.lo + x, self.hi + x)
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, o: Interval) -> Interval {
        Interval::new(self.lo - o.hi, self.hi - o.lo)
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, k: f64) -> Interval {
        if k >= 0.0 {
            Interval::new(self.lo * k, self.hi * k)
        } else {
            Interval::new(self.hi * k, self.lo * k)
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        Interval::new(
            c.iter().copied().fold(f64::INFINITY, f64::min),
            c.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        )
    }
}
