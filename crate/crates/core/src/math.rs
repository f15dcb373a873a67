//! Scalar helpers and a minimal complex number type.
//!
//! Everything routes through `libm` so results are bit-identical across
//! targets and independent of whether `std` is linked.

use core::f64::consts::{PI, TAU};
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn tan(x: f64) -> f64 {
    libm::tan(x)
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

/// Reduces an angle to `(-π, π]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let mut a = theta - TAU * floor(theta / TAU);
    // a in [0, 2π)
    if a > PI {
        a -= TAU;
    }
    if a <= -PI {
        a += TAU;
    }
    a
}

/// Reduces an angle to `[0, 2π)`. Values within `1e-12` of a full turn snap
/// to zero so near-identical headings do not produce spurious full circles.
pub fn mod_two_pi(theta: f64) -> f64 {
    let a = theta - TAU * floor(theta / TAU);
    if !(0.0..TAU - 1e-12).contains(&a) {
        0.0
    } else {
        a
    }
}

/// A complex number, used for planar positions and velocities.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Complex = Complex { re: 0.0, im: 0.0 };

    #[inline]
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    /// `e^{iθ}`
    #[inline]
    pub fn cis(theta: f64) -> Self {
        Self::new(cos(theta), sin(theta))
    }

    #[inline]
    pub fn from_polar(r: f64, theta: f64) -> Self {
        Self::new(r * cos(theta), r * sin(theta))
    }

    #[inline]
    pub fn norm(self) -> f64 {
        hypot(self.re, self.im)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    #[inline]
    pub fn arg(self) -> f64 {
        atan2(self.im, self.re)
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    #[inline]
    pub fn scale(self, k: f64) -> Self {
        Self::new(self.re * k, self.im * k)
    }

    /// Multiplication by `i` (quarter turn counter-clockwise).
    #[inline]
    pub fn perp(self) -> Self {
        Self::new(-self.im, self.re)
    }

    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.re * other.re + self.im * other.im
    }

    /// z-component of the planar cross product.
    #[inline]
    pub fn cross(self, other: Self) -> f64 {
        self.re * other.im - self.im * other.re
    }
}

impl Add for Complex {
    type Output = Complex;
    #[inline]
    fn add(self, o: Complex) -> Complex {
        Complex::new(self.re + o.re, self.im + o.im)
    }
}

impl AddAssign for Complex {
    #[inline]
    fn add_assign(&mut self, o: Complex) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl Sub for Complex {
    type Output = Complex;
    #[inline]
    fn sub(self, o: Complex) -> Complex {
        Complex::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for Complex {
    type Output = Complex;
    #[inline]
    fn mul(self, o: Complex) -> Complex {
        Complex::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Mul<f64> for Complex {
    type Output = Complex;
    #[inline]
    fn mul(self, k: f64) -> Complex {
        self.scale(k)
    }
}

impl Neg for Complex {
    type Output = Complex;
    #[inline]
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_range() {
        assert_eq!(normalize_angle(PI), PI);
        assert_eq!(normalize_angle(-PI), PI);
        assert!((normalize_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((normalize_angle(-0.5) + 0.5).abs() < 1e-15);
        assert!((normalize_angle(7.0) - (7.0 - TAU)).abs() < 1e-12);
    }

    #[test]
    fn mod_two_pi_snaps_full_turn() {
        assert_eq!(mod_two_pi(-1e-14), 0.0);
        assert_eq!(mod_two_pi(TAU), 0.0);
        assert!((mod_two_pi(-PI / 2.0) - 1.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn complex_ops() {
        let a = Complex::new(1.0, 2.0);
        let b = Complex::new(3.0, -1.0);
        assert_eq!(a * b, Complex::new(5.0, 5.0));
        assert_eq!(a.perp(), Complex::new(-2.0, 1.0));
        assert_eq!(a.cross(b), -7.0);
        assert!((Complex::cis(PI / 2.0) - Complex::new(0.0, 1.0)).norm() < 1e-15);
    }
}
