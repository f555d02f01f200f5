//! Closed intervals with outward rounding.
//!
//! Every correctly rounded operation (`+ - * / sqrt`) widens its result by one
//! ulp on each side; library transcendental functions (`sin`, `cos`, `powf`)
//! by two. The enclosure property `x ∈ X, y ∈ Y ⇒ x ∘ y ∈ X ∘ Y` then holds
//! independent of the floating-point rounding mode.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::linalg::Ring;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

/// Sign information certified by an enclosure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertifiedSign {
    Positive,
    Negative,
    ContainsZero,
}

impl CertifiedSign {
    pub fn is_certain(self) -> bool {
        !matches!(self, CertifiedSign::ContainsZero)
    }
}

fn down(x: f64) -> f64 {
    x.next_down()
}

fn up(x: f64) -> f64 {
    x.next_up()
}

fn down2(x: f64) -> f64 {
    x.next_down().next_down()
}

fn up2(x: f64) -> f64 {
    x.next_up().next_up()
}

impl Interval {
    pub const ENTIRE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    /// Certified enclosure of π.
    pub const PI: Interval = Interval {
        lo: std::f64::consts::PI,
        hi: 3.141_592_653_589_793_6,
    };

    /// Interval `[lo, hi]`; panics on `lo > hi` or NaN bounds.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Smallest interval containing both bounds in either order.
    pub fn hull_of(a: f64, b: f64) -> Self {
        Interval { lo: a.min(b), hi: a.max(b) }
    }

    pub fn hull(self, other: Interval) -> Self {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn intersect(self, other: Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(self) -> f64 {
        if self.lo.is_finite() && self.hi.is_finite() {
            self.lo + 0.5 * (self.hi - self.lo)
        } else {
            0.0
        }
    }

    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    pub fn subset_of(self, other: Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn is_finite(self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn sign(self) -> CertifiedSign {
        if self.lo > 0.0 {
            CertifiedSign::Positive
        } else if self.hi < 0.0 {
            CertifiedSign::Negative
        } else {
            CertifiedSign::ContainsZero
        }
    }

    fn widened(lo: f64, hi: f64) -> Self {
        if lo.is_nan() || hi.is_nan() {
            return Interval::ENTIRE;
        }
        Interval { lo: down(lo), hi: up(hi) }
    }

    fn widened2(lo: f64, hi: f64) -> Self {
        if lo.is_nan() || hi.is_nan() {
            return Interval::ENTIRE;
        }
        Interval { lo: down2(lo), hi: up2(hi) }
    }

    pub fn abs(self) -> Self {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval { lo: 0.0, hi: self.mag() }
        }
    }

    pub fn sqr(self) -> Self {
        let a = self.abs();
        Interval { lo: down(a.lo * a.lo).max(0.0), hi: up(a.hi * a.hi) }
    }

    /// Reciprocal; the entire line when `0` is enclosed.
    pub fn recip(self) -> Self {
        if self.contains_zero() {
            return Interval::ENTIRE;
        }
        Interval::widened(1.0 / self.hi, 1.0 / self.lo)
    }

    /// Square root of the non-negative part.
    pub fn sqrt(self) -> Self {
        if self.hi < 0.0 {
            return Interval { lo: f64::NAN, hi: f64::NAN };
        }
        let lo = if self.lo <= 0.0 { 0.0 } else { down(self.lo.sqrt()).max(0.0) };
        Interval { lo, hi: up(self.hi.sqrt()) }
    }

    /// `x^p` for a strictly positive interval; the entire line otherwise.
    pub fn powf(self, p: f64) -> Self {
        if !(self.lo > 0.0) {
            return Interval::ENTIRE;
        }
        if p == 0.0 {
            return Interval::point(1.0);
        }
        let (a, b) = (self.lo.powf(p), self.hi.powf(p));
        let (lo, hi) = if p > 0.0 { (a, b) } else { (b, a) };
        let r = Interval::widened2(lo, hi);
        Interval { lo: r.lo.max(0.0), hi: r.hi }
    }

    /// Integer power by repeated multiplication.
    pub fn powi(self, k: i32) -> Self {
        if k == 0 {
            return Interval::point(1.0);
        }
        if k < 0 {
            return self.powi(-k).recip();
        }
        if k % 2 == 0 {
            let half = self.sqr().powi(k / 2);
            return Interval { lo: half.lo.max(0.0), hi: half.hi };
        }
        self * self.powi(k - 1)
    }

    pub fn sin(self) -> Self {
        // extrema of sin at (j + 1/2)π: +1 for even j, -1 for odd j
        self.trig(f64::sin, 0.5)
    }

    pub fn cos(self) -> Self {
        // extrema of cos at jπ: +1 for even j, -1 for odd j
        self.trig(f64::cos, 0.0)
    }

    fn trig(self, func: fn(f64) -> f64, offset: f64) -> Self {
        if !self.is_finite() || self.width() >= 7.0 {
            return Interval::new(-1.0, 1.0);
        }
        let (a, b) = (func(self.lo), func(self.hi));
        let mut out = Interval::widened2(a.min(b), a.max(b));
        let j_lo = (self.lo / std::f64::consts::PI - offset).floor() as i64 - 1;
        let j_hi = (self.hi / std::f64::consts::PI - offset).ceil() as i64 + 1;
        for j in j_lo..=j_hi {
            let at = Interval::PI * (j as f64 + offset);
            if at.hi >= self.lo && at.lo <= self.hi {
                let v = if j.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                out = out.hull(Interval::point(v));
            }
        }
        Interval { lo: out.lo.max(-1.0), hi: out.hi.min(1.0) }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval::widened(self.lo + o.lo, self.hi + o.hi)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval::widened(self.lo - o.hi, self.hi - o.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        if p.iter().any(|x| x.is_nan()) {
            return Interval::ENTIRE;
        }
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::widened(lo, hi)
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, o: Interval) -> Interval {
        if o.contains_zero() {
            return Interval::ENTIRE;
        }
        let p = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::widened(lo, hi)
    }
}

macro_rules! scalar_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<f64> for Interval {
            type Output = Interval;
            fn $m(self, o: f64) -> Interval {
                $tr::$m(self, Interval::point(o))
            }
        }
        impl $tr<Interval> for f64 {
            type Output = Interval;
            fn $m(self, o: Interval) -> Interval {
                $tr::$m(Interval::point(self), o)
            }
        }
    )*};
}

scalar_ops!(Add add, Sub sub, Mul mul, Div div);

impl Ring for Interval {
    fn zero() -> Self {
        Interval::point(0.0)
    }
    fn one() -> Self {
        Interval::point(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn pi_enclosure_is_tight() {
        assert_eq!(Interval::PI.lo.next_up(), Interval::PI.hi);
    }

    #[test]
    fn arithmetic_encloses_point_results() {
        let a = Interval::new(0.1, 0.3);
        let b = Interval::new(-2.0, 0.7);
        for &(x, y) in &[(0.1, -2.0), (0.3, 0.7), (0.2, 0.0), (0.15, -1.1)] {
            assert!((a + b).contains(x + y));
            assert!((a - b).contains(x - y));
            assert!((a * b).contains(x * y));
        }
        assert!((Interval::point(1.0) / Interval::point(3.0)).contains(1.0 / 3.0));
        assert_eq!(Interval::point(1.0) / b, Interval::ENTIRE);
    }

    #[test]
    fn trig_includes_extrema() {
        let x = Interval::new(1.0, 2.0);
        assert_eq!(x.sin().hi, 1.0);
        let y = Interval::new(3.0, 3.5);
        assert_eq!(y.cos().lo, -1.0);
        let z = Interval::new(0.2, 0.4);
        assert!(z.sin().lo > 0.19 && z.sin().hi < 0.39);
        assert_eq!(Interval::new(0.0, 10.0).sin(), Interval::new(-1.0, 1.0));
    }

    #[test]
    fn sin_of_certified_pi_contains_zero() {
        let s = Interval::PI.sin();
        assert!(s.contains_zero());
        assert!(s.width() < 1e-15);
        let c = (Interval::PI / 3.0).cos();
        assert!(c.contains(0.5));
    }

    #[test]
    fn powers() {
        let x = Interval::new(0.5, 2.0);
        let p = x.powf(-3.0);
        assert!(p.contains(8.0) && p.contains(0.125));
        assert!(Interval::new(-1.0, 2.0).powf(2.0) == Interval::ENTIRE);
        let q = Interval::new(-2.0, 1.0).powi(2);
        assert!(q.lo == 0.0 && q.hi >= 4.0);
        assert!(Interval::new(-2.0, -1.0).powi(3).contains(-8.0));
        assert!(Interval::point(2.0).sqrt().contains(2f64.sqrt()));
    }

    #[test]
    fn signs() {
        assert_eq!(Interval::new(1e-300, 1.0).sign(), CertifiedSign::Positive);
        assert_eq!(Interval::new(-1.0, -0.5).sign(), CertifiedSign::Negative);
        assert_eq!(Interval::new(-1.0, 0.5).sign(), CertifiedSign::ContainsZero);
        assert!(Interval::point(PI).subset_of(Interval::new(3.0, 4.0)));
    }
}
