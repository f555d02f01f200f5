//! A third test particle added to a 1+2 relative equilibrium.
//!
//! With `θ₁ = 0`, `m₁ + m₂ = 1` and `θ₂` one of the zeros `π/3`, `5π/3`, `π`
//! of `f`, the angle `θ₃` of a third, infinitesimal particle must solve
//! `g(θ₃) = m₁ f(θ₃) + (1 - m₁) f(θ₃ - θ₂) = 0`.

use std::f64::consts::{FRAC_PI_3, PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{f_raw, h_raw, PotentialExponent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case1p2p1 {
    #[serde(rename = "equilateral+")]
    EquilateralPlus,
    #[serde(rename = "equilateral-")]
    EquilateralMinus,
    #[serde(rename = "collinear")]
    Collinear,
}

impl Case1p2p1 {
    pub const ALL: [Case1p2p1; 3] =
        [Case1p2p1::EquilateralPlus, Case1p2p1::EquilateralMinus, Case1p2p1::Collinear];

    pub fn theta2(self) -> f64 {
        match self {
            Case1p2p1::EquilateralPlus => FRAC_PI_3,
            Case1p2p1::EquilateralMinus => 5.0 * FRAC_PI_3,
            Case1p2p1::Collinear => PI,
        }
    }

    /// Intervals of `θ₃` holding exactly one root each.
    pub fn intervals(self) -> Vec<(f64, f64)> {
        match self {
            Case1p2p1::EquilateralPlus => {
                vec![(0.0, FRAC_PI_3), (FRAC_PI_3, PI), (PI, 4.0 * FRAC_PI_3), (4.0 * FRAC_PI_3, TAU)]
            }
            Case1p2p1::EquilateralMinus => {
                vec![(0.0, 2.0 * FRAC_PI_3), (2.0 * FRAC_PI_3, PI), (PI, 5.0 * FRAC_PI_3), (5.0 * FRAC_PI_3, TAU)]
            }
            Case1p2p1::Collinear => vec![(0.0, PI), (PI, TAU)],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Case1p2p1::EquilateralPlus => "equilateral+",
            Case1p2p1::EquilateralMinus => "equilateral-",
            Case1p2p1::Collinear => "collinear",
        }
    }
}

impl fmt::Display for Case1p2p1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Case1p2p1 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "equilateral+" | "equilateral-plus" | "eq+" => Ok(Case1p2p1::EquilateralPlus),
            "equilateral-" | "equilateral-minus" | "eq-" => Ok(Case1p2p1::EquilateralMinus),
            "collinear" => Ok(Case1p2p1::Collinear),
            _ => Err(Error::Domain(format!("unknown 1+2+1 case `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootList {
    pub case_label: Case1p2p1,
    pub theta2: f64,
    pub m1: f64,
    pub s: f64,
    /// Sorted roots in `(0, 2π)`.
    pub roots: Vec<f64>,
    /// Number of roots found in each of [`Case1p2p1::intervals`].
    pub interval_counts: Vec<usize>,
    /// Set for `s = 2`, which the root count statement does not cover.
    pub outside_hypothesis: bool,
}

/// `g(θ₃) = m₁ f(θ₃) + (1 - m₁) f(θ₃ - θ₂)`.
pub fn g_1p2p1(theta3: f64, theta2: f64, m1: f64, s: f64) -> f64 {
    m1 * f_raw(theta3, s) + (1.0 - m1) * f_raw(theta3 - theta2, s)
}

fn dg_1p2p1(theta3: f64, theta2: f64, m1: f64, s: f64) -> f64 {
    m1 * h_raw(theta3, s) + (1.0 - m1) * h_raw(theta3 - theta2, s)
}

/// Number of sample cells per interval when looking for sign changes.
const SCAN_CELLS: usize = 256;

pub fn solve_1p2p1(m1: f64, case: Case1p2p1, s: PotentialExponent) -> Result<RootList> {
    if !(m1 > 0.0 && m1 < 1.0) {
        return Err(Error::Domain(format!("m1 must lie in (0, 1), got {m1}")));
    }
    let sv = s.value();
    let theta2 = case.theta2();
    let g = |t: f64| g_1p2p1(t, theta2, m1, sv);
    let mut roots = Vec::new();
    let mut counts = Vec::new();
    for (a, b) in case.intervals() {
        let found = roots_in(&g, a, b, |t| dg_1p2p1(t, theta2, m1, sv));
        counts.push(found.len());
        roots.extend(found);
    }
    roots.sort_by(f64::total_cmp);
    Ok(RootList {
        case_label: case,
        theta2,
        m1,
        s: sv,
        roots,
        interval_counts: counts,
        outside_hypothesis: s.is_vortex(),
    })
}

fn roots_in(g: &impl Fn(f64) -> f64, a: f64, b: f64, dg: impl Fn(f64) -> f64) -> Vec<f64> {
    let eps = 1e-12 * (b - a);
    let mut xs: Vec<f64> = (1..SCAN_CELLS).map(|k| a + (b - a) * k as f64 / SCAN_CELLS as f64).collect();
    xs.insert(0, a + eps);
    xs.push(b - eps);
    let vals: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    let mut out = Vec::new();
    for k in 0..xs.len() - 1 {
        let (ga, gb) = (vals[k], vals[k + 1]);
        if ga == 0.0 {
            out.push(xs[k]);
        } else if ga.signum() != gb.signum() && gb != 0.0 {
            out.push(polish(g, &dg, xs[k], xs[k + 1], ga));
        }
    }
    if vals.last() == Some(&0.0) {
        out.push(*xs.last().unwrap());
    }
    out
}

/// Bisection to width 1e-13, then one guarded Newton step.
fn polish(g: &impl Fn(f64) -> f64, dg: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, g_lo: f64) -> f64 {
    let sign_lo = g_lo.signum();
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if gm.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let d = dg(x);
    if d != 0.0 && d.is_finite() {
        let y = x - g(x) / d;
        if y >= lo && y <= hi && g(y).abs() <= g(x).abs() {
            return y;
        }
    }
    x
}
