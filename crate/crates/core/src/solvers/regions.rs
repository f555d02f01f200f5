//! Angular regions containing the convex symmetric solutions, and the
//! factorization of `r³r³(f_ij - f_kl)` used to locate them.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{chord_distance, reduce_angle, RingConfiguration};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionBReport {
    /// Consecutive gaps `(θ₁₂, θ₂₃, θ₃₄)` in the orientation with the shorter outer arc.
    pub gaps: [f64; 3],
    /// Outer separation `θ₁₄`.
    pub span: f64,
    pub inside: bool,
    /// Bodies 1 and 4 diametrically opposite; no convex solution can have all
    /// gaps below `π/3` there.
    pub collinear_outer_pair: bool,
}

/// Consecutive gaps of a 1+4 configuration whose labels run in circular
/// order, in whichever orientation gives the shorter arc from body 1 to body 4.
fn ordered_gaps(config: &RingConfiguration) -> Result<[f64; 3]> {
    if config.len() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: config.len() });
    }
    let t = config.thetas();
    [-1.0, 1.0]
        .into_iter()
        .map(|sign| [0, 1, 2].map(|k| reduce_angle(sign * (t[k] - t[k + 1]))))
        .filter(|g| g.iter().sum::<f64>() < TAU)
        .min_by(|a, b| a.iter().sum::<f64>().total_cmp(&b.iter().sum::<f64>()))
        .ok_or_else(|| Error::Ordering(format!("labels of {t:?} are not in circular order")))
}

pub fn region_b_report(config: &RingConfiguration) -> Result<RegionBReport> {
    let gaps = ordered_gaps(config)?;
    let span: f64 = gaps.iter().sum();
    let inside = gaps.iter().all(|&g| g < FRAC_PI_3) && span > FRAC_PI_3 && span < PI;
    Ok(RegionBReport { gaps, span, inside, collinear_outer_pair: (span - PI).abs() < 1e-12 })
}

/// Membership of a circularly ordered 1+4 configuration in
/// `{θ₁₂, θ₂₃, θ₃₄ < π/3 < θ₁₄ < π}`.
pub fn region_b_check(config: &RingConfiguration) -> Result<bool> {
    region_b_report(config).map(|r| r.inside)
}

/// Whether the bodies and the central mass are in convex position: every
/// body lies in a closed half-plane through the centre.
pub fn is_convex_configuration(config: &RingConfiguration) -> bool {
    let mut t = config.thetas().to_vec();
    t.sort_by(f64::total_cmp);
    let wrap = t[0] + TAU - t[t.len() - 1];
    let widest = t.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max);
    widest >= PI - 1e-12
}

/// Relabels a convex configuration so the bodies run along the arc, with
/// the gap containing the central mass between the last body and the first.
/// Returns `None` for configurations that are not convex.
pub fn arc_ordered(config: &RingConfiguration) -> Option<RingConfiguration> {
    if !is_convex_configuration(config) {
        return None;
    }
    let mut t: Vec<f64> = config.thetas().iter().map(|&x| x.rem_euclid(TAU)).collect();
    t.sort_by(f64::total_cmp);
    let n = t.len();
    let start = (0..n)
        .max_by(|&a, &b| {
            let gap = |k: usize| (t[k] - t[(k + n - 1) % n]).rem_euclid(TAU);
            gap(a).total_cmp(&gap(b))
        })
        .unwrap_or(0);
    let ordered: Vec<f64> = (0..n).map(|k| t[(start + k) % n]).collect();
    RingConfiguration::new(ordered, config.exponent()).ok()
}

/// Membership in `{π/6 < θ₂ < π/3, θ₁ - θ₂ < π/3}` for the symmetric 1+5
/// angles `0 < θ₂ < θ₁`. Points with `θ₁ ≥ π/2` are outside.
pub fn region_c_check(theta1: f64, theta2: f64) -> Result<bool> {
    if !(theta1.is_finite() && theta2.is_finite()) || !(0.0 < theta2 && theta2 < theta1) {
        return Err(Error::Domain(format!("need 0 < θ₂ < θ₁, got θ₁ = {theta1}, θ₂ = {theta2}")));
    }
    if theta1 >= FRAC_PI_2 {
        return Ok(false);
    }
    Ok(FRAC_PI_6 < theta2 && theta2 < FRAC_PI_3 && theta1 - theta2 < FRAC_PI_3)
}

/// Both sides of
///
/// ```text
/// sin(a) r_b³ (1 - r_a³) - sin(b) r_a³ (1 - r_b³)
///   = 32 sin(a/2) sin(b/2) sin((b-a)/4) · B(a, b)
/// ```
///
/// with `B` from [`identity_bracket`].
pub fn lemma4_identity_check(t_ij: f64, t_kl: f64) -> (f64, f64) {
    let (ra, rb) = (chord_distance(t_ij), chord_distance(t_kl));
    let lhs = t_ij.sin() * rb.powi(3) * (1.0 - ra.powi(3)) - t_kl.sin() * ra.powi(3) * (1.0 - rb.powi(3));
    let rhs = 32.0 * (t_ij / 2.0).sin() * (t_kl / 2.0).sin() * ((t_kl - t_ij) / 4.0).sin() * identity_bracket(t_ij, t_kl);
    (lhs, rhs)
}

/// `8 sin²(a/2) sin²(b/2) cos((a+b)/2) cos((b-a)/4) + sin((a+b)/4)(1 + cos(a/2) cos(b/2))`,
/// positive for `a, b ∈ (0, π/2]`.
pub fn identity_bracket(a: f64, b: f64) -> f64 {
    let (sa, sb) = ((a / 2.0).sin(), (b / 2.0).sin());
    8.0 * sa * sa * sb * sb * ((a + b) / 2.0).cos() * ((b - a) / 4.0).cos()
        + ((a + b) / 4.0).sin() * (1.0 + (a / 2.0).cos() * (b / 2.0).cos())
}
