//! Ring geometry and the effective potential.
//!
//! Bodies live on the unit circle at angles `θ_i`. For a pair with angular
//! difference `δ` the chord length is `r = 2|sin(δ/2)|` and the kernel
//! function is `f(δ) = sin(δ)(r^{-s} - 1)`. The effective potential has
//! angular gradient `∂V/∂θ_i = -m_i Σ_j m_j f(θ_i - θ_j)` and its Hessian
//! has off-diagonal entries `m_i m_j h(θ_i - θ_j)` with `h = f'`.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pairwise separations below this (radians) are collisions.
pub const COLLISION_THRESHOLD: f64 = 1e-9;

/// Reduces an angle to `[0, 2π)`.
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can round up to TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduces an angular difference to `(-π, π]`.
pub fn reduce_difference(delta: f64) -> f64 {
    let r = reduce_angle(delta);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Exponent `s` of the homogeneous interaction; `s = 2` is the vortex case.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PotentialExponent(f64);

impl PotentialExponent {
    pub const NEWTONIAN: PotentialExponent = PotentialExponent(3.0);
    pub const VORTEX: PotentialExponent = PotentialExponent(2.0);

    pub fn new(s: f64) -> Result<Self> {
        if s.is_finite() && s >= 2.0 {
            Ok(PotentialExponent(s))
        } else {
            Err(Error::InvalidExponent(s))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_vortex(self) -> bool {
        self.0 == 2.0
    }
}

impl TryFrom<f64> for PotentialExponent {
    type Error = Error;
    fn try_from(s: f64) -> Result<Self> {
        PotentialExponent::new(s)
    }
}

impl From<PotentialExponent> for f64 {
    fn from(s: PotentialExponent) -> f64 {
        s.0
    }
}

/// N labelled bodies on the unit circle.
///
/// Angles are stored reduced to `[0, 2π)`; labels keep their input order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RingConfiguration {
    thetas: Vec<f64>,
    s: PotentialExponent,
}

impl RingConfiguration {
    pub fn new(thetas: Vec<f64>, s: PotentialExponent) -> Result<Self> {
        if thetas.len() < 2 {
            return Err(Error::TooFewBodies(thetas.len()));
        }
        if let Some(&bad) = thetas.iter().find(|t| !t.is_finite()) {
            return Err(Error::NonFiniteAngle(bad));
        }
        let thetas: Vec<f64> = thetas.into_iter().map(reduce_angle).collect();
        let config = RingConfiguration { thetas, s };
        let sep = config.min_separation();
        if sep < COLLISION_THRESHOLD {
            return Err(Error::Collision { separation: sep });
        }
        Ok(config)
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    /// Angles mapped to `(-π, π]`, convenient for configurations centred on the axis.
    pub fn signed_thetas(&self) -> Vec<f64> {
        self.thetas.iter().map(|&t| reduce_difference(t)).collect()
    }

    pub fn exponent(&self) -> PotentialExponent {
        self.s
    }

    /// `θ_i - θ_j` reduced to `(-π, π]`.
    pub fn difference(&self, i: usize, j: usize) -> f64 {
        reduce_difference(self.thetas[i] - self.thetas[j])
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        chord_distance(self.thetas[i] - self.thetas[j])
    }

    /// Smallest pairwise angular separation.
    pub fn min_separation(&self) -> f64 {
        let n = self.thetas.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in (i + 1)..n {
                best = best.min(self.difference(i, j).abs());
            }
        }
        best
    }

    /// Same configuration rotated by `c`.
    pub fn rotated(&self, c: f64) -> Result<Self> {
        RingConfiguration::new(self.thetas.iter().map(|t| t + c).collect(), self.s)
    }

    /// Body `k` of the result is body `perm[k]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: perm.len() });
        }
        RingConfiguration::new(perm.iter().map(|&k| self.thetas[k]).collect(), self.s)
    }

    pub fn with_exponent(&self, s: PotentialExponent) -> Self {
        RingConfiguration { thetas: self.thetas.clone(), s }
    }
}

/// The N small masses. No sign restriction: kernel vectors may be mixed-sign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MassVector(Vec<f64>);

impl MassVector {
    pub fn new(m: Vec<f64>) -> Self {
        MassVector(m)
    }

    pub fn equal(n: usize) -> Self {
        MassVector(vec![1.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&x| x > 0.0)
    }

    /// First non-positive entry, if any.
    pub fn require_positive(&self) -> Result<()> {
        match self.0.iter().enumerate().find(|(_, &x)| !(x > 0.0)) {
            Some((index, &value)) => Err(Error::NonPositiveMass { index, value }),
            None => Ok(()),
        }
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.0.len() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: n, found: self.0.len() })
        }
    }

    pub fn to_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.0)
    }

    /// Largest relative difference `|m_a - m_b| / max(|m_a|, |m_b|)` over the given pairs.
    pub fn pair_asymmetry(&self, pairs: &[(usize, usize)]) -> f64 {
        pairs
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (self.0[a], self.0[b]);
                let scale = x.abs().max(y.abs());
                if scale == 0.0 {
                    0.0
                } else {
                    (x - y).abs() / scale
                }
            })
            .fold(0.0, f64::max)
    }
}

impl From<Vec<f64>> for MassVector {
    fn from(m: Vec<f64>) -> Self {
        MassVector(m)
    }
}

impl From<&DVector<f64>> for MassVector {
    fn from(m: &DVector<f64>) -> Self {
        MassVector(m.iter().copied().collect())
    }
}

/// Chord length `2|sin(δ/2)|` between two points of the unit circle.
pub fn chord_distance(delta: f64) -> f64 {
    2.0 * (reduce_difference(delta) / 2.0).sin().abs()
}

fn check_separation(delta: f64) -> Result<f64> {
    let d = reduce_difference(delta);
    if d.abs() < COLLISION_THRESHOLD {
        Err(Error::Collision { separation: d.abs() })
    } else {
        Ok(d)
    }
}

/// `f` without the collision check; the caller guarantees separation.
pub(crate) fn f_raw(delta: f64, s: f64) -> f64 {
    let d = reduce_difference(delta);
    let r = 2.0 * (d / 2.0).sin().abs();
    d.sin() * (r.powf(-s) - 1.0)
}

/// `h = f'` in distance form, without the collision check.
pub(crate) fn h_raw(delta: f64, s: f64) -> f64 {
    let r = chord_distance(delta);
    r * r / 2.0 - 1.0 + (s - 2.0) / (4.0 * r.powf(s - 2.0)) - (s - 1.0) / r.powf(s)
}

/// Kernel function `f(δ) = sin δ (r^{-s} - 1)`; odd and 2π-periodic.
pub fn f_value(delta: f64, s: PotentialExponent) -> Result<f64> {
    let d = check_separation(delta)?;
    Ok(f_raw(d, s.value()))
}

/// Pair Hessian factor `h(δ) = r²/2 - 1 + (s-2)/(4 r^{s-2}) - (s-1)/r^s`.
pub fn hessian_entry(delta: f64, s: PotentialExponent) -> Result<f64> {
    let d = check_separation(delta)?;
    Ok(h_raw(d, s.value()))
}

/// Trigonometric form of [`hessian_entry`]:
/// `-cos δ - (s + (s-2) cos δ) / (2^{s+1} |sin(δ/2)|^s)`.
pub fn hessian_entry_trig(delta: f64, s: PotentialExponent) -> Result<f64> {
    let d = check_separation(delta)?;
    let s = s.value();
    let c = d.cos();
    Ok(-c - (s + (s - 2.0) * c) / (2f64.powf(s + 1.0) * (d / 2.0).sin().abs().powf(s)))
}

/// Pair term of the potential as a function of the chord length.
fn pair_potential(r: f64, s: f64) -> f64 {
    if s == 2.0 {
        // logarithmic limit of r^{2-s}/(s-2): its angular derivative is -f
        r * r / 2.0 - r.ln()
    } else {
        1.0 / ((s - 2.0) * r.powf(s - 2.0)) + r * r / 2.0
    }
}

/// Hall's effective potential `V = Σ_{i<j} m_i m_j φ(r_ij)`.
pub fn hall_potential(config: &RingConfiguration, m: &MassVector) -> Result<f64> {
    m.check_len(config.len())?;
    let s = config.exponent().value();
    let w = m.as_slice();
    let n = config.len();
    let mut v = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            v += w[i] * w[j] * pair_potential(config.distance(i, j), s);
        }
    }
    Ok(v)
}

/// Angular gradient `∂V/∂θ_i = -m_i Σ_{j≠i} m_j f(θ_i - θ_j)`.
pub fn potential_gradient(config: &RingConfiguration, m: &MassVector) -> Result<DVector<f64>> {
    m.check_len(config.len())?;
    let s = config.exponent().value();
    let w = m.as_slice();
    let n = config.len();
    let mut g = DVector::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let f = f_raw(config.difference(i, j), s);
            g[i] -= w[i] * w[j] * f;
            g[j] += w[i] * w[j] * f;
        }
    }
    Ok(g)
}

/// Hessian of `V` in the angles; symmetric with zero row sums.
pub fn hessian(config: &RingConfiguration, m: &MassVector) -> Result<DMatrix<f64>> {
    m.check_len(config.len())?;
    let s = config.exponent().value();
    let w = m.as_slice();
    let n = config.len();
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = w[i] * w[j] * h_raw(config.difference(i, j), s);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    for i in 0..n {
        let off = crate::linalg::compensated_sum((0..n).filter(|&j| j != i).map(|j| h[(i, j)]));
        h[(i, i)] = -off;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, SQRT_2};

    const S3: PotentialExponent = PotentialExponent::NEWTONIAN;
    const S2: PotentialExponent = PotentialExponent::VORTEX;

    #[test]
    fn exponent_below_two_is_rejected() {
        assert!(PotentialExponent::new(1.9).is_err());
        assert!(PotentialExponent::new(f64::NAN).is_err());
        assert!(PotentialExponent::new(2.0).is_ok());
    }

    #[test]
    fn chord_examples() {
        assert!((chord_distance(PI) - 2.0).abs() < 1e-15);
        assert!((chord_distance(FRAC_PI_3) - 1.0).abs() < 1e-15);
        assert!((chord_distance(FRAC_PI_2) - SQRT_2).abs() < 1e-15);
        assert!((chord_distance(-FRAC_PI_2 + 4.0 * PI) - SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn f_examples() {
        assert!(f_value(FRAC_PI_3, S3).unwrap().abs() < 1e-15);
        for s in [2.0, 2.5, 3.0, 7.0] {
            assert!(f_value(PI, PotentialExponent::new(s).unwrap()).unwrap().abs() < 1e-15);
        }
        // SQRT_2^-3 - 1
        assert!((f_value(FRAC_PI_2, S3).unwrap() - (-0.646_446_609_406_726_2)).abs() < 1e-15);
    }

    #[test]
    fn f_rejects_collision() {
        assert!(matches!(f_value(0.0, S3), Err(Error::Collision { .. })));
        assert!(matches!(f_value(TAU, S3), Err(Error::Collision { .. })));
    }

    #[test]
    fn hessian_entry_at_antipode() {
        // r = 2: 2 - 1 + (s-2)/8 - (s-1)/2^s
        assert!((hessian_entry(PI, S3).unwrap() - 0.875).abs() < 1e-15);
        assert!((hessian_entry(PI, S2).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn hessian_forms_agree() {
        for k in 1..200 {
            let d = -3.1 + 6.2 * k as f64 / 200.0;
            if d.abs() < 1e-3 {
                continue;
            }
            for s in [S2, PotentialExponent::new(2.5).unwrap(), S3] {
                let a = hessian_entry(d, s).unwrap();
                let b = hessian_entry_trig(d, s).unwrap();
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "d={d}");
            }
        }
    }

    #[test]
    fn potential_examples() {
        let two = RingConfiguration::new(vec![0.0, PI], S3).unwrap();
        let m = MassVector::equal(2);
        assert!((hall_potential(&two, &m).unwrap() - 2.5).abs() < 1e-14);
        let vortex = two.with_exponent(S2);
        assert!((hall_potential(&vortex, &m).unwrap() - (2.0 - 2f64.ln())).abs() < 1e-14);
        let tri = RingConfiguration::new(vec![0.0, TAU / 3.0, 2.0 * TAU / 3.0], S3).unwrap();
        let expected = 3.0 * (1.0 / 3f64.sqrt() + 1.5);
        assert!((hall_potential(&tri, &MassVector::equal(3)).unwrap() - expected).abs() < 1e-13);
    }

    #[test]
    fn gradient_examples() {
        for n in 2..9 {
            let ring: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
            let c = RingConfiguration::new(ring, S3).unwrap();
            let g = potential_gradient(&c, &MassVector::equal(n)).unwrap();
            assert!(g.amax() < 1e-13, "n={n}");
        }
        let c = RingConfiguration::new(vec![0.0, FRAC_PI_2], S3).unwrap();
        let g = potential_gradient(&c, &MassVector::equal(2)).unwrap();
        let expected = -f_value(-FRAC_PI_2, S3).unwrap();
        assert!((g[0] - expected).abs() < 1e-15);
        assert!((g[0] + 0.646_446_609_406_726_2).abs() < 1e-15);
        assert!((g[0] + g[1]).abs() < 1e-15);
    }

    #[test]
    fn two_body_hessian() {
        let c = RingConfiguration::new(vec![0.0, PI], S3).unwrap();
        let h = hessian(&c, &MassVector::equal(2)).unwrap();
        assert!((h[(0, 1)] - 0.875).abs() < 1e-15);
        assert!((h[(0, 0)] + 0.875).abs() < 1e-15);
        let ones = DVector::from_element(2, 1.0);
        assert!((h * ones).amax() < 1e-15);
    }

    #[test]
    fn configuration_rejects_bad_input() {
        assert_eq!(RingConfiguration::new(vec![1.0], S3), Err(Error::TooFewBodies(1)));
        assert!(matches!(
            RingConfiguration::new(vec![0.0, TAU], S3),
            Err(Error::Collision { .. })
        ));
        assert!(matches!(
            RingConfiguration::new(vec![0.0, f64::NAN], S3),
            Err(Error::NonFiniteAngle(_))
        ));
    }

    #[test]
    fn angles_are_reduced() {
        let c = RingConfiguration::new(vec![-FRAC_PI_2, 5.0 * PI], S3).unwrap();
        assert!((c.thetas()[0] - 1.5 * PI).abs() < 1e-15);
        assert!((c.thetas()[1] - PI).abs() < 1e-14);
        assert!((c.signed_thetas()[0] + FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn mass_predicates() {
        assert!(MassVector::new(vec![1.0, 2.0]).is_positive());
        assert!(!MassVector::new(vec![1.0, 0.0]).is_positive());
        assert_eq!(
            MassVector::new(vec![1.0, -1.0]).require_positive(),
            Err(Error::NonPositiveMass { index: 1, value: -1.0 })
        );
    }
}
