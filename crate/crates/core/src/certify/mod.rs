//! Interval-certified versions of the computer-assisted claims.
//!
//! Everything here evaluates the same formulas as the floating-point code
//! but on [`Interval`]s, so a certified sign or inclusion is a proof about
//! the exact real-number quantity.

mod interval;
mod region;
mod theorems;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

pub use interval::{CertifiedSign, Interval};
pub use region::{
    certify_det_h2_region, classify_box, region_c_area, BoxOutcome, BoxRecord, CoverageReport,
    MassStrategy, RegionOptions,
};
pub use theorems::{
    certify_theorem1, certify_theorem1_with, certify_theorem4, ring8_brackets,
    Ring4Params,
};

/// Enclosure of the chord `2|sin(δ/2)|`; collision error when it may vanish.
pub fn interval_chord(delta: Interval) -> Result<Interval> {
    let half = (delta * 0.5).sin();
    if half.contains_zero() {
        return Err(Error::Collision { separation: 0.0 });
    }
    Ok(half.abs() * 2.0)
}

/// Enclosure of `f(δ) = sin δ (r^{-s} - 1)` over `delta`.
pub fn interval_f(delta: Interval, s: f64) -> Result<Interval> {
    let r = interval_chord(delta)?;
    Ok(delta.sin() * (r.powf(-s) - 1.0))
}

/// Enclosure of `h(δ) = r²/2 - 1 + (s-2)/(4 r^{s-2}) - (s-1)/r^s`.
pub fn interval_h(delta: Interval, s: f64) -> Result<Interval> {
    let r = interval_chord(delta)?;
    let mut out = r.sqr() * 0.5 - 1.0 - (s - 1.0) * r.powf(-s);
    if s != 2.0 {
        out = out + (s - 2.0) * 0.25 * r.powf(2.0 - s);
    }
    Ok(out)
}

/// Interval Pfaffian of the antisymmetric matrix with `F_ij = f(θ_i - θ_j)`.
pub fn interval_pfaffian(thetas: &[Interval], s: f64) -> Result<Interval> {
    let f = interval_f_matrix(thetas, s)?;
    linalg::pfaffian_with(thetas.len(), &|i, j| f[i][j])
}

/// Upper-triangular `f` enclosures (lower part mirrored with a sign flip).
pub fn interval_f_matrix(thetas: &[Interval], s: f64) -> Result<Vec<Vec<Interval>>> {
    let n = thetas.len();
    let mut f = vec![vec![Interval::point(0.0); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = interval_f(thetas[i] - thetas[j], s)?;
            f[i][j] = v;
            f[j][i] = -v;
        }
    }
    Ok(f)
}

/// A certified root bracket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootEnclosure {
    pub enclosure: Interval,
    pub sign_lo: CertifiedSign,
    pub sign_hi: CertifiedSign,
    pub bisections: u32,
}

/// Certified bisection.
///
/// Signs are certified at point evaluations of the endpoints, and `g` is
/// evaluated once over the whole bracket so that any singularity inside it
/// surfaces as an error. The returned enclosure has certified opposite
/// signs at its endpoints, so it contains a root by continuity. Bisection
/// stops early once no split point has a certified sign.
pub fn certify_bracket<G>(g: G, bracket: Interval, max_depth: u32) -> Result<RootEnclosure>
where
    G: Fn(Interval) -> Result<Interval>,
{
    g(bracket).map_err(|e| Error::Inconclusive(format!("bracket evaluation failed: {e}")))?;
    let sign_at = |x: f64| g(Interval::point(x)).map(|v| v.sign());
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (sa, sb) = (sign_at(a)?, sign_at(b)?);
    if !sa.is_certain() || !sb.is_certain() || sa == sb {
        return Err(Error::Inconclusive(format!(
            "no certified sign change on {bracket}: {sa:?} / {sb:?}"
        )));
    }
    let target = bracket.width() * 0.5f64.powi(max_depth.min(1000) as i32);
    let mut bisections = 0;
    const SPLITS: [f64; 7] = [0.5, 0.4375, 0.5625, 0.375, 0.625, 0.3125, 0.6875];
    'outer: while b - a > target {
        for t in SPLITS {
            let m = a + (b - a) * t;
            if m <= a || m >= b {
                break 'outer;
            }
            let sm = sign_at(m)?;
            if !sm.is_certain() {
                continue;
            }
            if sm == sa {
                a = m;
            } else {
                b = m;
            }
            bisections += 1;
            continue 'outer;
        }
        // rounding noise dominates near the root; the current bracket stands
        break;
    }
    Ok(RootEnclosure { enclosure: Interval::new(a, b), sign_lo: sa, sign_hi: sb, bisections })
}

/// One checked claim of a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub enclosure: Option<Interval>,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: &str, passed: bool, enclosure: Option<Interval>, detail: impl Into<String>) -> Self {
        Assertion { name: name.to_string(), passed, enclosure, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub target: String,
    pub passed: bool,
    pub assertions: Vec<Assertion>,
    /// Certified enclosure of the located angle.
    pub root: Option<Interval>,
    /// Certified enclosures of a positive mass vector (unnormalized).
    pub masses: Vec<Interval>,
}

impl CertificateReport {
    pub fn new(target: &str, assertions: Vec<Assertion>, root: Option<Interval>, masses: Vec<Interval>) -> Self {
        let passed = !assertions.is_empty() && assertions.iter().all(|a| a.passed);
        CertificateReport { target: target.to_string(), passed, assertions, root, masses }
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }

    pub fn into_result(self) -> Result<Self> {
        if self.passed {
            Ok(self)
        } else {
            let failed: Vec<&str> =
                self.assertions.iter().filter(|a| !a.passed).map(|a| a.name.as_str()).collect();
            Err(Error::CertificationFailed(format!("{}: {}", self.target, failed.join(", "))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{f_raw, h_raw};

    #[test]
    fn f_at_third_of_pi_is_tiny_and_contains_zero() {
        let v = interval_f(Interval::PI / 3.0, 3.0).unwrap();
        assert!(v.contains_zero());
        assert!(v.width() < 1e-14);
    }

    #[test]
    fn f_and_h_enclose_point_values() {
        for &d in &[0.3, -1.2, 2.0, 3.1, -2.9, 5.0] {
            for &s in &[2.0, 2.5, 3.0] {
                assert!(interval_f(Interval::point(d), s).unwrap().contains(f_raw(d, s)));
                assert!(interval_h(Interval::point(d), s).unwrap().contains(h_raw(d, s)));
            }
        }
    }

    #[test]
    fn f_rejects_collision_intervals() {
        assert!(interval_f(Interval::new(-0.1, 0.1), 3.0).is_err());
        assert!(interval_f(Interval::new(6.2, 6.4), 3.0).is_err());
    }

    #[test]
    fn bracket_finds_known_zero() {
        let g = |t: Interval| interval_f(t, 3.0);
        let r = certify_bracket(g, Interval::new(1.0, 1.1), 40).unwrap();
        assert!(r.enclosure.contains(std::f64::consts::FRAC_PI_3));
        assert!(r.enclosure.width() < 1e-12);
    }

    #[test]
    fn bracket_without_sign_change_is_inconclusive() {
        let g = |t: Interval| interval_f(t, 3.0);
        assert!(matches!(
            certify_bracket(g, Interval::new(1.2, 1.5), 20),
            Err(Error::Inconclusive(_))
        ));
    }

    #[test]
    fn report_pass_flag() {
        let ok = CertificateReport::new("x", vec![Assertion::new("a", true, None, "")], None, vec![]);
        assert!(ok.passed && ok.clone().into_result().is_ok());
        let bad = CertificateReport::new(
            "x",
            vec![Assertion::new("a", true, None, ""), Assertion::new("b", false, None, "")],
            None,
            vec![],
        );
        assert!(matches!(bad.into_result(), Err(Error::CertificationFailed(_))));
    }
}
