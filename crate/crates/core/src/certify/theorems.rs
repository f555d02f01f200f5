//! Certificates for the asymmetric-mass examples of the 1+4, 1+6 and 1+8 problems.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{
    certify_bracket, interval_chord, interval_f, interval_f_matrix, interval_pfaffian, Assertion,
    CertificateReport, CertifiedSign, Interval,
};
use crate::error::{Error, Result};
use crate::geometry::{f_raw, PotentialExponent, RingConfiguration};
use crate::linalg::pfaffian_cofactors;
use crate::solvers::pick_asymmetric_positive;
use crate::system::{build_f, mass_kernel, FamilyKind, DEFAULT_KERNEL_TOL};

/// Inputs of the 1+4 certificate. The configuration is
/// `(-θ₁, -θ₂, θ₂, θ₁)`, with `θ₂` located inside `bracket` by `f₁₂ + f₁₃ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ring4Params {
    pub theta1: Interval,
    pub alpha: Interval,
    pub bracket: Interval,
    pub max_depth: u32,
    pub s: f64,
}

impl Default for Ring4Params {
    fn default() -> Self {
        Ring4Params {
            theta1: Interval::PI / 6.0,
            alpha: Interval::point(-4.0),
            bracket: Interval::new(1.9, 2.0),
            max_depth: 30,
            s: 3.0,
        }
    }
}

pub fn certify_theorem1() -> Result<CertificateReport> {
    certify_theorem1_with(&Ring4Params::default())
}

pub fn certify_theorem1_with(p: &Ring4Params) -> Result<CertificateReport> {
    let (s, t1) = (p.s, p.theta1);
    let mut out = Vec::new();

    let f14 = interval_f(-t1 - t1, s)?;
    let r14 = interval_chord(-t1 - t1)?;
    let exact = f14.contains_zero() && f14.width() < 1e-12;
    let detail = if exact {
        format!("r14 = 2 sin(θ₁) encloses 1 ({r14}); f14 = 0")
    } else if f14.sign().is_certain() {
        format!("f14 certified nonzero ({f14})")
    } else {
        format!("f14 not resolved ({f14})")
    };
    out.push(Assertion::new("f14_zero", exact, Some(f14), detail));

    let g = |t: Interval| Ok(interval_f(t - t1, s)? + interval_f(-t1 - t, s)?);
    let root = match certify_bracket(g, p.bracket, p.max_depth) {
        Ok(r) => r,
        Err(e) => {
            out.push(Assertion::new("theta2_root", false, None, e.to_string()));
            return Ok(CertificateReport::new("thm1", out, None, Vec::new()));
        }
    };
    let t = root.enclosure;
    let window = Interval::new(1.9355, 1.9365);
    out.push(Assertion::new(
        "theta2_root",
        t.width() < 1e-6 && t.subset_of(window),
        Some(t),
        format!("f12 + f13 changes sign ({:?} to {:?}) after {} bisections", root.sign_lo, root.sign_hi, root.bisections),
    ));

    let thetas = [-t1, -t, t, t1];
    let f = interval_f_matrix(&thetas, s)?;
    let (f12, f23) = (f[0][1], f[1][2]);
    out.push(Assertion::new(
        "f12_value",
        f12.subset_of(Interval::new(-0.537, -0.535)),
        Some(f12),
        "f12 = -f13 within 0.001 of -0.536",
    ));
    out.push(Assertion::new(
        "f23_value",
        f23.subset_of(Interval::new(-0.566, -0.564)),
        Some(f23),
        "f23 within 0.001 of -0.565",
    ));

    let pf = interval_pfaffian(&thetas, s)?;
    out.push(Assertion::new(
        "pfaffian_zero",
        exact && pf.contains_zero(),
        Some(pf),
        "f12² - f13² + f14 f23 vanishes at the root since f14 = 0 and f12 = -f13",
    ));

    let alpha = p.alpha;
    let bound = f23.recip();
    out.push(Assertion::new(
        "alpha_range",
        alpha.hi < bound.lo,
        Some(bound),
        format!("v1 + α v2 > 0 for α < 1/f23; α = {alpha}"),
    ));

    // v1 + α v2 with v1 = (1, 0, 0, -1), v2 = (0, f12, f12, f23)
    let masses = vec![Interval::point(1.0), alpha * f12, alpha * f12, alpha * f23 - 1.0];
    let positive = masses.iter().all(|m| m.lo > 0.0);
    out.push(Assertion::new(
        "positive_masses",
        positive,
        None,
        format!("m = {}", fmt_intervals(&masses)),
    ));
    let diff = masses[0] - masses[3];
    out.push(Assertion::new(
        "asymmetric_masses",
        diff.sign().is_certain(),
        Some(diff),
        "m1 - m4 = 2 - α f23",
    ));

    let residual_ok = (0..4).all(|i| {
        let mut acc = Interval::point(0.0);
        for (j, m) in masses.iter().enumerate() {
            acc = acc + f[i][j] * *m;
        }
        acc.contains_zero()
    });
    out.push(Assertion::new(
        "kernel_residual",
        residual_ok,
        None,
        "every component of F m encloses 0",
    ));

    Ok(CertificateReport::new("thm1", out, Some(t), masses))
}

fn rat_pi(p: f64, q: f64) -> Interval {
    Interval::PI * p / q
}

/// The printed 1+8 brackets as certified enclosures of their rational-π endpoints.
pub fn ring8_brackets() -> [(Interval, Interval); 4] {
    [
        (rat_pi(61.0, 702.0), rat_pi(63.0, 725.0)),
        (rat_pi(95.0, 289.0), rat_pi(24.0, 73.0)),
        (rat_pi(32.0, 55.0), rat_pi(71.0, 122.0)),
        (rat_pi(91.0, 110.0), rat_pi(24.0, 29.0)),
    ]
}

fn mirror(free: &[Interval]) -> Vec<Interval> {
    free.iter().copied().chain(free.iter().rev().map(|t| -*t)).collect()
}

fn fmt_intervals(v: &[Interval]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Pfaffian sign change and a certified positive asymmetric kernel vector
/// for the type-2 1+6 (`n = 6`) and 1+8 (`n = 8`) examples.
pub fn certify_theorem4(n: usize) -> Result<CertificateReport> {
    let s = 3.0;
    let mut out = Vec::new();
    let (fixed, bracket, target) = match n {
        6 => {
            let fixed = vec![Interval::PI / 8.0, rat_pi(3.0, 7.0)];
            let bracket = Interval::new(rat_pi(4.0, 5.0).hi, rat_pi(13.0, 16.0).lo);
            (fixed, bracket, "thm4n6")
        }
        8 => {
            let b = ring8_brackets();
            let mut fixed = Vec::new();
            let mut inside = true;
            for (lo, hi) in &b[..3] {
                let mid = 0.5 * (lo.mid() + hi.mid());
                inside &= lo.hi < mid && mid < hi.lo;
                fixed.push(Interval::point(mid));
            }
            out.push(Assertion::new(
                "box_membership",
                inside,
                None,
                format!("θ1..θ3 fixed at bracket midpoints {}", fmt_intervals(&fixed)),
            ));
            let box_free: Vec<Interval> = b.iter().map(|(lo, hi)| Interval::new(lo.lo, hi.hi)).collect();
            let whole = interval_pfaffian(&mirror(&box_free), s)?;
            out.push(Assertion::new(
                "box_pfaffian_encloses_zero",
                whole.contains_zero(),
                Some(whole),
                "Pfaffian enclosure over the printed box",
            ));
            (fixed, Interval::new(b[3].0.hi, b[3].1.lo), "thm4n8")
        }
        4 => return Err(Error::Domain("the 1+4 example is certified by certify_theorem1".into())),
        other => return Err(Error::Domain(format!("no certificate for N = {other}; use 6 or 8"))),
    };

    let free_with = |t: Interval| {
        let mut v = fixed.clone();
        v.push(t);
        mirror(&v)
    };
    let g = |t: Interval| interval_pfaffian(&free_with(t), s);
    let root = match certify_bracket(g, bracket, 40) {
        Ok(r) => r,
        Err(e) => {
            out.push(Assertion::new("pfaffian_sign_change", false, Some(bracket), e.to_string()));
            return Ok(CertificateReport::new(target, out, None, Vec::new()));
        }
    };
    let t = root.enclosure;
    out.push(Assertion::new(
        "pfaffian_sign_change",
        true,
        Some(bracket),
        format!("Pfaffian {:?} at the lower end, {:?} at the upper end", root.sign_lo, root.sign_hi),
    ));
    let located = if n == 6 {
        (t.lo - 2.5349).abs() <= 5e-4 && (t.hi - 2.5349).abs() <= 5e-4
    } else {
        t.subset_of(bracket)
    };
    out.push(Assertion::new("root_location", located, Some(t), "certified zero of the Pfaffian"));

    let masses = certified_kernel_masses(&free_with(t), s, n);
    let (ok, detail, masses) = match masses {
        Ok((m, detail)) => {
            let positive = m.iter().all(|x| x.lo > 0.0);
            let asym = certified_asymmetry(&m, n);
            (positive && asym, detail, m)
        }
        Err(e) => (false, e.to_string(), Vec::new()),
    };
    out.push(Assertion::new("positive_asymmetric_mass", ok, None, detail));
    Ok(CertificateReport::new(target, out, Some(t), masses))
}

fn certified_asymmetry(m: &[Interval], n: usize) -> bool {
    (0..n / 2).any(|i| {
        let (a, b) = (m[i], m[n - 1 - i]);
        let d = (a - b).abs();
        d.lo > 1e-3 * a.hi.max(b.hi)
    })
}

/// Kernel masses as a fixed combination of Pfaffian cofactor columns.
///
/// `F C = Pf(F) I`, so at the exact Pfaffian zero every cofactor column is
/// a kernel vector. The combination coefficients come from a floating-point
/// positive asymmetric kernel vector; the resulting mass vector is then
/// enclosed over the whole root interval.
fn certified_kernel_masses(thetas: &[Interval], s: f64, n: usize) -> Result<(Vec<Interval>, String)> {
    let mid: Vec<f64> = thetas.iter().map(|t| t.mid()).collect();
    let config = RingConfiguration::new(mid.clone(), PotentialExponent::new(s)?)?;
    let kernel = mass_kernel(&build_f(&config), DEFAULT_KERNEL_TOL)?;
    if kernel.dimension() != 2 {
        return Err(Error::CertificationFailed(format!(
            "numerical kernel dimension {} at the root",
            kernel.dimension()
        )));
    }
    let kind = if n == 6 { FamilyKind::Type2Ring6 } else { FamilyKind::Type2Ring8 };
    let m0 = pick_asymmetric_positive(&kernel.vectors, &kind.mirror_pairs())
        .ok_or(Error::NoPositiveMass)?;

    let fpt = |i: usize, j: usize| f_raw(mid[i] - mid[j], s);
    let mut c = DMatrix::zeros(n, n);
    for row in 0..n {
        let col = pfaffian_cofactors(n, row, &fpt)?;
        c.set_column(row, &DVector::from_vec(col));
    }
    let coeffs = c
        .svd(true, true)
        .solve(&m0, 1e-10)
        .map_err(|e| Error::CertificationFailed(e.to_string()))?;

    let fi = interval_f_matrix(thetas, s)?;
    let mut masses = vec![Interval::point(0.0); n];
    for (row, &a) in coeffs.iter().enumerate() {
        let col = pfaffian_cofactors(n, row, &|i, j| fi[i][j])?;
        for (k, v) in col.into_iter().enumerate() {
            masses[k] = masses[k] + v * a;
        }
    }
    let sign = masses.iter().map(|m| m.sign()).collect::<Vec<CertifiedSign>>();
    Ok((masses.clone(), format!("cofactor combination; component signs {sign:?}; m = {}", fmt_intervals(&masses))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring4_certificate_passes() {
        let r = certify_theorem1().unwrap();
        assert!(r.passed, "{r:#?}");
        let t = r.root.unwrap();
        assert!(t.lo >= 1.9355 && t.hi <= 1.9365);
    }

    #[test]
    fn perturbed_theta1_loses_exact_zero() {
        let p = Ring4Params { theta1: Interval::PI / 6.0 + 0.05, ..Default::default() };
        let r = certify_theorem1_with(&p).unwrap();
        assert!(!r.passed);
        let a = r.assertion("f14_zero").unwrap();
        assert!(!a.passed);
        assert!(a.enclosure.unwrap().sign().is_certain());
    }

    #[test]
    fn symmetric_alpha_breaks_asymmetry() {
        let base = certify_theorem1().unwrap();
        let f23 = base.assertion("f23_value").unwrap().enclosure.unwrap();
        let p = Ring4Params { alpha: 2.0 / f23, ..Default::default() };
        let r = certify_theorem1_with(&p).unwrap();
        assert!(!r.assertion("asymmetric_masses").unwrap().passed);
    }

    #[test]
    fn ring_certificate_rejects_other_sizes() {
        assert!(matches!(certify_theorem4(4), Err(Error::Domain(_))));
        assert!(matches!(certify_theorem4(10), Err(Error::Domain(_))));
    }
}
