//! Pfaffian zero sets and solutions inside reflection-symmetric families.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::newton::{solve_family_newton, NewtonOptions};
use crate::error::{Error, Result};
use crate::geometry::{MassVector, PotentialExponent, RingConfiguration};
use crate::system::{
    alpha_interval, build_f, expand_family, mass_kernel, pfaffian, AlphaInterval, FamilyKind,
    SymmetricFamily, DEFAULT_KERNEL_TOL,
};

/// Pfaffian of `F` on the configuration of an even-N family.
pub fn pfaffian_on_family(kind: FamilyKind, free: &[f64], s: PotentialExponent) -> Result<f64> {
    if kind.bodies() % 2 == 1 {
        return Err(Error::OddDimension(kind.bodies()));
    }
    let c = expand_family(&SymmetricFamily::new(kind, free.to_vec()), s)?;
    pfaffian(&build_f(&c))
}

fn normalized(v: DVector<f64>) -> DVector<f64> {
    let top = v.amax();
    v / top
}

/// Relative mirror-pair asymmetry of a mass vector.
pub fn mirror_asymmetry(m: &DVector<f64>, pairs: &[(usize, usize)]) -> f64 {
    pairs
        .iter()
        .map(|&(i, j)| (m[i] - m[j]).abs() / m[i].abs().max(m[j].abs()))
        .fold(0.0, f64::max)
}

fn candidates(iv: AlphaInterval) -> Vec<f64> {
    let (lo, hi) = match (iv.lo.is_finite(), iv.hi.is_finite()) {
        (true, true) => (iv.lo, iv.hi),
        (true, false) => (iv.lo, iv.lo + 4.0 * iv.lo.abs().max(1.0)),
        (false, true) => (iv.hi - 4.0 * iv.hi.abs().max(1.0), iv.hi),
        (false, false) => (-4.0, 4.0),
    };
    (1..64).map(|k| lo + (hi - lo) * k as f64 / 64.0).collect()
}

/// A strictly positive vector in the span of a two-dimensional kernel whose
/// mirror pairs differ by more than 1e-2 (relative), chosen to keep the
/// smallest component as large as possible. Normalized to `max = 1`.
pub fn pick_asymmetric_positive(vectors: &[DVector<f64>], pairs: &[(usize, usize)]) -> Option<DVector<f64>> {
    let [v1, v2] = vectors else { return None };
    let mut best: Option<(f64, DVector<f64>)> = None;
    for sign in [1.0, -1.0] {
        let (a, b) = (v1 * sign, v2 * sign);
        let Some(iv) = alpha_interval(&a, &b) else { continue };
        for alpha in candidates(iv) {
            let m = &a + &b * alpha;
            if m.iter().any(|&x| x <= 0.0) {
                continue;
            }
            let m = normalized(m);
            if mirror_asymmetry(&m, pairs) <= 1e-2 {
                continue;
            }
            let score = m.min();
            if best.as_ref().is_none_or(|(s, _)| score > *s) {
                best = Some((score, m));
            }
        }
    }
    best.map(|(_, m)| m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetricSolution {
    pub kind: FamilyKind,
    pub free_angles: Vec<f64>,
    pub thetas: Vec<f64>,
    pub masses: Vec<f64>,
    pub residual: f64,
    pub asymmetry: f64,
    pub pfaffian: f64,
}

/// Moves the last free angle onto the Pfaffian zero set near the seed,
/// then extracts a positive kernel mass vector that breaks the mirror symmetry.
pub fn find_asymmetric_positive(
    kind: FamilyKind,
    seed: &[f64],
    s: PotentialExponent,
) -> Result<AsymmetricSolution> {
    kind.check_free_angles(seed)?;
    let last = seed.len() - 1;
    let pf = |t: f64| {
        let mut x = seed.to_vec();
        x[last] = t;
        pfaffian_on_family(kind, &x, s)
    };
    let t0 = seed[last];
    let p0 = pf(t0)?;
    let mut root = t0;
    if p0 != 0.0 {
        let mut bracket = None;
        let mut step = 1e-4;
        'search: while step < 0.5 {
            for t in [t0 + step, t0 - step] {
                if let Ok(p) = pf(t) {
                    if p.signum() != p0.signum() {
                        bracket = Some(if t > t0 { (t0, t, p0) } else { (t, t0, p) });
                        break 'search;
                    }
                }
            }
            step *= 2.0;
        }
        let (mut a, mut b, pa) = bracket.ok_or(Error::NonConvergence { iterations: 0, residual: p0.abs() })?;
        while b - a > 1e-15 * b.abs().max(1.0) {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let pm = pf(mid)?;
            if pm == 0.0 {
                a = mid;
                b = mid;
                break;
            }
            if pm.signum() == pa.signum() {
                a = mid;
            } else {
                b = mid;
            }
        }
        root = if pf(a)?.abs() <= pf(b)?.abs() { a } else { b };
    }
    let mut free = seed.to_vec();
    free[last] = root;
    let config = expand_family(&SymmetricFamily::new(kind, free.clone()), s)?;
    let f = build_f(&config);
    let kernel = mass_kernel(&f, DEFAULT_KERNEL_TOL)?;
    let pairs = kind.mirror_pairs();
    let m = match kernel.dimension() {
        2 => pick_asymmetric_positive(&kernel.vectors, &pairs),
        _ => None,
    }
    .ok_or(Error::NoPositiveMass)?;
    let masses = MassVector::from(&m);
    let residual = f.residual_inf(&masses)?;
    Ok(AsymmetricSolution {
        kind,
        free_angles: free,
        thetas: config.thetas().to_vec(),
        asymmetry: mirror_asymmetry(&m, &pairs),
        masses: m.iter().copied().collect(),
        residual,
        pfaffian: pfaffian(&f)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySolution {
    pub seed_index: usize,
    pub free_angles: Vec<f64>,
    pub thetas: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedFailure {
    pub seed_index: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySolveReport {
    pub kind: FamilyKind,
    pub solutions: Vec<FamilySolution>,
    pub failures: Vec<SeedFailure>,
}

/// Checks that `m` is invariant under the family's reflection.
pub fn check_family_masses(kind: FamilyKind, m: &MassVector) -> Result<()> {
    m.check_len(kind.bodies())?;
    let mm = m.as_slice();
    for (i, j) in kind.mirror_pairs() {
        if (mm[i] - mm[j]).abs() > 1e-12 * mm[i].abs().max(mm[j].abs()) {
            return Err(Error::Domain(format!(
                "masses must satisfy m{} = m{} for {}",
                i + 1,
                j + 1,
                kind
            )));
        }
    }
    Ok(())
}

/// Sorted reduced angles of a configuration and of its mirror image.
fn canonical_keys(thetas: &[f64]) -> [Vec<f64>; 2] {
    let key = |sign: f64| {
        let mut v: Vec<f64> = thetas
            .iter()
            .map(|t| crate::geometry::reduce_angle(sign * t))
            .collect();
        v.sort_by(f64::total_cmp);
        v
    };
    [key(1.0), key(-1.0)]
}

fn circle_close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            let d = (x - y).abs();
            d.min(std::f64::consts::TAU - d) < tol
        })
}

/// Damped Newton from every seed (in parallel), deduplicated within 1e-8
/// modulo reflection. Seeds that fail are reported, not fatal.
pub fn solve_symmetric_family(
    kind: FamilyKind,
    m: &MassVector,
    seeds: &[Vec<f64>],
    s: PotentialExponent,
    opts: &NewtonOptions,
) -> Result<FamilySolveReport> {
    check_family_masses(kind, m)?;
    let results: Vec<Result<FamilySolution>> = seeds
        .par_iter()
        .enumerate()
        .map(|(k, seed)| {
            let out = solve_family_newton(kind, seed, m, s, opts)?;
            let c = RingConfiguration::new(kind.expand_unchecked(&out.thetas), s)?;
            Ok(FamilySolution {
                seed_index: k,
                free_angles: out.thetas,
                thetas: c.thetas().to_vec(),
                residual: out.residual,
                iterations: out.iterations,
            })
        })
        .collect();
    let mut solutions: Vec<FamilySolution> = Vec::new();
    let mut failures = Vec::new();
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok(sol) => {
                let keys = canonical_keys(&sol.thetas);
                let dup = solutions.iter().any(|prev| {
                    let pk = canonical_keys(&prev.thetas);
                    circle_close(&pk[0], &keys[0], 1e-8) || circle_close(&pk[0], &keys[1], 1e-8)
                });
                if !dup {
                    solutions.push(sol);
                }
            }
            Err(e) => failures.push(SeedFailure { seed_index: k, message: e.to_string() }),
        }
    }
    Ok(FamilySolveReport { kind, solutions, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    const S3: PotentialExponent = PotentialExponent::NEWTONIAN;

    #[test]
    fn square_pfaffian_is_zero() {
        let p = pfaffian_on_family(FamilyKind::Type2Ring4, &[3.0 * FRAC_PI_4, FRAC_PI_4], S3).unwrap();
        assert!(p.abs() < 1e-10);
        assert!(matches!(
            pfaffian_on_family(FamilyKind::Symmetric5, &[1.0, 0.5], S3),
            Err(Error::OddDimension(5))
        ));
    }

    #[test]
    fn asymmetric_1p4_example() {
        let sol = find_asymmetric_positive(FamilyKind::Type2Ring4, &[FRAC_PI_6, 1.936], S3).unwrap();
        assert!(sol.residual < 1e-10);
        assert!(sol.masses.iter().all(|&m| m > 0.0));
        assert!(sol.asymmetry > 1e-3);
        assert!((sol.free_angles[1] - 1.936_257_557_946_162).abs() < 1e-9);
    }

    #[test]
    fn asymmetric_1p6_example() {
        let seed = [std::f64::consts::PI / 8.0, 3.0 * std::f64::consts::PI / 7.0, 2.5349];
        let sol = find_asymmetric_positive(FamilyKind::Type2Ring6, &seed, S3).unwrap();
        assert!(sol.residual < 1e-10);
        assert!(sol.masses.iter().all(|&m| m > 0.0));
        assert!(sol.asymmetry > 1e-3);
        assert!((sol.free_angles[2] - 2.534_901_936_230_425).abs() < 1e-8);
    }

    #[test]
    fn symmetric_masses_are_required() {
        let m = MassVector::new(vec![1.0, 2.0, 1.0, 1.0]);
        assert!(check_family_masses(FamilyKind::Type2Ring4, &m).is_err());
        assert!(check_family_masses(FamilyKind::Type2Ring4, &MassVector::new(vec![1.0, 2.0, 2.0, 1.0])).is_ok());
    }

    #[test]
    fn duplicate_seeds_collapse() {
        let seeds = vec![vec![2.3, 0.8], vec![2.31, 0.79], vec![-2.3, -0.8]];
        let r = solve_symmetric_family(
            FamilyKind::Type2Ring4,
            &MassVector::equal(4),
            &seeds,
            S3,
            &NewtonOptions::default(),
        )
        .unwrap();
        assert!(r.solutions.len() + r.failures.len() <= 3);
        assert!(r.solutions.len() <= 1 || r.failures.is_empty());
    }
}
