//! Hessian inertia, Morse index and the symmetric 1+5 block reduction.

use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{h_raw, hessian, MassVector, PotentialExponent, RingConfiguration};
use crate::linalg::{self, Inertia};
use crate::system::build_f;

/// Default relative cut below which an eigenvalue counts as zero.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-8;

/// Relative asymmetry accepted by [`inertia`].
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Scaled residual above which a stability report is flagged as not at a solution.
pub const RESIDUAL_WARNING: f64 = 1e-6;

/// Sign counts of a symmetric matrix; `|λ| <= tol * max|λ|` counts as zero.
pub fn inertia(s: &DMatrix<f64>, tol: f64) -> Result<Inertia> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch { expected: s.nrows(), found: s.ncols() });
    }
    let defect = linalg::symmetry_defect(s);
    if defect > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(defect));
    }
    Ok(Inertia::from_eigenvalues(&linalg::symmetric_eigenvalues(s), tol))
}

/// Eigenvalue counts of the linearized flow implied by the Morse index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearizationCounts {
    pub imaginary: usize,
    pub positive: usize,
    pub negative: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub n: usize,
    pub inertia_h: Inertia,
    /// Inertia of `M⁻¹H` from its own (real) eigenvalues.
    pub inertia_a: Inertia,
    pub inertia_consistent: bool,
    pub morse_index: usize,
    pub linearization_counts: LinearizationCounts,
    /// Morse index `N - 1` with a single (rotational) zero eigenvalue.
    pub is_linearly_stable_candidate: bool,
    /// `‖F m‖∞ / ‖m‖∞`.
    pub residual: f64,
    pub residual_warning: bool,
    pub hessian_eigenvalues: Vec<f64>,
}

impl StabilityReport {
    /// Re-checks the arithmetic identities the report is built from.
    pub fn is_self_consistent(&self) -> bool {
        let c = self.linearization_counts;
        self.inertia_h.total() == self.n
            && self.morse_index == self.inertia_h.negative
            && c.imaginary == 2 * self.morse_index
            && c.positive == self.n - self.morse_index
            && c.negative == self.n - self.morse_index
            && c.imaginary + c.positive + c.negative == 2 * self.n
    }
}

/// Inertia of `H` and of `M⁻¹H` for positive masses, with the derived
/// linearization counts.
pub fn lemma1_report(config: &RingConfiguration, m: &MassVector, tol: f64) -> Result<StabilityReport> {
    m.check_len(config.len())?;
    m.require_positive()?;
    let n = config.len();
    let h = hessian(config, m)?;
    let eig_h = linalg::symmetric_eigenvalues(&h);
    let inertia_h = Inertia::from_eigenvalues(&eig_h, tol);

    let mut a = h.clone();
    for (i, mi) in m.as_slice().iter().enumerate() {
        a.row_mut(i).scale_mut(1.0 / mi);
    }
    let eig_a: Vec<f64> = linalg::general_eigenvalues(&a).into_iter().map(|(re, _)| re).collect();
    let inertia_a = Inertia::from_eigenvalues(&eig_a, tol);

    let f = build_f(config);
    let m_inf = m.as_slice().iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    let residual = f.residual_inf(m)? / m_inf;

    let morse = inertia_h.negative;
    Ok(StabilityReport {
        n,
        inertia_h,
        inertia_a,
        inertia_consistent: inertia_a == inertia_h,
        morse_index: morse,
        linearization_counts: LinearizationCounts {
            imaginary: 2 * morse,
            positive: n - morse,
            negative: n - morse,
        },
        is_linearly_stable_candidate: morse + 1 == n && inertia_h.zero == 1,
        residual,
        residual_warning: residual >= RESIDUAL_WARNING,
        hessian_eigenvalues: eig_h,
    })
}

/// Congruence matrix splitting a symmetric 1+5 Hessian into a rotation
/// mode, a symmetric block and an antisymmetric block.
pub const SYM5_P: [[i32; 5]; 5] = [
    [1, 1, 0, 1, 0],
    [1, 0, 1, 0, 1],
    [1, 0, 0, 0, 0],
    [1, 0, 1, 0, -1],
    [1, 1, 0, -1, 0],
];

pub fn sym5_p() -> DMatrix<f64> {
    DMatrix::from_fn(5, 5, |i, j| f64::from(SYM5_P[i][j]))
}

/// Pair values `h_ij` entering the symmetric 1+5 blocks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sym5PairValues {
    pub h12: f64,
    pub h13: f64,
    pub h14: f64,
    pub h15: f64,
    pub h23: f64,
    pub h24: f64,
}

impl Sym5PairValues {
    pub fn new(theta1: f64, theta2: f64, s: PotentialExponent) -> Self {
        let s = s.value();
        Sym5PairValues {
            h12: h_raw(theta1 - theta2, s),
            h13: h_raw(theta1, s),
            h14: h_raw(theta1 + theta2, s),
            h15: h_raw(2.0 * theta1, s),
            h23: h_raw(theta2, s),
            h24: h_raw(2.0 * theta2, s),
        }
    }
}

/// The two 2×2 blocks of the symmetric 1+5 Hessian, in the printed closed
/// forms. These are the blocks of `-PᵀHP`, i.e. of the Hessian of `-V`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sym5Blocks {
    pub h1: Matrix2<f64>,
    pub h2: Matrix2<f64>,
    pub p: [[i32; 5]; 5],
    /// Largest deviation of `-PᵀHP` from `diag(0, H1, H2)`, relative to `max(1, ‖H‖max)`.
    pub congruence_defect: f64,
}

impl Sym5Blocks {
    pub fn det_h1(&self) -> f64 {
        self.h1.determinant()
    }

    pub fn trace_h1(&self) -> f64 {
        self.h1.trace()
    }

    pub fn det_h2(&self) -> f64 {
        self.h2.determinant()
    }
}

pub fn sym5_h1(h: &Sym5PairValues, m1: f64, m2: f64, m3: f64) -> Matrix2<f64> {
    let a = h.h12 + h.h14;
    let off = -2.0 * m1 * m2 * a;
    Matrix2::new(
        2.0 * m1 * m2 * a + 2.0 * h.h13 * m1 * m3,
        off,
        off,
        2.0 * m1 * m2 * a + 2.0 * h.h23 * m2 * m3,
    )
}

pub fn sym5_h2(h: &Sym5PairValues, m1: f64, m2: f64, m3: f64) -> Matrix2<f64> {
    let a = h.h12 + h.h14;
    let off = 2.0 * m1 * m2 * (h.h14 - h.h12);
    Matrix2::new(
        2.0 * m1 * (2.0 * h.h15 * m1 + a * m2 + h.h13 * m3),
        off,
        off,
        2.0 * m2 * (a * m1 + 2.0 * h.h24 * m2 + h.h23 * m3),
    )
}

/// Factored determinant of `H1`.
pub fn sym5_det_h1(h: &Sym5PairValues, m1: f64, m2: f64, m3: f64) -> f64 {
    4.0 * ((h.h12 + h.h14) * (h.h13 * m1 + h.h23 * m2) + h.h13 * h.h23 * m3) * m1 * m2 * m3
}

/// Blocks for `0 < θ₂ < θ₁ < π/2` and masses `(m₁, m₂, m₃, m₂, m₁)`.
pub fn sym5_blocks(
    theta1: f64,
    theta2: f64,
    m1: f64,
    m2: f64,
    m3: f64,
    s: PotentialExponent,
) -> Result<Sym5Blocks> {
    if !(0.0 < theta2 && theta2 < theta1 && theta1 < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain(format!(
            "symmetric 1+5 blocks need 0 < θ₂ < θ₁ < π/2, got θ₁={theta1}, θ₂={theta2}"
        )));
    }
    let config = RingConfiguration::new(vec![theta1, theta2, 0.0, -theta2, -theta1], s)?;
    let masses = MassVector::new(vec![m1, m2, m3, m2, m1]);
    let full = hessian(&config, &masses)?;
    let p = sym5_p();
    let reduced = -(p.transpose() * &full * &p);

    let pv = Sym5PairValues::new(theta1, theta2, s);
    let h1 = sym5_h1(&pv, m1, m2, m3);
    let h2 = sym5_h2(&pv, m1, m2, m3);
    let mut expected = DMatrix::zeros(5, 5);
    expected.view_mut((1, 1), (2, 2)).copy_from(&h1);
    expected.view_mut((3, 3), (2, 2)).copy_from(&h2);
    let congruence_defect = (reduced - expected).amax() / full.amax().max(1.0);
    Ok(Sym5Blocks { h1, h2, p: SYM5_P, congruence_defect })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    const S3: PotentialExponent = PotentialExponent::NEWTONIAN;

    #[test]
    fn inertia_of_diagonal() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 0.0, -2.0]));
        assert_eq!(inertia(&d, 1e-8).unwrap(), Inertia { positive: 1, zero: 1, negative: 1 });
    }

    #[test]
    fn inertia_of_antipodal_pair_matrix() {
        let a = DMatrix::from_row_slice(2, 2, &[0.125, -0.125, -0.125, 0.125]);
        assert_eq!(inertia(&a, 1e-8).unwrap(), Inertia { positive: 1, zero: 1, negative: 0 });
    }

    #[test]
    fn inertia_rejects_asymmetric_input() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(inertia(&a, 1e-8), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn hexagon_report_is_consistent() {
        let c = RingConfiguration::new((0..6).map(|k| TAU * k as f64 / 6.0).collect(), S3).unwrap();
        let r = lemma1_report(&c, &MassVector::equal(6), DEFAULT_EIGEN_TOL).unwrap();
        assert!(r.is_self_consistent());
        assert!(r.inertia_consistent);
        assert!(r.inertia_h.zero >= 1);
        assert!(r.residual < 1e-12);
        assert!(!r.residual_warning);
    }

    #[test]
    fn report_flags_non_solutions_and_rejects_zero_mass() {
        let c = RingConfiguration::new(vec![0.0, 1.0, 2.5], S3).unwrap();
        let r = lemma1_report(&c, &MassVector::equal(3), DEFAULT_EIGEN_TOL).unwrap();
        assert!(r.residual_warning);
        let zero = MassVector::new(vec![1.0, 0.0, 1.0]);
        assert!(matches!(
            lemma1_report(&c, &zero, DEFAULT_EIGEN_TOL),
            Err(Error::NonPositiveMass { index: 1, .. })
        ));
    }

    #[test]
    fn closed_form_blocks_match_congruence() {
        for &(t1, t2, m1, m2, m3) in &[
            (1.2, 0.7, 1.0, 1.0, 1.0),
            (0.9, 0.6, 0.3, 2.0, 0.8),
            (1.5, 0.55, 1.7, 0.2, 3.1),
        ] {
            let b = sym5_blocks(t1, t2, m1, m2, m3, S3).unwrap();
            assert!(b.congruence_defect < 1e-10, "defect {}", b.congruence_defect);
            let pv = Sym5PairValues::new(t1, t2, S3);
            let det = sym5_det_h1(&pv, m1, m2, m3);
            assert!((det - b.det_h1()).abs() <= 1e-10 * det.abs().max(1.0));
        }
    }

    #[test]
    fn blocks_reject_out_of_range_angles() {
        assert!(sym5_blocks(PI / 2.0, 0.3, 1.0, 1.0, 1.0, S3).is_err());
        assert!(sym5_blocks(0.5, 0.6, 1.0, 1.0, 1.0, S3).is_err());
    }

    #[test]
    fn p_is_invertible() {
        assert!(sym5_p().determinant().abs() > 0.5);
    }
}
