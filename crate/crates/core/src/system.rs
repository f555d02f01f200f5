//! The mass coefficient matrix `F` and the structure of its kernel.
//!
//! `F_ij = f(θ_i - θ_j)` is real antisymmetric, so its nonzero singular
//! values come in equal pairs and the kernel dimension has the parity of N.
//! Mass vectors of relative equilibria are exactly the kernel vectors.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, Matrix2x3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{f_raw, MassVector, PotentialExponent, RingConfiguration};
use crate::linalg;

/// Default relative singular-value cut for the numerical kernel.
pub const DEFAULT_KERNEL_TOL: f64 = 1e-9;

/// Antisymmetric matrix of kernel-function values for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct CoorbitalMatrix {
    entries: DMatrix<f64>,
    config: RingConfiguration,
}

/// Builds `F` with `F_ij = f(θ_i - θ_j)` and `F_ji = -F_ij` exactly.
pub fn build_f(config: &RingConfiguration) -> CoorbitalMatrix {
    let n = config.len();
    let s = config.exponent().value();
    let mut entries = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = f_raw(config.difference(i, j), s);
            entries[(i, j)] = v;
            entries[(j, i)] = -v;
        }
    }
    CoorbitalMatrix { entries, config: config.clone() }
}

impl CoorbitalMatrix {
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn config(&self) -> &RingConfiguration {
        &self.config
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// `f_{i,j}` with 0-based labels.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    /// Max-row-sum norm `‖F‖_∞`.
    pub fn norm_inf(&self) -> f64 {
        self.entries.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn residual(&self, m: &MassVector) -> Result<DVector<f64>> {
        m.check_len(self.dim())?;
        Ok(&self.entries * m.to_dvector())
    }

    pub fn residual_inf(&self, m: &MassVector) -> Result<f64> {
        Ok(self.residual(m)?.amax())
    }

    pub fn determinant(&self) -> f64 {
        self.entries.determinant()
    }
}

/// Pfaffian of `F` by first-row expansion; `Pf(F)² = det F`.
pub fn pfaffian(f: &CoorbitalMatrix) -> Result<f64> {
    linalg::pfaffian(&f.entries)
}

/// Orthonormal basis of the numerical kernel of `F`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelBasis {
    pub vectors: Vec<DVector<f64>>,
    pub tolerance: f64,
    /// All singular values of `F`, descending.
    pub singular_values: Vec<f64>,
}

impl KernelBasis {
    /// Wraps explicit (not necessarily orthonormal) kernel vectors.
    pub fn from_vectors(vectors: Vec<DVector<f64>>) -> Self {
        KernelBasis { vectors, tolerance: 0.0, singular_values: Vec::new() }
    }

    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    /// Distance from `v / ‖v‖` to the span of the (orthonormal) basis.
    pub fn projection_defect(&self, v: &DVector<f64>) -> f64 {
        let norm = v.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let u = v / norm;
        let mut rest = u.clone();
        for b in &self.vectors {
            rest -= b * b.dot(&u);
        }
        rest.norm()
    }

    pub fn record(&self, config: &RingConfiguration) -> KernelRecord {
        KernelRecord {
            s: config.exponent().value(),
            thetas: config.thetas().to_vec(),
            kernel: self.vectors.iter().map(|v| v.iter().copied().collect()).collect(),
            singular_values: self.singular_values.clone(),
        }
    }
}

/// Serialized form of a configuration together with its kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelRecord {
    pub s: f64,
    pub thetas: Vec<f64>,
    pub kernel: Vec<Vec<f64>>,
    pub singular_values: Vec<f64>,
}

/// Numerical kernel via SVD.
///
/// Singular values are grouped into the equal pairs forced by antisymmetry;
/// a pair is dropped into the kernel when its larger member is below
/// `tol * σ_max`. For odd N the smallest singular value is always kernel.
/// This keeps the dimension parity equal to N by construction.
pub fn mass_kernel(f: &CoorbitalMatrix, tol: f64) -> Result<KernelBasis> {
    if !(tol > 0.0 && tol <= 1e-4) {
        return Err(Error::Domain(format!("kernel tolerance {tol} outside (0, 1e-4]")));
    }
    let n = f.dim();
    let svd = f.entries.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sigma: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let cut = tol * sigma.first().copied().unwrap_or(0.0);

    let paired = n - n % 2;
    let mut rank = paired;
    while rank >= 2 && sigma[rank - 2] <= cut {
        rank -= 2;
    }
    let vectors = order[rank..]
        .iter()
        .map(|&k| v_t.row(k).transpose().into_owned())
        .collect();
    Ok(KernelBasis { vectors, tolerance: tol, singular_values: sigma })
}

/// Open interval of mixing parameters `α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaInterval {
    pub lo: f64,
    pub hi: f64,
}

impl AlphaInterval {
    pub fn contains(&self, alpha: f64) -> bool {
        alpha > self.lo && alpha < self.hi
    }

    /// A representative interior point.
    pub fn sample(&self) -> f64 {
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => 0.5 * (self.lo + self.hi),
            (true, false) => self.lo + self.lo.abs().max(1.0),
            (false, true) => self.hi - self.hi.abs().max(1.0),
            (false, false) => 0.0,
        }
    }
}

/// Positive part of the kernel.
#[derive(Debug, Clone, PartialEq)]
pub enum PositiveMassRegion {
    Empty,
    /// One-dimensional kernel whose positive ray is spanned by `direction`.
    Ray { direction: DVector<f64> },
    /// Two-dimensional kernel `{v1, v2}`. `plus` holds the `α` with
    /// `v1 + α v2 > 0`, `minus` those with `-(v1 + α v2) > 0`; together
    /// they describe the open positive cone except for the single ray `±v2`.
    Cone {
        plus: Option<AlphaInterval>,
        minus: Option<AlphaInterval>,
        sample: DVector<f64>,
    },
}

impl PositiveMassRegion {
    pub fn is_empty(&self) -> bool {
        matches!(self, PositiveMassRegion::Empty)
    }

    /// Some strictly positive kernel vector, if there is one.
    pub fn sample(&self) -> Option<DVector<f64>> {
        match self {
            PositiveMassRegion::Empty => None,
            PositiveMassRegion::Ray { direction } => Some(direction.clone()),
            PositiveMassRegion::Cone { sample, .. } => Some(sample.clone()),
        }
    }
}

/// Solves the componentwise inequalities `v1_k + α v2_k > 0`.
pub fn alpha_interval(v1: &DVector<f64>, v2: &DVector<f64>) -> Option<AlphaInterval> {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for (&a, &b) in v1.iter().zip(v2.iter()) {
        if b > 0.0 {
            lo = lo.max(-a / b);
        } else if b < 0.0 {
            hi = hi.min(-a / b);
        } else if a <= 0.0 {
            return None;
        }
    }
    (lo < hi).then_some(AlphaInterval { lo, hi })
}

/// Positive mass vectors in the span of a one- or two-dimensional kernel.
pub fn positive_mass_region(vectors: &[DVector<f64>]) -> Result<PositiveMassRegion> {
    match vectors {
        [v] => {
            if v.iter().all(|&x| x > 0.0) {
                Ok(PositiveMassRegion::Ray { direction: v.clone() })
            } else if v.iter().all(|&x| x < 0.0) {
                Ok(PositiveMassRegion::Ray { direction: -v })
            } else {
                Ok(PositiveMassRegion::Empty)
            }
        }
        [v1, v2] => {
            let scale = v1.amax().max(v2.amax());
            let clean = |v: &DVector<f64>| v.map(|x| if x.abs() <= 1e-12 * scale { 0.0 } else { x });
            let (v1, v2) = (&clean(v1), &clean(v2));
            let plus = alpha_interval(v1, v2);
            let minus = alpha_interval(&-v1, &-v2);
            let sample = match (plus, minus) {
                (Some(iv), _) => v1 + v2 * iv.sample(),
                (None, Some(iv)) => -(v1 + v2 * iv.sample()),
                (None, None) => return Ok(PositiveMassRegion::Empty),
            };
            Ok(PositiveMassRegion::Cone { plus, minus, sample })
        }
        other => Err(Error::UnsupportedKernelDimension(other.len())),
    }
}

/// Reflection-symmetric configuration families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    /// 1+4 with bodies 1 and 3 on the axis: `(0, θ₂, π, -θ₂)`.
    #[serde(rename = "type1-1p4")]
    Type1Ring4,
    /// 1+4 with two mirror pairs: `(θ₁, θ₂, -θ₂, -θ₁)`.
    #[serde(rename = "type2-1p4")]
    Type2Ring4,
    /// 1+6 with bodies 1 and 4 on the axis: `(0, θ₂, θ₃, π, -θ₃, -θ₂)`.
    #[serde(rename = "type1-1p6")]
    Type1Ring6,
    /// 1+6 with three mirror pairs.
    #[serde(rename = "type2-1p6")]
    Type2Ring6,
    /// 1+8 with four mirror pairs.
    #[serde(rename = "type2-1p8")]
    Type2Ring8,
    /// 1+5 with body 3 on the axis: `(θ₁, θ₂, 0, -θ₂, -θ₁)`.
    #[serde(rename = "sym-1p5")]
    Symmetric5,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 6] = [
        FamilyKind::Type1Ring4,
        FamilyKind::Type2Ring4,
        FamilyKind::Type1Ring6,
        FamilyKind::Type2Ring6,
        FamilyKind::Type2Ring8,
        FamilyKind::Symmetric5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Type1Ring4 => "type1-1p4",
            FamilyKind::Type2Ring4 => "type2-1p4",
            FamilyKind::Type1Ring6 => "type1-1p6",
            FamilyKind::Type2Ring6 => "type2-1p6",
            FamilyKind::Type2Ring8 => "type2-1p8",
            FamilyKind::Symmetric5 => "sym-1p5",
        }
    }

    pub fn bodies(self) -> usize {
        match self {
            FamilyKind::Type1Ring4 | FamilyKind::Type2Ring4 => 4,
            FamilyKind::Symmetric5 => 5,
            FamilyKind::Type1Ring6 | FamilyKind::Type2Ring6 => 6,
            FamilyKind::Type2Ring8 => 8,
        }
    }

    pub fn free_count(self) -> usize {
        match self {
            FamilyKind::Type1Ring4 => 1,
            FamilyKind::Type2Ring4 | FamilyKind::Type1Ring6 | FamilyKind::Symmetric5 => 2,
            FamilyKind::Type2Ring6 => 3,
            FamilyKind::Type2Ring8 => 4,
        }
    }

    /// Labels swapped by the reflection (0-based).
    pub fn mirror_pairs(self) -> Vec<(usize, usize)> {
        let n = self.bodies();
        match self {
            FamilyKind::Type1Ring4 => vec![(1, 3)],
            FamilyKind::Type1Ring6 => vec![(1, 5), (2, 4)],
            _ => (0..n / 2).map(|i| (i, n - 1 - i)).collect(),
        }
    }

    /// Constant Jacobian `∂θ/∂φ` of the (linear) expansion.
    pub fn jacobian(self) -> DMatrix<f64> {
        let n = self.bodies();
        let k = self.free_count();
        let mut j = DMatrix::zeros(n, k);
        match self {
            FamilyKind::Type1Ring4 => {
                j[(1, 0)] = 1.0;
                j[(3, 0)] = -1.0;
            }
            FamilyKind::Type1Ring6 => {
                j[(1, 0)] = 1.0;
                j[(5, 0)] = -1.0;
                j[(2, 1)] = 1.0;
                j[(4, 1)] = -1.0;
            }
            FamilyKind::Symmetric5 => {
                j[(0, 0)] = 1.0;
                j[(4, 0)] = -1.0;
                j[(1, 1)] = 1.0;
                j[(3, 1)] = -1.0;
            }
            _ => {
                for a in 0..k {
                    j[(a, a)] = 1.0;
                    j[(n - 1 - a, a)] = -1.0;
                }
            }
        }
        j
    }

    /// Full angle list without ordering checks.
    pub fn expand_unchecked(self, free: &[f64]) -> Vec<f64> {
        match self {
            FamilyKind::Type1Ring4 => vec![0.0, free[0], PI, -free[0]],
            FamilyKind::Type1Ring6 => vec![0.0, free[0], free[1], PI, -free[1], -free[0]],
            FamilyKind::Symmetric5 => vec![free[0], free[1], 0.0, -free[1], -free[0]],
            _ => free.iter().copied().chain(free.iter().rev().map(|t| -t)).collect(),
        }
    }

    /// Checks the ordering constraints of the family's free angles.
    pub fn check_free_angles(self, free: &[f64]) -> Result<()> {
        if free.len() != self.free_count() {
            return Err(Error::DimensionMismatch { expected: self.free_count(), found: free.len() });
        }
        if let Some(&bad) = free.iter().find(|t| !t.is_finite()) {
            return Err(Error::NonFiniteAngle(bad));
        }
        let open = |t: f64| t > 0.0 && t < PI;
        let ok = match self {
            FamilyKind::Type1Ring4 => open(free[0]),
            FamilyKind::Type1Ring6 => open(free[0]) && open(free[1]) && free[0] < free[1],
            FamilyKind::Symmetric5 => open(free[0]) && open(free[1]) && free[1] < free[0],
            // mirror pairs may sit on either side of the axis
            _ => free.iter().all(|t| open(t.abs())),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Ordering(format!("{} free angles {:?}", self.name(), free)))
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('+', "p");
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| Error::Domain(format!("unknown family `{s}`")))
    }
}

/// A family together with values for its free angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricFamily {
    pub kind: FamilyKind,
    pub free_angles: Vec<f64>,
}

impl SymmetricFamily {
    pub fn new(kind: FamilyKind, free_angles: Vec<f64>) -> Self {
        SymmetricFamily { kind, free_angles }
    }
}

/// Expands the free angles into a full configuration honouring the reflection constraints.
pub fn expand_family(fam: &SymmetricFamily, s: PotentialExponent) -> Result<RingConfiguration> {
    fam.kind.check_free_angles(&fam.free_angles)?;
    RingConfiguration::new(fam.kind.expand_unchecked(&fam.free_angles), s)
}

fn sym5_config(theta1: f64, theta2: f64, s: PotentialExponent) -> Result<RingConfiguration> {
    if theta1 == theta2 {
        return Err(Error::Collision { separation: 0.0 });
    }
    expand_family(&SymmetricFamily::new(FamilyKind::Symmetric5, vec![theta1, theta2]), s)
}

/// Two independent equations of the symmetric 1+5 problem with
/// `m₁ = m₅`, `m₂ = m₄`, acting on `(m₁, m₂, m₃)`:
///
/// ```text
/// [ f15        f12 + f14   f13 ]
/// [ f14 - f12  f24         f23 ]
/// ```
pub fn sym5_reduced_system(
    theta1: f64,
    theta2: f64,
    s: PotentialExponent,
) -> Result<Matrix2x3<f64>> {
    let config = sym5_config(theta1, theta2, s)?;
    let f = build_f(&config);
    let g = |i: usize, j: usize| f.get(i - 1, j - 1);
    Ok(Matrix2x3::new(
        g(1, 5),
        g(1, 2) + g(1, 4),
        g(1, 3),
        g(1, 4) - g(1, 2),
        g(2, 4),
        g(2, 3),
    ))
}

/// The zero-mass functions `(Z₁, Z₂, Z₃)`; `Z_i` vanishes where a kernel
/// solution of the reduced 1+5 system has `m_i = 0`. The kernel is
/// proportional to `(Z₁, -Z₂, Z₃)`.
pub fn zero_mass_values(theta1: f64, theta2: f64, s: PotentialExponent) -> Result<[f64; 3]> {
    Ok(zero_mass_values_of(&sym5_config(theta1, theta2, s)?))
}

/// [`zero_mass_values`] on an already expanded 1+5 configuration.
pub(crate) fn zero_mass_values_of(config: &RingConfiguration) -> [f64; 3] {
    let f = build_f(config);
    let g = |i: usize, j: usize| f.get(i - 1, j - 1);
    let z1 = g(2, 3) * (g(1, 2) + g(1, 4)) - g(1, 3) * g(2, 4);
    let z2 = g(1, 3) * (g(1, 2) - g(1, 4)) + g(1, 5) * g(2, 3);
    let z3 = g(1, 2) * g(1, 2) - g(1, 4) * g(1, 4) + g(1, 5) * g(2, 4);
    [z1, z2, z3]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, TAU};

    const S3: PotentialExponent = PotentialExponent::NEWTONIAN;

    fn regular(n: usize) -> RingConfiguration {
        RingConfiguration::new((0..n).map(|k| TAU * k as f64 / n as f64).collect(), S3).unwrap()
    }

    #[test]
    fn f_matrix_is_exactly_antisymmetric() {
        let c = RingConfiguration::new(vec![0.1, 0.9, 2.3, 4.0, 5.5], S3).unwrap();
        let f = build_f(&c);
        let sum = f.entries() + f.entries().transpose();
        assert_eq!(sum.amax(), 0.0);
    }

    #[test]
    fn type2_square_has_zero_antipodal_entries() {
        let c = RingConfiguration::new(
            vec![FRAC_PI_4, 3.0 * FRAC_PI_4, -3.0 * FRAC_PI_4, -FRAC_PI_4],
            S3,
        )
        .unwrap();
        let f = build_f(&c);
        assert!(f.get(0, 2).abs() < 1e-15);
        assert!(f.get(1, 3).abs() < 1e-15);
    }

    #[test]
    fn type2_pfaffian_simplifies() {
        for (a, b) in [(0.3, 1.1), (2.0, 0.7), (FRAC_PI_6, 1.936)] {
            let c = expand_family(&SymmetricFamily::new(FamilyKind::Type2Ring4, vec![a, b]), S3)
                .unwrap();
            let f = build_f(&c);
            let g = |i: usize, j: usize| f.get(i - 1, j - 1);
            let general = g(1, 2) * g(3, 4) + g(1, 4) * g(2, 3) - g(1, 3) * g(2, 4);
            let simplified = g(1, 2).powi(2) - g(1, 3).powi(2) + g(1, 4) * g(2, 3);
            let pf = pfaffian(&f).unwrap();
            assert!((pf - general).abs() < 1e-12);
            assert!((pf - simplified).abs() < 1e-12);
        }
    }

    #[test]
    fn square_pfaffian_vanishes() {
        assert!(pfaffian(&build_f(&regular(4))).unwrap().abs() < 1e-12);
    }

    #[test]
    fn regular_polygon_kernel_contains_ones() {
        for n in 3..9 {
            let k = mass_kernel(&build_f(&regular(n)), DEFAULT_KERNEL_TOL).unwrap();
            let ones = DVector::from_element(n, 1.0);
            assert!(k.projection_defect(&ones) < 1e-10, "n={n}");
            assert_eq!(k.dimension() % 2, n % 2);
        }
    }

    #[test]
    fn type1_ring4_kernel_is_two_dimensional() {
        let c = expand_family(&SymmetricFamily::new(FamilyKind::Type1Ring4, vec![1.2]), S3)
            .unwrap();
        let f = build_f(&c);
        let k = mass_kernel(&f, DEFAULT_KERNEL_TOL).unwrap();
        assert_eq!(k.dimension(), 2);
        let g = |i: usize, j: usize| f.get(i - 1, j - 1);
        let a = DVector::from_vec(vec![g(2, 3), 0.0, g(1, 2), 0.0]);
        let b = DVector::from_vec(vec![0.0, g(2, 3), -g(2, 4), g(2, 3)]);
        assert!(k.projection_defect(&a) < 1e-10);
        assert!(k.projection_defect(&b) < 1e-10);
    }

    #[test]
    fn kernel_tolerance_is_validated() {
        let f = build_f(&regular(4));
        assert!(mass_kernel(&f, 0.0).is_err());
        assert!(mass_kernel(&f, 1e-3).is_err());
    }

    #[test]
    fn positive_region_examples() {
        let one = DVector::from_element(5, 1.0 / 5f64.sqrt());
        assert!(matches!(
            positive_mass_region(&[-one.clone()]).unwrap(),
            PositiveMassRegion::Ray { .. }
        ));
        let v1 = DVector::from_vec(vec![1.0, 0.0, 0.0, -1.0]);
        let v2 = DVector::from_vec(vec![0.0, 1.0, 1.0, 0.0]);
        assert!(positive_mass_region(&[v1.clone(), v2]).unwrap().is_empty());

        // the (1,0,0,-1), (0,a,a,b) shape with a, b < 0
        let (a, b) = (-0.536, -0.565);
        let v2 = DVector::from_vec(vec![0.0, a, a, b]);
        match positive_mass_region(&[v1.clone(), v2.clone()]).unwrap() {
            PositiveMassRegion::Cone { plus: Some(iv), sample, .. } => {
                assert_eq!(iv.lo, f64::NEG_INFINITY);
                assert!((iv.hi - 1.0 / b).abs() < 1e-15);
                assert!(sample.iter().all(|&x| x > 0.0));
            }
            other => panic!("unexpected {other:?}"),
        }
        let three = vec![v1.clone(), v1.clone(), v1];
        assert_eq!(positive_mass_region(&three), Err(Error::UnsupportedKernelDimension(3)));
    }

    #[test]
    fn family_expansion_examples() {
        let sq = expand_family(
            &SymmetricFamily::new(FamilyKind::Type2Ring4, vec![3.0 * FRAC_PI_4, FRAC_PI_4]),
            S3,
        )
        .unwrap();
        let mut t = sq.thetas().to_vec();
        t.sort_by(f64::total_cmp);
        for (k, x) in t.iter().enumerate() {
            assert!((x - (2 * k + 1) as f64 * FRAC_PI_4).abs() < 1e-14);
        }
        let five = expand_family(
            &SymmetricFamily::new(FamilyKind::Symmetric5, vec![FRAC_PI_3, FRAC_PI_6]),
            S3,
        )
        .unwrap();
        let want = [FRAC_PI_3, FRAC_PI_6, 0.0, -FRAC_PI_6, -FRAC_PI_3];
        for (a, b) in five.signed_thetas().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        let t1 = expand_family(
            &SymmetricFamily::new(FamilyKind::Type1Ring4, vec![std::f64::consts::FRAC_PI_2]),
            S3,
        )
        .unwrap();
        for (k, x) in t1.thetas().iter().enumerate() {
            assert!((x - k as f64 * std::f64::consts::FRAC_PI_2).abs() < 1e-14);
        }
    }

    #[test]
    fn family_ordering_is_enforced() {
        let bad = SymmetricFamily::new(FamilyKind::Symmetric5, vec![0.3, 0.5]);
        assert!(matches!(expand_family(&bad, S3), Err(Error::Ordering(_))));
        let bad = SymmetricFamily::new(FamilyKind::Type1Ring6, vec![2.0, 1.0]);
        assert!(matches!(expand_family(&bad, S3), Err(Error::Ordering(_))));
        let bad = SymmetricFamily::new(FamilyKind::Type2Ring4, vec![0.0, 1.0]);
        assert!(matches!(expand_family(&bad, S3), Err(Error::Ordering(_))));
    }

    #[test]
    fn family_names_round_trip() {
        for k in FamilyKind::ALL {
            assert_eq!(k.name().parse::<FamilyKind>().unwrap(), k);
        }
        assert_eq!("type2-1+4".parse::<FamilyKind>().unwrap(), FamilyKind::Type2Ring4);
        assert!("bogus".parse::<FamilyKind>().is_err());
    }

    #[test]
    fn reduced_system_matches_full_matrix() {
        let (t1, t2) = (1.3, 0.6);
        let a = sym5_reduced_system(t1, t2, S3).unwrap();
        let c = expand_family(&SymmetricFamily::new(FamilyKind::Symmetric5, vec![t1, t2]), S3)
            .unwrap();
        let f = build_f(&c);
        assert_eq!(a[(0, 0)], f.get(0, 4));
        assert_eq!(a[(0, 1)], f.get(0, 1) + f.get(0, 3));
        assert_eq!(a[(0, 2)], f.get(0, 2));
        // folding the symmetric masses into rows 1 and 2 of F m
        let (m1, m2, m3) = (0.7, 1.9, 0.4);
        let full = f.residual(&MassVector::new(vec![m1, m2, m3, m2, m1])).unwrap();
        let red = a * nalgebra::Vector3::new(m1, m2, m3);
        assert!((full[0] - red[0]).abs() < 1e-14);
        assert!((full[1] - red[1]).abs() < 1e-14);
    }

    #[test]
    fn pentagon_slots_annihilate_equal_masses() {
        let a = sym5_reduced_system(4.0 * PI / 5.0, 2.0 * PI / 5.0, S3).unwrap();
        let r = a * nalgebra::Vector3::new(1.0, 1.0, 1.0);
        assert!(r.amax() < 1e-12);
    }

    #[test]
    fn small_gaps_admit_no_positive_solution() {
        // all separations from body 1 below π/3 make the first row positive
        let a = sym5_reduced_system(0.5, 0.25, S3).unwrap();
        assert!(a.row(0).iter().all(|&x| x > 0.0));
    }

    #[test]
    fn zero_mass_values_are_kernel_minors() {
        for (t1, t2) in [(1.0, 0.5), (2.2, 0.9), (0.8, 0.7)] {
            let z = zero_mass_values(t1, t2, S3).unwrap();
            let a = sym5_reduced_system(t1, t2, S3).unwrap();
            let minor = |c1: usize, c2: usize| a[(0, c1)] * a[(1, c2)] - a[(0, c2)] * a[(1, c1)];
            assert!((z[0] - minor(1, 2)).abs() < 1e-13);
            assert!((z[1] + minor(2, 0)).abs() < 1e-13);
            assert!((z[2] - minor(0, 1)).abs() < 1e-13);
            let c = expand_family(&SymmetricFamily::new(FamilyKind::Symmetric5, vec![t1, t2]), S3)
                .unwrap();
            let f = build_f(&c);
            let g = |i: usize, j: usize| f.get(i - 1, j - 1);
            let z3 = g(1, 2).powi(2) - g(1, 4).powi(2) + g(1, 5) * g(2, 4);
            assert!((z[2] - z3).abs() < 1e-13);
            let kernel = nalgebra::Vector3::new(z[0], -z[1], z[2]);
            assert!((a * kernel).amax() < 1e-12);
        }
        assert!(matches!(zero_mass_values(0.7, 0.7, S3), Err(Error::Collision { .. })));
    }
}
