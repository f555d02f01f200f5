//! Mutual-distance formulation of the coorbital equations.
//!
//! Three points lie on a common unit circle exactly when their chord
//! lengths satisfy `E = 0`. Critical points of `V` restricted to that
//! constraint are the central configurations. For three bodies the
//! equations are small enough to evaluate directly, which gives an oracle
//! independent of the angular form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{MassVector, PotentialExponent, RingConfiguration};

/// All pairwise chord lengths of an N-body ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceSet {
    n: usize,
    /// Upper triangle, row-major: (0,1), (0,2), …, (n-2,n-1).
    r: Vec<f64>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

impl DistanceSet {
    /// Checks `r ∈ (0, 2]` (with a little rounding slack) and all triangle inequalities.
    pub fn new(n: usize, r: Vec<f64>) -> Result<Self> {
        if r.len() != n * (n.saturating_sub(1)) / 2 {
            return Err(Error::DimensionMismatch { expected: n * (n.saturating_sub(1)) / 2, found: r.len() });
        }
        if let Some(&bad) = r.iter().find(|&&x| !(x > 0.0 && x <= 2.0 + 1e-12)) {
            return Err(Error::Domain(format!("chord length {bad} outside (0, 2]")));
        }
        let set = DistanceSet { n, r };
        for (i, j, k) in triples(n) {
            let (a, b, c) = (set.get(i, j), set.get(j, k), set.get(i, k));
            let slack = 1e-12 * (a + b + c);
            if a > b + c + slack || b > a + c + slack || c > a + b + slack {
                return Err(Error::Domain(format!("triangle inequality fails for ({i},{j},{k})")));
            }
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.r[pair_index(self.n, i, j)]
    }

    /// Largest `|E|` over all triples.
    pub fn max_e_residual(&self) -> f64 {
        triples(self.n)
            .map(|(i, j, k)| concyclicity_e(self.get(i, j), self.get(j, k), self.get(i, k)).abs())
            .fold(0.0, f64::max)
    }

    /// `W_ij = m_i m_j (1 - r_ij^{-s})` for every pair.
    pub fn w_coefficients(&self, m: &MassVector, s: PotentialExponent) -> Result<WCoefficients> {
        m.check_len(self.n)?;
        let mm = m.as_slice();
        let mut w = Vec::with_capacity(self.r.len());
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                w.push(w_value(self.get(i, j), mm[i], mm[j], s.value()));
            }
        }
        Ok(WCoefficients { n: self.n, w })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WCoefficients {
    n: usize,
    w: Vec<f64>,
}

impl WCoefficients {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[pair_index(self.n, i, j)]
    }
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |i| {
        ((i + 1)..n).flat_map(move |j| ((j + 1)..n).map(move |k| (i, j, k)))
    })
}

fn w_value(r: f64, mi: f64, mj: f64, s: f64) -> f64 {
    mi * mj * (1.0 - r.powf(-s))
}

/// The concyclicity polynomial `E_abc`.
pub fn concyclicity_e(r_ab: f64, r_bc: f64, r_ac: f64) -> f64 {
    let (a2, b2, c2) = (r_ab * r_ab, r_bc * r_bc, r_ac * r_ac);
    a2 * b2 * c2 + a2 * a2 + b2 * b2 + c2 * c2 - 2.0 * a2 * c2 - 2.0 * a2 * b2 - 2.0 * c2 * b2
}

/// The bracket `r_b² r_c² + 2 r_a² - 2 r_b² - 2 r_c²`, equal to `∂E/∂r_a / (2 r_a)`.
fn e_bracket(ra: f64, rb: f64, rc: f64) -> f64 {
    let (a2, b2, c2) = (ra * ra, rb * rb, rc * rc);
    b2 * c2 + 2.0 * a2 - 2.0 * b2 - 2.0 * c2
}

/// Chord lengths of a configuration.
pub fn distances_from_config(config: &RingConfiguration) -> DistanceSet {
    let n = config.len();
    let mut r = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            r.push(config.distance(i, j));
        }
    }
    DistanceSet { n, r }
}

/// Lagrange critical-point residuals `r_ij (W_ij + 2λ (…))` for three bodies,
/// ordered `(1,2)`, `(1,3)`, `(2,3)`.
pub fn n3_lagrange_residuals(
    r12: f64,
    r13: f64,
    r23: f64,
    m: &MassVector,
    lambda: f64,
    s: PotentialExponent,
) -> Result<[f64; 3]> {
    m.check_len(3)?;
    let mm = m.as_slice();
    let s = s.value();
    let w12 = w_value(r12, mm[0], mm[1], s);
    let w13 = w_value(r13, mm[0], mm[2], s);
    let w23 = w_value(r23, mm[1], mm[2], s);
    Ok([
        r12 * (w12 + 2.0 * lambda * e_bracket(r12, r13, r23)),
        r13 * (w13 + 2.0 * lambda * e_bracket(r13, r12, r23)),
        r23 * (w23 + 2.0 * lambda * e_bracket(r23, r12, r13)),
    ])
}

/// Multiplier that zeroes the `(1,3)` Lagrange residual.
pub fn n3_eliminated_multiplier(r12: f64, r13: f64, r23: f64, m: &MassVector, s: PotentialExponent) -> Result<f64> {
    m.check_len(3)?;
    let p13 = e_bracket(r13, r12, r23);
    if p13.abs() < 1e-14 {
        return Err(Error::DegenerateDenominator("∂E/∂r13"));
    }
    let mm = m.as_slice();
    Ok(-w_value(r13, mm[0], mm[2], s.value()) / (2.0 * p13))
}

/// Partial derivatives of `V` with respect to `r12` and `r23` on the
/// constraint surface, with `r13` eliminated by implicit differentiation
/// of `E = 0`.
pub fn n3_eliminated_residuals(
    r12: f64,
    r23: f64,
    r13: f64,
    m: &MassVector,
    s: PotentialExponent,
) -> Result<[f64; 2]> {
    m.check_len(3)?;
    let p13 = e_bracket(r13, r12, r23);
    if p13.abs() < 1e-14 {
        return Err(Error::DegenerateDenominator("∂E/∂r13"));
    }
    let mm = m.as_slice();
    let s = s.value();
    let w12 = w_value(r12, mm[0], mm[1], s);
    let w13 = w_value(r13, mm[0], mm[2], s);
    let w23 = w_value(r23, mm[1], mm[2], s);
    Ok([
        r12 * (w12 - w13 * e_bracket(r12, r13, r23) / p13),
        r23 * (w23 - w13 * e_bracket(r23, r12, r13) / p13),
    ])
}

/// Angular gradient `(∂V/∂θ₂, ∂V/∂θ₃)` of a three-body ring rebuilt from
/// the eliminated distance residuals through the chain rule.
pub fn n3_angular_gradient_from_distances(config: &RingConfiguration, m: &MassVector) -> Result<[f64; 2]> {
    if config.len() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: config.len() });
    }
    let (r12, r13, r23) = (config.distance(0, 1), config.distance(0, 2), config.distance(1, 2));
    let [g12, g23] = n3_eliminated_residuals(r12, r23, r13, m, config.exponent())?;
    let d12 = -config.difference(0, 1).sin() / r12;
    let d23 = config.difference(1, 2).sin() / r23;
    Ok([d12 * g12 + d23 * g23, -d23 * g23])
}
