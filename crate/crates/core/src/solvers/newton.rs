//! Damped Newton iteration on the gradient of `V`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{hessian, potential_gradient, MassVector, PotentialExponent, RingConfiguration};
use crate::system::FamilyKind;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonOptions {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub max_halvings: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { max_iterations: 100, tolerance: 1e-12, max_halvings: 30 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewtonOutcome {
    pub thetas: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// Generic damped Newton: `residual(x)` returns `(G, J)` or `None` when `x`
/// is inadmissible; steps are halved until `‖G‖∞` decreases.
fn damped_newton<F>(x0: DVector<f64>, opts: &NewtonOptions, eval: F) -> Result<(DVector<f64>, usize, f64)>
where
    F: Fn(&DVector<f64>) -> Option<(DVector<f64>, DMatrix<f64>)>,
{
    let mut x = x0;
    let (mut g, mut j) = eval(&x).ok_or(Error::NonConvergence { iterations: 0, residual: f64::INFINITY })?;
    let mut res = g.amax();
    for it in 0..opts.max_iterations {
        if res < opts.tolerance {
            return Ok((x, it, res));
        }
        let step = j
            .clone()
            .lu()
            .solve(&(-&g))
            .ok_or(Error::NonConvergence { iterations: it, residual: res })?;
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let trial = &x + &step * lambda;
            if let Some((gt, jt)) = eval(&trial) {
                let rt = gt.amax();
                if rt.is_finite() && rt < res {
                    accepted = Some((trial, gt, jt, rt));
                    break;
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((xn, gn, jn, rn)) => {
                x = xn;
                g = gn;
                j = jn;
                res = rn;
            }
            None => return Err(Error::NonConvergence { iterations: it, residual: res }),
        }
    }
    if res < opts.tolerance {
        Ok((x, opts.max_iterations, res))
    } else {
        Err(Error::NonConvergence { iterations: opts.max_iterations, residual: res })
    }
}

/// Solves `∇V = 0` for all angles, keeping `θ₁` fixed to remove the rotation.
/// No symmetry is imposed.
pub fn solve_full_system(
    seed: &RingConfiguration,
    m: &MassVector,
    opts: &NewtonOptions,
) -> Result<NewtonOutcome> {
    let n = seed.len();
    m.check_len(n)?;
    let s = seed.exponent();
    let first = seed.thetas()[0];
    let x0 = DVector::from_iterator(n - 1, seed.thetas()[1..].iter().copied());
    let eval = |x: &DVector<f64>| {
        let mut t = Vec::with_capacity(n);
        t.push(first);
        t.extend(x.iter().copied());
        let c = RingConfiguration::new(t, s).ok()?;
        let g = potential_gradient(&c, m).ok()?;
        let h = hessian(&c, m).ok()?;
        Some((g.rows(1, n - 1).into_owned(), h.view((1, 1), (n - 1, n - 1)).into_owned()))
    };
    let (x, iterations, residual) = damped_newton(x0, opts, eval)?;
    let mut thetas = vec![first];
    thetas.extend(x.iter().copied());
    let config = RingConfiguration::new(thetas, s)?;
    Ok(NewtonOutcome { thetas: config.thetas().to_vec(), iterations, residual })
}

/// Solves the family-restricted equations `Jᵀ∇V = 0` in the free angles.
/// For masses sharing the family's reflection symmetry this is equivalent
/// to the full system.
pub fn solve_family_newton(
    kind: FamilyKind,
    seed: &[f64],
    m: &MassVector,
    s: PotentialExponent,
    opts: &NewtonOptions,
) -> Result<NewtonOutcome> {
    m.check_len(kind.bodies())?;
    if seed.len() != kind.free_count() {
        return Err(Error::DimensionMismatch { expected: kind.free_count(), found: seed.len() });
    }
    let jac = kind.jacobian();
    let eval = |x: &DVector<f64>| {
        let c = RingConfiguration::new(kind.expand_unchecked(x.as_slice()), s).ok()?;
        let g = potential_gradient(&c, m).ok()?;
        let h = hessian(&c, m).ok()?;
        Some((jac.transpose() * g, jac.transpose() * h * &jac))
    };
    let (x, iterations, residual) = damped_newton(DVector::from_column_slice(seed), opts, eval)?;
    Ok(NewtonOutcome { thetas: x.iter().copied().collect(), iterations, residual })
}
