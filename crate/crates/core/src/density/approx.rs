//! Best `L^α(μ)` approximation of a function on `supp μ` by `H`-polynomials.
//!
//! The polynomials restricted to the support form the column space of the
//! character matrix. We parametrize it by an orthonormal basis `U` taken from
//! the SVD and minimize `Σ w_i |f_i − (U z)_i|^α` over `z`:
//!
//! * `α = 2`: weighted least squares, solved once.
//! * `α ∈ [1, ∞)`: iteratively reweighted least squares with backtracking.
//! * `α ∈ (0, 1)`: the objective is not convex; IRLS is run from several
//!   starts and the smallest value is reported as an upper bound.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{character_matrix, check_alpha, require_nonempty_nonnegative, DensityOptions};
use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::measure::DiscreteMeasure;

const OBJECTIVE_TOL: f64 = 1e-10;
const RESIDUAL_CLIP: f64 = 1e-12;
const MAX_ITERATIONS: usize = 1000;
const MAX_HALVINGS: usize = 40;
const RANDOM_STARTS: usize = 8;
const START_SEED: u64 = 0x5eed_a1fa;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ApproxStatus {
    /// Closed-form least squares (`α = 2`).
    Exact,
    /// IRLS stopped on the objective-decrease tolerance.
    Converged,
    /// IRLS hit the iteration cap; the value is the best one found.
    NotConverged,
    /// `α < 1`: the value is an upper bound from multistart local descent.
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxOutcome {
    /// `(Σ w_i |f_i − p_i|^α)^{min(1, 1/α)}` at the best `p` found.
    pub error: f64,
    /// `Σ w_i |f_i − p_i|^α` at the same `p`.
    pub objective: f64,
    pub status: ApproxStatus,
    pub iterations: usize,
}

struct Problem {
    basis: DMatrix<Complex64>,
    weights: Vec<f64>,
    target: DVector<Complex64>,
    alpha: f64,
}

impl Problem {
    fn residual(&self, z: &DVector<Complex64>) -> DVector<Complex64> {
        &self.target - &self.basis * z
    }

    fn objective(&self, z: &DVector<Complex64>) -> f64 {
        self.residual(z)
            .iter()
            .zip(&self.weights)
            .map(|(r, w)| w * r.norm().powf(self.alpha))
            .sum()
    }

    /// Minimizer of `Σ v_i |f_i − (U z)_i|²`.
    fn weighted_least_squares(&self, v: &[f64]) -> DVector<Complex64> {
        let cols = self.basis.ncols();
        if cols == 0 {
            return DVector::zeros(0);
        }
        let sqrt_v: Vec<f64> = v.iter().map(|x| x.sqrt()).collect();
        let scaled = DMatrix::from_fn(self.basis.nrows(), cols, |i, j| {
            self.basis[(i, j)] * sqrt_v[i]
        });
        let rhs = DVector::from_fn(self.target.len(), |i, _| self.target[i] * sqrt_v[i]);
        let svd = scaled.svd(true, true);
        let eps = svd.singular_values.max() * 1e-15;
        svd.solve(&rhs, eps).expect("both factors were computed")
    }

    fn irls_weights(&self, z: &DVector<Complex64>) -> Vec<f64> {
        let exponent = self.alpha - 2.0;
        self.residual(z)
            .iter()
            .zip(&self.weights)
            .map(|(r, w)| {
                let factor = if exponent < 0.0 {
                    r.norm().max(RESIDUAL_CLIP).powf(exponent)
                } else {
                    r.norm().powf(exponent).max(RESIDUAL_CLIP)
                };
                w * factor
            })
            .collect()
    }

    /// Damped IRLS from `start`; returns `(z, objective, iterations, converged)`.
    fn descend(&self, start: DVector<Complex64>) -> (DVector<Complex64>, f64, usize, bool) {
        let mut z = start;
        let mut value = self.objective(&z);
        for it in 1..=MAX_ITERATIONS {
            if value <= f64::MIN_POSITIVE {
                return (z, value, it - 1, true);
            }
            let proposal = self.weighted_least_squares(&self.irls_weights(&z));
            let step = &proposal - &z;
            let mut theta = 1.0;
            let mut accepted = None;
            for _ in 0..MAX_HALVINGS {
                let candidate = &z + &step * Complex64::new(theta, 0.0);
                let cv = self.objective(&candidate);
                if cv <= value {
                    accepted = Some((candidate, cv));
                    break;
                }
                theta *= 0.5;
            }
            let Some((candidate, cv)) = accepted else {
                return (z, value, it, true);
            };
            let decrease = value - cv;
            z = candidate;
            let previous = value;
            value = cv;
            if decrease <= OBJECTIVE_TOL * previous {
                return (z, value, it, true);
            }
        }
        (z, value, MAX_ITERATIONS, false)
    }
}

/// Distance in `L^α(μ)` from `f` (given on `supp μ` in atom order) to `P(H)`.
pub fn best_approximation_error(
    m: &DiscreteMeasure,
    h: &Subgroup,
    f: &[Complex64],
    alpha: f64,
    opts: &DensityOptions,
) -> Result<ApproxOutcome> {
    check_alpha(alpha)?;
    require_nonempty_nonnegative(m)?;
    if f.len() != m.len() {
        return Err(Error::LengthMismatch {
            expected: m.len(),
            found: f.len(),
        });
    }
    let cm = character_matrix(m, h, &opts.limits)?;
    let svd = cm.entries().clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let max = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > opts.rel_tol * max)
        .collect();
    let basis = DMatrix::from_fn(u.nrows(), keep.len(), |i, j| u[(i, keep[j])]);

    let problem = Problem {
        basis,
        weights: m.atoms().iter().map(|a| a.weight.re).collect(),
        target: DVector::from_column_slice(f),
        alpha,
    };
    let finish = |objective: f64, status, iterations| ApproxOutcome {
        error: objective.powf(1f64.min(1.0 / alpha)),
        objective,
        status,
        iterations,
    };

    let least_squares = problem.weighted_least_squares(&problem.weights);
    if alpha == 2.0 {
        return Ok(finish(problem.objective(&least_squares), ApproxStatus::Exact, 1));
    }
    if alpha >= 1.0 {
        let (_, value, iterations, converged) = problem.descend(least_squares);
        let status = if converged {
            ApproxStatus::Converged
        } else {
            ApproxStatus::NotConverged
        };
        return Ok(finish(value, status, iterations));
    }

    // Nonconvex range: least squares, the L1 solution, and seeded random starts.
    let l1 = Problem { alpha: 1.0, ..problem };
    let (l1_start, _, _, _) = l1.descend(least_squares.clone());
    let problem = Problem { alpha, ..l1 };
    let scale = problem.target.norm().max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut starts = vec![least_squares, l1_start];
    for _ in 0..RANDOM_STARTS {
        starts.push(DVector::from_fn(problem.basis.ncols(), |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale
        }));
    }
    let mut best = f64::INFINITY;
    let mut total_iterations = 0;
    for start in starts {
        let (_, value, iterations, _) = problem.descend(start);
        total_iterations += iterations;
        best = best.min(value);
    }
    Ok(finish(best, ApproxStatus::Heuristic, total_iterations))
}
