//! Density of trigonometric `H`-polynomials in `L^α(μ)` for finitely supported `μ`.
//!
//! Two independent deciders are provided. [`is_dense_rank`] looks only at the
//! numerical rank of the character matrix; [`is_dense_coset`] looks only at how
//! the support sits relative to the cosets of `Λ = annihilator(H)`. They agree
//! on every instance, and the sweep drivers check exactly that.

mod approx;

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{GroupElement, Limits, QuotientMap, Rotation, Subgroup};
use crate::measure::{self, Concentration, DiscreteMeasure, WeightKind};
use crate::transversal::{self, PointSet};

pub use approx::{best_approximation_error, ApproxOutcome, ApproxStatus};

/// Default relative singular-value threshold for numerical rank.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityOptions {
    /// Singular values at or below `rel_tol * σ_max` count as zero.
    pub rel_tol: f64,
    pub limits: Limits,
}

impl Default for DensityOptions {
    fn default() -> Self {
        DensityOptions {
            rel_tol: DEFAULT_REL_TOL,
            limits: Limits::default(),
        }
    }
}

/// Values `⟨γ_i, y_k⟩` for support points `γ_i` (rows) and all `y_k ∈ H` (columns).
#[derive(Debug, Clone)]
pub struct CharacterMatrix {
    rows: Vec<GroupElement>,
    cols: Vec<GroupElement>,
    rotations: Vec<Rotation>,
    entries: DMatrix<Complex64>,
}

impl CharacterMatrix {
    pub fn rows(&self) -> &[GroupElement] {
        &self.rows
    }

    pub fn cols(&self) -> &[GroupElement] {
        &self.cols
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn rotation(&self, row: usize, col: usize) -> Rotation {
        self.rotations[row * self.cols.len() + col]
    }

    /// Exact comparison of two rows through their rotations.
    pub fn rows_identical(&self, a: usize, b: usize) -> bool {
        let n = self.cols.len();
        self.rotations[a * n..(a + 1) * n] == self.rotations[b * n..(b + 1) * n]
    }
}

pub fn character_matrix(m: &DiscreteMeasure, h: &Subgroup, limits: &Limits) -> Result<CharacterMatrix> {
    if m.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    character_matrix_on(&m.support(), h, limits)
}

/// Character matrix over an arbitrary ordered point set.
pub fn character_matrix_on(points: &PointSet, h: &Subgroup, limits: &Limits) -> Result<CharacterMatrix> {
    if points.parent() != h.parent() {
        return Err(Error::ParentMismatch);
    }
    let spec = h.parent();
    let cols = h.elements(limits)?;
    let rows = points.points().to_vec();
    let rotations: Vec<Rotation> = rows
        .iter()
        .flat_map(|g| cols.iter().map(move |y| spec.pairing_unchecked(g, y)))
        .collect();
    let n = cols.len();
    let entries = DMatrix::from_fn(rows.len(), n, |i, k| rotations[i * n + k].to_complex());
    Ok(CharacterMatrix {
        rows,
        cols,
        rotations,
        entries,
    })
}

/// Number of singular values above `rel_tol * σ_max`.
pub fn numerical_rank(matrix: &DMatrix<Complex64>, rel_tol: f64) -> usize {
    if matrix.is_empty() {
        return 0;
    }
    let sv = matrix.singular_values();
    let max = sv.max();
    if max <= 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rank,
    Coset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// The support itself, a partial transversal carrying all of `μ`.
    Support(PointSet),
    /// A coset carrying two or more atoms.
    ViolatingCoset(GroupElement),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityVerdict {
    pub dense: bool,
    pub method: Method,
    pub rank: usize,
    pub support_size: usize,
    pub witness: Option<Witness>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

fn require_nonempty_nonnegative(m: &DiscreteMeasure) -> Result<()> {
    if m.kind() != WeightKind::NonNegative {
        return Err(Error::ExpectedNonNegative);
    }
    if m.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    Ok(())
}

/// Decides density by the rank of the restriction map `P(H) → L^α(μ)`.
///
/// The space is finite dimensional, so density means surjectivity and the
/// answer does not depend on `alpha`; it is validated and otherwise unused.
pub fn is_dense_rank(
    m: &DiscreteMeasure,
    h: &Subgroup,
    alpha: f64,
    opts: &DensityOptions,
) -> Result<DensityVerdict> {
    check_alpha(alpha)?;
    require_nonempty_nonnegative(m)?;
    let cm = character_matrix(m, h, &opts.limits)?;
    let rank = numerical_rank(cm.entries(), opts.rel_tol);
    let support_size = m.len();
    let dense = rank == support_size;
    Ok(DensityVerdict {
        dense,
        method: Method::Rank,
        rank,
        support_size,
        witness: dense.then(|| Witness::Support(m.support())),
    })
}

/// Decides density combinatorially: dense iff `μ` is concentrated on a
/// transversal of `Λ`. `q` must be the quotient by `annihilator(H)`.
pub fn is_dense_coset(m: &DiscreteMeasure, q: &QuotientMap) -> Result<DensityVerdict> {
    require_nonempty_nonnegative(m)?;
    let cosets: BTreeSet<GroupElement> = m.atoms().iter().map(|a| q.canonical_rep(&a.point)).collect();
    let verdict = measure::is_concentrated_on_transversal(m, q)?;
    let (dense, witness) = match verdict {
        Concentration::Concentrated { witness } => (true, Witness::Support(witness)),
        Concentration::Violated { coset_rep } => (false, Witness::ViolatingCoset(coset_rep)),
    };
    Ok(DensityVerdict {
        dense,
        method: Method::Coset,
        rank: cosets.len(),
        support_size: m.len(),
        witness: Some(witness),
    })
}

/// Nonempty `T_λκ = T_λ ∩ T_κ` for `λ ≠ κ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlap {
    pub lambda: GroupElement,
    pub kappa: GroupElement,
    pub points: PointSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extraction {
    /// `D = ⋃ (λ + T_λ)`; `translates` lists the nonempty `(λ, T_λ)`.
    Success {
        set: PointSet,
        translates: Vec<(GroupElement, PointSet)>,
    },
    /// Some `T_λκ` is nonempty. `partial_set` is `⋃ (λ + T_λ^d)` with the
    /// overlaps removed; it misses part of the mass of `μ`.
    Failure {
        overlaps: Vec<Overlap>,
        partial_set: PointSet,
    },
}

impl Extraction {
    pub fn is_success(&self) -> bool {
        matches!(self, Extraction::Success { .. })
    }
}

/// Builds the concentration set by translating each slice of `μ` lying over
/// `λ + T` back onto a fixed transversal `T` and intersecting the supports.
pub fn extract_concentration_set(
    m: &DiscreteMeasure,
    q: &QuotientMap,
    limits: &Limits,
) -> Result<Extraction> {
    if m.kind() != WeightKind::NonNegative {
        return Err(Error::ExpectedNonNegative);
    }
    if m.parent() != q.parent() {
        return Err(Error::ParentMismatch);
    }
    let spec = q.parent();
    let reference = transversal::canonical_transversal(q, limits)?;

    let mut translates: Vec<(GroupElement, PointSet)> = Vec::new();
    for lambda in q.lambda().elements(limits)? {
        let slice = measure::restrict(m, &reference.translate(&lambda))?;
        if slice.is_empty() {
            continue;
        }
        let moved = measure::translate(&slice, &lambda)?;
        translates.push((lambda, moved.support()));
    }

    let mut overlaps = Vec::new();
    for (i, (lambda, t_l)) in translates.iter().enumerate() {
        for (kappa, t_k) in &translates[i + 1..] {
            let common: Vec<GroupElement> = t_l
                .points()
                .iter()
                .filter(|p| t_k.contains(p))
                .cloned()
                .collect();
            if !common.is_empty() {
                overlaps.push(Overlap {
                    lambda: lambda.clone(),
                    kappa: kappa.clone(),
                    points: PointSet::from_sorted(spec, common),
                });
            }
        }
    }

    let mut d: Vec<GroupElement> = Vec::new();
    for (lambda, t_l) in &translates {
        for p in t_l.points() {
            let shared = overlaps.iter().any(|o| {
                (&o.lambda == lambda || &o.kappa == lambda) && o.points.contains(p)
            });
            if !shared {
                d.push(spec.add(p, lambda));
            }
        }
    }
    d.sort_unstable();
    let set = PointSet::from_sorted(spec, d);

    Ok(if overlaps.is_empty() {
        Extraction::Success { set, translates }
    } else {
        Extraction::Failure {
            overlaps,
            partial_set: set,
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NullSpaceReport {
    /// Dimension of `{ ν : Σ_i ν_i ⟨γ_i, y⟩ = 0 for all y ∈ H }` over the support.
    pub dimension: usize,
    pub rank: usize,
    pub support_size: usize,
    /// Whether the support meets each `Λ`-coset at most once.
    pub partial_transversal: bool,
}

/// Left null space of the character matrix over `support`: the complex
/// measures on `support` whose Fourier coefficients vanish on all of `H`.
pub fn annihilating_null_space(
    support: &PointSet,
    h: &Subgroup,
    q: &QuotientMap,
    opts: &DensityOptions,
) -> Result<NullSpaceReport> {
    if support.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    if q.parent() != support.parent() {
        return Err(Error::ParentMismatch);
    }
    let cm = character_matrix_on(support, h, &opts.limits)?;
    let rank = numerical_rank(cm.entries(), opts.rel_tol);
    Ok(NullSpaceReport {
        dimension: support.len() - rank,
        rank,
        support_size: support.len(),
        partial_transversal: transversal::is_partial_transversal(q, support),
    })
}
