//! Finitely supported measures on `Γ`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, QuotientMap, Subgroup};
use crate::transversal::PointSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightKind {
    /// Positive real weights.
    NonNegative,
    /// Nonzero complex weights.
    Complex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub point: GroupElement,
    pub weight: Complex64,
}

/// A sum of weighted point masses; atoms are sorted by point and carry no
/// zero weights, so the support is exactly the atom set.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    parent: GroupSpec,
    kind: WeightKind,
    atoms: Vec<Atom>,
}

impl DiscreteMeasure {
    pub fn nonnegative(parent: &GroupSpec, atoms: Vec<(GroupElement, f64)>) -> Result<Self> {
        for (point, w) in &atoms {
            if *w == 0.0 {
                return Err(Error::ZeroWeight {
                    point: point.clone(),
                });
            }
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::InvalidWeight {
                    point: point.clone(),
                    weight: w.to_string(),
                });
            }
        }
        Self::build(
            parent,
            WeightKind::NonNegative,
            atoms
                .into_iter()
                .map(|(point, w)| Atom {
                    point,
                    weight: Complex64::new(w, 0.0),
                })
                .collect(),
        )
    }

    pub fn complex(parent: &GroupSpec, atoms: Vec<(GroupElement, Complex64)>) -> Result<Self> {
        for (point, w) in &atoms {
            if *w == Complex64::new(0.0, 0.0) {
                return Err(Error::ZeroWeight {
                    point: point.clone(),
                });
            }
            if !(w.re.is_finite() && w.im.is_finite()) {
                return Err(Error::InvalidWeight {
                    point: point.clone(),
                    weight: w.to_string(),
                });
            }
        }
        Self::build(
            parent,
            WeightKind::Complex,
            atoms
                .into_iter()
                .map(|(point, weight)| Atom { point, weight })
                .collect(),
        )
    }

    /// Unit-mass point mass `δ_x`.
    pub fn dirac(parent: &GroupSpec, point: GroupElement) -> Result<Self> {
        Self::nonnegative(parent, vec![(point, 1.0)])
    }

    pub fn zero(parent: &GroupSpec, kind: WeightKind) -> Self {
        DiscreteMeasure {
            parent: parent.clone(),
            kind,
            atoms: Vec::new(),
        }
    }

    fn build(parent: &GroupSpec, kind: WeightKind, mut atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            parent.check(&a.point)?;
        }
        atoms.sort_by(|a, b| a.point.cmp(&b.point));
        if let Some(w) = atoms.windows(2).find(|w| w[0].point == w[1].point) {
            return Err(Error::DuplicatePoint {
                point: w[0].point.clone(),
            });
        }
        Ok(DiscreteMeasure {
            parent: parent.clone(),
            kind,
            atoms,
        })
    }

    pub fn parent(&self) -> &GroupSpec {
        &self.parent
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Total mass `ν(Γ)`.
    pub fn mass(&self) -> Complex64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn support(&self) -> PointSet {
        PointSet::from_sorted(
            &self.parent,
            self.atoms.iter().map(|a| a.point.clone()).collect(),
        )
    }

    /// Weight at `point`, zero off the support.
    pub fn weight_at(&self, point: &GroupElement) -> Complex64 {
        self.atoms
            .binary_search_by(|a| a.point.cmp(point))
            .map(|i| self.atoms[i].weight)
            .unwrap_or_default()
    }

    fn require_nonnegative(&self) -> Result<()> {
        match self.kind {
            WeightKind::NonNegative => Ok(()),
            WeightKind::Complex => Err(Error::ExpectedNonNegative),
        }
    }

    fn with_atoms(&self, mut atoms: Vec<Atom>) -> DiscreteMeasure {
        atoms.sort_by(|a, b| a.point.cmp(&b.point));
        DiscreteMeasure {
            parent: self.parent.clone(),
            kind: self.kind,
            atoms,
        }
    }
}

/// Relative size below which a cancelled coset sum counts as zero.
const CANCELLATION_TOL: f64 = 1e-12;

/// `μπ⁻¹`, realized on the canonical coset representatives.
pub fn pushforward(m: &DiscreteMeasure, q: &QuotientMap) -> Result<DiscreteMeasure> {
    if m.parent() != q.parent() {
        return Err(Error::ParentMismatch);
    }
    let mut sums: BTreeMap<GroupElement, (Complex64, f64)> = BTreeMap::new();
    for a in m.atoms() {
        let e = sums
            .entry(q.canonical_rep(&a.point))
            .or_insert((Complex64::new(0.0, 0.0), 0.0));
        e.0 += a.weight;
        e.1 += a.weight.norm();
    }
    let atoms = sums
        .into_iter()
        .filter(|(_, (w, scale))| w.norm() > CANCELLATION_TOL * scale)
        .map(|(point, (weight, _))| Atom { point, weight })
        .collect();
    Ok(m.with_atoms(atoms))
}

/// Restrictions of `m` to the individual `Λ`-cosets it meets, keyed by
/// canonical representative.
pub fn fibers(m: &DiscreteMeasure, q: &QuotientMap) -> Result<Vec<(GroupElement, DiscreteMeasure)>> {
    m.require_nonnegative()?;
    if m.parent() != q.parent() {
        return Err(Error::ParentMismatch);
    }
    let mut groups: BTreeMap<GroupElement, Vec<Atom>> = BTreeMap::new();
    for a in m.atoms() {
        groups
            .entry(q.canonical_rep(&a.point))
            .or_default()
            .push(a.clone());
    }
    Ok(groups
        .into_iter()
        .map(|(rep, atoms)| (rep, m.with_atoms(atoms)))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Concentration {
    /// The support meets each coset at most once; it is the set `D`.
    Concentrated { witness: PointSet },
    /// The coset of `coset_rep` carries at least two atoms.
    Violated { coset_rep: GroupElement },
}

impl Concentration {
    pub fn holds(&self) -> bool {
        matches!(self, Concentration::Concentrated { .. })
    }
}

pub fn is_concentrated_on_transversal(m: &DiscreteMeasure, q: &QuotientMap) -> Result<Concentration> {
    m.require_nonnegative()?;
    if m.parent() != q.parent() {
        return Err(Error::ParentMismatch);
    }
    let mut counts: BTreeMap<GroupElement, usize> = BTreeMap::new();
    for a in m.atoms() {
        *counts.entry(q.canonical_rep(&a.point)).or_default() += 1;
    }
    Ok(match counts.into_iter().find(|(_, c)| *c >= 2) {
        Some((coset_rep, _)) => Concentration::Violated { coset_rep },
        None => Concentration::Concentrated {
            witness: m.support(),
        },
    })
}

/// `∫ ⟨γ, y⟩ ν(dγ)`, with the rotation computed exactly.
pub fn fourier_coefficient(nu: &DiscreteMeasure, h: &Subgroup, y: &GroupElement) -> Result<Complex64> {
    if nu.parent() != h.parent() {
        return Err(Error::ParentMismatch);
    }
    if !h.contains(y)? {
        return Err(Error::NotInSubgroup { element: y.clone() });
    }
    let spec = nu.parent();
    Ok(nu
        .atoms()
        .iter()
        .map(|a| a.weight * spec.pairing_unchecked(&a.point, y).to_complex())
        .sum())
}

/// Moves the atom at `γ` to `γ − λ`.
pub fn translate(m: &DiscreteMeasure, lambda: &GroupElement) -> Result<DiscreteMeasure> {
    m.parent().check(lambda)?;
    let spec = m.parent();
    let atoms = m
        .atoms()
        .iter()
        .map(|a| Atom {
            point: spec.sub(&a.point, lambda),
            weight: a.weight,
        })
        .collect();
    Ok(m.with_atoms(atoms))
}

pub fn restrict(m: &DiscreteMeasure, s: &PointSet) -> Result<DiscreteMeasure> {
    if m.parent() != s.parent() {
        return Err(Error::ParentMismatch);
    }
    Ok(m.with_atoms(
        m.atoms()
            .iter()
            .filter(|a| s.contains(&a.point))
            .cloned()
            .collect(),
    ))
}
