//! Transversals and cross-sections of `Λ` in `Γ`.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, Limits, QuotientMap};

/// An explicit finite subset of a group, kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointSet {
    #[serde(skip)]
    parent: GroupSpec,
    points: Vec<GroupElement>,
}

impl PointSet {
    /// Validates every point, then sorts and removes duplicates.
    pub fn new(parent: &GroupSpec, mut points: Vec<GroupElement>) -> Result<Self> {
        for p in &points {
            parent.check(p)?;
        }
        points.sort_unstable();
        points.dedup();
        Ok(PointSet {
            parent: parent.clone(),
            points,
        })
    }

    pub fn empty(parent: &GroupSpec) -> Self {
        PointSet {
            parent: parent.clone(),
            points: Vec::new(),
        }
    }

    pub(crate) fn from_sorted(parent: &GroupSpec, points: Vec<GroupElement>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        PointSet {
            parent: parent.clone(),
            points,
        }
    }

    pub fn parent(&self) -> &GroupSpec {
        &self.parent
    }

    pub fn points(&self) -> &[GroupElement] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &GroupElement) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// `λ + S`.
    pub fn translate(&self, lambda: &GroupElement) -> PointSet {
        let mut points: Vec<_> = self
            .points
            .iter()
            .map(|p| self.parent.add(p, lambda))
            .collect();
        points.sort_unstable();
        PointSet::from_sorted(&self.parent, points)
    }

    pub fn into_points(self) -> Vec<GroupElement> {
        self.points
    }
}

/// Why a set fails to be a transversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransversalDefect {
    /// Two points share the coset of `coset_rep`.
    Repeated {
        coset_rep: GroupElement,
        first: GroupElement,
        second: GroupElement,
    },
    /// No point lies in the coset of `coset_rep`.
    Missed { coset_rep: GroupElement },
}

impl std::fmt::Display for TransversalDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TransversalDefect::Repeated {
                coset_rep,
                first,
                second,
            } => write!(
                f,
                "{first:?} and {second:?} both lie in the coset of {coset_rep:?}"
            ),
            TransversalDefect::Missed { coset_rep } => {
                write!(f, "coset of {coset_rep:?} is not hit")
            }
        }
    }
}

/// First coset (in point order) hit twice by `s`, if any.
pub fn find_repeated_coset(q: &QuotientMap, s: &PointSet) -> Option<TransversalDefect> {
    let mut seen: BTreeMap<GroupElement, &GroupElement> = BTreeMap::new();
    for p in s.points() {
        let rep = q.canonical_rep(p);
        if let Some(first) = seen.get(&rep) {
            return Some(TransversalDefect::Repeated {
                coset_rep: rep,
                first: (*first).clone(),
                second: p.clone(),
            });
        }
        seen.insert(rep, p);
    }
    None
}

/// No two distinct points of `s` share a `Λ`-coset.
pub fn is_partial_transversal(q: &QuotientMap, s: &PointSet) -> bool {
    find_repeated_coset(q, s).is_none()
}

/// Checks both halves of the transversal property and reports the first defect.
pub fn check_transversal(q: &QuotientMap, t: &PointSet) -> std::result::Result<(), TransversalDefect> {
    if let Some(defect) = find_repeated_coset(q, t) {
        return Err(defect);
    }
    if (t.len() as u64) < q.coset_count() {
        // Injective but short: find the first representative that is missed.
        let hit: std::collections::BTreeSet<GroupElement> =
            t.points().iter().map(|p| q.canonical_rep(p)).collect();
        let limits = Limits {
            max_enumeration: u64::MAX,
            ..Limits::default()
        };
        let reps = q
            .representatives(&limits)
            .expect("enumeration is unbounded here");
        let coset_rep = reps
            .into_iter()
            .find(|r| !hit.contains(r))
            .expect("fewer points than cosets leaves a coset unhit");
        return Err(TransversalDefect::Missed { coset_rep });
    }
    Ok(())
}

/// `t` meets every `Λ`-coset exactly once.
pub fn is_transversal(q: &QuotientMap, t: &PointSet) -> bool {
    find_repeated_coset(q, t).is_none() && t.len() as u64 == q.coset_count()
}

/// The lexicographically minimal representative of every coset.
pub fn canonical_transversal(q: &QuotientMap, limits: &Limits) -> Result<PointSet> {
    let reps = q.representatives(limits)?;
    Ok(PointSet::from_sorted(q.parent(), reps))
}

/// `S ∪ (R ∖ π⁻¹(π(S)))`: extends the partial transversal `s` to a full one
/// using `r` on the cosets `s` leaves untouched.
pub fn merge_transversal(q: &QuotientMap, s: &PointSet, r: &PointSet) -> Result<PointSet> {
    if s.parent() != q.parent() || r.parent() != q.parent() {
        return Err(Error::ParentMismatch);
    }
    if let Some(TransversalDefect::Repeated { coset_rep, .. }) = find_repeated_coset(q, s) {
        return Err(Error::MergePartialInvalid { coset_rep });
    }
    if let Err(defect) = check_transversal(q, r) {
        return Err(Error::MergeBaseInvalid {
            reason: defect.to_string(),
        });
    }
    let hit: std::collections::BTreeSet<GroupElement> =
        s.points().iter().map(|p| q.canonical_rep(p)).collect();
    let mut points: Vec<GroupElement> = s.points().to_vec();
    points.extend(
        r.points()
            .iter()
            .filter(|p| !hit.contains(&q.canonical_rep(p)))
            .cloned(),
    );
    points.sort_unstable();
    Ok(PointSet::from_sorted(q.parent(), points))
}

/// A right inverse `τ` of the projection: one chosen element per coset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossSection {
    quotient: QuotientMap,
    table: BTreeMap<GroupElement, GroupElement>,
}

impl CrossSection {
    pub fn quotient(&self) -> &QuotientMap {
        &self.quotient
    }

    /// `τ(π(γ))`.
    pub fn section_of(&self, gamma: &GroupElement) -> &GroupElement {
        &self.table[&self.quotient.canonical_rep(gamma)]
    }

    /// `(coset_rep, image)` pairs sorted by representative.
    pub fn entries(&self) -> impl Iterator<Item = (&GroupElement, &GroupElement)> {
        self.table.iter()
    }
}

impl Serialize for CrossSection {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            coset_rep: &'a GroupElement,
            image: &'a GroupElement,
        }
        serializer.collect_seq(
            self.table
                .iter()
                .map(|(coset_rep, image)| Entry { coset_rep, image }),
        )
    }
}

pub fn cross_section(q: &QuotientMap, t: &PointSet) -> Result<CrossSection> {
    if t.parent() != q.parent() {
        return Err(Error::ParentMismatch);
    }
    check_transversal(q, t).map_err(|d| Error::NotTransversal {
        reason: d.to_string(),
    })?;
    let table = t
        .points()
        .iter()
        .map(|p| (q.canonical_rep(p), p.clone()))
        .collect();
    Ok(CrossSection {
        quotient: q.clone(),
        table,
    })
}
