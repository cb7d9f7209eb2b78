//! Exact arithmetic on finite abelian groups `Z_{n_1} ⊕ ... ⊕ Z_{n_r}`.
//!
//! The same [`GroupSpec`] houses both a group `G` and its dual `Γ`, joined by
//! the pairing `⟨γ, x⟩ = exp(2πi Σ γ_j x_j / n_j)`. Pairing values are kept as
//! exact rotations in `Q/Z`; floating point only enters when a caller asks for
//! the complex number.

use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice;

/// Default bound on `|G|` accepted by [`GroupSpec::new`].
pub const DEFAULT_MAX_ORDER: u64 = 10_000_000;
/// Default bound on the number of elements any enumeration may produce.
pub const DEFAULT_MAX_ENUMERATION: u64 = 1_000_000;

/// Size bounds applied when building groups and enumerating their elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_order: u64,
    pub max_enumeration: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: DEFAULT_MAX_ORDER,
            max_enumeration: DEFAULT_MAX_ENUMERATION,
        }
    }
}

impl Limits {
    pub fn check_enumeration(&self, count: u64) -> Result<()> {
        if count > self.max_enumeration {
            return Err(Error::EnumerationBoundExceeded {
                count,
                bound: self.max_enumeration,
            });
        }
        Ok(())
    }
}

/// A finite abelian group given by its cyclic factors, stored as given.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GroupSpec {
    #[serde(rename = "invariant_factors")]
    factors: Vec<u64>,
    #[serde(skip)]
    order: u64,
    #[serde(skip)]
    exponent: u64,
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z_1");
        }
        let parts: Vec<String> = self.factors.iter().map(|n| format!("Z_{n}")).collect();
        write!(f, "{}", parts.join("⊕"))
    }
}

/// Builds a group with the default order bound.
pub fn make_group(factors: &[i64]) -> Result<GroupSpec> {
    GroupSpec::with_limits(factors, &Limits::default())
}

impl GroupSpec {
    pub fn new(factors: &[i64]) -> Result<Self> {
        make_group(factors)
    }

    pub fn with_limits(factors: &[i64], limits: &Limits) -> Result<Self> {
        let mut order: u128 = 1;
        let mut stored = Vec::with_capacity(factors.len());
        for (index, &value) in factors.iter().enumerate() {
            if value < 1 {
                return Err(Error::InvalidFactor { index, value });
            }
            order = order.saturating_mul(value as u128);
            if order > limits.max_order as u128 {
                return Err(Error::OrderBoundExceeded {
                    order,
                    bound: limits.max_order,
                });
            }
            stored.push(value as u64);
        }
        Ok(Self::from_checked(stored))
    }

    /// Internal constructor for factor lists already known to be in bounds.
    pub(crate) fn from_checked(factors: Vec<u64>) -> Self {
        let order = factors.iter().product();
        let exponent = factors.iter().fold(1u64, |acc, &n| acc.lcm(&n));
        GroupSpec {
            factors,
            order,
            exponent,
        }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    /// Element with the given coordinates reduced modulo the factors.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        self.check_len(coords.len())?;
        Ok(GroupElement(
            coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                .collect(),
        ))
    }

    /// Checks that `el` has the right rank and reduced coordinates.
    pub fn check(&self, el: &GroupElement) -> Result<()> {
        self.check_len(el.0.len())?;
        if el.0.iter().zip(&self.factors).any(|(&c, &n)| c >= n) {
            return Err(Error::CoordinateOutOfRange {
                coords: el.0.clone(),
            });
        }
        Ok(())
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found,
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.factors)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        )
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.factors)
                .map(|((&x, &y), &n)| (x + n - y) % n)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.sub(&self.zero(), a)
    }

    /// Position of `el` in the lexicographic enumeration of the group.
    pub fn index_of(&self, el: &GroupElement) -> usize {
        el.0.iter()
            .zip(&self.factors)
            .fold(0u64, |acc, (&c, &n)| acc * n + c) as usize
    }

    /// Inverse of [`GroupSpec::index_of`].
    pub fn element_at(&self, mut index: usize) -> GroupElement {
        let mut coords = vec![0u64; self.rank()];
        for (c, &n) in coords.iter_mut().zip(&self.factors).rev() {
            *c = index as u64 % n;
            index /= n as usize;
        }
        GroupElement(coords)
    }

    /// All elements in lexicographic order.
    pub fn elements(&self, limits: &Limits) -> Result<Vec<GroupElement>> {
        limits.check_enumeration(self.order)?;
        Ok((0..self.order as usize).map(|i| self.element_at(i)).collect())
    }

    /// `⟨γ, x⟩` as the exact rotation `Σ γ_j x_j / n_j mod 1`.
    pub fn pairing(&self, gamma: &GroupElement, x: &GroupElement) -> Result<Rotation> {
        self.check(gamma)?;
        self.check(x)?;
        Ok(self.pairing_unchecked(gamma, x))
    }

    pub(crate) fn pairing_unchecked(&self, gamma: &GroupElement, x: &GroupElement) -> Rotation {
        let l = self.exponent as u128;
        let num = gamma
            .0
            .iter()
            .zip(&x.0)
            .zip(&self.factors)
            .fold(0u128, |acc, ((&g, &y), &n)| {
                let term = (g as u128 * y as u128) % n as u128 * (l / n as u128);
                (acc + term) % l
            });
        Rotation::new(num as u64, self.exponent)
    }

    /// `k` with `⟨γ, x⟩ = exp(2πi k / exponent)`.
    pub(crate) fn pairing_index(&self, gamma: &GroupElement, x: &GroupElement) -> u64 {
        let l = self.exponent as u128;
        gamma
            .0
            .iter()
            .zip(&x.0)
            .zip(&self.factors)
            .fold(0u128, |acc, ((&g, &y), &n)| {
                let term = (g as u128 * y as u128) % n as u128 * (l / n as u128);
                (acc + term) % l
            }) as u64
    }

    /// Complex character values of this group, tabulated when the exponent is small.
    pub(crate) fn characters(&self) -> Characters<'_> {
        let roots = (self.exponent <= ROOT_TABLE_MAX).then(|| {
            (0..self.exponent)
                .map(|k| Rotation::new(k, self.exponent).to_complex())
                .collect()
        });
        Characters { spec: self, roots }
    }
}

const ROOT_TABLE_MAX: u64 = 1 << 16;

pub(crate) struct Characters<'a> {
    spec: &'a GroupSpec,
    roots: Option<Vec<Complex64>>,
}

impl Characters<'_> {
    /// `⟨γ, x⟩` as a complex number.
    pub(crate) fn value(&self, gamma: &GroupElement, x: &GroupElement) -> Complex64 {
        match &self.roots {
            Some(r) => r[self.spec.pairing_index(gamma, x) as usize],
            None => self.spec.pairing_unchecked(gamma, x).to_complex(),
        }
    }
}

/// An element of a [`GroupSpec`]; coordinate `j` lies in `[0, n_j)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub(crate) Vec<u64>);

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A point `num/den` of `Q/Z`, standing for `exp(2πi num/den)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rotation {
    num: u64,
    den: u64,
}

impl Rotation {
    pub const ZERO: Rotation = Rotation { num: 0, den: 1 };

    pub fn new(num: u64, den: u64) -> Self {
        assert!(den >= 1, "rotation denominator must be positive");
        let num = num % den;
        if num == 0 {
            return Rotation::ZERO;
        }
        let g = num.gcd(&den);
        Rotation {
            num: num / g,
            den: den / g,
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn add(self, other: Rotation) -> Rotation {
        let den = self.den.lcm(&other.den);
        let num = (self.num as u128 * (den / self.den) as u128
            + other.num as u128 * (den / other.den) as u128)
            % den as u128;
        Rotation::new(num as u64, den)
    }

    pub fn to_complex(self) -> Complex64 {
        let angle = std::f64::consts::TAU * self.num as f64 / self.den as f64;
        Complex64::from_polar(1.0, angle)
    }
}

/// A subgroup in canonical form: the Hermite basis of its preimage lattice in
/// `Z^r` (which always contains `diag(n_1, ..., n_r)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    parent: GroupSpec,
    basis: Vec<Vec<u64>>,
    order: u64,
}

impl Subgroup {
    pub fn from_generators(spec: &GroupSpec, gens: &[GroupElement]) -> Result<Self> {
        for g in gens {
            spec.check(g)?;
        }
        let rows: Vec<Vec<i64>> = gens
            .iter()
            .map(|g| g.0.iter().map(|&c| c as i64).collect())
            .collect();
        Ok(Self::from_lattice_rows(spec, &rows))
    }

    fn from_lattice_rows(spec: &GroupSpec, rows: &[Vec<i64>]) -> Self {
        let basis = lattice::hermite_with_moduli(&spec.factors, rows);
        let index: u64 = basis.iter().enumerate().map(|(i, row)| row[i]).product();
        Subgroup {
            parent: spec.clone(),
            order: spec.order / index,
            basis,
        }
    }

    pub fn trivial(spec: &GroupSpec) -> Self {
        Self::from_lattice_rows(spec, &[])
    }

    pub fn whole(spec: &GroupSpec) -> Self {
        let rows: Vec<Vec<i64>> = (0..spec.rank())
            .map(|i| {
                let mut e = vec![0; spec.rank()];
                e[i] = 1;
                e
            })
            .collect();
        Self::from_lattice_rows(spec, &rows)
    }

    pub fn parent(&self) -> &GroupSpec {
        &self.parent
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Index `[G : H]`.
    pub fn index(&self) -> u64 {
        self.parent.order / self.order
    }

    fn pivots(&self) -> impl Iterator<Item = u64> + '_ {
        self.basis.iter().enumerate().map(|(i, row)| row[i])
    }

    /// Canonical generating set: basis rows that are nonzero modulo the factors.
    pub fn generators(&self) -> Vec<GroupElement> {
        self.basis
            .iter()
            .map(|row| {
                GroupElement(
                    row.iter()
                        .zip(&self.parent.factors)
                        .map(|(&c, &n)| c % n)
                        .collect(),
                )
            })
            .filter(|g| !g.is_zero())
            .collect()
    }

    pub fn contains(&self, el: &GroupElement) -> Result<bool> {
        self.parent.check(el)?;
        let r = self.parent.rank();
        let mut v: Vec<u64> = el.0.clone();
        for i in 0..r {
            let d = self.basis[i][i];
            if !v[i].is_multiple_of(d) {
                return Ok(false);
            }
            let c = v[i] / d;
            for j in i..r {
                let n = self.parent.factors[j];
                v[j] = (v[j] + n - (c * self.basis[i][j]) % n) % n;
            }
        }
        Ok(true)
    }

    /// All elements of the subgroup in lexicographic order.
    pub fn elements(&self, limits: &Limits) -> Result<Vec<GroupElement>> {
        limits.check_enumeration(self.order)?;
        let spec = &self.parent;
        let r = spec.rank();
        let ranges: Vec<u64> = self
            .pivots()
            .zip(&spec.factors)
            .map(|(d, &n)| n / d)
            .collect();
        let mut out = Vec::with_capacity(self.order as usize);
        let mut counter = vec![0u64; r];
        loop {
            let mut coords = vec![0u64; r];
            for (i, &c) in counter.iter().enumerate() {
                for j in i..r {
                    let n = spec.factors[j];
                    coords[j] = (coords[j] + c * self.basis[i][j]) % n;
                }
            }
            out.push(GroupElement(coords));
            // mixed-radix increment
            let mut i = r;
            loop {
                if i == 0 {
                    out.sort_unstable();
                    return Ok(out);
                }
                i -= 1;
                counter[i] += 1;
                if counter[i] < ranges[i] {
                    break;
                }
                counter[i] = 0;
            }
        }
    }
}

/// `Λ = { γ : ⟨γ, y⟩ = 1 for all y ∈ H }`, solved on the lattice basis of `H`.
pub fn annihilator(spec: &GroupSpec, h: &Subgroup) -> Result<Subgroup> {
    if h.parent != *spec {
        return Err(Error::ParentMismatch);
    }
    let rows = lattice::scaled_dual_rows(&spec.factors, &h.basis);
    Ok(Subgroup::from_lattice_rows(spec, &rows))
}

/// The projection `Γ → Γ/Λ`, with the lexicographically smallest element of
/// each coset as its representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientMap {
    parent: GroupSpec,
    lambda: Subgroup,
    quotient_spec: GroupSpec,
}

pub fn quotient(spec: &GroupSpec, lambda: &Subgroup) -> Result<QuotientMap> {
    if lambda.parent != *spec {
        return Err(Error::ParentMismatch);
    }
    let factors: Vec<u64> = lattice::smith_diagonal(&lambda.basis)
        .into_iter()
        .filter(|&s| s > 1)
        .collect();
    Ok(QuotientMap {
        parent: spec.clone(),
        lambda: lambda.clone(),
        quotient_spec: GroupSpec::from_checked(factors),
    })
}

impl QuotientMap {
    pub fn parent(&self) -> &GroupSpec {
        &self.parent
    }

    pub fn lambda(&self) -> &Subgroup {
        &self.lambda
    }

    /// `Γ/Λ` up to isomorphism, as a divisibility chain.
    pub fn quotient_spec(&self) -> &GroupSpec {
        &self.quotient_spec
    }

    pub fn coset_count(&self) -> u64 {
        self.lambda.index()
    }

    /// Lexicographically smallest element of `γ + Λ`.
    ///
    /// Greedy reduction against the Hermite basis: coordinate `i` can only move
    /// within its residue class modulo pivot `d_i` once earlier coordinates are
    /// fixed, so reducing it into `[0, d_i)` is optimal at each step.
    pub fn canonical_rep(&self, gamma: &GroupElement) -> GroupElement {
        let spec = &self.parent;
        let basis = &self.lambda.basis;
        let mut v = gamma.0.clone();
        for i in 0..spec.rank() {
            let d = basis[i][i];
            let c = v[i] / d;
            if c == 0 {
                continue;
            }
            for j in i..spec.rank() {
                let n = spec.factors[j];
                v[j] = (v[j] + n - (c * basis[i][j]) % n) % n;
            }
        }
        GroupElement(v)
    }

    /// Dense index in `[0, coset_count)` of the coset of `gamma`.
    pub fn coset_index(&self, gamma: &GroupElement) -> usize {
        let rep = self.canonical_rep(gamma);
        rep.0
            .iter()
            .zip(self.lambda.pivots())
            .fold(0u64, |acc, (&c, d)| acc * d + c) as usize
    }

    /// All canonical representatives in lexicographic order.
    pub fn representatives(&self, limits: &Limits) -> Result<Vec<GroupElement>> {
        let count = self.coset_count();
        limits.check_enumeration(count)?;
        let pivots: Vec<u64> = self.lambda.pivots().collect();
        Ok((0..count)
            .map(|mut idx| {
                let mut coords = vec![0u64; pivots.len()];
                for (c, &d) in coords.iter_mut().zip(&pivots).rev() {
                    *c = idx % d;
                    idx /= d;
                }
                GroupElement(coords)
            })
            .collect())
    }

    pub fn same_coset(&self, a: &GroupElement, b: &GroupElement) -> bool {
        self.canonical_rep(a) == self.canonical_rep(b)
    }
}
