//! Sampling and exact reconstruction of signals on a finite abelian group `G`
//! whose spectrum lies in a partial transversal of `Λ = annihilator(H)`.
//!
//! Transforms are brute force: `x̂(γ) = Σ_g x(g) conj⟨γ, g⟩` and the inverse
//! carries `1/|G|`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{annihilator, quotient, GroupElement, GroupSpec, Limits, Subgroup};
use crate::transversal::{find_repeated_coset, PointSet, TransversalDefect};

/// One complex value per element of `G`, in lexicographic element order.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    parent: GroupSpec,
    values: Vec<Complex64>,
}

impl Signal {
    pub fn new(parent: &GroupSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() as u64 != parent.order() {
            return Err(Error::LengthMismatch {
                expected: parent.order() as usize,
                found: values.len(),
            });
        }
        Ok(Signal {
            parent: parent.clone(),
            values,
        })
    }

    pub fn zeros(parent: &GroupSpec) -> Self {
        Signal {
            parent: parent.clone(),
            values: vec![Complex64::new(0.0, 0.0); parent.order() as usize],
        }
    }

    pub fn parent(&self) -> &GroupSpec {
        &self.parent
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, g: &GroupElement) -> Complex64 {
        self.values[self.parent.index_of(g)]
    }

    /// Largest pointwise distance to `other`.
    pub fn max_abs_diff(&self, other: &Signal) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn transform(x: &Signal, sign: f64, scale: f64, limits: &Limits) -> Result<Signal> {
    let spec = x.parent();
    let elements = spec.elements(limits)?;
    let chars = spec.characters();
    let values = elements
        .iter()
        .map(|gamma| {
            let sum: Complex64 = elements
                .iter()
                .zip(&x.values)
                .map(|(g, v)| {
                    let c = chars.value(gamma, g);
                    v * if sign < 0.0 { c.conj() } else { c }
                })
                .sum();
            sum * scale
        })
        .collect();
    Ok(Signal {
        parent: spec.clone(),
        values,
    })
}

/// Unnormalized forward transform onto `Γ`.
pub fn dft(x: &Signal, limits: &Limits) -> Result<Signal> {
    transform(x, -1.0, 1.0, limits)
}

/// Inverse of [`dft`], with the `1/|G|` normalization.
pub fn idft(x_hat: &Signal, limits: &Limits) -> Result<Signal> {
    transform(x_hat, 1.0, 1.0 / x_hat.parent().order() as f64, limits)
}

/// `x(g) = Σ_{γ ∈ d} c_γ ⟨γ, g⟩`: a signal whose spectrum lies in `d`,
/// with `x̂(γ) = |G| c_γ`.
pub fn band_limited(spec: &GroupSpec, spectrum: &[(GroupElement, Complex64)], limits: &Limits) -> Result<Signal> {
    for (gamma, _) in spectrum {
        spec.check(gamma)?;
    }
    let chars = spec.characters();
    let values = spec
        .elements(limits)?
        .iter()
        .map(|g| {
            spectrum
                .iter()
                .map(|(gamma, c)| c * chars.value(gamma, g))
                .sum()
        })
        .collect();
    Ok(Signal {
        parent: spec.clone(),
        values,
    })
}

/// Values of a signal on the elements of `H`, in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleTable {
    pub points: Vec<GroupElement>,
    pub values: Vec<Complex64>,
}

pub fn sample_on_subgroup(x: &Signal, h: &Subgroup, limits: &Limits) -> Result<SampleTable> {
    if x.parent() != h.parent() {
        return Err(Error::ParentMismatch);
    }
    let points = h.elements(limits)?;
    let values = points.iter().map(|p| x.at(p)).collect();
    Ok(SampleTable { points, values })
}

/// Checks that `d` is usable as a spectrum for sampling on `h`.
fn check_spectrum(h: &Subgroup, d: &PointSet) -> Result<()> {
    let spec = h.parent();
    if d.parent() != spec {
        return Err(Error::ParentMismatch);
    }
    if d.len() as u64 > h.order() {
        return Err(Error::SpectrumTooLarge {
            size: d.len(),
            bound: h.order(),
        });
    }
    let q = quotient(spec, &annihilator(spec, h)?)?;
    if let Some(TransversalDefect::Repeated {
        coset_rep,
        first,
        second,
    }) = find_repeated_coset(&q, d)
    {
        return Err(Error::AmbiguousSpectrum {
            coset_rep,
            first,
            second,
        });
    }
    Ok(())
}

fn ordered_samples(samples: &SampleTable, h: &Subgroup, limits: &Limits) -> Result<(Vec<GroupElement>, Vec<Complex64>)> {
    let points = h.elements(limits)?;
    if samples.values.len() != points.len() || samples.points.len() != samples.values.len() {
        return Err(Error::LengthMismatch {
            expected: points.len(),
            found: samples.values.len(),
        });
    }
    let table: BTreeMap<&GroupElement, Complex64> =
        samples.points.iter().zip(samples.values.iter().copied()).collect();
    let values = points
        .iter()
        .map(|p| {
            table
                .get(p)
                .copied()
                .ok_or_else(|| Error::MissingSample { missing: p.clone() })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((points, values))
}

/// Recovers the unique signal with spectrum in `d` that matches `samples` on `H`.
///
/// The `H`-transform of the samples at a frequency `γ` equals `(|H|/|G|)` times
/// the sum of `x̂` over the coset `γ + Λ`. Because `d` meets each coset at most
/// once, that sum is `x̂(γ)` itself for `γ ∈ d`, which is then synthesized back.
pub fn reconstruct(samples: &SampleTable, h: &Subgroup, d: &PointSet, limits: &Limits) -> Result<Signal> {
    check_spectrum(h, d)?;
    let (points, values) = ordered_samples(samples, h, limits)?;
    let spec = h.parent();
    let inv_h = 1.0 / h.order() as f64;
    let chars = spec.characters();
    let coefficients: Vec<(GroupElement, Complex64)> = d
        .points()
        .iter()
        .map(|gamma| {
            let folded: Complex64 = points
                .iter()
                .zip(&values)
                .map(|(p, v)| v * chars.value(gamma, p).conj())
                .sum();
            (gamma.clone(), folded * inv_h)
        })
        .collect();
    band_limited(spec, &coefficients, limits)
}

/// `φ(g) = (1/|H|) Σ_{γ ∈ d} ⟨γ, g⟩`, so that `x(g) = Σ_{h ∈ H} x(h) φ(g − h)`
/// for every signal with spectrum in `d`.
pub fn interpolation_kernel(h: &Subgroup, d: &PointSet, limits: &Limits) -> Result<Signal> {
    check_spectrum(h, d)?;
    let spec = h.parent();
    let inv_h = Complex64::new(1.0 / h.order() as f64, 0.0);
    let unit: Vec<(GroupElement, Complex64)> =
        d.points().iter().map(|gamma| (gamma.clone(), inv_h)).collect();
    band_limited(spec, &unit, limits)
}

/// Shifted-kernel superposition `Σ_{h ∈ H} x(h) φ(g − h)`.
pub fn kernel_reconstruct(samples: &SampleTable, h: &Subgroup, kernel: &Signal, limits: &Limits) -> Result<Signal> {
    if kernel.parent() != h.parent() {
        return Err(Error::ParentMismatch);
    }
    let (points, values) = ordered_samples(samples, h, limits)?;
    let spec = h.parent();
    let out = spec
        .elements(limits)?
        .iter()
        .map(|g| {
            points
                .iter()
                .zip(&values)
                .map(|(p, v)| v * kernel.at(&spec.sub(g, p)))
                .sum()
        })
        .collect();
    Signal::new(spec, out)
}

/// Two different signals with spectrum in `d` and identical samples on `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct AliasingPair {
    pub coset_rep: GroupElement,
    pub first_frequency: GroupElement,
    pub second_frequency: GroupElement,
    pub first: Signal,
    pub second: Signal,
}

/// When `d` hits some `Λ`-coset twice, returns the two pure characters on
/// that coset; they agree on `H` and differ on `G`.
pub fn aliasing_pair(h: &Subgroup, d: &PointSet, limits: &Limits) -> Result<Option<AliasingPair>> {
    let spec = h.parent();
    if d.parent() != spec {
        return Err(Error::ParentMismatch);
    }
    let q = quotient(spec, &annihilator(spec, h)?)?;
    let Some(TransversalDefect::Repeated {
        coset_rep,
        first,
        second,
    }) = find_repeated_coset(&q, d)
    else {
        return Ok(None);
    };
    let one = Complex64::new(1.0, 0.0);
    Ok(Some(AliasingPair {
        first: band_limited(spec, &[(first.clone(), one)], limits)?,
        second: band_limited(spec, &[(second.clone(), one)], limits)?,
        coset_rep,
        first_frequency: first,
        second_frequency: second,
    }))
}
