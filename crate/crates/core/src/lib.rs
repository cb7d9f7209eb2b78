//! Density of trigonometric subgroup polynomials on finite abelian groups.
//!
//! For a subgroup `H` of a finite abelian group `G`, with dual `Γ` and
//! annihilator `Λ ⊆ Γ`, the span of the characters `γ ↦ ⟨γ, y⟩` (`y ∈ H`) is
//! dense in `L^α(μ)` exactly when `μ` is concentrated on a set meeting every
//! `Λ`-coset at most once. This crate decides both sides of that statement
//! independently, builds transversals and cross-sections of `Λ`, and uses the
//! same geometry to sample and reconstruct band-limited signals on `G`.
//!
//! Group arithmetic, subgroup membership and coset bookkeeping are exact.
//! Floating point is confined to character values, singular values and the
//! approximation solvers.

pub mod density;
pub mod error;
pub mod group;
mod lattice;
pub mod measure;
pub mod sampling;
pub mod sweep;
pub mod transversal;
pub mod wire;

pub use error::{Error, Result};
pub use group::{annihilator, make_group, quotient, GroupElement, GroupSpec, Limits, QuotientMap, Rotation, Subgroup};
pub use transversal::PointSet;
