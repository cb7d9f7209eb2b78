use thiserror::Error;

use crate::group::GroupElement;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invariant factor #{index} is {value}; every factor must be at least 1")]
    InvalidFactor { index: usize, value: i64 },

    #[error("group order {order} exceeds the configured bound {bound}")]
    OrderBoundExceeded { order: u128, bound: u64 },

    #[error("enumeration of {count} elements exceeds the configured bound {bound}")]
    EnumerationBoundExceeded { count: u64, bound: u64 },

    #[error("element has {found} coordinates, group has rank {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("element {coords:?} has a coordinate outside its cyclic factor")]
    CoordinateOutOfRange { coords: Vec<u64> },

    #[error("objects belong to different groups")]
    ParentMismatch,

    #[error("element {element:?} is not in the subgroup")]
    NotInSubgroup { element: GroupElement },

    #[error("point {point:?} appears more than once")]
    DuplicatePoint { point: GroupElement },

    #[error("atom at {point:?} has a zero weight")]
    ZeroWeight { point: GroupElement },

    #[error("atom at {point:?} has weight {weight}; non-negative measures need positive real weights")]
    InvalidWeight { point: GroupElement, weight: String },

    #[error("operation requires a non-negative measure")]
    ExpectedNonNegative,

    #[error("measure has no atoms")]
    EmptyMeasure,

    #[error("exponent alpha must be a positive finite number, got {0}")]
    InvalidAlpha(f64),

    #[error("expected {expected} values, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("partial set hits the coset of {coset_rep:?} twice ({first:?} and {second:?})")]
    NotPartialTransversal {
        coset_rep: GroupElement,
        first: GroupElement,
        second: GroupElement,
    },

    #[error("merge: S is not a partial transversal; coset of {coset_rep:?} is hit twice")]
    MergePartialInvalid { coset_rep: GroupElement },

    #[error("merge: R is not a transversal ({reason})")]
    MergeBaseInvalid { reason: String },

    #[error("not a transversal: {reason}")]
    NotTransversal { reason: String },

    #[error("spectrum has {size} points but only {bound} cosets are available")]
    SpectrumTooLarge { size: usize, bound: u64 },

    #[error("spectrum points {first:?} and {second:?} share the coset of {coset_rep:?}; reconstruction is ambiguous")]
    AmbiguousSpectrum {
        coset_rep: GroupElement,
        first: GroupElement,
        second: GroupElement,
    },

    #[error("sample table does not list subgroup element {missing:?}")]
    MissingSample { missing: GroupElement },

    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidFactor { .. } => "invalid_factor",
            Error::OrderBoundExceeded { .. } => "order_bound_exceeded",
            Error::EnumerationBoundExceeded { .. } => "enumeration_bound_exceeded",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::CoordinateOutOfRange { .. } => "coordinate_out_of_range",
            Error::ParentMismatch => "parent_mismatch",
            Error::NotInSubgroup { .. } => "not_in_subgroup",
            Error::DuplicatePoint { .. } => "duplicate_point",
            Error::ZeroWeight { .. } => "zero_weight",
            Error::InvalidWeight { .. } => "invalid_weight",
            Error::ExpectedNonNegative => "expected_nonnegative",
            Error::EmptyMeasure => "empty_measure",
            Error::InvalidAlpha(_) => "invalid_alpha",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::NotPartialTransversal { .. } => "not_partial_transversal",
            Error::MergePartialInvalid { .. } => "merge_partial_invalid",
            Error::MergeBaseInvalid { .. } => "merge_base_invalid",
            Error::NotTransversal { .. } => "not_transversal",
            Error::SpectrumTooLarge { .. } => "spectrum_too_large",
            Error::AmbiguousSpectrum { .. } => "ambiguous_spectrum",
            Error::MissingSample { .. } => "missing_sample",
            Error::InvalidConfig(_) => "invalid_config",
        }
    }
}
