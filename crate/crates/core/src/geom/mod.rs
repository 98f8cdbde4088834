//! Shared math substrate: rotations and frames, quintic trajectory segments,
//! and weighted averaging of directions on the unit sphere.

mod frames;
mod quintic;
mod sphere;

pub use frames::{
    horizontal_rotation, is_orthonormal, rotation_from_zyx, yaw_of, zyx_from_rotation, FrameSet,
};
pub use quintic::{
    reschedule_quintic, solve_quintic, BoundaryConditions, Quintic1, Quintic3, QuinticSample,
    QuinticSegment,
};
pub use sphere::{geodesic_average, rotate_toward};

/// Errors raised by the geometric primitives.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeomError {
    #[error("segment duration must be positive, got {0}")]
    NonPositiveDuration(f64),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("reschedule time {t_bar} is outside (0, {limit})")]
    RescheduleOutOfRange { t_bar: f64, limit: f64 },
    #[error("direction list is empty")]
    EmptyDirections,
    #[error("{directions} directions but {weights} weights")]
    WeightCount { directions: usize, weights: usize },
    #[error("weight {index} is not strictly positive ({value})")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("direction {0} has zero length")]
    ZeroVector(usize),
    #[error("direction {0} is antipodal to the running mean")]
    Antipodal(usize),
    #[error("rotation matrix is not orthonormal")]
    NotOrthonormal,
}
