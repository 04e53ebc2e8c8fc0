//! Datasets, distance tables, partitions, partition enumeration and
//! Euclidean-embeddability analysis.

mod dataset;
mod distance;
mod embedding;
mod enumerate;
mod partition;

pub use dataset::{dist, sq_dist, Dataset};
pub use distance::{DistanceMatrix, ValidationReport, Violation, TRIANGLE_TOL};
pub use embedding::{
    complex_objective, embeddability_check, embeddability_check_with_tol, EmbeddingReport,
    SignedCoordinates, DEFAULT_EIGEN_TOL,
};
pub use enumerate::{
    bell, enumerate_partitions, enumerate_partitions_capped, enumeration_cap, stirling2,
    Partitions, RgsIter, DEFAULT_ENUM_CAP, ENUM_CAP_ENV,
};
pub use partition::Partition;

/// Euclidean distance table of a dataset.
pub fn distance_matrix(ds: &Dataset) -> crate::Result<DistanceMatrix> {
    DistanceMatrix::euclidean(ds)
}

/// Checks the distance-function axioms, and the triangle inequality when
/// `require_metric` is set.
pub fn validate_distance(d: &DistanceMatrix, require_metric: bool) -> ValidationReport {
    d.validate(require_metric)
}
