//! Generators for the datasets, fixtures and constructive proof objects, and
//! the reference clustering functions used in existence arguments.

mod embed;
mod exhaustive;
mod fixtures;
mod krich;
mod mixture;
mod segments;
mod threshold;

pub use embed::embed_partition;
pub use exhaustive::{
    exhaustive_best_partition, non_nesting_prefixes, parity_quality, table4_points, PrefixOptimum,
};
pub use fixtures::{fixture_tables, table1, table2, Fixtures, TABLE_LABELS};
pub use krich::{krich_line, krich_line_for, KRichLine};
pub use mixture::{
    default_mixture, gaussian_mixture, table3_datasets, Component, MixtureSpec, Table3Data,
    TABLE3_AFFECTED, TABLE3_CENTRIC_LAMBDA, TABLE3_CENTRIC_PASSES, TABLE3_MEANS, TABLE3_SHIFT,
};
pub use segments::{rotated_segments, rotated_segments_pair, SegmentPair};
pub use threshold::{threshold_clustering, threshold_links};
