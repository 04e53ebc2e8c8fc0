//! The k-means family: objective, seeding, Lloyd iteration with restarts,
//! the exhaustive "ideal" solver, local-minimum testing and the streaming
//! variants.

mod ideal;
mod lloyd;
mod local;
mod seeding;
mod streaming;

use serde::{Deserialize, Serialize};

use crate::data::{sq_dist, Dataset, Partition};
use crate::error::{Error, Result};

pub use ideal::{kmeans_ideal, kmeans_ideal_with, minimizers, scan_partitions_min};
pub use lloyd::{kmeans, kmeans_with, lloyd};
pub use local::{duda_hart_check, is_local_min, DudaHartCheck, LocalMinReport, Move};
pub use seeding::seed;
pub use streaming::{
    candidates_tree, second_pass_diagnose, sequential_kmeans, CandidatesReport, MergeTree,
    SecondPassVerdict, SequentialState, TreeNode,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Seeding {
    UniformRandom,
    PlusPlus,
    ExplicitCenters(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansConfig {
    pub k: usize,
    pub seeding: Seeding,
    pub restarts: usize,
    pub max_iterations: usize,
    pub rng_seed: u64,
}

impl KMeansConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            seeding: Seeding::PlusPlus,
            restarts: 10,
            max_iterations: 300,
            rng_seed: 0,
        }
    }

    pub fn seeding(mut self, seeding: Seeding) -> Self {
        self.seeding = seeding;
        self
    }

    pub fn restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn seed(mut self, rng_seed: u64) -> Self {
        self.rng_seed = rng_seed;
        self
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.k < 2 || self.k > n {
            return Err(Error::InvalidK { k: self.k, n });
        }
        if self.restarts == 0 {
            return Err(Error::param("restarts", "must be at least 1"));
        }
        if self.max_iterations == 0 {
            return Err(Error::param("max_iterations", "must be at least 1"));
        }
        Ok(())
    }
}

/// One k-means solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    pub partition: Partition,
    /// `centers[j]` is the mean of cluster `j` of `partition`.
    pub centers: Vec<Vec<f64>>,
    pub objective: f64,
    pub iterations: usize,
    pub explained_variance: f64,
    pub converged: bool,
    /// Times a cluster went empty and was reseeded.
    pub empty_cluster_events: usize,
    /// Objective after every center update.
    pub objective_trace: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ClusteringResultJson {
    clusters: Vec<Vec<usize>>,
    centers: Vec<Vec<f64>>,
    q: f64,
    iterations: usize,
    explained_variance: f64,
    converged: bool,
}

impl Serialize for ClusteringResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ClusteringResultJson {
            clusters: self.partition.clusters().to_vec(),
            centers: self.centers.clone(),
            q: self.objective,
            iterations: self.iterations,
            explained_variance: self.explained_variance,
            converged: self.converged,
        }
        .serialize(s)
    }
}

impl ClusteringResult {
    /// Wraps a partition with its exact means and objective.
    pub fn from_partition(ds: &Dataset, partition: Partition) -> Result<Self> {
        partition.check_covers(ds.len())?;
        let centers = cluster_means(ds, &partition);
        let objective = objective_with_centers(ds, &partition, &centers);
        Ok(Self {
            explained_variance: explained_variance(ds, objective),
            partition,
            centers,
            objective,
            iterations: 0,
            converged: true,
            empty_cluster_events: 0,
            objective_trace: vec![objective],
        })
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.partition.sizes()
    }
}

pub fn cluster_means(ds: &Dataset, partition: &Partition) -> Vec<Vec<f64>> {
    partition
        .clusters()
        .iter()
        .map(|members| ds.mean_of(members))
        .collect()
}

fn objective_with_centers(ds: &Dataset, partition: &Partition, centers: &[Vec<f64>]) -> f64 {
    ds.points()
        .enumerate()
        .map(|(i, p)| sq_dist(p, &centers[partition.label(i)]))
        .sum()
}

/// Sum of squared distances of every point to its cluster mean.
pub fn objective_q(ds: &Dataset, partition: &Partition) -> Result<f64> {
    partition.check_covers(ds.len())?;
    Ok(objective_with_centers(ds, partition, &cluster_means(ds, partition)))
}

/// The pairwise form: `sum_j (1/n_j) sum_{unordered pairs in C_j} |x_i - x_l|^2`.
/// Equals [`objective_q`] exactly in exact arithmetic.
pub fn objective_q_pairwise(ds: &Dataset, partition: &Partition) -> Result<f64> {
    partition.check_covers(ds.len())?;
    Ok(partition
        .clusters()
        .iter()
        .map(|members| {
            let mut s = 0.0;
            for (a, &i) in members.iter().enumerate() {
                for &l in &members[a + 1..] {
                    s += sq_dist(ds.point(i), ds.point(l));
                }
            }
            s / members.len() as f64
        })
        .sum())
}

/// Both forms of the objective; see [`ObjectiveForms::agree`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ObjectiveForms {
    pub centroid: f64,
    pub pairwise: f64,
}

impl ObjectiveForms {
    pub fn relative_gap(&self) -> f64 {
        let scale = self.centroid.abs().max(self.pairwise.abs());
        if scale == 0.0 {
            0.0
        } else {
            (self.centroid - self.pairwise).abs() / scale
        }
    }

    pub fn agree(&self, rel_tol: f64) -> bool {
        self.relative_gap() <= rel_tol
    }
}

pub fn objective_forms(ds: &Dataset, partition: &Partition) -> Result<ObjectiveForms> {
    Ok(ObjectiveForms {
        centroid: objective_q(ds, partition)?,
        pairwise: objective_q_pairwise(ds, partition)?,
    })
}

/// `1 - q / total_SS`, clamped to `[0, 1]`; 1 when all points coincide.
pub fn explained_variance(ds: &Dataset, objective: f64) -> f64 {
    let total = ds.total_ss();
    if total <= 0.0 {
        return 1.0;
    }
    (1.0 - objective / total).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_points_have_zero_objective() {
        let ds = Dataset::from_line(&[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(objective_q(&ds, &Partition::whole(3)).unwrap(), 0.0);
        assert_eq!(explained_variance(&ds, 0.0), 1.0);
    }

    #[test]
    fn two_points_give_half_squared_distance() {
        let ds = Dataset::new(vec![vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        let p = Partition::whole(2);
        assert_eq!(objective_q(&ds, &p).unwrap(), 12.5);
        assert_eq!(objective_q_pairwise(&ds, &p).unwrap(), 12.5);
    }

    #[test]
    fn explained_variance_extremes() {
        let ds = Dataset::from_line(&[0.0, 1.0, 5.0, 9.0]).unwrap();
        let q1 = objective_q(&ds, &Partition::whole(4)).unwrap();
        assert_eq!(explained_variance(&ds, q1), 0.0);
        let qn = objective_q(&ds, &Partition::singletons(4)).unwrap();
        assert_eq!(explained_variance(&ds, qn), 1.0);
    }

    #[test]
    fn coverage_is_checked() {
        let ds = Dataset::from_line(&[0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            objective_q(&ds, &Partition::whole(2)),
            Err(Error::CoverageMismatch { .. })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(KMeansConfig::new(1).validate(5).is_err());
        assert!(KMeansConfig::new(6).validate(5).is_err());
        assert!(KMeansConfig::new(2).restarts(0).validate(5).is_err());
        assert!(KMeansConfig::new(2).max_iterations(0).validate(5).is_err());
        assert!(KMeansConfig::new(5).validate(5).is_ok());
    }

    #[test]
    fn result_json_shape() {
        let ds = Dataset::from_line(&[0.0, 1.0, 10.0, 11.0]).unwrap();
        let p = Partition::from_labels(&[0, 0, 1, 1]).unwrap();
        let r = ClusteringResult::from_partition(&ds, p).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["clusters"], serde_json::json!([[0, 1], [2, 3]]));
        assert_eq!(v["q"], 1.0);
        for key in ["centers", "iterations", "explained_variance", "converged"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
