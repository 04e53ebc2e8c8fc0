use super::{explained_variance, seed, ClusteringResult, KMeansConfig};
use crate::data::{sq_dist, Dataset, Partition};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::rng;

/// Nearest center for every point, ties to the lowest center index.
fn assign(ds: &Dataset, centers: &[Vec<f64>], labels: &mut [usize]) {
    for (i, p) in ds.points().enumerate() {
        let mut best = 0;
        let mut bd = f64::INFINITY;
        for (j, c) in centers.iter().enumerate() {
            let d = sq_dist(p, c);
            if d < bd {
                bd = d;
                best = j;
            }
        }
        labels[i] = best;
    }
}

/// Gives every empty cluster the point currently farthest from its own center
/// (among points whose cluster would not become empty). Returns the number of
/// reseeds.
fn reseed_empty(ds: &Dataset, centers: &mut [Vec<f64>], labels: &mut [usize]) -> usize {
    let k = centers.len();
    let mut counts = vec![0usize; k];
    for &l in labels.iter() {
        counts[l] += 1;
    }
    let mut events = 0;
    for c in 0..k {
        if counts[c] > 0 {
            continue;
        }
        let mut far = None;
        let mut fd = -1.0;
        for (i, p) in ds.points().enumerate() {
            if counts[labels[i]] < 2 {
                continue;
            }
            let d = sq_dist(p, &centers[labels[i]]);
            if d > fd {
                fd = d;
                far = Some(i);
            }
        }
        // k <= n guarantees a donor exists
        let i = far.expect("a cluster with two or more points");
        counts[labels[i]] -= 1;
        counts[c] = 1;
        labels[i] = c;
        centers[c] = ds.point(i).to_vec();
        events += 1;
    }
    events
}

fn update(ds: &Dataset, labels: &[usize], centers: &mut [Vec<f64>]) {
    let k = centers.len();
    let mut counts = vec![0usize; k];
    centers.iter_mut().for_each(|c| c.iter_mut().for_each(|v| *v = 0.0));
    for (i, &l) in labels.iter().enumerate() {
        counts[l] += 1;
        for (acc, v) in centers[l].iter_mut().zip(ds.point(i)) {
            *acc += v;
        }
    }
    for (c, &n) in centers.iter_mut().zip(&counts) {
        c.iter_mut().for_each(|v| *v /= n as f64);
    }
}

fn cost(ds: &Dataset, labels: &[usize], centers: &[Vec<f64>]) -> f64 {
    ds.points()
        .zip(labels)
        .map(|(p, &l)| sq_dist(p, &centers[l]))
        .sum()
}

/// Lloyd iteration from the given centers until the assignment stops changing
/// or `config.max_iterations` center updates have run. `iterations` counts
/// center updates, so a start that is already a fixed point reports 1.
pub fn lloyd(ds: &Dataset, initial: &[Vec<f64>], config: &KMeansConfig) -> Result<ClusteringResult> {
    let k = initial.len();
    if k == 0 || k > ds.len() {
        return Err(Error::InvalidK { k, n: ds.len() });
    }
    for (index, c) in initial.iter().enumerate() {
        if c.len() != ds.dim() {
            return Err(Error::DimensionMismatch {
                index,
                expected: ds.dim(),
                found: c.len(),
            });
        }
    }
    if config.max_iterations == 0 {
        return Err(Error::param("max_iterations", "must be at least 1"));
    }

    let mut centers = initial.to_vec();
    let mut labels = vec![0; ds.len()];
    assign(ds, &centers, &mut labels);
    let mut events = reseed_empty(ds, &mut centers, &mut labels);
    let mut next = labels.clone();
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    loop {
        update(ds, &labels, &mut centers);
        iterations += 1;
        let q = cost(ds, &labels, &centers);
        if let Some(&prev) = trace.last() {
            debug_assert!(q <= prev + 1e-9 * prev, "objective rose: {prev} -> {q}");
        }
        trace.push(q);
        assign(ds, &centers, &mut next);
        events += reseed_empty(ds, &mut centers, &mut next);
        if next == labels {
            converged = true;
            break;
        }
        std::mem::swap(&mut labels, &mut next);
        if iterations >= config.max_iterations {
            update(ds, &labels, &mut centers);
            trace.push(cost(ds, &labels, &centers));
            break;
        }
    }

    let partition = Partition::from_labels(&labels)?;
    let centers: Vec<Vec<f64>> = partition
        .clusters()
        .iter()
        .map(|members| centers[labels[members[0]]].clone())
        .collect();
    let objective = *trace.last().expect("at least one update");
    Ok(ClusteringResult {
        explained_variance: explained_variance(ds, objective),
        partition,
        centers,
        objective,
        iterations,
        converged,
        empty_cluster_events: events,
        objective_trace: trace,
    })
}

/// Seeding plus Lloyd, repeated `config.restarts` times on independent random
/// streams; the lowest objective wins, earliest restart on ties.
pub fn kmeans(ds: &Dataset, config: &KMeansConfig) -> Result<ClusteringResult> {
    kmeans_with(ds, config, Execution::default())
}

pub fn kmeans_with(ds: &Dataset, config: &KMeansConfig, exec: Execution) -> Result<ClusteringResult> {
    config.validate(ds.len())?;
    let runs = par::map_range(exec, config.restarts, |r| {
        let mut rng = rng::stream(config.rng_seed, r as u64);
        let centers = seed(ds, config.k, &config.seeding, &mut rng)?;
        lloyd(ds, &centers, config)
    });
    let mut best: Option<ClusteringResult> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.objective < b.objective) {
            best = Some(run);
        }
    }
    Ok(best.expect("restarts >= 1"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kmeans::{objective_q, Seeding};

    fn cfg(k: usize) -> KMeansConfig {
        KMeansConfig::new(k)
    }

    #[test]
    fn hand_computed_fixed_point() {
        let ds = Dataset::from_line(&[0.0, 1.0, 10.0, 11.0]).unwrap();
        let r = lloyd(&ds, &[vec![0.0], vec![10.0]], &cfg(2)).unwrap();
        assert_eq!(r.partition, Partition::from_labels(&[0, 0, 1, 1]).unwrap());
        assert_eq!(r.centers, vec![vec![0.5], vec![10.5]]);
        assert_eq!(r.objective, 1.0);
        assert!(r.converged);
    }

    #[test]
    fn converged_start_takes_one_update() {
        let ds = Dataset::from_line(&[0.0, 1.0, 10.0, 11.0]).unwrap();
        let r = lloyd(&ds, &[vec![0.5], vec![10.5]], &cfg(2)).unwrap();
        assert_eq!(r.iterations, 1);
        assert_eq!(r.partition, Partition::from_labels(&[0, 0, 1, 1]).unwrap());
    }

    #[test]
    fn assignment_ties_go_to_lowest_center() {
        // point 1 is equidistant from both centers
        let ds = Dataset::from_line(&[0.0, 1.0, 2.0]).unwrap();
        let mut labels = vec![0; 3];
        assign(&ds, &[vec![0.0], vec![2.0]], &mut labels);
        assert_eq!(labels, vec![0, 0, 1]);
    }

    #[test]
    fn empty_cluster_is_reseeded_at_farthest_point() {
        let ds = Dataset::from_line(&[0.0, 1.0, 2.0, 9.0]).unwrap();
        // the second center attracts nothing
        let r = lloyd(&ds, &[vec![0.0], vec![100.0], vec![1.0]], &cfg(3)).unwrap();
        assert!(r.empty_cluster_events >= 1);
        assert_eq!(r.partition.k(), 3);
        assert!(r.partition.sizes().iter().all(|&s| s >= 1));
        assert!(r.partition.clusters().iter().any(|c| c == &[3]));
    }

    #[test]
    fn duplicate_seeds_still_give_k_clusters() {
        let ds = Dataset::from_line(&[0.0, 0.0, 5.0, 6.0]).unwrap();
        let r = lloyd(&ds, &[vec![0.0], vec![0.0]], &cfg(2)).unwrap();
        assert_eq!(r.partition.k(), 2);
    }

    #[test]
    fn trace_is_monotone_and_matches_objective() {
        let pts: Vec<Vec<f64>> = (0..60)
            .map(|i| {
                let t = i as f64 * 0.37;
                vec![t.sin() * 5.0 + (i % 3) as f64 * 4.0, t.cos() * 3.0]
            })
            .collect();
        let ds = Dataset::new(pts).unwrap();
        let r = kmeans(&ds, &cfg(4).restarts(8).seeding(Seeding::UniformRandom).seed(5)).unwrap();
        for w in r.objective_trace.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
        let q = objective_q(&ds, &r.partition).unwrap();
        assert!((q - r.objective).abs() <= 1e-9 * q);
        for (c, members) in r.centers.iter().zip(r.partition.clusters()) {
            let mean = ds.mean_of(members);
            assert!(c.iter().zip(&mean).all(|(a, b)| (a - b).abs() < 1e-9));
        }
    }

    #[test]
    fn restarts_reproduce_across_execution_modes() {
        let xs: Vec<f64> = (0..40).map(|i| ((i * 7919) % 97) as f64).collect();
        let ds = Dataset::from_line(&xs).unwrap();
        let c = cfg(3).restarts(16).seed(99);
        let a = kmeans_with(&ds, &c, Execution::Sequential).unwrap();
        let b = kmeans_with(&ds, &c, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn max_iterations_caps_updates() {
        let xs: Vec<f64> = (0..30).map(|i| (i as f64).powf(1.5)).collect();
        let ds = Dataset::from_line(&xs).unwrap();
        let r = lloyd(&ds, &[vec![0.0], vec![1.0], vec![2.0]], &cfg(3).max_iterations(1)).unwrap();
        assert_eq!(r.iterations, 1);
        assert!(!r.converged);
        let q = objective_q(&ds, &r.partition).unwrap();
        assert!((q - r.objective).abs() <= 1e-9 * q);
    }
}
