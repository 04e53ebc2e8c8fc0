//! Property tests for the invariants each module promises.

use proptest::prelude::*;

use axiomlab::constructions::{embed_partition, threshold_clustering};
use axiomlab::data::{
    bell, complex_objective, dist, embeddability_check, enumerate_partitions, validate_distance,
    Dataset, DistanceMatrix, Partition, SignedCoordinates,
};
use axiomlab::kmeans::{
    duda_hart_check, is_local_min, kmeans_ideal, lloyd, minimizers, objective_q, KMeansConfig, Seeding,
};
use axiomlab::par::Execution;
use axiomlab::separation::{certify, motion_gap_bound, takeover_gap_root};
use axiomlab::transforms::{centric_transform, is_gamma_transform, scale};

fn points(n: std::ops::RangeInclusive<usize>, m: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (n, m).prop_flat_map(|(n, m)| prop::collection::vec(prop::collection::vec(-10.0..10.0f64, m), n))
}

fn dataset(n: std::ops::RangeInclusive<usize>, m: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Dataset> {
    points(n, m).prop_map(|p| Dataset::new(p).unwrap())
}

/// A dataset with a partition into `k` nonempty clusters.
fn clustered(n: std::ops::RangeInclusive<usize>, k: usize) -> impl Strategy<Value = (Dataset, Partition)> {
    dataset(n, 1..=3).prop_flat_map(move |ds| {
        let n = ds.len();
        prop::collection::vec(0..k, n).prop_map(move |mut labels| {
            for (c, l) in labels.iter_mut().take(k).enumerate() {
                *l = c;
            }
            (ds.clone(), Partition::from_labels(&labels).unwrap())
        })
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// Bell numbers from the Bell triangle, independent of the crate's recurrence.
fn bell_triangle(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            next.push(next.last().unwrap() + v);
        }
        row = next;
    }
    row[0]
}

#[test]
fn partition_counts_match_bell_numbers() {
    for n in 2..=10 {
        let count = enumerate_partitions(n, None).unwrap().count() as u128;
        assert_eq!(count, bell_triangle(n), "n={n}");
        assert_eq!(bell(n), count);
    }
}

/// Lloyd stability and single-move optimality differ: the move test weighs
/// distances by n/(n-1) and n/(n+1).
#[test]
fn lloyd_fixed_point_need_not_be_local_minimum() {
    let ds = Dataset::from_line(&[0.0, 2.0, 3.1]).unwrap();
    let start = vec![vec![1.0], vec![3.1]];
    let cfg = KMeansConfig::new(2).seeding(Seeding::ExplicitCenters(start.clone()));
    let r = lloyd(&ds, &start, &cfg).unwrap();
    assert!(r.converged);
    assert_eq!(r.partition, Partition::from_labels(&[0, 0, 1]).unwrap());
    let report = is_local_min(&ds, &r.partition).unwrap();
    assert!(!report.is_local_min);
    assert_eq!(report.witness.unwrap().point, 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euclidean_tables_are_metric(p in points(2..=12, 1..=4)) {
        let ds = Dataset::new(p).unwrap();
        if let Ok(d) = DistanceMatrix::euclidean(&ds) {
            prop_assert!(validate_distance(&d, true).is_valid());
        }
    }

    #[test]
    fn euclidean_tables_embed_exactly(ds in dataset(3..=10, 1..=3)) {
        if let Ok(d) = DistanceMatrix::euclidean(&ds) {
            let rep = embeddability_check(&d).unwrap();
            prop_assert!(rep.embeddable);
            prop_assert!(rep.coordinates.imaginary.iter().all(|im| !im));
            prop_assert!(rep.max_reconstruction_error(&d) <= 1e-9 * (1.0 + d.max()));
        }
    }

    #[test]
    fn real_axes_complex_objective_is_q((ds, p) in clustered(3..=12, 3)) {
        let coords = SignedCoordinates::real(ds.to_rows()).unwrap();
        let a = complex_objective(&coords, &p, None).unwrap();
        let b = objective_q(&ds, &p).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b));
    }

    #[test]
    fn lloyd_never_increases_objective(ds in dataset(4..=30, 1..=3), k in 2usize..=4, seed in any::<u64>()) {
        let cfg = KMeansConfig::new(k.min(ds.len())).seeding(Seeding::UniformRandom).restarts(1).seed(seed);
        let centers = axiomlab::kmeans::seed(&ds, cfg.k, &Seeding::UniformRandom, &mut axiomlab::rng::from_seed(seed)).unwrap();
        let r = lloyd(&ds, &centers, &cfg).unwrap();
        for w in r.objective_trace.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-12);
        }
    }

    /// Every converged Lloyd run from distinct data points ends with each
    /// point at a nearest center, and no lower than the exact optimum.
    #[test]
    fn every_seeding_converges_above_the_optimum(ds in dataset(4..=7, 1..=2), k in 2usize..=3) {
        let n = ds.len();
        let best = kmeans_ideal(&ds, k).unwrap().objective;
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let start: Vec<Vec<f64>> = idx.iter().map(|&i| ds.point(i).to_vec()).collect();
            let cfg = KMeansConfig::new(k).seeding(Seeding::ExplicitCenters(start.clone()));
            let r = lloyd(&ds, &start, &cfg).unwrap();
            prop_assert!(r.objective >= best * (1.0 - 1e-12) - 1e-12);
            if r.converged {
                for i in 0..n {
                    let own = dist(ds.point(i), &r.centers[r.partition.label(i)]);
                    prop_assert!(r.centers.iter().all(|c| own <= dist(ds.point(i), c) + 1e-9));
                }
            }
            // next k-subset in lexicographic order
            let mut j = k;
            while j > 0 && idx[j - 1] == n - k + j - 1 {
                j -= 1;
            }
            if j == 0 {
                break;
            }
            idx[j - 1] += 1;
            for t in j..k {
                idx[t] = idx[t - 1] + 1;
            }
        }
    }

    /// A partition with no improving single move is stable under Lloyd.
    #[test]
    fn local_minimum_is_lloyd_stable((ds, p) in clustered(4..=12, 3)) {
        if is_local_min(&ds, &p).unwrap().is_local_min {
            let centers = axiomlab::kmeans::cluster_means(&ds, &p);
            let cfg = KMeansConfig::new(3).seeding(Seeding::ExplicitCenters(centers.clone()));
            let r = lloyd(&ds, &centers, &cfg).unwrap();
            prop_assert!(r.objective <= objective_q(&ds, &p).unwrap() * (1.0 + 1e-12) + 1e-12);
        }
    }

    #[test]
    fn argmin_set_is_scale_invariant(ds in dataset(4..=8, 1..=2), k in 2usize..=3, alpha in 0.01..100.0f64) {
        let (q, a) = minimizers(&ds, k, 1e-9, Execution::Sequential).unwrap();
        let (qs, b) = minimizers(&scale(&ds, alpha).unwrap(), k, 1e-9, Execution::Sequential).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(rel(qs, alpha * alpha * q) <= 1e-9 || q < 1e-12);
    }

    #[test]
    fn duda_hart_identities((ds, p) in clustered(3..=20, 2), x in any::<prop::sample::Index>()) {
        let x = x.index(ds.len());
        let own = p.cluster(p.label(x));
        if own.len() >= 2 {
            prop_assert!(duda_hart_check(&ds, own, x).unwrap().relative_error() <= 1e-9);
        }
        let other = p.cluster(1 - p.label(x));
        prop_assert!(duda_hart_check(&ds, other, x).unwrap().relative_error() <= 1e-9);
    }

    #[test]
    fn centric_transform_geometry((ds, p) in clustered(3..=15, 3), c in 0usize..3, lambda in 0.01..=1.0f64) {
        let out = centric_transform(&ds, &p, c, lambda).unwrap();
        let members = p.cluster(c);
        let mu = ds.mean_of(members);
        prop_assert!(dist(&mu, &out.mean_of(members)) <= 1e-12 * (1.0 + mu.iter().map(|v| v.abs()).sum::<f64>()));
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                let before = dist(ds.point(i), ds.point(j));
                let after = dist(out.point(i), out.point(j));
                prop_assert!((after - lambda * before).abs() <= 1e-12 * (1.0 + before));
            }
        }
        for i in (0..ds.len()).filter(|&i| p.label(i) != c) {
            prop_assert_eq!(ds.point(i), out.point(i));
            let before = dist(ds.point(i), &mu);
            let after = dist(out.point(i), &out.mean_of(members));
            prop_assert!((after - before).abs() <= 1e-12 * (1.0 + before));
        }
    }

    #[test]
    fn scale_and_centric_commute((ds, p) in clustered(3..=15, 2), alpha in 0.1..10.0f64, lambda in 0.05..=1.0f64) {
        let a = centric_transform(&scale(&ds, alpha).unwrap(), &p, 0, lambda).unwrap();
        let b = scale(&centric_transform(&ds, &p, 0, lambda).unwrap(), alpha).unwrap();
        for i in 0..ds.len() {
            prop_assert!(dist(a.point(i), b.point(i)) <= 1e-12 * alpha * 20.0);
        }
    }

    #[test]
    fn stretching_cross_distances_is_gamma((ds, p) in clustered(3..=10, 3), alpha in 1.0..5.0f64) {
        if let Ok(d) = DistanceMatrix::euclidean(&ds) {
            let mut e = d.clone();
            for i in 0..d.len() {
                for j in i + 1..d.len() {
                    if !p.same_cluster(i, j) {
                        e.set_sym(i, j, alpha * d.get(i, j));
                    }
                }
            }
            prop_assert!(is_gamma_transform(&d, &e, &p).unwrap().is_gamma);
        }
    }

    #[test]
    fn embedding_is_gamma_transform((ds, p) in clustered(3..=10, 3), m in 1usize..=3) {
        if let Ok(d) = DistanceMatrix::euclidean(&ds) {
            let out = embed_partition(&d, &p, m).unwrap();
            let e = DistanceMatrix::euclidean(&out).unwrap();
            prop_assert!(is_gamma_transform(&d, &e, &p).unwrap().is_gamma);
        }
    }

    #[test]
    fn threshold_rule_is_scale_invariant(xs in prop::collection::vec(0.0..1.0f64, 2..=30), alphas in prop::collection::vec(-3.0..3.0f64, 10)) {
        let ds = Dataset::from_line(&xs).unwrap();
        let p = threshold_clustering(&ds).unwrap();
        for e in alphas {
            prop_assert_eq!(&threshold_clustering(&scale(&ds, 10f64.powf(e)).unwrap()).unwrap(), &p);
        }
    }

    #[test]
    fn perfect_implies_nice((ds, p) in clustered(4..=12, 3)) {
        let c = certify(&ds, &p).unwrap();
        prop_assert!(!c.perfect_ball || c.nice_ball);
    }

    #[test]
    fn motion_bound_is_conservative(n1 in 1usize..200, n2 in 2usize..200, r1 in 0.01..5.0f64, r2 in 0.01..5.0f64, f in 0.0..=1.0f64) {
        let bound = motion_gap_bound(n1, r1, n2, r2).unwrap();
        for n21 in 1..=n2 / 2 {
            let root = takeover_gap_root(n1, r1, n2, r2, n21, f * r2);
            prop_assert!(root <= bound + 1e-12 * (1.0 + bound));
        }
    }
}
