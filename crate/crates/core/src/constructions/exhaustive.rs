use serde::Serialize;

use crate::data::{dist, Dataset, Partition};
use crate::error::Result;
use crate::kmeans::scan_partitions_min;
use crate::par::Execution;

/// Best partition of the first `len` points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrefixOptimum {
    pub len: usize,
    pub quality: f64,
    pub partition: Partition,
}

/// For every prefix length from 2 (or `k`) to `n`, the partition of that
/// prefix minimizing `quality`. The quality function receives the prefix and
/// canonical cluster labels; ties go to the first partition in canonical
/// order.
pub fn exhaustive_best_partition<F>(ds: &Dataset, k: Option<usize>, quality: F) -> Result<Vec<PrefixOptimum>>
where
    F: Fn(&Dataset, &[usize]) -> f64 + Sync + Send,
{
    let start = k.unwrap_or(2).max(2);
    (start..=ds.len())
        .map(|len| {
            let prefix = ds.subset(&(0..len).collect::<Vec<_>>())?;
            let (q, partition) = scan_partitions_min(len, k, Execution::default(), |a| quality(&prefix, a))?;
            Ok(PrefixOptimum {
                len,
                quality: q,
                partition,
            })
        })
        .collect()
}

/// Prefix lengths whose optimum, restricted to the previous prefix, differs
/// from the previous optimum.
pub fn non_nesting_prefixes(optima: &[PrefixOptimum]) -> Vec<usize> {
    optima
        .windows(2)
        .filter(|w| w[1].partition.prefix(w[0].len) != w[0].partition)
        .map(|w| w[1].len)
        .collect()
}

/// An arbitrary quality built only to be minimized by brute force: one
/// penalty per same-cluster pair whose distance in hundredths is odd, and one
/// per cross-cluster pair whose distance in hundredths is a multiple of 3.
pub fn parity_quality(ds: &Dataset, labels: &[usize]) -> f64 {
    let mut penalty = 0usize;
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            let h = (100.0 * dist(ds.point(i), ds.point(j))).round() as u64;
            let bad = if labels[i] == labels[j] { h % 2 == 1 } else { h % 3 == 0 };
            penalty += usize::from(bad);
        }
    }
    penalty as f64
}

/// Ten points in the plane used for the prefix demonstration.
pub fn table4_points() -> Dataset {
    Dataset::new(vec![
        vec![4.022346, 5.142886],
        vec![3.745942, 4.646777],
        vec![4.442992, 5.164956],
        vec![3.616975, 5.188107],
        vec![3.807503, 5.010183],
        vec![4.169602, 4.874328],
        vec![3.557578, 5.248182],
        vec![3.876208, 4.507264],
        vec![4.102748, 5.073515],
        vec![3.895329, 4.878176],
    ])
    .expect("fixture points")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kmeans::{kmeans_ideal, objective_q};

    #[test]
    fn k2_objective_matches_ideal() {
        let ds = Dataset::from_line(&[0.0, 1.0, 5.0, 7.0]).unwrap();
        let opt = exhaustive_best_partition(&ds, Some(2), |d, a| {
            objective_q(d, &Partition::from_labels(a).unwrap()).unwrap()
        })
        .unwrap();
        let last = opt.last().unwrap();
        assert_eq!(last.partition, kmeans_ideal(&ds, 2).unwrap().partition);
    }

    #[test]
    fn constant_quality_picks_first() {
        let opt = exhaustive_best_partition(&table4_points(), None, |_, _| 1.0).unwrap();
        assert_eq!(opt.len(), 9);
        assert!(opt.iter().all(|o| o.partition.k() == 1));
        assert!(non_nesting_prefixes(&opt).is_empty());
    }

    #[test]
    fn parity_optima_do_not_nest() {
        let opt = exhaustive_best_partition(&table4_points(), None, parity_quality).unwrap();
        let bad = non_nesting_prefixes(&opt);
        assert_eq!(bad.first(), Some(&6));
    }
}
