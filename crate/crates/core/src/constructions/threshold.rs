use crate::data::{sq_dist, Dataset, Partition};
use crate::error::{Error, Result};

/// Pairs `(i, j)`, `i < j`, that are closer than `range / (n + 1)` along every
/// coordinate, where `range` is that coordinate's spread over the dataset.
/// A coordinate with zero spread constrains nothing.
pub fn threshold_links(ds: &Dataset) -> Vec<(usize, usize)> {
    let n = ds.len();
    let thresholds: Vec<Option<f64>> = (0..ds.dim())
        .map(|c| {
            let (lo, hi) = ds
                .points()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[c]), hi.max(p[c])));
            (hi > lo).then(|| (hi - lo) / (n + 1) as f64)
        })
        .collect();
    let mut links = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (ds.point(i), ds.point(j));
            let close = thresholds
                .iter()
                .enumerate()
                .all(|(c, t)| t.is_none_or(|t| (a[c] - b[c]).abs() < t));
            if close {
                links.push((i, j));
            }
        }
    }
    links
}

/// Transitive closure of [`threshold_links`]. In more than one dimension the
/// largest pairwise distance must be attained by a single pair; ties are
/// refused. A dataset of identical points is one cluster.
pub fn threshold_clustering(ds: &Dataset) -> Result<Partition> {
    let n = ds.len();
    if ds.dim() > 1 {
        let mut best = f64::NEG_INFINITY;
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                let d = sq_dist(ds.point(i), ds.point(j));
                if d > best {
                    best = d;
                    count = 1;
                } else if d == best {
                    count += 1;
                }
            }
        }
        if best > 0.0 && count > 1 {
            return Err(Error::param(
                "dataset",
                format!("{count} pairs share the largest distance; the threshold rule needs a unique one"),
            ));
        }
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, j) in threshold_links(ds) {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let labels: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    Partition::from_labels(&labels)
}
