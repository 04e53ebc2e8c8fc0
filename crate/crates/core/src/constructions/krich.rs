use crate::data::{Dataset, Partition};
use crate::error::{Error, Result};

/// Smallest spacing between neighbouring clusters.
const MIN_SPACING: f64 = 3.0;

#[derive(Debug, Clone)]
pub struct KRichLine {
    pub dataset: Dataset,
    pub target: Partition,
    /// Left edge of each cluster's unit interval, in placement order.
    pub offsets: Vec<f64>,
}

/// Points on a line that k-means should split into clusters of the given
/// sizes. Clusters are placed left to right by non-increasing size, each on
/// its own unit interval: `s` evenly spaced points spanning it, or its
/// midpoint for a singleton. The space between the last point of cluster `i`
/// and the first of cluster `i+1` is
/// `2 dce(1,i) (cardc(1,i) + card(i+1)) / card(i+1)`, at least 3, where
/// `dce(1,i)` spans the extreme points of clusters `1..=i` and `cardc(1,i)`
/// counts their points.
pub fn krich_line(sizes: &[usize]) -> Result<KRichLine> {
    if sizes.is_empty() {
        return Err(Error::param("sizes", "need at least one cluster"));
    }
    if sizes.contains(&0) {
        return Err(Error::param("sizes", "cluster sizes must be positive"));
    }
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut labels = Vec::new();
    for (c, &s) in sorted.iter().enumerate() {
        labels.extend(std::iter::repeat_n(c, s));
    }
    let target = Partition::from_labels(&labels)?;
    place(&sorted, target)
}

/// Same construction for an arbitrary target partition: point `i` of the
/// output belongs to the cluster of `i` in `target`.
pub fn krich_line_for(target: &Partition) -> Result<KRichLine> {
    let mut order: Vec<usize> = (0..target.k()).collect();
    order.sort_by(|&a, &b| target.cluster(b).len().cmp(&target.cluster(a).len()));
    let sizes: Vec<usize> = order.iter().map(|&c| target.cluster(c).len()).collect();
    let line = place(&sizes, Partition::from_labels(&vec![0; sizes.iter().sum()])?)?;
    // line.dataset lists points cluster by cluster in `order`; scatter them
    let mut coords = vec![0.0; target.len()];
    let mut next = 0;
    for &c in &order {
        for &i in target.cluster(c) {
            coords[i] = line.dataset.point(next)[0];
            next += 1;
        }
    }
    Ok(KRichLine {
        dataset: Dataset::from_line(&coords)?,
        target: target.clone(),
        offsets: line.offsets,
    })
}

fn place(sorted: &[usize], target: Partition) -> Result<KRichLine> {
    let mut xs: Vec<f64> = Vec::new();
    let mut offsets = Vec::new();
    let mut placed = 0usize;
    for (c, &s) in sorted.iter().enumerate() {
        let left = if c == 0 {
            0.0
        } else {
            let last = *xs.last().expect("previous cluster placed");
            let dce = last - xs[0];
            let spacing = (2.0 * dce * (placed + s) as f64 / s as f64).max(MIN_SPACING);
            // the first point of a singleton sits at its interval midpoint
            let first = last + spacing;
            if s == 1 {
                first - 0.5
            } else {
                first
            }
        };
        offsets.push(left);
        if s == 1 {
            xs.push(left + 0.5);
        } else {
            for t in 0..s {
                xs.push(left + t as f64 / (s - 1) as f64);
            }
        }
        placed += s;
    }
    if xs.len() < 2 {
        return Err(Error::TooFewPoints(xs.len()));
    }
    Ok(KRichLine {
        dataset: Dataset::from_line(&xs)?,
        target,
        offsets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kmeans::kmeans_ideal;

    #[test]
    fn two_singletons() {
        let l = krich_line(&[1, 1]).unwrap();
        assert_eq!(l.dataset.to_rows(), vec![vec![0.5], vec![3.5]]);
        assert_eq!(l.target.k(), 2);
    }

    #[test]
    fn spacing_formula() {
        // sizes (3, 2): dce(1,1) = 1, cardc = 3, card(2) = 2 -> 2 * 1 * 5 / 2 = 5
        let l = krich_line(&[2, 3]).unwrap();
        let xs: Vec<f64> = l.dataset.points().map(|p| p[0]).collect();
        assert_eq!(xs, vec![0.0, 0.5, 1.0, 6.0, 7.0]);
        assert_eq!(l.target, Partition::from_labels(&[0, 0, 0, 1, 1]).unwrap());
    }

    #[test]
    fn ideal_recovers_small_targets() {
        for sizes in [vec![3, 2], vec![3, 2, 2], vec![1, 1, 1], vec![4, 1]] {
            let l = krich_line(&sizes).unwrap();
            let r = kmeans_ideal(&l.dataset, sizes.len()).unwrap();
            assert_eq!(r.partition, l.target, "{sizes:?}");
        }
    }

    #[test]
    fn arbitrary_target() {
        let target = Partition::from_labels(&[0, 1, 0, 2, 1, 0]).unwrap();
        let l = krich_line_for(&target).unwrap();
        assert_eq!(kmeans_ideal(&l.dataset, 3).unwrap().partition, target);
    }

    fn compositions(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for s in (1..=n.min(max)).rev() {
            prefix.push(s);
            compositions(n - s, s, prefix, out);
            prefix.pop();
        }
    }

    #[test]
    fn ideal_recovers_every_shape_up_to_nine() {
        let mut shapes = Vec::new();
        for n in 2..=9 {
            compositions(n, n, &mut vec![], &mut shapes);
        }
        for sizes in shapes.into_iter().filter(|s| s.len() >= 2) {
            let l = krich_line(&sizes).unwrap();
            let r = kmeans_ideal(&l.dataset, sizes.len()).unwrap();
            assert_eq!(r.partition, l.target, "{sizes:?}");
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(krich_line(&[]).is_err());
        assert!(krich_line(&[2, 0]).is_err());
        assert!(krich_line(&[1]).is_err());
    }
}
