use crate::data::{Dataset, DistanceMatrix, Partition};
use crate::error::{Error, Result};

/// Points in `R^m` realizing a Γ-transform of `d` that keeps `partition`.
///
/// Cluster `i` is laid out evenly on a segment of length `2 r_i` along the
/// first axis, `r_i` being half its smallest internal distance (0 for a
/// singleton), so no internal distance grows. Clusters are placed one after
/// another: the next ball's center sits `R + dmax + r_i` from the center of
/// the ball `(c, R)` enclosing everything placed so far, so every cross
/// distance is at least `dmax >= d(i, j)`.
pub fn embed_partition(d: &DistanceMatrix, partition: &Partition, m: usize) -> Result<Dataset> {
    let n = d.len();
    if m == 0 {
        return Err(Error::param("m", "dimension must be at least 1"));
    }
    if n <= 2 {
        return Err(Error::TooFewPoints(n));
    }
    partition.check_covers(n)?;
    let dmax = d.max();
    let mut coords = vec![vec![0.0; m]; n];
    let mut hull: Option<(Vec<f64>, f64)> = None;
    for members in partition.clusters() {
        let mut r = f64::INFINITY;
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                r = r.min(d.get(i, j));
            }
        }
        let r = if members.len() < 2 { 0.0 } else { r / 2.0 };
        let center = match &hull {
            None => vec![0.0; m],
            Some((c, big_r)) => {
                let mut c = c.clone();
                c[0] += big_r + dmax + r;
                c
            }
        };
        let s = members.len();
        for (t, &i) in members.iter().enumerate() {
            coords[i] = center.clone();
            if s > 1 {
                coords[i][0] += -r + 2.0 * r * t as f64 / (s - 1) as f64;
            }
        }
        hull = Some(match hull {
            None => (center, r),
            Some((c, big_r)) => enclose(&c, big_r, &center, r),
        });
    }
    Dataset::new(coords)
}

/// Smallest ball containing two balls.
fn enclose(ca: &[f64], ra: f64, cb: &[f64], rb: f64) -> (Vec<f64>, f64) {
    let dist = ca.iter().zip(cb).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    if dist + rb <= ra {
        return (ca.to_vec(), ra);
    }
    if dist + ra <= rb {
        return (cb.to_vec(), rb);
    }
    let big_r = (dist + ra + rb) / 2.0;
    let t = (big_r - ra) / dist;
    let c = ca.iter().zip(cb).map(|(a, b)| a + t * (b - a)).collect();
    (c, big_r)
}
