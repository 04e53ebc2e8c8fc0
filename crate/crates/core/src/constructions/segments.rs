use rand::Rng;

use crate::data::{Dataset, Partition};
use crate::error::{Error, Result};

const A: [f64; 3] = [1.0, 0.0, 0.0];
const B: [f64; 3] = [33.0, 32.0, 0.0];
const C: [f64; 3] = [33.0, -32.0, 0.0];
const D: [f64; 3] = [-1.0, 0.0, 0.0];
const E: [f64; 3] = [-33.0, 0.0, -32.0];
const F: [f64; 3] = [-33.0, 0.0, 32.0];

/// Angle between each rotated segment and the x axis.
const ROTATED_DEGREES: f64 = 1.0;

/// The same uniform samples laid out on the original and on the rotated
/// segments, so point `i` of one corresponds to point `i` of the other.
#[derive(Debug, Clone)]
pub struct SegmentPair {
    pub original: Dataset,
    pub rotated: Dataset,
    /// `{AB ∪ AC, DE ∪ DF}`.
    pub partition: Partition,
}

fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let t: f64 = rng.random();
        if t > 0.0 {
            return t;
        }
    }
}

fn lerp(p: [f64; 3], q: [f64; 3], t: f64) -> Vec<f64> {
    (0..3).map(|c| p[c] + t * (q[c] - p[c])).collect()
}

fn rotated_ends() -> ([f64; 3], [f64; 3]) {
    let len = ((B[0] - A[0]).powi(2) + (B[1] - A[1]).powi(2)).sqrt();
    let (s, c) = ROTATED_DEGREES.to_radians().sin_cos();
    (
        [A[0] + len * c, A[1] + len * s, 0.0],
        [A[0] + len * c, A[1] - len * s, 0.0],
    )
}

fn build(ts: &[[f64; 4]], rotated: bool) -> Result<Dataset> {
    let (b, c) = if rotated { rotated_ends() } else { (B, C) };
    let segs = [(A, b), (A, c), (D, E), (D, F)];
    let mut pts = Vec::with_capacity(4 * ts.len());
    for (s, &(p, q)) in segs.iter().enumerate() {
        pts.extend(ts.iter().map(|t| lerp(p, q, t[s])));
    }
    Dataset::new(pts)
}

fn draw<R: Rng + ?Sized>(per_segment: usize, rng: &mut R) -> Result<Vec<[f64; 4]>> {
    if per_segment == 0 {
        return Err(Error::param("points_per_segment", "must be at least 1"));
    }
    // segment-major draws: all of AB first, then AC, ...
    let mut cols = [vec![], vec![], vec![], vec![]];
    for col in cols.iter_mut() {
        *col = (0..per_segment).map(|_| open_unit(rng)).collect();
    }
    Ok((0..per_segment)
        .map(|i| [cols[0][i], cols[1][i], cols[2][i], cols[3][i]])
        .collect())
}

/// Uniform samples on the open segments AB, AC, DE, DF, in that order. With
/// `rotated`, AB and AC are turned about A to within one degree of the x axis.
pub fn rotated_segments<R: Rng + ?Sized>(
    rotated: bool,
    per_segment: usize,
    rng: &mut R,
) -> Result<Dataset> {
    build(&draw(per_segment, rng)?, rotated)
}

pub fn rotated_segments_pair<R: Rng + ?Sized>(per_segment: usize, rng: &mut R) -> Result<SegmentPair> {
    let ts = draw(per_segment, rng)?;
    let labels: Vec<usize> = (0..4 * per_segment).map(|i| usize::from(i >= 2 * per_segment)).collect();
    Ok(SegmentPair {
        original: build(&ts, false)?,
        rotated: build(&ts, true)?,
        partition: Partition::from_labels(&labels)?,
    })
}
