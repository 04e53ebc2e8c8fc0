//! Transformations the consistency axioms quantify over, and validators that
//! decide whether a pair of distance tables is a legitimate transform of a
//! given partition.

mod interference;

use serde::{Deserialize, Serialize};

use crate::data::{dist, Dataset, DistanceMatrix, Partition};
use crate::error::{Error, Result};
use crate::separation::ball_summaries;

pub use interference::{interference_witness, InterferenceWitness};

/// Relative slack used when comparing distances before and after a transform
/// computed in floating point.
pub const DISTANCE_TOL: f64 = 1e-12;

pub trait Scalable: Sized {
    fn scale(&self, alpha: f64) -> Result<Self>;
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::param("alpha", format!("must be positive and finite, got {alpha}")));
    }
    Ok(())
}

impl Scalable for Dataset {
    fn scale(&self, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Dataset::from_flat(self.dim(), self.as_flat().iter().map(|v| v * alpha).collect())
    }
}

impl Scalable for DistanceMatrix {
    fn scale(&self, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(self.scaled(alpha))
    }
}

/// Multiplies coordinates or distances by `alpha > 0`.
pub fn scale<T: Scalable>(x: &T, alpha: f64) -> Result<T> {
    x.scale(alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaViolation {
    pub i: usize,
    pub j: usize,
    pub same_cluster: bool,
    pub before: f64,
    pub after: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaCheck {
    pub is_gamma: bool,
    pub violations: Vec<GammaViolation>,
}

/// Whether `after` shrinks (or keeps) every within-cluster distance of `before`
/// and stretches (or keeps) every cross-cluster one. Lists every offending pair.
pub fn is_gamma_transform(
    before: &DistanceMatrix,
    after: &DistanceMatrix,
    partition: &Partition,
) -> Result<GammaCheck> {
    is_gamma_transform_with_tol(before, after, partition, DISTANCE_TOL)
}

pub fn is_gamma_transform_with_tol(
    before: &DistanceMatrix,
    after: &DistanceMatrix,
    partition: &Partition,
    rel_tol: f64,
) -> Result<GammaCheck> {
    let n = before.len();
    if after.len() != n {
        return Err(Error::param(
            "after",
            format!("{} elements, expected {n}", after.len()),
        ));
    }
    partition.check_covers(n)?;
    let mut violations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (b, a) = (before.get(i, j), after.get(i, j));
            let same = partition.same_cluster(i, j);
            let slack = rel_tol * b.abs().max(a.abs());
            let bad = if same { a > b + slack } else { a < b - slack };
            if bad {
                violations.push(GammaViolation {
                    i,
                    j,
                    same_cluster: same,
                    before: b,
                    after: a,
                });
            }
        }
    }
    Ok(GammaCheck {
        is_gamma: violations.is_empty(),
        violations,
    })
}

/// Dataset-level form of [`is_gamma_transform`].
pub fn is_gamma_transform_points(
    before: &Dataset,
    after: &Dataset,
    partition: &Partition,
) -> Result<GammaCheck> {
    if before.len() != after.len() {
        return Err(Error::param(
            "after",
            format!("{} points, expected {}", after.len(), before.len()),
        ));
    }
    is_gamma_transform(
        &DistanceMatrix::euclidean_lenient(before),
        &DistanceMatrix::euclidean_lenient(after),
        partition,
    )
}

fn check_cluster(ds: &Dataset, partition: &Partition, cluster: usize) -> Result<()> {
    partition.check_covers(ds.len())?;
    if cluster >= partition.k() {
        return Err(Error::param(
            "cluster",
            format!("{cluster} out of range for {} clusters", partition.k()),
        ));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::param("lambda", format!("must lie in (0, 1], got {lambda}")));
    }
    Ok(())
}

fn centric_in_place(ds: &mut Dataset, members: &[usize], lambda: f64) {
    let mu = ds.mean_of(members);
    for &i in members {
        let p: Vec<f64> = ds
            .point(i)
            .iter()
            .zip(&mu)
            .map(|(x, m)| m + lambda * (x - m))
            .collect();
        ds.set_point(i, &p);
    }
}

/// Moves every point of one cluster toward the cluster mean:
/// `x' = mu + lambda (x - mu)`. Everything else stays put.
pub fn centric_transform(
    ds: &Dataset,
    partition: &Partition,
    cluster: usize,
    lambda: f64,
) -> Result<Dataset> {
    check_cluster(ds, partition, cluster)?;
    check_lambda(lambda)?;
    let mut out = ds.clone();
    centric_in_place(&mut out, partition.cluster(cluster), lambda);
    Ok(out)
}

/// [`centric_transform`] on every cluster with its own factor.
pub fn inner_proportional_transform(
    ds: &Dataset,
    partition: &Partition,
    lambdas: &[f64],
) -> Result<Dataset> {
    partition.check_covers(ds.len())?;
    if lambdas.len() != partition.k() {
        return Err(Error::param(
            "lambdas",
            format!("{} factors for {} clusters", lambdas.len(), partition.k()),
        ));
    }
    lambdas.iter().try_for_each(|&l| check_lambda(l))?;
    let mut out = ds.clone();
    for (members, &l) in partition.clusters().iter().zip(lambdas) {
        centric_in_place(&mut out, members, l);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct MotionOutcome {
    #[serde(skip)]
    pub dataset: Dataset,
    pub center_distances_non_decreasing: bool,
    /// Enclosing balls (center = mean, radius = farthest member) pairwise
    /// disjoint: center distance strictly above the sum of radii.
    pub balls_disjoint: bool,
    pub legal: bool,
}

fn balls_disjoint(ds: &Dataset, partition: &Partition) -> Result<bool> {
    let balls = ball_summaries(ds, partition)?;
    for (a, x) in balls.iter().enumerate() {
        for y in &balls[a + 1..] {
            if dist(&x.center, &y.center) <= x.radius + y.radius {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn center_distances(ds: &Dataset, partition: &Partition) -> Vec<Vec<f64>> {
    let centers: Vec<Vec<f64>> = partition.clusters().iter().map(|c| ds.mean_of(c)).collect();
    centers
        .iter()
        .map(|a| centers.iter().map(|b| dist(a, b)).collect())
        .collect()
}

fn non_decreasing(before: &[Vec<f64>], after: &[Vec<f64>]) -> bool {
    before.iter().zip(after).all(|(rb, ra)| {
        rb.iter()
            .zip(ra)
            .all(|(&b, &a)| a >= b - DISTANCE_TOL * b.max(a))
    })
}

/// Translates one cluster by `v`. Legal when no center distance shrinks and
/// the enclosing balls stay pairwise disjoint.
pub fn motion_transform(
    ds: &Dataset,
    partition: &Partition,
    cluster: usize,
    v: &[f64],
) -> Result<MotionOutcome> {
    check_cluster(ds, partition, cluster)?;
    let mut motions = vec![vec![0.0; ds.dim()]; partition.k()];
    if v.len() != ds.dim() {
        return Err(Error::DimensionMismatch {
            index: cluster,
            expected: ds.dim(),
            found: v.len(),
        });
    }
    motions[cluster] = v.to_vec();
    move_clusters(ds, partition, &motions)
}

fn move_clusters(ds: &Dataset, partition: &Partition, motions: &[Vec<f64>]) -> Result<MotionOutcome> {
    let mut out = ds.clone();
    for (members, v) in partition.clusters().iter().zip(motions) {
        for &i in members {
            let p: Vec<f64> = out.point(i).iter().zip(v).map(|(x, d)| x + d).collect();
            out.set_point(i, &p);
        }
    }
    let ok_dist = non_decreasing(&center_distances(ds, partition), &center_distances(&out, partition));
    let ok_balls = balls_disjoint(&out, partition)?;
    Ok(MotionOutcome {
        dataset: out,
        center_distances_non_decreasing: ok_dist,
        balls_disjoint: ok_balls,
        legal: ok_dist && ok_balls,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscreteOutcome {
    #[serde(skip)]
    pub dataset: Dataset,
    pub motion: MotionOutcome,
    pub gamma: GammaCheck,
    pub is_gamma_transform: bool,
}

/// Per-cluster shrink toward the mean, then per-cluster translation. The flag
/// reports whether the result is a Γ-transform of the input distances.
pub fn discrete_consistency_transform(
    ds: &Dataset,
    partition: &Partition,
    motions: &[Vec<f64>],
    lambdas: &[f64],
) -> Result<DiscreteOutcome> {
    if motions.len() != partition.k() {
        return Err(Error::param(
            "motions",
            format!("{} vectors for {} clusters", motions.len(), partition.k()),
        ));
    }
    for (index, v) in motions.iter().enumerate() {
        if v.len() != ds.dim() {
            return Err(Error::DimensionMismatch {
                index,
                expected: ds.dim(),
                found: v.len(),
            });
        }
    }
    let shrunk = inner_proportional_transform(ds, partition, lambdas)?;
    let motion = move_clusters(&shrunk, partition, motions)?;
    let gamma = is_gamma_transform_points(ds, &motion.dataset, partition)?;
    Ok(DiscreteOutcome {
        dataset: motion.dataset.clone(),
        is_gamma_transform: gamma.is_gamma,
        gamma,
        motion,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformKind {
    Scale,
    KleinbergGamma,
    Centric,
    Motion,
    InnerProportional,
    Composite,
}

/// One applied transform, as logged by experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformRecord {
    pub kind: TransformKind,
    pub cluster: Option<usize>,
    pub lambda: Option<f64>,
    pub vector: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

impl TransformRecord {
    pub fn centric(cluster: usize, lambda: f64) -> Self {
        Self {
            kind: TransformKind::Centric,
            cluster: Some(cluster),
            lambda: Some(lambda),
            vector: None,
            alpha: None,
        }
    }

    pub fn motion(cluster: usize, vector: Vec<f64>) -> Self {
        Self {
            kind: TransformKind::Motion,
            cluster: Some(cluster),
            lambda: None,
            vector: Some(vector),
            alpha: None,
        }
    }

    pub fn scale(alpha: f64) -> Self {
        Self {
            kind: TransformKind::Scale,
            cluster: None,
            lambda: None,
            vector: None,
            alpha: Some(alpha),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_clusters() -> (Dataset, Partition) {
        let ds = Dataset::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![10.0, 0.0],
            vec![11.0, 1.0],
        ])
        .unwrap();
        (ds, Partition::from_labels(&[0, 0, 0, 1, 1]).unwrap())
    }

    #[test]
    fn scale_identity_and_doubling() {
        let (ds, _) = two_clusters();
        assert_eq!(scale(&ds, 1.0).unwrap(), ds);
        let d = DistanceMatrix::euclidean(&ds).unwrap();
        let d2 = scale(&d, 2.0).unwrap();
        assert_eq!(d2.get(0, 3), 2.0 * d.get(0, 3));
        assert!(scale(&d, 0.0).is_err());
        assert!(scale(&ds, -1.0).is_err());
    }

    #[test]
    fn gamma_check_cases() {
        let (ds, p) = two_clusters();
        let d = DistanceMatrix::euclidean(&ds).unwrap();
        assert!(is_gamma_transform(&d, &d, &p).unwrap().is_gamma);
        let mut inner = d.clone();
        inner.set_sym(0, 1, d.get(0, 1) / 2.0);
        assert!(is_gamma_transform(&d, &inner, &p).unwrap().is_gamma);
        let mut cross = d.clone();
        cross.set_sym(2, 4, d.get(2, 4) - 1.0);
        let c = is_gamma_transform(&d, &cross, &p).unwrap();
        assert!(!c.is_gamma);
        assert_eq!(c.violations.len(), 1);
        assert_eq!((c.violations[0].i, c.violations[0].j), (2, 4));
        assert!(!c.violations[0].same_cluster);
    }

    #[test]
    fn centric_keeps_mean_and_scales_inner_distances() {
        let (ds, p) = two_clusters();
        assert_eq!(centric_transform(&ds, &p, 0, 1.0).unwrap(), ds);
        let out = centric_transform(&ds, &p, 0, 0.25).unwrap();
        let (m0, m1) = (ds.mean_of(p.cluster(0)), out.mean_of(p.cluster(0)));
        assert!(dist(&m0, &m1) < 1e-12);
        let before = dist(ds.point(1), ds.point(2));
        let after = dist(out.point(1), out.point(2));
        assert!((after - 0.25 * before).abs() < 1e-12);
        assert_eq!(out.point(3), ds.point(3));
        let collapsed = centric_transform(&ds, &p, 0, 1e-12).unwrap();
        assert!(dist(collapsed.point(0), &m0) < 1e-10);
        assert!(centric_transform(&ds, &p, 0, 1.5).is_err());
        assert!(centric_transform(&ds, &p, 2, 0.5).is_err());
    }

    #[test]
    fn motion_legality() {
        let (ds, p) = two_clusters();
        let still = motion_transform(&ds, &p, 1, &[0.0, 0.0]).unwrap();
        assert!(still.legal);
        let away = motion_transform(&ds, &p, 1, &[5.0, 0.0]).unwrap();
        assert!(away.legal);
        let into = motion_transform(&ds, &p, 1, &[-9.0, 0.0]).unwrap();
        assert!(!into.legal);
        assert!(!into.balls_disjoint);
        assert!(!into.center_distances_non_decreasing);
    }

    #[test]
    fn inner_proportional_per_cluster() {
        let (ds, p) = two_clusters();
        assert_eq!(inner_proportional_transform(&ds, &p, &[1.0, 1.0]).unwrap(), ds);
        let out = inner_proportional_transform(&ds, &p, &[0.5, 1.0]).unwrap();
        assert!((dist(out.point(0), out.point(1)) - 0.5).abs() < 1e-12);
        assert_eq!(out.point(4), ds.point(4));
        assert!(inner_proportional_transform(&ds, &p, &[0.5]).is_err());
    }

    #[test]
    fn discrete_consistency_flags() {
        let (ds, p) = two_clusters();
        let id = discrete_consistency_transform(&ds, &p, &[vec![0.0; 2], vec![0.0; 2]], &[1.0, 1.0])
            .unwrap();
        assert!(id.is_gamma_transform);
        // shrink both, push them 10 apart along the center line
        let c0 = ds.mean_of(p.cluster(0));
        let c1 = ds.mean_of(p.cluster(1));
        let len = dist(&c0, &c1);
        let u: Vec<f64> = c1.iter().zip(&c0).map(|(a, b)| (a - b) / len).collect();
        let apart = vec![u.iter().map(|v| -5.0 * v).collect(), u.iter().map(|v| 5.0 * v).collect()];
        let out = discrete_consistency_transform(&ds, &p, &apart, &[0.9, 0.9]).unwrap();
        assert!(out.is_gamma_transform);
        let toward = vec![vec![0.0; 2], u.iter().map(|v| -4.0 * v).collect()];
        let bad = discrete_consistency_transform(&ds, &p, &toward, &[1.0, 0.8]).unwrap();
        assert!(!bad.is_gamma_transform);
    }

    #[test]
    fn record_json() {
        let r = TransformRecord::centric(2, 0.5);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["kind"], "centric");
        assert_eq!(v["cluster"], 2);
        assert_eq!(v["lambda"], 0.5);
        assert!(v["vector"].is_null());
    }
}
