use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Partition};
use crate::error::{Error, Result};
use crate::rng;
use crate::transforms::centric_transform;

/// Component means of the default five-component mixture in the plane.
pub const TABLE3_MEANS: [[f64; 2]; 5] = [[-1.5, 3.5], [2.0, -3.9], [2.0, 2.2], [6.2, 0.3], [2.6, 6.4]];
/// Components moved by the transforms.
pub const TABLE3_AFFECTED: [usize; 2] = [3, 4];
/// Translation length of the far-group transform.
pub const TABLE3_SHIFT: f64 = 50.0;
pub const TABLE3_CENTRIC_LAMBDA: f64 = 0.77;
pub const TABLE3_CENTRIC_PASSES: usize = 2;
const TABLE3_COUNT: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub mean: Vec<f64>,
    /// Symmetric positive semidefinite, `m x m`.
    pub covariance: Vec<Vec<f64>>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub components: Vec<Component>,
}

impl Component {
    pub fn isotropic(mean: Vec<f64>, variance: f64, count: usize) -> Self {
        let m = mean.len();
        let covariance = (0..m)
            .map(|i| (0..m).map(|j| if i == j { variance } else { 0.0 }).collect())
            .collect();
        Self {
            mean,
            covariance,
            count,
        }
    }

    /// `L` with `L L^T = covariance`, from the eigendecomposition so that
    /// singular covariances are accepted.
    fn factor(&self) -> Result<DMatrix<f64>> {
        let m = self.mean.len();
        if m == 0 || self.covariance.len() != m || self.covariance.iter().any(|r| r.len() != m) {
            return Err(Error::param("covariance", format!("must be {m}x{m}")));
        }
        let c = DMatrix::from_fn(m, m, |i, j| self.covariance[i][j]);
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("covariance", "entries must be finite"));
        }
        let scale = c.amax().max(f64::MIN_POSITIVE);
        if (&c - c.transpose()).amax() > 1e-12 * scale {
            return Err(Error::param("covariance", "must be symmetric"));
        }
        let eig = SymmetricEigen::new(c);
        if eig.eigenvalues.iter().any(|&l| l < -1e-12 * scale) {
            return Err(Error::param("covariance", "must be positive semidefinite"));
        }
        let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
        Ok(eig.eigenvectors * DMatrix::from_diagonal(&roots))
    }
}

/// Samples every component in order; labels give the component of each point.
pub fn gaussian_mixture<R: Rng + ?Sized>(spec: &MixtureSpec, rng: &mut R) -> Result<(Dataset, Partition)> {
    let dim = spec
        .components
        .first()
        .ok_or_else(|| Error::param("components", "need at least one component"))?
        .mean
        .len();
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (c, comp) in spec.components.iter().enumerate() {
        if comp.mean.len() != dim {
            return Err(Error::DimensionMismatch {
                index: c,
                expected: dim,
                found: comp.mean.len(),
            });
        }
        let l = comp.factor()?;
        for _ in 0..comp.count {
            let z: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            let p: Vec<f64> = (0..dim)
                .map(|i| comp.mean[i] + (0..dim).map(|j| l[(i, j)] * z[j]).sum::<f64>())
                .collect();
            points.push(p);
            labels.push(c);
        }
    }
    let ds = Dataset::new(points)?;
    let partition = Partition::from_labels(&labels)?;
    Ok((ds, partition))
}

/// Five unit-variance components in the plane, 200 points each.
pub fn default_mixture() -> MixtureSpec {
    MixtureSpec {
        components: TABLE3_MEANS
            .iter()
            .map(|m| Component::isotropic(m.to_vec(), 1.0, TABLE3_COUNT))
            .collect(),
    }
}

/// The mixture and its two transformed versions.
#[derive(Debug, Clone)]
pub struct Table3Data {
    pub original: Dataset,
    /// Affected components translated far away along the line joining the
    /// mean of the unaffected components to the mean of the affected ones.
    pub kleinberg: Dataset,
    /// Affected components contracted toward their own means.
    pub centric: Dataset,
    /// Component membership.
    pub components: Partition,
    /// `{unaffected, affected}`, the partition the far-group transform respects.
    pub groups: Partition,
}

pub fn table3_datasets(seed: u64) -> Result<Table3Data> {
    let (original, components) = gaussian_mixture(&default_mixture(), &mut rng::from_seed(seed))?;
    let affected = |c: usize| TABLE3_AFFECTED.contains(&c);
    let group_labels: Vec<usize> = components.labels().iter().map(|&c| usize::from(affected(c))).collect();
    let groups = Partition::from_labels(&group_labels)?;

    let stay = original.mean_of(groups.cluster(0));
    let moved = original.mean_of(groups.cluster(1));
    let dir: Vec<f64> = moved.iter().zip(&stay).map(|(a, b)| a - b).collect();
    let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    let shift: Vec<f64> = dir.iter().map(|v| TABLE3_SHIFT * v / norm).collect();
    let kleinberg = Dataset::new(
        original
            .points()
            .zip(components.labels())
            .map(|(p, &c)| {
                if affected(c) {
                    p.iter().zip(&shift).map(|(x, s)| x + s).collect()
                } else {
                    p.to_vec()
                }
            })
            .collect(),
    )?;

    let mut centric = original.clone();
    for _ in 0..TABLE3_CENTRIC_PASSES {
        for &c in &TABLE3_AFFECTED {
            centric = centric_transform(&centric, &components, c, TABLE3_CENTRIC_LAMBDA)?;
        }
    }
    Ok(Table3Data {
        original,
        kleinberg,
        centric,
        components,
        groups,
    })
}
