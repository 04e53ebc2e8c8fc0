//! Euclidean embeddability of a distance table.
//!
//! Classical scaling: double-center the squared distances, take the spectrum.
//! A Euclidean embedding exists iff the centered Gram matrix is positive
//! semidefinite. When it is not, the eigenvectors of negative eigenvalues
//! still yield coordinates if those axes are treated as imaginary: squared
//! differences along them count negatively, which reproduces the input table
//! exactly ("rigid" distance formula).

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::distance::DistanceMatrix;
use super::partition::Partition;
use crate::error::{Error, Result};

/// Relative cutoff: `|lambda| <= DEFAULT_EIGEN_TOL * max|lambda|` counts as zero.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-8;

/// Points whose axes are each either real or imaginary. Coordinates along an
/// imaginary axis hold the coefficient of `i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignedCoordinates {
    pub coords: Vec<Vec<f64>>,
    pub imaginary: Vec<bool>,
}

impl SignedCoordinates {
    pub fn new(coords: Vec<Vec<f64>>, imaginary: Vec<bool>) -> Result<Self> {
        let r = imaginary.len();
        for (index, c) in coords.iter().enumerate() {
            if c.len() != r {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: r,
                    found: c.len(),
                });
            }
        }
        Ok(Self { coords, imaginary })
    }

    /// All axes real.
    pub fn real(coords: Vec<Vec<f64>>) -> Result<Self> {
        let r = coords.first().map_or(0, Vec::len);
        Self::new(coords, vec![false; r])
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn axes(&self) -> usize {
        self.imaginary.len()
    }

    /// Point `i` as `(re, im)` pairs.
    pub fn complex_point(&self, i: usize) -> Vec<(f64, f64)> {
        self.coords[i]
            .iter()
            .zip(&self.imaginary)
            .map(|(&v, &im)| if im { (0.0, v) } else { (v, 0.0) })
            .collect()
    }

    /// Squared rigid distance: real axes add, imaginary axes subtract.
    /// May be negative.
    pub fn rigid_sq(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .zip(&self.imaginary)
            .map(|((x, y), &im)| {
                let s = (x - y) * (x - y);
                if im {
                    -s
                } else {
                    s
                }
            })
            .sum()
    }

    /// `sqrt(max(0, rigid_sq))` between points `i` and `j`.
    pub fn rigid_distance(&self, i: usize, j: usize) -> f64 {
        self.rigid_sq(&self.coords[i], &self.coords[j]).max(0.0).sqrt()
    }

    pub fn rigid_distances(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        (0..n)
            .map(|i| (0..n).map(|j| self.rigid_distance(i, j)).collect())
            .collect()
    }

    pub fn mean_of(&self, indices: &[usize]) -> Vec<f64> {
        let mut m = vec![0.0; self.axes()];
        for &i in indices {
            for (acc, v) in m.iter_mut().zip(&self.coords[i]) {
                *acc += v;
            }
        }
        m.iter_mut().for_each(|v| *v /= indices.len() as f64);
        m
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingReport {
    /// Spectrum of the double-centered Gram matrix, descending.
    pub eigenvalues: Vec<f64>,
    pub embeddable: bool,
    /// One axis per eigenvalue with `|lambda|` above the cutoff; axes from
    /// negative eigenvalues are imaginary.
    pub coordinates: SignedCoordinates,
    pub tolerance: f64,
}

impl EmbeddingReport {
    pub fn significant_axes(&self) -> usize {
        self.coordinates.axes()
    }

    pub fn negative_eigenvalues(&self) -> impl Iterator<Item = f64> + '_ {
        let tol = self.tolerance;
        self.eigenvalues.iter().copied().filter(move |&l| l < -tol)
    }

    /// Largest `|rigid distance - d|` over all pairs.
    pub fn max_reconstruction_error(&self, d: &DistanceMatrix) -> f64 {
        let n = d.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.coordinates.rigid_distance(i, j) - d.get(i, j)).abs());
            }
        }
        worst
    }
}

pub fn embeddability_check(d: &DistanceMatrix) -> Result<EmbeddingReport> {
    embeddability_check_with_tol(d, DEFAULT_EIGEN_TOL)
}

/// `rel_tol` scales with the largest `|lambda|`. Tables printed with rounded
/// entries need a cutoff above their rounding noise to expose their true rank.
pub fn embeddability_check_with_tol(d: &DistanceMatrix, rel_tol: f64) -> Result<EmbeddingReport> {
    let n = d.len();
    let sq = DMatrix::from_fn(n, n, |i, j| {
        let v = d.get(i, j);
        v * v
    });
    // B = -1/2 J D2 J with J = I - 11'/n
    let row_means: Vec<f64> = (0..n).map(|i| sq.row(i).sum() / n as f64).collect();
    let col_means: Vec<f64> = (0..n).map(|j| sq.column(j).sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    let gram = DMatrix::from_fn(n, n, |i, j| {
        -0.5 * (sq[(i, j)] - row_means[i] - col_means[j] + grand)
    });
    // symmetrize away asymmetric input noise
    let gram = (&gram + gram.transpose()) * 0.5;
    if gram.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigen("non-finite Gram matrix".into()));
    }
    let eig = SymmetricEigen::try_new(gram, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Eigen("symmetric eigensolver did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let scale = eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    let tolerance = rel_tol * scale;

    let kept: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| eig.eigenvalues[i].abs() > tolerance)
        .collect();
    let imaginary: Vec<bool> = kept.iter().map(|&i| eig.eigenvalues[i] < 0.0).collect();
    let coords = (0..n)
        .map(|p| {
            kept.iter()
                .map(|&a| eig.eigenvectors[(p, a)] * eig.eigenvalues[a].abs().sqrt())
                .collect()
        })
        .collect();
    let embeddable = eigenvalues.iter().all(|&l| l >= -tolerance);

    Ok(EmbeddingReport {
        eigenvalues,
        embeddable,
        coordinates: SignedCoordinates::new(coords, imaginary)?,
        tolerance,
    })
}

/// k-means objective under the rigid distance: sum over points of the signed
/// squared distance to their cluster's center. Centers default to the
/// per-cluster coordinate means. The value can be negative.
pub fn complex_objective(
    coords: &SignedCoordinates,
    partition: &Partition,
    centers: Option<&[Vec<f64>]>,
) -> Result<f64> {
    partition.check_covers(coords.len())?;
    let centers: Vec<Vec<f64>> = match centers {
        Some(c) => {
            if c.len() != partition.k() {
                return Err(Error::param(
                    "centers",
                    format!("{} centers for {} clusters", c.len(), partition.k()),
                ));
            }
            for (index, center) in c.iter().enumerate() {
                if center.len() != coords.axes() {
                    return Err(Error::DimensionMismatch {
                        index,
                        expected: coords.axes(),
                        found: center.len(),
                    });
                }
            }
            c.to_vec()
        }
        None => partition
            .clusters()
            .iter()
            .map(|members| coords.mean_of(members))
            .collect(),
    };
    Ok((0..coords.len())
        .map(|i| coords.rigid_sq(&coords.coords[i], &centers[partition.label(i)]))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Dataset;

    #[test]
    fn euclidean_input_is_embeddable() {
        let ds = Dataset::new(vec![
            vec![0.0, 0.0],
            vec![3.0, 0.0],
            vec![0.0, 4.0],
            vec![1.0, 1.0],
        ])
        .unwrap();
        let d = DistanceMatrix::euclidean(&ds).unwrap();
        let rep = embeddability_check(&d).unwrap();
        assert!(rep.embeddable);
        assert_eq!(rep.significant_axes(), 2);
        assert!(rep.coordinates.imaginary.iter().all(|im| !im));
        assert!(rep.max_reconstruction_error(&d) < 1e-9);
    }

    #[test]
    fn own_center_is_zero() {
        let c = SignedCoordinates::new(vec![vec![1.0, 2.0], vec![4.0, -1.0]], vec![false, true])
            .unwrap();
        let p = Partition::singletons(2);
        assert_eq!(complex_objective(&c, &p, None).unwrap(), 0.0);
    }

    #[test]
    fn imaginary_axis_subtracts() {
        let c = SignedCoordinates::new(vec![vec![3.0, 1.0], vec![0.0, -1.0]], vec![false, true])
            .unwrap();
        assert_eq!(c.rigid_sq(&c.coords[0], &c.coords[1]), 9.0 - 4.0);
        assert_eq!(c.complex_point(1), vec![(0.0, 0.0), (0.0, -1.0)]);
    }

    #[test]
    fn center_dimension_checked() {
        let c = SignedCoordinates::real(vec![vec![1.0], vec![2.0]]).unwrap();
        let p = Partition::whole(2);
        assert!(complex_objective(&c, &p, Some(&[vec![1.0, 2.0]])).is_err());
        assert!(complex_objective(&c, &p, Some(&[vec![1.0], vec![2.0]])).is_err());
    }
}
