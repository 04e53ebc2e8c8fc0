use serde::Serialize;

use super::{is_gamma_transform, scale, GammaCheck};
use crate::data::{DistanceMatrix, Partition};
use crate::error::Result;

/// A Γ-transform followed by a rescale that ends with some cross-cluster
/// distance below its original value: consistency and scale invariance
/// together can pull clusters closer.
#[derive(Debug, Clone, Serialize)]
pub struct InterferenceWitness {
    pub original: Vec<f64>,
    pub transformed: Vec<f64>,
    pub alpha: f64,
    pub partition: Partition,
    pub gamma: GammaCheck,
    /// `(i, j, d1(i,j), alpha * d3(i,j))` for cross pairs that shrank.
    pub decreased: Vec<(usize, usize, f64, f64)>,
}

impl InterferenceWitness {
    pub fn holds(&self) -> bool {
        self.gamma.is_gamma && !self.decreased.is_empty()
    }
}

fn line_matrix(xs: &[f64]) -> Result<DistanceMatrix> {
    DistanceMatrix::from_rows(
        xs.iter()
            .map(|a| xs.iter().map(|b| (a - b).abs()).collect())
            .collect(),
    )
}

/// Four points on a line at 0, 0.4, 0.6, 1 clustered as {e1} {e2,e3} {e4};
/// moved to 0, 0.5, 0.6, 2 and then halved.
pub fn interference_witness() -> Result<InterferenceWitness> {
    let original = vec![0.0, 0.4, 0.6, 1.0];
    let transformed = vec![0.0, 0.5, 0.6, 2.0];
    let alpha = 0.5;
    let partition = Partition::from_labels(&[0, 1, 1, 2])?;
    let d1 = line_matrix(&original)?;
    let d3 = line_matrix(&transformed)?;
    let gamma = is_gamma_transform(&d1, &d3, &partition)?;
    let rescaled = scale(&d3, alpha)?;
    let mut decreased = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            if !partition.same_cluster(i, j) && rescaled.get(i, j) < d1.get(i, j) {
                decreased.push((i, j, d1.get(i, j), rescaled.get(i, j)));
            }
        }
    }
    Ok(InterferenceWitness {
        original,
        transformed,
        alpha,
        partition,
        gamma,
        decreased,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_holds() {
        let w = interference_witness().unwrap();
        assert!(w.gamma.is_gamma);
        assert!(w.holds());
        // e1-e2: 0.4 before, 0.25 after
        assert!(w
            .decreased
            .iter()
            .any(|&(i, j, b, a)| (i, j) == (0, 1) && (b - 0.4).abs() < 1e-12 && (a - 0.25).abs() < 1e-12));
    }
}
