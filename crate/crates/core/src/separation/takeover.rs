//! Two clusters on a line: does handing part of the second cluster to the
//! first lower the objective?
//!
//! Worst case geometry: cluster 2 splits into a part of `n21` points whose
//! center sits `r21` from cluster 2's center toward cluster 1, and the rest,
//! `n22 = n2 - n21` points, balancing it at `r22 = r21 n21 / n22` on the far
//! side. The enclosing balls are `g` apart.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Takeover {
    pub n1: usize,
    pub r1: f64,
    pub n2: usize,
    pub r2: f64,
    pub n21: usize,
    pub r21: f64,
    pub g: f64,
}

impl Takeover {
    /// The edge case `r21 = r2`.
    pub fn at_edge(n1: usize, r1: f64, n2: usize, r2: f64, n21: usize, g: f64) -> Self {
        Self {
            n1,
            r1,
            n2,
            r2,
            n21,
            r21: r2,
            g,
        }
    }

    fn check(&self) -> Result<()> {
        if self.n1 == 0 || self.n21 == 0 || self.n21 >= self.n2 {
            return Err(Error::param("n21", "need n1 >= 1 and 0 < n21 < n2"));
        }
        if !(self.r21 >= 0.0 && self.r21 <= self.r2 && self.r1 >= 0.0 && self.g >= 0.0) {
            return Err(Error::param("r21", "need 0 <= r21 <= r2, r1 >= 0, g >= 0"));
        }
        if self.r22() > self.r2 * (1.0 + 1e-12) {
            return Err(Error::param("n21", "the remainder would leave the ball (n21 > n2/2)"));
        }
        Ok(())
    }

    pub fn n22(&self) -> usize {
        self.n2 - self.n21
    }

    pub fn r22(&self) -> f64 {
        self.r21 * self.n21 as f64 / self.n22() as f64
    }
}

/// Closed form: the takeover pays off iff
/// `n21 r21^2 + n22 r22^2 > n1 n21 / (n1 + n21) (r1 + r2 + g - r21)^2`.
pub fn takeover_profitable(t: &Takeover) -> Result<bool> {
    t.check()?;
    let (n1, n21, n22) = (t.n1 as f64, t.n21 as f64, t.n22() as f64);
    let lhs = n21 * t.r21 * t.r21 + n22 * t.r22() * t.r22();
    let reach = t.r1 + t.r2 + t.g - t.r21;
    let rhs = n1 * n21 / (n1 + n21) * reach * reach;
    Ok(lhs > rhs * (1.0 + 1e-12))
}

/// The gap at which the closed form turns to equality:
/// `r21 sqrt(n2 / n1 * (n1 + n21) / (n2 - n21)) - r1 - r2 + r21`.
pub fn takeover_gap_root(n1: usize, r1: f64, n2: usize, r2: f64, n21: usize, r21: f64) -> f64 {
    let (n1, n2, n21) = (n1 as f64, n2 as f64, n21 as f64);
    r21 * (n2 / n1 * (n1 + n21) / (n2 - n21)).sqrt() - r1 - r2 + r21
}

fn ssc(masses: &[(f64, f64)]) -> f64 {
    let w: f64 = masses.iter().map(|m| m.1).sum();
    let mean = masses.iter().map(|m| m.0 * m.1).sum::<f64>() / w;
    masses.iter().map(|(x, c)| c * (x - mean) * (x - mean)).sum()
}

/// Objective after the takeover minus before, computed from point masses on a
/// line (cluster 1 collapsed onto its center, each part of cluster 2 onto its
/// own center). Negative means the takeover pays off.
pub fn takeover_delta_direct(t: &Takeover) -> Result<f64> {
    t.check()?;
    let c2 = t.r1 + t.g + t.r2;
    let c1 = (0.0, t.n1 as f64);
    let part21 = (c2 - t.r21, t.n21 as f64);
    let part22 = (c2 + t.r22(), t.n22() as f64);
    let before = ssc(&[c1]) + ssc(&[part21, part22]);
    let after = ssc(&[c1, part21]) + ssc(&[part22]);
    Ok(after - before)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separation::motion_gap_bound;

    #[test]
    fn direct_and_closed_form_agree() {
        for &(n1, n2, n21, g) in &[(10, 10, 5, 0.1), (10, 10, 5, 2.0), (3, 40, 7, 0.5), (50, 4, 2, 0.0)] {
            let t = Takeover::at_edge(n1, 1.0, n2, 1.0, n21, g);
            let delta = takeover_delta_direct(&t).unwrap();
            assert_eq!(delta < -1e-9, takeover_profitable(&t).unwrap(), "{t:?} {delta}");
        }
    }

    #[test]
    fn root_is_break_even() {
        let (n1, n2, n21) = (7, 12, 4);
        let g = takeover_gap_root(n1, 1.5, n2, 2.0, n21, 2.0);
        let t = Takeover::at_edge(n1, 1.5, n2, 2.0, n21, g);
        assert!(takeover_delta_direct(&t).unwrap().abs() < 1e-9);
    }

    #[test]
    fn half_cluster_root_equals_motion_bound() {
        let root = takeover_gap_root(9, 1.2, 14, 0.8, 7, 0.8);
        assert!((root - motion_gap_bound(9, 1.2, 14, 0.8).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn rejects_more_than_half() {
        assert!(takeover_delta_direct(&Takeover::at_edge(5, 1.0, 10, 1.0, 6, 1.0)).is_err());
    }
}
