//! Ball-separation certificates and the closed-form gap and probability bounds
//! attached to them.

mod takeover;

use serde::{Deserialize, Serialize};

use crate::data::{dist, Dataset, Partition};
use crate::error::{Error, Result};

pub use takeover::{takeover_delta_direct, takeover_gap_root, takeover_profitable, Takeover};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallSummary {
    pub center: Vec<f64>,
    /// Largest member distance to `center`.
    pub radius: f64,
    pub count: usize,
}

/// Mean, enclosing radius and size of every cluster.
pub fn ball_summaries(ds: &Dataset, partition: &Partition) -> Result<Vec<BallSummary>> {
    partition.check_covers(ds.len())?;
    Ok(partition
        .clusters()
        .iter()
        .map(|members| {
            let center = ds.mean_of(members);
            let radius = members
                .iter()
                .map(|&i| dist(ds.point(i), &center))
                .fold(0.0, f64::max);
            BallSummary {
                center,
                radius,
                count: members.len(),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairSeparation {
    pub a: usize,
    pub b: usize,
    pub center_distance: f64,
    /// `max(r_a, r_b)`
    pub rho: f64,
    /// `center_distance >= 4 rho`
    pub nice: bool,
    /// `center_distance - 2 rho`; the pair has a core when positive.
    pub core_gap: f64,
    pub core_radius: f64,
    /// Distance between the enclosing ball surfaces, `d - r_a - r_b`.
    pub ball_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbsoluteBound {
    /// `max_{p != q} k sqrt(n_p + n_q + n) sqrt(sum_i n_i r_i^2 / (n_p n_q))`
    pub case1: f64,
    pub case1_pair: (usize, usize),
    /// `max_i r_i sqrt(k (M + n) / m)`, `M`/`m` the largest/smallest cluster size.
    pub case2: f64,
    pub case2_cluster: usize,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationCertificate {
    pub nice_ball: bool,
    pub perfect_ball: bool,
    /// Largest enclosing radius over all clusters.
    pub rho: f64,
    pub core: bool,
    pub absolute: bool,
    pub min_ball_gap: f64,
    pub absolute_bound: AbsoluteBound,
    pub radii: Vec<f64>,
    pub sizes: Vec<usize>,
    pub pairs: Vec<PairSeparation>,
    pub pairwise_center_distances: Vec<Vec<f64>>,
}

/// Which separation regimes a clustered dataset satisfies.
///
/// Balls are closed, so the 4ρ boundary counts as separated. The absolute
/// check uses a sufficient condition only: a negative answer says nothing
/// about global optimality.
pub fn certify(ds: &Dataset, partition: &Partition) -> Result<SeparationCertificate> {
    let balls = ball_summaries(ds, partition)?;
    let k = balls.len();
    if k < 2 {
        return Err(Error::param("partition", "need at least two clusters"));
    }
    let rho = balls.iter().map(|b| b.radius).fold(0.0, f64::max);
    let centers: Vec<Vec<f64>> = balls
        .iter()
        .map(|a| balls.iter().map(|b| dist(&a.center, &b.center)).collect())
        .collect();
    let mut pairs = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            let d = centers[a][b];
            let r = balls[a].radius.max(balls[b].radius);
            let g = d - 2.0 * r;
            pairs.push(PairSeparation {
                a,
                b,
                center_distance: d,
                rho: r,
                nice: d >= 4.0 * r,
                core_gap: g,
                core_radius: (g / 2.0).max(0.0),
                ball_gap: d - balls[a].radius - balls[b].radius,
            });
        }
    }
    let bound = absolute_gap_bound(&balls, k, ds.len())?;
    let min_ball_gap = pairs.iter().map(|p| p.ball_gap).fold(f64::INFINITY, f64::min);
    Ok(SeparationCertificate {
        nice_ball: pairs.iter().all(|p| p.nice),
        perfect_ball: pairs.iter().all(|p| p.center_distance >= 4.0 * rho),
        rho,
        core: pairs.iter().all(|p| p.core_gap > 0.0),
        absolute: min_ball_gap >= bound.bound,
        min_ball_gap,
        absolute_bound: bound,
        radii: balls.iter().map(|b| b.radius).collect(),
        sizes: balls.iter().map(|b| b.count).collect(),
        pairs,
        pairwise_center_distances: centers,
    })
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::param(name, format!("must be positive, got {v}")));
    }
    Ok(())
}

/// Smallest ball gap for which moving up to half of cluster 2 into cluster 1
/// cannot pay off: `r2 sqrt(2 (1 + n2 / (2 n1))) - r1`, floored at 0.
pub fn motion_gap_bound(n1: usize, r1: f64, n2: usize, r2: f64) -> Result<f64> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::param("n", "cluster sizes must be positive"));
    }
    positive("r1", r1)?;
    positive("r2", r2)?;
    let ratio = n2 as f64 / n1 as f64;
    Ok((r2 * (2.0 * (1.0 + 0.5 * ratio)).sqrt() - r1).max(0.0))
}

/// Ball gap sufficient for the ball partition to be the global k-means
/// minimum; the larger of the two case bounds.
pub fn absolute_gap_bound(balls: &[BallSummary], k: usize, n: usize) -> Result<AbsoluteBound> {
    if balls.len() < 2 || k < 2 {
        return Err(Error::param("balls", "need at least two clusters"));
    }
    if balls.iter().any(|b| b.count == 0) {
        return Err(Error::param("balls", "empty cluster"));
    }
    let kf = k as f64;
    let nf = n as f64;
    let weighted: f64 = balls.iter().map(|b| b.count as f64 * b.radius * b.radius).sum();
    let mut case1 = 0.0;
    let mut case1_pair = (0, 1);
    for p in 0..balls.len() {
        for q in p + 1..balls.len() {
            let (np, nq) = (balls[p].count as f64, balls[q].count as f64);
            let v = kf * (np + nq + nf).sqrt() * (weighted / (np * nq)).sqrt();
            if v > case1 {
                case1 = v;
                case1_pair = (p, q);
            }
        }
    }
    let big = balls.iter().map(|b| b.count).max().unwrap_or(1) as f64;
    let small = balls.iter().map(|b| b.count).min().unwrap_or(1) as f64;
    let factor = (kf * (big + nf) / small).sqrt();
    let mut case2 = 0.0;
    let mut case2_cluster = 0;
    for (i, b) in balls.iter().enumerate() {
        if b.radius * factor > case2 {
            case2 = b.radius * factor;
            case2_cluster = i;
        }
    }
    Ok(AbsoluteBound {
        case1,
        case1_pair,
        case2,
        case2_cluster,
        bound: case1.max(case2),
    })
}

/// Largest share of a cluster that may lie outside its core of radius `g/2`:
/// with `q = g / (2 rho)`, `q n_c / (q n_c - q (n - n_c) + n)`, clamped to
/// `[0, 1]`.
pub fn off_core_fraction_bound(g: f64, rho: f64, n_c: usize, n: usize) -> Result<f64> {
    positive("g", g)?;
    positive("rho", rho)?;
    if n == 0 || n_c == 0 || n_c > n {
        return Err(Error::param("n_c", format!("need 0 < n_c <= n, got {n_c} and {n}")));
    }
    let q = g / (2.0 * rho);
    let (nc, nf) = (n_c as f64, n as f64);
    let denom = q * nc - q * (nf - nc) + nf;
    if denom <= 0.0 {
        return Ok(1.0);
    }
    Ok((q * nc / denom).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedingStrategy {
    Random,
    PlusPlus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeedingSuccess {
    /// Probability that one seeding puts one seed in every cluster.
    pub q: f64,
    /// Restarts needed to reach the target confidence, when one was given.
    pub restarts: Option<usize>,
}

/// Chance of seeding every cluster exactly once when the smallest cluster
/// holds share `p` of the data (all clusters treated as that small, which is
/// the worst case), and the restarts needed for a target confidence.
///
/// Random: `prod_{j=1}^{k-1} (1 - (k-j) p)`. Plus-plus with 4ρ-separated
/// balls: `prod 9 (k-j) p / (9 (k-j) p + 4 (1 - (k-j) p))`; `rho` cancels.
pub fn seeding_success(
    p: f64,
    k: usize,
    strategy: SeedingStrategy,
    rho: Option<f64>,
    target_confidence: Option<f64>,
) -> Result<SeedingSuccess> {
    if k == 0 {
        return Err(Error::param("k", "must be at least 1"));
    }
    if !(p > 0.0 && p <= 1.0 / k as f64 * (1.0 + 1e-12)) {
        return Err(Error::param("p", format!("share {p} impossible for k={k}")));
    }
    if let Some(r) = rho {
        positive("rho", r)?;
    }
    let rho2 = rho.map_or(1.0, |r| r * r);
    let mut q = 1.0;
    for j in 1..k {
        let s = (k - j) as f64 * p;
        let rest = (1.0 - s).max(0.0);
        q *= match strategy {
            SeedingStrategy::Random => rest,
            SeedingStrategy::PlusPlus => 9.0 * rho2 * s / (9.0 * rho2 * s + 4.0 * rho2 * rest),
        };
    }
    let restarts = match target_confidence {
        None => None,
        Some(t) => {
            if !(0.0..1.0).contains(&t) {
                return Err(Error::param("target_confidence", format!("must lie in [0, 1), got {t}")));
            }
            Some(restarts_for(q, t)?)
        }
    };
    Ok(SeedingSuccess { q, restarts })
}

/// Smallest `m` with `1 - (1 - q)^m >= target`.
pub fn restarts_for(q: f64, target: f64) -> Result<usize> {
    if target <= 0.0 || q >= 1.0 {
        return Ok(1);
    }
    if q <= 0.0 {
        return Err(Error::param("q", "zero success probability; no restart count suffices"));
    }
    let guess = ((1.0 - target).ln() / (1.0 - q).ln()).ceil().max(1.0) as usize;
    let reaches = |m: usize| 1.0 - (1.0 - q).powi(m as i32) >= target;
    let mut m = guess.saturating_sub(1).max(1);
    while !reaches(m) {
        m += 1;
    }
    Ok(m)
}
