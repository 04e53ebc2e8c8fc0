use serde::Serialize;

use crate::data::{sq_dist, Dataset, Partition};
use crate::error::{Error, Result};

/// Moving `point` from cluster `from` to cluster `to` changes the objective by
/// `addition_cost - removal_gain`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Move {
    pub point: usize,
    pub from: usize,
    pub to: usize,
    /// `n_a / (n_a - 1) * |x - mu_a|^2`
    pub removal_gain: f64,
    /// `n_b / (n_b + 1) * |x - mu_b|^2`
    pub addition_cost: f64,
}

impl Move {
    pub fn delta(&self) -> f64 {
        self.addition_cost - self.removal_gain
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalMinReport {
    pub is_local_min: bool,
    /// Most improving single-point move when not a local minimum.
    pub witness: Option<Move>,
    pub moves_checked: usize,
    /// Worst relative disagreement between the closed-form increments and a
    /// direct recomputation, over every move checked.
    pub identity_max_rel_error: f64,
}

fn scatter(ds: &Dataset, members: &[usize]) -> f64 {
    let mu = ds.mean_of(members);
    members.iter().map(|&i| sq_dist(ds.point(i), &mu)).sum()
}

/// `|a - b|` relative to the largest of `a`, `b` and `reference`.
fn rel_err(a: f64, b: f64, reference: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(reference.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Closed-form scatter after removing or adding one point, next to the value
/// recomputed from scratch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DudaHartCheck {
    pub removal: bool,
    /// Scatter of the cluster before the move.
    pub before: f64,
    pub predicted: f64,
    pub direct: f64,
}

impl DudaHartCheck {
    /// Error relative to the largest term involved, so that a cluster
    /// shrinking to one point (direct scatter exactly 0) is judged against
    /// the scatter that cancelled, not against zero.
    pub fn relative_error(&self) -> f64 {
        rel_err(self.predicted, self.direct, self.before)
    }
}

/// If `x` belongs to `members`, checks `V(C \ x) = V(C) - n/(n-1) |x - mu|^2`;
/// otherwise `V(C + x) = V(C) + n/(n+1) |x - mu|^2`.
pub fn duda_hart_check(ds: &Dataset, members: &[usize], x: usize) -> Result<DudaHartCheck> {
    if members.is_empty() || x >= ds.len() || members.iter().any(|&i| i >= ds.len()) {
        return Err(Error::param("members", "indices out of range or empty cluster"));
    }
    let n = members.len() as f64;
    let mu = ds.mean_of(members);
    let v = scatter(ds, members);
    let d = sq_dist(ds.point(x), &mu);
    if members.contains(&x) {
        if members.len() < 2 {
            return Err(Error::param("members", "cannot remove the only point"));
        }
        let rest: Vec<usize> = members.iter().copied().filter(|&i| i != x).collect();
        Ok(DudaHartCheck {
            removal: true,
            before: v,
            predicted: v - n / (n - 1.0) * d,
            direct: scatter(ds, &rest),
        })
    } else {
        let mut more = members.to_vec();
        more.push(x);
        Ok(DudaHartCheck {
            removal: false,
            before: v,
            predicted: v + n / (n + 1.0) * d,
            direct: scatter(ds, &more),
        })
    }
}

/// Whether no single-point reassignment lowers the objective. Moves that
/// would empty a cluster are skipped. A move counts as improving only when
/// the gain beats the cost by more than a relative 1e-12, so exact ties are
/// not reported as failures.
pub fn is_local_min(ds: &Dataset, partition: &Partition) -> Result<LocalMinReport> {
    partition.check_covers(ds.len())?;
    let means: Vec<Vec<f64>> = partition.clusters().iter().map(|c| ds.mean_of(c)).collect();
    let sizes = partition.sizes();
    let scatters: Vec<f64> = partition.clusters().iter().map(|c| scatter(ds, c)).collect();
    let mut witness: Option<Move> = None;
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for i in 0..ds.len() {
        let a = partition.label(i);
        let na = sizes[a] as f64;
        if sizes[a] < 2 {
            continue;
        }
        let x = ds.point(i);
        let da = sq_dist(x, &means[a]);
        let removal_gain = na / (na - 1.0) * da;
        let without: Vec<usize> = partition.cluster(a).iter().copied().filter(|&j| j != i).collect();
        worst = worst.max(rel_err(scatters[a] - removal_gain, scatter(ds, &without), scatters[a]));
        for b in 0..partition.k() {
            if b == a {
                continue;
            }
            checked += 1;
            let nb = sizes[b] as f64;
            let addition_cost = nb / (nb + 1.0) * sq_dist(x, &means[b]);
            let mut with = partition.cluster(b).to_vec();
            with.push(i);
            worst = worst.max(rel_err(scatters[b] + addition_cost, scatter(ds, &with), scatters[b]));
            if removal_gain > addition_cost + 1e-12 * removal_gain.max(addition_cost) {
                let mv = Move {
                    point: i,
                    from: a,
                    to: b,
                    removal_gain,
                    addition_cost,
                };
                if witness.is_none_or(|w| mv.delta() < w.delta()) {
                    witness = Some(mv);
                }
            }
        }
    }
    Ok(LocalMinReport {
        is_local_min: witness.is_none(),
        witness,
        moves_checked: checked,
        identity_max_rel_error: worst,
    })
}
