use super::ClusteringResult;
use crate::data::{enumeration_cap, sq_dist, Dataset, Partition, RgsIter};
use crate::error::{Error, Result};
use crate::par::{self, Execution};

/// Strings buffered before a parallel pass.
const CHUNK: usize = 1 << 15;
/// Strings scored per work item.
const BLOCK: usize = 1 << 9;

/// Feeds every restricted growth string of length `n` (exactly `k` blocks when
/// given) to `visit` in buffered chunks. `visit` gets the flattened strings
/// and the global index of the first one.
fn for_each_chunk<V>(n: usize, k: Option<usize>, mut visit: V) -> Result<()>
where
    V: FnMut(&[usize], usize),
{
    let cap = enumeration_cap();
    if n > cap {
        return Err(Error::EnumerationCap { n, cap });
    }
    let mut it = RgsIter::new(n, k)?;
    let mut buf = Vec::with_capacity(CHUNK * n);
    let mut base = 0;
    while let Some(a) = it.next_rgs() {
        buf.extend_from_slice(a);
        if buf.len() == CHUNK * n {
            visit(&buf, base);
            base += CHUNK;
            buf.clear();
        }
    }
    if !buf.is_empty() {
        visit(&buf, base);
    }
    Ok(())
}

/// Lowest `score(state, rgs)` over all strings, first in enumeration order on
/// ties. `make` builds one scratch state per work item.
fn scan_min_with<S, M, F>(
    n: usize,
    k: Option<usize>,
    exec: Execution,
    make: M,
    score: F,
) -> Result<(f64, Vec<usize>)>
where
    M: Fn() -> S + Sync + Send,
    F: Fn(&mut S, &[usize]) -> f64 + Sync + Send,
{
    let mut best = (f64::INFINITY, usize::MAX);
    let mut best_rgs = Vec::new();
    for_each_chunk(n, k, |buf, base| {
        let count = buf.len() / n;
        let blocks = count.div_ceil(BLOCK);
        let local = par::map_range(exec, blocks, |b| {
            let mut state = make();
            let mut bq = f64::INFINITY;
            let mut bi = usize::MAX;
            for i in b * BLOCK..((b + 1) * BLOCK).min(count) {
                let q = score(&mut state, &buf[i * n..(i + 1) * n]);
                if q < bq || bi == usize::MAX && !q.is_nan() {
                    bq = q;
                    bi = i;
                }
            }
            (bq, bi)
        });
        for (q, i) in local {
            if i != usize::MAX && (q < best.0 || best.1 == usize::MAX) {
                best = (q, base + i);
                best_rgs = buf[i * n..(i + 1) * n].to_vec();
            }
        }
    })?;
    if best_rgs.is_empty() {
        return Err(Error::param("score", "no partition received a comparable score"));
    }
    Ok((best.0, best_rgs))
}

/// Minimizes an arbitrary score over all partitions of `0..n` (exactly `k`
/// clusters when given). The score sees the canonical label string. Ties go
/// to the first partition in canonical (lexicographic) order.
pub fn scan_partitions_min<F>(
    n: usize,
    k: Option<usize>,
    exec: Execution,
    score: F,
) -> Result<(f64, Partition)>
where
    F: Fn(&[usize]) -> f64 + Sync + Send,
{
    let (q, rgs) = scan_min_with(n, k, exec, || (), |_, a| score(a))?;
    Ok((q, Partition::from_rgs(rgs)))
}

/// Per-work-item buffers for the objective.
struct Scratch {
    sums: Vec<f64>,
    counts: Vec<usize>,
}

fn objective_of_rgs(ds: &Dataset, k: usize, s: &mut Scratch, a: &[usize]) -> f64 {
    let m = ds.dim();
    s.sums.iter_mut().for_each(|v| *v = 0.0);
    s.counts.iter_mut().for_each(|v| *v = 0);
    for (i, &c) in a.iter().enumerate() {
        s.counts[c] += 1;
        for (acc, v) in s.sums[c * m..(c + 1) * m].iter_mut().zip(ds.point(i)) {
            *acc += v;
        }
    }
    for c in 0..k {
        let inv = 1.0 / s.counts[c] as f64;
        s.sums[c * m..(c + 1) * m].iter_mut().for_each(|v| *v *= inv);
    }
    a.iter()
        .enumerate()
        .map(|(i, &c)| sq_dist(ds.point(i), &s.sums[c * m..(c + 1) * m]))
        .sum()
}

fn check_k(ds: &Dataset, k: usize) -> Result<()> {
    if k == 0 || k > ds.len() {
        return Err(Error::InvalidK { k, n: ds.len() });
    }
    Ok(())
}

/// Exact k-means: the global minimizer of the objective over all partitions
/// into exactly `k` clusters.
pub fn kmeans_ideal(ds: &Dataset, k: usize) -> Result<ClusteringResult> {
    kmeans_ideal_with(ds, k, Execution::default())
}

pub fn kmeans_ideal_with(ds: &Dataset, k: usize, exec: Execution) -> Result<ClusteringResult> {
    check_k(ds, k)?;
    let m = ds.dim();
    let (_, rgs) = scan_min_with(
        ds.len(),
        Some(k),
        exec,
        || Scratch {
            sums: vec![0.0; k * m],
            counts: vec![0; k],
        },
        |s, a| objective_of_rgs(ds, k, s, a),
    )?;
    ClusteringResult::from_partition(ds, Partition::from_rgs(rgs))
}

/// The minimum objective and every `k`-partition within `rel_tol` of it, in
/// canonical order. The slack is `rel_tol * min + 1e-12 * total_SS` so that it
/// scales with the data.
pub fn minimizers(
    ds: &Dataset,
    k: usize,
    rel_tol: f64,
    exec: Execution,
) -> Result<(f64, Vec<Partition>)> {
    check_k(ds, k)?;
    let m = ds.dim();
    let make = || Scratch {
        sums: vec![0.0; k * m],
        counts: vec![0; k],
    };
    let (min, _) = scan_min_with(ds.len(), Some(k), exec, make, |s, a| {
        objective_of_rgs(ds, k, s, a)
    })?;
    let threshold = min + rel_tol * min.abs() + 1e-12 * ds.total_ss();
    let n = ds.len();
    let mut hits = Vec::new();
    for_each_chunk(n, Some(k), |buf, _| {
        let count = buf.len() / n;
        let blocks = count.div_ceil(BLOCK);
        let found = par::map_range(exec, blocks, |b| {
            let mut s = make();
            (b * BLOCK..((b + 1) * BLOCK).min(count))
                .filter(|&i| objective_of_rgs(ds, k, &mut s, &buf[i * n..(i + 1) * n]) <= threshold)
                .collect::<Vec<_>>()
        });
        for i in found.into_iter().flatten() {
            hits.push(Partition::from_rgs(buf[i * n..(i + 1) * n].to_vec()));
        }
    })?;
    Ok((min, hits))
}
