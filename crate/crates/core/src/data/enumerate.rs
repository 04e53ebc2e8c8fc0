//! Exhaustive partition enumeration.
//!
//! Partitions are produced as restricted growth strings `a` with `a[0] = 0` and
//! `a[i] <= max(a[..i]) + 1`, in lexicographic order. That order is also the
//! tie-break order used by every brute-force minimizer in the crate.

use super::partition::Partition;
use crate::error::{Error, Result};

/// Default largest `n` the enumerator accepts (Bell(12) = 4 213 597).
pub const DEFAULT_ENUM_CAP: usize = 12;

/// Environment variable overriding [`DEFAULT_ENUM_CAP`].
pub const ENUM_CAP_ENV: &str = "AXIOMLAB_ENUM_CAP";

pub fn enumeration_cap() -> usize {
    std::env::var(ENUM_CAP_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

/// Every partition of `{0..n-1}`, or only those with exactly `k` clusters.
pub fn enumerate_partitions(n: usize, k: Option<usize>) -> Result<Partitions> {
    enumerate_partitions_capped(n, k, enumeration_cap())
}

pub fn enumerate_partitions_capped(n: usize, k: Option<usize>, cap: usize) -> Result<Partitions> {
    if n > cap {
        return Err(Error::EnumerationCap { n, cap });
    }
    Ok(Partitions {
        inner: RgsIter::new(n, k)?,
    })
}

/// Iterator over [`Partition`]s.
#[derive(Debug, Clone)]
pub struct Partitions {
    inner: RgsIter,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        self.inner.next_rgs().map(|a| Partition::from_rgs(a.to_vec()))
    }
}

/// Raw restricted-growth-string generator. Hands out a borrowed slice per step
/// so hot loops can avoid allocating a [`Partition`] for every candidate.
#[derive(Debug, Clone)]
pub struct RgsIter {
    a: Vec<usize>,
    /// `prefix_max[i] = max(a[..=i])`
    prefix_max: Vec<usize>,
    k: Option<usize>,
    started: bool,
    done: bool,
}

impl RgsIter {
    pub fn new(n: usize, k: Option<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "must be at least 1"));
        }
        if let Some(k) = k {
            if k == 0 || k > n {
                return Err(Error::InvalidK { k, n });
            }
        }
        let mut it = Self {
            a: vec![0; n],
            prefix_max: vec![0; n],
            k,
            started: false,
            done: false,
        };
        // The first string: zeros, then 1..k-1 packed at the end.
        if let Some(k) = k {
            it.fill_tail(0, 1);
            debug_assert_eq!(it.prefix_max[n - 1] + 1, k);
        }
        Ok(it)
    }

    pub fn len_elements(&self) -> usize {
        self.a.len()
    }

    /// Sets `a[from+1..]` to the smallest valid tail given `blocks` blocks
    /// in use through position `from`.
    fn fill_tail(&mut self, from: usize, blocks: usize) {
        let n = self.a.len();
        let need = self.k.map_or(0, |k| k - blocks);
        let rest = n - 1 - from;
        let zeros = rest - need;
        let mut cur_max = self.prefix_max[from];
        for (off, pos) in ((from + 1)..n).enumerate() {
            let v = if off < zeros { 0 } else { blocks + (off - zeros) };
            self.a[pos] = v;
            cur_max = cur_max.max(v);
            self.prefix_max[pos] = cur_max;
        }
    }

    pub fn next_rgs(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.a);
        }
        let n = self.a.len();
        let mut i = n;
        while i > 1 {
            i -= 1;
            let limit = self.prefix_max[i - 1] + 1;
            let cap = self.k.map_or(usize::MAX, |k| k - 1);
            let mut v = self.a[i];
            while v < limit && v < cap {
                v += 1;
                let blocks = self.prefix_max[i - 1].max(v) + 1;
                let need = self.k.map_or(0, |k| k.saturating_sub(blocks));
                if need <= n - 1 - i {
                    self.a[i] = v;
                    self.prefix_max[i] = self.prefix_max[i - 1].max(v);
                    self.fill_tail(i, blocks);
                    return Some(&self.a);
                }
            }
        }
        self.done = true;
        None
    }
}

/// Bell numbers via the Bell triangle (exact for `n <= 25` in `u128`).
pub fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}

/// Stirling numbers of the second kind via `S(n,k) = k S(n-1,k) + S(n-1,k-1)`.
pub fn stirling2(n: usize, k: usize) -> u128 {
    let mut s = vec![vec![0u128; k + 1]; n + 1];
    s[0][0] = 1;
    for i in 1..=n {
        for j in 1..=k.min(i) {
            s[i][j] = j as u128 * s[i - 1][j] + s[i - 1][j - 1];
        }
    }
    s[n][k]
}
