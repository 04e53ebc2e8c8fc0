use std::io::{Read, Write};

use serde::Serialize;

use super::dataset::{dist, Dataset};
use crate::error::{Error, Result};

/// Relative slack of the triangle check.
pub const TRIANGLE_TOL: f64 = 1e-12;

/// Dense `n x n` dissimilarity table.
///
/// Construction only checks shape and finiteness: the table may be asymmetric,
/// non-metric or non-embeddable. Use [`DistanceMatrix::validate`] to inspect it.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    NonZeroDiagonal { i: usize, value: f64 },
    Asymmetric { i: usize, j: usize, d_ij: f64, d_ji: f64 },
    NonPositive { i: usize, j: usize, value: f64 },
    /// `d(i,k) > d(i,j) + d(j,k)`: going through `via` is shorter.
    Triangle { i: usize, via: usize, k: usize, direct: f64, detour: f64 },
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub metric_checked: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn triangle_violations(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| matches!(v, Violation::Triangle { .. }))
    }
}

impl DistanceMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::TooFewPoints(n));
        }
        let mut d = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare { row, len: r.len(), n });
            }
            if let Some(coord) = r.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { index: row, coord });
            }
            d.extend_from_slice(r);
        }
        Ok(Self { n, d })
    }

    /// Euclidean distances between the points of `ds`. Fails when two points
    /// coincide since distinct elements need positive distance.
    pub fn euclidean(ds: &Dataset) -> Result<Self> {
        let n = ds.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = dist(ds.point(i), ds.point(j));
                if v <= 0.0 {
                    return Err(Error::CoincidentPoints(i, j));
                }
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        Ok(Self { n, d })
    }

    /// Euclidean distances with coincident points allowed. Transforms that
    /// collapse a cluster produce such tables; validators still need them.
    pub fn euclidean_lenient(ds: &Dataset) -> Self {
        let n = ds.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = dist(ds.point(i), ds.point(j));
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        Self { n, d }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.d[i * self.n + j] = v;
    }

    /// Sets both `(i,j)` and `(j,i)`.
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.set(i, j, v);
        self.set(j, i, v);
    }

    pub fn max(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.d.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Multiplies every entry by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            n: self.n,
            d: self.d.iter().map(|v| v * alpha).collect(),
        }
    }

    /// Reports every violation of zero diagonal, symmetry and positivity, and
    /// with `require_metric` every triple breaking the triangle inequality by
    /// more than a relative [`TRIANGLE_TOL`] (collinear points tie up to
    /// round-off).
    pub fn validate(&self, require_metric: bool) -> ValidationReport {
        let n = self.n;
        let mut violations = Vec::new();
        for i in 0..n {
            let v = self.get(i, i);
            if v != 0.0 {
                violations.push(Violation::NonZeroDiagonal { i, value: v });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (self.get(i, j), self.get(j, i));
                if a != b {
                    violations.push(Violation::Asymmetric { i, j, d_ij: a, d_ji: b });
                }
                if a <= 0.0 {
                    violations.push(Violation::NonPositive { i, j, value: a });
                }
            }
        }
        if require_metric {
            for i in 0..n {
                for k in (i + 1)..n {
                    let direct = self.get(i, k);
                    for via in 0..n {
                        if via == i || via == k {
                            continue;
                        }
                        let detour = self.get(i, via) + self.get(via, k);
                        if direct > detour * (1.0 + TRIANGLE_TOL) {
                            violations.push(Violation::Triangle { i, via, k, direct, detour });
                        }
                    }
                }
            }
        }
        ValidationReport {
            violations,
            metric_checked: require_metric,
        }
    }

    /// `n` rows of `n` comma-separated reals, no header.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(reader);
        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let row = record
                .iter()
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::param("csv", format!("bad number `{f}`: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(rows)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(writer);
        for row in self.d.chunks(self.n) {
            wtr.write_record(row.iter().map(|v| format!("{v}")))?;
        }
        wtr.flush()?;
        Ok(())
    }
}
