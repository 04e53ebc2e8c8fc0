use std::io::{Read, Write};

use crate::error::{Error, Result};

/// `n` points in `R^m`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    dim: usize,
    coords: Vec<f64>,
}

impl Dataset {
    /// Builds a dataset, checking `n >= 2`, a common dimension `m >= 1` and
    /// finite coordinates. Coincident points are allowed here; they are only
    /// rejected when a [`DistanceMatrix`](super::DistanceMatrix) is derived.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::TooFewPoints(points.len()));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::param("dimension", "points must have at least one coordinate"));
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: dim,
                    found: p.len(),
                });
            }
            if let Some(coord) = p.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { index, coord });
            }
            coords.extend_from_slice(p);
        }
        Ok(Self { dim, coords })
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.len() % dim != 0 {
            return Err(Error::param("coords", "length must be a positive multiple of dim"));
        }
        let points = coords.chunks(dim).map(<[f64]>::to_vec).collect();
        Self::new(points)
    }

    /// Points on the real line.
    pub fn from_line(xs: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| vec![x]).collect())
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.points().map(<[f64]>::to_vec).collect()
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    /// Replaces point `i`; the caller keeps the dimension.
    pub(crate) fn set_point(&mut self, i: usize, p: &[f64]) {
        self.coords[i * self.dim..(i + 1) * self.dim].copy_from_slice(p);
    }

    /// Mean of the selected points.
    pub fn mean_of(&self, indices: &[usize]) -> Vec<f64> {
        let mut mean = vec![0.0; self.dim];
        for &i in indices {
            for (m, x) in mean.iter_mut().zip(self.point(i)) {
                *m += x;
            }
        }
        let n = indices.len() as f64;
        mean.iter_mut().for_each(|m| *m /= n);
        mean
    }

    pub fn mean(&self) -> Vec<f64> {
        let all: Vec<usize> = (0..self.len()).collect();
        self.mean_of(&all)
    }

    /// Sum of squared distances to the global mean.
    pub fn total_ss(&self) -> f64 {
        let mean = self.mean();
        self.points().map(|p| sq_dist(p, &mean)).sum()
    }

    /// Keeps the points at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        Self::new(indices.iter().map(|&i| self.point(i).to_vec()).collect())
    }

    /// Reads the `x1,...,xm` header CSV format.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let mut points = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let row = record
                .iter()
                .map(|field| {
                    field
                        .trim()
                        .parse::<f64>()
                        .map_err(|e| Error::param("csv", format!("bad number `{field}`: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            points.push(row);
        }
        Self::new(points)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record((1..=self.dim).map(|j| format!("x{j}")))?;
        for p in self.points() {
            wtr.write_record(p.iter().map(|v| format!("{v}")))?;
        }
        wtr.flush()?;
        Ok(())
    }
}

pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    sq_dist(a, b).sqrt()
}
