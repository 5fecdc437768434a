//! Exact Euclidean k-nearest-neighbor queries over matrix rows.
//!
//! A brute-force scan over squared distances is the reference and the only
//! implementation; every sampler's correctness rests on its tie rule:
//! neighbors ordered by ascending squared distance, equal distances broken
//! by lower row index. Self-exclusion is by row identity, never by value,
//! so duplicated points remain each other's neighbors.

use rayon::prelude::*;

use crate::data::Matrix;
use crate::error::{Error, Result};

/// Immutable index over the rows of a matrix.
pub struct NeighborIndex<'a> {
    points: &'a Matrix,
}

#[inline]
fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    acc
}

/// Bounded sorted buffer of the best (distance, index) pairs seen so far.
struct TopK {
    k: usize,
    entries: Vec<(f64, usize)>,
}

impl TopK {
    fn new(k: usize) -> Self {
        TopK { k, entries: Vec::with_capacity(k + 1) }
    }

    #[inline]
    fn offer(&mut self, d2: f64, idx: usize) {
        if self.entries.len() == self.k {
            let (wd, wi) = self.entries[self.k - 1];
            if d2 > wd || (d2 == wd && idx > wi) {
                return;
            }
        }
        let pos = self
            .entries
            .partition_point(|&(ed, ei)| ed < d2 || (ed == d2 && ei < idx));
        self.entries.insert(pos, (d2, idx));
        self.entries.truncate(self.k);
    }

    fn into_indices(self) -> Vec<usize> {
        self.entries.into_iter().map(|(_, i)| i).collect()
    }
}

impl<'a> NeighborIndex<'a> {
    /// Build over all rows; every cell must be present.
    pub fn build(points: &'a Matrix) -> Result<Self> {
        if points.n_rows() == 0 {
            return Err(Error::Degenerate("cannot index an empty matrix".into()));
        }
        if points.has_missing() {
            return Err(Error::MissingValue("neighbor index requires complete rows".into()));
        }
        Ok(NeighborIndex { points })
    }

    pub fn len(&self) -> usize {
        self.points.n_rows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.n_rows() == 0
    }

    /// The k nearest stored rows to `query`, ascending by distance.
    /// `exclude` skips one stored row by identity.
    pub fn kneighbors(&self, query: &[f64], k: usize, exclude: Option<usize>) -> Result<Vec<usize>> {
        let eligible = self.len() - usize::from(exclude.is_some());
        if k > eligible {
            return Err(Error::InvalidArgument(format!(
                "k = {k} exceeds the {eligible} eligible points"
            )));
        }
        let mut top = TopK::new(k);
        for i in 0..self.len() {
            if exclude == Some(i) {
                continue;
            }
            top.offer(squared_distance(query, self.points.row(i)), i);
        }
        Ok(top.into_indices())
    }

    /// Neighbors of a stored row, optionally excluding itself.
    pub fn kneighbors_of_row(&self, row: usize, k: usize, exclude_self: bool) -> Result<Vec<usize>> {
        self.kneighbors(self.points.row(row), k, exclude_self.then_some(row))
    }

    /// Batched [`Self::kneighbors_of_row`] over many stored rows; the result
    /// order follows `rows`, so parallelism never changes output.
    pub fn kneighbors_of_rows(
        &self,
        rows: &[usize],
        k: usize,
        exclude_self: bool,
    ) -> Result<Vec<Vec<usize>>> {
        rows.par_iter()
            .map(|&r| self.kneighbors_of_row(r, k, exclude_self))
            .collect()
    }
}
