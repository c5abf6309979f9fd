use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// An n x d point cloud of embedding vectors, stored row-major.
///
/// Every entry is finite; `n >= 1` and `d >= 1`. Immutable after
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    n: usize,
    d: usize,
    values: Vec<f64>,
}

impl EmbeddingMatrix {
    pub fn new(n: usize, d: usize, values: Vec<f64>) -> Result<Self> {
        if n < 1 || d < 1 {
            return Err(Error::BadParams(format!(
                "embedding must be at least 1x1, got {n}x{d}"
            )));
        }
        if values.len() != n * d {
            return Err(Error::BadParams(format!(
                "expected {} values for a {n}x{d} matrix, got {}",
                n * d,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        Ok(Self { n, d, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::BadParams("ragged rows".into()));
        }
        Self::new(n, d, rows.iter().flatten().copied().collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.d)
    }

    /// Uniform random subset of `k` rows without replacement, drawn by a
    /// partial Fisher-Yates shuffle over row indices with a ChaCha stream
    /// seeded from `seed`. If `k >= n` the matrix is returned unchanged.
    pub fn subsample(&self, k: usize, seed: u64) -> Self {
        if k >= self.n {
            return self.clone();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut idx: Vec<usize> = (0..self.n).collect();
        for i in 0..k {
            let j = rng.random_range(i..self.n);
            idx.swap(i, j);
        }
        idx.truncate(k);
        let mut values = Vec::with_capacity(k * self.d);
        for &i in &idx {
            values.extend_from_slice(self.row(i));
        }
        Self {
            n: k,
            d: self.d,
            values,
        }
    }
}
