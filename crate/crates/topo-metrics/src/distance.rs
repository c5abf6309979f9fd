use rayon::prelude::*;

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::threads;

/// Distance function applied to embedding rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    Euclidean,
    Cosine,
}

impl MetricKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::Euclidean => "euclidean",
            MetricKind::Cosine => "cosine",
        }
    }
}

impl std::str::FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(MetricKind::Euclidean),
            "cosine" => Ok(MetricKind::Cosine),
            other => Err(Error::BadParams(format!("unknown distance {other:?}"))),
        }
    }
}

/// Full symmetric matrix of pairwise distances.
///
/// `values[i][j] == values[j][i]`, the diagonal is zero and every entry is
/// finite and nonnegative. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    values: Vec<f64>,
    metric_kind: MetricKind,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn metric_kind(&self) -> MetricKind {
        self.metric_kind
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Largest pairwise distance, zero for a single point. Unlike
    /// [`diameter`] this never fails; diagram construction uses it so that
    /// degenerate clouds still carry a well-defined scale.
    pub fn max_distance(&self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let v = self.get(i, j);
                if v > max {
                    max = v;
                }
            }
        }
        max
    }

    /// Build directly from a full symmetric matrix. Validates shape,
    /// symmetry, zero diagonal and nonnegative finite entries.
    pub fn from_values(n: usize, values: Vec<f64>, metric_kind: MetricKind) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::BadParams(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                values.len()
            )));
        }
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(Error::BadParams(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let v = values[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::NonFiniteInput);
                }
                if v != values[j * n + i] {
                    return Err(Error::BadParams(format!("asymmetry at ({i}, {j})")));
                }
            }
        }
        Ok(Self {
            n,
            values,
            metric_kind,
        })
    }
}

/// Full pairwise distance matrix of an embedding.
///
/// Euclidean: `d(i, j) = ||x_i - x_j||_2`. Cosine:
/// `d(i, j) = 1 - <x_i, x_j> / (||x_i|| ||x_j||)` clamped into `[0, 2]`;
/// rows with zero norm are rejected.
///
/// Rows are filled in parallel but every entry is computed by the same
/// scalar expression regardless of thread count, so the result is
/// bit-identical to the sequential computation.
pub fn pairwise_distances(emb: &EmbeddingMatrix, kind: MetricKind) -> Result<DistanceMatrix> {
    let n = emb.n();
    let norms = match kind {
        MetricKind::Euclidean => Vec::new(),
        MetricKind::Cosine => {
            let mut norms = Vec::with_capacity(n);
            for (i, row) in emb.rows().enumerate() {
                let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm == 0.0 {
                    return Err(Error::ZeroNormRow { row: i });
                }
                norms.push(norm);
            }
            norms
        }
    };

    let mut values = vec![0.0f64; n * n];
    threads::pool().install(|| {
        values
            .par_chunks_exact_mut(n)
            .enumerate()
            .for_each(|(i, out)| {
                let xi = emb.row(i);
                for (j, slot) in out.iter_mut().enumerate() {
                    if i == j {
                        continue;
                    }
                    let xj = emb.row(j);
                    *slot = match kind {
                        MetricKind::Euclidean => euclidean(xi, xj),
                        MetricKind::Cosine => cosine(xi, xj, norms[i], norms[j]),
                    };
                }
            });
    });

    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    Ok(DistanceMatrix {
        n,
        values,
        metric_kind: kind,
    })
}

#[inline]
fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let diff = x - y;
        acc += diff * diff;
    }
    acc.sqrt()
}

#[inline]
fn cosine(a: &[f64], b: &[f64], norm_a: f64, norm_b: f64) -> f64 {
    let mut dot = 0.0;
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
    }
    (1.0 - dot / (norm_a * norm_b)).clamp(0.0, 2.0)
}

/// Maximum pairwise distance of the cloud.
///
/// Needs at least two points; all points coinciding is reported as
/// [`Error::ZeroDiameter`] so that normalization never divides by zero.
pub fn diameter(dm: &DistanceMatrix) -> Result<f64> {
    if dm.n() < 2 {
        return Err(Error::DegenerateCloud {
            n: dm.n(),
            needed: 2,
        });
    }
    let max = dm.max_distance();
    if max == 0.0 {
        return Err(Error::ZeroDiameter);
    }
    Ok(max)
}
