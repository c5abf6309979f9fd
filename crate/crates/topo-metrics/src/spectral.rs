//! Spectral embedding-quality metrics, all read off one singular value
//! decomposition of the column-centered embedding matrix.
//!
//! Centering makes the squared singular values proportional to the feature
//! covariance eigenvalues, which is the setting the covariance-based
//! metrics assume. The one exception is [`self_cluster`], which works on
//! raw row directions and never touches the SVD.

use nalgebra::DMatrix;

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};

/// Relative cutoff below which singular values are treated as numerical
/// noise: the rank counts σ_i > `RANK_EPSILON` · σ₁.
pub const RANK_EPSILON: f64 = 1e-6;

/// Stabilizer added to each singular-value probability before the entropy
/// in [`SpectralSummary::rankme`].
pub const RANKME_EPSILON: f64 = 1e-7;

/// Singular value decomposition of the centered embedding, computed once
/// and shared by all spectral metrics.
#[derive(Clone, Debug)]
pub struct SpectralSummary {
    /// All min(n, d) singular values, descending.
    singular_values: Vec<f64>,
    /// Left singular vectors for the top `numerical_rank` components,
    /// row-major n×r.
    left_vectors: Vec<f64>,
    n: usize,
    numerical_rank: usize,
}

impl SpectralSummary {
    pub fn compute(embedding: &EmbeddingMatrix) -> Result<SpectralSummary> {
        let n = embedding.n();
        let d = embedding.d();
        if n < 2 {
            return Err(Error::DegenerateCloud { n, needed: 2 });
        }

        let mut matrix = DMatrix::from_row_slice(n, d, embedding.values());
        for j in 0..d {
            let mean = matrix.column(j).sum() / n as f64;
            for i in 0..n {
                matrix[(i, j)] -= mean;
            }
        }

        // One-sided Jacobi instead of the bidiagonalization SVD: the
        // rotations keep every intermediate exactly orthogonal, so the
        // factorization stays trustworthy even on the structured matrices
        // where a bidiagonal sweep can mis-converge.
        let (raw, unit_column): (Vec<f64>, _) = if d <= n {
            orthogonalize_columns(&mut matrix, None);
            let sigmas: Vec<f64> = (0..d).map(|j| matrix.column(j).norm()).collect();
            // columns of the rotated matrix are u_i σ_i; divide by σ later
            (sigmas, false)
        } else {
            let mut transposed = matrix.transpose();
            let mut rotations = DMatrix::identity(n, n);
            orthogonalize_columns(&mut transposed, Some(&mut rotations));
            let sigmas: Vec<f64> = (0..n).map(|j| transposed.column(j).norm()).collect();
            // the accumulated rotations are the left singular vectors
            matrix = rotations;
            (sigmas, true)
        };

        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by(|&a, &b| raw[b].total_cmp(&raw[a]));
        let singular_values: Vec<f64> = order.iter().map(|&i| raw[i]).collect();

        let top = singular_values[0];
        let numerical_rank = if top > 0.0 {
            singular_values
                .iter()
                .take_while(|&&s| s > RANK_EPSILON * top)
                .count()
        } else {
            0
        };

        let mut left_vectors = vec![0.0; n * numerical_rank];
        for (col_out, &col_in) in order.iter().take(numerical_rank).enumerate() {
            let scale = if unit_column { 1.0 } else { raw[col_in] };
            for row in 0..n {
                left_vectors[row * numerical_rank + col_out] = matrix[(row, col_in)] / scale;
            }
        }

        Ok(SpectralSummary {
            singular_values,
            left_vectors,
            n,
            numerical_rank,
        })
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn numerical_rank(&self) -> usize {
        self.numerical_rank
    }

    /// Row-major n×r block of left singular vectors.
    pub fn left_vectors(&self) -> &[f64] {
        &self.left_vectors
    }

    /// Effective rank as the exponential of the singular-value entropy:
    /// p_i = σ_i / Σσ + ε, result exp(−Σ p_i log p_i).
    pub fn rankme(&self) -> Result<f64> {
        let total: f64 = self.singular_values.iter().sum();
        if total <= 0.0 {
            return Err(Error::AllZeroMatrix);
        }
        let entropy: f64 = self
            .singular_values
            .iter()
            .map(|&s| {
                let p = s / total + RANKME_EPSILON;
                -(p * p.ln())
            })
            .sum();
        Ok(entropy.exp())
    }

    /// Eigenvalue-decay exponent α from the least-squares fit
    /// log λ_i = c − α log i over the numerical rank, with λ_i = σ_i².
    pub fn alpha_req(&self) -> Result<f64> {
        let r = self.numerical_rank;
        if r < 3 {
            return Err(Error::RankTooLow { rank: r, needed: 3 });
        }
        let xs: Vec<f64> = (1..=r).map(|i| (i as f64).ln()).collect();
        let ys: Vec<f64> = self.singular_values[..r]
            .iter()
            .map(|&s| 2.0 * s.ln())
            .collect();
        let x_mean = xs.iter().sum::<f64>() / r as f64;
        let y_mean = ys.iter().sum::<f64>() / r as f64;
        let mut sxy = 0.0;
        let mut sxx = 0.0;
        for (x, y) in xs.iter().zip(&ys) {
            sxy += (x - x_mean) * (y - y_mean);
            sxx += (x - x_mean) * (x - x_mean);
        }
        Ok(-(sxy / sxx))
    }

    /// Normalized eigenvalue sum Σ λ_i / λ₁ over the full spectrum.
    pub fn nesum(&self) -> Result<f64> {
        self.energy_ratio()
    }

    /// Frobenius-over-spectral energy ratio Σ σ_i² / σ₁².
    ///
    /// On the centered spectrum this coincides with [`Self::nesum`] — both
    /// are Σ σ_i²/σ₁² — and the two share one implementation so the
    /// equality is exact. They stay separately named because downstream
    /// comparisons report both.
    pub fn stable_rank(&self) -> Result<f64> {
        self.energy_ratio()
    }

    fn energy_ratio(&self) -> Result<f64> {
        let top = self.singular_values[0];
        if top <= 0.0 {
            return Err(Error::AllZeroMatrix);
        }
        Ok(self
            .singular_values
            .iter()
            .map(|&s| (s / top) * (s / top))
            .sum())
    }

    /// Coherence μ₀ = (n/r) · max_i ‖U_{i,·}‖² over the top-r left
    /// singular vectors; 1 when mass is spread evenly, n/r when a single
    /// row carries a whole component.
    pub fn mu0_incoherence(&self) -> Result<f64> {
        let r = self.numerical_rank;
        if r == 0 {
            return Err(Error::AllZeroMatrix);
        }
        let max_row_sq = (0..self.n)
            .map(|i| {
                self.left_vectors[i * r..(i + 1) * r]
                    .iter()
                    .map(|&v| v * v)
                    .sum::<f64>()
            })
            .fold(0.0, f64::max);
        Ok((self.n as f64 / r as f64) * max_row_sq)
    }

    /// Pseudo-condition number σ₁ / σ_r at the numerical rank.
    pub fn pc_number(&self) -> Result<f64> {
        let r = self.numerical_rank;
        if r == 0 {
            return Err(Error::AllZeroMatrix);
        }
        Ok(self.singular_values[0] / self.singular_values[r - 1])
    }
}

/// Pairs whose normalized inner product falls below this are treated as
/// already orthogonal; the resulting singular values are accurate to a
/// comparable relative level.
const JACOBI_TOLERANCE: f64 = 1e-14;

/// Cyclic Jacobi is provably convergent; this cap only guards against
/// pathological rounding stalls in the last fraction of a digit.
const JACOBI_MAX_SWEEPS: usize = 64;

/// Make the columns of `a` mutually orthogonal with cyclic plane rotations
/// (one-sided Jacobi). Each rotation mixes one column pair, so at
/// convergence `a` equals U·Σ of the original matrix: column norms are the
/// singular values and normalized columns the left singular vectors. The
/// same rotations are applied to `tracker` when given; seeded with the
/// identity it accumulates the rotation product.
fn orthogonalize_columns(a: &mut DMatrix<f64>, mut tracker: Option<&mut DMatrix<f64>>) {
    let rows = a.nrows();
    let cols = a.ncols();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let mut pp = 0.0;
                let mut qq = 0.0;
                let mut pq = 0.0;
                for i in 0..rows {
                    let x = a[(i, p)];
                    let y = a[(i, q)];
                    pp += x * x;
                    qq += y * y;
                    pq += x * y;
                }
                if pq.abs() <= JACOBI_TOLERANCE * (pp * qq).sqrt() {
                    continue;
                }
                rotated = true;
                let tau = (qq - pp) / (2.0 * pq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let x = a[(i, p)];
                    let y = a[(i, q)];
                    a[(i, p)] = c * x - s * y;
                    a[(i, q)] = s * x + c * y;
                }
                if let Some(j) = tracker.as_deref_mut() {
                    for i in 0..j.nrows() {
                        let x = j[(i, p)];
                        let y = j[(i, q)];
                        j[(i, p)] = c * x - s * y;
                        j[(i, q)] = s * x + c * y;
                    }
                }
            }
        }
        if !rotated {
            return;
        }
    }
}

pub fn rankme(embedding: &EmbeddingMatrix) -> Result<f64> {
    SpectralSummary::compute(embedding)?.rankme()
}

pub fn alpha_req(embedding: &EmbeddingMatrix) -> Result<f64> {
    SpectralSummary::compute(embedding)?.alpha_req()
}

pub fn nesum(embedding: &EmbeddingMatrix) -> Result<f64> {
    SpectralSummary::compute(embedding)?.nesum()
}

pub fn stable_rank(embedding: &EmbeddingMatrix) -> Result<f64> {
    SpectralSummary::compute(embedding)?.stable_rank()
}

pub fn mu0_incoherence(embedding: &EmbeddingMatrix) -> Result<f64> {
    SpectralSummary::compute(embedding)?.mu0_incoherence()
}

pub fn pc_number(embedding: &EmbeddingMatrix) -> Result<f64> {
    SpectralSummary::compute(embedding)?.pc_number()
}

/// Excess concentration of pairwise cosine similarities relative to
/// uniformly random directions: 0 in expectation for an isotropic cloud,
/// 1 when all points coincide up to sign. Rows are normalized but not
/// centered.
pub fn self_cluster(embedding: &EmbeddingMatrix) -> Result<f64> {
    let n = embedding.n();
    let d = embedding.d();
    if n < 2 {
        return Err(Error::DegenerateCloud { n, needed: 2 });
    }
    if d < 2 {
        return Err(Error::BadParams(
            "self_cluster needs at least 2 feature dimensions".to_owned(),
        ));
    }

    let mut y = DMatrix::from_row_slice(n, d, embedding.values());
    for i in 0..n {
        let norm = y.row(i).norm();
        if norm == 0.0 {
            return Err(Error::ZeroNormRow { row: i });
        }
        for j in 0..d {
            y[(i, j)] /= norm;
        }
    }

    // Σ_{i≠j} cos² = ‖Gram‖_F² − n; the d×d and n×n Gram matrices have the
    // same Frobenius norm, so build whichever is smaller
    let gram_sq: f64 = if d <= n {
        (y.transpose() * &y).iter().map(|v| v * v).sum()
    } else {
        (&y * y.transpose()).iter().map(|v| v * v).sum()
    };
    let off_diag_sum = gram_sq - n as f64;

    let pair_count = (n * (n - 1)) as f64;
    let isotropic_expectation = pair_count / d as f64;
    Ok((off_diag_sum - isotropic_expectation) / (pair_count * (1.0 - 1.0 / d as f64)))
}
