//! Synthetic point clouds with known geometry, used to validate the
//! persistence pipeline and to drive the scaling experiment.

use std::f64::consts::TAU;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};

/// Generator families for [`synth_cloud`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CloudShape {
    /// Evenly spaced angles on the unit circle in the first two coordinates,
    /// with Gaussian noise of scale `noise` added to every coordinate.
    Circle,
    /// I.i.d. uniform draws from the unit cube.
    UniformCube,
    /// `clusters` centers drawn uniformly from the unit cube; points are
    /// split as evenly as possible among them and offset by isotropic
    /// Gaussian noise of scale `noise`.
    GaussianClusters,
}

impl FromStr for CloudShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circle" => Ok(Self::Circle),
            "cube" => Ok(Self::UniformCube),
            "clusters" => Ok(Self::GaussianClusters),
            other => Err(Error::BadParams(format!(
                "unknown shape `{other}`; expected circle, cube, or clusters"
            ))),
        }
    }
}

/// Build a synthetic cloud of `n` points in `d` dimensions. The same
/// argument tuple always yields the same matrix, bit for bit.
///
/// `noise` is ignored by `UniformCube`; `clusters` only applies to
/// `GaussianClusters`.
pub fn synth_cloud(
    shape: CloudShape,
    n: usize,
    d: usize,
    noise: f64,
    clusters: usize,
    seed: u64,
) -> Result<EmbeddingMatrix> {
    if n == 0 || d == 0 {
        return Err(Error::BadParams(format!(
            "cloud shape {n}x{d} must have at least one point and one dimension"
        )));
    }
    if !noise.is_finite() || noise < 0.0 {
        return Err(Error::BadParams(format!(
            "noise scale must be finite and non-negative, got {noise}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = vec![0.0f64; n * d];
    match shape {
        CloudShape::Circle => {
            if d < 2 {
                return Err(Error::BadParams(format!(
                    "a circle needs at least 2 dimensions, got {d}"
                )));
            }
            for i in 0..n {
                let theta = TAU * i as f64 / n as f64;
                values[i * d] = theta.cos();
                values[i * d + 1] = theta.sin();
            }
            if noise > 0.0 {
                for v in &mut values {
                    let eps: f64 = rng.sample(StandardNormal);
                    *v += noise * eps;
                }
            }
        }
        CloudShape::UniformCube => {
            for v in &mut values {
                *v = rng.random();
            }
        }
        CloudShape::GaussianClusters => {
            if clusters == 0 || clusters > n {
                return Err(Error::BadParams(format!(
                    "cluster count must be between 1 and the number of points, \
                     got {clusters} for {n} points"
                )));
            }
            let centers: Vec<f64> = (0..clusters * d).map(|_| rng.random()).collect();
            let base = n / clusters;
            let extra = n % clusters;
            let mut row = 0;
            for (c, center) in centers.chunks_exact(d).enumerate() {
                let size = base + usize::from(c < extra);
                for _ in 0..size {
                    for (j, &mean) in center.iter().enumerate() {
                        let eps: f64 = rng.sample(StandardNormal);
                        values[row * d + j] = mean + noise * eps;
                    }
                    row += 1;
                }
            }
        }
    }
    EmbeddingMatrix::new(n, d, values)
}
