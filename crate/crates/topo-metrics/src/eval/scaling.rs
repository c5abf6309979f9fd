//! Growth-rate experiment: how mean dimension-0 total persistence of
//! uniform samples from the unit d-cube scales with sample count. For an
//! intrinsically d-dimensional cloud the expected exponent is 1 − 1/d.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::diagram::total_persistence;
use crate::distance::{pairwise_distances, MetricKind};
use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::homology::rips_h0_diagram;
use crate::threads;

/// Log-log fit of mean persistence against sample size for one dimension.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct ScalingFitResult {
    pub dimension_d: usize,
    pub sample_sizes: Vec<usize>,
    /// Mean dimension-0 total persistence per sample size, averaged over
    /// trials.
    pub mean_persistence0: Vec<f64>,
    /// Slope of log(mean persistence) against log(n).
    pub fitted_exponent: f64,
    /// The 1 − 1/d prediction for a d-dimensional sample.
    pub expected_exponent: f64,
    /// exp(intercept) of the fit — the empirical constant in front of the
    /// power law.
    pub alpha_estimate: f64,
}

/// Distinct generator stream per (dimension, sample size, trial), so every
/// trial is reproducible in isolation and independent of scheduling.
fn trial_stream(d: usize, n: usize, trial: usize) -> u64 {
    ((d as u64 & 0x3FF) << 52) | ((n as u64 & 0xFFFF_FFFF) << 20) | (trial as u64 & 0xF_FFFF)
}

fn trial_persistence(d: usize, n: usize, trial: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_stream(d, n, trial));
    let values: Vec<f64> = (0..n * d).map(|_| rng.random::<f64>()).collect();
    let embedding = EmbeddingMatrix::new(n, d, values)?;
    let dm = pairwise_distances(&embedding, MetricKind::Euclidean)?;
    Ok(total_persistence(&rips_h0_diagram(&dm)?)?.value)
}

/// Run `trials` seeded draws of n uniform points in the unit d-cube for
/// each sample size, average the resulting persistence values, and fit the
/// log-log growth law. Trials run in parallel; the average is accumulated
/// in trial order, so results are identical regardless of thread count.
pub fn scaling_experiment(
    d: usize,
    sample_sizes: &[usize],
    trials: usize,
    seed: u64,
) -> Result<ScalingFitResult> {
    if d < 1 {
        return Err(Error::BadParams("dimension must be at least 1".to_owned()));
    }
    if trials < 1 {
        return Err(Error::BadParams("need at least one trial".to_owned()));
    }
    if sample_sizes.len() < 2 {
        return Err(Error::BadParams(
            "need at least two sample sizes to fit a slope".to_owned(),
        ));
    }
    if sample_sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadParams(
            "sample sizes must be strictly increasing".to_owned(),
        ));
    }
    if sample_sizes[0] < 2 {
        return Err(Error::BadParams(
            "sample sizes must be at least 2".to_owned(),
        ));
    }

    let mut mean_persistence0 = Vec::with_capacity(sample_sizes.len());
    for &n in sample_sizes {
        let values: Vec<f64> = threads::pool().install(|| {
            (0..trials)
                .into_par_iter()
                .map(|t| trial_persistence(d, n, t, seed))
                .collect::<Result<Vec<f64>>>()
        })?;
        mean_persistence0.push(values.iter().sum::<f64>() / trials as f64);
    }

    let xs: Vec<f64> = sample_sizes.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = mean_persistence0.iter().map(|&m| m.ln()).collect();
    let count = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / count;
    let y_mean = ys.iter().sum::<f64>() / count;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - x_mean) * (y - y_mean);
        sxx += (x - x_mean) * (x - x_mean);
    }
    let fitted_exponent = sxy / sxx;
    let intercept = y_mean - fitted_exponent * x_mean;

    Ok(ScalingFitResult {
        dimension_d: d,
        sample_sizes: sample_sizes.to_vec(),
        mean_persistence0,
        fitted_exponent,
        expected_exponent: 1.0 - 1.0 / d as f64,
        alpha_estimate: intercept.exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn one_dimensional_samples_have_unit_persistence_and_flat_growth() {
        let result = scaling_experiment(1, &[50, 100, 200], 4, 7).unwrap();
        // the interval's spanning tree is the interval itself, so the
        // diameter-normalized sum is 1 regardless of n
        for mean in &result.mean_persistence0 {
            assert_abs_diff_eq!(*mean, 1.0, epsilon = 1e-9);
        }
        assert_abs_diff_eq!(result.fitted_exponent, 0.0, epsilon = 1e-9);
        assert_eq!(result.expected_exponent, 0.0);
    }

    #[test]
    fn same_seed_reproduces_bitwise() {
        let a = scaling_experiment(2, &[40, 80], 3, 11).unwrap();
        let b = scaling_experiment(2, &[40, 80], 3, 11).unwrap();
        assert_eq!(a.mean_persistence0, b.mean_persistence0);
        assert_eq!(a.fitted_exponent.to_bits(), b.fitted_exponent.to_bits());
        assert_eq!(a.alpha_estimate.to_bits(), b.alpha_estimate.to_bits());
    }

    #[test]
    fn different_seeds_differ() {
        let a = scaling_experiment(2, &[40, 80], 3, 1).unwrap();
        let b = scaling_experiment(2, &[40, 80], 3, 2).unwrap();
        assert_ne!(a.mean_persistence0, b.mean_persistence0);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(scaling_experiment(0, &[10, 20], 2, 0).is_err());
        assert!(scaling_experiment(2, &[10], 2, 0).is_err());
        assert!(scaling_experiment(2, &[20, 10], 2, 0).is_err());
        assert!(scaling_experiment(2, &[10, 10], 2, 0).is_err());
        assert!(scaling_experiment(2, &[10, 20], 0, 0).is_err());
        assert!(scaling_experiment(2, &[1, 20], 2, 0).is_err());
    }

    #[test]
    fn trial_streams_never_collide_within_an_experiment() {
        let mut seen = std::collections::BTreeSet::new();
        for d in [1, 2, 3] {
            for n in [100, 200, 400, 800, 1600] {
                for t in 0..10 {
                    assert!(seen.insert(trial_stream(d, n, t)));
                }
            }
        }
    }
}
