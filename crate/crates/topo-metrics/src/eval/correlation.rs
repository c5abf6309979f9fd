//! Pearson and Spearman correlation with explicit tie handling.

use crate::error::{Error, Result};

/// Minimum sample count for a meaningful correlation.
const MIN_SAMPLES: usize = 3;

fn check_lengths(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            got: x.len(),
            needed: MIN_SAMPLES,
        });
    }
    Ok(())
}

/// Sample Pearson correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_lengths(x, y)?;
    let n = x.len() as f64;
    let x_mean = x.iter().sum::<f64>() / n;
    let y_mean = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - x_mean) * (b - y_mean);
        sxx += (a - x_mean) * (a - x_mean);
        syy += (b - y_mean) * (b - y_mean);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(sxy / (sxx.sqrt() * syy.sqrt()))
}

/// 1-based ranks where tied values (exact float equality) all receive the
/// average of the positions they occupy.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end, averaged
        let rank = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman rank correlation: Pearson of the average-rank vectors.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    check_lengths(x, y)?;
    let all_equal = |v: &[f64]| v.iter().all(|&a| a == v[0]);
    if all_equal(x) || all_equal(y) {
        return Err(Error::AllTied);
    }
    pearson(&average_ranks(x), &average_ranks(y))
}
