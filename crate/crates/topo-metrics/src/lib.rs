//! Label-free quality metrics for embedding matrices.
//!
//! The headline metric scores an embedding by the total persistence of its
//! Vietoris–Rips filtration — how much multi-scale geometric structure the
//! point cloud carries — normalized by diameter so the score is scale-free.
//! Alongside it the crate implements seven spectral baselines, a naive
//! boundary-matrix oracle for validating the homology fast path, an
//! evaluation harness that correlates metric scores with downstream task
//! scores, and synthetic point-cloud generators used by the scaling
//! experiment.

pub mod diagram;
pub mod distance;
pub mod embedding;
pub mod error;
pub mod eval;
pub mod homology;
pub mod io;
pub mod oracle;
pub mod report;
pub mod spectral;
pub mod synth;
pub mod threads;

pub use diagram::{total_persistence, PersistenceDiagram, PersistencePair, TotalPersistenceResult};
pub use distance::{pairwise_distances, DistanceMatrix, MetricKind};
pub use embedding::EmbeddingMatrix;
pub use error::{Error, Result};
pub use eval::{
    evaluate, pearson, scaling_experiment, selection_quality, spearman, Aggregation,
    CorrelationMode, EvaluationSummary, Orientation, RunRecord, RunTable, ScalingFitResult,
};
pub use homology::{persistence_metric, rips_h0_diagram, rips_h1_diagram, DEFAULT_SUBSAMPLE};
pub use report::{MetricName, MetricReport};
pub use spectral::{self_cluster, SpectralSummary};
pub use synth::{synth_cloud, CloudShape};

use homology::{rips_h0_diagram as h0, rips_h1_diagram as h1};

/// Compute the requested metrics for one embedding, sharing a single
/// subsample (and a single SVD) across all of them.
pub fn compute_metrics(
    embedding: &EmbeddingMatrix,
    names: &[MetricName],
    subsample: Option<usize>,
    seed: u64,
    metric_kind: MetricKind,
) -> Result<MetricReport> {
    if names.is_empty() {
        return Err(Error::BadParams("no metrics requested".to_owned()));
    }
    let cap = subsample.unwrap_or(DEFAULT_SUBSAMPLE);
    if cap == 0 {
        return Err(Error::BadParams(
            "subsample size must be at least 1".to_owned(),
        ));
    }
    let reduced;
    let points = if cap < embedding.n() {
        reduced = embedding.subsample(cap, seed);
        &reduced
    } else {
        embedding
    };

    let mut report = MetricReport::new(points.n(), seed, metric_kind);

    if names.contains(&MetricName::Persistence0) || names.contains(&MetricName::Persistence1) {
        let dm = pairwise_distances(points, metric_kind)?;
        if names.contains(&MetricName::Persistence0) {
            report.insert(
                MetricName::Persistence0,
                total_persistence(&h0(&dm)?)?.value,
            );
        }
        if names.contains(&MetricName::Persistence1) {
            report.insert(
                MetricName::Persistence1,
                total_persistence(&h1(&dm)?)?.value,
            );
        }
    }

    let svd_names: Vec<MetricName> = names
        .iter()
        .copied()
        .filter(|m| m.is_spectral() && *m != MetricName::SelfCluster)
        .collect();
    if !svd_names.is_empty() {
        let summary = SpectralSummary::compute(points)?;
        for name in svd_names {
            let value = match name {
                MetricName::RankMe => summary.rankme()?,
                MetricName::AlphaReq => summary.alpha_req()?,
                MetricName::NeSum => summary.nesum()?,
                MetricName::StableRank => summary.stable_rank()?,
                MetricName::Mu0Incoherence => summary.mu0_incoherence()?,
                MetricName::PcNumber => summary.pc_number()?,
                _ => unreachable!("filtered to SVD metrics"),
            };
            report.insert(name, value);
        }
    }

    if names.contains(&MetricName::SelfCluster) {
        report.insert(MetricName::SelfCluster, self_cluster(points)?);
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compute_metrics_covers_all_names_on_a_generic_cloud() {
        let rows: Vec<Vec<f64>> = (0..24)
            .map(|i| {
                let t = i as f64;
                vec![t.sin() * 3.0, t.cos() * 2.0, (t * 0.37).sin(), t * 0.01]
            })
            .collect();
        let emb = EmbeddingMatrix::from_rows(&rows).unwrap();
        let report = compute_metrics(
            &emb,
            &MetricName::ALL,
            None,
            0,
            MetricKind::Euclidean,
        )
        .unwrap();
        assert_eq!(report.values().len(), MetricName::ALL.len());
        assert_eq!(report.subsample_size(), 24);
        for (name, value) in report.values() {
            assert!(value.is_finite(), "{name} produced {value}");
        }
    }

    #[test]
    fn compute_metrics_requires_at_least_one_name() {
        let emb = EmbeddingMatrix::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        assert!(matches!(
            compute_metrics(&emb, &[], None, 0, MetricKind::Euclidean),
            Err(Error::BadParams(_))
        ));
    }
}
