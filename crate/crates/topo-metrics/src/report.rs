//! Named metric values plus the provenance needed to reproduce them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distance::MetricKind;
use crate::error::Error;

/// Every metric the crate can compute, under its wire name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MetricName {
    Persistence0,
    Persistence1,
    RankMe,
    AlphaReq,
    NeSum,
    StableRank,
    Mu0Incoherence,
    PcNumber,
    SelfCluster,
}

impl MetricName {
    pub const ALL: [MetricName; 9] = [
        MetricName::Persistence0,
        MetricName::Persistence1,
        MetricName::RankMe,
        MetricName::AlphaReq,
        MetricName::NeSum,
        MetricName::StableRank,
        MetricName::Mu0Incoherence,
        MetricName::PcNumber,
        MetricName::SelfCluster,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricName::Persistence0 => "persistence0",
            MetricName::Persistence1 => "persistence1",
            MetricName::RankMe => "rankme",
            MetricName::AlphaReq => "alpha_req",
            MetricName::NeSum => "nesum",
            MetricName::StableRank => "stable_rank",
            MetricName::Mu0Incoherence => "mu0_incoherence",
            MetricName::PcNumber => "pc_number",
            MetricName::SelfCluster => "self_cluster",
        }
    }

    /// True for the metrics derived from the singular value decomposition
    /// (as opposed to the filtration-based ones).
    pub fn is_spectral(self) -> bool {
        !matches!(self, MetricName::Persistence0 | MetricName::Persistence1)
    }
}

impl fmt::Display for MetricName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        MetricName::ALL
            .iter()
            .copied()
            .find(|name| name.as_str() == s)
            .ok_or_else(|| {
                Error::BadParams(format!(
                    "unknown metric {s:?}; expected one of: {}",
                    MetricName::ALL.map(|m| m.as_str()).join(", ")
                ))
            })
    }
}

/// Computed metric values for one embedding, keyed by wire name, together
/// with the subsample size, seed, and distance function that produced them.
/// Keys are kept sorted so serialized reports are byte-stable.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetricReport {
    values: BTreeMap<String, f64>,
    subsample_size: usize,
    seed: u64,
    metric_kind: String,
}

impl MetricReport {
    pub fn new(subsample_size: usize, seed: u64, metric_kind: MetricKind) -> Self {
        MetricReport {
            values: BTreeMap::new(),
            subsample_size,
            seed,
            metric_kind: metric_kind.as_str().to_owned(),
        }
    }

    pub fn insert(&mut self, name: MetricName, value: f64) {
        self.values.insert(name.as_str().to_owned(), value);
    }

    pub fn get(&self, name: MetricName) -> Option<f64> {
        self.values.get(name.as_str()).copied()
    }

    pub fn values(&self) -> &BTreeMap<String, f64> {
        &self.values
    }

    pub fn subsample_size(&self) -> usize {
        self.subsample_size
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn metric_kind(&self) -> &str {
        &self.metric_kind
    }

    /// Merge the values of another report computed on the same embedding.
    pub fn absorb(&mut self, other: MetricReport) {
        self.values.extend(other.values);
    }
}
