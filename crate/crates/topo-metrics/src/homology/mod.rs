//! Persistent homology of the Vietoris–Rips filtration, specialised to the
//! two degrees the persistence metrics need.
//!
//! Dimension 0 comes straight from the minimum spanning tree: components
//! merge exactly at MST edge weights, so the finite bars are `(0, w)` for
//! each of the `n - 1` tree edges, plus one essential bar for the component
//! that never dies. Dimension 1 is computed by reducing the triangle
//! boundary matrix (see [`reduction`]).

mod filtration;
mod reduction;
mod union_find;

pub use filtration::{simplex_cmp, FiltrationOrder, Simplex};
pub use union_find::UnionFind;

use crate::diagram::{total_persistence, PersistenceDiagram, PersistencePair};
use crate::distance::{pairwise_distances, DistanceMatrix, MetricKind};
use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::report::{MetricName, MetricReport};

/// Points beyond this count are subsampled before building the filtration,
/// unless the caller overrides the cap.
pub const DEFAULT_SUBSAMPLE: usize = 512;

/// Dimension-0 persistence diagram of the Rips filtration.
///
/// Kruskal's algorithm over the edges in filtration order yields the merge
/// events directly; ties are broken lexicographically by vertex pair, the
/// same order the filtration uses.
pub fn rips_h0_diagram(dm: &DistanceMatrix) -> Result<PersistenceDiagram> {
    let n = dm.n();
    if n < 2 {
        return Err(Error::DegenerateCloud { n, needed: 2 });
    }

    let mut edges: Vec<(f64, u32, u32)> = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in (a + 1)..n {
            edges.push((dm.get(a, b), a as u32, b as u32));
        }
    }
    edges.sort_unstable_by(|x, y| {
        x.0.total_cmp(&y.0)
            .then_with(|| (x.1, x.2).cmp(&(y.1, y.2)))
    });

    let mut uf = UnionFind::new(n);
    let mut pairs = Vec::with_capacity(n);
    for &(weight, a, b) in &edges {
        if uf.union(a, b) {
            pairs.push(PersistencePair::new(0.0, weight, 0));
            if pairs.len() == n - 1 {
                break;
            }
        }
    }
    debug_assert_eq!(pairs.len(), n - 1);
    pairs.push(PersistencePair::new(0.0, f64::INFINITY, 0));

    Ok(PersistenceDiagram::new(pairs, 0, dm.max_distance()))
}

/// Dimension-1 persistence diagram of the Rips filtration. Every bar is
/// finite because the complete 2-skeleton kills all loops.
pub fn rips_h1_diagram(dm: &DistanceMatrix) -> Result<PersistenceDiagram> {
    let n = dm.n();
    if n < 3 {
        return Err(Error::DegenerateCloud { n, needed: 3 });
    }
    let pairs = reduction::h1_pairs(dm)?;
    Ok(PersistenceDiagram::new(pairs, 1, dm.max_distance()))
}

/// Normalized total persistence of an embedding in the requested dimensions
/// (0 and/or 1), with the subsampling and distance choices recorded in the
/// returned report.
pub fn persistence_metric(
    embedding: &EmbeddingMatrix,
    dimensions: &[usize],
    subsample: Option<usize>,
    seed: u64,
    metric_kind: MetricKind,
) -> Result<MetricReport> {
    for &dim in dimensions {
        if dim > 1 {
            return Err(Error::BadParams(format!(
                "persistence is computed in dimensions 0 and 1, not {dim}"
            )));
        }
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

    let dm = pairwise_distances(points, metric_kind)?;
    let mut report = MetricReport::new(points.n(), seed, metric_kind);
    for &dim in dimensions {
        let diagram = if dim == 0 {
            rips_h0_diagram(&dm)?
        } else {
            rips_h1_diagram(&dm)?
        };
        let name = if dim == 0 {
            MetricName::Persistence0
        } else {
            MetricName::Persistence1
        };
        report.insert(name, total_persistence(&diagram)?.value);
    }
    Ok(report)
}
