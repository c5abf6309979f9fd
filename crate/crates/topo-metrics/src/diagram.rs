use crate::error::{Error, Result};

/// A single bar of a persistence diagram.
///
/// `death` is `f64::INFINITY` for essential classes that never die inside
/// the filtration. Finite bars satisfy `birth <= death`; dimension-0 bars
/// are always born at filtration value zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistencePair {
    pub birth: f64,
    pub death: f64,
    pub dimension: usize,
}

impl PersistencePair {
    pub fn new(birth: f64, death: f64, dimension: usize) -> Self {
        debug_assert!(birth <= death);
        Self {
            birth,
            death,
            dimension,
        }
    }

    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }

    /// Bar length, zero for bars that die the instant they are born.
    pub fn lifetime(&self) -> f64 {
        self.death - self.birth
    }
}

/// Multiset of persistence bars in one homology dimension, together with
/// the diameter of the source cloud (every finite death is bounded by it).
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceDiagram {
    pub pairs: Vec<PersistencePair>,
    pub dimension: usize,
    pub diameter: f64,
}

impl PersistenceDiagram {
    pub fn new(pairs: Vec<PersistencePair>, dimension: usize, diameter: f64) -> Self {
        Self {
            pairs,
            dimension,
            diameter,
        }
    }

    /// Number of infinite bars; these are excluded from lifetime sums.
    pub fn essential_count(&self) -> usize {
        self.pairs.iter().filter(|p| p.is_essential()).count()
    }

    pub fn finite_pairs(&self) -> impl Iterator<Item = &PersistencePair> {
        self.pairs.iter().filter(|p| !p.is_essential())
    }

    /// Finite (birth, death) pairs sorted for multiset comparison.
    pub fn sorted_finite_pairs(&self) -> Vec<(f64, f64)> {
        let mut pairs: Vec<(f64, f64)> = self
            .finite_pairs()
            .map(|p| (p.birth, p.death))
            .collect();
        pairs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pairs
    }
}

/// Normalized total persistence of one diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct TotalPersistenceResult {
    pub value: f64,
    pub dimension: usize,
    pub finite_pair_count: usize,
    pub essential_count: usize,
    pub diameter: f64,
}

/// Sum of finite bar lifetimes divided by the cloud diameter.
///
/// Essential bars are left out of the sum entirely; truncating them at the
/// diameter would shift every dimension-0 value by a constant instead.
pub fn total_persistence(diagram: &PersistenceDiagram) -> Result<TotalPersistenceResult> {
    if diagram.diameter <= 0.0 || !diagram.diameter.is_finite() {
        return Err(Error::ZeroDiameter);
    }
    // Sum in canonical (birth, death) order: equal diagrams then produce
    // bit-equal totals even when their pairs were discovered in different
    // orders, so independent reduction paths can be compared exactly.
    let sorted = diagram.sorted_finite_pairs();
    let finite = sorted.len();
    let sum: f64 = sorted.into_iter().map(|(birth, death)| death - birth).sum();
    Ok(TotalPersistenceResult {
        value: sum / diagram.diameter,
        dimension: diagram.dimension,
        finite_pair_count: finite,
        essential_count: diagram.essential_count(),
        diameter: diagram.diameter,
    })
}
