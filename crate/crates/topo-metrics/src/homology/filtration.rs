use std::cmp::Ordering;

use crate::distance::DistanceMatrix;

/// A vertex, edge or triangle of the Vietoris-Rips complex.
///
/// `vertices` is strictly increasing. The filtration value follows the
/// Rips rule: the largest pairwise distance among the vertices, zero for
/// singletons.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    pub vertices: Vec<u32>,
    pub filtration_value: f64,
}

impl Simplex {
    pub fn new(mut vertices: Vec<u32>, dm: &DistanceMatrix) -> Self {
        vertices.sort_unstable();
        let mut filtration_value = 0.0f64;
        for i in 0..vertices.len() {
            for j in (i + 1)..vertices.len() {
                let d = dm.get(vertices[i] as usize, vertices[j] as usize);
                if d > filtration_value {
                    filtration_value = d;
                }
            }
        }
        Self {
            vertices,
            filtration_value,
        }
    }

    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Faces of one dimension lower, in lexicographic vertex order.
    pub fn facets(&self) -> Vec<Vec<u32>> {
        if self.vertices.len() == 1 {
            return Vec::new();
        }
        // dropping the last index first yields lexicographic facet order
        (0..self.vertices.len())
            .rev()
            .map(|skip| {
                self.vertices
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != skip)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect()
    }
}

/// Total order on simplices: filtration value, then dimension, then
/// lexicographic vertex order. Any face has a filtration value no larger
/// than its cofaces and lower dimension, so faces always sort first.
pub fn simplex_cmp(a: &Simplex, b: &Simplex) -> Ordering {
    a.filtration_value
        .total_cmp(&b.filtration_value)
        .then(a.vertices.len().cmp(&b.vertices.len()))
        .then_with(|| a.vertices.cmp(&b.vertices))
}

/// All simplices up to `max_dim`, sorted by [`simplex_cmp`].
#[derive(Debug, Clone)]
pub struct FiltrationOrder {
    pub simplices: Vec<Simplex>,
}

impl FiltrationOrder {
    pub fn build(dm: &DistanceMatrix, max_dim: usize) -> Self {
        let n = dm.n() as u32;
        let mut simplices = Vec::new();
        for v in 0..n {
            simplices.push(Simplex::new(vec![v], dm));
        }
        if max_dim >= 1 {
            for i in 0..n {
                for j in (i + 1)..n {
                    simplices.push(Simplex::new(vec![i, j], dm));
                }
            }
        }
        if max_dim >= 2 {
            for i in 0..n {
                for j in (i + 1)..n {
                    for k in (j + 1)..n {
                        simplices.push(Simplex::new(vec![i, j, k], dm));
                    }
                }
            }
        }
        simplices.sort_by(simplex_cmp);
        Self { simplices }
    }
}
