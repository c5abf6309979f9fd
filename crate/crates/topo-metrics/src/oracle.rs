//! Reference implementations used to cross-check the optimized paths.
//!
//! Everything here favours being obviously correct over being fast, and
//! deliberately shares no code with the production implementations: the
//! boundary matrix is materialised in full and reduced with the textbook
//! left-to-right sweep, and the spanning-tree weight keeps its own
//! scan-based union-find. Point counts are capped hard because the full
//! reduction is cubic in the number of simplices.

use std::collections::BTreeMap;

use crate::diagram::{PersistenceDiagram, PersistencePair};
use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};
use crate::homology::{simplex_cmp, Simplex};

/// Largest point count the exhaustive reduction accepts.
pub const MAX_ORACLE_POINTS: usize = 14;

/// Boundary matrix of the whole filtration, one sparse column per simplex,
/// rows and columns both indexed by filtration order.
struct FullBoundaryMatrix {
    simplices: Vec<Simplex>,
    columns: Vec<Vec<usize>>,
}

impl FullBoundaryMatrix {
    fn build(dm: &DistanceMatrix, max_dim: usize) -> Self {
        let mut simplices = all_simplices(dm, max_dim);
        simplices.sort_by(simplex_cmp);

        let mut position = BTreeMap::new();
        for (idx, simplex) in simplices.iter().enumerate() {
            position.insert(simplex.vertices.clone(), idx);
        }

        let columns = simplices
            .iter()
            .map(|simplex| {
                let mut col: Vec<usize> = simplex
                    .facets()
                    .into_iter()
                    .map(|facet| position[&facet])
                    .collect();
                col.sort_unstable();
                col
            })
            .collect();

        FullBoundaryMatrix { simplices, columns }
    }

    /// Textbook reduction: walk columns left to right, and while the lowest
    /// row index of the current column is already the pivot of an earlier
    /// column, add that column (symmetric difference over the two-element
    /// field).
    fn reduce(&mut self) -> Vec<Option<usize>> {
        let m = self.columns.len();
        // pivot_owner[row] = column that has its lowest 1 in `row`
        let mut pivot_owner: Vec<Option<usize>> = vec![None; m];
        for j in 0..m {
            while let Some(&low) = self.columns[j].last() {
                let Some(owner) = pivot_owner[low] else {
                    pivot_owner[low] = Some(j);
                    break;
                };
                let other = self.columns[owner].clone();
                self.columns[j] = symmetric_difference(&self.columns[j], &other);
            }
        }
        pivot_owner
    }
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Every simplex of the Rips filtration up to `max_dim`, unsorted.
fn all_simplices(dm: &DistanceMatrix, max_dim: usize) -> Vec<Simplex> {
    let n = dm.n();
    let mut simplices = Vec::new();
    for a in 0..n {
        simplices.push(Simplex::new(vec![a as u32], dm));
    }
    if max_dim >= 1 {
        for a in 0..n {
            for b in (a + 1)..n {
                simplices.push(Simplex::new(vec![a as u32, b as u32], dm));
            }
        }
    }
    if max_dim >= 2 {
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    simplices.push(Simplex::new(vec![a as u32, b as u32, c as u32], dm));
                }
            }
        }
    }
    simplices
}

/// Persistence diagrams in dimensions `0..=max_dim` read off the fully
/// reduced boundary matrix, essential bars included.
pub fn naive_persistence(
    dm: &DistanceMatrix,
    max_dim: usize,
) -> Result<Vec<PersistenceDiagram>> {
    let n = dm.n();
    if n > MAX_ORACLE_POINTS {
        return Err(Error::TooLarge {
            n,
            max: MAX_ORACLE_POINTS,
        });
    }
    if n < 2 {
        return Err(Error::DegenerateCloud { n, needed: 2 });
    }
    if max_dim > 1 {
        return Err(Error::BadParams(format!(
            "the reference reduction covers dimensions 0 and 1, not {max_dim}"
        )));
    }

    // the boundary of (max_dim + 1)-simplices is what kills max_dim cycles
    let mut matrix = FullBoundaryMatrix::build(dm, max_dim + 1);
    let pivot_owner = matrix.reduce();

    let mut diagrams: Vec<Vec<PersistencePair>> = vec![Vec::new(); max_dim + 1];
    for (row, owner) in pivot_owner.iter().enumerate() {
        let dim = matrix.simplices[row].dimension();
        if dim > max_dim {
            continue;
        }
        let birth = matrix.simplices[row].filtration_value;
        match owner {
            // a later column kills the cycle born when `row` appeared
            Some(col) => {
                let death = matrix.simplices[*col].filtration_value;
                diagrams[dim].push(PersistencePair::new(birth, death, dim));
            }
            // never a pivot: `row` either creates an essential cycle or is
            // itself a killing column
            None => {
                if matrix.columns[row].is_empty() {
                    diagrams[dim].push(PersistencePair::new(birth, f64::INFINITY, dim));
                }
            }
        }
    }

    Ok(diagrams
        .into_iter()
        .enumerate()
        .map(|(dim, pairs)| PersistenceDiagram::new(pairs, dim, dm.max_distance()))
        .collect())
}

/// Total weight and accepted-edge weights of a minimum spanning tree:
/// edges sorted ascending (ties by lexicographic endpoints), accepted when
/// they join distinct components. Components are tracked by plain label
/// relabeling rather than the production union-find, to keep this path
/// independent of the code it checks.
pub fn kruskal_mst_weight(dm: &DistanceMatrix) -> Result<(f64, Vec<f64>)> {
    let n = dm.n();
    if n < 2 {
        return Err(Error::DegenerateCloud { n, needed: 2 });
    }

    let mut edges: Vec<(f64, usize, usize)> = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in (a + 1)..n {
            edges.push((dm.get(a, b), a, b));
        }
    }
    edges.sort_by(|x, y| {
        x.0.total_cmp(&y.0)
            .then_with(|| (x.1, x.2).cmp(&(y.1, y.2)))
    });

    let mut label: Vec<usize> = (0..n).collect();
    let mut accepted = Vec::with_capacity(n - 1);
    for &(weight, a, b) in &edges {
        let (from, to) = (label[a], label[b]);
        if from == to {
            continue;
        }
        for l in &mut label {
            if *l == from {
                *l = to;
            }
        }
        accepted.push(weight);
        if accepted.len() == n - 1 {
            break;
        }
    }
    Ok((accepted.iter().sum(), accepted))
}
