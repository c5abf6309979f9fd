//! Column reduction of the triangle boundary matrix over the two-element
//! field.
//!
//! Edges and triangles are kept in separate arrays, each sorted by
//! (filtration value, lexicographic vertices); the combined order is the
//! filtration total order restricted to each dimension, and reduction in a
//! fixed dimension never mixes row blocks, so the resulting pairing equals
//! the full-matrix one. Only triangle columns are reduced: each pivot
//! clears the corresponding edge column, and the remaining edge columns
//! are exactly the spanning-tree merges that the dimension-0 path reads
//! off with Kruskal instead.

use crate::diagram::PersistencePair;
use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};

// vertex indices are packed three to a word, 21 bits each
const MAX_POINTS: usize = 1 << 21;

#[inline]
fn pack2(a: usize, b: usize) -> u64 {
    ((a as u64) << 21) | b as u64
}

#[inline]
fn pack3(a: usize, b: usize, c: usize) -> u64 {
    ((a as u64) << 42) | ((b as u64) << 21) | c as u64
}

#[inline]
fn unpack3(key: u64) -> (usize, usize, usize) {
    (
        (key >> 42) as usize,
        ((key >> 21) & 0x1F_FFFF) as usize,
        (key & 0x1F_FFFF) as usize,
    )
}

/// All finite dimension-1 pairs of the Rips filtration. The 2-skeleton is
/// complete at the diameter, so nothing in dimension 1 survives and there
/// are no essential bars.
pub(super) fn h1_pairs(dm: &DistanceMatrix) -> Result<Vec<PersistencePair>> {
    let n = dm.n();
    if n > MAX_POINTS {
        return Err(Error::TooLarge { n, max: MAX_POINTS });
    }

    let mut edges: Vec<(f64, u64)> = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in (a + 1)..n {
            edges.push((dm.get(a, b), pack2(a, b)));
        }
    }
    edges.sort_unstable_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));

    let mut edge_rank = vec![0u32; n * n];
    let mut edge_filt = Vec::with_capacity(edges.len());
    for (rank, &(filt, key)) in edges.iter().enumerate() {
        let a = (key >> 21) as usize;
        let b = (key & 0x1F_FFFF) as usize;
        edge_rank[a * n + b] = rank as u32;
        edge_filt.push(filt);
    }
    drop(edges);

    let mut triangles: Vec<(f64, u64)> = Vec::with_capacity(n * (n - 1) * (n - 2) / 6);
    for a in 0..n {
        for b in (a + 1)..n {
            let dab = dm.get(a, b);
            for c in (b + 1)..n {
                let filt = dab.max(dm.get(a, c)).max(dm.get(b, c));
                triangles.push((filt, pack3(a, b, c)));
            }
        }
    }
    triangles.sort_unstable_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));

    // reduced columns are stored at their pivot row (an edge rank)
    let mut pivot_col: Vec<Option<Box<[u32]>>> = vec![None; edge_filt.len()];
    let mut pairs = Vec::new();
    let mut col: Vec<u32> = Vec::new();
    let mut scratch: Vec<u32> = Vec::new();

    for &(death, key) in &triangles {
        let (a, b, c) = unpack3(key);
        let mut facets = [
            edge_rank[a * n + b],
            edge_rank[a * n + c],
            edge_rank[b * n + c],
        ];
        facets.sort_unstable();
        col.clear();
        col.extend_from_slice(&facets);

        // falling out with an emptied column means this triangle creates a
        // 2-cycle instead of killing a 1-cycle
        while let Some(&low) = col.last() {
            match &pivot_col[low as usize] {
                None => {
                    pairs.push(PersistencePair::new(edge_filt[low as usize], death, 1));
                    compress(&mut col, &pivot_col, &mut scratch);
                    pivot_col[low as usize] = Some(col.as_slice().into());
                    break;
                }
                Some(other) => {
                    symmetric_difference(&col, other, &mut scratch);
                    std::mem::swap(&mut col, &mut scratch);
                }
            }
        }
    }
    Ok(pairs)
}

/// Eliminate every sub-pivot entry of `col` that is itself a claimed pivot
/// row, before the column is stored. Each elimination adds a column whose
/// largest entry is the eliminated row, so the pivot entry of `col` never
/// changes and the resulting pairing is identical; but later columns that
/// hit this one reduce in far fewer steps, which is what makes dense
/// point clouds tractable.
fn compress(col: &mut Vec<u32>, pivot_col: &[Option<Box<[u32]>>], scratch: &mut Vec<u32>) {
    loop {
        let Some(&row) = col[..col.len() - 1]
            .iter()
            .rev()
            .find(|&&r| pivot_col[r as usize].is_some())
        else {
            return;
        };
        let other = pivot_col[row as usize].as_ref().unwrap();
        symmetric_difference(col, other, scratch);
        std::mem::swap(col, scratch);
    }
}

/// Merge of two sorted index lists dropping common entries; this is column
/// addition over the two-element field.
fn symmetric_difference(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
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
}
