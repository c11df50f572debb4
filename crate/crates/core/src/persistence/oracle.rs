//! Reference computations used to check [`persistent_cocycles`](super::persistent_cocycles).
//!
//! Nothing here shares code with the live-cocycle algorithm: ranks come from
//! dense Gaussian elimination over F_p, and the homology pairing from the
//! standard left-to-right boundary matrix reduction.

use std::collections::BTreeMap;

use crate::cochain::{PrimeField, Ring};
use crate::complex::OrderedFiltration;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense matrix over F_p, row-major.
#[derive(Clone, Debug)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<u32>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: u32) {
        self.data[r * self.cols + c] = x;
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn row_reduce(&mut self, field: &PrimeField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else { continue };
            for k in 0..self.cols {
                self.data.swap(r * self.cols + k, pr * self.cols + k);
            }
            let inv = field.inv(self.get(r, c));
            for k in 0..self.cols {
                let x = field.mul(self.get(r, k), inv);
                self.set(r, k, x);
            }
            for i in 0..self.rows {
                let f = self.get(i, c);
                if i != r && f != 0 {
                    for k in 0..self.cols {
                        let x = field.sub(self.get(i, k), field.mul(f, self.get(r, k)));
                        self.set(i, k, x);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &PrimeField) -> usize {
        self.clone().row_reduce(field).len()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn kernel(&self, field: &PrimeField) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.row_reduce(field);
        let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![0u32; m.cols];
                x[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = field.neg(m.get(r, f));
                }
                x
            })
            .collect()
    }
}

/// Matrix of the coboundary from `dim`-cochains to `(dim+1)`-cochains on the
/// first `len` simplices, with the given position lists for rows and columns.
fn coboundary_matrix<T: Scalar>(
    field: &PrimeField,
    filtration: &OrderedFiltration<T>,
    rows: &[usize],
    cols: &[usize],
) -> DenseMatrix {
    let col_of: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(c, &k)| (k, c)).collect();
    let mut m = DenseMatrix::zeros(rows.len(), cols.len());
    for (r, &k) in rows.iter().enumerate() {
        for (t, face) in filtration.facets(k).iter().enumerate() {
            let c = col_of[face];
            let x = if t % 2 == 0 { field.one() } else { field.neg(field.one()) };
            m.set(r, c, field.add(m.get(r, c), x));
        }
    }
    m
}

/// Rank of the restriction `H^dim(X^j) -> H^dim(X^i)` over F_p, for `i <= j`.
pub fn persistent_rank<T: Scalar>(filtration: &OrderedFiltration<T>, p: u32, dim: usize, i: T, j: T) -> Result<usize> {
    let field = PrimeField::new(p)?;
    if i > j {
        return Err(Error::invalid("persistent rank needs i <= j"));
    }
    let positions = |eps: T, d: usize| -> Vec<usize> {
        (0..filtration.prefix_len(eps)).filter(|&k| filtration.dim(k) == d).collect()
    };
    let cells_j = positions(j, dim);
    let cofaces_j = positions(j, dim + 1);
    let cells_i = positions(i, dim);

    // Cocycles of X^j, restricted to X^i.
    let cocycles = coboundary_matrix(&field, filtration, &cofaces_j, &cells_j).kernel(&field);
    let keep: Vec<usize> = cells_j.iter().enumerate().filter(|(_, k)| cells_i.contains(k)).map(|(c, _)| c).collect();

    // Coboundaries of X^i: one row per (dim-1)-simplex.
    let boundaries: Vec<Vec<u32>> = if dim == 0 {
        Vec::new()
    } else {
        let faces_i = positions(i, dim - 1);
        let d = coboundary_matrix(&field, filtration, &cells_i, &faces_i);
        (0..d.cols).map(|c| (0..d.rows).map(|r| d.get(r, c)).collect()).collect()
    };

    let stack = |vectors: &[Vec<u32>]| {
        let mut m = DenseMatrix::zeros(vectors.len(), cells_i.len());
        for (r, v) in vectors.iter().enumerate() {
            for (c, &x) in v.iter().enumerate() {
                m.set(r, c, x);
            }
        }
        m.rank(&field)
    };
    let mut all: Vec<Vec<u32>> = cocycles.iter().map(|z| keep.iter().map(|&c| z[c]).collect()).collect();
    let base = stack(&boundaries);
    all.extend(boundaries);
    Ok(stack(&all) - base)
}

/// Rank of `H^1(X^j) -> H^1(X^i)`: the number of one-dimensional intervals
/// `[b, d)` with `b <= i` and `d > j`.
pub fn persistent_rank_oracle<T: Scalar>(filtration: &OrderedFiltration<T>, p: u32, i: T, j: T) -> Result<usize> {
    persistent_rank(filtration, p, 1, i, j)
}

/// Homology persistence pairs `(dimension, birth_index, death_index)` from
/// the standard column reduction of the boundary matrix over F_p.
pub fn boundary_reduction_pairs<T: Scalar>(filtration: &OrderedFiltration<T>, p: u32) -> Result<Vec<(usize, usize, Option<usize>)>> {
    let field = PrimeField::new(p)?;
    let m = filtration.len();
    let mut columns: Vec<BTreeMap<usize, u32>> = Vec::with_capacity(m);
    // low row -> reduced column owning it
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    let mut paired = vec![false; m];
    let mut pairs = Vec::new();
    for k in 0..m {
        let mut col: BTreeMap<usize, u32> = BTreeMap::new();
        for (t, &face) in filtration.facets(k).iter().enumerate() {
            let x = if t % 2 == 0 { 1 } else { field.neg(1) };
            col.insert(face, x);
        }
        while let Some((&low, &x)) = col.iter().next_back() {
            let Some(&other) = owner.get(&low) else { break };
            let pivot = columns[other][&low];
            let factor = field.mul(x, field.inv(pivot));
            for (&r, &y) in &columns[other] {
                let v = field.sub(col.get(&r).copied().unwrap_or(0), field.mul(factor, y));
                if v == 0 {
                    col.remove(&r);
                } else {
                    col.insert(r, v);
                }
            }
        }
        if let Some((&low, _)) = col.iter().next_back() {
            owner.insert(low, k);
            paired[low] = true;
            paired[k] = true;
            pairs.push((filtration.dim(low), low, Some(k)));
        }
        columns.push(col);
    }
    for k in 0..m {
        if !paired[k] {
            pairs.push((filtration.dim(k), k, None));
        }
    }
    pairs.sort();
    Ok(pairs)
}

/// Solves `d0 f = alpha` over F_p on the given complex, if possible.
pub fn solve_coboundary<T: Scalar>(
    filtration: &OrderedFiltration<T>,
    field: &PrimeField,
    alpha: &crate::cochain::Cochain<u32>,
) -> Option<Vec<(usize, u32)>> {
    let edges: Vec<usize> = filtration.indices_of_dim(1).collect();
    let verts: Vec<usize> = filtration.indices_of_dim(0).collect();
    let d = coboundary_matrix(field, filtration, &edges, &verts);
    // Augmented system [d0 | alpha].
    let mut aug = DenseMatrix::zeros(edges.len(), verts.len() + 1);
    for r in 0..edges.len() {
        for c in 0..verts.len() {
            aug.set(r, c, d.get(r, c));
        }
        aug.set(r, verts.len(), alpha.get(edges[r]).unwrap_or(0));
    }
    let pivots = aug.row_reduce(field);
    if pivots.contains(&verts.len()) {
        return None;
    }
    let mut f = vec![0u32; verts.len()];
    for (r, &c) in pivots.iter().enumerate() {
        f[c] = aug.get(r, verts.len());
    }
    Some(verts.into_iter().zip(f).filter(|&(_, x)| x != 0).collect())
}
