// Copyright 2026 The Bathflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense Hermitian eigensolves.
//!
//! Matrices are split into the connected components of their nonzero pattern
//! before diagonalization. Each block is solved independently, in real
//! arithmetic when its entries are real. Both reductions are exact.

use faer::{Mat, Side};
use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Index sets of the connected components of the off-diagonal nonzero pattern,
/// each sorted, ordered by smallest index.
pub(crate) fn blocks(m: &Array2<Complex64>) -> Vec<Vec<usize>> {
    let dim = m.nrows();
    let mut parent: Vec<usize> = (0..dim).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..dim {
        let row = m.row(i);
        for j in i + 1..dim {
            let z = row[j];
            if z.re != 0.0 || z.im != 0.0 {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut label = vec![usize::MAX; dim];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in 0..dim {
        let r = root(&mut parent, i);
        if label[r] == usize::MAX {
            label[r] = out.len();
            out.push(Vec::new());
        }
        out[label[r]].push(i);
    }
    out
}

enum Block {
    Real(Mat<f64>),
    Complex(Mat<Complex64>),
}

fn gather(m: &Array2<Complex64>, idx: &[usize]) -> Block {
    let k = idx.len();
    let real = idx
        .iter()
        .all(|&i| idx.iter().all(|&j| m[[i, j]].im == 0.0));
    if real {
        Block::Real(Mat::from_fn(k, k, |a, b| m[[idx[a], idx[b]]].re))
    } else {
        Block::Complex(Mat::from_fn(k, k, |a, b| m[[idx[a], idx[b]]]))
    }
}

fn evd_error(e: impl std::fmt::Debug) -> Error {
    Error::Numerical(format!("eigensolver failed: {e:?}"))
}

/// All eigenvalues in ascending order.
pub(crate) fn eigenvalues(m: &Array2<Complex64>) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(m.nrows());
    for idx in blocks(m) {
        if idx.len() == 1 {
            values.push(m[[idx[0], idx[0]]].re);
            continue;
        }
        let v = match gather(m, &idx) {
            Block::Real(a) => a.self_adjoint_eigenvalues(Side::Lower).map_err(evd_error)?,
            Block::Complex(a) => a.self_adjoint_eigenvalues(Side::Lower).map_err(evd_error)?,
        };
        values.extend(v);
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Ascending eigenvalues plus a unit eigenvector of the smallest one.
///
/// On ties between blocks the vector comes from the block with the smallest
/// leading index; within a block it is the solver's first ground vector.
pub(crate) fn lowest_eigenpair(m: &Array2<Complex64>) -> Result<(Vec<f64>, Vec<Complex64>)> {
    let dim = m.nrows();
    let mut values = Vec::with_capacity(dim);
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for idx in blocks(m) {
        let (block_values, lowest) = if idx.len() == 1 {
            let e = m[[idx[0], idx[0]]].re;
            (vec![e], vec![Complex64::new(1.0, 0.0)])
        } else {
            match gather(m, &idx) {
                Block::Real(a) => {
                    let evd = a.self_adjoint_eigen(Side::Lower).map_err(evd_error)?;
                    let s = evd.S().column_vector();
                    let u = evd.U();
                    (
                        (0..idx.len()).map(|k| s[k]).collect::<Vec<_>>(),
                        (0..idx.len()).map(|k| Complex64::new(u[(k, 0)], 0.0)).collect(),
                    )
                }
                Block::Complex(a) => {
                    let evd = a.self_adjoint_eigen(Side::Lower).map_err(evd_error)?;
                    let s = evd.S().column_vector();
                    let u = evd.U();
                    (
                        (0..idx.len()).map(|k| s[k].re).collect::<Vec<_>>(),
                        (0..idx.len()).map(|k| u[(k, 0)]).collect(),
                    )
                }
            }
        };
        let e0 = block_values[0];
        if best.as_ref().map_or(true, |(b, _)| e0 < *b) {
            let mut full = vec![Complex64::new(0.0, 0.0); dim];
            for (k, &i) in idx.iter().enumerate() {
                full[i] = lowest[k];
            }
            best = Some((e0, full));
        }
        values.extend(block_values);
    }
    values.sort_by(f64::total_cmp);
    let (_, vector) = best.ok_or_else(|| Error::Numerical("empty matrix".into()))?;
    Ok((values, vector))
}
