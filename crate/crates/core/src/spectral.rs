// Copyright 2026 The Bathflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact ground states and spectra of Pauli-form Hamiltonians.

use num_complex::Complex64;

use crate::error::Result;
use crate::linalg;
use crate::pauli::PauliOperator;

/// Lowest eigenpair of a Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    /// Unit vector; the first amplitude above 1e-12 in magnitude is real positive.
    pub vector: Vec<Complex64>,
    /// `E₁ − E₀`, counted with multiplicity (zero when degenerate).
    pub gap: f64,
    /// Set when `gap < 1e-9 · max(1, |E₀|)`; the vector is then one
    /// representative of the ground space.
    pub degenerate: bool,
}

pub fn ground_state(h: &PauliOperator) -> Result<GroundState> {
    let dense = h.to_dense()?;
    let (values, mut vector) = linalg::lowest_eigenpair(dense.matrix())?;
    let energy = values[0];
    let gap = values[1] - values[0];
    let degenerate = gap < 1e-9 * energy.abs().max(1.0);

    let norm = vector.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let phase = vector
        .iter()
        .find(|a| a.norm() > 1e-12)
        .map(|a| a.conj() / a.norm())
        .unwrap_or(Complex64::new(1.0, 0.0));
    for a in vector.iter_mut() {
        *a = *a * phase / norm;
    }
    Ok(GroundState {
        energy,
        vector,
        gap,
        degenerate,
    })
}

/// All `2^n` eigenvalues in ascending order.
pub fn spectrum(h: &PauliOperator) -> Result<Vec<f64>> {
    let dense = h.to_dense()?;
    linalg::eigenvalues(dense.matrix())
}
