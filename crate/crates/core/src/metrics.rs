// Copyright 2026 The Bathflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Fidelity, purity, von Neumann entropy and trace distance.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channels::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg;

/// Eigenvalues below this are treated as solver noise and clamped to zero.
const NEGATIVE_EIGENVALUE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyBase {
    #[default]
    Bits,
    Nats,
}

/// How a pure reference state is compared with a mixed state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FidelityConvention {
    /// `⟨ψ|ρ|ψ⟩`
    #[default]
    Overlap,
    /// `sqrt(⟨ψ|ρ|ψ⟩)`
    Root,
}

impl FidelityConvention {
    pub fn apply(self, overlap: f64) -> f64 {
        match self {
            FidelityConvention::Overlap => overlap,
            FidelityConvention::Root => overlap.max(0.0).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    /// Ideal ground state vs effective-Hamiltonian ground state.
    pub fidelity_sb: f64,
    /// Ideal ground state vs the reduced density matrix.
    pub fidelity_reduced: f64,
    pub purity: f64,
    pub entropy: f64,
    pub trace_distance: f64,
}

/// `⟨ψ|ρ|ψ⟩`; for `ρ = |φ⟩⟨φ|` this is `|⟨ψ|φ⟩|²`.
pub fn fidelity_pure_mixed(psi: &[Complex64], rho: &DensityMatrix) -> Result<f64> {
    if psi.len() != rho.dim() {
        return Err(Error::QubitMismatch {
            expected: rho.dim(),
            found: psi.len(),
        });
    }
    let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!("state norm² is {norm}, expected 1")));
    }
    let m = rho.matrix();
    let mut total = Complex64::new(0.0, 0.0);
    for (a, pa) in psi.iter().enumerate() {
        if pa.norm_sqr() == 0.0 {
            continue;
        }
        let row = m.row(a);
        let inner: Complex64 = row.iter().zip(psi).map(|(r, pb)| r * pb).sum();
        total += pa.conj() * inner;
    }
    Ok(total.re)
}

/// `|⟨ψ|φ⟩|²` for two unit vectors.
pub fn overlap_squared(psi: &[Complex64], phi: &[Complex64]) -> Result<f64> {
    if psi.len() != phi.len() {
        return Err(Error::QubitMismatch {
            expected: psi.len(),
            found: phi.len(),
        });
    }
    let inner: Complex64 = psi.iter().zip(phi).map(|(a, b)| a.conj() * b).sum();
    Ok(inner.norm_sqr())
}

/// `Tr[ρ²] = Σ_ab |ρ_ab|²` for Hermitian `ρ`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().iter().map(|z| z.norm_sqr()).sum()
}

/// `−Σ λ log λ` over the spectrum, with `0 log 0 = 0`.
pub fn entropy(rho: &DensityMatrix, base: EntropyBase) -> Result<f64> {
    let values = linalg::eigenvalues(rho.matrix())?;
    if let Some(lowest) = values.first().filter(|v| **v < -NEGATIVE_EIGENVALUE_TOLERANCE) {
        return Err(Error::InvalidState(format!("negative eigenvalue {lowest:e}")));
    }
    let nats: f64 = values
        .iter()
        .filter(|v| **v > 0.0)
        .map(|v| -v * v.ln())
        .sum();
    Ok(match base {
        EntropyBase::Nats => nats,
        EntropyBase::Bits => nats / std::f64::consts::LN_2,
    })
}

/// `½ Σ |eig(ρ − σ)|`
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::QubitMismatch {
            expected: rho.num_qubits(),
            found: sigma.num_qubits(),
        });
    }
    let difference = rho.matrix() - sigma.matrix();
    let values = linalg::eigenvalues(&difference)?;
    Ok(0.5 * values.iter().map(|v| v.abs()).sum::<f64>())
}
