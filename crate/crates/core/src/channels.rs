// Copyright 2026 The Bathflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Bath-induced channels on qubit density matrices.
//!
//! Eliminating the bath modes of qubit `i` down to cutoff `ω0` acts on the
//! measurable state as the phase-flip channel
//!
//! ```text
//! ρ → (1 + f)/2 · ρ + (1 − f)/2 · Z_i ρ Z_i,    f = (ω0/ω_c)^{α_i}
//! ```
//!
//! Channels on different qubits commute. In the Pauli basis the combined
//! channel multiplies each string's coefficient by `(ω0/ω_c)^{c(s)}`, exactly
//! like the Hamiltonian flow; [`pauli_scale_state`] implements that form.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::flow::{flow_closed_form, BathSpec};
use crate::linalg;
use crate::models::ghz_state;
use crate::pauli::{hermitian_deviation, DenseOperator, PauliOperator, PauliString};

/// Largest shell weight accepted by [`shared_bath_state_step`].
pub const MAX_SHELL_EPS: f64 = 1e-2;

/// Hermitian, unit-trace, positive semidefinite `2^n × 2^n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    rho: Array2<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-12), trace (1e-12) and positivity
    /// (smallest eigenvalue ≥ −1e-10).
    pub fn from_matrix(rho: Array2<Complex64>) -> Result<Self> {
        let dense = DenseOperator::from_matrix(rho)?;
        let n = dense.num_qubits();
        let rho = dense.into_matrix();
        let deviation = hermitian_deviation(&rho);
        if deviation > 1e-12 {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = trace(&rho);
        if (trace - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let lowest = linalg::eigenvalues(&rho)?[0];
        if lowest < -1e-10 {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {lowest:e}"
            )));
        }
        Ok(DensityMatrix { n, rho })
    }

    /// `|ψ⟩⟨ψ|` for a unit vector (norm within 1e-10).
    pub fn from_pure(psi: &[Complex64]) -> Result<Self> {
        let dim = psi.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        let norm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("state norm² is {norm}, expected 1")));
        }
        let rho = Array2::from_shape_fn((dim, dim), |(a, b)| psi[a] * psi[b].conj());
        Ok(DensityMatrix {
            n: dim.trailing_zeros() as usize,
            rho,
        })
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        let dim = 1usize
            .checked_shl(n as u32)
            .filter(|_| n >= 1 && n <= crate::pauli::DEFAULT_MAX_QUBITS)
            .ok_or(Error::DimensionOverflow {
                n,
                max: crate::pauli::DEFAULT_MAX_QUBITS,
            })?;
        let rho = Array2::from_diag_elem(dim, Complex64::new(1.0 / dim as f64, 0.0));
        Ok(DensityMatrix { n, rho })
    }

    /// Dense form of a state given in the Pauli basis.
    pub fn from_pauli(state: &PauliOperator) -> Result<Self> {
        Self::from_matrix(state.to_dense()?.into_matrix())
    }

    /// Pauli-basis coefficients; the all-I coefficient is `2^{-n}`.
    pub fn to_pauli(&self) -> Result<PauliOperator> {
        PauliOperator::from_dense(&DenseOperator::from_matrix(self.rho.clone())?)
    }

    pub(crate) fn from_matrix_unchecked(n: usize, rho: Array2<Complex64>) -> Self {
        DensityMatrix { n, rho }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.rho
    }

    pub fn into_matrix(self) -> Array2<Complex64> {
        self.rho
    }

    pub fn trace(&self) -> f64 {
        trace(&self.rho)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        hermitian_deviation(&self.rho)
    }
}

fn trace(m: &Array2<Complex64>) -> f64 {
    m.diag().iter().map(|z| z.re).sum()
}

fn check_qubit(n: usize, i: usize) -> Result<()> {
    if i >= n {
        return Err(Error::QubitIndex { index: i, n });
    }
    Ok(())
}

/// Index-bit mask of qubit `i` (qubit 0 is the most significant bit).
fn qubit_bit(n: usize, i: usize) -> usize {
    1 << (n - 1 - i)
}

fn dephase_in_place(rho: &mut Array2<Complex64>, n: usize, qubit: usize, f: f64) {
    let bit = qubit_bit(n, qubit);
    // (Z_i ρ Z_i)_ab = z_i(a) z_i(b) ρ_ab, so the channel keeps entries with
    // equal bit i and scales the rest by (1+f)/2 - (1-f)/2 = f.
    for ((a, b), value) in rho.indexed_iter_mut() {
        if (a ^ b) & bit != 0 {
            *value *= f;
        }
    }
}

/// Phase-flip channel on qubit `i` with coherence factor `f ∈ [0, 1]`.
pub fn dephase_qubit(rho: &DensityMatrix, i: usize, f: f64) -> Result<DensityMatrix> {
    check_qubit(rho.n, i)?;
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::out_of_range("f", f, "0 <= f <= 1"));
    }
    let mut out = rho.rho.clone();
    dephase_in_place(&mut out, rho.n, i, f);
    Ok(DensityMatrix::from_matrix_unchecked(rho.n, out))
}

/// Simultaneous dephasing of all qubits with `f_i = (ω0/ω_c)^{α_i}`.
pub fn dephase_all(rho: &DensityMatrix, bath: &BathSpec, omega0: f64) -> Result<DensityMatrix> {
    dephase_all_owned(rho.clone(), bath, omega0)
}

pub(crate) fn dephase_all_owned(
    mut rho: DensityMatrix,
    bath: &BathSpec,
    omega0: f64,
) -> Result<DensityMatrix> {
    bath.check_qubits(rho.n)?;
    bath.check_omega0(omega0)?;
    let ratio = omega0 / bath.omega_c();
    for (i, alpha) in bath.alpha().iter().enumerate() {
        let f = ratio.powf(*alpha);
        if f != 1.0 {
            dephase_in_place(&mut rho.rho, rho.n, i, f);
        }
    }
    Ok(rho)
}

/// Pauli-basis form of [`dephase_all`]: every coefficient of the state is scaled
/// by `(ω0/ω_c)^{c(s)}`; the all-I coefficient `2^{-n}` is untouched.
pub fn pauli_scale_state(
    rho_p: &PauliOperator,
    bath: &BathSpec,
    omega0: f64,
) -> Result<PauliOperator> {
    let n = rho_p.num_qubits();
    let expected = 0.5f64.powi(n as i32);
    let identity = rho_p.coefficient(&PauliString::identity(n)?);
    if (identity - expected).abs() > 1e-12 {
        return Err(Error::InvalidState(format!(
            "identity coefficient is {identity}, expected 2^-{n} = {expected}"
        )));
    }
    flow_closed_form(rho_p, bath, omega0)
}

/// Suppression `ratio^{n α}` of the GHZ coherence `|0…0⟩⟨1…1|` under uniform
/// coupling `α`.
pub fn ghz_offdiagonal_factor(n: usize, alpha: f64, ratio: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::out_of_range("n", 0.0, ">= 1"));
    }
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::out_of_range("alpha", alpha, "finite and >= 0"));
    }
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::out_of_range("ratio", ratio, "0 < ratio <= 1"));
    }
    Ok(ratio.powf(n as f64 * alpha))
}

/// The same factor measured by dephasing the dense GHZ projector and reading
/// off `2 ρ[0…0, 1…1]`.
pub fn ghz_measured_offdiagonal(n: usize, alpha: f64, ratio: f64) -> Result<f64> {
    ghz_offdiagonal_factor(n, alpha, ratio)?;
    let rho = DensityMatrix::from_pure(&ghz_state(n)?)?;
    let bath = BathSpec::uniform(1.0, n, alpha)?;
    let out = dephase_all_owned(rho, &bath, ratio)?;
    let last = out.dim() - 1;
    Ok(2.0 * out.rho[[0, last]].re)
}

/// One infinitesimal shell of the shared-bath transition for the qubit pair
/// `(i, j)`, summed over both orderings:
///
/// ```text
/// ρ → (1 − 2ε Tr[ρ Z_i Z_j]) ρ + ε (Z_i ρ Z_j + Z_j ρ Z_i)
/// ```
///
/// The map is nonlinear in `ρ`. It preserves the trace and Hermiticity.
/// `eps = λ_i λ_j / (4ω²)` must not exceed [`MAX_SHELL_EPS`].
pub fn shared_bath_state_step(
    rho: &DensityMatrix,
    i: usize,
    j: usize,
    eps: f64,
) -> Result<DensityMatrix> {
    let n = rho.n;
    check_qubit(n, i)?;
    check_qubit(n, j)?;
    if i == j {
        return Err(Error::InvalidInstance(
            "shared-bath step needs two distinct qubits".into(),
        ));
    }
    if !(0.0..=MAX_SHELL_EPS).contains(&eps) {
        return Err(Error::out_of_range("eps", eps, "0 <= eps <= 1e-2"));
    }
    let (bi, bj) = (qubit_bit(n, i), qubit_bit(n, j));
    let z = |a: usize, bit: usize| if a & bit == 0 { 1.0 } else { -1.0 };
    let correlation: f64 = (0..rho.dim())
        .map(|a| z(a, bi) * z(a, bj) * rho.rho[[a, a]].re)
        .sum();
    let keep = 1.0 - 2.0 * eps * correlation;
    let mut out = rho.rho.clone();
    for ((a, b), value) in out.indexed_iter_mut() {
        let mixed = z(a, bi) * z(b, bj) + z(a, bj) * z(b, bi);
        *value = *value * keep + *value * (eps * mixed);
    }
    Ok(DensityMatrix::from_matrix_unchecked(n, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plus() -> DensityMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::from_pure(&[Complex64::new(h, 0.0), Complex64::new(h, 0.0)]).unwrap()
    }

    #[test]
    fn identity_at_f_one() {
        let rho = plus();
        assert_eq!(dephase_qubit(&rho, 0, 1.0).unwrap(), rho);
    }

    #[test]
    fn plus_state_half() {
        let out = dephase_qubit(&plus(), 0, 0.5).unwrap();
        let m = out.matrix();
        assert!((m[[0, 1]].re - 0.25).abs() < 1e-15);
        assert!((m[[1, 0]].re - 0.25).abs() < 1e-15);
        assert!((m[[0, 0]].re - 0.5).abs() < 1e-15);
        assert!((m[[1, 1]].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn diagonal_state_untouched() {
        let mut m = Array2::<Complex64>::zeros((4, 4));
        m[[0, 0]] = Complex64::new(0.7, 0.0);
        m[[3, 3]] = Complex64::new(0.3, 0.0);
        let rho = DensityMatrix::from_matrix(m).unwrap();
        assert_eq!(dephase_qubit(&rho, 1, 0.2).unwrap(), rho);
        let bath = BathSpec::new(10.0, vec![0.4, 1.3]).unwrap();
        assert_eq!(dephase_all(&rho, &bath, 0.01).unwrap(), rho);
        assert_eq!(dephase_all(&plus(), &BathSpec::uniform(3.0, 1, 0.9).unwrap(), 3.0).unwrap(), plus());
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(dephase_qubit(&plus(), 0, 1.5).is_err());
        assert!(dephase_qubit(&plus(), 0, -0.1).is_err());
        assert!(dephase_qubit(&plus(), 1, 0.5).is_err());
        let bath = BathSpec::uniform(1.0, 2, 0.5).unwrap();
        assert!(dephase_all(&plus(), &bath, 0.5).is_err());
    }

    #[test]
    fn pauli_form_examples() {
        let mixed: PauliOperator = "0.5*I".parse().unwrap();
        let bath = BathSpec::uniform(1.0, 1, 0.5).unwrap();
        assert_eq!(pauli_scale_state(&mixed, &bath, 0.25).unwrap(), mixed);

        let rho: PauliOperator = "0.5*I + 0.25*X".parse().unwrap();
        let out = pauli_scale_state(&rho, &bath, 0.25).unwrap();
        assert!((out.coefficient(&"X".parse().unwrap()) - 0.125).abs() < 1e-15);

        let bad: PauliOperator = "1.0*I".parse().unwrap();
        assert!(pauli_scale_state(&bad, &bath, 0.25).is_err());
    }

    #[test]
    fn ghz_factor_examples() {
        assert_eq!(ghz_offdiagonal_factor(5, 0.3, 1.0).unwrap(), 1.0);
        assert!((ghz_offdiagonal_factor(3, 0.1, 0.5).unwrap() - 0.812252396356).abs() < 1e-11);
        assert_eq!(ghz_offdiagonal_factor(2, 0.0, 0.3).unwrap(), 1.0);
        assert!(ghz_offdiagonal_factor(2, 0.1, 0.0).is_err());
        let measured = ghz_measured_offdiagonal(3, 0.1, 0.5).unwrap();
        assert!((measured - 0.5f64.powf(0.3)).abs() < 1e-12);
    }

    #[test]
    fn shared_step_basics() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        assert_eq!(shared_bath_state_step(&rho, 0, 1, 0.0).unwrap(), rho);
        let out = shared_bath_state_step(&rho, 0, 1, 1e-3).unwrap();
        assert!((out.trace() - 1.0).abs() < 1e-12);
        assert!(shared_bath_state_step(&rho, 0, 0, 1e-3).is_err());
        assert!(shared_bath_state_step(&rho, 0, 1, 0.5).is_err());
    }

    #[test]
    fn from_matrix_validation() {
        let mut m = Array2::<Complex64>::zeros((2, 2));
        m[[0, 0]] = Complex64::new(1.5, 0.0);
        m[[1, 1]] = Complex64::new(-0.5, 0.0);
        assert!(DensityMatrix::from_matrix(m.clone()).is_err());
        m[[0, 0]] = Complex64::new(0.5, 0.0);
        m[[1, 1]] = Complex64::new(0.6, 0.0);
        assert!(DensityMatrix::from_matrix(m).is_err());
        assert!(DensityMatrix::from_pure(&[Complex64::new(1.0, 0.0); 2]).is_err());
    }
}
