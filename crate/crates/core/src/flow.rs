// Copyright 2026 The Bathflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Poor man's scaling of Pauli-string coefficients in an Ohmic bath.
//!
//! Every qubit `i` couples through σ_Z to its own bath with spectral density
//! `J_i(ω) = 2 α_i ω Θ(ω_c − ω)`. Lowering the cutoff from `ω_c` to `ω0`
//! rescales each string by `(ω0/ω_c)^{c(s)}`, where `c(s)` sums `α_i` over the
//! qubits on which the string anticommutes with σ_Z. The flow is diagonal in
//! the Pauli basis, so it preserves real coefficients.

use log::warn;
use ndarray::Array2;

use crate::error::{Error, Result};
use crate::pauli::{PauliAxis, PauliOperator, PauliString};

/// Lowest stopping frequency, as a fraction of `ω_c`, before the flow is
/// declared to run to zero.
pub const STOPPING_FLOOR: f64 = 1e-6;

const STOPPING_MAX_ITERATIONS: usize = 1_000_000;

/// Ohmic bath description: cutoff, per-qubit couplings and optional
/// cross couplings between qubits sharing bath modes.
#[derive(Debug, Clone, PartialEq)]
pub struct BathSpec {
    omega_c: f64,
    alpha: Vec<f64>,
    cross: Option<Array2<f64>>,
}

impl BathSpec {
    pub fn new(omega_c: f64, alpha: Vec<f64>) -> Result<Self> {
        if !(omega_c.is_finite() && omega_c > 0.0) {
            return Err(Error::out_of_range("omega_c", omega_c, "finite and > 0"));
        }
        if alpha.is_empty() {
            return Err(Error::InvalidBath("alpha must list one coupling per qubit".into()));
        }
        if let Some(a) = alpha.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
            return Err(Error::out_of_range("alpha", *a, "finite and >= 0"));
        }
        Ok(BathSpec {
            omega_c,
            alpha,
            cross: None,
        })
    }

    /// Same coupling `alpha` on each of `n` qubits.
    pub fn uniform(omega_c: f64, n: usize, alpha: f64) -> Result<Self> {
        Self::new(omega_c, vec![alpha; n])
    }

    /// Attaches the symmetric cross-coupling matrix `α_ij`.
    ///
    /// The diagonal must reproduce `alpha`. Entries violating
    /// `α_ij² ≤ α_i α_j` are accepted with a warning.
    pub fn with_cross(mut self, cross: Array2<f64>) -> Result<Self> {
        let n = self.alpha.len();
        if cross.dim() != (n, n) {
            return Err(Error::InvalidBath(format!(
                "cross coupling matrix is {:?}, expected ({n}, {n})",
                cross.dim()
            )));
        }
        for i in 0..n {
            if (cross[[i, i]] - self.alpha[i]).abs() > 1e-12 {
                return Err(Error::InvalidBath(format!(
                    "cross[{i}][{i}] = {} differs from alpha[{i}] = {}",
                    cross[[i, i]],
                    self.alpha[i]
                )));
            }
            for j in 0..n {
                let a = cross[[i, j]];
                if !(a.is_finite() && a >= 0.0) {
                    return Err(Error::out_of_range("cross coupling", a, "finite and >= 0"));
                }
                if (a - cross[[j, i]]).abs() > 1e-12 {
                    return Err(Error::InvalidBath(format!(
                        "cross coupling not symmetric at ({i}, {j})"
                    )));
                }
                if i < j && a * a > self.alpha[i] * self.alpha[j] {
                    warn!(
                        "cross coupling alpha[{i}][{j}] = {a} exceeds sqrt(alpha_i alpha_j); \
                         shared-bath terms will dominate the flow"
                    );
                }
            }
        }
        self.cross = Some(cross);
        Ok(self)
    }

    /// The same bath with the cutoff moved to `omega_c`, used to restart a flow.
    pub fn with_cutoff(&self, omega_c: f64) -> Result<Self> {
        let mut out = Self::new(omega_c, self.alpha.clone())?;
        out.cross = self.cross.clone();
        Ok(out)
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn cross(&self) -> Option<&Array2<f64>> {
        self.cross.as_ref()
    }

    pub fn num_qubits(&self) -> usize {
        self.alpha.len()
    }

    pub(crate) fn check_omega0(&self, omega0: f64) -> Result<()> {
        if !(omega0 > 0.0 && omega0 <= self.omega_c) {
            return Err(Error::out_of_range("omega0", omega0, "0 < omega0 <= omega_c"));
        }
        Ok(())
    }

    pub(crate) fn check_qubits(&self, n: usize) -> Result<()> {
        if n != self.alpha.len() {
            return Err(Error::QubitMismatch {
                expected: self.alpha.len(),
                found: n,
            });
        }
        Ok(())
    }
}

/// Combined coupling `c(s) = Σ_{i ∈ M} α_i` over the anticommuting support `M`.
///
/// The value lies in `[0, Σ α_i]`, with both ends reachable.
pub fn bath_exponent(s: &PauliString, bath: &BathSpec) -> Result<f64> {
    bath.check_qubits(s.num_qubits())?;
    Ok(s.anticommuting_support()
        .into_iter()
        .map(|q| bath.alpha[q])
        .sum())
}

/// Leading-order effective operator at cutoff `omega0`:
/// `Δ_s → Δ_s (ω0/ω_c)^{c(s)}`.
pub fn flow_closed_form(h: &PauliOperator, bath: &BathSpec, omega0: f64) -> Result<PauliOperator> {
    bath.check_qubits(h.num_qubits())?;
    bath.check_omega0(omega0)?;
    let ratio = omega0 / bath.omega_c;
    Ok(h.map_coefficients(|s, c| {
        let exponent: f64 = s.anticommuting_support().iter().map(|&q| bath.alpha[q]).sum();
        c * ratio.powf(exponent)
    }))
}

/// Observables transform with the same leading-order rule as the Hamiltonian.
/// The identity is left untouched, so `⟨1⟩ = 1` holds after the flow.
pub fn transform_observable(
    q: &PauliOperator,
    bath: &BathSpec,
    omega0: f64,
) -> Result<PauliOperator> {
    flow_closed_form(q, bath, omega0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowSample {
    pub omega0: f64,
    pub operator: PauliOperator,
}

/// Effective operator at the final cutoff together with the sampled flow.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowResult {
    pub omega0: f64,
    pub effective: PauliOperator,
    /// Samples with strictly decreasing cutoff, starting at `ω_c` with the input.
    pub trajectory: Vec<FlowSample>,
}

/// Integrates `dΔ_s/dω0 = c(s) Δ_s / ω0` from `ω_c` down to `omega0` on a
/// log-spaced grid of `steps` intervals.
///
/// The equation is linear and diagonal in the Pauli basis, so each step uses
/// the exact propagator `(ω_{k+1}/ω_k)^{c(s)}`.
pub fn flow_ode(h: &PauliOperator, bath: &BathSpec, omega0: f64, steps: usize) -> Result<FlowResult> {
    bath.check_qubits(h.num_qubits())?;
    bath.check_omega0(omega0)?;
    if steps == 0 {
        return Err(Error::out_of_range("steps", 0.0, ">= 1"));
    }
    let exponents: Vec<(PauliString, f64)> = h
        .terms()
        .map(|(s, _)| Ok((*s, bath_exponent(s, bath)?)))
        .collect::<Result<_>>()?;

    let omega_c = bath.omega_c;
    let mut trajectory = vec![FlowSample {
        omega0: omega_c,
        operator: h.clone(),
    }];
    if omega0 < omega_c {
        let log_ratio = (omega0 / omega_c).ln();
        let mut coefficients: Vec<f64> = h.terms().map(|(_, c)| c).collect();
        let mut previous = omega_c;
        for k in 1..=steps {
            let current = if k == steps {
                omega0
            } else {
                omega_c * (log_ratio * k as f64 / steps as f64).exp()
            };
            let step_ratio = current / previous;
            for (c, (_, exponent)) in coefficients.iter_mut().zip(&exponents) {
                *c *= step_ratio.powf(*exponent);
            }
            let operator = PauliOperator::from_terms(
                h.num_qubits(),
                exponents.iter().zip(&coefficients).map(|((s, _), c)| (*s, *c)),
            )?;
            trajectory.push(FlowSample {
                omega0: current,
                operator,
            });
            previous = current;
        }
    }
    let effective = trajectory.last().expect("nonempty trajectory").operator.clone();
    Ok(FlowResult {
        omega0,
        effective,
        trajectory,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopStatus {
    /// Self-consistent `ω0* = η ‖H_eff(ω0*)‖` found inside `(floor, ω_c]`.
    Converged,
    /// `η ‖H‖ ≥ ω_c` already at the bare cutoff; no scaling is performed.
    AtCutoff,
    /// The coefficients flow to zero faster than the cutoff; `ω0*` is the floor.
    FullyLocalized,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppingPoint {
    pub omega0: f64,
    pub status: StopStatus,
    pub iterations: usize,
}

/// Lowest admissible cutoff: the largest fixed point of
/// `ω0 = η · ‖H_eff(ω0)‖₁` at or below `ω_c`, with `‖·‖₁` the coefficient norm.
///
/// Found by monotone iteration from `ω_c`; every iterate stays above the
/// fixed point, so the first one reached is the largest.
pub fn stopping_frequency(h: &PauliOperator, bath: &BathSpec, eta: f64) -> Result<StoppingPoint> {
    bath.check_qubits(h.num_qubits())?;
    if !(eta.is_finite() && eta > 1.0) {
        return Err(Error::out_of_range("eta", eta, "finite and > 1"));
    }
    if h.is_empty() {
        return Err(Error::InvalidInstance(
            "stopping frequency of the zero operator is undefined".into(),
        ));
    }
    let omega_c = bath.omega_c;
    let terms: Vec<(f64, f64)> = h
        .terms()
        .map(|(s, c)| Ok((c.abs(), bath_exponent(s, bath)?)))
        .collect::<Result<_>>()?;
    let target = |omega: f64| -> f64 {
        let ratio = omega / omega_c;
        eta * terms.iter().map(|(d, c)| d * ratio.powf(*c)).sum::<f64>()
    };
    // d/dω of the target
    let slope = |omega: f64| -> f64 {
        let ratio = omega / omega_c;
        eta * terms
            .iter()
            .map(|(d, c)| if *c == 0.0 { 0.0 } else { d * c * ratio.powf(*c) / omega })
            .sum::<f64>()
    };

    if target(omega_c) >= omega_c {
        return Ok(StoppingPoint {
            omega0: omega_c,
            status: StopStatus::AtCutoff,
            iterations: 0,
        });
    }

    let floor = STOPPING_FLOOR * omega_c;
    let mut omega = omega_c;
    for iteration in 1..=STOPPING_MAX_ITERATIONS {
        let next = target(omega);
        if next < floor {
            return Ok(StoppingPoint {
                omega0: floor,
                status: StopStatus::FullyLocalized,
                iterations: iteration,
            });
        }
        let step = omega - next;
        omega = next;
        if step <= 1e-14 * omega_c {
            // Newton polish for slowly contracting cases; keep only improvements.
            for _ in 0..8 {
                let residual = omega - target(omega);
                let derivative = 1.0 - slope(omega);
                if derivative <= 0.0 {
                    break;
                }
                let candidate = omega - residual / derivative;
                if !(candidate > floor && candidate <= omega_c)
                    || (candidate - target(candidate)).abs() >= residual.abs()
                {
                    break;
                }
                omega = candidate;
            }
            let residual = (omega - target(omega)).abs();
            if residual > 1e-8 * omega_c {
                return Err(Error::Numerical(format!(
                    "stopping frequency stalled at {omega} with residual {residual:e}"
                )));
            }
            return Ok(StoppingPoint {
                omega0: omega,
                status: StopStatus::Converged,
                iterations: iteration,
            });
        }
    }
    Err(Error::Numerical(format!(
        "stopping frequency did not converge in {STOPPING_MAX_ITERATIONS} iterations"
    )))
}

/// Dominant shared-bath correction: a `Z_i Z_j` term with coefficient
/// `−α_ij (ω_c − ω0) / 2` for every pair `i < j` with `α_ij > 0`.
///
/// This is `−∫ J_ij(ω) / (4ω) dω` over the eliminated shell with
/// `J_ij(ω) = 2 α_ij ω`. The generated terms commute with every bath coupling.
/// Subleading `σ_Z^i H σ_Z^j` pieces are not included.
pub fn shared_bath_zz(h: &PauliOperator, bath: &BathSpec, omega0: f64) -> Result<PauliOperator> {
    bath.check_qubits(h.num_qubits())?;
    bath.check_omega0(omega0)?;
    let cross = bath
        .cross
        .as_ref()
        .ok_or_else(|| Error::InvalidBath("shared-bath correction needs cross couplings".into()))?;
    let n = h.num_qubits();
    let shell = bath.omega_c - omega0;
    let mut out = PauliOperator::zero(n)?;
    for i in 0..n {
        for j in i + 1..n {
            let a = cross[[i, j]];
            if a > 0.0 {
                let zz = PauliString::from_sites(n, &[(i, PauliAxis::Z), (j, PauliAxis::Z)])?;
                out.add_term(zz, -a * shell / 2.0)?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn op(text: &str) -> PauliOperator {
        text.parse().unwrap()
    }

    fn s(text: &str) -> PauliString {
        text.parse().unwrap()
    }

    #[test]
    fn bath_exponent_examples() {
        let bath = BathSpec::new(30.0, vec![0.7, 0.3]).unwrap();
        assert_eq!(bath_exponent(&s("XI"), &bath).unwrap(), 0.7);
        assert_eq!(bath_exponent(&s("ZZ"), &bath).unwrap(), 0.0);
        let bath = BathSpec::new(30.0, vec![0.1, 0.1]).unwrap();
        assert_eq!(bath_exponent(&s("XY"), &bath).unwrap(), 0.2);
        assert!(bath_exponent(&s("XYZ"), &bath).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let x = op("1.0*X");
        let bath = BathSpec::uniform(1.0, 1, 1.0).unwrap();
        assert_eq!(flow_closed_form(&x, &bath, 0.5).unwrap().coefficient(&s("X")), 0.5);
        let bath = BathSpec::uniform(1.0, 1, 0.5).unwrap();
        assert_relative_eq!(
            flow_closed_form(&x, &bath, 0.25).unwrap().coefficient(&s("X")),
            0.5,
            max_relative = 1e-15
        );
        let h = op("0.3*XZ + 0.2*YY - 1.0*ZI");
        let bath = BathSpec::new(30.0, vec![0.4, 0.9]).unwrap();
        assert_eq!(flow_closed_form(&h, &bath, 30.0).unwrap(), h);
    }

    #[test]
    fn closed_form_rejects_bad_cutoff() {
        let bath = BathSpec::uniform(30.0, 1, 0.5).unwrap();
        for omega0 in [0.0, -1.0, 30.5, f64::NAN] {
            assert!(flow_closed_form(&op("X"), &bath, omega0).is_err());
        }
    }

    #[test]
    fn ode_keeps_commuting_strings_constant() {
        let h = op("0.7*Z");
        let bath = BathSpec::uniform(30.0, 1, 0.8).unwrap();
        let flow = flow_ode(&h, &bath, 0.3, 17).unwrap();
        assert_eq!(flow.trajectory.len(), 18);
        assert!(flow
            .trajectory
            .iter()
            .all(|sample| sample.operator.coefficient(&s("Z")) == 0.7));
    }

    #[test]
    fn ode_linear_case() {
        let bath = BathSpec::uniform(1.0, 1, 1.0).unwrap();
        let flow = flow_ode(&op("X"), &bath, 0.1, 1000).unwrap();
        assert!((flow.effective.coefficient(&s("X")) - 0.1).abs() < 1e-6);
        assert_eq!(flow.omega0, 0.1);
        assert_eq!(flow.trajectory[0].operator, op("X"));
        assert!(flow
            .trajectory
            .windows(2)
            .all(|w| w[1].omega0 < w[0].omega0));
    }

    #[test]
    fn ode_at_cutoff_is_identity() {
        let bath = BathSpec::uniform(5.0, 1, 1.0).unwrap();
        let flow = flow_ode(&op("X"), &bath, 5.0, 10).unwrap();
        assert_eq!(flow.trajectory.len(), 1);
        assert_eq!(flow.effective, op("X"));
        assert!(flow_ode(&op("X"), &bath, 1.0, 0).is_err());
    }

    #[test]
    fn stopping_frequency_commuting() {
        let bath = BathSpec::uniform(30.0, 1, 0.5).unwrap();
        let stop = stopping_frequency(&op("1.0*Z"), &bath, 10.0).unwrap();
        assert_eq!(stop.status, StopStatus::Converged);
        assert!((stop.omega0 - 10.0).abs() < 1e-12);
    }

    #[test]
    fn stopping_frequency_power_law() {
        let bath = BathSpec::uniform(30.0, 1, 0.5).unwrap();
        let stop = stopping_frequency(&op("1.0*X"), &bath, 10.0).unwrap();
        assert_eq!(stop.status, StopStatus::Converged);
        assert!((stop.omega0 - 100.0 / 30.0).abs() < 1e-10, "{}", stop.omega0);
    }

    #[test]
    fn stopping_frequency_localized() {
        for alpha in [1.0, 1.5] {
            let bath = BathSpec::uniform(30.0, 1, alpha).unwrap();
            let stop = stopping_frequency(&op("1.0*X"), &bath, 10.0).unwrap();
            assert_eq!(stop.status, StopStatus::FullyLocalized);
            assert_eq!(stop.omega0, 30.0 * STOPPING_FLOOR);
        }
    }

    #[test]
    fn stopping_frequency_at_cutoff_and_errors() {
        let bath = BathSpec::uniform(5.0, 1, 0.5).unwrap();
        let stop = stopping_frequency(&op("1.0*X"), &bath, 10.0).unwrap();
        assert_eq!(stop.status, StopStatus::AtCutoff);
        assert_eq!(stop.omega0, 5.0);
        assert!(stopping_frequency(&op("X"), &bath, 1.0).is_err());
        assert!(stopping_frequency(&PauliOperator::zero(1).unwrap(), &bath, 10.0).is_err());
    }

    #[test]
    fn observable_examples() {
        let bath = BathSpec::new(1.0, vec![0.3, 0.6]).unwrap();
        let z = op("1.0*IZ");
        assert_eq!(transform_observable(&z, &bath, 0.5).unwrap(), z);
        let x = transform_observable(&op("1.0*XI"), &bath, 0.5).unwrap();
        assert!((x.coefficient(&s("XI")) - 0.812252396356).abs() < 1e-11);
        let id = op("1.0*II");
        assert_eq!(transform_observable(&id, &bath, 1e-3).unwrap(), id);
    }

    #[test]
    fn shared_bath_examples() {
        let h = op("1.0*XX");
        let bath = BathSpec::new(30.0, vec![0.2, 0.2]).unwrap();
        assert!(shared_bath_zz(&h, &bath, 10.0).is_err());

        let zero_cross = Array2::from_diag(&ndarray::arr1(&[0.2, 0.2]));
        let b0 = bath.clone().with_cross(zero_cross).unwrap();
        assert!(shared_bath_zz(&h, &b0, 10.0).unwrap().is_empty());

        let cross = ndarray::arr2(&[[0.2, 0.1], [0.1, 0.2]]);
        let b1 = bath.with_cross(cross).unwrap();
        let zz = shared_bath_zz(&h, &b1, 10.0).unwrap();
        assert!((zz.coefficient(&s("ZZ")) + 1.0).abs() < 1e-14);
        for (term, _) in zz.terms() {
            assert_eq!(bath_exponent(term, &b1).unwrap(), 0.0);
        }
    }

    #[test]
    fn cross_validation() {
        let bath = BathSpec::new(30.0, vec![0.2, 0.3]).unwrap();
        assert!(bath.clone().with_cross(ndarray::arr2(&[[0.2, 0.1], [0.0, 0.3]])).is_err());
        assert!(bath.clone().with_cross(ndarray::arr2(&[[0.1, 0.1], [0.1, 0.3]])).is_err());
        assert!(bath.clone().with_cross(ndarray::arr2(&[[0.2, -0.1], [-0.1, 0.3]])).is_err());
        // inadmissible but accepted
        assert!(bath.with_cross(ndarray::arr2(&[[0.2, 0.9], [0.9, 0.3]])).is_ok());
    }

    #[test]
    fn bath_validation() {
        assert!(BathSpec::new(0.0, vec![0.1]).is_err());
        assert!(BathSpec::new(1.0, vec![]).is_err());
        assert!(BathSpec::new(1.0, vec![-0.1]).is_err());
    }
}
