// Copyright 2026 The Bathflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Environmental effects of Ohmic baths on Pauli-string qubit Hamiltonians.
//!
//! The crate flows Hamiltonian coefficients under poor man's scaling down to an
//! effective cutoff, diagonalizes original and effective Hamiltonians, applies the
//! bath-induced dephasing channel to obtain the measurement-accessible reduced
//! density matrix, and sweeps fidelity, purity and entropy over coupling and
//! annealing parameters.
//!
//! ```
//! use bathflow::{BathSpec, PauliOperator, flow_closed_form};
//!
//! let h: PauliOperator = "1.0*X".parse().unwrap();
//! let bath = BathSpec::uniform(30.0, 1, 1.0).unwrap();
//! let eff = flow_closed_form(&h, &bath, 3.0).unwrap();
//! assert!((eff.coefficient(&"X".parse().unwrap()) - 0.1).abs() < 1e-12);
//! ```

pub mod channels;
pub mod error;
pub mod flow;
mod linalg;
pub mod metrics;
pub mod models;
pub mod pauli;
pub mod spectral;
pub mod sweep;
pub mod textfmt;

pub use channels::{
    dephase_all, dephase_qubit, ghz_measured_offdiagonal, ghz_offdiagonal_factor,
    pauli_scale_state, shared_bath_state_step, DensityMatrix,
};
pub use error::{Error, Result};
pub use flow::{
    bath_exponent, flow_closed_form, flow_ode, shared_bath_zz, stopping_frequency,
    transform_observable, BathSpec, FlowResult, FlowSample, StopStatus, StoppingPoint,
};
pub use metrics::{
    entropy, fidelity_pure_mixed, purity, trace_distance, EntropyBase, FidelityConvention,
    MetricsRecord,
};
pub use models::{
    afm_hamiltonian, ghz_state, random_afm_instance, random_regular_graph, single_spin_boson,
    AfmInstance,
};
pub use pauli::{DenseOperator, PauliAxis, PauliOperator, PauliString, DEFAULT_MAX_QUBITS};
pub use spectral::{ground_state, spectrum, GroundState};
pub use sweep::{
    classify_regime, run_point, run_sweep, Regime, RegimeThresholds, SweepConfig, SweepRecord,
};
