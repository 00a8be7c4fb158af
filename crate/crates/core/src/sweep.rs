// Copyright 2026 The Bathflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Parameter sweeps over bath coupling `α` and annealing parameter `s`.
//!
//! Each grid point runs the full pipeline:
//!
//! 1. build `H(s)`;
//! 2. find the stopping frequency `ω0*` for uniform coupling `α`;
//! 3. flow `H` to `H_eff(ω0*)`;
//! 4. diagonalize `H` and `H_eff`;
//! 5. dephase `|ψ_eff⟩⟨ψ_eff|` down to `ω0*`, giving `ρ_r`;
//! 6. compare against the ideal ground state.
//!
//! Records are sorted by `(s, α)` and written as CSV with 12 significant
//! digits, so identical configurations give byte-identical files.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{dephase_all_owned, DensityMatrix};
use crate::error::{Error, Result};
use crate::flow::{flow_closed_form, flow_ode, stopping_frequency, BathSpec, StopStatus};
use crate::metrics::{
    entropy, fidelity_pure_mixed, overlap_squared, purity, trace_distance, EntropyBase,
    FidelityConvention,
};
use crate::models::{afm_hamiltonian, parse_edges, random_regular_graph, single_spin_boson, AfmInstance};
use crate::pauli::PauliOperator;
use crate::spectral::{ground_state, GroundState};
use crate::textfmt::g12;

/// Bath cutoff used when a configuration does not set one.
pub const DEFAULT_OMEGA_C: f64 = 1000.0;
pub const DEFAULT_ETA: f64 = 10.0;
pub const DEFAULT_ODE_STEPS: usize = 1000;

/// Seed of the default 12-qubit benchmark ring.
pub const BENCHMARK_SEED: u64 = 7;
/// Seed of the alternative instance run at `s = 0.7`.
pub const ALTERNATE_SEED: u64 = 11;

pub const CSV_HEADER: [&str; 12] = [
    "s",
    "alpha",
    "omega0_star",
    "E0_ideal",
    "E0_eff",
    "fidelity_sb",
    "fidelity_reduced",
    "purity",
    "entropy",
    "trace_distance",
    "regime",
    "flags",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimeThresholds {
    pub small: f64,
    pub large: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        RegimeThresholds {
            small: 0.3,
            large: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    WeakCoupling,
    /// Locally coherent, globally dephased: `kα` small, `nα` not.
    Lcgd,
    PartiallyLocalized,
    Localized,
    /// Every term commutes with the bath coupling.
    Classical,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::WeakCoupling => "weak coupling",
            Regime::Lcgd => "LCGD",
            Regime::PartiallyLocalized => "partially localized",
            Regime::Localized => "localized",
            Regime::Classical => "classical",
        })
    }
}

/// Labels a uniform coupling `alpha` for an `n`-qubit, `k`-local Hamiltonian.
pub fn classify_regime(n: usize, k: usize, alpha: f64, thresholds: &RegimeThresholds) -> Regime {
    let local = k as f64 * alpha;
    let global = n as f64 * alpha;
    if local >= thresholds.large {
        Regime::Localized
    } else if local >= thresholds.small {
        Regime::PartiallyLocalized
    } else if global >= thresholds.small {
        Regime::Lcgd
    } else {
        Regime::WeakCoupling
    }
}

/// Source of the Hamiltonian swept over `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InstanceSpec {
    /// Antiferromagnetic instance; explicit `edges` take precedence over the
    /// seeded random regular graph.
    Afm {
        n: usize,
        #[serde(default = "default_degree")]
        degree: usize,
        #[serde(default)]
        seed: u64,
        #[serde(default)]
        edges: Option<String>,
    },
    /// Fixed Pauli operator in text form; `s` does not enter.
    Operator { hamiltonian: String },
}

fn default_degree() -> usize {
    2
}

impl InstanceSpec {
    pub fn hamiltonian(&self, s: f64) -> Result<PauliOperator> {
        match self {
            InstanceSpec::Afm {
                n,
                degree,
                seed,
                edges,
            } => {
                let edges = match edges {
                    Some(text) => parse_edges(text)?,
                    None => random_regular_graph(*n, *degree, *seed)?,
                };
                afm_hamiltonian(&AfmInstance::new(*n, &edges, s)?)
            }
            InstanceSpec::Operator { hamiltonian } => hamiltonian.parse(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// Grid axis: an explicit list or a generated range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    List(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        count: usize,
        #[serde(default = "default_spacing")]
        spacing: Spacing,
        #[serde(default)]
        include_zero: bool,
    },
}

fn default_spacing() -> Spacing {
    Spacing::Linear
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        let values = match self {
            GridSpec::List(v) => v.clone(),
            GridSpec::Range {
                start,
                stop,
                count,
                spacing,
                include_zero,
            } => {
                let (start, stop, count) = (*start, *stop, *count);
                if count == 0 {
                    return Err(Error::Config("grid range needs count >= 1".into()));
                }
                if *spacing == Spacing::Log && !(start > 0.0 && stop > 0.0) {
                    return Err(Error::Config("log grid needs positive bounds".into()));
                }
                let mut v: Vec<f64> = if *include_zero { vec![0.0] } else { Vec::new() };
                for k in 0..count {
                    let t = if count == 1 { 0.0 } else { k as f64 / (count - 1) as f64 };
                    v.push(match spacing {
                        Spacing::Linear => start + (stop - start) * t,
                        Spacing::Log => (start.ln() + (stop.ln() - start.ln()) * t).exp(),
                    });
                }
                v
            }
        };
        if values.is_empty() {
            return Err(Error::Config("grid is empty".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("grid values must be finite".into()));
        }
        Ok(values)
    }
}

/// The 40 log-spaced couplings over `[1e-3, 0.25]` plus `α = 0`.
pub fn default_alpha_grid() -> GridSpec {
    GridSpec::Range {
        start: 1e-3,
        stop: 0.25,
        count: 40,
        spacing: Spacing::Log,
        include_zero: true,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub s: GridSpec,
    #[serde(default = "default_alpha_grid")]
    pub alpha: GridSpec,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

/// Everything a sweep needs; deserialized from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_omega_c")]
    pub omega_c: f64,
    #[serde(default = "default_eta")]
    pub eta: f64,
    #[serde(default = "default_ode_steps")]
    pub ode_steps: usize,
    #[serde(default)]
    pub entropy_base: EntropyBase,
    #[serde(default)]
    pub fidelity: FidelityConvention,
    pub instance: InstanceSpec,
    pub grid: GridConfig,
    #[serde(default)]
    pub regime: RegimeThresholds,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_omega_c() -> f64 {
    DEFAULT_OMEGA_C
}

fn default_eta() -> f64 {
    DEFAULT_ETA
}

fn default_ode_steps() -> usize {
    DEFAULT_ODE_STEPS
}

impl SweepConfig {
    /// Benchmark ring with the given seed, `s` grid and `α` grid.
    pub fn benchmark(seed: u64, s: Vec<f64>, alpha: GridSpec) -> Self {
        SweepConfig {
            omega_c: DEFAULT_OMEGA_C,
            eta: DEFAULT_ETA,
            ode_steps: DEFAULT_ODE_STEPS,
            entropy_base: EntropyBase::Bits,
            fidelity: FidelityConvention::Overlap,
            instance: InstanceSpec::Afm {
                n: 12,
                degree: 2,
                seed,
                edges: None,
            },
            grid: GridConfig {
                s: GridSpec::List(s),
                alpha,
            },
            regime: RegimeThresholds::default(),
            output: OutputConfig::default(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: SweepConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        // Output paths are relative to the config file.
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.output.csv, &mut cfg.output.json].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_c.is_finite() && self.omega_c > 0.0) {
            return Err(Error::Config(format!("omega_c = {} must be > 0", self.omega_c)));
        }
        if !(self.eta.is_finite() && self.eta > 1.0) {
            return Err(Error::Config(format!("eta = {} must be > 1", self.eta)));
        }
        if self.ode_steps == 0 {
            return Err(Error::Config("ode_steps must be >= 1".into()));
        }
        if !(self.regime.small > 0.0 && self.regime.small <= self.regime.large) {
            return Err(Error::Config("regime thresholds need 0 < small <= large".into()));
        }
        if let Some(a) = self.alpha_values()?.iter().find(|a| **a < 0.0) {
            return Err(Error::Config(format!("alpha = {a} must be >= 0")));
        }
        if let Some(s) = self.s_values()?.iter().find(|s| !(0.0..=1.0).contains(*s)) {
            return Err(Error::Config(format!("s = {s} must lie in [0, 1]")));
        }
        self.hamiltonian(self.s_values()?[0])?;
        Ok(())
    }

    pub fn alpha_values(&self) -> Result<Vec<f64>> {
        self.grid.alpha.values()
    }

    pub fn s_values(&self) -> Result<Vec<f64>> {
        self.grid.s.values()
    }

    pub fn hamiltonian(&self, s: f64) -> Result<PauliOperator> {
        self.instance.hamiltonian(s)
    }
}

/// One `(s, α)` grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub s: f64,
    pub alpha: f64,
    pub omega0_star: f64,
    pub e0_ideal: f64,
    pub e0_eff: f64,
    pub fidelity_sb: f64,
    pub fidelity_reduced: f64,
    pub purity: f64,
    pub entropy: f64,
    pub trace_distance: f64,
    pub regime: String,
    pub flags: Vec<String>,
}

impl SweepRecord {
    fn failed(s: f64, alpha: f64, regime: String, err: &Error) -> Self {
        SweepRecord {
            s,
            alpha,
            omega0_star: f64::NAN,
            e0_ideal: f64::NAN,
            e0_eff: f64::NAN,
            fidelity_sb: f64::NAN,
            fidelity_reduced: f64::NAN,
            purity: f64::NAN,
            entropy: f64::NAN,
            trace_distance: f64::NAN,
            regime,
            flags: vec![format!("error: {err}")],
        }
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.iter().any(|f| f == flag)
    }

    /// Row in `CSV_HEADER` order.
    pub fn csv_fields(&self) -> Vec<String> {
        let mut row: Vec<String> = [
            self.s,
            self.alpha,
            self.omega0_star,
            self.e0_ideal,
            self.e0_eff,
            self.fidelity_sb,
            self.fidelity_reduced,
            self.purity,
            self.entropy,
            self.trace_distance,
        ]
        .iter()
        .map(|v| g12(*v))
        .collect();
        row.push(self.regime.clone());
        row.push(self.flags.join(";"));
        row
    }
}

fn regime_for(h: &PauliOperator, alpha: f64, thresholds: &RegimeThresholds) -> Regime {
    if h.is_diagonal() {
        Regime::Classical
    } else {
        classify_regime(h.num_qubits(), h.locality(), alpha, thresholds)
    }
}

/// Full pipeline at one grid point.
pub fn run_point(cfg: &SweepConfig, s: f64, alpha: f64) -> Result<SweepRecord> {
    let h = cfg.hamiltonian(s)?;
    let ideal = ground_state(&h)?;
    evaluate_point(cfg, s, alpha, &h, &ideal)
}

fn evaluate_point(
    cfg: &SweepConfig,
    s: f64,
    alpha: f64,
    h: &PauliOperator,
    ideal: &GroundState,
) -> Result<SweepRecord> {
    let n = h.num_qubits();
    let bath = BathSpec::uniform(cfg.omega_c, n, alpha)?;
    let stop = stopping_frequency(h, &bath, cfg.eta)?;
    let mut flags = Vec::new();
    match stop.status {
        StopStatus::Converged => {}
        StopStatus::AtCutoff => flags.push("at_cutoff".to_string()),
        StopStatus::FullyLocalized => flags.push("fully_localized".to_string()),
    }
    let effective_h = flow_closed_form(h, &bath, stop.omega0)?;
    let effective = if effective_h == *h {
        ideal.clone()
    } else {
        ground_state(&effective_h)?
    };
    if ideal.degenerate {
        flags.push("degenerate_ideal".to_string());
    }
    if effective.degenerate {
        flags.push("degenerate_eff".to_string());
    }
    let reduced = dephase_all_owned(DensityMatrix::from_pure(&effective.vector)?, &bath, stop.omega0)?;
    let fidelity_sb = cfg
        .fidelity
        .apply(overlap_squared(&ideal.vector, &effective.vector)?);
    let fidelity_reduced = cfg
        .fidelity
        .apply(fidelity_pure_mixed(&ideal.vector, &reduced)?);
    let purity = purity(&reduced);
    let entropy = entropy(&reduced, cfg.entropy_base)?;
    let trace_distance = trace_distance(&DensityMatrix::from_pure(&ideal.vector)?, &reduced)?;
    Ok(SweepRecord {
        s,
        alpha,
        omega0_star: stop.omega0,
        e0_ideal: ideal.energy,
        e0_eff: effective.energy,
        fidelity_sb,
        fidelity_reduced,
        purity,
        entropy,
        trace_distance,
        regime: regime_for(h, alpha, &cfg.regime).to_string(),
        flags,
    })
}

/// Runs every grid point, sorts by `(s, α)` and writes the configured outputs.
///
/// Failures at individual points are recorded in that point's `flags`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let mut s_values = cfg.s_values()?;
    s_values.sort_by(f64::total_cmp);
    s_values.dedup();
    let mut alphas = cfg.alpha_values()?;
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();

    // The ideal ground state depends only on s.
    let ideals: Vec<(f64, Result<(PauliOperator, GroundState)>)> = s_values
        .par_iter()
        .map(|&s| {
            let prepared = cfg
                .hamiltonian(s)
                .and_then(|h| ground_state(&h).map(|gs| (h, gs)));
            (s, prepared)
        })
        .collect();

    let points: Vec<(usize, f64)> = (0..ideals.len())
        .flat_map(|k| alphas.iter().map(move |a| (k, *a)))
        .collect();
    let records: Vec<SweepRecord> = points
        .par_iter()
        .map(|&(k, alpha)| {
            let (s, prepared) = &ideals[k];
            let result = prepared
                .as_ref()
                .map_err(|e| Error::Numerical(e.to_string()))
                .and_then(|(h, ideal)| evaluate_point(cfg, *s, alpha, h, ideal));
            result.unwrap_or_else(|e| {
                let regime = prepared
                    .as_ref()
                    .map(|(h, _)| regime_for(h, alpha, &cfg.regime).to_string())
                    .unwrap_or_default();
                SweepRecord::failed(*s, alpha, regime, &e)
            })
        })
        .collect();

    if let Some(path) = &cfg.output.csv {
        write_csv(&records, path)?;
    }
    if let Some(path) = &cfg.output.json {
        write_json(&records, path)?;
    }
    Ok(records)
}

fn create_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(())
}

pub fn write_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    create_parent(path)?;
    let mut out = csv::Writer::from_path(path)?;
    out.write_record(CSV_HEADER)?;
    for r in records {
        out.write_record(r.csv_fields())?;
    }
    out.flush()?;
    Ok(())
}

/// Numbers rounded to the same 12 digits as the CSV; NaN becomes `null`.
fn rounded(x: f64) -> serde_json::Value {
    g12(x)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(serde_json::Value::Null, serde_json::Value::Number)
}

pub fn records_to_json(records: &[SweepRecord]) -> serde_json::Value {
    let rows = records
        .iter()
        .map(|r| {
            let mut m = serde_json::Map::new();
            for (key, value) in CSV_HEADER.iter().zip([
                r.s,
                r.alpha,
                r.omega0_star,
                r.e0_ideal,
                r.e0_eff,
                r.fidelity_sb,
                r.fidelity_reduced,
                r.purity,
                r.entropy,
                r.trace_distance,
            ]) {
                m.insert(key.to_string(), rounded(value));
            }
            m.insert("regime".into(), r.regime.clone().into());
            m.insert("flags".into(), r.flags.clone().into());
            serde_json::Value::Object(m)
        })
        .collect();
    serde_json::Value::Array(rows)
}

pub fn write_json(records: &[SweepRecord], path: &Path) -> Result<()> {
    create_parent(path)?;
    let mut text = serde_json::to_string_pretty(&records_to_json(records))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Settings for the single-string flow curves `Δ/ω0` versus `ω0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryConfig {
    pub omega_start: f64,
    pub omega_end: f64,
    pub delta: f64,
    pub exponents: Vec<f64>,
    pub steps: usize,
    pub eta: f64,
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        TrajectoryConfig {
            omega_start: 30.0,
            omega_end: 0.1,
            delta: 1.0,
            exponents: vec![0.0, 0.5, 1.0, 1.5],
            steps: DEFAULT_ODE_STEPS,
            eta: DEFAULT_ETA,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub c: f64,
    pub omega0: f64,
    pub delta: f64,
    pub ratio: f64,
    /// `η Δ ≤ ω0`, the scaling condition.
    pub valid: bool,
}

/// Integrated flow of a single string with combined coupling `c` for each
/// requested exponent, realized as `Δ·X` on one qubit with `α = c`.
pub fn flow_trajectories(cfg: &TrajectoryConfig) -> Result<Vec<TrajectoryRow>> {
    let h = single_spin_boson(cfg.delta)?;
    let mut rows = Vec::new();
    for &c in &cfg.exponents {
        let bath = BathSpec::uniform(cfg.omega_start, 1, c)?;
        let flow = flow_ode(&h, &bath, cfg.omega_end, cfg.steps)?;
        let x = h.terms().next().map(|(s, _)| *s).expect("single term");
        for sample in &flow.trajectory {
            let delta = sample.operator.coefficient(&x);
            rows.push(TrajectoryRow {
                c,
                omega0: sample.omega0,
                delta,
                ratio: delta / sample.omega0,
                valid: cfg.eta * delta <= sample.omega0,
            });
        }
    }
    Ok(rows)
}

pub fn write_trajectories_csv(rows: &[TrajectoryRow], path: &Path) -> Result<()> {
    create_parent(path)?;
    let mut out = csv::Writer::from_path(path)?;
    out.write_record(["c", "omega0", "delta", "ratio", "valid"])?;
    for r in rows {
        out.write_record([
            g12(r.c),
            g12(r.omega0),
            g12(r.delta),
            g12(r.ratio),
            r.valid.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_trajectories_json(rows: &[TrajectoryRow], path: &Path) -> Result<()> {
    create_parent(path)?;
    let mut text = serde_json::to_string_pretty(rows)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Named presets for the standard plots, run on the seeded benchmark
/// instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Single-string flow curves.
    S1,
    /// Fidelities and purity over the default coupling grid at `s = 0.8`.
    Two,
    /// Entropy over the default grid at `s = 0.8`.
    S2,
    /// Purity and entropy up to `α = 2` at `s = 0.8`.
    S3,
    /// Alternate instance at `s = 0.7` up to `α = 2`.
    S4,
}

impl std::str::FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s1" => Ok(Figure::S1),
            "2" => Ok(Figure::Two),
            "s2" => Ok(Figure::S2),
            "s3" => Ok(Figure::S3),
            "s4" => Ok(Figure::S4),
            other => Err(Error::Config(format!(
                "unknown figure '{other}', expected one of s1, 2, s2, s3, s4"
            ))),
        }
    }
}

/// Default coupling grid extended to strong coupling.
pub fn extended_alpha_grid() -> GridSpec {
    GridSpec::Range {
        start: 1e-3,
        stop: 2.0,
        count: 48,
        spacing: Spacing::Log,
        include_zero: true,
    }
}

impl Figure {
    /// Sweep configuration for the preset; `None` for the trajectory-only figure.
    pub fn sweep_config(self) -> Option<SweepConfig> {
        match self {
            Figure::S1 => None,
            Figure::Two | Figure::S2 => Some(SweepConfig::benchmark(
                BENCHMARK_SEED,
                vec![0.8],
                default_alpha_grid(),
            )),
            Figure::S3 => Some(SweepConfig::benchmark(
                BENCHMARK_SEED,
                vec![0.8],
                extended_alpha_grid(),
            )),
            Figure::S4 => Some(SweepConfig::benchmark(
                ALTERNATE_SEED,
                vec![0.7],
                extended_alpha_grid(),
            )),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Figure::S1 => "s1",
            Figure::Two => "2",
            Figure::S2 => "s2",
            Figure::S3 => "s3",
            Figure::S4 => "s4",
        }
    }
}

/// Counts of flagged points, keyed by flag (errors collapsed to `error`).
pub fn flag_summary(records: &[SweepRecord]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for r in records {
        for f in &r.flags {
            let key = if f.starts_with("error") { "error" } else { f.as_str() };
            *out.entry(key.to_string()).or_insert(0) += 1;
        }
    }
    out
}
