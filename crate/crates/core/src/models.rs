// Copyright 2026 The Bathflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Benchmark Hamiltonians and reference states.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pauli::{PauliAxis, PauliOperator, PauliString, DEFAULT_MAX_QUBITS};

const MAX_GRAPH_ATTEMPTS: usize = 100_000;

/// Antiferromagnetic annealing instance: `n` qubits, coupled pairs (`c_ij = 1`)
/// and annealing parameter `s ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AfmInstance {
    n: usize,
    edges: Vec<(usize, usize)>,
    s: f64,
}

impl AfmInstance {
    /// Edges are unordered; they are stored as `(min, max)` in sorted order.
    pub fn new(n: usize, edges: &[(usize, usize)], s: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInstance("instance needs at least one qubit".into()));
        }
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::out_of_range("s", s, "0 <= s <= 1"));
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for &(i, j) in edges {
            if i == j {
                return Err(Error::InvalidInstance(format!("self-loop on qubit {i}")));
            }
            if i.max(j) >= n {
                return Err(Error::QubitIndex {
                    index: i.max(j),
                    n,
                });
            }
            normalized.push((i.min(j), i.max(j)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidInstance(format!(
                "edge {}-{} listed twice",
                w[0].0, w[0].1
            )));
        }
        Ok(AfmInstance {
            n,
            edges: normalized,
            s,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// Same couplings at another annealing parameter.
    pub fn with_s(&self, s: f64) -> Result<Self> {
        Self::new(self.n, &self.edges, s)
    }

    /// Edge list as `"i-j,k-l,…"`.
    pub fn edges_text(&self) -> String {
        format_edges(&self.edges)
    }
}

pub fn format_edges(edges: &[(usize, usize)]) -> String {
    edges
        .iter()
        .map(|(i, j)| format!("{i}-{j}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses `"0-1, 1-2"`; whitespace is ignored and an empty string has no edges.
pub fn parse_edges(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut edges = Vec::new();
    let mut offset = 0;
    for item in text.split(',') {
        let pos = offset;
        offset += item.len() + 1;
        let trimmed = item.trim();
        if trimmed.is_empty() {
            if text.trim().is_empty() {
                continue;
            }
            return Err(Error::Parse {
                pos,
                msg: "empty edge".into(),
            });
        }
        let parsed = trimmed
            .split_once('-')
            .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
        match parsed {
            Some(edge) => edges.push(edge),
            None => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("expected 'i-j', found '{trimmed}'"),
                })
            }
        }
    }
    Ok(edges)
}

/// `s Σ Z_i + s(1−s) Σ_{ij} c_ij Z_i Z_j + s Σ_{ij} c_ij X_i X_j`, one term per
/// coupled pair.
pub fn afm_hamiltonian(inst: &AfmInstance) -> Result<PauliOperator> {
    let n = inst.n;
    let s = inst.s;
    let mut h = PauliOperator::zero(n)?;
    for q in 0..n {
        h.add_term(PauliString::single(n, q, PauliAxis::Z)?, s)?;
    }
    for &(i, j) in &inst.edges {
        let zz = PauliString::from_sites(n, &[(i, PauliAxis::Z), (j, PauliAxis::Z)])?;
        let xx = PauliString::from_sites(n, &[(i, PauliAxis::X), (j, PauliAxis::X)])?;
        h.add_term(zz, s * (1.0 - s))?;
        h.add_term(xx, s)?;
    }
    Ok(h)
}

/// Seeded connected `degree`-regular simple graph on `n` vertices.
///
/// Drawn from the pairing model with rejection; the same seed always yields
/// the same edge list.
pub fn random_regular_graph(n: usize, degree: usize, seed: u64) -> Result<Vec<(usize, usize)>> {
    if degree == 0 || degree >= n || (n * degree) % 2 != 0 || (degree == 1 && n != 2) {
        return Err(Error::InvalidInstance(format!(
            "no connected {degree}-regular graph on {n} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(degree)).collect();
    'attempt: for _ in 0..MAX_GRAPH_ATTEMPTS {
        stubs.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(stubs.len() / 2);
        for pair in stubs.chunks(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || edges.contains(&(a, b)) {
                continue 'attempt;
            }
            edges.push((a, b));
        }
        if is_connected(n, &edges) {
            edges.sort_unstable();
            return Ok(edges);
        }
    }
    Err(Error::Numerical(format!(
        "no connected {degree}-regular graph found in {MAX_GRAPH_ATTEMPTS} attempts"
    )))
}

fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adjacency = vec![Vec::new(); n];
    for &(a, b) in edges {
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|v| v)
}

pub fn random_afm_instance(n: usize, degree: usize, seed: u64, s: f64) -> Result<AfmInstance> {
    AfmInstance::new(n, &random_regular_graph(n, degree, seed)?, s)
}

/// `(|0…0⟩ + |1…1⟩)/√2`
pub fn ghz_state(n: usize) -> Result<Vec<Complex64>> {
    if n == 0 || n > DEFAULT_MAX_QUBITS {
        return Err(Error::DimensionOverflow {
            n,
            max: DEFAULT_MAX_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut psi = vec![Complex64::new(0.0, 0.0); dim];
    psi[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    psi[dim - 1] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    Ok(psi)
}

/// Single qubit with tunneling `delta · X`.
pub fn single_spin_boson(delta: f64) -> Result<PauliOperator> {
    PauliOperator::from_terms(1, [(PauliString::single(1, 0, PauliAxis::X)?, delta)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> PauliString {
        text.parse().unwrap()
    }

    #[test]
    fn two_qubit_example() {
        let inst = AfmInstance::new(2, &[(1, 0)], 0.5).unwrap();
        let h = afm_hamiltonian(&inst).unwrap();
        let expected: PauliOperator = "0.5*ZI + 0.5*IZ + 0.25*ZZ + 0.5*XX".parse().unwrap();
        assert_eq!(h, expected);
    }

    #[test]
    fn annealing_endpoints() {
        let inst = AfmInstance::new(3, &[(0, 1), (1, 2)], 0.0).unwrap();
        assert!(afm_hamiltonian(&inst).unwrap().is_empty());
        let h = afm_hamiltonian(&inst.with_s(1.0).unwrap()).unwrap();
        assert_eq!(h.coefficient(&s("ZZI")), 0.0);
        assert_eq!(h.coefficient(&s("XXI")), 1.0);
        assert_eq!(h.len(), 5);
    }

    #[test]
    fn instance_validation() {
        assert!(AfmInstance::new(2, &[(0, 0)], 0.5).is_err());
        assert!(AfmInstance::new(2, &[(0, 2)], 0.5).is_err());
        assert!(AfmInstance::new(2, &[(0, 1)], 1.5).is_err());
        assert!(AfmInstance::new(3, &[(0, 1), (1, 0)], 0.5).is_err());
    }

    #[test]
    fn ring_is_a_single_cycle() {
        let edges = random_regular_graph(12, 2, 7).unwrap();
        assert_eq!(edges.len(), 12);
        let mut degree = [0; 12];
        for (a, b) in &edges {
            degree[*a] += 1;
            degree[*b] += 1;
        }
        assert!(degree.iter().all(|d| *d == 2));
        assert!(is_connected(12, &edges));
        assert_eq!(random_regular_graph(12, 2, 7).unwrap(), edges);
    }

    #[test]
    fn triangle() {
        assert_eq!(random_regular_graph(3, 2, 123).unwrap(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn infeasible_degrees() {
        assert!(random_regular_graph(5, 3, 0).is_err());
        assert!(random_regular_graph(4, 4, 0).is_err());
        assert!(random_regular_graph(4, 1, 0).is_err());
        assert!(random_regular_graph(4, 0, 0).is_err());
        assert!(random_regular_graph(8, 3, 0).is_ok());
    }

    #[test]
    fn ghz_amplitudes() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(ghz_state(1).unwrap(), vec![Complex64::new(h, 0.0); 2]);
        let bell = ghz_state(2).unwrap();
        assert_eq!(bell[0].re, h);
        assert_eq!(bell[3].re, h);
        assert_eq!(bell[1].norm() + bell[2].norm(), 0.0);
        for n in 1..=14 {
            let psi = ghz_state(n).unwrap();
            let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-15);
            assert_eq!(psi.iter().filter(|a| a.norm() > 0.0).count(), 2);
        }
    }

    #[test]
    fn spin_boson() {
        assert_eq!(single_spin_boson(1.0).unwrap(), "1*X".parse().unwrap());
    }

    #[test]
    fn edge_text() {
        let inst = AfmInstance::new(3, &parse_edges("2-1, 0-1").unwrap(), 0.5).unwrap();
        assert_eq!(inst.edges_text(), "0-1,1-2");
        assert!(parse_edges("").unwrap().is_empty());
        assert!(matches!(parse_edges("0-1,x"), Err(Error::Parse { pos: 4, .. })));
        assert!(parse_edges("0-1,,1-2").is_err());
    }
}
