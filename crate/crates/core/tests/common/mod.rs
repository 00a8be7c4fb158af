// Copyright 2026 The Bathflow Authors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use bathflow::{DensityMatrix, PauliOperator, PauliString};
use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_string(rng: &mut ChaCha8Rng, n: usize) -> PauliString {
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    PauliString::from_masks(n, rng.gen::<u64>() & mask, rng.gen::<u64>() & mask).unwrap()
}

/// Up to `max_terms` random strings with coefficients in [-1, 1].
pub fn random_operator(rng: &mut ChaCha8Rng, n: usize, max_terms: usize) -> PauliOperator {
    let count = rng.gen_range(1..=max_terms);
    let mut op = PauliOperator::zero(n).unwrap();
    for _ in 0..count {
        let s = random_string(rng, n);
        op.add_term(s, rng.gen_range(-1.0..1.0)).unwrap();
    }
    op
}

pub fn random_unit_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

/// `A A† / Tr` for a random complex `A` of random rank.
pub fn random_density(rng: &mut ChaCha8Rng, n: usize) -> DensityMatrix {
    let dim = 1 << n;
    let rank = rng.gen_range(1..=dim);
    let mut rho = Array2::<Complex64>::zeros((dim, dim));
    for _ in 0..rank {
        let v = random_unit_vector(rng, dim);
        let w: f64 = rng.gen_range(0.0..1.0);
        for a in 0..dim {
            for b in 0..dim {
                rho[[a, b]] += v[a] * v[b].conj() * w;
            }
        }
    }
    let trace: f64 = (0..dim).map(|a| rho[[a, a]].re).sum();
    rho.mapv_inplace(|z| z / trace);
    // Exact Hermiticity.
    let sym = (&rho + &rho.t().mapv(|z| z.conj())) * Complex64::new(0.5, 0.0);
    DensityMatrix::from_matrix(sym).unwrap()
}

pub fn max_abs_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn dagger(a: &Array2<Complex64>) -> Array2<Complex64> {
    a.t().mapv(|z| z.conj())
}

/// Eigenvalues of a density matrix through its Pauli form.
pub fn density_spectrum(rho: &DensityMatrix) -> Vec<f64> {
    bathflow::spectrum(&rho.to_pauli().unwrap()).unwrap()
}

pub fn expectation(h: &Array2<Complex64>, psi: &[Complex64]) -> f64 {
    let mut total = Complex64::new(0.0, 0.0);
    for a in 0..psi.len() {
        for b in 0..psi.len() {
            total += psi[a].conj() * h[[a, b]] * psi[b];
        }
    }
    total.re
}
