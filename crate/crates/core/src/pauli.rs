// Copyright 2026 The Bathflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Pauli-string algebra.
//!
//! A [`PauliString`] is stored as a pair of bit masks (X-part, Z-part) over the
//! computational-basis index, with qubit 0 the leftmost tensor factor and
//! therefore the most significant index bit. Single-qubit conventions:
//!
//! ```text
//! σ_X = [[0, 1], [1, 0]]   σ_Y = [[0, -i], [i, 0]]   σ_Z = [[1, 0], [0, -1]]
//! ```
//!
//! so that `Y = i·X·Z` and a string acts on a basis state as
//! `P|b⟩ = i^{|x∧z|} (-1)^{z·b} |b ⊕ x⟩`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::textfmt::g12;

/// Largest qubit count accepted by the dense conversions.
pub const DEFAULT_MAX_QUBITS: usize = 14;

/// Coefficients with magnitude below this are dropped from a [`PauliOperator`].
pub const PRUNE_TOLERANCE: f64 = 1e-14;

const MAX_STRING_QUBITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliAxis {
    I,
    X,
    Y,
    Z,
}

impl PauliAxis {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliAxis::I,
            (true, false) => PauliAxis::X,
            (true, true) => PauliAxis::Y,
            (false, true) => PauliAxis::Z,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            PauliAxis::I => (false, false),
            PauliAxis::X => (true, false),
            PauliAxis::Y => (true, true),
            PauliAxis::Z => (false, true),
        }
    }

    /// X and Y anticommute with σ_Z; I and Z commute.
    pub fn anticommutes_with_z(self) -> bool {
        matches!(self, PauliAxis::X | PauliAxis::Y)
    }

    pub fn letter(self) -> char {
        match self {
            PauliAxis::I => 'I',
            PauliAxis::X => 'X',
            PauliAxis::Y => 'Y',
            PauliAxis::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliAxis::I),
            'X' => Some(PauliAxis::X),
            'Y' => Some(PauliAxis::Y),
            'Z' => Some(PauliAxis::Z),
            _ => None,
        }
    }

    fn rank(self) -> u8 {
        match self {
            PauliAxis::I => 0,
            PauliAxis::X => 1,
            PauliAxis::Y => 2,
            PauliAxis::Z => 3,
        }
    }
}

/// Tensor product of single-qubit Pauli matrices on `n` qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn new(axes: &[PauliAxis]) -> Result<Self> {
        let n = axes.len();
        check_string_len(n)?;
        let mut s = PauliString { n, x: 0, z: 0 };
        for (q, axis) in axes.iter().enumerate() {
            s.set(q, *axis);
        }
        Ok(s)
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_string_len(n)?;
        Ok(PauliString { n, x: 0, z: 0 })
    }

    /// `axis` on `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, axis: PauliAxis) -> Result<Self> {
        Self::from_sites(n, &[(qubit, axis)])
    }

    /// Builds a string from `(qubit, axis)` pairs; unlisted qubits are identity.
    pub fn from_sites(n: usize, sites: &[(usize, PauliAxis)]) -> Result<Self> {
        let mut s = Self::identity(n)?;
        for &(q, axis) in sites {
            if q >= n {
                return Err(Error::QubitIndex { index: q, n });
            }
            s.set(q, axis);
        }
        Ok(s)
    }

    /// Builds a string directly from index-bit masks (qubit `i` is bit `n-1-i`).
    pub fn from_masks(n: usize, x_mask: u64, z_mask: u64) -> Result<Self> {
        check_string_len(n)?;
        let full = full_mask(n);
        if x_mask & !full != 0 || z_mask & !full != 0 {
            return Err(Error::InvalidInstance(format!(
                "mask has bits beyond {n} qubits"
            )));
        }
        Ok(PauliString {
            n,
            x: x_mask,
            z: z_mask,
        })
    }

    fn set(&mut self, qubit: usize, axis: PauliAxis) {
        let bit = 1u64 << (self.n - 1 - qubit);
        let (xb, zb) = axis.bits();
        self.x = if xb { self.x | bit } else { self.x & !bit };
        self.z = if zb { self.z | bit } else { self.z & !bit };
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// X-part as an index-bit mask.
    pub fn x_mask(&self) -> u64 {
        self.x
    }

    /// Z-part as an index-bit mask.
    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn axis(&self, qubit: usize) -> PauliAxis {
        assert!(qubit < self.n, "qubit {qubit} out of range for {} qubits", self.n);
        let bit = 1u64 << (self.n - 1 - qubit);
        PauliAxis::from_bits(self.x & bit != 0, self.z & bit != 0)
    }

    pub fn axes(&self) -> impl Iterator<Item = PauliAxis> + '_ {
        (0..self.n).map(move |q| self.axis(q))
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Diagonal in the computational basis (only I and Z factors).
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    /// Qubits whose factor fails to commute with σ_Z, in ascending order.
    pub fn anticommuting_support(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&q| self.x & (1u64 << (self.n - 1 - q)) != 0)
            .collect()
    }

    /// Number of Y factors; `P = i^{ny} X^x Z^z`.
    pub(crate) fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }
}

fn check_string_len(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInstance("Pauli string needs at least one qubit".into()));
    }
    if n > MAX_STRING_QUBITS {
        return Err(Error::DimensionOverflow {
            n,
            max: MAX_STRING_QUBITS,
        });
    }
    Ok(())
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// `i^k` for k taken mod 4.
pub(crate) fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            self.axes()
                .zip(other.axes())
                .map(|(a, b)| a.rank().cmp(&b.rank()))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for axis in self.axes() {
            write!(f, "{}", axis.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let axes = s
            .trim()
            .char_indices()
            .map(|(pos, c)| {
                PauliAxis::from_letter(c).ok_or_else(|| Error::Parse {
                    pos,
                    msg: format!("expected one of I, X, Y, Z, found '{c}'"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PauliString::new(&axes)
    }
}

/// Real linear combination of Pauli strings on a fixed number of qubits.
///
/// Real coefficients make the represented operator Hermitian. The same type
/// holds density matrices in Pauli form, where the coefficient of the all-I
/// string is `2^{-n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliOperator {
    n: usize,
    terms: BTreeMap<PauliString, f64>,
}

impl PauliOperator {
    /// The zero operator on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        check_string_len(n)?;
        Ok(PauliOperator {
            n,
            terms: BTreeMap::new(),
        })
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (PauliString, f64)>) -> Result<Self> {
        let mut op = Self::zero(n)?;
        for (s, c) in terms {
            op.add_term(s, c)?;
        }
        Ok(op)
    }

    /// Adds `coefficient` to the term `s`, pruning the result if it cancels.
    pub fn add_term(&mut self, s: PauliString, coefficient: f64) -> Result<()> {
        if s.num_qubits() != self.n {
            return Err(Error::QubitMismatch {
                expected: self.n,
                found: s.num_qubits(),
            });
        }
        let entry = self.terms.entry(s).or_insert(0.0);
        *entry += coefficient;
        if entry.abs() < PRUNE_TOLERANCE {
            self.terms.remove(&s);
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `s`, zero when absent.
    pub fn coefficient(&self, s: &PauliString) -> f64 {
        self.terms.get(s).copied().unwrap_or(0.0)
    }

    /// Terms in canonical string order.
    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, f64)> {
        self.terms.iter().map(|(s, c)| (s, *c))
    }

    /// Applies `f(string, coefficient)` to every term and prunes the result.
    pub fn map_coefficients(&self, mut f: impl FnMut(&PauliString, f64) -> f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(s, c)| (*s, f(s, *c)))
            .filter(|(_, c)| c.abs() >= PRUNE_TOLERANCE)
            .collect();
        PauliOperator { n: self.n, terms }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map_coefficients(|_, c| c * factor)
    }

    pub fn plus(&self, other: &PauliOperator) -> Result<Self> {
        if other.n != self.n {
            return Err(Error::QubitMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut out = self.clone();
        for (s, c) in other.terms() {
            out.add_term(*s, c)?;
        }
        Ok(out)
    }

    /// Σ_s |Δ_s|, an upper bound on the spectral norm.
    ///
    /// This is the norm used by the stopping-frequency criterion.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Largest number of non-identity factors over all terms.
    pub fn locality(&self) -> usize {
        self.terms.keys().map(PauliString::weight).max().unwrap_or(0)
    }

    /// True when every term is diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(PauliString::is_diagonal)
    }

    pub fn to_dense(&self) -> Result<DenseOperator> {
        self.to_dense_with_limit(DEFAULT_MAX_QUBITS)
    }

    /// Dense `2^n × 2^n` matrix Σ Δ_s P_s.
    pub fn to_dense_with_limit(&self, max_qubits: usize) -> Result<DenseOperator> {
        if self.n > max_qubits {
            return Err(Error::DimensionOverflow {
                n: self.n,
                max: max_qubits,
            });
        }
        let dim = 1usize << self.n;
        let mut m = Array2::<Complex64>::zeros((dim, dim));
        for (s, c) in self.terms() {
            let x = s.x_mask() as usize;
            let z = s.z_mask() as usize;
            let phase = i_pow(s.y_count()) * c;
            for col in 0..dim {
                let sign = if (z & col).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                m[[col ^ x, col]] += phase * sign;
            }
        }
        Ok(DenseOperator { n: self.n, matrix: m })
    }

    /// Hilbert–Schmidt projection Δ_s = 2^{-n} Tr[A P_s] of a Hermitian matrix.
    pub fn from_dense(a: &DenseOperator) -> Result<Self> {
        let n = a.n;
        let dim = a.dim();
        let scale = a.max_abs().max(1.0);
        let deviation = a.hermitian_deviation();
        if deviation > 1e-12 * scale {
            return Err(Error::NotHermitian { deviation });
        }
        let norm = 1.0 / dim as f64;
        let mut op = Self::zero(n)?;
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        for x in 0..dim {
            // v[b] = A[b, b^x]; the Walsh–Hadamard transform over b gives
            // Σ_b (-1)^{z·b} A[b, b^x] for every z at once.
            for (b, slot) in v.iter_mut().enumerate() {
                *slot = a.matrix[[b, b ^ x]];
            }
            walsh_hadamard(&mut v);
            for (z, w) in v.iter().enumerate() {
                let y = ((x & z) as u64).count_ones();
                let c = (i_pow(y) * w).re * norm;
                if c.abs() >= PRUNE_TOLERANCE {
                    let s = PauliString::from_masks(n, x as u64, z as u64)?;
                    op.terms.insert(s, c);
                }
            }
        }
        Ok(op)
    }
}

fn walsh_hadamard(v: &mut [Complex64]) {
    let len = v.len();
    let mut h = 1;
    while h < len {
        for start in (0..len).step_by(2 * h) {
            for i in start..start + h {
                let a = v[i];
                let b = v[i + h];
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (s, c)) in self.terms().enumerate() {
            match (k, c < 0.0) {
                (0, false) => write!(f, "{}*{}", g12(c), s)?,
                (0, true) => write!(f, "-{}*{}", g12(-c), s)?,
                (_, false) => write!(f, " + {}*{}", g12(c), s)?,
                (_, true) => write!(f, " - {}*{}", g12(-c), s)?,
            }
        }
        Ok(())
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Parses `"0.5*XXI + 0.25*ZZI"`. Whitespace is ignored, terms may be joined
    /// by `+` or `-`, and a bare string like `XX` has coefficient 1.
    fn from_str(text: &str) -> Result<Self> {
        TermParser::new(text).parse()
    }
}

struct TermParser {
    chars: Vec<(usize, char)>,
    at: usize,
    end: usize,
}

impl TermParser {
    fn new(text: &str) -> Self {
        TermParser {
            chars: text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            at: 0,
            end: text.len(),
        }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|(_, c)| *c)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn parse(mut self) -> Result<PauliOperator> {
        if self.chars.is_empty() {
            return self.error("empty operator");
        }
        let mut terms: Vec<(PauliString, f64)> = Vec::new();
        let mut first = true;
        while self.peek().is_some() {
            let mut sign = 1.0;
            match self.peek() {
                Some('+') => self.at += 1,
                Some('-') => {
                    sign = -1.0;
                    self.at += 1;
                }
                _ if !first => return self.error("expected '+' or '-' between terms"),
                _ => {}
            }
            first = false;
            let start = self.pos();
            let (coefficient, s) = self.term()?;
            if let Some((prev, _)) = terms.first() {
                if prev.num_qubits() != s.num_qubits() {
                    return Err(Error::Parse {
                        pos: start,
                        msg: format!(
                            "term has {} qubits, earlier terms have {}",
                            s.num_qubits(),
                            prev.num_qubits()
                        ),
                    });
                }
            }
            terms.push((s, sign * coefficient));
        }
        let n = terms[0].0.num_qubits();
        PauliOperator::from_terms(n, terms)
    }

    fn term(&mut self) -> Result<(f64, PauliString)> {
        let coefficient = if matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.') {
            let value = self.number()?;
            if self.peek() != Some('*') {
                return self.error("expected '*' after coefficient");
            }
            self.at += 1;
            value
        } else {
            1.0
        };
        let mut axes = Vec::new();
        while let Some(axis) = self.peek().and_then(PauliAxis::from_letter) {
            axes.push(axis);
            self.at += 1;
        }
        if axes.is_empty() {
            return match self.peek() {
                Some(c) => self.error(format!("expected Pauli letters, found '{c}'")),
                None => self.error("expected Pauli letters, found end of input"),
            };
        }
        if let Some(c) = self.peek() {
            if c != '+' && c != '-' {
                return self.error(format!("unexpected '{c}'"));
            }
        }
        let pos = self.pos();
        let s = PauliString::new(&axes).map_err(|e| Error::Parse {
            pos,
            msg: e.to_string(),
        })?;
        Ok((coefficient, s))
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.at;
        let mut text = String::new();
        let push_digits = |p: &mut Self, text: &mut String| {
            while let Some(c) = p.peek().filter(char::is_ascii_digit) {
                text.push(c);
                p.at += 1;
            }
        };
        push_digits(self, &mut text);
        if self.peek() == Some('.') {
            text.push('.');
            self.at += 1;
            push_digits(self, &mut text);
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            text.push('e');
            self.at += 1;
            if let Some(c @ ('+' | '-')) = self.peek() {
                text.push(c);
                self.at += 1;
            }
            push_digits(self, &mut text);
        }
        text.parse::<f64>().map_err(|_| {
            self.at = start;
            Error::Parse {
                pos: self.pos(),
                msg: format!("invalid coefficient '{text}'"),
            }
        })
    }
}

/// Dense complex `2^n × 2^n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    n: usize,
    matrix: Array2<Complex64>,
}

impl DenseOperator {
    pub fn from_matrix(matrix: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = matrix.dim();
        if rows != cols {
            return Err(Error::InvalidInstance(format!("matrix is {rows}x{cols}, not square")));
        }
        if rows < 2 || !rows.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(rows));
        }
        Ok(DenseOperator {
            n: rows.trailing_zeros() as usize,
            matrix,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Array2<Complex64> {
        self.matrix
    }

    /// max_ij |A_ij - conj(A_ji)|
    pub fn hermitian_deviation(&self) -> f64 {
        hermitian_deviation(&self.matrix)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub(crate) fn hermitian_deviation(m: &Array2<Complex64>) -> f64 {
    let dim = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in i..dim {
            worst = worst.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    worst
}
