//! Signed Pauli strings under Clifford conjugation, and the symplectic
//! reduction that turns a commuting stabilizer list into single-qubit `Z`s.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gates::{clifford_generator, pauli, pauli_string, CliffordName, GateOp, PauliName};
use crate::state::Matrix;

/// One Clifford gate of a synthesized circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CliffordStep {
    H(usize),
    S(usize),
    /// `(control, target)`
    Cnot(usize, usize),
    X(usize),
}

impl CliffordStep {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            CliffordStep::H(q) | CliffordStep::S(q) | CliffordStep::X(q) => vec![q],
            CliffordStep::Cnot(c, t) => vec![c, t],
        }
    }

    pub fn gate(&self) -> GateOp {
        let base = match self {
            CliffordStep::H(_) => clifford_generator(CliffordName::H),
            CliffordStep::S(_) => clifford_generator(CliffordName::Sph),
            CliffordStep::Cnot(..) => clifford_generator(CliffordName::Cnot),
            CliffordStep::X(_) => pauli(PauliName::X),
        };
        base.on(&self.qubits()).expect("distinct qubits")
    }
}

/// A Hermitian Pauli string `±P_0 ⊗ … ⊗ P_{n−1}` in `(x, z)` bit form with
/// `(1, 1)` standing for `Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    x: Vec<bool>,
    z: Vec<bool>,
    negative: bool,
}

impl PauliString {
    pub fn from_names(names: &[PauliName]) -> Self {
        let x = names
            .iter()
            .map(|p| matches!(p, PauliName::X | PauliName::Y))
            .collect();
        let z = names
            .iter()
            .map(|p| matches!(p, PauliName::Z | PauliName::Y))
            .collect();
        Self {
            x,
            z,
            negative: false,
        }
    }

    /// Single-qubit `Z` on `qubit` of an `n`-qubit register.
    pub fn z_on(n: usize, qubit: usize) -> Self {
        let mut z = vec![false; n];
        z[qubit] = true;
        Self {
            x: vec![false; n],
            z,
            negative: false,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn names(&self) -> Vec<PauliName> {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(&x, &z)| match (x, z) {
                (false, false) => PauliName::I,
                (true, false) => PauliName::X,
                (true, true) => PauliName::Y,
                (false, true) => PauliName::Z,
            })
            .collect()
    }

    pub fn to_matrix(&self) -> Matrix {
        let m = pauli_string(&self.names());
        if self.negative {
            -m
        } else {
            m
        }
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = (0..self.n_qubits())
            .filter(|&q| (self.x[q] & other.z[q]) ^ (self.z[q] & other.x[q]))
            .count();
        anti % 2 == 0
    }

    /// Whether every factor is `I` or `Z`.
    pub fn is_diagonal(&self) -> bool {
        self.x.iter().all(|b| !b)
    }

    /// Replaces `P` with `U P U†` for the gate `step`.
    pub fn conjugate(&mut self, step: CliffordStep) {
        match step {
            CliffordStep::H(q) => {
                self.negative ^= self.x[q] & self.z[q];
                std::mem::swap(&mut self.x[q], &mut self.z[q]);
            }
            CliffordStep::S(q) => {
                self.negative ^= self.x[q] & self.z[q];
                self.z[q] ^= self.x[q];
            }
            CliffordStep::Cnot(c, t) => {
                self.negative ^= self.x[c] & self.z[t] & !(self.x[t] ^ self.z[c]);
                self.x[t] ^= self.x[c];
                self.z[c] ^= self.z[t];
            }
            CliffordStep::X(q) => {
                self.negative ^= self.z[q];
            }
        }
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let names = body
            .chars()
            .map(|c| c.to_string().parse::<PauliName>())
            .collect::<Result<Vec<_>>>()?;
        let mut p = Self::from_names(&names);
        p.negative = negative;
        Ok(p)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.negative { '-' } else { '+' })?;
        for p in self.names() {
            write!(f, "{p:?}")?;
        }
        Ok(())
    }
}

struct Reducer {
    rows: Vec<PauliString>,
    steps: Vec<CliffordStep>,
}

impl Reducer {
    fn push(&mut self, step: CliffordStep) {
        for row in &mut self.rows {
            row.conjugate(step);
        }
        self.steps.push(step);
    }
}

/// Finds a Clifford circuit `U` with `U S_r U† = +Z_{targets[r]}` for each
/// stabilizer row, where `targets` is a permutation of `syndrome_qubits`.
///
/// Rows are reduced one at a time by Gaussian elimination: local gates turn
/// the row into `Z`s on unassigned qubits, CNOTs fold those onto a pivot and
/// clear leftover `Z`s on already assigned pivots, and an `X` on the pivot
/// fixes the sign. Pivots prefer `syndrome_qubits` in the given order; if a
/// non-syndrome qubit had to be used it is swapped out at the end.
pub fn reduce_to_single_z(
    stabilizers: &[PauliString],
    syndrome_qubits: &[usize],
) -> Result<(Vec<CliffordStep>, Vec<usize>)> {
    let n = stabilizers
        .first()
        .map(PauliString::n_qubits)
        .ok_or_else(|| Error::InvalidConfig("no stabilizers".into()))?;
    if syndrome_qubits.len() != stabilizers.len() {
        return Err(Error::InvalidConfig(
            "need one syndrome qubit per stabilizer".into(),
        ));
    }
    for (i, a) in stabilizers.iter().enumerate() {
        if stabilizers[i + 1..].iter().any(|b| !a.commutes_with(b)) {
            return Err(Error::InvalidConfig("stabilizers do not commute".into()));
        }
    }

    let mut red = Reducer {
        rows: stabilizers.to_vec(),
        steps: Vec::new(),
    };
    let mut pivots: Vec<usize> = Vec::new();

    for r in 0..stabilizers.len() {
        let free: Vec<usize> = (0..n).filter(|q| !pivots.contains(q)).collect();
        for &q in &free {
            let row = &red.rows[r];
            match (row.x[q], row.z[q]) {
                (true, true) => {
                    // S† = S³ takes Y to X
                    for _ in 0..3 {
                        red.push(CliffordStep::S(q));
                    }
                    red.push(CliffordStep::H(q));
                }
                (true, false) => red.push(CliffordStep::H(q)),
                _ => {}
            }
        }
        let support: Vec<usize> = free.iter().copied().filter(|&q| red.rows[r].z[q]).collect();
        let pivot = syndrome_qubits
            .iter()
            .copied()
            .find(|q| support.contains(q))
            .or_else(|| support.first().copied())
            .ok_or_else(|| Error::InvalidConfig("stabilizers are not independent".into()))?;
        for &u in support.iter().filter(|&&u| u != pivot) {
            red.push(CliffordStep::Cnot(u, pivot));
        }
        for &q in &pivots {
            if red.rows[r].z[q] {
                red.push(CliffordStep::Cnot(q, pivot));
            }
        }
        if red.rows[r].negative {
            red.push(CliffordStep::X(pivot));
        }
        debug_assert_eq!(red.rows[r], PauliString::z_on(n, pivot));
        pivots.push(pivot);
    }

    // move any stray pivot onto the unused syndrome qubit
    for i in 0..pivots.len() {
        if !syndrome_qubits.contains(&pivots[i]) {
            let spare = syndrome_qubits
                .iter()
                .copied()
                .find(|q| !pivots.contains(q))
                .expect("one spare syndrome qubit per stray pivot");
            let a = pivots[i];
            red.push(CliffordStep::Cnot(a, spare));
            red.push(CliffordStep::Cnot(spare, a));
            red.push(CliffordStep::Cnot(a, spare));
            pivots[i] = spare;
        }
    }

    for (row, &p) in red.rows.iter().zip(&pivots) {
        if *row != PauliString::z_on(n, p) {
            return Err(Error::InvalidConfig(format!("reduction left {row}")));
        }
    }
    Ok((red.steps, pivots))
}
