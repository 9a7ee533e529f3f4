//! Pauli operators, Clifford generators and axis-angle rotations.
//!
//! Rotations follow `R(n̂, θ) = exp(−iθ n̂·σ⃗ / 2)`; with that convention the
//! quarter turns `±X = exp(∓iπσ_x/4)` are `rotation(x̂, ±π/2)`. Global phases
//! are kept, never quotiented out.

use std::collections::VecDeque;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{kron, max_abs, n_qubits_of, sigma_x, sigma_y, sigma_z, Matrix, ONE, ZERO};

pub const UNITARY_TOL: f64 = 1e-10;
const AXIS_TOL: f64 = 1e-10;
const PAULI_MATCH_TOL: f64 = 1e-9;

/// A unitary bound to an ordered list of target qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    matrix: Matrix,
    targets: Vec<usize>,
    duration: f64,
    label: String,
}

impl GateOp {
    pub fn new(matrix: Matrix, targets: Vec<usize>, duration: f64) -> Result<Self> {
        Self::labelled(matrix, targets, duration, "U")
    }

    fn labelled(
        matrix: Matrix,
        targets: Vec<usize>,
        duration: f64,
        label: impl Into<String>,
    ) -> Result<Self> {
        let k = targets.len();
        if !matrix.is_square() || matrix.nrows() != 1 << k {
            return Err(Error::DimensionMismatch(matrix.nrows(), 1 << k));
        }
        check_distinct(&targets)?;
        let dev = unitarity_error(&matrix);
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        if duration < 0.0 {
            return Err(Error::NegativeTime(duration));
        }
        Ok(Self {
            matrix,
            targets,
            duration,
            label: label.into(),
        })
    }

    /// Same unitary, new targets.
    pub fn on(&self, targets: &[usize]) -> Result<Self> {
        if targets.len() != self.targets.len() {
            return Err(Error::DimensionMismatch(targets.len(), self.targets.len()));
        }
        check_distinct(targets)?;
        Ok(Self {
            targets: targets.to_vec(),
            ..self.clone()
        })
    }

    pub fn with_duration(mut self, duration: f64) -> Result<Self> {
        if duration < 0.0 {
            return Err(Error::NegativeTime(duration));
        }
        self.duration = duration;
        Ok(self)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_qubits(&self) -> usize {
        self.targets.len()
    }

    /// `self` followed by `next`, both on the same targets.
    pub fn then(&self, next: &GateOp) -> Result<GateOp> {
        if self.targets != next.targets {
            return Err(Error::InvalidTargets {
                indices: next.targets.clone(),
                n_qubits: self.n_qubits(),
            });
        }
        let matrix = &next.matrix * &self.matrix;
        Self::labelled(
            matrix,
            self.targets.clone(),
            self.duration + next.duration,
            format!("{}·{}", next.label, self.label),
        )
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.label, self.targets)
    }
}

fn check_distinct(targets: &[usize]) -> Result<()> {
    for (i, t) in targets.iter().enumerate() {
        if targets[i + 1..].contains(t) {
            return Err(Error::InvalidTargets {
                indices: targets.to_vec(),
                n_qubits: targets.len(),
            });
        }
    }
    Ok(())
}

pub(crate) fn unitarity_error(m: &Matrix) -> f64 {
    let n = m.nrows();
    max_abs(&(m * m.adjoint() - Matrix::identity(n, n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliName {
    I,
    X,
    Y,
    Z,
}

impl PauliName {
    pub const ALL: [PauliName; 4] = [PauliName::I, PauliName::X, PauliName::Y, PauliName::Z];

    pub fn matrix(self) -> Matrix {
        match self {
            PauliName::I => Matrix::identity(2, 2),
            PauliName::X => sigma_x(),
            PauliName::Y => sigma_y(),
            PauliName::Z => sigma_z(),
        }
    }
}

impl FromStr for PauliName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(PauliName::I),
            "X" => Ok(PauliName::X),
            "Y" => Ok(PauliName::Y),
            "Z" => Ok(PauliName::Z),
            other => Err(Error::UnknownGate(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CliffordName {
    H,
    Sph,
    Cnot,
}

impl FromStr for CliffordName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H" => Ok(CliffordName::H),
            "S_ph" | "S" => Ok(CliffordName::Sph),
            "CNOT" => Ok(CliffordName::Cnot),
            other => Err(Error::UnknownGate(other.to_string())),
        }
    }
}

pub fn pauli(name: PauliName) -> GateOp {
    let label = format!("{name:?}");
    GateOp::labelled(name.matrix(), vec![0], 0.0, label).expect("Pauli matrices are unitary")
}

pub fn hadamard() -> Matrix {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    Matrix::from_row_slice(2, 2, &[ONE * r, ONE * r, ONE * r, -ONE * r])
}

pub fn phase_s() -> Matrix {
    Matrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, Complex64::i()])
}

pub fn cnot() -> Matrix {
    let mut m = Matrix::zeros(4, 4);
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    m[(2, 3)] = ONE;
    m[(3, 2)] = ONE;
    m
}

/// H, S_ph on qubit 0, or CNOT with control 0 and target 1.
pub fn clifford_generator(name: CliffordName) -> GateOp {
    let (matrix, targets, label) = match name {
        CliffordName::H => (hadamard(), vec![0], "H"),
        CliffordName::Sph => (phase_s(), vec![0], "S"),
        CliffordName::Cnot => (cnot(), vec![0, 1], "CNOT"),
    };
    GateOp::labelled(matrix, targets, 0.0, label).expect("generators are unitary")
}

/// `exp(−i·angle·(n̂·σ⃗)/2)` on qubit 0.
pub fn rotation(axis: [f64; 3], angle: f64) -> Result<GateOp> {
    let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm.is_nan() || (norm - 1.0).abs() > AXIS_TOL {
        return Err(Error::NonUnitAxis(norm));
    }
    let generator = sigma_x() * Complex64::from(axis[0])
        + sigma_y() * Complex64::from(axis[1])
        + sigma_z() * Complex64::from(axis[2]);
    let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    // (n̂·σ⃗)² = 𝟙, so the exponential is cos·𝟙 − i sin·(n̂·σ⃗)
    let matrix = Matrix::identity(2, 2) * Complex64::from(c) - generator * Complex64::new(0.0, s);
    GateOp::labelled(
        matrix,
        vec![0],
        0.0,
        format!("R([{:.3},{:.3},{:.3}],{:.4})", axis[0], axis[1], axis[2], angle),
    )
}

/// `Z_α = exp(−iασ_z/2) = diag(e^{−iα/2}, e^{iα/2})`.
pub fn z_alpha(alpha: f64) -> GateOp {
    let m = Matrix::from_row_slice(
        2,
        2,
        &[
            Complex64::from_polar(1.0, -alpha / 2.0),
            ZERO,
            ZERO,
            Complex64::from_polar(1.0, alpha / 2.0),
        ],
    );
    GateOp::labelled(m, vec![0], 0.0, format!("Z({alpha:.4})")).expect("diagonal phases")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuarterAxis {
    X,
    Y,
}

/// The `±X` and `±Y` pulses: `exp(∓iπσ/4)`, i.e. a `±π/2` rotation.
pub fn quarter_turn(axis: QuarterAxis, positive: bool) -> GateOp {
    let dir = match axis {
        QuarterAxis::X => [1.0, 0.0, 0.0],
        QuarterAxis::Y => [0.0, 1.0, 0.0],
    };
    let angle = if positive { FRAC_PI_2 } else { -FRAC_PI_2 };
    let sign = if positive { '+' } else { '-' };
    let mut g = rotation(dir, angle).expect("unit axis");
    g.label = format!("{sign}{axis:?}");
    g
}

/// Tensor product of single-qubit Paulis, qubit 0 first.
pub fn pauli_string(names: &[PauliName]) -> Matrix {
    names
        .iter()
        .map(|p| p.matrix())
        .reduce(|acc, m| kron(&acc, &m))
        .unwrap_or_else(|| Matrix::identity(1, 1))
}

/// Whether `U P U†` is a Pauli string times a phase in {±1, ±i} for every
/// Pauli string `P` on the gate's qubits.
pub fn conjugates_pauli_group(gate: &GateOp) -> bool {
    let u = gate.matrix();
    let Some(k) = n_qubits_of(u.nrows()) else {
        return false;
    };
    let dim = u.nrows();
    let u_dag = u.adjoint();
    (0..1usize << (2 * k)).all(|code| {
        let p = pauli_string(&pauli_word(code, k));
        let image = u * p * &u_dag;
        matches_scaled_pauli(&image, k, dim)
    })
}

/// Decodes `code` as `k` base-4 digits, qubit 0 first (I, X, Y, Z).
fn pauli_word(code: usize, k: usize) -> Vec<PauliName> {
    (0..k)
        .map(|q| PauliName::ALL[(code >> (2 * (k - 1 - q))) & 3])
        .collect()
}

fn matches_scaled_pauli(m: &Matrix, k: usize, dim: usize) -> bool {
    // A Pauli string with X-pattern x maps |0…0⟩ to |x⟩; locate it from column 0.
    let Some(x_pattern) = (0..dim).find(|&r| m[(r, 0)].norm() > PAULI_MATCH_TOL) else {
        return false;
    };
    let phases = [ONE, -ONE, Complex64::i(), -Complex64::i()];
    (0..1usize << k).any(|z_pattern| {
        let word: Vec<PauliName> = (0..k)
            .map(|q| {
                let bit = 1 << (k - 1 - q);
                match (x_pattern & bit != 0, z_pattern & bit != 0) {
                    (false, false) => PauliName::I,
                    (true, false) => PauliName::X,
                    (true, true) => PauliName::Y,
                    (false, true) => PauliName::Z,
                }
            })
            .collect();
        let candidate = pauli_string(&word);
        phases
            .iter()
            .any(|&ph| max_abs(&(m - &candidate * ph)) <= PAULI_MATCH_TOL)
    })
}

/// Equality up to a global phase.
pub(crate) fn equal_up_to_phase(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    // pick the phase from the largest entry of b
    let (idx, _) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .expect("nonempty");
    if b[idx].norm() < tol {
        return max_abs(a) <= tol;
    }
    let phase = a[idx] / b[idx];
    (phase.norm() - 1.0).abs() <= tol && max_abs(&(a - b * phase)) <= tol
}

/// One element of the single-qubit Clifford group together with a word in
/// the generators `H` and `S_ph` that produces it (applied left to right).
#[derive(Debug, Clone)]
pub struct SingleQubitClifford {
    pub word: Vec<CliffordName>,
    pub matrix: Matrix,
}

impl SingleQubitClifford {
    pub fn gate(&self) -> GateOp {
        let label = if self.word.is_empty() {
            "1".to_string()
        } else {
            self.word.iter().map(|g| format!("{g:?}")).collect::<Vec<_>>().join("")
        };
        GateOp::labelled(self.matrix.clone(), vec![0], 0.0, label).expect("products of unitaries")
    }
}

/// The 24 single-qubit Cliffords modulo global phase, enumerated breadth-first
/// from the identity over {H, S_ph}. Order is deterministic; each entry holds
/// a shortest generating word.
pub fn single_qubit_clifford_group() -> Vec<SingleQubitClifford> {
    let h = hadamard();
    let s = phase_s();
    let mut found = vec![SingleQubitClifford {
        word: vec![],
        matrix: Matrix::identity(2, 2),
    }];
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        for (name, gen) in [(CliffordName::H, &h), (CliffordName::Sph, &s)] {
            let m = gen * &found[idx].matrix;
            if found.iter().any(|c| equal_up_to_phase(&c.matrix, &m, 1e-12)) {
                continue;
            }
            let mut word = found[idx].word.clone();
            word.push(name);
            found.push(SingleQubitClifford { word, matrix: m });
            queue.push_back(found.len() - 1);
        }
    }
    found
}
