//! Dense density operators over a small qubit register.
//!
//! Computational-basis indices put qubit 0 in the most significant bit, so
//! for three qubits `|q0 q1 q2⟩` has index `4*q0 + 2*q1 + q2`. Every module in
//! the crate shares this convention.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::GateOp;

pub type Matrix = DMatrix<Complex64>;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const EIGEN_FLOOR: f64 = -1e-9;
const BLOCH_NORM_TOL: f64 = 1e-10;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn sigma_x() -> Matrix {
    Matrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn sigma_y() -> Matrix {
    Matrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn sigma_z() -> Matrix {
    Matrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    Matrix::from_fn(ar * br, ac * bc, |r, c| a[(r / br, c / bc)] * b[(r % br, c % bc)])
}

pub(crate) fn max_abs(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn n_qubits_of(dim: usize) -> Option<usize> {
    (dim.is_power_of_two() && dim > 0).then(|| dim.trailing_zeros() as usize)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub(crate) fn hermitian_eigenvalues(m: &Matrix) -> Vec<f64> {
    let mut eig: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Lifts a `k`-qubit operator acting on `targets` into the full `n`-qubit
/// space. `targets[0]` is the most significant qubit of the operator's own
/// index, so a CNOT with `targets = [c, t]` has control `c`.
pub fn embed_operator(op: &Matrix, targets: &[usize], n_qubits: usize) -> Result<Matrix> {
    let k = targets.len();
    if op.nrows() != 1 << k || op.ncols() != 1 << k {
        return Err(Error::DimensionMismatch(op.nrows(), 1 << k));
    }
    validate_indices(targets, n_qubits)?;
    let dim = 1usize << n_qubits;
    let masks: Vec<usize> = targets.iter().map(|&q| 1 << (n_qubits - 1 - q)).collect();
    let target_mask: usize = masks.iter().sum();
    let local = |idx: usize| {
        masks
            .iter()
            .fold(0usize, |acc, &m| (acc << 1) | usize::from(idx & m != 0))
    };
    Ok(Matrix::from_fn(dim, dim, |r, c| {
        if r & !target_mask != c & !target_mask {
            ZERO
        } else {
            op[(local(r), local(c))]
        }
    }))
}

fn validate_indices(indices: &[usize], n_qubits: usize) -> Result<()> {
    let bad = || Error::InvalidTargets {
        indices: indices.to_vec(),
        n_qubits,
    };
    if indices.iter().any(|&q| q >= n_qubits) {
        return Err(bad());
    }
    for (i, a) in indices.iter().enumerate() {
        if indices[i + 1..].contains(a) {
            return Err(bad());
        }
    }
    Ok(())
}

/// Polarization triple `(p_x, p_y, p_z)` of a single qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn distance(&self, other: &BlochVector) -> f64 {
        let d = [self.x - other.x, self.y - other.y, self.z - other.z];
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl From<[f64; 3]> for BlochVector {
    fn from(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

impl fmt::Display for BlochVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6}, {:.6})", self.x, self.y, self.z)
    }
}

/// A Hermitian, unit-trace, positive semidefinite operator on `n` qubits.
///
/// Values are immutable; every operation returns a new operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    n_qubits: usize,
    matrix: Matrix,
}

impl DensityOperator {
    /// Validates `matrix` against the density-operator invariants.
    pub fn new(matrix: Matrix) -> Result<Self> {
        let n_qubits = if matrix.is_square() {
            n_qubits_of(matrix.nrows())
        } else {
            None
        }
        .ok_or_else(|| {
            Error::InvalidDensity(format!("shape {:?} is not 2^n square", matrix.shape()))
        })?;
        let herm = max_abs(&(&matrix - matrix.adjoint()));
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian ({herm:.3e})")));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let min_eig = hermitian_eigenvalues(&matrix)[0];
        if min_eig < EIGEN_FLOOR {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { n_qubits, matrix })
    }

    /// Skips validation; callers guarantee the invariants hold up to rounding.
    pub(crate) fn from_matrix_unchecked(matrix: Matrix) -> Self {
        let n_qubits = n_qubits_of(matrix.nrows()).expect("power-of-two dimension");
        Self { n_qubits, matrix }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self {
            n_qubits,
            matrix: Matrix::identity(dim, dim).map(|z| z / dim as f64),
        }
    }

    /// The pure computational-basis projector `|index⟩⟨index|`.
    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch(index, dim));
        }
        let mut matrix = Matrix::zeros(dim, dim);
        matrix[(index, index)] = ONE;
        Ok(Self { n_qubits, matrix })
    }

    /// The pure state `|ψ⟩⟨ψ|` for a normalized amplitude vector.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("state norm {norm} != 1")));
        }
        let dim = amplitudes.len();
        n_qubits_of(dim).ok_or(Error::DimensionMismatch(dim, dim.next_power_of_two()))?;
        Ok(Self::from_matrix_unchecked(Matrix::from_fn(dim, dim, |r, c| {
            amplitudes[r] * amplitudes[c].conj()
        })))
    }

    /// `(𝟙 + p_x σ_x + p_y σ_y + p_z σ_z) / 2`.
    pub fn from_bloch(b: &BlochVector) -> Result<Self> {
        let norm = b.norm();
        if norm.is_nan() || norm > 1.0 + BLOCH_NORM_TOL {
            return Err(Error::UnphysicalBloch(norm));
        }
        let half = 0.5;
        let m = Matrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(half * (1.0 + b.z), 0.0),
                Complex64::new(half * b.x, -half * b.y),
                Complex64::new(half * b.x, half * b.y),
                Complex64::new(half * (1.0 - b.z), 0.0),
            ],
        );
        Ok(Self::from_matrix_unchecked(m))
    }

    /// `p_k = Tr(σ_k ρ)` for a single qubit.
    pub fn bloch(&self) -> Result<BlochVector> {
        self.expect_qubits(1)?;
        let m = &self.matrix;
        Ok(BlochVector::new(
            2.0 * m[(1, 0)].re,
            2.0 * m[(1, 0)].im,
            (m[(0, 0)] - m[(1, 1)]).re,
        ))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// `Tr(O ρ)`, real part. `O` is expected to be Hermitian.
    pub fn expectation(&self, observable: &Matrix) -> Result<f64> {
        if observable.shape() != self.matrix.shape() {
            return Err(Error::DimensionMismatch(observable.nrows(), self.dim()));
        }
        // Tr(Oρ) = Σ_ij O_ij ρ_ji
        let dim = self.dim();
        let mut acc = ZERO;
        for i in 0..dim {
            for j in 0..dim {
                acc += observable[(i, j)] * self.matrix[(j, i)];
            }
        }
        Ok(acc.re)
    }

    pub(crate) fn expect_qubits(&self, n: usize) -> Result<()> {
        if self.n_qubits != n {
            return Err(Error::QubitCount {
                expected: n,
                actual: self.n_qubits,
            });
        }
        Ok(())
    }

    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        DensityOperator {
            n_qubits: self.n_qubits + other.n_qubits,
            matrix: kron(&self.matrix, &other.matrix),
        }
    }

    /// `ρ^{⊗copies}`; `copies` must be at least 1.
    pub fn tensor_power(&self, copies: usize) -> DensityOperator {
        assert!(copies >= 1, "tensor power needs at least one copy");
        (1..copies).fold(self.clone(), |acc, _| acc.tensor(self))
    }

    /// `U ρ U†` with the gate embedded on its target qubits.
    pub fn apply(&self, gate: &GateOp) -> Result<DensityOperator> {
        let full = embed_operator(gate.matrix(), gate.targets(), self.n_qubits)?;
        Ok(self.conjugate_by(&full))
    }

    /// `U ρ U†` for a full-register operator. Unitarity is the caller's concern.
    pub(crate) fn conjugate_by(&self, full: &Matrix) -> DensityOperator {
        DensityOperator {
            n_qubits: self.n_qubits,
            matrix: full * &self.matrix * full.adjoint(),
        }
    }

    /// Conjugation by a full-register matrix, e.g. a projector. Result is not
    /// renormalized.
    pub(crate) fn sandwich(&self, op: &Matrix) -> Matrix {
        op * &self.matrix * op.adjoint()
    }

    /// Reduced state on `keep`. Kept qubits retain their relative register
    /// order regardless of the order given.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        validate_indices(keep, self.n_qubits)?;
        if keep.is_empty() {
            return Err(Error::InvalidTargets {
                indices: vec![],
                n_qubits: self.n_qubits,
            });
        }
        let n = self.n_qubits;
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
        let scatter = |bits: usize, qubits: &[usize]| {
            let k = qubits.len();
            qubits.iter().enumerate().fold(0usize, |acc, (pos, &q)| {
                if bits & (1 << (k - 1 - pos)) != 0 {
                    acc | (1 << (n - 1 - q))
                } else {
                    acc
                }
            })
        };
        let kd = 1usize << kept.len();
        let td = 1usize << traced.len();
        let env: Vec<usize> = (0..td).map(|t| scatter(t, &traced)).collect();
        let sys: Vec<usize> = (0..kd).map(|s| scatter(s, &kept)).collect();
        let reduced = Matrix::from_fn(kd, kd, |r, c| {
            env.iter()
                .map(|&e| self.matrix[(sys[r] | e, sys[c] | e)])
                .sum()
        });
        Ok(DensityOperator::from_matrix_unchecked(reduced))
    }

    /// `½ Σ |λ_i(a − b)|`.
    pub fn trace_distance(&self, other: &DensityOperator) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        let diff = &self.matrix - &other.matrix;
        Ok(0.5 * hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum::<f64>())
    }

    /// Checks all three invariants with the crate tolerances.
    pub fn is_valid(&self) -> bool {
        DensityOperator::new(self.matrix.clone()).is_ok()
    }
}
