//! Partial state tomography of the decoded register.
//!
//! The decoded state has the form `Σ_m θ_m ρ_m ⊗ |m⟩⟨m|` over the sixteen
//! syndrome patterns. Measuring the 64 product observables
//! `s ⊗ σ_z^{n̄}` (with `s ∈ {σx, σy, σz, 𝟙}` on C₁ and a `σ_z`/`𝟙` pattern
//! on the syndrome qubits) gives `C_s = A·R_s`, where `R_s(m) = θ_m ⟨s⟩_m`
//! and `A` is the 16×16 parity sign matrix.
//!
//! Observable and outcome labels run over 4-bit patterns `n̄₁n̄₂n̄₃n̄₄`
//! (`n̄₁` most significant) attached to qubits C₂, C₃, C₄, M in that order.
//! The spectators of the original seven-spin register carry no information
//! and are not represented, so the 128 readout terms collapse to 4 × 16.
//! Results are reported in the syndrome order of [`crate::five_qubit`],
//! where M is the most significant bit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::five_qubit::{N_OUTCOMES, THETA_FLOOR};
use crate::state::{kron, sigma_x, sigma_y, sigma_z, DensityOperator, Matrix};

/// `A(k, m) = Π_i (−1)^{k̄_i m̄_i}` with 1-based `k`, `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMatrix {
    entries: [[i32; N_OUTCOMES]; N_OUTCOMES],
}

impl SignMatrix {
    pub fn new() -> Self {
        let mut entries = [[0; N_OUTCOMES]; N_OUTCOMES];
        for (k, row) in entries.iter_mut().enumerate() {
            for (m, e) in row.iter_mut().enumerate() {
                *e = if (k & m).count_ones() % 2 == 0 { 1 } else { -1 };
            }
        }
        Self { entries }
    }

    /// Entry at 1-based row `k` and column `m`.
    pub fn entry(&self, k: usize, m: usize) -> i32 {
        assert!((1..=N_OUTCOMES).contains(&k) && (1..=N_OUTCOMES).contains(&m));
        self.entries[k - 1][m - 1]
    }

    pub fn entries(&self) -> &[[i32; N_OUTCOMES]; N_OUTCOMES] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        (0..N_OUTCOMES).all(|k| (0..N_OUTCOMES).all(|m| self.entries[k][m] == self.entries[m][k]))
    }

    /// Integer product `A·B`.
    pub fn product(&self, other: &SignMatrix) -> [[i32; N_OUTCOMES]; N_OUTCOMES] {
        let mut out = [[0; N_OUTCOMES]; N_OUTCOMES];
        for (k, row) in out.iter_mut().enumerate() {
            for (m, e) in row.iter_mut().enumerate() {
                *e = (0..N_OUTCOMES)
                    .map(|j| self.entries[k][j] * other.entries[j][m])
                    .sum();
            }
        }
        out
    }

    fn apply(&self, v: &[f64; N_OUTCOMES]) -> [f64; N_OUTCOMES] {
        let mut out = [0.0; N_OUTCOMES];
        for (k, o) in out.iter_mut().enumerate() {
            *o = (0..N_OUTCOMES).map(|m| self.entries[k][m] as f64 * v[m]).sum();
        }
        out
    }

    /// `A⁻¹·v = A·v / 16`.
    fn solve(&self, c: &[f64; N_OUTCOMES]) -> [f64; N_OUTCOMES] {
        self.apply(c).map(|x| x / N_OUTCOMES as f64)
    }
}

impl Default for SignMatrix {
    fn default() -> Self {
        Self::new()
    }
}

pub fn sign_matrix() -> SignMatrix {
    SignMatrix::new()
}

/// Position in [`crate::five_qubit`] syndrome order of the 1-based readout
/// label `m` (bits C₂ C₃ C₄ M, first most significant).
pub fn syndrome_index(m: usize) -> usize {
    assert!((1..=N_OUTCOMES).contains(&m));
    let bits = m - 1;
    ((bits & 1) << 3) | (bits >> 1)
}

/// Expectation vectors `C_s(n)`, `n = 1..16` stored at `n − 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVector {
    pub x: [f64; N_OUTCOMES],
    pub y: [f64; N_OUTCOMES],
    pub z: [f64; N_OUTCOMES],
    pub identity: [f64; N_OUTCOMES],
}

fn syndrome_pattern(n: usize, on_output: &Matrix) -> Matrix {
    let bits = n - 1;
    let z_if = |bit: usize| {
        if bits >> (3 - bit) & 1 == 1 {
            sigma_z()
        } else {
            Matrix::identity(2, 2)
        }
    };
    // register order M, C₁, C₂, C₃, C₄ with n̄₄ → M, n̄₁ → C₂, n̄₂ → C₃, n̄₃ → C₄
    let factors = [z_if(3), on_output.clone(), z_if(0), z_if(1), z_if(2)];
    factors[1..].iter().fold(factors[0].clone(), |acc, f| kron(&acc, f))
}

fn trace_product(a: &Matrix, b: &Matrix) -> f64 {
    a.component_mul(&b.transpose()).sum().re
}

/// Exact expectation values of the 64 readout observables.
pub fn measure_coefficients(rho_final: &DensityOperator) -> Result<CoefficientVector> {
    rho_final.expect_qubits(5)?;
    let rho = rho_final.matrix();
    let column = |s: &Matrix| {
        let mut c = [0.0; N_OUTCOMES];
        for (idx, v) in c.iter_mut().enumerate() {
            *v = trace_product(&syndrome_pattern(idx + 1, s), rho);
        }
        c
    };
    Ok(CoefficientVector {
        x: column(&sigma_x()),
        y: column(&sigma_y()),
        z: column(&sigma_z()),
        identity: column(&Matrix::identity(2, 2)),
    })
}

/// Outcome probabilities and conditional C₁ Bloch vectors, in syndrome order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionResult {
    pub theta: [f64; N_OUTCOMES],
    /// `None` where `θ_i ≤ THETA_FLOOR`.
    pub bloch: [Option<[f64; 3]>; N_OUTCOMES],
    pub p_out: Option<f64>,
    pub theta0: f64,
}

struct Solved {
    x: [f64; N_OUTCOMES],
    y: [f64; N_OUTCOMES],
    z: [f64; N_OUTCOMES],
    identity: [f64; N_OUTCOMES],
}

fn solve(c: &CoefficientVector) -> Solved {
    let a = SignMatrix::new();
    let reorder = |r: [f64; N_OUTCOMES]| {
        let mut out = [0.0; N_OUTCOMES];
        for (m, v) in r.into_iter().enumerate() {
            out[syndrome_index(m + 1)] = v;
        }
        out
    };
    Solved {
        x: reorder(a.solve(&c.x)),
        y: reorder(a.solve(&c.y)),
        z: reorder(a.solve(&c.z)),
        identity: reorder(a.solve(&c.identity)),
    }
}

pub fn reconstruct(c: &CoefficientVector) -> ReconstructionResult {
    let r = solve(c);
    let theta = r.identity;
    let mut bloch = [None; N_OUTCOMES];
    for (i, b) in bloch.iter_mut().enumerate() {
        if theta[i] > THETA_FLOOR {
            *b = Some([r.x[i] / theta[i], r.y[i] / theta[i], r.z[i] / theta[i]]);
        }
    }
    let p_out = bloch[0].map(|[x, y, z]| (x + y + z) / 3f64.sqrt());
    ReconstructionResult {
        theta,
        bloch,
        p_out,
        theta0: theta[0],
    }
}

/// Ratio of `θ₀ p_out` to `θ₀`, both read off the trivial-syndrome sector.
pub fn p_out_as_ratio(c: &CoefficientVector) -> Result<f64> {
    let r = solve(c);
    let theta0 = r.identity[0];
    if theta0 < THETA_FLOOR {
        return Err(Error::ThetaBelowFloor(theta0));
    }
    Ok((r.x[0] + r.y[0] + r.z[0]) / (3f64.sqrt() * theta0))
}
