//! Five-qubit-code magic state distillation.
//!
//! Register order is `(q0, q1, q2, q3, q4) = (M, C₁, C₂, C₃, C₄)`. C₁ carries
//! the distilled state; M, C₂, C₃, C₄ are the syndrome qubits and syndrome
//! index `i` reads them as `|M C₂ C₃ C₄⟩` with M the most significant bit.
//!
//! Two variants are provided. [`distill_projective`] post-selects on the
//! trivial syndrome of the four stabilizers and then decodes.
//! [`distill_decode`] decodes the whole input and splits the result into the
//! sixteen syndrome sectors, which is what an ensemble readout can access.

mod decoder;
mod oracle;
mod tableau;

use std::sync::OnceLock;

use serde::Serialize;

pub use decoder::{decoder, synthesize, DecoderUnitary, CANONICAL_STEPS};
pub use oracle::{distill_oracle, iterate_distillation, threshold_locate, OracleValue, RoundResult};
pub use tableau::{reduce_to_single_z, CliffordStep, PauliString};

use crate::error::{Error, Result};
use crate::state::{BlochVector, DensityOperator, Matrix};

pub const OUTPUT_QUBIT: usize = 1;
pub const SYNDROME_QUBITS: [usize; 4] = [0, 2, 3, 4];
pub const N_OUTCOMES: usize = 16;

/// Outcomes with probability at or below this carry no conditional state.
pub const THETA_FLOOR: f64 = 1e-9;
const MIN_SUCCESS: f64 = 1e-12;

/// `√(3/7)`, the nontrivial fixed point of one distillation round.
pub fn threshold_closed_form() -> f64 {
    (3.0f64 / 7.0).sqrt()
}

/// The four generators `XZZXI` and its cyclic relatives.
#[derive(Debug, Clone)]
pub struct StabilizerSet {
    rows: [PauliString; 4],
}

impl StabilizerSet {
    pub fn rows(&self) -> &[PauliString] {
        &self.rows
    }

    pub fn matrices(&self) -> [Matrix; 4] {
        [0, 1, 2, 3].map(|i| self.rows[i].to_matrix())
    }

    /// `Π = Π_r (𝟙 + S_r)/2`, the projector onto the code space.
    pub fn code_projector(&self) -> Matrix {
        self.matrices()
            .iter()
            .fold(Matrix::identity(32, 32), |acc, s| {
                acc * (Matrix::identity(32, 32) + s).map(|z| z * 0.5)
            })
    }
}

pub fn stabilizers() -> &'static StabilizerSet {
    static SET: OnceLock<StabilizerSet> = OnceLock::new();
    SET.get_or_init(|| StabilizerSet {
        rows: ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"].map(|s| s.parse().expect("valid literal")),
    })
}

fn code_projector() -> &'static Matrix {
    static PROJ: OnceLock<Matrix> = OnceLock::new();
    PROJ.get_or_init(|| stabilizers().code_projector())
}

/// Register index of output bit `o` under syndrome pattern `i`.
fn register_index(syndrome: usize, output: usize) -> usize {
    let m = (syndrome >> 3) & 1;
    let rest = syndrome & 0b111;
    (m << 4) | (output << 3) | rest
}

/// Probability of syndrome `i` and the renormalized C₁ state, if defined.
pub(crate) fn syndrome_block(decoded: &DensityOperator, syndrome: usize) -> (f64, Option<DensityOperator>) {
    let m = decoded.matrix();
    let block = Matrix::from_fn(2, 2, |r, c| {
        m[(register_index(syndrome, r), register_index(syndrome, c))]
    });
    let theta = block.trace().re;
    let state = (theta > THETA_FLOOR)
        .then(|| DensityOperator::from_matrix_unchecked(block.map(|z| z / theta)));
    (theta, state)
}

/// The sixteen `(θ_i, ρ_i)` pairs of the decoded mixture.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistillationOutcome {
    theta: [f64; N_OUTCOMES],
    blochs: [Option<BlochVector>; N_OUTCOMES],
}

impl DistillationOutcome {
    pub fn theta(&self) -> &[f64; N_OUTCOMES] {
        &self.theta
    }

    /// `None` marks outcomes with `θ_i ≤ THETA_FLOOR`.
    pub fn blochs(&self) -> &[Option<BlochVector>; N_OUTCOMES] {
        &self.blochs
    }

    pub fn theta0(&self) -> f64 {
        self.theta[0]
    }

    /// m-polarization of `ρ_0`; undefined when the trivial syndrome never occurs.
    pub fn p_out(&self) -> Option<f64> {
        self.blochs[0].map(|b| (b.x + b.y + b.z) / 3f64.sqrt())
    }

    pub fn conditional_state(&self, i: usize) -> Option<DensityOperator> {
        self.blochs
            .get(i)
            .copied()
            .flatten()
            .map(|b| DensityOperator::from_bloch(&b).expect("physical conditional state"))
    }

    pub fn defined_count(&self) -> usize {
        self.blochs.iter().filter(|b| b.is_some()).count()
    }
}

#[derive(Debug, Clone)]
pub struct ProjectiveOutcome {
    pub success_probability: f64,
    pub distilled: DensityOperator,
}

impl ProjectiveOutcome {
    pub fn p_out(&self) -> f64 {
        crate::magic::m_polarization(&self.distilled).expect("one qubit")
    }
}

/// Post-selects on the trivial syndrome, decodes, and returns the C₁ state.
pub fn distill_projective(rho_in: &DensityOperator) -> Result<ProjectiveOutcome> {
    rho_in.expect_qubits(5)?;
    let projected = rho_in.sandwich(code_projector());
    let success = projected.trace().re;
    if success.is_nan() || success < MIN_SUCCESS {
        return Err(Error::NoTrivialSyndromeSupport(success));
    }
    let post = DensityOperator::from_matrix_unchecked(projected.map(|z| z / success));
    let decoded = decoder().apply(&post)?;
    let distilled = decoded.partial_trace(&[OUTPUT_QUBIT])?;
    Ok(ProjectiveOutcome {
        success_probability: success,
        distilled,
    })
}

/// Applies the decoder to the whole five-qubit input.
pub fn decode(rho_in: &DensityOperator) -> Result<DensityOperator> {
    decoder().apply(rho_in)
}

/// Splits a decoded register into its sixteen syndrome sectors.
pub fn decompose_outcomes(decoded: &DensityOperator) -> Result<DistillationOutcome> {
    decoded.expect_qubits(5)?;
    let mut theta = [0.0; N_OUTCOMES];
    let mut blochs = [None; N_OUTCOMES];
    for i in 0..N_OUTCOMES {
        let (t, state) = syndrome_block(decoded, i);
        theta[i] = t;
        blochs[i] = state.map(|s| s.bloch().expect("one qubit"));
    }
    Ok(DistillationOutcome { theta, blochs })
}

pub fn distill_decode(rho_in: &DensityOperator) -> Result<DistillationOutcome> {
    decompose_outcomes(&decode(rho_in)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::conjugates_pauli_group;
    use crate::magic::{magic_target, prepare_faulty_direct};
    use crate::state::max_abs;
    use approx::assert_abs_diff_eq;

    #[test]
    fn stabilizer_algebra() {
        let mats = stabilizers().matrices();
        let id = Matrix::identity(32, 32);
        for (i, a) in mats.iter().enumerate() {
            assert!(max_abs(&(a * a - &id)) < 1e-12);
            assert!(a.trace().norm() < 1e-12);
            for b in &mats[i + 1..] {
                assert!(max_abs(&(a * b - b * a)) < 1e-12);
                assert!((a * b).trace().norm() < 1e-12);
            }
        }
        assert_eq!(stabilizers().rows()[0].to_string(), "+XZZXI");
    }

    #[test]
    fn projector_has_rank_two() {
        assert_abs_diff_eq!(code_projector().trace().re, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn canonical_circuit_is_reproducible() {
        assert_eq!(synthesize(), CANONICAL_STEPS);
    }

    #[test]
    fn decoder_is_clifford_and_unitary() {
        let d = decoder();
        assert!(crate::gates::unitarity_error(d.unitary()) < 1e-10);
        for g in d.gates() {
            assert!(conjugates_pauli_group(g), "{g}");
        }
    }

    #[test]
    fn decoder_maps_stabilizers_to_syndrome_z() {
        let u = decoder().unitary();
        for s in stabilizers().matrices() {
            let image = u * s * u.adjoint();
            for r in 0..32 {
                for c in 0..32 {
                    if r != c {
                        assert!(image[(r, c)].norm() < 1e-10);
                    }
                }
            }
            // independent of the output qubit: entries agree across C₁ values
            for syn in 0..16 {
                let a = image[(register_index(syn, 0), register_index(syn, 0))];
                let b = image[(register_index(syn, 1), register_index(syn, 1))];
                assert!((a - b).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn code_space_lands_on_trivial_syndrome() {
        let u = decoder().unitary();
        let mapped = u * code_projector() * u.adjoint();
        let mut target = Matrix::zeros(32, 32);
        for o in 0..2 {
            let idx = register_index(0, o);
            target[(idx, idx)] = num_complex::Complex64::new(1.0, 0.0);
        }
        assert!(max_abs(&(mapped - target)) < 1e-10);
    }

    #[test]
    fn magic_fixed_point() {
        let out = distill_projective(&magic_target().tensor_power(5)).unwrap();
        assert_abs_diff_eq!(out.p_out(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.success_probability, 1.0 / 6.0, epsilon = 1e-12);
    }

    #[test]
    fn maximally_mixed_success_is_one_sixteenth() {
        let out = distill_projective(&DensityOperator::maximally_mixed(5)).unwrap();
        assert_abs_diff_eq!(out.success_probability, 1.0 / 16.0, epsilon = 1e-14);
        assert_abs_diff_eq!(out.p_out(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn projective_improves_above_threshold() {
        let rho = prepare_faulty_direct(0.7).unwrap().tensor_power(5);
        let out = distill_projective(&rho).unwrap();
        assert!(out.p_out() > 0.7);
    }

    #[test]
    fn no_support_is_an_error() {
        // the orthogonal complement of the code space never passes
        let u = decoder().unitary();
        let bad = DensityOperator::basis_state(5, register_index(0b1111, 0)).unwrap();
        let pre_image = bad.conjugate_by(&u.adjoint());
        assert!(matches!(
            distill_projective(&pre_image),
            Err(Error::NoTrivialSyndromeSupport(_))
        ));
        assert!(distill_projective(&DensityOperator::maximally_mixed(4)).is_err());
    }

    #[test]
    fn decode_outcomes_at_pure_input() {
        let out = distill_decode(&magic_target().tensor_power(5)).unwrap();
        assert_abs_diff_eq!(out.theta().iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.theta0(), 1.0 / 6.0, epsilon = 1e-12);
        for &t in &out.theta()[1..] {
            assert_abs_diff_eq!(t, 1.0 / 18.0, epsilon = 1e-12);
        }
        assert_eq!(out.defined_count(), 16);
        assert_abs_diff_eq!(out.p_out().unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn decode_above_threshold_at_095() {
        let out = distill_decode(&prepare_faulty_direct(0.95).unwrap().tensor_power(5)).unwrap();
        assert!(out.p_out().unwrap() > 0.95);
    }

    #[test]
    fn undefined_marker_for_empty_sector() {
        let decoded = DensityOperator::basis_state(5, register_index(0, 0)).unwrap();
        let out = decompose_outcomes(&decoded).unwrap();
        assert_eq!(out.defined_count(), 1);
        assert_eq!(out.blochs()[0], Some(BlochVector::new(0.0, 0.0, 1.0)));
        assert!(out.conditional_state(5).is_none());
    }
}
