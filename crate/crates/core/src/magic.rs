//! Magic-state geometry, the m-polarization and faulty-state preparation.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::gates::rotation;
use crate::state::{BlochVector, DensityOperator, Matrix};

const SET_TOL: f64 = 1e-10;
const AXIS_TOL: f64 = 1e-9;

fn inv_sqrt3() -> f64 {
    1.0 / 3f64.sqrt()
}

/// Unit Bloch direction of the T-type target state.
pub fn magic_axis() -> BlochVector {
    let s = inv_sqrt3();
    BlochVector::new(s, s, s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MagicKind {
    T,
    H,
}

#[derive(Debug, Clone)]
pub struct MagicStateSet {
    kind: MagicKind,
    states: Vec<BlochVector>,
}

impl MagicStateSet {
    /// The 8 states `(±1, ±1, ±1)/√3`.
    pub fn t_type() -> Self {
        let s = inv_sqrt3();
        let states = (0..8)
            .map(|bits| {
                let sign = |b: usize| if bits & b != 0 { -s } else { s };
                BlochVector::new(sign(4), sign(2), sign(1))
            })
            .collect();
        Self {
            kind: MagicKind::T,
            states,
        }
    }

    /// The 12 states with one zero component and two components `±1/√2`.
    pub fn h_type() -> Self {
        let h = FRAC_1_SQRT_2;
        let mut states = Vec::with_capacity(12);
        for zero_axis in 0..3 {
            for bits in 0..4 {
                let a = if bits & 2 != 0 { -h } else { h };
                let b = if bits & 1 != 0 { -h } else { h };
                let v = match zero_axis {
                    0 => [0.0, a, b],
                    1 => [b, 0.0, a],
                    _ => [a, b, 0.0],
                };
                states.push(BlochVector::from(v));
            }
        }
        Self {
            kind: MagicKind::H,
            states,
        }
    }

    pub fn kind(&self) -> MagicKind {
        self.kind
    }

    pub fn states(&self) -> &[BlochVector] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Index of the member within `1e-10` of `b`, if any.
    pub fn position(&self, b: &BlochVector) -> Option<usize> {
        self.states.iter().position(|s| s.distance(b) <= SET_TOL)
    }

    pub fn density_operators(&self) -> Vec<DensityOperator> {
        self.states
            .iter()
            .map(|b| DensityOperator::from_bloch(b).expect("unit Bloch vectors"))
            .collect()
    }
}

/// `ρ_M = [𝟙 + (σ_x + σ_y + σ_z)/√3] / 2`.
pub fn magic_target() -> DensityOperator {
    DensityOperator::from_bloch(&magic_axis()).expect("unit vector")
}

/// `2 Tr[ρ_M ρ] − 1 = (p_x + p_y + p_z)/√3`.
pub fn m_polarization(rho: &DensityOperator) -> Result<f64> {
    let b = rho.bloch()?;
    Ok((b.x + b.y + b.z) * inv_sqrt3())
}

/// Pulse phase `a` of the depolarizing second pulse, restricted to
/// `[π, 3π/2]` so that `p = −sin a ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreparationAngle(f64);

impl PreparationAngle {
    pub fn new(a: f64) -> Result<Self> {
        if !(PI..=1.5 * PI).contains(&a) {
            return Err(Error::AngleOutOfRange(a));
        }
        Ok(Self(a))
    }

    /// The angle in `[π, 3π/2]` producing polarization `p ∈ [0, 1]`.
    pub fn for_polarization(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::PolarizationOutOfRange(p));
        }
        // −sin(π + θ) = sin θ
        Self::new((PI + p.asin()).min(1.5 * PI))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn polarization(self) -> f64 {
        -self.0.sin()
    }
}

/// Every intermediate state of the phase-cycled preparation.
#[derive(Debug, Clone)]
pub struct CycledPreparation {
    /// After the π/2 pulse about ŷ: Bloch `(1, 0, 0)`.
    pub tipped: DensityOperator,
    /// Second π/2 pulse about `[cos a, sin a, 0]` and about the π-shifted phase.
    pub branches: [DensityOperator; 2],
    /// `(𝟙 − σ_z sin a)/2`.
    pub depolarized: DensityOperator,
    /// After the final tilt onto the magic axis.
    pub output: DensityOperator,
}

/// Runs the three-pulse preparation with the two-phase cycle.
///
/// The cycle alternates the receiver sign between the `a` and `π + a`
/// branches, so the combined deviation is half the difference of the branch
/// deviations: the transverse parts cancel and `−σ_z sin a` survives.
pub fn trace_faulty_cycled(a: PreparationAngle) -> CycledPreparation {
    let a = a.radians();
    let ground = DensityOperator::basis_state(1, 0).expect("one qubit");
    let tip = rotation([0.0, 1.0, 0.0], FRAC_PI_2).expect("unit axis");
    let tipped = ground.apply(&tip).expect("one-qubit gate");

    let branch = |phase: f64| {
        let pulse = rotation([phase.cos(), phase.sin(), 0.0], FRAC_PI_2).expect("unit axis");
        tipped.apply(&pulse).expect("one-qubit gate")
    };
    let branches = [branch(a), branch(PI + a)];

    let deviation = (branches[0].matrix() - branches[1].matrix()).map(|z| z * 0.5);
    let identity_half = Matrix::identity(2, 2).map(|z| z * 0.5);
    let depolarized = DensityOperator::from_matrix_unchecked(identity_half + deviation);

    let r = FRAC_1_SQRT_2;
    let tilt = rotation([-r, r, 0.0], inv_sqrt3().acos()).expect("unit axis");
    let output = depolarized.apply(&tilt).expect("one-qubit gate");

    CycledPreparation {
        tipped,
        branches,
        depolarized,
        output,
    }
}

pub fn prepare_faulty_cycled(a: PreparationAngle) -> DensityOperator {
    trace_faulty_cycled(a).output
}

/// `[𝟙 + p(σ_x + σ_y + σ_z)/√3] / 2` in closed form.
pub fn prepare_faulty_direct(p: f64) -> Result<DensityOperator> {
    if !(-1.0..=1.0).contains(&p) {
        return Err(Error::PolarizationOutOfRange(p));
    }
    DensityOperator::from_bloch(&magic_axis().scaled(p))
}

/// Weight `ε` of the antipodal pure state in `ρ = (1−ε)ρ_M + ε ρ_M⊥`.
pub fn as_t_mixture(rho: &DensityOperator) -> Result<f64> {
    let b = rho.bloch()?;
    let p = (b.x + b.y + b.z) * inv_sqrt3();
    let along = magic_axis().scaled(p);
    if b.distance(&along) > AXIS_TOL {
        return Err(Error::OffMagicAxis);
    }
    Ok((1.0 - p) / 2.0)
}
