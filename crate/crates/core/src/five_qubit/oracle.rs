//! Brute-force reference curve for one distillation round.
//!
//! `ρ = (1−ε)|T₀⟩⟨T₀| + ε|T₁⟩⟨T₁|` expands `ρ^⊗5` into 32 weighted pure
//! product states. Each is pushed through the code projector `Π` directly;
//! no decoder or circuit is involved. The logical reference state is the
//! normalized projection of `|T₀⟩^⊗5`, so the oracle's m-polarization is
//! measured against whatever logical state pure magic inputs distill to.

use std::sync::OnceLock;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use super::stabilizers;
use crate::error::{Error, Result};

type Ket = DVector<Complex64>;

/// `(n_j, a_j)` for each of the 32 product terms: squared norm of `Π|ψ_j⟩`
/// and squared overlap of `Π|ψ_j⟩` with the reference logical state.
struct ProjectedTerms {
    norms: [f64; 32],
    overlaps: [f64; 32],
}

fn magic_kets() -> (Ket, Ket) {
    let polar = (1.0 / 3f64.sqrt()).acos();
    let (c, s) = ((polar / 2.0).cos(), (polar / 2.0).sin());
    let phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let t0 = Ket::from_vec(vec![Complex64::from(c), phase * s]);
    let t1 = Ket::from_vec(vec![Complex64::from(s), -phase * c]);
    (t0, t1)
}

fn kron_ket(a: &Ket, b: &Ket) -> Ket {
    Ket::from_fn(a.len() * b.len(), |i, _| a[i / b.len()] * b[i % b.len()])
}

fn projected_terms() -> &'static ProjectedTerms {
    static TERMS: OnceLock<ProjectedTerms> = OnceLock::new();
    TERMS.get_or_init(|| {
        let projector = stabilizers().code_projector();
        let (t0, t1) = magic_kets();
        let projected: Vec<Ket> = (0..32usize)
            .map(|flips| {
                let psi = (0..5)
                    .map(|copy| if flips & (1 << copy) != 0 { &t1 } else { &t0 })
                    .fold(Ket::from_element(1, Complex64::from(1.0)), |acc, k| {
                        kron_ket(&acc, k)
                    });
                &projector * psi
            })
            .collect();
        let reference = projected[0].normalize();
        let mut norms = [0.0; 32];
        let mut overlaps = [0.0; 32];
        for (j, phi) in projected.iter().enumerate() {
            norms[j] = phi.norm_squared();
            overlaps[j] = reference.dotc(phi).norm_sqr();
        }
        ProjectedTerms { norms, overlaps }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleValue {
    pub p_out: f64,
    pub theta0: f64,
}

/// Reference `(p_out, θ₀)` for five copies at m-polarization `p_in`.
pub fn distill_oracle(p_in: f64) -> Result<OracleValue> {
    if !(-1.0..=1.0).contains(&p_in) {
        return Err(Error::PolarizationOutOfRange(p_in));
    }
    let eps = (1.0 - p_in) / 2.0;
    let terms = projected_terms();
    let mut theta0 = 0.0;
    let mut aligned = 0.0;
    for j in 0..32usize {
        let flips = j.count_ones() as i32;
        let w = (1.0 - eps).powi(5 - flips) * eps.powi(flips);
        theta0 += w * terms.norms[j];
        aligned += w * (2.0 * terms.overlaps[j] - terms.norms[j]);
    }
    Ok(OracleValue {
        p_out: aligned / theta0,
        theta0,
    })
}

/// Bisection for the nontrivial fixed point of `p ↦ p_out(p)` on `[0.5, 0.9]`.
pub fn threshold_locate() -> f64 {
    let f = |p: f64| distill_oracle(p).expect("in range").p_out - p;
    let (mut lo, mut hi) = (0.5, 0.9);
    let mut f_lo = f(lo);
    debug_assert!(f_lo < 0.0 && f(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundResult {
    pub round: usize,
    pub p: f64,
    pub theta0: f64,
}

/// Feeds each round's output polarization into fresh copies for the next.
pub fn iterate_distillation(p_start: f64, rounds: usize) -> Result<Vec<RoundResult>> {
    if rounds == 0 {
        return Err(Error::InvalidConfig("rounds must be at least 1".into()));
    }
    let mut p = p_start;
    let mut out = Vec::with_capacity(rounds);
    for round in 1..=rounds {
        let v = distill_oracle(p)?;
        // rounding can push a pure fixed point a hair past 1
        p = v.p_out.clamp(-1.0, 1.0);
        out.push(RoundResult {
            round,
            p,
            theta0: v.theta0,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn endpoints() {
        let one = distill_oracle(1.0).unwrap();
        assert_abs_diff_eq!(one.p_out, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(one.theta0, 1.0 / 6.0, epsilon = 1e-12);
        let zero = distill_oracle(0.0).unwrap();
        assert_abs_diff_eq!(zero.p_out, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(zero.theta0, 1.0 / 16.0, epsilon = 1e-12);
        assert!(distill_oracle(1.5).is_err());
    }

    #[test]
    fn threshold_is_fixed_point() {
        let p0 = super::super::threshold_closed_form();
        assert_abs_diff_eq!(distill_oracle(p0).unwrap().p_out, p0, epsilon = 1e-9);
        assert_abs_diff_eq!(threshold_locate(), p0, epsilon = 1e-9);
        assert!(distill_oracle(0.9).unwrap().p_out > 0.9);
        assert!(distill_oracle(0.6).unwrap().p_out < 0.6);
    }

    #[test]
    fn frozen_values_from_numpy_reference() {
        // independent dense numpy computation of Tr(Π ρ^⊗5) and logical Bloch
        let v = distill_oracle(0.95).unwrap();
        assert_abs_diff_eq!(v.theta0, 0.14734440104166674, epsilon = 1e-12);
        assert_abs_diff_eq!(v.p_out, 0.5735671518377103 * 3f64.sqrt(), epsilon = 1e-12);
        let v = distill_oracle(0.7).unwrap();
        assert_abs_diff_eq!(v.theta0, 0.08751041666666665, epsilon = 1e-12);
        assert_abs_diff_eq!(v.p_out, 0.42524482890965765 * 3f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn iteration_behaviour() {
        let up = iterate_distillation(0.9, 6).unwrap();
        assert!(up.last().unwrap().p > 0.999);
        // strictly increasing until the sequence saturates at 1 in f64
        assert!(up
            .windows(2)
            .all(|w| w[1].p > w[0].p || (w[0].p > 1.0 - 1e-12 && w[1].p > 1.0 - 1e-12)));
        let down = iterate_distillation(0.6, 6).unwrap();
        assert!(down[0].p < 0.6);
        assert!(down.windows(2).all(|w| w[1].p < w[0].p));
        let flat = iterate_distillation(1.0, 4).unwrap();
        assert!(flat.iter().all(|r| (r.p - 1.0).abs() < 1e-12));
        assert!(iterate_distillation(0.9, 0).is_err());
    }
}
