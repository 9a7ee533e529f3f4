use magicdist::five_qubit::{
    decode, decoder, distill_decode, distill_oracle, distill_projective, stabilizers, threshold_closed_form,
};
use magicdist::gates::conjugates_pauli_group;
use magicdist::magic::{m_polarization, prepare_faulty_direct};
use magicdist::noise::{dephase, noisy_distill, NoiseConfig};
use magicdist::state::Matrix;
use magicdist::tomography::{measure_coefficients, p_out_as_ratio, reconstruct};
use magicdist::{BlochVector, DensityOperator};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn ball() -> impl Strategy<Value = BlochVector> {
    (0.0f64..1.0, 0.0f64..std::f64::consts::PI, 0.0f64..std::f64::consts::TAU).prop_map(|(r, th, ph)| {
        let r = r.cbrt();
        BlochVector::new(r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos())
    })
}

fn random_density(dim: usize, re: &[f64], im: &[f64]) -> DensityOperator {
    let a = DMatrix::from_fn(dim, dim, |r, c| Complex64::new(re[r * dim + c], im[r * dim + c]));
    let m = &a * a.adjoint();
    let tr = m.trace();
    DensityOperator::new(m.map(|z| z / tr)).unwrap()
}

fn max_abs(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

// decoded register order is (M, C1, C2, C3, C4); syndrome bits are M C2 C3 C4
fn sector_index(syndrome: usize, output: usize) -> usize {
    ((syndrome >> 3) << 4) | (output << 3) | (syndrome & 7)
}

fn block_diagonal(theta: &[f64; 16], blochs: &[BlochVector; 16]) -> DensityOperator {
    let mut m = Matrix::zeros(32, 32);
    for i in 0..16 {
        let rho = DensityOperator::from_bloch(&blochs[i]).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                m[(sector_index(i, r), sector_index(i, c))] = rho.matrix()[(r, c)] * theta[i];
            }
        }
    }
    DensityOperator::new(m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn projective_and_decode_variants_agree(b in ball()) {
        let rho = DensityOperator::from_bloch(&b).unwrap().tensor_power(5);
        let proj = distill_projective(&rho).unwrap();
        let dec = distill_decode(&rho).unwrap();
        prop_assert!((proj.success_probability - dec.theta0()).abs() <= 1e-10);
        let rho0 = dec.conditional_state(0).unwrap();
        prop_assert!(proj.distilled.trace_distance(&rho0).unwrap() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn tomography_round_trip(
        weights in prop::collection::vec(0.0f64..1.0, 16),
        blochs in prop::collection::vec(ball(), 16),
    ) {
        let total: f64 = weights.iter().sum();
        prop_assume!(total > 1e-3);
        let theta: [f64; 16] = std::array::from_fn(|i| weights[i] / total);
        let blochs: [BlochVector; 16] = std::array::from_fn(|i| blochs[i]);
        let state = block_diagonal(&theta, &blochs);
        let r = reconstruct(&measure_coefficients(&state).unwrap());
        for i in 0..16 {
            prop_assert!((r.theta[i] - theta[i]).abs() < 1e-10);
            if let Some(b) = r.bloch[i] {
                prop_assert!(BlochVector::from(b).distance(&blochs[i]) < 1e-9);
            }
        }
        prop_assert!((r.theta.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tomography_sees_syndrome_diagonal_of_any_state(
        re in prop::collection::vec(-1.0f64..1.0, 1024),
        im in prop::collection::vec(-1.0f64..1.0, 1024),
    ) {
        let rho = random_density(32, &re, &im);
        let r = reconstruct(&measure_coefficients(&rho).unwrap());
        for i in 0..16 {
            let diag = rho.matrix()[(sector_index(i, 0), sector_index(i, 0))].re
                + rho.matrix()[(sector_index(i, 1), sector_index(i, 1))].re;
            prop_assert!((r.theta[i] - diag).abs() < 1e-12);
        }
    }

    #[test]
    fn ratio_estimator_matches_decomposition(b in ball()) {
        let decoded = decode(&DensityOperator::from_bloch(&b).unwrap().tensor_power(5)).unwrap();
        let outcome = magicdist::five_qubit::decompose_outcomes(&decoded).unwrap();
        prop_assume!(outcome.theta0() >= 1e-6);
        let ratio = p_out_as_ratio(&measure_coefficients(&decoded).unwrap()).unwrap();
        let direct = m_polarization(&outcome.conditional_state(0).unwrap()).unwrap();
        prop_assert!((ratio - direct).abs() < 1e-10);
    }

    #[test]
    fn dephasing_is_a_channel_and_a_semigroup(
        re in prop::collection::vec(-1.0f64..1.0, 64),
        im in prop::collection::vec(-1.0f64..1.0, 64),
        q in 0usize..3,
        t1 in 0.0f64..3.0,
        t2 in 0.0f64..3.0,
        tau in 0.05f64..2.0,
    ) {
        let rho = random_density(8, &re, &im);
        let once = dephase(&rho, q, t1 + t2, tau).unwrap();
        let twice = dephase(&dephase(&rho, q, t1, tau).unwrap(), q, t2, tau).unwrap();
        prop_assert!(max_abs(&(once.matrix() - twice.matrix())) < 1e-12);
        prop_assert!((once.trace() - 1.0).abs() < 1e-12);
        prop_assert!(max_abs(&(once.matrix() - once.matrix().adjoint())) < 1e-12);
        prop_assert!(once.eigenvalues().iter().all(|&e| e > -1e-12));
    }
}

#[test]
fn circuit_reproduces_oracle_on_grid() {
    for i in 0..50 {
        let p = i as f64 / 49.0;
        let sim = distill_decode(&prepare_faulty_direct(p).unwrap().tensor_power(5)).unwrap();
        let oracle = distill_oracle(p).unwrap();
        assert!((sim.p_out().unwrap() - oracle.p_out).abs() < 1e-9, "p = {p}");
        assert!((sim.theta0() - oracle.theta0).abs() < 1e-9, "p = {p}");
    }
}

#[test]
fn improvement_only_above_threshold() {
    let p0 = threshold_closed_form();
    for i in 1..200 {
        let p = i as f64 / 200.0;
        let out = distill_decode(&prepare_faulty_direct(p).unwrap().tensor_power(5))
            .unwrap()
            .p_out()
            .unwrap();
        if p > p0 + 1e-3 {
            assert!(out > p, "p = {p}");
        } else if p < p0 - 1e-3 {
            assert!(out < p, "p = {p}");
        }
    }
}

#[test]
fn decoder_is_clifford_and_exposes_syndromes() {
    let dec = decoder();
    assert!(dec.gates().iter().all(conjugates_pauli_group));
    let u = dec.unitary();
    for s in stabilizers().matrices() {
        let image = u * s * u.adjoint();
        for r in 0..32 {
            for c in 0..32 {
                if r != c {
                    assert!(image[(r, c)].norm() < 1e-10);
                }
            }
            // independent of the output qubit (bit 3)
            let partner = r ^ 0b01000;
            assert!((image[(r, r)] - image[(partner, partner)]).norm() < 1e-10);
        }
    }
}

#[test]
fn dephasing_is_monotone_in_time() {
    for p in [0.3, 0.7, 0.95] {
        let mut last = f64::INFINITY;
        for k in 0..=8 {
            let cfg = NoiseConfig::t2().with_total_time(0.05 * k as f64).unwrap();
            let out = noisy_distill(p, &cfg).unwrap().p_out().unwrap();
            assert!(out <= last + 1e-9, "p = {p}, step {k}");
            last = out;
        }
    }
}

#[test]
fn slicing_converges_on_grid() {
    for i in 0..=10 {
        let p = i as f64 / 10.0;
        let a = noisy_distill(p, &NoiseConfig::t2_star().with_slicing(8).unwrap()).unwrap();
        let b = noisy_distill(p, &NoiseConfig::t2_star().with_slicing(16).unwrap()).unwrap();
        assert!((a.p_out().unwrap() - b.p_out().unwrap()).abs() < 1e-3);
    }
}
