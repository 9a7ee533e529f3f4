use std::f64::consts::PI;

use magicdist::gates::{
    clifford_generator, conjugates_pauli_group, quarter_turn, rotation, single_qubit_clifford_group, z_alpha,
    CliffordName, GateOp, QuarterAxis,
};
use magicdist::magic::{
    m_polarization, prepare_faulty_cycled, prepare_faulty_direct, trace_faulty_cycled, MagicStateSet,
    PreparationAngle,
};
use magicdist::state::Matrix;
use magicdist::{BlochVector, DensityOperator};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn complex_matrix(dim: usize, re: &[f64], im: &[f64]) -> Matrix {
    DMatrix::from_fn(dim, dim, |r, c| Complex64::new(re[r * dim + c], im[r * dim + c]))
}

fn random_unitary(dim: usize, re: &[f64], im: &[f64]) -> Matrix {
    complex_matrix(dim, re, im).qr().q()
}

fn random_density(dim: usize, re: &[f64], im: &[f64]) -> DensityOperator {
    let a = complex_matrix(dim, re, im);
    let m = &a * a.adjoint();
    let tr = m.trace();
    DensityOperator::new(m.map(|z| z / tr)).unwrap()
}

fn entries(dim: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    let n = dim * dim;
    (
        prop::collection::vec(-1.0f64..1.0, n),
        prop::collection::vec(-1.0f64..1.0, n),
    )
}

fn ball() -> impl Strategy<Value = BlochVector> {
    (0.0f64..1.0, 0.0f64..PI, 0.0f64..2.0 * PI).prop_map(|(r, th, ph)| {
        let r = r.cbrt();
        BlochVector::new(r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos())
    })
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

fn max_abs(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unitary_evolution_preserves_spectrum(
        n in 1usize..=5,
        k in 1usize..=3,
        seed in any::<u64>(),
        (sr, si) in entries(32),
        (ur, ui) in entries(8),
    ) {
        let k = k.min(n);
        let dim = 1 << n;
        let rho = random_density(dim, &sr[..dim * dim], &si[..dim * dim]);
        let kd = 1 << k;
        let u = random_unitary(kd, &ur[..kd * kd], &ui[..kd * kd]);
        let mut targets: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            targets.swap(i, (s >> 33) as usize % (i + 1));
        }
        targets.truncate(k);
        let out = rho.apply(&GateOp::new(u, targets, 0.0).unwrap()).unwrap();
        prop_assert!((out.trace() - 1.0).abs() < 1e-10);
        prop_assert!(max_abs(&(out.matrix() - out.matrix().adjoint())) < 1e-10);
        let (a, b) = (sorted(rho.eigenvalues()), sorted(out.eigenvalues()));
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn bloch_round_trip(b in ball()) {
        let back = DensityOperator::from_bloch(&b).unwrap().bloch().unwrap();
        prop_assert!(back.distance(&b) < 1e-12);
    }

    #[test]
    fn partial_trace_undoes_tensor(
        na in 1usize..=3,
        nb in 1usize..=2,
        (ar, ai) in entries(8),
        (br, bi) in entries(4),
    ) {
        let (da, db) = (1 << na, 1 << nb);
        let a = random_density(da, &ar[..da * da], &ai[..da * da]);
        let b = random_density(db, &br[..db * db], &bi[..db * db]);
        let keep: Vec<usize> = (0..na).collect();
        let back = a.tensor(&b).partial_trace(&keep).unwrap();
        prop_assert!(max_abs(&(back.matrix() - a.matrix())) < 1e-12);
    }

    #[test]
    fn trace_distance_triangle(
        (ar, ai) in entries(4),
        (br, bi) in entries(4),
        (cr, ci) in entries(4),
    ) {
        let a = random_density(4, &ar, &ai);
        let b = random_density(4, &br, &bi);
        let c = random_density(4, &cr, &ci);
        let ab = a.trace_distance(&b).unwrap();
        let bc = b.trace_distance(&c).unwrap();
        let ac = a.trace_distance(&c).unwrap();
        prop_assert!(ac <= ab + bc + 1e-9);
    }

    #[test]
    fn rotation_inverse_and_spinor_sign(b in ball(), theta in -10.0f64..10.0) {
        prop_assume!(b.norm() > 1e-3);
        let axis = b.scaled(1.0 / b.norm()).as_array();
        let fwd = rotation(axis, theta).unwrap();
        let back = rotation(axis, -theta).unwrap();
        let id = Matrix::identity(2, 2);
        prop_assert!(max_abs(&(fwd.matrix() * back.matrix() - &id)) < 1e-12);
        let full = rotation(axis, 2.0 * PI).unwrap();
        prop_assert!(max_abs(&(full.matrix() + &id)) < 1e-12);
    }

    #[test]
    fn cyclic_rotation_keeps_m_polarization(b in ball()) {
        let axis = [1.0 / 3f64.sqrt(); 3];
        let u = rotation(axis, 2.0 * PI / 3.0).unwrap();
        let rho = DensityOperator::from_bloch(&b).unwrap();
        let turned = rho.apply(&u).unwrap();
        let tb = turned.bloch().unwrap();
        prop_assert!((tb.y - b.x).abs() < 1e-12 && (tb.z - b.y).abs() < 1e-12 && (tb.x - b.z).abs() < 1e-12);
        prop_assert!((m_polarization(&turned).unwrap() - m_polarization(&rho).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn generators_and_pulses_are_clifford() {
    for name in [CliffordName::H, CliffordName::Sph, CliffordName::Cnot] {
        assert!(conjugates_pauli_group(&clifford_generator(name)), "{name:?}");
    }
    for axis in [QuarterAxis::X, QuarterAxis::Y] {
        for positive in [true, false] {
            assert!(conjugates_pauli_group(&quarter_turn(axis, positive)));
        }
    }
    assert!(conjugates_pauli_group(&z_alpha(PI / 2.0)));
    assert!(!conjugates_pauli_group(&z_alpha(PI / 4.0)));
}

#[test]
fn clifford_group_permutes_t_states() {
    let set = MagicStateSet::t_type();
    let group = single_qubit_clifford_group();
    assert_eq!(group.len(), 24);
    for c in &group {
        let mut hits = vec![false; set.len()];
        for rho in set.density_operators() {
            let b = rho.apply(&c.gate()).unwrap().bloch().unwrap();
            let j = set.position(&b).expect("image is a T state");
            hits[j] = true;
        }
        assert!(hits.iter().all(|&h| h), "not a permutation");
    }
}

#[test]
fn cycled_preparation_matches_direct_on_grid() {
    for i in 0..=60 {
        let a = PI + 0.5 * PI * i as f64 / 60.0;
        let cycled = prepare_faulty_cycled(PreparationAngle::new(a).unwrap());
        let direct = prepare_faulty_direct(-a.sin()).unwrap();
        assert!(max_abs(&(cycled.matrix() - direct.matrix())) < 1e-12, "a = {a}");
    }
}

#[test]
fn phase_cycle_cancels_transverse_components() {
    for i in 1..20 {
        let a = PI + 0.5 * PI * i as f64 / 20.0;
        let trace = trace_faulty_cycled(PreparationAngle::new(a).unwrap());
        for branch in &trace.branches {
            let b = branch.bloch().unwrap();
            assert!(b.x.abs() + b.y.abs() > 1e-6);
        }
        let d = trace.depolarized.bloch().unwrap();
        assert!(d.x.abs() < 1e-12 && d.y.abs() < 1e-12);
    }
}
