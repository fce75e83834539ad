use noisebit::gates::{apply_gate, apply_sequence, gate_cost, standard_gates, Gate2x2, GateOp};
use noisebit::nbl::{brute_force_state, BitString, OpCount, ProductState};
use num_complex::Complex64;
use proptest::prelude::*;

/// A general unitary from Euler angles and a global phase.
fn euler(alpha: f64, beta: f64, gamma: f64, theta: f64) -> Gate2x2 {
    let e = |phi: f64| Complex64::from_polar(1.0, phi);
    let (s, c) = theta.sin_cos();
    let m = [[e(alpha + beta) * c, e(alpha + gamma) * s], [-e(alpha - gamma) * s, e(alpha - beta) * c]];
    Gate2x2::unitary("U", m).unwrap()
}

fn arb_gate() -> impl Strategy<Value = Gate2x2> {
    let angle = -std::f64::consts::PI..std::f64::consts::PI;
    prop_oneof![
        (0usize..5).prop_map(|i| standard_gates()[i].clone()),
        (angle.clone(), angle.clone(), angle.clone(), angle).prop_map(|(a, b, g, t)| euler(a, b, g, t)),
    ]
}

fn arb_circuit() -> impl Strategy<Value = (usize, Vec<GateOp>)> {
    (1usize..=10).prop_flat_map(|n| {
        let ops = prop::collection::vec((arb_gate(), 0..n), 0..=100)
            .prop_map(|v| v.into_iter().map(|(g, b)| GateOp::new(g, b)).collect());
        (Just(n), ops)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_form_matches_state_vector((n, ops) in arb_circuit()) {
        let mut st = ProductState::basis_zero(n);
        let cost = apply_sequence(&mut st, &ops).unwrap();
        prop_assert_eq!(cost.total(), 6 * ops.len() as u64);
        let dense = brute_force_state(n, &ops).unwrap();
        for i in 0..1u64 << n {
            let c = BitString::from_index(n, i);
            let a = st.amplitude(&c, &mut OpCount::default()).unwrap();
            prop_assert!((a - dense.amplitude(&c)).norm() < 1e-9, "index {}", i);
        }
    }

    #[test]
    fn unitary_gates_keep_the_state_normalized((n, ops) in arb_circuit()) {
        let mut st = ProductState::basis_zero(n);
        apply_sequence(&mut st, &ops).unwrap();
        prop_assert!(st.normalization_defect() < 1e-12);
    }

    #[test]
    fn gate_then_adjoint_is_identity(g in arb_gate(), re in -1.0f64..1.0, im in -1.0f64..1.0) {
        let mut st = ProductState::from_pairs(vec![[Complex64::new(re, im), Complex64::new(im, -re)]]).unwrap();
        let before = st.pair(0);
        apply_gate(&mut st, 0, &g).unwrap();
        apply_gate(&mut st, 0, &g.adjoint()).unwrap();
        let after = st.pair(0);
        prop_assert!((after[0] - before[0]).norm() < 1e-12 && (after[1] - before[1]).norm() < 1e-12);
    }
}

#[test]
fn gate_cost_does_not_depend_on_n() {
    for g in standard_gates() {
        assert_eq!(gate_cost(&g), OpCount { mul: 4, add: 2 });
        for n in [1usize, 10, 100, 200] {
            let mut st = ProductState::full_superposition(n);
            for bit in [0, n / 2, n - 1] {
                assert_eq!(apply_gate(&mut st, bit, &g).unwrap().total(), 6, "{} on N = {n}", g.name);
            }
        }
    }
}

#[test]
fn dense_baseline_cost_grows_with_the_state() {
    let dense = brute_force_state(10, &[GateOp::new(Gate2x2::h(), 3)]).unwrap();
    assert!(dense.ops.total() >= 1 << 10);
    assert_eq!(dense.ops.total(), 3 << 10);
}

#[test]
fn out_of_range_bit_is_rejected() {
    let mut st = ProductState::basis_zero(4);
    assert!(apply_gate(&mut st, 4, &Gate2x2::x()).is_err());
    assert!(brute_force_state(4, &[GateOp::new(Gate2x2::x(), 9)]).is_err());
    assert!(brute_force_state(21, &[]).is_err());
}
