use nested_prep::qft::{qft_level_factored, qft_level_unfactored, QftNodeParams};
use nested_prep::state::random_product_state;
use nested_prep::synth::{
    is_separable, pyramidal_levels, synth_pyramidal, synth_subtree, PyramidalOptions,
};
use nested_prep::{
    apply_circuit, build_tree, circuit_unitary, count_gates, random_state, Circuit, GateKind,
    TargetState,
};
use proptest::prelude::*;

fn output(c: &Circuit) -> TargetState {
    apply_circuit(c, &TargetState::zero(c.n()).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn back_ends_agree(n in 1usize..=7, seed in any::<u64>()) {
        let t = build_tree(&random_state(n, seed)).unwrap();
        let a = output(&synth_subtree(&t));
        let b = output(&synth_pyramidal(&t));
        prop_assert!(a.max_abs_diff(&b).unwrap() < 1e-9);
    }

    #[test]
    fn cnot_count(n in 1usize..=10, seed in any::<u64>()) {
        let t = build_tree(&random_state(n, seed)).unwrap();
        prop_assert_eq!(count_gates(&synth_pyramidal(&t)).cnot, (1 << (n + 1)) - 2 * n - 2);
    }

    #[test]
    fn rotations_per_level(n in 1usize..=6, seed in any::<u64>()) {
        let t = build_tree(&random_state(n, seed)).unwrap();
        for (k, level) in pyramidal_levels(&t, PyramidalOptions::default()).iter().enumerate() {
            let ry = level.y_block.iter().filter(|g| matches!(g.kind, GateKind::RotY(_))).count();
            let rz = level.z_block.iter().filter(|g| matches!(g.kind, GateKind::RotZ(_))).count();
            prop_assert_eq!((ry, rz), (1 << k, 1 << k));
        }
    }

    #[test]
    fn separable_means_no_entanglers(n in 1usize..=5, seed in any::<u64>()) {
        let t = build_tree(&random_product_state(n, seed)).unwrap();
        prop_assert!(is_separable(&t).unwrap().separable);
        prop_assert_eq!(count_gates(&synth_subtree(&t)).controlled_total, 0);
    }

    #[test]
    fn z_blocks_move_to_the_end(n in 1usize..=6, seed in any::<u64>()) {
        let v = random_state(n, seed);
        let t = build_tree(&v).unwrap();
        let levels = pyramidal_levels(&t, PyramidalOptions::default());
        let mut gates: Vec<_> = levels.iter().flat_map(|l| l.y_block.iter().cloned()).collect();
        gates.extend(levels.iter().flat_map(|l| l.z_block.iter().cloned()));
        gates.push(nested_prep::Gate::global_phase(t.global_phase));
        let out = output(&Circuit::from_gates(n, gates).unwrap());
        prop_assert!(out.max_abs_diff(&v).unwrap() < 1e-10);
    }

    #[test]
    fn qft_levels_factor(n in 1usize..=5, l in 0usize..5) {
        prop_assume!(l < n);
        let a = circuit_unitary(&qft_level_unfactored(n, l).unwrap()).unwrap();
        let b = circuit_unitary(&qft_level_factored(n, l).unwrap()).unwrap();
        prop_assert!(nested_prep::circuit::unitary_max_diff(&a, &b) < 1e-10);
    }

    #[test]
    fn qft_params_periodic(l in 0usize..10, k in 0usize..1 << 12, wraps in 0usize..8) {
        prop_assert_eq!(QftNodeParams::new(l, k), QftNodeParams::new(l, k + wraps * (1 << l)));
    }
}
