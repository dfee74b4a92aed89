use nalgebra::DMatrix;
use nested_prep::mat2::{self, Mat2};
use nested_prep::{apply_circuit, circuit_unitary, random_state, Circuit, Control, Gate, Polarity};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn unitary2(a: f64, b: f64, c: f64) -> Mat2 {
    mat2::mul(&mat2::rz(a), &mat2::mul(&mat2::ry(b), &mat2::rz(c)))
}

fn angle() -> impl Strategy<Value = f64> {
    -std::f64::consts::PI..std::f64::consts::PI
}

/// A single gate on `n` qubits with up to two random controls.
fn gate(n: usize) -> impl Strategy<Value = Gate> {
    (
        0..n,
        0u8..8,
        angle(),
        angle(),
        angle(),
        prop::collection::vec((0..n, any::<bool>()), 0..3),
    )
        .prop_map(move |(t, kind, a, b, c, ctl)| {
            let mut g = match kind {
                0 => Gate::ry(t, a),
                1 => Gate::rz(t, a),
                2 => Gate::phase(t, a),
                3 => Gate::x(t),
                4 => Gate::z(t),
                5 => Gate::h(t),
                6 => Gate::global_phase(a),
                _ => Gate::unitary(t, unitary2(a, b, c)),
            };
            if kind != 6 {
                let mut used = vec![t];
                for (q, bit) in ctl {
                    if !used.contains(&q) {
                        used.push(q);
                        g = g.controlled(Control {
                            qubit: q,
                            polarity: Polarity::from_bit(bit),
                        });
                    }
                }
            }
            g
        })
}

fn circuit(n: usize) -> impl Strategy<Value = Circuit> {
    prop::collection::vec(gate(n), 0..12).prop_map(move |g| Circuit::from_gates(n, g).unwrap())
}

fn max_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn dm(m: &Mat2) -> DMatrix<C64> {
    DMatrix::from_fn(2, 2, |r, c| m[r][c])
}

fn kron_all(ops: &[DMatrix<C64>]) -> DMatrix<C64> {
    ops.iter()
        .skip(1)
        .fold(ops[0].clone(), |acc, m| acc.kronecker(m))
}

proptest! {
    #[test]
    fn preserves_norm((c, seed) in (1usize..=4).prop_flat_map(|n| (circuit(n), any::<u64>()))) {
        let v = random_state(c.n(), seed);
        let out = apply_circuit(&c, &v).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn composes((a, b, seed) in (1usize..=4).prop_flat_map(|n| (circuit(n), circuit(n), any::<u64>()))) {
        let v = random_state(a.n(), seed);
        let mut ab = a.clone();
        ab.append(&b).unwrap();
        let whole = apply_circuit(&ab, &v).unwrap();
        let steps = apply_circuit(&b, &apply_circuit(&a, &v).unwrap()).unwrap();
        prop_assert!(whole.max_abs_diff(&steps).unwrap() < 1e-12);
    }

    #[test]
    fn projector_law(
        (n, c, t) in (2usize..=3).prop_flat_map(|n| (Just(n), 0..n, 0..n)).prop_filter("distinct", |(_, c, t)| c != t),
        fire_on_one in any::<bool>(),
        a in angle(), b in angle(), d in angle(),
    ) {
        let u = unitary2(a, b, d);
        let g = Gate::unitary(t, u).controlled(Control { qubit: c, polarity: Polarity::from_bit(fire_on_one) });
        let got = circuit_unitary(&Circuit::from_gates(n, vec![g]).unwrap()).unwrap();
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let p1 = DMatrix::from_row_slice(2, 2, &[zero, zero, zero, one]);
        let p0 = DMatrix::from_row_slice(2, 2, &[one, zero, zero, zero]);
        let (fire, other) = if fire_on_one { (p1, p0) } else { (p0, p1) };
        let id = DMatrix::<C64>::identity(2, 2);
        let term = |pc: &DMatrix<C64>, ut: DMatrix<C64>| {
            let ops: Vec<DMatrix<C64>> = (0..n)
                .map(|q| if q == c { pc.clone() } else if q == t { ut.clone() } else { id.clone() })
                .collect();
            kron_all(&ops)
        };
        let want = term(&other, id.clone()) + term(&fire, dm(&u));
        prop_assert!(max_diff(&got, &want) < 1e-12);
    }

    #[test]
    fn divergent_branches_commute(
        (n, d, prefix, t1, t2) in (2usize..=4)
            .prop_flat_map(|n| (Just(n), 0..n - 1))
            .prop_flat_map(|(n, d)| (
                Just(n),
                Just(d),
                prop::collection::vec(any::<bool>(), d),
                d + 1..n,
                d + 1..n,
            )),
        a in angle(), b in angle(), e in angle(),
    ) {
        let shared: Vec<Control> = prefix
            .iter()
            .enumerate()
            .map(|(q, &bit)| Control { qubit: q, polarity: Polarity::from_bit(bit) })
            .collect();
        let g1 = Gate::unitary(t1, unitary2(a, b, e)).with_controls(&shared).controlled(Control::down(d));
        let g2 = Gate::unitary(t2, unitary2(e, a, b)).with_controls(&shared).controlled(Control::up(d));
        let u12 = circuit_unitary(&Circuit::from_gates(n, vec![g1.clone(), g2.clone()]).unwrap()).unwrap();
        let u21 = circuit_unitary(&Circuit::from_gates(n, vec![g2, g1]).unwrap()).unwrap();
        prop_assert!(max_diff(&u12, &u21) < 1e-12);
    }
}
