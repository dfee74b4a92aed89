//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary so the
//! report is always printed; exits non-zero if any criterion fails.

use std::f64::consts::FRAC_1_SQRT_2;
use std::time::{Duration, Instant};

use nested_prep::circuit::unitary_max_diff;
use nested_prep::compress::{phase_fixed_basis, prune, restored_state, solve_generalized_schmidt};
use nested_prep::mat2::{self, Mat2};
use nested_prep::qft::{dft_matrix, qft_circuit};
use nested_prep::state::random_product_state;
use nested_prep::synth::{
    is_separable, synth_pyramidal, synth_subtree, synth_subtree_with, SubtreeOptions,
};
use nested_prep::{
    apply_circuit, build_tree, circuit_unitary, count_gates, fidelity, normalize, random_state,
    Circuit, Control, Error, Gate, GateKind, TargetState,
};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn zero(n: usize) -> TargetState {
    TargetState::zero(n).unwrap()
}

fn corpus() -> impl Iterator<Item = (usize, u64, TargetState)> {
    (1..=8).flat_map(|n| (0..100u64).map(move |s| (n, s, random_state(n, 1000 * n as u64 + s))))
}

fn round_trip() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut count = 0;
    for (_, _, v) in corpus() {
        let t = build_tree(&v).unwrap();
        for c in [synth_subtree(&t), synth_pyramidal(&t)] {
            let out = apply_circuit(&c, &zero(v.n())).unwrap();
            worst = worst.max(1.0 - fidelity(&out, &v).unwrap().fidelity);
            count += 1;
        }
    }
    let took = start.elapsed();
    outcome(
        worst <= 1e-9 && took < Duration::from_secs(120),
        format!(
            "{count} circuits, worst infidelity {worst:.3e}, {:.2}s",
            took.as_secs_f64()
        ),
    )
}

fn cnot_formula() -> Outcome {
    let want = [2, 8, 22, 52, 114, 240, 494, 1004];
    let got: Vec<usize> = (2..=9)
        .map(|n| {
            let t = build_tree(&random_state(n, 77 + n as u64)).unwrap();
            count_gates(&synth_pyramidal(&t)).cnot
        })
        .collect();
    outcome(got == want, format!("counts {got:?} for n = 2..9"))
}

fn qft() -> Outcome {
    let mut worst = 0.0f64;
    let mut census_ok = true;
    for n in 1..=6usize {
        let c = qft_circuit(n).unwrap();
        worst = worst.max(unitary_max_diff(
            &circuit_unitary(&c).unwrap(),
            &dft_matrix(n),
        ));
        let k = count_gates(&c);
        let h = c
            .gates()
            .iter()
            .filter(|g| g.kind == GateKind::Hadamard)
            .count();
        let cp = c
            .gates()
            .iter()
            .filter(|g| matches!(g.kind, GateKind::PhaseShift(_)) && g.controls.len() == 1)
            .count();
        census_ok &=
            h == n && cp == n * (n - 1) / 2 && k.swap == n / 2 && c.len() == h + cp + k.swap;
    }
    outcome(
        worst < 1e-10 && census_ok,
        format!(
            "max DFT deviation {worst:.3e}, census {}",
            if census_ok { "exact" } else { "wrong" }
        ),
    )
}

/// Product iff every single-qubit reduced state is pure.
fn is_product_oracle(v: &TargetState) -> bool {
    let n = v.n();
    let a = v.amplitudes();
    (0..n).all(|q| {
        let bit = 1usize << (n - 1 - q);
        let mut rho = [[C64::new(0.0, 0.0); 2]; 2];
        for i in 0..a.len() {
            if i & bit == 0 {
                let (x, y) = (a[i], a[i | bit]);
                rho[0][0] += x * x.conj();
                rho[0][1] += x * y.conj();
                rho[1][0] += y * x.conj();
                rho[1][1] += y * y.conj();
            }
        }
        let purity: f64 = rho.iter().flatten().map(|z| z.norm_sqr()).sum();
        purity > 1.0 - 1e-9
    })
}

fn basis_qubit(bit: bool) -> TargetState {
    TargetState::basis(1, bit as usize).unwrap()
}

/// Mix of generic, product, product-with-basis-factors and partly entangled
/// states.
fn separability_state(i: u64) -> TargetState {
    let n = 1 + (i as usize / 4) % 5;
    let seed = 5000 + i;
    match i % 4 {
        0 => random_state(n, seed),
        1 => random_product_state(n, seed),
        2 => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut s = if rng.random_bool(0.5) {
                basis_qubit(rng.random_bool(0.5))
            } else {
                random_state(1, seed)
            };
            for q in 1..n {
                let f = if rng.random_bool(0.5) {
                    basis_qubit(rng.random_bool(0.5))
                } else {
                    random_state(1, seed * 31 + q as u64)
                };
                s = s.tensor(&f).unwrap();
            }
            s
        }
        _ => {
            if n < 3 {
                random_state(n, seed)
            } else {
                random_product_state(n - 2, seed)
                    .tensor(&random_state(2, seed))
                    .unwrap()
            }
        }
    }
}

fn real_state(n: usize, re: &[f64]) -> TargetState {
    normalize(&TargetState::new(n, re.iter().map(|&x| C64::new(x, 0.0)).collect()).unwrap())
        .unwrap()
}

fn separability() -> Outcome {
    let mut states: Vec<TargetState> = (0..400).map(separability_state).collect();
    states.push(real_state(2, &[1.0, 0.0, 0.0, 1.0]));
    let mut ghz = vec![0.0; 8];
    ghz[0] = 1.0;
    ghz[7] = 1.0;
    states.push(real_state(3, &ghz));
    let mut w = vec![0.0; 8];
    w[1] = 1.0;
    w[2] = 1.0;
    w[4] = 1.0;
    states.push(real_state(3, &w));
    let mut mismatches = 0;
    let mut products = 0;
    for v in &states {
        let want = is_product_oracle(v);
        products += want as usize;
        let got = is_separable(&build_tree(v).unwrap()).unwrap().separable;
        mismatches += (got != want) as usize;
    }
    outcome(
        mismatches == 0,
        format!(
            "{} states ({products} product), {mismatches} mismatches",
            states.len()
        ),
    )
}

fn node_u(t: &nested_prep::PsiTree, j: usize, i: usize) -> Mat2 {
    let node = t.node(j, i);
    mat2::mul(&mat2::rz(node.phi), &mat2::ry(node.theta))
}

/// `U^a Ũ^b` with `Ũ = U^{-1}`.
fn diff(t: &nested_prep::PsiTree, j: usize, a: usize, b: usize) -> Mat2 {
    mat2::mul(&node_u(t, j, a), &mat2::dagger(&node_u(t, j, b)))
}

fn same_structure(got: &Circuit, want: &[Gate]) -> (bool, f64) {
    if got.len() != want.len() {
        return (false, f64::INFINITY);
    }
    let mut worst = 0.0f64;
    let mut ok = true;
    for (g, w) in got.gates().iter().zip(want) {
        ok &= g.target == w.target && g.controls == w.controls;
        match (&g.kind, &w.kind) {
            (GateKind::Unitary2x2(x), GateKind::Unitary2x2(y)) => {
                worst = worst.max(mat2::max_diff(x, y))
            }
            (GateKind::GlobalPhase(x), GateKind::GlobalPhase(y)) => {
                worst = worst.max((x - y).abs())
            }
            (x, y) => ok &= x == y,
        }
    }
    (ok, worst)
}

fn closed_forms() -> Outcome {
    let mut ok = true;
    let mut worst = 0.0f64;
    for seed in 0..10 {
        // C^0(U^1_1 Ũ^0_1) U^0_1 U^0_0
        let t = build_tree(&random_state(2, 300 + seed)).unwrap();
        let want2 = vec![
            Gate::unitary(0, node_u(&t, 0, 0)),
            Gate::unitary(1, node_u(&t, 1, 0)),
            Gate::unitary(1, diff(&t, 1, 1, 0)).controlled(Control::down(0)),
            Gate::global_phase(t.global_phase),
        ];
        // C^{0,1}(U^3_2 Ũ^2_2) C^0(U^2_2 Ũ^0_2) C^0(U^1_1 Ũ^0_1)
        //   X_0 C^{0,1}(U^1_2 Ũ^0_2) X_0 U^0_2 U^0_1 U^0_0
        let t3 = build_tree(&random_state(3, 400 + seed)).unwrap();
        let base3 = [
            Gate::unitary(0, node_u(&t3, 0, 0)),
            Gate::unitary(1, node_u(&t3, 1, 0)),
            Gate::unitary(2, node_u(&t3, 2, 0)),
        ];
        let c01 = [Control::down(0), Control::down(1)];
        let tail3 = [
            Gate::unitary(1, diff(&t3, 1, 1, 0)).controlled(Control::down(0)),
            Gate::unitary(2, diff(&t3, 2, 2, 0)).controlled(Control::down(0)),
            Gate::unitary(2, diff(&t3, 2, 3, 2)).with_controls(&c01),
            Gate::global_phase(t3.global_phase),
        ];
        let literal: Vec<Gate> = base3
            .iter()
            .cloned()
            .chain([
                Gate::x(0),
                Gate::unitary(2, diff(&t3, 2, 1, 0)).with_controls(&c01),
                Gate::x(0),
            ])
            .chain(tail3.iter().cloned())
            .collect();
        let native: Vec<Gate> = base3
            .iter()
            .cloned()
            .chain([Gate::unitary(2, diff(&t3, 2, 1, 0))
                .with_controls(&[Control::up(0), Control::down(1)])])
            .chain(tail3.iter().cloned())
            .collect();

        for (got, want) in [
            (synth_subtree(&t), want2.as_slice()),
            (synth_subtree(&t3), native.as_slice()),
            (
                synth_subtree_with(&t3, SubtreeOptions { literal_x: true }),
                literal.as_slice(),
            ),
        ] {
            let (s, d) = same_structure(&got, want);
            ok &= s;
            worst = worst.max(d);
            let want_c = Circuit::from_gates(got.n(), want.to_vec()).unwrap();
            let u = unitary_max_diff(
                &circuit_unitary(&got).unwrap(),
                &circuit_unitary(&want_c).unwrap(),
            );
            worst = worst.max(u);
        }
    }
    outcome(
        ok && worst < 1e-10,
        format!(
            "structure {}, max matrix deviation {worst:.3e}",
            if ok { "matches" } else { "differs" }
        ),
    )
}

/// `(|0⟩|Ψ1⟩ + |1⟩|Ψ2⟩)/√2` with `⟨Ψ1|Ψ2⟩ = κ`.
fn kappa_family(k: f64, seed: u64) -> TargetState {
    let m = 3;
    let p1 = random_state(m, seed);
    let r = random_state(m, seed + 1);
    let ov = fidelity(&p1, &r).unwrap().overlap;
    let perp: Vec<C64> = r
        .amplitudes()
        .iter()
        .zip(p1.amplitudes())
        .map(|(b, a)| b - a * ov)
        .collect();
    let perp = normalize(&TargetState::new(m, perp).unwrap()).unwrap();
    let kappa = C64::from_polar(k, 0.3 + seed as f64);
    let tail = (1.0 - k * k).max(0.0).sqrt();
    let p2: Vec<C64> = p1
        .amplitudes()
        .iter()
        .zip(perp.amplitudes())
        .map(|(a, b)| a * kappa + b * tail)
        .collect();
    let amps: Vec<C64> = p1
        .amplitudes()
        .iter()
        .chain(&p2)
        .map(|z| z * FRAC_1_SQRT_2)
        .collect();
    TargetState::new(m + 1, amps).unwrap()
}

fn pruning() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for k in [1.0, 0.999, 0.99, 0.9] {
        for seed in 0..10 {
            let v = kappa_family(k, 600 + 10 * seed);
            let t = build_tree(&v).unwrap();
            let (pruned, a) = prune(&t, (0, 0), 0.2).unwrap();
            let back = restored_state(&pruned, &a).unwrap();
            let f = fidelity(&back, &v).unwrap().fidelity;
            worst = worst.max((f - a.lambda_plus * a.lambda_plus).abs());
            worst = worst.max((a.kappa.norm() - k).abs());
            count += 1;
        }
    }
    outcome(
        worst < 1e-9,
        format!("{count} states, max |F − λ+²| {worst:.3e}"),
    )
}

fn generalized_schmidt() -> Outcome {
    let m = 3;
    let (mut failures, mut violations) = (0, 0);
    let mut worst_flip = 0.0f64;
    for seed in 0..50 {
        let v = random_state(m, 900 + seed);
        match solve_generalized_schmidt(&v, 1e-8) {
            Ok(r) => {
                let a = r.state.amplitudes();
                for k in 0..m {
                    worst_flip = worst_flip.max(a[1 << (m - 1 - k)].norm());
                }
                let phases_ok = phase_fixed_basis(m)
                    .iter()
                    .all(|&s| a[s].im.abs() < 1e-9 && a[s].re >= 0.0);
                let kept = r.transform.apply_inverse(&r.state).unwrap();
                let same = (fidelity(&kept, &v).unwrap().fidelity - 1.0).abs() < 1e-9;
                violations += (!phases_ok || !same || worst_flip >= 1e-8) as usize;
            }
            Err(Error::ConvergenceFailure { .. }) => failures += 1,
            Err(e) => panic!("unexpected solver error: {e}"),
        }
    }
    outcome(
        failures == 0 && violations == 0,
        format!(
            "50 states, ConvergenceFailure rate {failures}/50, constraint violations {violations}, max single-flip {worst_flip:.3e}"
        ),
    )
}

fn cross_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for (_, _, v) in corpus() {
        let t = build_tree(&v).unwrap();
        let a = apply_circuit(&synth_subtree(&t), &zero(v.n())).unwrap();
        let b = apply_circuit(&synth_pyramidal(&t), &zero(v.n())).unwrap();
        worst = worst.max(a.max_abs_diff(&b).unwrap());
    }
    outcome(
        worst < 1e-9,
        format!("800 states, max amplitude gap {worst:.3e}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("round-trip synthesis", round_trip),
        ("CNOT-count formula", cnot_formula),
        ("QFT equivalence", qft),
        ("separability criterion", separability),
        ("subtree closed forms", closed_forms),
        ("pruning fidelity law", pruning),
        ("generalized Schmidt", generalized_schmidt),
        ("back-end cross-equivalence", cross_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!(
            "{} criterion {} ({name}): {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
        failed += !o.pass as usize;
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
