use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::state::TargetState;

/// `circuit_unitary` refuses registers above this size.
pub const MAX_UNITARY_QUBITS: usize = 10;

/// Simulates `circuit` on `input`. Controlled gates act only on the sub-block
/// selected by their control polarities.
pub fn apply_circuit(circuit: &Circuit, input: &TargetState) -> Result<TargetState> {
    if circuit.n() != input.n() {
        return Err(Error::DimensionMismatch {
            expected: circuit.n(),
            actual: input.n(),
        });
    }
    let mut amps = input.amplitudes().to_vec();
    for g in circuit.gates() {
        apply_gate(g, circuit.n(), &mut amps);
    }
    TargetState::new(circuit.n(), amps)
}

/// Full matrix of the circuit; column `k` is the image of basis state `|k⟩`.
pub fn circuit_unitary(circuit: &Circuit) -> Result<DMatrix<C64>> {
    let n = circuit.n();
    if n > MAX_UNITARY_QUBITS {
        return Err(Error::TooLarge {
            what: "register for unitary construction",
            size: n,
            limit: MAX_UNITARY_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut u = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    let mut col = vec![C64::new(0.0, 0.0); dim];
    for k in 0..dim {
        col.iter_mut().for_each(|a| *a = C64::new(0.0, 0.0));
        col[k] = C64::new(1.0, 0.0);
        for g in circuit.gates() {
            apply_gate(g, n, &mut col);
        }
        u.column_mut(k).copy_from_slice(&col);
    }
    Ok(u)
}

/// Largest entrywise modulus of `a - b`.
pub fn unitary_max_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "matrix shapes differ");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[inline]
fn bit(n: usize, qubit: usize) -> usize {
    1 << (n - 1 - qubit)
}

fn apply_gate(g: &Gate, n: usize, amps: &mut [C64]) {
    let (mut mask, mut want) = (0usize, 0usize);
    for c in &g.controls {
        let b = bit(n, c.qubit);
        mask |= b;
        if c.polarity.bit() {
            want |= b;
        }
    }
    let t = bit(n, g.target);
    match g.kind {
        GateKind::Swap(other) => {
            let o = bit(n, other);
            for k in 0..amps.len() {
                if k & mask == want && k & t != 0 && k & o == 0 {
                    amps.swap(k, k ^ t ^ o);
                }
            }
        }
        GateKind::GlobalPhase(xi) => {
            let p = C64::from_polar(1.0, xi);
            amps.iter_mut().for_each(|a| *a *= p);
        }
        _ => {
            let m = g.kind.matrix().expect("non-swap gates have a matrix");
            for k0 in 0..amps.len() {
                if k0 & t != 0 || k0 & mask != want {
                    continue;
                }
                let k1 = k0 | t;
                let (a0, a1) = (amps[k0], amps[k1]);
                amps[k0] = m[0][0] * a0 + m[0][1] * a1;
                amps[k1] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }
}
