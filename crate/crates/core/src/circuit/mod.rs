//! Gate-level circuits, the reference simulator and circuit export.
//!
//! Gates are stored in temporal order: `gates[0]` acts first on the input
//! state. An operator product `A·B·C` is therefore emitted as `[C, B, A]`.

mod json;
mod qasm;
mod sim;

pub use json::CIRCUIT_FORMAT_VERSION;
pub use qasm::export_qasm;
pub use sim::{apply_circuit, circuit_unitary, unitary_max_diff, MAX_UNITARY_QUBITS};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mat2::{self, Mat2};

/// Which control value triggers a gate.
///
/// `Down` fires on `|1⟩` (the usual filled-dot control); `Up` fires on `|0⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Up,
    Down,
}

impl Polarity {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Polarity::Down
        } else {
            Polarity::Up
        }
    }

    pub fn bit(self) -> bool {
        self == Polarity::Down
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn down(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: Polarity::Down,
        }
    }

    pub fn up(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: Polarity::Up,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    RotY(f64),
    RotZ(f64),
    /// `diag(1, e^{iφ})`
    PhaseShift(f64),
    PauliX,
    PauliZ,
    Hadamard,
    /// Multiplies the whole state by `e^{iξ}`; never controlled.
    GlobalPhase(f64),
    /// Exchanges the gate's target with the given qubit.
    Swap(usize),
    Unitary2x2(Mat2),
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::RotY(_) => "ry",
            GateKind::RotZ(_) => "rz",
            GateKind::PhaseShift(_) => "phase",
            GateKind::PauliX => "x",
            GateKind::PauliZ => "z",
            GateKind::Hadamard => "h",
            GateKind::GlobalPhase(_) => "global_phase",
            GateKind::Swap(_) => "swap",
            GateKind::Unitary2x2(_) => "unitary",
        }
    }

    /// Single-qubit matrix of the gate, `None` for `Swap`.
    pub fn matrix(&self) -> Option<Mat2> {
        Some(match self {
            GateKind::RotY(t) => mat2::ry(*t),
            GateKind::RotZ(p) => mat2::rz(*p),
            GateKind::PhaseShift(p) => mat2::phase(*p),
            GateKind::PauliX => mat2::pauli_x(),
            GateKind::PauliZ => mat2::pauli_z(),
            GateKind::Hadamard => mat2::hadamard(),
            GateKind::GlobalPhase(x) => mat2::scalar(*x),
            GateKind::Unitary2x2(m) => *m,
            GateKind::Swap(_) => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub target: usize,
    pub controls: Vec<Control>,
}

impl Gate {
    pub fn new(kind: GateKind, target: usize) -> Self {
        Self {
            kind,
            target,
            controls: Vec::new(),
        }
    }

    pub fn ry(target: usize, theta: f64) -> Self {
        Self::new(GateKind::RotY(theta), target)
    }

    pub fn rz(target: usize, phi: f64) -> Self {
        Self::new(GateKind::RotZ(phi), target)
    }

    pub fn phase(target: usize, phi: f64) -> Self {
        Self::new(GateKind::PhaseShift(phi), target)
    }

    pub fn x(target: usize) -> Self {
        Self::new(GateKind::PauliX, target)
    }

    pub fn z(target: usize) -> Self {
        Self::new(GateKind::PauliZ, target)
    }

    pub fn h(target: usize) -> Self {
        Self::new(GateKind::Hadamard, target)
    }

    pub fn global_phase(xi: f64) -> Self {
        Self::new(GateKind::GlobalPhase(xi), 0)
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self::new(GateKind::Swap(b), a)
    }

    pub fn unitary(target: usize, m: Mat2) -> Self {
        Self::new(GateKind::Unitary2x2(m), target)
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::x(target).controlled(Control::down(control))
    }

    /// Adds a control outside any existing ones.
    pub fn controlled(mut self, control: Control) -> Self {
        self.controls.insert(0, control);
        self
    }

    pub fn with_controls(mut self, controls: &[Control]) -> Self {
        let mut all = controls.to_vec();
        all.append(&mut self.controls);
        self.controls = all;
        self
    }

    pub fn is_cnot(&self) -> bool {
        self.kind == GateKind::PauliX
            && self.controls.len() == 1
            && self.controls[0].polarity == Polarity::Down
    }

    pub fn qubits(&self) -> Vec<usize> {
        let mut q = vec![self.target];
        if let GateKind::Swap(b) = self.kind {
            q.push(b);
        }
        q.extend(self.controls.iter().map(|c| c.qubit));
        q
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let qubits = self.qubits();
        if let Some(&bad) = qubits.iter().find(|&&q| q >= n) {
            return Err(Error::InvalidGate(format!(
                "{} references qubit {bad} on a {n}-qubit register",
                self.kind.name()
            )));
        }
        let mut seen = qubits.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != qubits.len() {
            return Err(Error::InvalidGate(format!(
                "{} uses a qubit twice",
                self.kind.name()
            )));
        }
        match &self.kind {
            GateKind::GlobalPhase(_) if !self.controls.is_empty() => Err(Error::InvalidGate(
                "global_phase cannot carry controls".into(),
            )),
            GateKind::Unitary2x2(m) if mat2::unitarity_defect(m) > 1e-10 => Err(
                Error::InvalidGate("unitary entries do not form a unitary matrix".into()),
            ),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(n);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends `other`'s gates after this circuit's.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }
}

/// Gate tallies by category.
///
/// `single_qubit + controlled_total + swap + global_phase == len` for every
/// circuit; `cnot` and `multi_controlled` are subsets of `controlled_total`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GateCounts {
    pub cnot: usize,
    pub controlled_total: usize,
    pub single_qubit: usize,
    pub multi_controlled: usize,
    pub swap: usize,
    pub global_phase: usize,
}

pub fn count_gates(circuit: &Circuit) -> GateCounts {
    let mut counts = GateCounts::default();
    for g in circuit.gates() {
        if g.is_cnot() {
            counts.cnot += 1;
        }
        if g.controls.len() >= 2 {
            counts.multi_controlled += 1;
        }
        if !g.controls.is_empty() {
            counts.controlled_total += 1;
            continue;
        }
        match g.kind {
            GateKind::Swap(_) => counts.swap += 1,
            GateKind::GlobalPhase(_) => counts.global_phase += 1,
            _ => counts.single_qubit += 1,
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_rejects_bad_indices() {
        let mut c = Circuit::new(2);
        assert!(c.push(Gate::x(2)).is_err());
        assert!(c.push(Gate::cnot(1, 1)).is_err());
        assert!(c.push(Gate::swap(0, 0)).is_err());
        assert!(c
            .push(Gate::x(0).with_controls(&[Control::down(1), Control::up(1)]))
            .is_err());
        assert!(c
            .push(Gate::global_phase(0.3).controlled(Control::down(1)))
            .is_err());
        let bad = [[num_complex::Complex64::new(2.0, 0.0); 2]; 2];
        assert!(c.push(Gate::unitary(0, bad)).is_err());
        assert!(c.push(Gate::cnot(0, 1)).is_ok());
    }

    #[test]
    fn counts_by_category() {
        assert_eq!(count_gates(&Circuit::new(3)), GateCounts::default());
        let c = Circuit::from_gates(
            3,
            vec![
                Gate::h(0),
                Gate::cnot(0, 1),
                Gate::x(1).controlled(Control::up(0)),
                Gate::ry(2, 0.1).with_controls(&[Control::down(0), Control::down(1)]),
                Gate::swap(0, 2),
                Gate::global_phase(0.2),
            ],
        )
        .unwrap();
        let k = count_gates(&c);
        assert_eq!(k.cnot, 1);
        assert_eq!(k.controlled_total, 3);
        assert_eq!(k.multi_controlled, 1);
        assert_eq!(k.single_qubit, 1);
        assert_eq!(
            k.single_qubit + k.controlled_total + k.swap + k.global_phase,
            c.len()
        );
    }
}
