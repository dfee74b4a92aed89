//! Quantum state preparation through nested-entanglement trees.
//!
//! A target statevector is converted into a complete binary tree of Bloch
//! angles (the ψ-tree), one node per nested entanglement between a qubit and
//! the register that follows it. Two synthesis back-ends turn that tree into
//! gate sequences:
//!
//! * [`synth::synth_subtree`] emits multiply-controlled single-qubit unitaries
//!   by recursing over subtrees.
//! * [`synth::synth_pyramidal`] emits level-by-level blocks of `Ry`/`Rz`
//!   rotations interleaved with CNOTs (uniformly controlled rotations).
//!
//! Around the two back-ends sit a separability test, a QFT generator, lossy
//! pruning of redundant subtrees, a two-qubit Schmidt circuit and a
//! generalized-Schmidt local-basis solver. Every circuit can be checked against
//! the reference statevector simulator in [`circuit`].
//!
//! Qubit 0 is the most significant bit of a basis index throughout.

pub mod circuit;
pub mod compress;
pub mod error;
pub mod mat2;
pub mod qft;
pub mod state;
pub mod synth;
pub mod tree;

pub use circuit::{apply_circuit, circuit_unitary, count_gates, export_qasm};
pub use circuit::{Circuit, Control, Gate, GateCounts, GateKind, Polarity};
pub use error::{Error, Result};
pub use state::{fidelity, normalize, random_state, FidelityReport, TargetState, EPS_ZERO};
pub use tree::{build_tree, canonicalize, dump_bloch, tree_to_state, PsiNode, PsiTree};
