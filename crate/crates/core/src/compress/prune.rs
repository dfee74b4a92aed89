//! Pruning nearly redundant sibling subtrees and swapping branches.
//!
//! Below node `(j, i)` the register holds `α|0⟩|Ψ1⟩ + β|1⟩|Ψ2⟩` on qubits
//! `j..n`. With `κ = ⟨Ψ1|Ψ2⟩` the reduced state of qubit `j` is
//!
//! ```text
//! ρ = [[|α|², αβ*κ*], [α*βκ, |β|²]]
//! ```
//!
//! whose eigenvalues `λ±` solve `λ² − λ + |α|²|β|²(1 − |κ|²) = 0`. Pruning
//! keeps `|0⟩|Ψ1⟩` and restores qubit `j` with the eigenbasis rotation
//! `V = [u+, u−]`, controlled on the path to the node.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::circuit::{Circuit, Control, Gate, Polarity};
use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::state::{fidelity, TargetState, EPS_ZERO};
use crate::tree::{PsiNode, PsiTree};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PruneAnalysis {
    pub level: usize,
    pub pos: usize,
    /// `⟨Ψ1|Ψ2⟩`
    pub kappa: C64,
    pub alpha: C64,
    pub beta: C64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    /// Eigenbasis of the reduced state, `u+` in the first column.
    pub rotation: Mat2,
}

impl PruneAnalysis {
    /// `V` on qubit `level`, controlled on the path to the node.
    pub fn restore_gate(&self) -> Gate {
        Gate::unitary(self.level, self.rotation).with_controls(&path_controls(self.level, self.pos))
    }

    /// Fidelity of the pruned state against the original when the node is
    /// the root: `λ+² |u+_0|² / |α|²`, which is `λ+²` for `|α| = |β|`.
    pub fn predicted_fidelity(&self) -> f64 {
        let u0 = self.rotation[0][0].norm_sqr();
        self.lambda_plus * self.lambda_plus * u0 / self.alpha.norm_sqr()
    }
}

/// Controls selecting the path to node `(level, pos)`.
pub fn path_controls(level: usize, pos: usize) -> Vec<Control> {
    (0..level)
        .map(|q| Control {
            qubit: q,
            polarity: Polarity::from_bit(pos >> (level - 1 - q) & 1 == 1),
        })
        .collect()
}

fn live_node(tree: &PsiTree, level: usize, pos: usize) -> Result<()> {
    tree.check_node(level, pos)?;
    if tree.node(level, pos).dead {
        return Err(Error::DeadSubtree { level, pos });
    }
    Ok(())
}

/// Overlap `⟨Ψ_A|Ψ_B⟩` of two same-level subtree states.
pub fn subtree_overlap(tree: &PsiTree, a: (usize, usize), b: (usize, usize)) -> Result<C64> {
    if a.0 != b.0 {
        return Err(Error::LevelMismatch(a.0, b.0));
    }
    live_node(tree, a.0, a.1)?;
    live_node(tree, b.0, b.1)?;
    let sa = tree.subtree_state(a.0, a.1)?;
    let sb = tree.subtree_state(b.0, b.1)?;
    Ok(fidelity(&sa, &sb)?.overlap)
}

/// Reduced-state analysis of node `(level, pos)`.
pub fn analyze(tree: &PsiTree, level: usize, pos: usize) -> Result<PruneAnalysis> {
    live_node(tree, level, pos)?;
    let kappa = if level + 1 < tree.n() {
        subtree_overlap(tree, (level + 1, 2 * pos), (level + 1, 2 * pos + 1))?
    } else {
        C64::new(1.0, 0.0)
    };
    let node = tree.node(level, pos);
    let (alpha, beta) = (node.alpha(), node.beta());
    let (a2, b2) = (alpha.norm_sqr(), beta.norm_sqr());
    let c = a2 * b2 * (1.0 - kappa.norm_sqr());
    let root = (1.0 - 4.0 * c).max(0.0).sqrt();
    let (lambda_plus, lambda_minus) = ((1.0 + root) / 2.0, (1.0 - root) / 2.0);
    let off = alpha * beta.conj() * kappa.conj();
    let mut u = [off, C64::new(lambda_plus - a2, 0.0)];
    let len = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
    if len <= EPS_ZERO {
        u = if a2 >= b2 {
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
        } else {
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
        };
    } else {
        u = [u[0] / len, u[1] / len];
    }
    let rotation = [[u[0], -u[1].conj()], [u[1], u[0].conj()]];
    Ok(PruneAnalysis {
        level,
        pos,
        kappa,
        alpha,
        beta,
        lambda_plus,
        lambda_minus,
        rotation,
    })
}

/// Positions of the descendants of `(level, pos)` on deeper level `d`.
fn descendants(level: usize, pos: usize, d: usize) -> std::ops::Range<usize> {
    let w = 1usize << (d - level);
    pos * w..(pos + 1) * w
}

/// Drops the right branch below `(level, pos)` when `1 − |κ| ≤ tolerance`.
///
/// The returned tree keeps the left subtree, sets the node to `θ = φ = 0` and
/// marks the right subtree dead. Applying [`PruneAnalysis::restore_gate`] to
/// its state approximates the original.
pub fn prune(
    tree: &PsiTree,
    node: (usize, usize),
    tolerance: f64,
) -> Result<(PsiTree, PruneAnalysis)> {
    let (level, pos) = node;
    let analysis = analyze(tree, level, pos)?;
    let deficit = 1.0 - analysis.kappa.norm();
    if deficit > tolerance {
        return Err(Error::ToleranceExceeded { deficit, tolerance });
    }
    let mut out = tree.clone();
    *out.node_mut(level, pos) = PsiNode::new(0.0, 0.0);
    for d in level + 1..tree.n() {
        for p in descendants(level + 1, 2 * pos + 1, d) {
            *out.node_mut(d, p) = PsiNode {
                theta: 0.0,
                phi: 0.0,
                dead: true,
            };
        }
    }
    Ok((out, analysis))
}

/// Prunes a pair of sibling subtrees; any other pair is `NotAdjacent`.
pub fn prune_pair(
    tree: &PsiTree,
    a: (usize, usize),
    b: (usize, usize),
    tolerance: f64,
) -> Result<(PsiTree, PruneAnalysis)> {
    if a.0 != b.0 {
        return Err(Error::LevelMismatch(a.0, b.0));
    }
    tree.check_node(a.0, a.1)?;
    tree.check_node(b.0, b.1)?;
    if a.0 == 0 || a.1 == b.1 || a.1 / 2 != b.1 / 2 {
        return Err(Error::NotAdjacent);
    }
    prune(tree, (a.0 - 1, a.1 / 2), tolerance)
}

/// State of a pruned tree with the restoring rotation applied.
pub fn restored_state(pruned: &PsiTree, analysis: &PruneAnalysis) -> Result<TargetState> {
    let c = Circuit::from_gates(pruned.n(), vec![analysis.restore_gate()])?;
    let psi = crate::tree::tree_to_state(pruned).with_phase(pruned.global_phase);
    crate::circuit::apply_circuit(&c, &psi)
}

/// Swaps the two child subtrees of a live node.
///
/// The node becomes `(π − θ, −φ)` so that the new tree's state is the old one
/// with qubit `j` flipped on the node's path; the returned circuit holds that
/// controlled X, taking the new state back to the old one.
pub fn rearrange_branches(tree: &PsiTree, node: (usize, usize)) -> Result<(PsiTree, Circuit)> {
    let (level, pos) = node;
    live_node(tree, level, pos)?;
    let mut out = tree.clone();
    let old = *tree.node(level, pos);
    *out.node_mut(level, pos) = PsiNode {
        theta: std::f64::consts::PI - old.theta,
        phi: -old.phi,
        dead: false,
    };
    for d in level + 1..tree.n() {
        let left = descendants(level + 1, 2 * pos, d);
        let right = descendants(level + 1, 2 * pos + 1, d);
        for (l, r) in left.zip(right) {
            let (a, b) = (*tree.node(d, l), *tree.node(d, r));
            *out.node_mut(d, l) = b;
            *out.node_mut(d, r) = a;
        }
    }
    let gate = Gate::x(level).with_controls(&path_controls(level, pos));
    Ok((out, Circuit::from_gates(tree.n(), vec![gate])?))
}
