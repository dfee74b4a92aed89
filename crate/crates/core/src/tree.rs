//! The ψ-tree: a complete binary tree of Bloch angles encoding a statevector.
//!
//! Node `(j, i)` sits at level `j ∈ [0, n)` and position `i ∈ [0, 2^j)`,
//! stored at flat index `2^j − 1 + i`. Its children are `(j+1, 2i)` (qubit `j`
//! reads 0) and `(j+1, 2i+1)` (qubit `j` reads 1). Each node carries
//!
//! ```text
//! α = cos(θ/2) e^{-iφ/2},   β = sin(θ/2) e^{iφ/2},   U = Rz(φ) Ry(θ)
//! ```
//!
//! and amplitude `k` of the encoded state is the product of α (left steps) and
//! β (right steps) along the path to leaf `k`, times `e^{iξ}` for the stored
//! global phase ξ.
//!
//! Angles are extracted so that every node depends only on the ray of the
//! sub-state beneath it: θ ∈ [0, π] and φ ∈ (−π, π]. Two subtrees that encode
//! the same state up to a scalar therefore carry identical angles.

use std::f64::consts::PI;
use std::fmt::Write;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat2::{self, Mat2};
use crate::state::{require_normalized, TargetState, EPS_ZERO};

/// Largest deviation of `‖v‖` from 1 accepted by [`build_tree`].
pub const NORM_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PsiNode {
    pub theta: f64,
    pub phi: f64,
    /// No amplitude flows through this node.
    pub dead: bool,
}

impl PsiNode {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self {
            theta,
            phi,
            dead: false,
        }
    }

    pub fn alpha(&self) -> C64 {
        let (c, _) = mat2::half_angle(self.theta);
        C64::from_polar(c, -0.5 * self.phi)
    }

    pub fn beta(&self) -> C64 {
        let (_, s) = mat2::half_angle(self.theta);
        C64::from_polar(s, 0.5 * self.phi)
    }

    /// `Rz(φ) Ry(θ)`; its first column is `(α, β)`.
    pub fn unitary(&self) -> Mat2 {
        mat2::node_unitary(self.theta, self.phi)
    }
}

/// Accumulated overlap `χ = |χ| e^{iξ}` of one node of the χ-tree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiNode {
    pub magnitude: f64,
    pub phase: f64,
}

impl ChiNode {
    fn from_complex(z: C64) -> Self {
        Self {
            magnitude: z.norm(),
            phase: z.arg(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsiTree {
    n: usize,
    nodes: Vec<PsiNode>,
    pub global_phase: f64,
}

#[inline]
pub fn node_index(level: usize, pos: usize) -> usize {
    (1usize << level) - 1 + pos
}

impl PsiTree {
    /// Checks the node count and that dead nodes only have dead descendants.
    pub fn new(n: usize, nodes: Vec<PsiNode>, global_phase: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parse("tree needs at least one level".into()));
        }
        let want = (1usize << n) - 1;
        if nodes.len() != want {
            return Err(Error::DimensionMismatch {
                expected: want,
                actual: nodes.len(),
            });
        }
        let tree = Self {
            n,
            nodes,
            global_phase,
        };
        for j in 0..n.saturating_sub(1) {
            for i in 0..1usize << j {
                if tree.node(j, i).dead
                    && !(tree.node(j + 1, 2 * i).dead && tree.node(j + 1, 2 * i + 1).dead)
                {
                    return Err(Error::Parse(format!(
                        "dead node ({j}, {i}) has a live child"
                    )));
                }
            }
        }
        Ok(tree)
    }

    /// Tree with every angle zero, encoding `|0…0⟩`.
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            nodes: vec![PsiNode::default(); (1usize << n) - 1],
            global_phase: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[PsiNode] {
        &self.nodes
    }

    pub fn node(&self, level: usize, pos: usize) -> &PsiNode {
        &self.nodes[node_index(level, pos)]
    }

    /// Mutable access for callers that edit angles directly. The dead flags
    /// are the caller's responsibility.
    pub fn node_mut(&mut self, level: usize, pos: usize) -> &mut PsiNode {
        &mut self.nodes[node_index(level, pos)]
    }

    pub fn level(&self, level: usize) -> &[PsiNode] {
        let start = node_index(level, 0);
        &self.nodes[start..start + (1 << level)]
    }

    pub(crate) fn check_node(&self, level: usize, pos: usize) -> Result<()> {
        if level >= self.n {
            return Err(Error::IndexOutOfRange {
                what: "tree level",
                index: level,
                limit: self.n,
            });
        }
        if pos >= 1 << level {
            return Err(Error::IndexOutOfRange {
                what: "node position",
                index: pos,
                limit: 1 << level,
            });
        }
        Ok(())
    }

    /// Normalized state of the `n − level` qubits beneath node `(level, pos)`,
    /// without any phase from above.
    pub fn subtree_state(&self, level: usize, pos: usize) -> Result<TargetState> {
        self.check_node(level, pos)?;
        let mut amps = vec![C64::new(1.0, 0.0)];
        for j in level..self.n {
            let first = pos << (j - level);
            let mut next = Vec::with_capacity(amps.len() * 2);
            for (off, a) in amps.iter().enumerate() {
                let node = self.node(j, first + off);
                next.push(a * node.alpha());
                next.push(a * node.beta());
            }
            amps = next;
        }
        TargetState::new(self.n - level, amps)
    }

    pub fn to_json(&self) -> String {
        let file = TreeFile {
            n: self.n,
            global_phase: self.global_phase,
            nodes: dump_bloch(self),
        };
        serde_json::to_string(&file).expect("tree serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TreeFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut nodes = vec![PsiNode::default(); file.nodes.len()];
        for r in &file.nodes {
            if r.level >= file.n || r.pos >= 1 << r.level {
                return Err(Error::Parse(format!(
                    "node ({}, {}) does not fit a {}-level tree",
                    r.level, r.pos, file.n
                )));
            }
            let idx = node_index(r.level, r.pos);
            if idx >= nodes.len() {
                return Err(Error::Parse("node list is incomplete".into()));
            }
            nodes[idx] = PsiNode {
                theta: r.theta,
                phi: r.phi,
                dead: r.dead,
            };
        }
        Self::new(file.n, nodes, file.global_phase)
    }

    /// Aligned text table, 12 significant digits.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "n = {}  global_phase = {:.11e}\n",
            self.n, self.global_phase
        );
        writeln!(
            out,
            "{:>5} {:>5} {:>19} {:>19} {:>5}",
            "level", "pos", "theta", "phi", "dead"
        )
        .unwrap();
        for r in dump_bloch(self) {
            writeln!(
                out,
                "{:>5} {:>5} {:>19.11e} {:>19.11e} {:>5}",
                r.level, r.pos, r.theta, r.phi, r.dead
            )
            .unwrap();
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct TreeFile {
    n: usize,
    global_phase: f64,
    nodes: Vec<BlochRecord>,
}

/// One node's Bloch sphere coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochRecord {
    pub level: usize,
    pub pos: usize,
    pub theta: f64,
    pub phi: f64,
    pub dead: bool,
}

/// Per-node records in level order.
pub fn dump_bloch(tree: &PsiTree) -> Vec<BlochRecord> {
    let mut out = Vec::with_capacity(tree.nodes.len());
    for j in 0..tree.n {
        for (i, node) in tree.level(j).iter().enumerate() {
            out.push(BlochRecord {
                level: j,
                pos: i,
                theta: node.theta,
                phi: node.phi,
                dead: node.dead,
            });
        }
    }
    out
}

/// Wraps an angle into (−π, π].
fn wrap_phase(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    if p <= -PI + 1e-12 {
        p += 2.0 * PI;
    }
    p
}

/// Combines two child overlaps into the parent node and its overlap.
fn combine(left: C64, right: C64, eps: f64) -> (PsiNode, C64) {
    let (l, r) = (left.norm(), right.norm());
    match (l <= eps, r <= eps) {
        (true, true) => (
            PsiNode {
                theta: 0.0,
                phi: 0.0,
                dead: true,
            },
            C64::new(0.0, 0.0),
        ),
        (false, true) => (PsiNode::new(0.0, 0.0), left),
        (true, false) => (PsiNode::new(PI, 0.0), right),
        (false, false) => {
            let node = PsiNode::new(2.0 * r.atan2(l), wrap_phase((right * left.conj()).arg()));
            let chi = node.alpha().conj() * left + node.beta().conj() * right;
            (node, chi)
        }
    }
}

/// Postorder χ-tree accumulation. Returns the ψ-tree nodes and every χ in
/// heap layout (interior nodes followed by the `2^n` leaves).
fn accumulate(n: usize, amps: &[C64], eps: f64) -> (Vec<PsiNode>, Vec<C64>) {
    let interior = (1usize << n) - 1;
    let mut chi = vec![C64::new(0.0, 0.0); interior + amps.len()];
    chi[interior..].copy_from_slice(amps);
    let mut nodes = vec![PsiNode::default(); interior];
    for idx in (0..interior).rev() {
        let (node, c) = combine(chi[2 * idx + 1], chi[2 * idx + 2], eps);
        nodes[idx] = node;
        chi[idx] = c;
    }
    // Rounding can leave a live node under a dead one; the zero branch above
    // never reaches it, so mark it dead too.
    for idx in 0..interior {
        if nodes[idx].dead {
            for child in [2 * idx + 1, 2 * idx + 2] {
                if child < interior {
                    nodes[child] = PsiNode {
                        theta: 0.0,
                        phi: 0.0,
                        dead: true,
                    };
                }
            }
        }
    }
    (nodes, chi)
}

/// Builds the ψ-tree of a normalized state in one postorder pass.
pub fn build_tree(state: &TargetState) -> Result<PsiTree> {
    require_normalized(state, NORM_TOLERANCE)?;
    Ok(build_tree_unchecked(state))
}

pub(crate) fn build_tree_unchecked(state: &TargetState) -> PsiTree {
    let n = state.n();
    let (nodes, chi) = accumulate(n, state.amplitudes(), EPS_ZERO);
    PsiTree {
        n,
        nodes,
        global_phase: if chi[0].norm() > EPS_ZERO {
            chi[0].arg()
        } else {
            0.0
        },
    }
}

/// Every χ of the accumulation: `2^n − 1` interior nodes in heap layout, then
/// the leaves `γ_k`.
pub fn chi_tree(state: &TargetState) -> Result<Vec<ChiNode>> {
    require_normalized(state, NORM_TOLERANCE)?;
    let (_, chi) = accumulate(state.n(), state.amplitudes(), EPS_ZERO);
    Ok(chi.into_iter().map(ChiNode::from_complex).collect())
}

/// Path products of α and β; the global phase is not applied.
pub fn tree_to_state(tree: &PsiTree) -> TargetState {
    tree.subtree_state(0, 0).expect("root always exists")
}

/// Brings a tree into canonical form.
///
/// The leaf of largest magnitude (smallest index on ties) is relabelled to
/// `|0…0⟩` by X flips on the qubits where its path turns right; bit `j` of the
/// returned mask is set when qubit `j` was flipped. Dead nodes then copy the
/// angles of the leftmost node of their level. The result satisfies
/// `X_mask · e^{iξ'} T' |0⟩ = e^{iξ} T |0⟩`.
pub fn canonicalize(tree: &PsiTree) -> Result<(PsiTree, u64)> {
    let n = tree.n;
    let mut psi = tree_to_state(tree).into_amplitudes();
    // A dead flag overrides whatever angles sit on its path.
    for j in 0..n {
        let width = 1usize << (n - j);
        for (i, node) in tree.level(j).iter().enumerate() {
            if node.dead {
                psi[i * width..(i + 1) * width].fill(C64::new(0.0, 0.0));
            }
        }
    }
    let psi = TargetState::new(n, psi)?;
    let mut k_ref = 0;
    let mut best = -1.0;
    for (k, a) in psi.amplitudes().iter().enumerate() {
        if a.norm() > best {
            best = a.norm();
            k_ref = k;
        }
    }
    if best <= EPS_ZERO {
        return Err(Error::NoValidPath);
    }
    let phase = C64::from_polar(1.0, tree.global_phase);
    let flipped: Vec<C64> = (0..psi.dim())
        .map(|k| psi.amplitudes()[k ^ k_ref] * phase)
        .collect();
    let out = fill_dead_nodes(&build_tree_unchecked(&TargetState::new(n, flipped)?));
    let mut mask = 0u64;
    for q in 0..n {
        if k_ref >> (n - 1 - q) & 1 == 1 {
            mask |= 1 << q;
        }
    }
    Ok((out, mask))
}

/// Copies the angles of the leftmost live node of each level into that
/// level's dead nodes. The encoded state does not change.
pub fn fill_dead_nodes(tree: &PsiTree) -> PsiTree {
    let mut out = tree.clone();
    for j in 0..tree.n {
        let Some(lead) = tree.level(j).iter().find(|node| !node.dead).copied() else {
            continue;
        };
        for i in 0..1usize << j {
            let node = out.node_mut(j, i);
            if node.dead {
                node.theta = lead.theta;
                node.phi = lead.phi;
            }
        }
    }
    out
}

/// Applies X to every qubit `q` with bit `q` of `mask` set.
pub fn apply_flip_mask(state: &TargetState, mask: u64) -> TargetState {
    let n = state.n();
    let mut bits = 0usize;
    for q in 0..n {
        if mask >> q & 1 == 1 {
            bits |= 1 << (n - 1 - q);
        }
    }
    let amps = (0..state.dim())
        .map(|k| state.amplitudes()[k ^ bits])
        .collect();
    TargetState::new(n, amps).expect("same shape")
}
