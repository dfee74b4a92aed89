use crate::circuit::{Circuit, Control, Gate};
use crate::mat2::{self, Mat2};
use crate::tree::{fill_dead_nodes, PsiTree};

/// Factors closer than this to the identity are left out of the circuit.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SubtreeOptions {
    /// Render ↑-controls as X gates around a ↓-controlled gate.
    pub literal_x: bool,
}

/// One entangling factor `C^{controls}(U^a Ũ^b)` acting on qubit `target`;
/// `a` and `b` are node positions on level `target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubtreeFactor {
    pub controls: Vec<Control>,
    pub target: usize,
    pub a: usize,
    pub b: usize,
}

impl SubtreeFactor {
    /// `U^a Ũ^b = Rz(φ_a) Ry(θ_a − θ_b) Rz(−φ_b)`.
    pub fn matrix(&self, tree: &PsiTree) -> Mat2 {
        let a = tree.node(self.target, self.a);
        let b = tree.node(self.target, self.b);
        mat2::mul(
            &mat2::mul(&mat2::rz(a.phi), &mat2::ry(a.theta - b.theta)),
            &mat2::rz(-b.phi),
        )
    }
}

/// Entangling factors of the subtree rooted at `(level, pos)` in temporal
/// order, each wrapped in `outer` controls: the left child's factors under an
/// extra ↑ control, the chain `C(U^a Ũ^b)` for each deeper level, then the
/// right child's factors under an extra ↓ control.
fn gamma(n: usize, level: usize, pos: usize, outer: &[Control], out: &mut Vec<SubtreeFactor>) {
    if level + 1 >= n {
        return;
    }
    let mut left = outer.to_vec();
    left.push(Control::up(level));
    gamma(n, level + 1, 2 * pos, &left, out);
    let mut inner = outer.to_vec();
    inner.push(Control::down(level));
    for k in level + 1..n {
        let shift = k - level - 1;
        out.push(SubtreeFactor {
            controls: inner.clone(),
            target: k,
            a: (2 * pos + 1) << shift,
            b: (2 * pos) << shift,
        });
    }
    gamma(n, level + 1, 2 * pos + 1, &inner, out);
}

/// Every entangling factor of the tree, temporal order, identities included.
pub fn subtree_factors(tree: &PsiTree) -> Vec<SubtreeFactor> {
    let mut out = Vec::new();
    gamma(tree.n(), 0, 0, &[], &mut out);
    out
}

pub fn synth_subtree(tree: &PsiTree) -> Circuit {
    synth_subtree_with(tree, SubtreeOptions::default())
}

/// Single-qubit unitaries of the leftmost node of each level, then the
/// entangling factors, then the global phase. Dead nodes first take the angles
/// of their level's leftmost live node, so a product state yields no
/// controlled gates.
pub fn synth_subtree_with(tree: &PsiTree, opts: SubtreeOptions) -> Circuit {
    let tree = fill_dead_nodes(tree);
    let n = tree.n();
    let mut gates = Vec::new();
    for k in 0..n {
        gates.push(Gate::unitary(k, tree.node(k, 0).unitary()));
    }
    for f in subtree_factors(&tree) {
        let m = f.matrix(&tree);
        if mat2::max_diff(&m, &mat2::IDENTITY) <= IDENTITY_TOLERANCE {
            continue;
        }
        if opts.literal_x {
            let ups: Vec<usize> = f
                .controls
                .iter()
                .filter(|c| !c.polarity.bit())
                .map(|c| c.qubit)
                .collect();
            let downs: Vec<Control> = f.controls.iter().map(|c| Control::down(c.qubit)).collect();
            gates.extend(ups.iter().map(|&q| Gate::x(q)));
            gates.push(Gate::unitary(f.target, m).with_controls(&downs));
            gates.extend(ups.iter().map(|&q| Gate::x(q)));
        } else {
            gates.push(Gate::unitary(f.target, m).with_controls(&f.controls));
        }
    }
    gates.push(Gate::global_phase(tree.global_phase));
    Circuit::from_gates(n, gates).expect("subtree gates are valid by construction")
}
