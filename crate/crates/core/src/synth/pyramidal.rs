//! Level-by-level synthesis with uniformly controlled rotations.
//!
//! Level `k` applies `U^b_k = Rz(φ_b) Ry(θ_b)` to qubit `k` for every setting
//! `b` of qubits `0..k`. It is realised as a uniformly controlled `Ry` block
//! followed by a uniformly controlled `Rz` block, each a Gray-code walk of
//! `2^k` rotations and `2^k` CNOTs. The `Rz` block runs the walk backwards, so
//! its first CNOT repeats the last CNOT of the `Ry` block and both are dropped:
//! `2^{k+1} − 2` CNOTs per level.

use crate::circuit::{Circuit, Control, Gate, GateKind};
use crate::error::{Error, Result};
use crate::tree::{fill_dead_nodes, PsiTree};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PyramidalOptions {
    /// Leave dead nodes at zero angles and drop rotations whose angle is
    /// exactly zero. The CNOT count formula then only bounds the result.
    pub sparse: bool,
}

/// Uncancelled blocks of one level, each in temporal order.
#[derive(Debug, Clone, PartialEq)]
pub struct PyramidalLevel {
    pub y_block: Vec<Gate>,
    pub z_block: Vec<Gate>,
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// Rotation angles `α_i = 2^{-k} Σ_b (−1)^{|b ∧ gray(i)|} a_b`.
fn walsh_angles(angles: &[f64]) -> Vec<f64> {
    let m = angles.len();
    let scale = 1.0 / m as f64;
    (0..m)
        .map(|i| {
            let g = gray(i);
            scale
                * angles
                    .iter()
                    .enumerate()
                    .map(|(b, a)| {
                        if (b & g).count_ones().is_multiple_of(2) {
                            *a
                        } else {
                            -a
                        }
                    })
                    .sum::<f64>()
        })
        .collect()
}

/// Control qubit of the `i`-th CNOT in the level-`k` walk.
fn walk_control(k: usize, i: usize) -> usize {
    let m = 1usize << k;
    let bit = (gray(i) ^ gray((i + 1) % m)).trailing_zeros() as usize;
    k - 1 - bit
}

fn rotation(kind: fn(usize, f64) -> Gate, k: usize, a: f64, sparse: bool, out: &mut Vec<Gate>) {
    if !(sparse && a == 0.0) {
        out.push(kind(k, a));
    }
}

fn level_blocks(tree: &PsiTree, k: usize, sparse: bool) -> PyramidalLevel {
    let nodes = tree.level(k);
    let thetas: Vec<f64> = nodes.iter().map(|n| n.theta).collect();
    let phis: Vec<f64> = nodes.iter().map(|n| n.phi).collect();
    let ay = walsh_angles(&thetas);
    let az = walsh_angles(&phis);
    let m = nodes.len();
    let mut y_block = Vec::with_capacity(2 * m);
    let mut z_block = Vec::with_capacity(2 * m);
    for (i, &a) in ay.iter().enumerate() {
        rotation(Gate::ry, k, a, sparse, &mut y_block);
        if k > 0 {
            y_block.push(Gate::cnot(walk_control(k, i), k));
        }
    }
    for i in (0..m).rev() {
        if k > 0 {
            z_block.push(Gate::cnot(walk_control(k, i), k));
        }
        rotation(Gate::rz, k, az[i], sparse, &mut z_block);
    }
    PyramidalLevel { y_block, z_block }
}

fn prepared(tree: &PsiTree, opts: PyramidalOptions) -> PsiTree {
    if opts.sparse {
        let mut t = tree.clone();
        for j in 0..t.n() {
            for i in 0..1usize << j {
                let node = t.node_mut(j, i);
                if node.dead {
                    node.theta = 0.0;
                    node.phi = 0.0;
                }
            }
        }
        t
    } else {
        fill_dead_nodes(tree)
    }
}

/// Full `Ry` and `Rz` blocks of every level.
pub fn pyramidal_levels(tree: &PsiTree, opts: PyramidalOptions) -> Vec<PyramidalLevel> {
    let t = prepared(tree, opts);
    (0..t.n())
        .map(|k| level_blocks(&t, k, opts.sparse))
        .collect()
}

/// The two blocks of a level with the repeated seam CNOT removed.
fn merge(level: PyramidalLevel) -> Vec<Gate> {
    let PyramidalLevel {
        mut y_block,
        z_block,
    } = level;
    let mut z = z_block.into_iter().peekable();
    if let (Some(last), Some(first)) = (y_block.last(), z.peek()) {
        if last.is_cnot() && last == first {
            y_block.pop();
            z.next();
        }
    }
    y_block.extend(z);
    y_block
}

/// Factored circuit of level `l` alone.
pub fn pyramidal_level_circuit(
    tree: &PsiTree,
    l: usize,
    opts: PyramidalOptions,
) -> Result<Circuit> {
    check_level(tree, l)?;
    let t = prepared(tree, opts);
    Ok(
        Circuit::from_gates(t.n(), merge(level_blocks(&t, l, opts.sparse)))
            .expect("pyramidal gates are valid by construction"),
    )
}

pub fn synth_pyramidal(tree: &PsiTree) -> Circuit {
    synth_pyramidal_with(tree, PyramidalOptions::default())
}

pub fn synth_pyramidal_with(tree: &PsiTree, opts: PyramidalOptions) -> Circuit {
    let mut gates = Vec::new();
    for level in pyramidal_levels(tree, opts) {
        gates.extend(merge(level));
    }
    gates.push(Gate::global_phase(tree.global_phase));
    Circuit::from_gates(tree.n(), gates).expect("pyramidal gates are valid by construction")
}

fn check_level(tree: &PsiTree, l: usize) -> Result<()> {
    if l >= tree.n() {
        return Err(Error::IndexOutOfRange {
            what: "tree level",
            index: l,
            limit: tree.n(),
        });
    }
    Ok(())
}

/// Level `l` before factorisation: one `C^{b}(U^b_l)` per control string `b`,
/// with qubit `q < l` controlled on digit `q` of `b`.
pub fn level_operator(tree: &PsiTree, l: usize) -> Result<Circuit> {
    check_level(tree, l)?;
    let mut c = Circuit::new(tree.n());
    for (b, node) in tree.level(l).iter().enumerate() {
        let controls: Vec<Control> = (0..l)
            .map(|q| {
                let bit = b >> (l - 1 - q) & 1 == 1;
                Control {
                    qubit: q,
                    polarity: crate::circuit::Polarity::from_bit(bit),
                }
            })
            .collect();
        c.push(Gate::new(GateKind::Unitary2x2(node.unitary()), l).with_controls(&controls))?;
    }
    Ok(c)
}
