//! Quantum Fourier transform from tree parameters.
//!
//! The transform is a tree whose node unitaries are periodic in the node
//! position: on level `l`,
//!
//! ```text
//! U^k_l = (−1)^k e^{iφ/4} Rz(φ/2) Ry(π/2),   φ = 2πk / 2^l,
//! ```
//!
//! and leaf `k` carries the sign `(−1)^k`. Factoring each level yields the
//! familiar Hadamard plus controlled-phase circuit followed by a bit-reversal
//! swap layer. The target matrix is `F[j][k] = e^{2πijk/N} / √N`.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::circuit::{apply_circuit, Circuit, Control, Gate, Polarity};
use crate::error::{Error, Result};
use crate::mat2::{self, Mat2};
use crate::state::TargetState;

/// Largest register [`qft_circuit`] will build.
pub const MAX_QFT_QUBITS: usize = 10;
/// Largest register [`qft_branch_check`] will simulate.
pub const MAX_BRANCH_QUBITS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QftNodeParams {
    pub level: usize,
    pub position: usize,
    /// `2πk / 2^l` with `k` reduced mod `2^l`.
    pub phi: f64,
    /// `(−1)^k`
    pub sign: i8,
    /// `φ/4`, the phase of the scalar prefactor.
    pub scalar_phase: f64,
}

impl QftNodeParams {
    /// Parameters of node `(level, k)`; only `k mod 2^level` matters.
    pub fn new(level: usize, k: usize) -> Self {
        let period = 1usize << level;
        let k = k % period;
        let phi = 2.0 * PI * k as f64 / period as f64;
        Self {
            level,
            position: k,
            phi,
            sign: if k.is_multiple_of(2) { 1 } else { -1 },
            scalar_phase: phi / 4.0,
        }
    }

    /// `(−1)^k e^{iφ/4} Rz(φ/2) Ry(π/2)`
    pub fn unitary(&self) -> Mat2 {
        let u = mat2::mul(&mat2::rz(self.phi / 2.0), &mat2::ry(FRAC_PI_2));
        let s = C64::from_polar(self.sign as f64, self.scalar_phase);
        u.map(|row| row.map(|z| z * s))
    }
}

/// Node parameters of every level plus the leaf signs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QftParams {
    pub n: usize,
    /// `levels[l][k]` for `l ∈ [0, n)`.
    pub levels: Vec<Vec<QftNodeParams>>,
    /// `(−1)^k` for every leaf `k`.
    pub leaf_signs: Vec<i8>,
}

pub fn qft_params(n: usize) -> Result<QftParams> {
    check_n(n, MAX_QFT_QUBITS)?;
    let levels = (0..n)
        .map(|l| (0..1usize << l).map(|k| QftNodeParams::new(l, k)).collect())
        .collect();
    let leaf_signs = (0..1usize << n)
        .map(|k| if k.is_multiple_of(2) { 1 } else { -1 })
        .collect();
    Ok(QftParams {
        n,
        levels,
        leaf_signs,
    })
}

fn check_n(n: usize, limit: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::IndexOutOfRange {
            what: "qubit count",
            index: 0,
            limit: 1,
        });
    }
    if n > limit {
        return Err(Error::TooLarge {
            what: "QFT register",
            size: n,
            limit,
        });
    }
    Ok(())
}

/// Hadamard and controlled phases per qubit, then the swap layer.
pub fn qft_circuit(n: usize) -> Result<Circuit> {
    check_n(n, MAX_QFT_QUBITS)?;
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push(Gate::h(q))?;
        for m in 1..n - q {
            let angle = PI / (1u64 << m) as f64;
            c.push(Gate::phase(q, angle).controlled(Control::down(q + m)))?;
        }
    }
    for i in 0..n / 2 {
        c.push(Gate::swap(i, n - 1 - i))?;
    }
    Ok(c)
}

/// The `2^n × 2^n` DFT matrix.
pub fn dft_matrix(n: usize) -> DMatrix<C64> {
    let dim = 1usize << n;
    let scale = 1.0 / (dim as f64).sqrt();
    DMatrix::from_fn(dim, dim, |j, k| {
        let e = (j * k) % dim;
        C64::from_polar(scale, 2.0 * PI * e as f64 / dim as f64)
    })
}

fn reverse_bits(k: usize, n: usize) -> usize {
    (0..n).fold(0, |acc, b| acc | ((k >> b & 1) << (n - 1 - b)))
}

fn prefix_controls(prefix: usize, len: usize) -> Vec<Control> {
    (0..len)
        .map(|q| Control {
            qubit: q,
            polarity: Polarity::from_bit(prefix >> (len - 1 - q) & 1 == 1),
        })
        .collect()
}

/// Runs the single-branch product for basis state `k` on `|k⟩`: digit
/// reversal, then the leaf sign, then the node unitaries along the reversed
/// path from the deepest level up to the root. The result is column `k` of
/// the DFT.
///
/// Along the branch, the node at tree position `p` on level `l` takes its
/// phase `φ` from the digit-reversed position `p̄` and its sign from `p`
/// itself. Any other pairing leaves a phase or sign residue on some column
/// once `n ≥ 3`.
pub fn qft_branch_check(n: usize, k: usize) -> Result<TargetState> {
    check_n(n, MAX_BRANCH_QUBITS)?;
    let input = TargetState::basis(n, k)?;
    let kb = reverse_bits(k, n);
    let mut c = Circuit::new(n);
    for i in 0..n / 2 {
        c.push(Gate::swap(i, n - 1 - i))?;
    }
    let s = C64::new(if kb.is_multiple_of(2) { 1.0 } else { -1.0 }, 0.0);
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let leaf = if kb & 1 == 0 {
        [[s, zero], [zero, one]]
    } else {
        [[one, zero], [zero, s]]
    };
    c.push(Gate::unitary(n - 1, leaf).with_controls(&prefix_controls(kb >> 1, n - 1)))?;
    for l in (0..n).rev() {
        let pos = kb >> (n - l);
        let mut p = QftNodeParams::new(l, reverse_bits(pos, l));
        p.sign = if pos.is_multiple_of(2) { 1 } else { -1 };
        c.push(Gate::unitary(l, p.unitary()).with_controls(&prefix_controls(pos, l)))?;
    }
    apply_circuit(&c, &input)
}

/// Level `l` as `2^l` controlled node unitaries.
pub fn qft_level_unfactored(n: usize, l: usize) -> Result<Circuit> {
    check_level(n, l)?;
    let mut c = Circuit::new(n);
    for k in 0..1usize << l {
        let u = QftNodeParams::new(l, k).unitary();
        c.push(Gate::unitary(l, u).with_controls(&prefix_controls(k, l)))?;
    }
    Ok(c)
}

/// Level `l` factored as `Z_{l−1} ∏_k C^{k−1}(R(π/2^k)) Ry(π/2)`.
pub fn qft_level_factored(n: usize, l: usize) -> Result<Circuit> {
    check_level(n, l)?;
    let mut c = Circuit::new(n);
    c.push(Gate::ry(l, FRAC_PI_2))?;
    for k in 1..=l {
        let angle = PI / (1u64 << k) as f64;
        c.push(Gate::phase(l, angle).controlled(Control::down(k - 1)))?;
    }
    if l > 0 {
        c.push(Gate::z(l - 1))?;
    }
    Ok(c)
}

fn check_level(n: usize, l: usize) -> Result<()> {
    check_n(n, MAX_QFT_QUBITS)?;
    if l >= n {
        return Err(Error::IndexOutOfRange {
            what: "tree level",
            index: l,
            limit: n,
        });
    }
    Ok(())
}
