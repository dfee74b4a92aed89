//! 2×2 complex matrices for single-qubit operators.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Row-major 2×2 complex matrix.
pub type Mat2 = [[C64; 2]; 2];

pub const IDENTITY: Mat2 = [
    [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
    [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
];

/// `cos(θ/2)` and `sin(θ/2)`, exact at θ = 0 and θ = π so that branches which
/// are switched off contribute an exact zero.
pub fn half_angle(theta: f64) -> (f64, f64) {
    if theta == 0.0 {
        (1.0, 0.0)
    } else if theta == PI {
        (0.0, 1.0)
    } else {
        let h = 0.5 * theta;
        (h.cos(), h.sin())
    }
}

pub fn ry(theta: f64) -> Mat2 {
    let (c, s) = half_angle(theta);
    [
        [C64::new(c, 0.0), C64::new(-s, 0.0)],
        [C64::new(s, 0.0), C64::new(c, 0.0)],
    ]
}

pub fn rz(phi: f64) -> Mat2 {
    let z = C64::new(0.0, 0.0);
    [
        [C64::from_polar(1.0, -0.5 * phi), z],
        [z, C64::from_polar(1.0, 0.5 * phi)],
    ]
}

/// Phase-shift gate `diag(1, e^{iφ})`.
pub fn phase(phi: f64) -> Mat2 {
    let z = C64::new(0.0, 0.0);
    [[C64::new(1.0, 0.0), z], [z, C64::from_polar(1.0, phi)]]
}

pub fn pauli_x() -> Mat2 {
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    [[z, o], [o, z]]
}

pub fn pauli_z() -> Mat2 {
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    [[o, z], [z, -o]]
}

pub fn hadamard() -> Mat2 {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

pub fn scalar(phase: f64) -> Mat2 {
    let p = C64::from_polar(1.0, phase);
    let z = C64::new(0.0, 0.0);
    [[p, z], [z, p]]
}

/// `Rz(φ)·Ry(θ)`, the unitary attached to a tree node. Its first column is
/// `(cos(θ/2)e^{-iφ/2}, sin(θ/2)e^{iφ/2})`.
pub fn node_unitary(theta: f64, phi: f64) -> Mat2 {
    mul(&rz(phi), &ry(theta))
}

pub fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

pub fn dagger(a: &Mat2) -> Mat2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

/// Largest entrywise modulus of `a - b`.
pub fn max_diff(a: &Mat2, b: &Mat2) -> f64 {
    let mut d: f64 = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            d = d.max((a[r][c] - b[r][c]).norm());
        }
    }
    d
}

/// Max-norm deviation of `a†a` from the identity.
pub fn unitarity_defect(a: &Mat2) -> f64 {
    max_diff(&mul(&dagger(a), a), &IDENTITY)
}

pub fn apply(a: &Mat2, v: [C64; 2]) -> [C64; 2] {
    [
        a[0][0] * v[0] + a[0][1] * v[1],
        a[1][0] * v[0] + a[1][1] * v[1],
    ]
}
