//! Schmidt forms: the two-qubit circuit and the generalized multi-qubit form.
//!
//! A local basis change on qubit `i` is the SU(2) matrix
//!
//! ```text
//! W_i = [[α_i, −β_i*], [β_i, α_i*]] = Rz(χ_i) Ry(θ_i) Rz(−φ_i)
//! ```
//!
//! whose rows give `f_i(x) = ⟨↑̂|x⟩` and `f′_i(x) = ⟨↓̂|x⟩`. The transformed
//! amplitudes are `γ̂ = (⊗_i W_i) γ`.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::mat2::{self, Mat2};
use crate::state::{require_normalized, TargetState, EPS_ZERO};
use crate::tree::NORM_TOLERANCE;

/// Largest register handed to [`solve_generalized_schmidt`].
pub const MAX_SCHMIDT_QUBITS: usize = 6;
/// Largest register [`build_multilinear_system`] expands.
pub const MAX_SYSTEM_QUBITS: usize = 12;
/// Deterministic starts tried by the solver.
pub const SOLVER_STARTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasisAngles {
    pub theta: f64,
    pub phi: f64,
    pub chi: f64,
}

impl BasisAngles {
    pub fn alpha(&self) -> C64 {
        C64::from_polar((self.theta / 2.0).cos(), (self.phi - self.chi) / 2.0)
    }

    pub fn beta(&self) -> C64 {
        C64::from_polar((self.theta / 2.0).sin(), (self.phi + self.chi) / 2.0)
    }

    pub fn matrix(&self) -> Mat2 {
        let (a, b) = (self.alpha(), self.beta());
        [[a, -b.conj()], [b, a.conj()]]
    }

    /// Angles of an SU(2) matrix, read from its first column.
    pub fn from_matrix(w: &Mat2) -> Self {
        let (a, b) = (w[0][0], w[1][0]);
        let (pa, pb) = (arg(a), arg(b));
        Self {
            theta: 2.0 * b.norm().atan2(a.norm()),
            phi: pa + pb,
            chi: pb - pa,
        }
    }
}

fn arg(z: C64) -> f64 {
    if z.norm() <= EPS_ZERO {
        0.0
    } else {
        z.arg()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalBasisTransform {
    pub angles: Vec<BasisAngles>,
}

impl LocalBasisTransform {
    pub fn identity(m: usize) -> Self {
        Self {
            angles: vec![
                BasisAngles {
                    theta: 0.0,
                    phi: 0.0,
                    chi: 0.0
                };
                m
            ],
        }
    }

    pub fn m(&self) -> usize {
        self.angles.len()
    }

    pub fn matrices(&self) -> Vec<Mat2> {
        self.angles.iter().map(BasisAngles::matrix).collect()
    }

    /// `(⊗_i W_i) ψ`
    pub fn apply(&self, state: &TargetState) -> Result<TargetState> {
        self.check(state)?;
        let amps = transform_amplitudes(state.amplitudes(), &self.matrices());
        TargetState::new(state.n(), amps)
    }

    /// `(⊗_i W_i†) ψ`
    pub fn apply_inverse(&self, state: &TargetState) -> Result<TargetState> {
        self.check(state)?;
        let mats: Vec<Mat2> = self.matrices().iter().map(mat2::dagger).collect();
        TargetState::new(state.n(), transform_amplitudes(state.amplitudes(), &mats))
    }

    fn check(&self, state: &TargetState) -> Result<()> {
        if state.n() != self.m() {
            return Err(Error::DimensionMismatch {
                expected: self.m(),
                actual: state.n(),
            });
        }
        Ok(())
    }
}

/// Applies `mats[q]` to qubit `q` for every qubit.
fn transform_amplitudes(amps: &[C64], mats: &[Mat2]) -> Vec<C64> {
    let m = mats.len();
    let mut out = amps.to_vec();
    for (q, w) in mats.iter().enumerate() {
        let bit = 1usize << (m - 1 - q);
        for i in 0..out.len() {
            if i & bit == 0 {
                let [a, b] = mat2::apply(w, [out[i], out[i | bit]]);
                out[i] = a;
                out[i | bit] = b;
            }
        }
    }
    out
}

fn flip_index(m: usize, k: usize) -> usize {
    1usize << (m - 1 - k)
}

/// Schmidt circuit `C(X) · Ry(θ)` for a two-qubit state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoQubitSchmidt {
    /// `2 tan⁻¹(λ+/λ−)`
    pub theta: f64,
    /// Larger Schmidt coefficient, carried by `|11⟩` before the local maps.
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    /// Maps taking the circuit output to the state.
    pub local: LocalBasisTransform,
    pub global_phase: f64,
    #[serde(skip)]
    pub circuit: Circuit,
}

impl TwoQubitSchmidt {
    /// `e^{iξ} (W_0 ⊗ W_1) C(X) Ry(θ) |00⟩`
    pub fn reconstruct(&self) -> Result<TargetState> {
        let out = crate::circuit::apply_circuit(&self.circuit, &TargetState::zero(2)?)?;
        Ok(self.local.apply(&out)?.with_phase(self.global_phase))
    }
}

fn columns(m: &Matrix2<C64>) -> [[C64; 2]; 2] {
    [[m[(0, 0)], m[(1, 0)]], [m[(0, 1)], m[(1, 1)]]]
}

fn from_columns(c0: [C64; 2], c1: [C64; 2]) -> Mat2 {
    [[c0[0], c1[0]], [c0[1], c1[1]]]
}

fn det(w: &Mat2) -> C64 {
    w[0][0] * w[1][1] - w[0][1] * w[1][0]
}

pub fn schmidt_2q(state: &TargetState) -> Result<TwoQubitSchmidt> {
    if state.n() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: state.n(),
        });
    }
    require_normalized(state, NORM_TOLERANCE)?;
    let g = state.amplitudes();
    let m = Matrix2::new(g[0], g[1], g[2], g[3]);
    let svd = m.svd(true, true);
    let (u, v_t) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let s = svd.singular_values;
    let (hi, lo) = if s[0] >= s[1] { (0, 1) } else { (1, 0) };
    let (sp, sm) = (s[hi], s[lo]);

    // slot 0 carries λ−, slot 1 carries λ+
    let (a, b) = if (sp - sm).abs() <= EPS_ZERO {
        let mean = (sp + sm) / 2.0;
        let bt = [[g[0] / mean, g[2] / mean], [g[1] / mean, g[3] / mean]];
        (mat2::IDENTITY, bt)
    } else {
        let uc = columns(&u);
        // columns of conj(V) are the rows of V†, conjugated twice
        let vc = [[v_t[(0, 0)], v_t[(0, 1)]], [v_t[(1, 0)], v_t[(1, 1)]]];
        (from_columns(uc[lo], uc[hi]), from_columns(vc[lo], vc[hi]))
    };

    let rho1 = -arg(det(&a));
    let d = -arg(det(&a)) - arg(det(&b));
    let phase_cols = |w: &Mat2, p0: f64, p1: f64| -> Mat2 {
        let (e0, e1) = (C64::from_polar(1.0, p0), C64::from_polar(1.0, p1));
        [[w[0][0] * e0, w[0][1] * e1], [w[1][0] * e0, w[1][1] * e1]]
    };
    let a = phase_cols(&a, 0.0, rho1);
    let b = phase_cols(&b, d / 2.0, d / 2.0 - rho1);

    let theta = 2.0 * sp.atan2(sm);
    let circuit = Circuit::from_gates(2, vec![Gate::ry(0, theta), Gate::cnot(0, 1)])?;
    Ok(TwoQubitSchmidt {
        theta,
        lambda_plus: sp,
        lambda_minus: sm,
        local: LocalBasisTransform {
            angles: vec![BasisAngles::from_matrix(&a), BasisAngles::from_matrix(&b)],
        },
        global_phase: -d / 2.0,
        circuit,
    })
}

/// One equation `γ̂_{2^k} = 0` in flip-set form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultilinearEquation {
    /// Qubit flipped away from `|0…0⟩`.
    pub k: usize,
    /// `coefficients[S] = γ_{e_k ⊕ S}`: the amplitude at flip set `S` away
    /// from `|e_k⟩`, multiplying `Π_{i∈S} z_i`.
    pub coefficients: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultilinearSystem {
    pub m: usize,
    pub equations: Vec<MultilinearEquation>,
}

impl MultilinearSystem {
    fn in_set(&self, s: usize, i: usize) -> bool {
        s >> (self.m - 1 - i) & 1 == 1
    }

    /// `γ̂_{2^k}` for every `k`, without dividing by any `α`.
    pub fn evaluate(&self, t: &LocalBasisTransform) -> Result<Vec<C64>> {
        self.check(t)?;
        let ab: Vec<(C64, C64)> = t.angles.iter().map(|a| (a.alpha(), a.beta())).collect();
        Ok(self
            .equations
            .iter()
            .map(|eq| {
                eq.coefficients
                    .iter()
                    .enumerate()
                    .map(|(s, c)| {
                        let w: C64 = (0..self.m)
                            .map(|i| {
                                let (a, b) = ab[i];
                                match (i == eq.k, self.in_set(s, i)) {
                                    (true, true) => b,
                                    (true, false) => a.conj(),
                                    (false, true) => -b.conj(),
                                    (false, false) => a,
                                }
                            })
                            .product();
                        c * w
                    })
                    .sum()
            })
            .collect())
    }

    /// Equations in ratio form `Σ_S γ^{(|S|)}_S Π_{i∈S} z_i` with
    /// `z_k = β_k/α_k*` and `z_i = −β_i*/α_i` otherwise. `None` where some
    /// `α` vanishes.
    pub fn evaluate_ratios(&self, t: &LocalBasisTransform) -> Result<Vec<Option<C64>>> {
        self.check(t)?;
        Ok(self
            .equations
            .iter()
            .map(|eq| {
                let z: Option<Vec<C64>> = t
                    .angles
                    .iter()
                    .enumerate()
                    .map(|(i, a)| {
                        let (al, be) = (a.alpha(), a.beta());
                        (al.norm() > EPS_ZERO).then(|| {
                            if i == eq.k {
                                be / al.conj()
                            } else {
                                -be.conj() / al
                            }
                        })
                    })
                    .collect();
                let z = z?;
                Some(
                    eq.coefficients
                        .iter()
                        .enumerate()
                        .map(|(s, c)| {
                            c * (0..self.m)
                                .filter(|&i| self.in_set(s, i))
                                .map(|i| z[i])
                                .product::<C64>()
                        })
                        .sum(),
                )
            })
            .collect())
    }

    fn check(&self, t: &LocalBasisTransform) -> Result<()> {
        if t.m() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                actual: t.m(),
            });
        }
        Ok(())
    }
}

fn check_register(m: usize, limit: usize, what: &'static str) -> Result<()> {
    if m < 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: m,
        });
    }
    if m > limit {
        return Err(Error::TooLarge {
            what,
            size: m,
            limit,
        });
    }
    Ok(())
}

pub fn build_multilinear_system(state: &TargetState) -> Result<MultilinearSystem> {
    let m = state.n();
    check_register(m, MAX_SYSTEM_QUBITS, "multilinear system")?;
    let g = state.amplitudes();
    let equations = (0..m)
        .map(|k| {
            let e = flip_index(m, k);
            MultilinearEquation {
                k,
                coefficients: (0..g.len()).map(|s| g[e ^ s]).collect(),
            }
        })
        .collect();
    Ok(MultilinearSystem { m, equations })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SchmidtWarning {
    /// The amplitude at `basis` is too small for its phase to be fixed.
    PhaseFixDegenerate { basis: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralizedSchmidt {
    pub transform: LocalBasisTransform,
    /// `e^{ig} (⊗W_i) ψ`
    #[serde(skip)]
    pub state: TargetState,
    pub global_phase: f64,
    /// `√(Σ_k |γ̂_{2^k}|²)`
    pub residual: f64,
    /// Index of the start that succeeded.
    pub start: usize,
    pub warnings: Vec<SchmidtWarning>,
}

/// Basis states whose phases the solver fixes: `|0…0⟩` and the complement of
/// every single flip. At `m = 2` those complements are themselves single
/// flips, so `|11⟩` stands in for them.
pub fn phase_fixed_basis(m: usize) -> Vec<usize> {
    let all = (1usize << m) - 1;
    if m == 2 {
        vec![0, all]
    } else {
        std::iter::once(0)
            .chain((0..m).map(|k| all ^ flip_index(m, k)))
            .collect()
    }
}

fn w_theta_phi(theta: f64, phi: f64) -> Mat2 {
    BasisAngles {
        theta,
        phi,
        chi: 0.0,
    }
    .matrix()
}

fn dw_dtheta(theta: f64, phi: f64) -> Mat2 {
    let (c, s) = ((theta / 2.0).cos() / 2.0, (theta / 2.0).sin() / 2.0);
    let (p, q) = (
        C64::from_polar(1.0, phi / 2.0),
        C64::from_polar(1.0, -phi / 2.0),
    );
    [[-s * p, -c * q], [c * p, -s * q]]
}

fn dw_dphi(theta: f64, phi: f64) -> Mat2 {
    let (c, s) = ((theta / 2.0).cos() / 2.0, (theta / 2.0).sin() / 2.0);
    let i = C64::i();
    let (p, q) = (
        C64::from_polar(1.0, phi / 2.0),
        C64::from_polar(1.0, -phi / 2.0),
    );
    [[i * c * p, i * s * q], [i * s * p, -i * c * q]]
}

struct Problem<'a> {
    m: usize,
    gamma: &'a [C64],
}

impl Problem<'_> {
    fn mats(&self, x: &[f64]) -> Vec<Mat2> {
        (0..self.m)
            .map(|i| w_theta_phi(x[2 * i], x[2 * i + 1]))
            .collect()
    }

    fn flips(&self, amps: &[C64]) -> Vec<f64> {
        (0..self.m)
            .flat_map(|k| {
                let z = amps[flip_index(self.m, k)];
                [z.re, z.im]
            })
            .collect()
    }

    fn residual(&self, x: &[f64]) -> Vec<f64> {
        self.flips(&transform_amplitudes(self.gamma, &self.mats(x)))
    }

    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let n = 2 * self.m;
        let base = self.mats(x);
        let mut j = DMatrix::zeros(n, n);
        for i in 0..self.m {
            let (t, p) = (x[2 * i], x[2 * i + 1]);
            for (col, d) in [(2 * i, dw_dtheta(t, p)), (2 * i + 1, dw_dphi(t, p))] {
                let mut mats = base.clone();
                mats[i] = d;
                let r = self.flips(&transform_amplitudes(self.gamma, &mats));
                for (row, v) in r.into_iter().enumerate() {
                    j[(row, col)] = v;
                }
            }
        }
        j
    }

    /// Sweeps maximising `|γ̂_0|` one qubit at a time.
    fn alternate(&self, x: &mut [f64], sweeps: usize) {
        let mut last = 0.0;
        for _ in 0..sweeps {
            for i in 0..self.m {
                let mut mats = self.mats(x);
                mats[i] = mat2::IDENTITY;
                let amps = transform_amplitudes(self.gamma, &mats);
                let (v0, v1) = (amps[0], amps[flip_index(self.m, i)]);
                let len = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
                if len <= EPS_ZERO {
                    continue;
                }
                let (a, b) = (v0.conj() / len, -v1 / len);
                x[2 * i] = 2.0 * b.norm().atan2(a.norm());
                x[2 * i + 1] = arg(a) + arg(b);
            }
            let g0 = transform_amplitudes(self.gamma, &self.mats(x))[0].norm();
            if g0 - last < 1e-15 {
                break;
            }
            last = g0;
        }
    }

    fn levenberg_marquardt(&self, x: &mut Vec<f64>, target: f64) -> f64 {
        let n = x.len();
        let sq = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>();
        let mut r = self.residual(x);
        let mut cost = sq(&r);
        let mut mu = 1e-3;
        for _ in 0..400 {
            if cost.sqrt() < target || mu > 1e12 {
                break;
            }
            let j = self.jacobian(x);
            let jt = j.transpose();
            let mut a = &jt * &j;
            for d in 0..n {
                a[(d, d)] += mu;
            }
            let g = &jt * DVector::from_column_slice(&r);
            let Some(step) = a.lu().solve(&(-g)) else {
                mu *= 10.0;
                continue;
            };
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let rt = self.residual(&trial);
            let ct = sq(&rt);
            if ct < cost {
                *x = trial;
                r = rt;
                cost = ct;
                mu = (mu / 3.0).max(1e-15);
            } else {
                mu *= 4.0;
            }
        }
        cost.sqrt()
    }
}

/// Local basis change zeroing every single-flip amplitude.
///
/// Each of [`SOLVER_STARTS`] seeded starts runs alternating sweeps that
/// maximise `|γ̂_0|`, then Levenberg–Marquardt on the `2m` real residuals
/// `Re/Im γ̂_{2^k}` with `χ = 0`. The first start whose residual norm is below
/// `residual_tol` is kept. The `χ_i` and a global phase are then the
/// minimum-norm solution making the amplitudes of [`phase_fixed_basis`] real
/// and non-negative.
pub fn solve_generalized_schmidt(
    state: &TargetState,
    residual_tol: f64,
) -> Result<GeneralizedSchmidt> {
    let m = state.n();
    check_register(m, MAX_SCHMIDT_QUBITS, "generalized Schmidt register")?;
    require_normalized(state, NORM_TOLERANCE)?;
    let problem = Problem {
        m,
        gamma: state.amplitudes(),
    };
    let mut best = f64::INFINITY;
    for start in 0..SOLVER_STARTS {
        let mut x = vec![0.0; 2 * m];
        if start > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + start as u64);
            for i in 0..m {
                x[2 * i] = rng.random_range(0.0..PI);
                x[2 * i + 1] = rng.random_range(-PI..PI);
            }
        }
        problem.alternate(&mut x, 200);
        let res = problem.levenberg_marquardt(&mut x, residual_tol * 1e-3);
        if res < residual_tol {
            return Ok(phase_fix(state, &x, res, start));
        }
        best = best.min(res);
    }
    Err(Error::ConvergenceFailure {
        best_residual: best,
    })
}

fn phase_fix(state: &TargetState, x: &[f64], residual: f64, start: usize) -> GeneralizedSchmidt {
    let m = state.n();
    let mats: Vec<Mat2> = (0..m)
        .map(|i| w_theta_phi(x[2 * i], x[2 * i + 1]))
        .collect();
    let amps = transform_amplitudes(state.amplitudes(), &mats);
    let mut warnings = Vec::new();
    let mut rows = Vec::new();
    for s in phase_fixed_basis(m) {
        if amps[s].norm() <= EPS_ZERO {
            warnings.push(SchmidtWarning::PhaseFixDegenerate { basis: s });
        } else {
            rows.push(s);
        }
    }
    // phase picked up by basis s: g + Σ_i (s_i − ½) χ_i
    let a = DMatrix::from_fn(rows.len(), m + 1, |r, c| {
        if c == 0 {
            1.0
        } else {
            (rows[r] >> (m - c) & 1) as f64 - 0.5
        }
    });
    let b = DVector::from_fn(rows.len(), |r, _| -amps[rows[r]].arg());
    let sol = a
        .svd(true, true)
        .solve(&b, 1e-12)
        .expect("both factors were requested");
    let g = sol[0];
    let angles = (0..m)
        .map(|i| {
            let w = BasisAngles {
                theta: x[2 * i],
                phi: x[2 * i + 1],
                chi: sol[i + 1],
            };
            BasisAngles::from_matrix(&w.matrix())
        })
        .collect();
    let transform = LocalBasisTransform { angles };
    let out = transform.apply(state).expect("sizes match").with_phase(g);
    GeneralizedSchmidt {
        transform,
        state: out,
        global_phase: g,
        residual,
        start,
        warnings,
    }
}
