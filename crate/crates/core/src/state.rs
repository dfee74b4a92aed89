//! Statevectors, overlaps and the statevector file formats.
//!
//! Amplitude `k` belongs to the basis state whose binary expansion (n digits)
//! lists qubit 0 first, so qubit 0 is the most significant bit of `k`.
//!
//! Two file formats are accepted:
//!
//! ```text
//! 2
//! 0.7071067811865476 0
//! 0 0
//! 0 0
//! 0.7071067811865476 0
//! ```
//!
//! (first line `n`, then `2^n` lines of `re im`), or the JSON object
//! `{"n": 2, "amplitudes": [[re, im], ...]}`.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Amplitudes at or below this magnitude are treated as zero everywhere.
pub const EPS_ZERO: f64 = 1e-12;

/// Largest register accepted when reading files.
pub const MAX_QUBITS: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct TargetState {
    n: usize,
    amplitudes: Vec<C64>,
}

impl TargetState {
    pub fn new(n: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parse("qubit count must be at least 1".into()));
        }
        if n > MAX_QUBITS {
            return Err(Error::TooLarge {
                what: "qubit count",
                size: n,
                limit: MAX_QUBITS,
            });
        }
        if amplitudes.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                actual: amplitudes.len(),
            });
        }
        Ok(Self { n, amplitudes })
    }

    /// Infers `n` from the amplitude count, which must be a power of two ≥ 2.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Parse(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        Self::new(len.trailing_zeros() as usize, amplitudes)
    }

    /// Computational basis state `|k⟩`.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        let dim = 1usize << n;
        if k >= dim {
            return Err(Error::IndexOutOfRange {
                what: "basis state",
                index: k,
                limit: dim,
            });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[k] = C64::new(1.0, 0.0);
        Self::new(n, amps)
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    /// Tensor product `self ⊗ other`; `self` occupies the leading qubits.
    pub fn tensor(&self, other: &TargetState) -> Result<Self> {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amps.push(a * b);
            }
        }
        Self::new(self.n + other.n, amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Every amplitude multiplied by `e^{iξ}`.
    pub fn with_phase(&self, xi: f64) -> Self {
        let p = C64::from_polar(1.0, xi);
        Self {
            n: self.n,
            amplitudes: self.amplitudes.iter().map(|a| a * p).collect(),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &TargetState) -> Result<f64> {
        check_dims(self, other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty statevector file".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| Error::Parse(format!("bad qubit count line {header:?}")))?;
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Parse(format!("qubit count {n} out of range")));
        }
        let mut amps = Vec::with_capacity(1 << n);
        for (idx, line) in lines.enumerate() {
            let mut fields = line.split_whitespace();
            let mut next = |what: &str| -> Result<f64> {
                let tok = fields
                    .next()
                    .ok_or_else(|| Error::Parse(format!("amplitude {idx}: missing {what}")))?;
                tok.parse()
                    .map_err(|_| Error::Parse(format!("amplitude {idx}: bad {what} {tok:?}")))
            };
            let re = next("real part")?;
            let im = next("imaginary part")?;
            if fields.next().is_some() {
                return Err(Error::Parse(format!("amplitude {idx}: trailing fields")));
            }
            amps.push(C64::new(re, im));
        }
        Self::new(n, amps)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let amps = file
            .amplitudes
            .into_iter()
            .map(|[re, im]| C64::new(re, im))
            .collect();
        Self::new(file.n, amps)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for a in &self.amplitudes {
            out.push_str(&format!("{:?} {:?}\n", a.re, a.im));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let file = StateFile {
            n: self.n,
            amplitudes: self.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
        };
        serde_json::to_string(&file).expect("statevector serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    n: usize,
    amplitudes: Vec<[f64; 2]>,
}

/// Overlap between two states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityReport {
    /// `⟨a|b⟩`
    pub overlap: C64,
    /// `|⟨a|b⟩|²`
    pub fidelity: f64,
    /// `arg ⟨a|b⟩`
    pub global_phase: f64,
}

pub fn normalize(state: &TargetState) -> Result<TargetState> {
    if state.amplitudes.iter().all(|a| a.norm() <= EPS_ZERO) {
        return Err(Error::ZeroVector);
    }
    let inv = 1.0 / state.norm();
    Ok(TargetState {
        n: state.n,
        amplitudes: state.amplitudes.iter().map(|a| a * inv).collect(),
    })
}

pub fn fidelity(a: &TargetState, b: &TargetState) -> Result<FidelityReport> {
    check_dims(a, b)?;
    let overlap: C64 = a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(FidelityReport {
        overlap,
        fidelity: overlap.norm_sqr(),
        global_phase: overlap.arg(),
    })
}

/// Normalized state with i.i.d. complex Gaussian amplitudes, reproducible from
/// `(n, seed)`.
pub fn random_state(n: usize, seed: u64) -> TargetState {
    assert!(n >= 1, "random_state needs at least one qubit");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let amps: Vec<C64> = (0..1usize << n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                C64::new(re, im)
            })
            .collect();
        let raw = TargetState {
            n,
            amplitudes: amps,
        };
        if let Ok(s) = normalize(&raw) {
            return s;
        }
    }
}

/// Random single-qubit states multiplied together.
pub fn random_product_state(n: usize, seed: u64) -> TargetState {
    let mut out = random_state(1, seed.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    for q in 1..n {
        let factor = random_state(
            1,
            seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(q as u64),
        );
        out = out.tensor(&factor).expect("sizes are consistent");
    }
    out
}

fn check_dims(a: &TargetState, b: &TargetState) -> Result<()> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            expected: a.n,
            actual: b.n,
        });
    }
    Ok(())
}

pub(crate) fn require_normalized(state: &TargetState, tol: f64) -> Result<()> {
    let norm = state.norm();
    if (norm - 1.0).abs() > tol {
        return Err(Error::NotNormalized(norm));
    }
    Ok(())
}
