//! Native circuit JSON.
//!
//! `{"format_version": 1, "n": 2, "gates": [{"kind": "ry", "params": [θ],
//! "target": 0, "controls": [[1, "down"]]}]}`. `swap` stores the second
//! qubit as its single param; `unitary` stores the row-major entries as
//! eight floats `re00, im00, re01, im01, re10, im10, re11, im11`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{Circuit, Control, Gate, GateKind, Polarity};
use crate::error::{Error, Result};

pub const CIRCUIT_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CircuitFile {
    format_version: u32,
    n: usize,
    gates: Vec<GateRecord>,
}

#[derive(Serialize, Deserialize)]
struct GateRecord {
    kind: String,
    params: Vec<f64>,
    target: usize,
    controls: Vec<(usize, String)>,
}

fn record(g: &Gate) -> GateRecord {
    let params = match &g.kind {
        GateKind::RotY(a) | GateKind::RotZ(a) | GateKind::PhaseShift(a) => vec![*a],
        GateKind::GlobalPhase(x) => vec![*x],
        GateKind::PauliX | GateKind::PauliZ | GateKind::Hadamard => vec![],
        GateKind::Swap(b) => vec![*b as f64],
        GateKind::Unitary2x2(m) => m
            .iter()
            .flat_map(|row| row.iter().flat_map(|z| [z.re, z.im]))
            .collect(),
    };
    GateRecord {
        kind: g.kind.name().to_string(),
        params,
        target: g.target,
        controls: g
            .controls
            .iter()
            .map(|c| {
                let p = match c.polarity {
                    Polarity::Up => "up",
                    Polarity::Down => "down",
                };
                (c.qubit, p.to_string())
            })
            .collect(),
    }
}

fn gate(r: GateRecord) -> Result<Gate> {
    let want = |k: usize| -> Result<()> {
        if r.params.len() == k {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "gate {} takes {k} params, got {}",
                r.kind,
                r.params.len()
            )))
        }
    };
    let kind = match r.kind.as_str() {
        "ry" | "rz" | "phase" | "global_phase" => {
            want(1)?;
            let a = r.params[0];
            match r.kind.as_str() {
                "ry" => GateKind::RotY(a),
                "rz" => GateKind::RotZ(a),
                "phase" => GateKind::PhaseShift(a),
                _ => GateKind::GlobalPhase(a),
            }
        }
        "x" | "z" | "h" => {
            want(0)?;
            match r.kind.as_str() {
                "x" => GateKind::PauliX,
                "z" => GateKind::PauliZ,
                _ => GateKind::Hadamard,
            }
        }
        "swap" => {
            want(1)?;
            let b = r.params[0];
            if b < 0.0 || b.fract() != 0.0 {
                return Err(Error::Parse(format!(
                    "swap partner {b} is not a qubit index"
                )));
            }
            GateKind::Swap(b as usize)
        }
        "unitary" => {
            want(8)?;
            let p = &r.params;
            let z = |k: usize| C64::new(p[2 * k], p[2 * k + 1]);
            GateKind::Unitary2x2([[z(0), z(1)], [z(2), z(3)]])
        }
        other => return Err(Error::Parse(format!("unknown gate kind {other:?}"))),
    };
    let mut controls = Vec::with_capacity(r.controls.len());
    for (q, p) in r.controls {
        let polarity = match p.as_str() {
            "up" => Polarity::Up,
            "down" => Polarity::Down,
            other => return Err(Error::Parse(format!("unknown polarity {other:?}"))),
        };
        controls.push(Control { qubit: q, polarity });
    }
    Ok(Gate {
        kind,
        target: r.target,
        controls,
    })
}

impl Circuit {
    pub fn to_json(&self) -> String {
        let file = CircuitFile {
            format_version: CIRCUIT_FORMAT_VERSION,
            n: self.n,
            gates: self.gates.iter().map(record).collect(),
        };
        serde_json::to_string(&file).expect("circuit serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CircuitFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if file.format_version != CIRCUIT_FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported circuit format_version {}",
                file.format_version
            )));
        }
        let gates = file
            .gates
            .into_iter()
            .map(gate)
            .collect::<Result<Vec<_>>>()?;
        Circuit::from_gates(file.n, gates)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2;

    #[test]
    fn round_trip_every_kind() {
        let c = Circuit::from_gates(
            3,
            vec![
                Gate::ry(0, 0.1),
                Gate::rz(1, -2.5),
                Gate::phase(2, 1.0 / 3.0),
                Gate::x(0).controlled(Control::up(2)),
                Gate::z(1),
                Gate::h(2),
                Gate::global_phase(0.7),
                Gate::swap(0, 2),
                Gate::unitary(1, mat2::node_unitary(0.3, 0.9))
                    .with_controls(&[Control::down(0), Control::up(2)]),
            ],
        )
        .unwrap();
        let text = c.to_json();
        assert!(text.contains("\"format_version\":1"));
        assert_eq!(Circuit::from_json(&text).unwrap(), c);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Circuit::from_json("{").is_err());
        let wrong_version = r#"{"format_version":2,"n":1,"gates":[]}"#;
        assert!(Circuit::from_json(wrong_version).is_err());
        let bad_kind = r#"{"format_version":1,"n":1,"gates":[{"kind":"t","params":[],"target":0,"controls":[]}]}"#;
        assert!(Circuit::from_json(bad_kind).is_err());
        let out_of_range = r#"{"format_version":1,"n":1,"gates":[{"kind":"x","params":[],"target":3,"controls":[]}]}"#;
        assert!(Circuit::from_json(out_of_range).is_err());
    }
}
