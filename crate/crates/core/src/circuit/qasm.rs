use std::fmt::Write;

use super::{Circuit, Gate, GateKind, Polarity};
use crate::error::{Error, Result};

/// OpenQASM 2.0 text for a circuit built from the lowered gate set.
///
/// Accepts uncontrolled `h x z ry rz phase swap`, single ↓-controlled `x`
/// (`cx`) and `phase` (`cu1`). Global phase becomes a comment line.
pub fn export_qasm(circuit: &Circuit) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "// format_version: {}", super::CIRCUIT_FORMAT_VERSION).unwrap();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    writeln!(out, "qreg q[{}];", circuit.n()).unwrap();
    for g in circuit.gates() {
        out.push_str(&lower(g)?);
        out.push('\n');
    }
    Ok(out)
}

fn unlowered(g: &Gate) -> Error {
    Error::UnloweredGate(format!(
        "{} with {} control(s)",
        g.kind.name(),
        g.controls.len()
    ))
}

fn lower(g: &Gate) -> Result<String> {
    let t = g.target;
    match g.controls.as_slice() {
        [] => Ok(match g.kind {
            GateKind::Hadamard => format!("h q[{t}];"),
            GateKind::PauliX => format!("x q[{t}];"),
            GateKind::PauliZ => format!("z q[{t}];"),
            GateKind::RotY(a) => format!("ry({a:?}) q[{t}];"),
            GateKind::RotZ(a) => format!("rz({a:?}) q[{t}];"),
            GateKind::PhaseShift(a) => format!("u1({a:?}) q[{t}];"),
            GateKind::Swap(b) => format!("swap q[{t}],q[{b}];"),
            GateKind::GlobalPhase(x) => format!("// global_phase {x:?}"),
            GateKind::Unitary2x2(_) => return Err(unlowered(g)),
        }),
        [c] if c.polarity == Polarity::Down => {
            let q = c.qubit;
            match g.kind {
                GateKind::PauliX => Ok(format!("cx q[{q}],q[{t}];")),
                GateKind::PhaseShift(a) => Ok(format!("cu1({a:?}) q[{q}],q[{t}];")),
                _ => Err(unlowered(g)),
            }
        }
        _ => Err(unlowered(g)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Control;
    use crate::mat2;

    #[test]
    fn hadamard_line() {
        let c = Circuit::from_gates(1, vec![Gate::h(0)]).unwrap();
        let text = export_qasm(&c).unwrap();
        assert!(text.starts_with("// format_version: 1\nOPENQASM 2.0;"));
        assert!(text.contains("h q[0];"));
    }

    #[test]
    fn bell_body() {
        let c = Circuit::from_gates(
            2,
            vec![Gate::ry(0, std::f64::consts::FRAC_PI_2), Gate::cnot(0, 1)],
        )
        .unwrap();
        let text = export_qasm(&c).unwrap();
        let body: Vec<&str> = text.lines().skip(4).collect();
        assert_eq!(body, ["ry(1.5707963267948966) q[0];", "cx q[0],q[1];"]);
    }

    #[test]
    fn angles_round_trip() {
        let a = 0.123_456_789_012_345_68_f64;
        let c = Circuit::from_gates(1, vec![Gate::rz(0, a)]).unwrap();
        let text = export_qasm(&c).unwrap();
        let inner = text.split("rz(").nth(1).unwrap().split(')').next().unwrap();
        assert_eq!(inner.parse::<f64>().unwrap(), a);
    }

    #[test]
    fn rejects_unlowerable_gates() {
        let multi = Gate::x(2).with_controls(&[Control::down(0), Control::down(1)]);
        let up = Gate::x(1).controlled(Control::up(0));
        let uni = Gate::unitary(0, mat2::hadamard());
        let cry = Gate::ry(1, 0.2).controlled(Control::down(0));
        for g in [multi, up, uni, cry] {
            let c = Circuit::from_gates(3, vec![g]).unwrap();
            assert!(matches!(export_qasm(&c), Err(Error::UnloweredGate(_))));
        }
    }

    #[test]
    fn controlled_phase_and_global_phase() {
        let c = Circuit::from_gates(
            2,
            vec![
                Gate::phase(0, 0.5).controlled(Control::down(1)),
                Gate::global_phase(0.25),
            ],
        )
        .unwrap();
        let text = export_qasm(&c).unwrap();
        assert!(text.contains("cu1(0.5) q[1],q[0];"));
        assert!(text.contains("// global_phase 0.25"));
    }
}
