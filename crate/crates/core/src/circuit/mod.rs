//! Gate alphabet, registers, and the circuit builder.
//!
//! Circuits are unitary by construction: the alphabet has no measurement or
//! reset, and every circuit is a flat gate list over a fixed qubit count.

mod builder;
mod dump;
mod gate;

pub use builder::{Builder, GateSink, Layout, Register};
pub use dump::{dump, parse_dump};
pub use gate::{dyadic_angle, Gate, GateClass, QubitId};

use std::f64::consts::FRAC_PI_2;
use std::f64::consts::FRAC_PI_4;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("register size must be at least 1")]
    ZeroSizeRegister,
    #[error("qubit {qubit} is outside the {num_qubits} allocated (or is not live)")]
    OperandOutOfRange { qubit: u32, num_qubits: u32 },
    #[error("qubit {0} appears twice in one gate")]
    DuplicateOperand(u32),
    #[error("qubit {0} appears twice in one register")]
    DuplicateQubit(u32),
    #[error("rotation angle is not finite")]
    NonFiniteAngle,
    #[error("control qubit {0} is already used by the circuit")]
    ControlCollision(u32),
    #[error("registers overlap on qubit {0}")]
    RegisterOverlap(u32),
    #[error("malformed circuit dump at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Immutable gate sequence over `num_qubits` qubits with its register layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    layout: Layout,
    gates: Vec<Gate>,
}

impl Circuit {
    pub(crate) fn from_parts(layout: Layout, gates: Vec<Gate>) -> Self {
        Circuit { layout, gates }
    }

    /// Builds a circuit from raw parts, checking operands and register layout.
    pub fn new(
        num_qubits: u32,
        gates: Vec<Gate>,
        data_registers: Vec<Register>,
        ancilla_registers: Vec<Register>,
    ) -> Result<Self, CircuitError> {
        let c = Circuit {
            layout: Layout { num_qubits, data_registers, ancilla_registers },
            gates,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn num_qubits(&self) -> u32 {
        self.layout.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn data_registers(&self) -> &[Register] {
        &self.layout.data_registers
    }

    pub fn ancilla_registers(&self) -> &[Register] {
        &self.layout.ancilla_registers
    }

    /// All ancilla qubits, in ledger order.
    pub fn ancilla_qubits(&self) -> impl Iterator<Item = QubitId> + '_ {
        self.layout.ancilla_registers.iter().flat_map(|r| r.iter().copied())
    }

    pub fn is_permutation(&self) -> bool {
        self.gates.iter().all(Gate::is_permutation)
    }

    /// Checks operand ranges, per-gate distinctness, finite angles, and that
    /// data and ancilla registers do not overlap.
    pub fn validate(&self) -> Result<(), CircuitError> {
        let n = self.num_qubits();
        for g in &self.gates {
            let qs = g.qubits();
            for (i, q) in qs.iter().enumerate() {
                if q.0 >= n {
                    return Err(CircuitError::OperandOutOfRange { qubit: q.0, num_qubits: n });
                }
                if qs[..i].contains(q) {
                    return Err(CircuitError::DuplicateOperand(q.0));
                }
            }
            if g.angle().is_some_and(|a| !a.is_finite()) {
                return Err(CircuitError::NonFiniteAngle);
            }
        }
        let mut owner = vec![false; n as usize];
        let regs = self.layout.data_registers.iter().chain(&self.layout.ancilla_registers);
        for r in regs {
            for q in r.iter() {
                let slot = owner
                    .get_mut(q.index())
                    .ok_or(CircuitError::OperandOutOfRange { qubit: q.0, num_qubits: n })?;
                if *slot {
                    return Err(CircuitError::RegisterOverlap(q.0));
                }
                *slot = true;
            }
        }
        Ok(())
    }

    /// Inverse circuit: gate order reversed, each gate inverted.
    pub fn adjoint(&self) -> Circuit {
        Circuit {
            layout: self.layout.clone(),
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
        }
    }

    /// This circuit followed by `other` on the same layout.
    pub fn then(&self, other: &Circuit) -> Circuit {
        assert_eq!(self.num_qubits(), other.num_qubits());
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&other.gates);
        Circuit { layout: self.layout.clone(), gates }
    }

    /// Circuit acting as `self` when `control` is 1 and as identity when 0.
    ///
    /// `control` may be an unused qubit of the circuit or the index
    /// `num_qubits`, in which case the circuit grows by one qubit. The new
    /// control is not added to any register.
    pub fn controlled(&self, control: QubitId) -> Result<Circuit, CircuitError> {
        let n = self.num_qubits();
        if control.0 > n {
            return Err(CircuitError::OperandOutOfRange { qubit: control.0, num_qubits: n });
        }
        if self.gates.iter().any(|g| g.acts_on(control)) {
            return Err(CircuitError::ControlCollision(control.0));
        }
        let mut gates = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            controlled_gate(g, control, &mut gates);
        }
        let mut layout = self.layout.clone();
        layout.num_qubits = n.max(control.0 + 1);
        Ok(Circuit { layout, gates })
    }
}

fn controlled_gate(g: &Gate, c: QubitId, out: &mut Vec<Gate>) {
    match *g {
        Gate::X(t) => out.push(Gate::Cnot(c, t)),
        Gate::Cnot(a, t) => out.push(Gate::Ccx(c, a, t)),
        Gate::Ccx(a, b, t) => out.push(Gate::Mcx(vec![c, a, b].into(), t)),
        Gate::Mcx(ref cs, t) => {
            let mut all = Vec::with_capacity(cs.len() + 1);
            all.push(c);
            all.extend_from_slice(cs);
            out.push(Gate::Mcx(all.into(), t));
        }
        Gate::Swap(a, b) => {
            out.push(Gate::Cnot(b, a));
            out.push(Gate::Ccx(c, a, b));
            out.push(Gate::Cnot(b, a));
        }
        Gate::H(t) => {
            out.extend([Gate::S(t), Gate::H(t), Gate::T(t), Gate::Cnot(c, t), Gate::Tdg(t), Gate::H(t), Gate::Sdg(t)]);
        }
        Gate::S(t) => out.push(Gate::CPhase(c, t, FRAC_PI_2)),
        Gate::Sdg(t) => out.push(Gate::CPhase(c, t, -FRAC_PI_2)),
        Gate::T(t) => out.push(Gate::CPhase(c, t, FRAC_PI_4)),
        Gate::Tdg(t) => out.push(Gate::CPhase(c, t, -FRAC_PI_4)),
        Gate::Rz(t, a) => {
            out.push(Gate::Rz(t, a / 2.0));
            out.push(Gate::Cnot(c, t));
            out.push(Gate::Rz(t, -a / 2.0));
            out.push(Gate::Cnot(c, t));
        }
        Gate::CPhase(a, t, theta) => {
            out.push(Gate::CPhase(a, t, theta / 2.0));
            out.push(Gate::Cnot(c, a));
            out.push(Gate::CPhase(a, t, -theta / 2.0));
            out.push(Gate::Cnot(c, a));
            out.push(Gate::CPhase(c, t, theta / 2.0));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(i: u32) -> QubitId {
        QubitId(i)
    }

    #[test]
    fn adjoint_reverses_permutation_gates() {
        let c = Circuit::new(2, vec![Gate::X(q(0)), Gate::Cnot(q(0), q(1))], vec![], vec![]).unwrap();
        assert_eq!(c.adjoint().gates(), &[Gate::Cnot(q(0), q(1)), Gate::X(q(0))]);
        assert_eq!(c.adjoint().adjoint(), c);
    }

    #[test]
    fn adjoint_inverts_phases() {
        let c = Circuit::new(
            2,
            vec![Gate::S(q(0)), Gate::T(q(1)), Gate::Rz(q(0), 0.3), Gate::CPhase(q(0), q(1), 0.7)],
            vec![],
            vec![],
        )
        .unwrap();
        assert_eq!(
            c.adjoint().gates(),
            &[Gate::CPhase(q(0), q(1), -0.7), Gate::Rz(q(0), -0.3), Gate::Tdg(q(1)), Gate::Sdg(q(0))]
        );
    }

    #[test]
    fn controlled_x_is_cnot() {
        let c = Circuit::new(1, vec![Gate::X(q(0))], vec![], vec![]).unwrap();
        let cc = c.controlled(q(1)).unwrap();
        assert_eq!(cc.gates(), &[Gate::Cnot(q(1), q(0))]);
        assert_eq!(cc.num_qubits(), 2);
    }

    #[test]
    fn controlled_rejects_collision() {
        let c = Circuit::new(2, vec![Gate::Cnot(q(0), q(1))], vec![], vec![]).unwrap();
        assert_eq!(c.controlled(q(1)), Err(CircuitError::ControlCollision(1)));
        assert!(c.controlled(q(7)).is_err());
    }

    #[test]
    fn validate_catches_overlap() {
        let r = Register::new(vec![q(0), q(1)]).unwrap();
        let s = Register::new(vec![q(1)]).unwrap();
        assert_eq!(Circuit::new(2, vec![], vec![r], vec![s]), Err(CircuitError::RegisterOverlap(1)));
        assert!(Register::new(vec![q(0), q(0)]).is_err());
    }
}
