use std::ops::Deref;

use super::{Circuit, CircuitError, Gate, QubitId};

/// Destination for gates as a builder produces them.
///
/// Recording into a `Vec<Gate>` yields a [`Circuit`]; the resource counters
/// implement this trait too, so very large circuits can be tallied without
/// ever being materialized.
pub trait GateSink {
    fn emit(&mut self, gate: Gate);
}

impl GateSink for Vec<Gate> {
    #[inline]
    fn emit(&mut self, gate: Gate) {
        self.push(gate);
    }
}

/// Ordered, duplicate-free list of qubits holding a little-endian integer:
/// position 0 is the least significant bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Register {
    qubits: Vec<QubitId>,
}

impl Register {
    pub fn new(qubits: Vec<QubitId>) -> Result<Self, CircuitError> {
        let mut sorted = qubits.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(CircuitError::DuplicateQubit(w[0].0));
        }
        Ok(Register { qubits })
    }

    pub(crate) fn from_vec_unchecked(qubits: Vec<QubitId>) -> Self {
        Register { qubits }
    }

    pub fn qubits(&self) -> &[QubitId] {
        &self.qubits
    }

    pub fn into_vec(self) -> Vec<QubitId> {
        self.qubits
    }
}

impl Deref for Register {
    type Target = [QubitId];

    fn deref(&self) -> &[QubitId] {
        &self.qubits
    }
}

impl From<Register> for Vec<QubitId> {
    fn from(r: Register) -> Self {
        r.qubits
    }
}

/// Qubit layout of a finished build.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Layout {
    /// Peak width: every qubit ever created by the builder.
    pub num_qubits: u32,
    pub data_registers: Vec<Register>,
    pub ancilla_registers: Vec<Register>,
}

/// Incremental circuit constructor with an ancilla ledger.
///
/// Ancillas are handed out from a pool of released clean qubits before new
/// qubits are created, so `num_qubits` is the peak number of simultaneously
/// live qubits. Code that releases an ancilla promises it is back in `|0>`;
/// the simulators check that promise.
pub struct Builder<S: GateSink = Vec<Gate>> {
    sink: S,
    frames: Vec<Vec<Gate>>,
    live: Vec<bool>,
    ancilla: Vec<bool>,
    free: Vec<QubitId>,
    data_registers: Vec<Register>,
    ancilla_registers: Vec<Register>,
}

impl Builder<Vec<Gate>> {
    pub fn new() -> Self {
        Self::with_sink(Vec::new())
    }

    pub fn gates(&self) -> &[Gate] {
        &self.sink
    }

    pub fn finalize(self) -> Circuit {
        let (layout, gates) = self.into_parts();
        Circuit::from_parts(layout, gates)
    }
}

impl Default for Builder<Vec<Gate>> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: GateSink> Builder<S> {
    pub fn with_sink(sink: S) -> Self {
        Builder {
            sink,
            frames: Vec::new(),
            live: Vec::new(),
            ancilla: Vec::new(),
            free: Vec::new(),
            data_registers: Vec::new(),
            ancilla_registers: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> u32 {
        self.live.len() as u32
    }

    pub fn sink(&self) -> &S {
        &self.sink
    }

    fn fresh(&mut self, ancilla: bool) -> QubitId {
        let q = QubitId(self.live.len() as u32);
        self.live.push(true);
        self.ancilla.push(ancilla);
        q
    }

    /// Allocates `size` fresh consecutive data qubits.
    pub fn alloc_register(&mut self, size: usize) -> Result<Register, CircuitError> {
        if size == 0 {
            return Err(CircuitError::ZeroSizeRegister);
        }
        let reg = Register::from_vec_unchecked((0..size).map(|_| self.fresh(false)).collect());
        self.data_registers.push(reg.clone());
        Ok(reg)
    }

    /// Allocates `size` clean ancillas and records them in the ledger.
    pub fn alloc_ancilla(&mut self, size: usize) -> Result<Register, CircuitError> {
        if size == 0 {
            return Err(CircuitError::ZeroSizeRegister);
        }
        Ok(self.ancillas(size))
    }

    /// Like [`alloc_ancilla`](Self::alloc_ancilla) but a zero size yields an
    /// empty register.
    pub fn ancillas(&mut self, size: usize) -> Register {
        let mut qubits = Vec::with_capacity(size);
        let mut created = Vec::new();
        for _ in 0..size {
            let q = match self.free.pop() {
                Some(q) => {
                    self.live[q.index()] = true;
                    q
                }
                None => {
                    let q = self.fresh(true);
                    created.push(q);
                    q
                }
            };
            qubits.push(q);
        }
        if !created.is_empty() {
            self.ancilla_registers.push(Register::from_vec_unchecked(created));
        }
        Register::from_vec_unchecked(qubits)
    }

    pub fn ancilla(&mut self) -> QubitId {
        self.ancillas(1)[0]
    }

    /// Returns ancillas to the pool. They must already be back in `|0>`.
    pub fn release(&mut self, qubits: &[QubitId]) {
        for &q in qubits.iter().rev() {
            let i = q.index();
            assert!(
                self.ancilla[i] && self.live[i],
                "release of qubit {q} which is not a live ancilla"
            );
            self.live[i] = false;
            self.free.push(q);
        }
    }

    /// Runs `f` with `size` scoped ancillas that are released afterwards.
    pub fn with_ancillas<R>(&mut self, size: usize, f: impl FnOnce(&mut Self, &[QubitId]) -> R) -> R {
        let reg = self.ancillas(size);
        let out = f(self, &reg);
        self.release(&reg);
        out
    }

    fn check(&self, gate: &Gate) -> Result<(), CircuitError> {
        let mut seen = [QubitId(u32::MAX); 3];
        let mut n = 0usize;
        let mut err = None;
        let mcx = matches!(gate, Gate::Mcx(..));
        gate.for_each_qubit(|q| {
            if err.is_some() {
                return;
            }
            let i = q.index();
            if i >= self.live.len() || !self.live[i] {
                err = Some(CircuitError::OperandOutOfRange { qubit: q.0, num_qubits: self.num_qubits() });
                return;
            }
            if !mcx {
                if seen[..n].contains(&q) {
                    err = Some(CircuitError::DuplicateOperand(q.0));
                }
                seen[n] = q;
                n += 1;
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        if let Gate::Mcx(cs, t) = gate {
            let mut all: Vec<QubitId> = cs.to_vec();
            all.push(*t);
            all.sort_unstable();
            if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
                return Err(CircuitError::DuplicateOperand(w[0].0));
            }
        }
        if let Some(a) = gate.angle() {
            if !a.is_finite() {
                return Err(CircuitError::NonFiniteAngle);
            }
        }
        Ok(())
    }

    /// Validates and appends one gate.
    pub fn append(&mut self, gate: Gate) -> Result<(), CircuitError> {
        self.check(&gate)?;
        match self.frames.last_mut() {
            Some(frame) => frame.push(gate),
            None => self.sink.emit(gate),
        }
        Ok(())
    }

    /// Appends a gate the caller knows to be valid; panics otherwise.
    #[inline]
    pub fn push(&mut self, gate: Gate) {
        if let Err(e) = self.append(gate) {
            panic!("invalid gate emitted during construction: {e}");
        }
    }

    /// Emits the adjoint of whatever `f` emits: the block is recorded,
    /// reversed and each gate inverted.
    pub fn adjoint_block<R>(&mut self, f: impl FnOnce(&mut Self) -> R) -> R {
        self.frames.push(Vec::new());
        let out = f(self);
        let block = self.frames.pop().expect("frame pushed above");
        for g in block.into_iter().rev() {
            let g = g.adjoint();
            match self.frames.last_mut() {
                Some(frame) => frame.push(g),
                None => self.sink.emit(g),
            }
        }
        out
    }

    /// Emits `f`'s block forwards when `adjoint` is false, inverted otherwise.
    pub fn maybe_adjoint<R>(&mut self, adjoint: bool, f: impl FnOnce(&mut Self) -> R) -> R {
        if adjoint {
            self.adjoint_block(f)
        } else {
            f(self)
        }
    }

    pub fn into_parts(self) -> (Layout, S) {
        assert!(self.frames.is_empty(), "unbalanced adjoint frames");
        let layout = Layout {
            num_qubits: self.num_qubits(),
            data_registers: self.data_registers,
            ancilla_registers: self.ancilla_registers,
        };
        (layout, self.sink)
    }

    pub fn x(&mut self, q: QubitId) {
        self.push(Gate::X(q));
    }

    pub fn cx(&mut self, c: QubitId, t: QubitId) {
        self.push(Gate::Cnot(c, t));
    }

    pub fn ccx(&mut self, c1: QubitId, c2: QubitId, t: QubitId) {
        self.push(Gate::Ccx(c1, c2, t));
    }

    pub fn swap(&mut self, a: QubitId, b: QubitId) {
        self.push(Gate::Swap(a, b));
    }

    pub fn h(&mut self, q: QubitId) {
        self.push(Gate::H(q));
    }

    pub fn rz(&mut self, q: QubitId, angle: f64) {
        self.push(Gate::Rz(q, angle));
    }

    pub fn cphase(&mut self, c: QubitId, t: QubitId, angle: f64) {
        self.push(Gate::CPhase(c, t, angle));
    }

    /// X on every qubit of `qs`.
    pub fn x_all(&mut self, qs: &[QubitId]) {
        for &q in qs {
            self.x(q);
        }
    }

    /// Pairwise SWAP of two equal-length registers.
    pub fn swap_registers(&mut self, a: &[QubitId], b: &[QubitId]) {
        assert_eq!(a.len(), b.len());
        for (&p, &q) in a.iter().zip(b) {
            self.swap(p, q);
        }
    }

    /// XORs the low bits of `value` onto `qs`, controlled on `ctrl` if given.
    pub fn xor_constant(&mut self, qs: &[QubitId], value: &num_bigint::BigUint, ctrl: Option<QubitId>) {
        for (i, &q) in qs.iter().enumerate() {
            if value.bit(i as u64) {
                match ctrl {
                    Some(c) => self.cx(c, q),
                    None => self.x(q),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_builder() {
        let b = Builder::new();
        assert_eq!(b.num_qubits(), 0);
        let c = b.finalize();
        assert_eq!(c.num_qubits(), 0);
        assert!(c.gates().is_empty());
    }

    #[test]
    fn identity_circuit_after_allocation() {
        let mut b = Builder::new();
        b.alloc_register(3).unwrap();
        let c = b.finalize();
        assert_eq!(c.num_qubits(), 3);
        assert!(c.gates().is_empty());
    }

    #[test]
    fn registers_are_consecutive_and_disjoint() {
        let mut b = Builder::new();
        let r0 = b.alloc_register(4).unwrap();
        let r1 = b.alloc_register(2).unwrap();
        assert_eq!(r0.qubits(), &[QubitId(0), QubitId(1), QubitId(2), QubitId(3)]);
        assert_eq!(r1.qubits(), &[QubitId(4), QubitId(5)]);
        let r2 = b.alloc_register(2).unwrap();
        assert!(r2.iter().all(|q| !r0.contains(q) && !r1.contains(q)));
        assert_eq!(b.num_qubits(), 8);
        assert_eq!(b.alloc_register(0), Err(CircuitError::ZeroSizeRegister));
    }

    #[test]
    fn ancilla_ledger() {
        let mut b = Builder::new();
        b.alloc_register(6).unwrap();
        let anc = b.alloc_ancilla(3).unwrap();
        assert_eq!(anc.qubits(), &[QubitId(6), QubitId(7), QubitId(8)]);
        assert!(b.alloc_ancilla(0).is_err());
        let c = b.finalize();
        assert_eq!(c.ancilla_registers().len(), 1);
        assert_eq!(c.ancilla_registers()[0].qubits(), anc.qubits());
    }

    #[test]
    fn released_ancillas_are_reused() {
        let mut b = Builder::new();
        b.alloc_register(2).unwrap();
        let first = b.ancillas(3);
        b.release(&first);
        let second = b.ancillas(4);
        assert_eq!(b.num_qubits(), 6);
        let mut reused: Vec<_> = second[..3].to_vec();
        reused.sort();
        assert_eq!(reused, first.qubits());
        let c = b.finalize();
        // Only freshly created qubits form ledger entries, so they stay disjoint.
        assert_eq!(c.ancilla_registers().len(), 2);
        assert_eq!(c.ancilla_registers()[1].qubits(), &[QubitId(5)]);
    }

    #[test]
    fn append_validates_operands() {
        let mut b = Builder::new();
        b.alloc_register(1).unwrap();
        b.append(Gate::X(QubitId(0))).unwrap();
        assert_eq!(b.gates(), &[Gate::X(QubitId(0))]);

        let mut b = Builder::new();
        b.alloc_register(2).unwrap();
        assert_eq!(b.append(Gate::Cnot(QubitId(0), QubitId(0))), Err(CircuitError::DuplicateOperand(0)));

        let mut b = Builder::new();
        b.alloc_register(3).unwrap();
        assert!(matches!(
            b.append(Gate::Ccx(QubitId(0), QubitId(1), QubitId(5))),
            Err(CircuitError::OperandOutOfRange { qubit: 5, .. })
        ));
        assert_eq!(b.append(Gate::Rz(QubitId(0), f64::NAN)), Err(CircuitError::NonFiniteAngle));
        assert!(b.append(Gate::Mcx(vec![QubitId(0), QubitId(1)].into(), QubitId(1))).is_err());
    }

    #[test]
    fn released_qubits_cannot_be_targeted() {
        let mut b = Builder::new();
        let a = b.ancillas(1);
        b.release(&a);
        assert!(b.append(Gate::X(a[0])).is_err());
    }

    #[test]
    fn adjoint_block_reverses_and_inverts() {
        let mut b = Builder::new();
        let r = b.alloc_register(2).unwrap();
        b.adjoint_block(|b| {
            b.push(Gate::T(r[0]));
            b.cx(r[0], r[1]);
            b.push(Gate::Rz(r[1], 0.5));
        });
        assert_eq!(b.gates(), &[Gate::Rz(r[1], -0.5), Gate::Cnot(r[0], r[1]), Gate::Tdg(r[0])]);
    }

    #[test]
    fn nested_adjoint_blocks_cancel() {
        let mut b = Builder::new();
        let r = b.alloc_register(2).unwrap();
        b.adjoint_block(|b| {
            b.push(Gate::S(r[0]));
            b.adjoint_block(|b| {
                b.push(Gate::T(r[1]));
                b.h(r[1]);
            });
        });
        assert_eq!(b.gates(), &[Gate::T(r[1]), Gate::H(r[1]), Gate::Sdg(r[0])]);
    }
}
