use std::fmt;

/// Position of a qubit in a circuit's qubit array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QubitId(pub u32);

impl QubitId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Rotation angle `pi / 2^k`, computed without accumulating rounding error.
pub fn dyadic_angle(k: u32) -> f64 {
    std::f64::consts::PI * 0.5f64.powi(k as i32)
}

/// One element of the gate alphabet.
///
/// Multi-qubit variants list controls first and the target last.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    X(QubitId),
    Cnot(QubitId, QubitId),
    Ccx(QubitId, QubitId, QubitId),
    Mcx(Box<[QubitId]>, QubitId),
    Swap(QubitId, QubitId),
    H(QubitId),
    S(QubitId),
    Sdg(QubitId),
    T(QubitId),
    Tdg(QubitId),
    /// `diag(e^{-i angle/2}, e^{i angle/2})`.
    Rz(QubitId, f64),
    /// Phase `e^{i angle}` on `|11>`.
    CPhase(QubitId, QubitId, f64),
}

/// Coarse classification used by the counters and simulators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateClass {
    /// X, CNOT, CCX, MCX, SWAP: basis-state permutations.
    Permutation,
    Clifford,
    T,
    Rotation,
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::X(_) => "X",
            Gate::Cnot(..) => "CNOT",
            Gate::Ccx(..) => "CCX",
            Gate::Mcx(..) => "MCX",
            Gate::Swap(..) => "SWAP",
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::Sdg(_) => "SDG",
            Gate::T(_) => "T",
            Gate::Tdg(_) => "TDG",
            Gate::Rz(..) => "RZ",
            Gate::CPhase(..) => "CPHASE",
        }
    }

    pub fn class(&self) -> GateClass {
        match self {
            Gate::X(_) | Gate::Cnot(..) | Gate::Ccx(..) | Gate::Mcx(..) | Gate::Swap(..) => {
                GateClass::Permutation
            }
            Gate::H(_) | Gate::S(_) | Gate::Sdg(_) => GateClass::Clifford,
            Gate::T(_) | Gate::Tdg(_) => GateClass::T,
            Gate::Rz(..) | Gate::CPhase(..) => GateClass::Rotation,
        }
    }

    pub fn is_permutation(&self) -> bool {
        self.class() == GateClass::Permutation
    }

    /// Calls `f` on every operand, controls first.
    #[inline]
    pub fn for_each_qubit(&self, mut f: impl FnMut(QubitId)) {
        match self {
            Gate::X(q)
            | Gate::H(q)
            | Gate::S(q)
            | Gate::Sdg(q)
            | Gate::T(q)
            | Gate::Tdg(q)
            | Gate::Rz(q, _) => f(*q),
            Gate::Cnot(a, b) | Gate::Swap(a, b) | Gate::CPhase(a, b, _) => {
                f(*a);
                f(*b);
            }
            Gate::Ccx(a, b, c) => {
                f(*a);
                f(*b);
                f(*c);
            }
            Gate::Mcx(cs, t) => {
                cs.iter().copied().for_each(&mut f);
                f(*t);
            }
        }
    }

    pub fn qubits(&self) -> Vec<QubitId> {
        let mut v = Vec::with_capacity(3);
        self.for_each_qubit(|q| v.push(q));
        v
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            Gate::Rz(_, a) | Gate::CPhase(_, _, a) => Some(*a),
            _ => None,
        }
    }

    pub fn acts_on(&self, q: QubitId) -> bool {
        let mut hit = false;
        self.for_each_qubit(|p| hit |= p == q);
        hit
    }

    /// Inverse gate. Self-inverse gates are returned unchanged.
    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::S(q) => Gate::Sdg(*q),
            Gate::Sdg(q) => Gate::S(*q),
            Gate::T(q) => Gate::Tdg(*q),
            Gate::Tdg(q) => Gate::T(*q),
            Gate::Rz(q, a) => Gate::Rz(*q, -a),
            Gate::CPhase(c, t, a) => Gate::CPhase(*c, *t, -a),
            g => g.clone(),
        }
    }

    /// Same gate with every operand passed through `f`.
    pub fn remap(&self, f: impl Fn(QubitId) -> QubitId) -> Gate {
        match self {
            Gate::X(q) => Gate::X(f(*q)),
            Gate::Cnot(a, b) => Gate::Cnot(f(*a), f(*b)),
            Gate::Ccx(a, b, c) => Gate::Ccx(f(*a), f(*b), f(*c)),
            Gate::Mcx(cs, t) => Gate::Mcx(cs.iter().map(|&q| f(q)).collect(), f(*t)),
            Gate::Swap(a, b) => Gate::Swap(f(*a), f(*b)),
            Gate::H(q) => Gate::H(f(*q)),
            Gate::S(q) => Gate::S(f(*q)),
            Gate::Sdg(q) => Gate::Sdg(f(*q)),
            Gate::T(q) => Gate::T(f(*q)),
            Gate::Tdg(q) => Gate::Tdg(f(*q)),
            Gate::Rz(q, a) => Gate::Rz(f(*q), *a),
            Gate::CPhase(c, t, a) => Gate::CPhase(f(*c), f(*t), *a),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.name())?;
        let mut first = true;
        let mut res = Ok(());
        self.for_each_qubit(|q| {
            if res.is_ok() {
                res = if first { write!(f, "{q}") } else { write!(f, ",{q}") };
                first = false;
            }
        });
        res?;
        if let Some(a) = self.angle() {
            write!(f, ";angle={a:?}")?;
        }
        Ok(())
    }
}
