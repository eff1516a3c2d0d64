use num_complex::Complex64;

use super::{BasisState, SimError};
use crate::circuit::{Circuit, Gate};

/// Default qubit limit for dense simulation.
pub const STATEVECTOR_LIMIT: u32 = 22;

/// Tolerance for recognising a basis state in [`extract_basis`].
pub const BASIS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: u32,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(num_qubits: u32, index: u64) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << num_qubits];
        amps[index as usize] = Complex64::new(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        assert!(amps.len().is_power_of_two(), "amplitude count must be a power of two");
        StateVector { num_qubits: amps.len().trailing_zeros(), amps }
    }

    pub fn num_qubits(&self) -> u32 {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probability(&self, index: u64) -> f64 {
        self.amps[index as usize].norm_sqr()
    }

    pub fn apply(&mut self, g: &Gate) {
        let bit = |q: crate::circuit::QubitId| 1usize << q.index();
        match g {
            Gate::X(t) => self.permute(0, bit(*t)),
            Gate::Cnot(c, t) => self.permute(bit(*c), bit(*t)),
            Gate::Ccx(a, b, t) => self.permute(bit(*a) | bit(*b), bit(*t)),
            Gate::Mcx(cs, t) => self.permute(cs.iter().fold(0, |m, &q| m | bit(q)), bit(*t)),
            Gate::Swap(a, b) => {
                let (ma, mb) = (bit(*a), bit(*b));
                for i in 0..self.amps.len() {
                    if i & ma != 0 && i & mb == 0 {
                        self.amps.swap(i, (i & !ma) | mb);
                    }
                }
            }
            Gate::H(t) => {
                let m = bit(*t);
                let r = std::f64::consts::FRAC_1_SQRT_2;
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        let (x, y) = (self.amps[i], self.amps[i | m]);
                        self.amps[i] = (x + y) * r;
                        self.amps[i | m] = (x - y) * r;
                    }
                }
            }
            Gate::S(t) => self.phase(bit(*t), Complex64::new(0.0, 1.0)),
            Gate::Sdg(t) => self.phase(bit(*t), Complex64::new(0.0, -1.0)),
            Gate::T(t) => self.phase(bit(*t), Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)),
            Gate::Tdg(t) => self.phase(bit(*t), Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)),
            Gate::Rz(t, a) => {
                let m = bit(*t);
                let lo = Complex64::from_polar(1.0, -a / 2.0);
                let hi = Complex64::from_polar(1.0, a / 2.0);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    *amp *= if i & m == 0 { lo } else { hi };
                }
            }
            Gate::CPhase(c, t, a) => self.phase(bit(*c) | bit(*t), Complex64::from_polar(1.0, *a)),
        }
    }

    /// Swaps amplitude pairs differing in `target` where all `controls` are 1.
    fn permute(&mut self, controls: usize, target: usize) {
        for i in 0..self.amps.len() {
            if i & controls == controls && i & target == 0 {
                self.amps.swap(i, i | target);
            }
        }
    }

    /// Multiplies amplitudes whose index has every bit of `mask` set.
    fn phase(&mut self, mask: usize, f: Complex64) {
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp *= f;
            }
        }
    }
}

/// Dense evolution of a basis input.
pub fn simulate_statevector(c: &Circuit, input: &BasisState) -> Result<StateVector, SimError> {
    simulate_statevector_with_limit(c, input, STATEVECTOR_LIMIT)
}

pub fn simulate_statevector_with_limit(c: &Circuit, input: &BasisState, limit: u32) -> Result<StateVector, SimError> {
    let n = c.num_qubits();
    if n > limit {
        return Err(SimError::SizeLimit { qubits: n, limit });
    }
    if input.num_qubits() != n {
        return Err(SimError::WidthMismatch { circuit: n, state: input.num_qubits() });
    }
    let index = input.to_u64().expect("width checked against limit");
    let mut v = StateVector::basis(n, index);
    run(c, &mut v);
    Ok(v)
}

/// Applies every gate of `c` to `v` in order.
pub fn run(c: &Circuit, v: &mut StateVector) {
    assert_eq!(c.num_qubits(), v.num_qubits());
    for g in c.gates() {
        v.apply(g);
    }
}

/// The basis state `v` is concentrated on, if some amplitude carries at
/// least `1 - tol` of the probability.
pub fn extract_basis(v: &StateVector, tol: f64) -> Result<BasisState, SimError> {
    let (index, p) = v
        .amps
        .iter()
        .enumerate()
        .map(|(i, a)| (i, a.norm_sqr()))
        .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
    if p >= 1.0 - tol {
        Ok(BasisState::from_u64(v.num_qubits, index as u64))
    } else {
        Err(SimError::NotBasisState { max_probability: p })
    }
}
