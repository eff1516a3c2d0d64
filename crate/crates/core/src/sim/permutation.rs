use super::{BasisState, SimError};
use crate::circuit::{Circuit, Gate};

/// Default qubit limit for [`permutation_table`].
pub const PERMUTATION_TABLE_LIMIT: u32 = 16;

fn check_permutation(c: &Circuit) -> Result<(), SimError> {
    match c.gates().iter().position(|g| !g.is_permutation()) {
        Some(index) => Err(SimError::NonPermutationGate { index, gate: c.gates()[index].name() }),
        None => Ok(()),
    }
}

/// Runs a Toffoli-class circuit on one basis state.
pub fn simulate_permutation(c: &Circuit, input: &BasisState) -> Result<BasisState, SimError> {
    check_permutation(c)?;
    check_width(c, input)?;
    let mut s = input.clone();
    for g in c.gates() {
        match g {
            Gate::X(t) => s.flip(*t),
            Gate::Cnot(a, t) => {
                if s.bit(*a) {
                    s.flip(*t)
                }
            }
            Gate::Ccx(a, b, t) => {
                if s.bit(*a) && s.bit(*b) {
                    s.flip(*t)
                }
            }
            Gate::Mcx(cs, t) => {
                if cs.iter().all(|&q| s.bit(q)) {
                    s.flip(*t)
                }
            }
            Gate::Swap(a, b) => {
                let (x, y) = (s.bit(*a), s.bit(*b));
                s.set_bit(*a, y);
                s.set_bit(*b, x);
            }
            _ => unreachable!("checked above"),
        }
    }
    Ok(s)
}

fn check_width(c: &Circuit, input: &BasisState) -> Result<(), SimError> {
    if input.num_qubits() != c.num_qubits() {
        return Err(SimError::WidthMismatch { circuit: c.num_qubits(), state: input.num_qubits() });
    }
    Ok(())
}

/// Bit-sliced simulation: each qubit holds a 64-lane word, so one pass over
/// the gate list evaluates up to 64 inputs.
pub fn simulate_permutation_batch(c: &Circuit, inputs: &[BasisState]) -> Result<Vec<BasisState>, SimError> {
    check_permutation(c)?;
    for s in inputs {
        check_width(c, s)?;
    }
    let n = c.num_qubits() as usize;
    let mut out = Vec::with_capacity(inputs.len());
    let mut lanes = vec![0u64; n];
    for chunk in inputs.chunks(64) {
        lanes.iter_mut().for_each(|w| *w = 0);
        for (j, s) in chunk.iter().enumerate() {
            for (q, lane) in lanes.iter_mut().enumerate() {
                *lane |= u64::from(s.bit(crate::circuit::QubitId(q as u32))) << j;
            }
        }
        run_lanes(c.gates(), &mut lanes);
        for j in 0..chunk.len() {
            let mut s = BasisState::zeros(n as u32);
            for (q, lane) in lanes.iter().enumerate() {
                if (lane >> j) & 1 == 1 {
                    s.set_bit(crate::circuit::QubitId(q as u32), true);
                }
            }
            out.push(s);
        }
    }
    Ok(out)
}

fn run_lanes(gates: &[Gate], lanes: &mut [u64]) {
    for g in gates {
        match g {
            Gate::X(t) => lanes[t.index()] = !lanes[t.index()],
            Gate::Cnot(a, t) => lanes[t.index()] ^= lanes[a.index()],
            Gate::Ccx(a, b, t) => lanes[t.index()] ^= lanes[a.index()] & lanes[b.index()],
            Gate::Mcx(cs, t) => {
                let m = cs.iter().fold(!0u64, |m, q| m & lanes[q.index()]);
                lanes[t.index()] ^= m;
            }
            Gate::Swap(a, b) => lanes.swap(a.index(), b.index()),
            _ => unreachable!("checked by caller"),
        }
    }
}

/// Full permutation of `[0, 2^n)` computed by the circuit.
pub fn permutation_table(c: &Circuit) -> Result<Vec<u64>, SimError> {
    permutation_table_with_limit(c, PERMUTATION_TABLE_LIMIT)
}

pub fn permutation_table_with_limit(c: &Circuit, limit: u32) -> Result<Vec<u64>, SimError> {
    check_permutation(c)?;
    let n = c.num_qubits();
    if n > limit {
        return Err(SimError::SizeLimit { qubits: n, limit });
    }
    let total = 1u64 << n;
    let mut table = Vec::with_capacity(total as usize);
    let mut lanes = vec![0u64; n as usize];
    let mut base = 0u64;
    while base < total {
        let count = (total - base).min(64);
        for (q, lane) in lanes.iter_mut().enumerate() {
            *lane = (0..count).fold(0, |w, j| w | ((((base + j) >> q) & 1) << j));
        }
        run_lanes(c.gates(), &mut lanes);
        for j in 0..count {
            let v = lanes.iter().enumerate().fold(0u64, |v, (q, lane)| v | (((lane >> j) & 1) << q));
            table.push(v);
        }
        base += count;
    }
    Ok(table)
}

/// True if `table` is a bijection on `[0, table.len())`.
pub fn is_bijection(table: &[u64]) -> bool {
    let mut seen = vec![false; table.len()];
    for &v in table {
        match seen.get_mut(v as usize) {
            Some(s) if !*s => *s = true,
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::QubitId;

    fn circ(n: u32, gates: Vec<Gate>) -> Circuit {
        Circuit::new(n, gates, vec![], vec![]).unwrap()
    }

    #[test]
    fn x_flips_bit_zero() {
        let c = circ(3, vec![Gate::X(QubitId(0))]);
        let out = simulate_permutation(&c, &BasisState::from_u64(3, 0)).unwrap();
        assert_eq!(out.to_u64(), Some(0b001));
    }

    #[test]
    fn toffoli_truth_table() {
        let c = circ(3, vec![Gate::Ccx(QubitId(0), QubitId(1), QubitId(2))]);
        let out = simulate_permutation(&c, &BasisState::from_u64(3, 0b011)).unwrap();
        assert_eq!(out.to_u64(), Some(0b111));
        assert_eq!(permutation_table(&c).unwrap(), vec![0, 1, 2, 7, 4, 5, 6, 3]);
    }

    #[test]
    fn swap_table() {
        let c = circ(2, vec![Gate::Swap(QubitId(0), QubitId(1))]);
        assert_eq!(permutation_table(&c).unwrap(), vec![0, 2, 1, 3]);
    }

    #[test]
    fn identity_table() {
        let c = circ(4, vec![]);
        assert_eq!(permutation_table(&c).unwrap(), (0..16).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_non_permutation_gates() {
        let c = circ(2, vec![Gate::X(QubitId(0)), Gate::H(QubitId(1))]);
        assert_eq!(
            simulate_permutation(&c, &BasisState::zeros(2)),
            Err(SimError::NonPermutationGate { index: 1, gate: "H" })
        );
    }

    #[test]
    fn table_size_limit() {
        let c = circ(17, vec![]);
        assert_eq!(permutation_table(&c), Err(SimError::SizeLimit { qubits: 17, limit: 16 }));
    }

    #[test]
    fn batch_matches_single() {
        let c = circ(
            5,
            vec![
                Gate::Ccx(QubitId(0), QubitId(1), QubitId(4)),
                Gate::Mcx(vec![QubitId(2), QubitId(3), QubitId(4)].into(), QubitId(0)),
                Gate::Swap(QubitId(1), QubitId(3)),
                Gate::X(QubitId(2)),
            ],
        );
        let inputs: Vec<_> = (0..32).map(|v| BasisState::from_u64(5, v)).collect();
        let batch = simulate_permutation_batch(&c, &inputs).unwrap();
        for (i, o) in inputs.iter().zip(&batch) {
            assert_eq!(&simulate_permutation(&c, i).unwrap(), o);
        }
        assert!(is_bijection(&permutation_table(&c).unwrap()));
    }
}
