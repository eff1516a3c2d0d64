use num_bigint::BigUint;

use crate::circuit::QubitId;

/// Computational basis state over `num_qubits` qubits. Bit `i` of the value
/// is the state of qubit `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisState {
    num_qubits: u32,
    words: Vec<u64>,
}

impl BasisState {
    pub fn zeros(num_qubits: u32) -> Self {
        BasisState { num_qubits, words: vec![0; (num_qubits as usize).div_ceil(64).max(1)] }
    }

    /// State whose value is `value`; bits at or above `num_qubits` are dropped.
    pub fn from_u64(num_qubits: u32, value: u64) -> Self {
        let mut s = Self::zeros(num_qubits);
        s.words[0] = if num_qubits >= 64 { value } else { value & ((1u64 << num_qubits) - 1) };
        s
    }

    pub fn num_qubits(&self) -> u32 {
        self.num_qubits
    }

    /// The whole state as an integer, if it fits.
    pub fn to_u64(&self) -> Option<u64> {
        if self.words[1..].iter().any(|&w| w != 0) {
            None
        } else {
            Some(self.words[0])
        }
    }

    pub fn to_biguint(&self) -> BigUint {
        BigUint::from_slice(
            &self.words.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect::<Vec<_>>(),
        )
    }

    #[inline]
    pub fn bit(&self, q: QubitId) -> bool {
        let i = q.index();
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set_bit(&mut self, q: QubitId, v: bool) {
        let i = q.index();
        debug_assert!(i < self.num_qubits as usize);
        let m = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, q: QubitId) {
        let i = q.index();
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    /// Little-endian value held by `reg`; registers wider than 64 qubits
    /// must use [`get_register_big`](Self::get_register_big).
    pub fn get_register(&self, reg: &[QubitId]) -> u64 {
        assert!(reg.len() <= 64, "register of {} qubits does not fit in u64", reg.len());
        reg.iter().enumerate().fold(0, |acc, (i, &q)| acc | (u64::from(self.bit(q)) << i))
    }

    /// Writes the low `reg.len()` bits of `value` into `reg`.
    pub fn set_register(&mut self, reg: &[QubitId], value: u64) {
        for (i, &q) in reg.iter().enumerate() {
            self.set_bit(q, i < 64 && (value >> i) & 1 == 1);
        }
    }

    pub fn get_register_big(&self, reg: &[QubitId]) -> BigUint {
        let mut v = BigUint::default();
        for (i, &q) in reg.iter().enumerate() {
            if self.bit(q) {
                v.set_bit(i as u64, true);
            }
        }
        v
    }

    pub fn set_register_big(&mut self, reg: &[QubitId], value: &BigUint) {
        for (i, &q) in reg.iter().enumerate() {
            self.set_bit(q, value.bit(i as u64));
        }
    }

    /// True when every listed qubit is 0.
    pub fn all_zero(&self, qubits: impl IntoIterator<Item = QubitId>) -> bool {
        qubits.into_iter().all(|q| !self.bit(q))
    }
}
