//! Oracle checks: run a circuit on basis inputs and compare every data
//! register against classical arithmetic, requiring clean ancillas.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::adders::{self, ConstAdderAlgo, InPlaceAdderAlgo, OutOfPlaceAdderAlgo};
use crate::circuit::Circuit;
use crate::modexp::{self, LookupTable, ModExpAlgo};
use crate::muldiv::{self, DividerSpec, MultiplierAlgo};
use crate::sim::{
    extract_basis, simulate_permutation_batch, simulate_statevector, BasisState, SimError, BASIS_TOLERANCE,
};
use crate::ArithError;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("register of {0} qubits is too wide for exhaustive checking")]
    TooWide(usize),
}

/// First failing case of a check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub inputs: Vec<u64>,
    pub expected: Vec<u64>,
    pub actual: Vec<u64>,
    pub dirty_ancilla: bool,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "inputs {:?}: expected {:?}, got {:?}", self.inputs, self.expected, self.actual)?;
        if self.dirty_ancilla {
            write!(f, " (ancilla left dirty)")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub label: String,
    pub cases: u64,
    pub mismatch: Option<Mismatch>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.mismatch {
            None => write!(f, "PASS {} ({} cases)", self.label, self.cases),
            Some(m) => write!(f, "FAIL {} after {} cases: {m}", self.label, self.cases),
        }
    }
}

/// How inputs are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    Exhaustive,
    Random { cases: u64, seed: u64 },
}

fn encode(c: &Circuit, values: &[u64]) -> BasisState {
    let mut s = BasisState::zeros(c.num_qubits());
    for (r, &v) in c.data_registers().iter().zip(values) {
        s.set_register(r, v);
    }
    s
}

fn decode(c: &Circuit, s: &BasisState) -> (Vec<u64>, bool) {
    let vals = c.data_registers().iter().map(|r| s.get_register(r)).collect();
    (vals, !s.all_zero(c.ancilla_qubits()))
}

/// Runs `c` on each input (one value per data register) and compares all
/// data registers with `oracle`. Stops at the first mismatch. Circuits with
/// rotations go through the statevector simulator and must end in a basis
/// state.
pub fn check_circuit<I, F>(label: &str, c: &Circuit, inputs: I, oracle: F) -> Result<Report, VerifyError>
where
    I: IntoIterator<Item = Vec<u64>>,
    F: Fn(&[u64]) -> Vec<u64>,
{
    if let Some(r) = c.data_registers().iter().find(|r| r.len() > 64) {
        return Err(VerifyError::TooWide(r.len()));
    }
    let mut cases = 0u64;
    let permutation = c.is_permutation();
    let mut inputs = inputs.into_iter().peekable();
    while inputs.peek().is_some() {
        let chunk: Vec<Vec<u64>> = inputs.by_ref().take(64).collect();
        let states: Vec<BasisState> = chunk.iter().map(|v| encode(c, v)).collect();
        let outs = if permutation {
            simulate_permutation_batch(c, &states)?
        } else {
            states
                .iter()
                .map(|s| extract_basis(&simulate_statevector(c, s)?, BASIS_TOLERANCE))
                .collect::<Result<_, _>>()?
        };
        for (input, out) in chunk.iter().zip(&outs) {
            cases += 1;
            let expected = oracle(input);
            let (actual, dirty) = decode(c, out);
            if actual != expected || dirty {
                let mismatch = Mismatch { inputs: input.clone(), expected, actual, dirty_ancilla: dirty };
                return Ok(Report { label: label.to_string(), cases, mismatch: Some(mismatch) });
            }
        }
    }
    Ok(Report { label: label.to_string(), cases, mismatch: None })
}

fn all_pairs(n: usize) -> impl Iterator<Item = Vec<u64>> {
    let m = 1u64 << n;
    (0..m).flat_map(move |y| (0..m).map(move |x| vec![x, y]))
}

fn sample_pairs(n: usize, sampling: Sampling) -> Box<dyn Iterator<Item = Vec<u64>>> {
    match sampling {
        Sampling::Exhaustive => Box::new(all_pairs(n)),
        Sampling::Random { cases, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mask = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
            Box::new((0..cases).map(move |_| vec![rng.gen::<u64>() & mask, rng.gen::<u64>() & mask]))
        }
    }
}

fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn inplace_adder(algo: InPlaceAdderAlgo, n: usize) -> Result<Report, VerifyError> {
    let c = adders::build_inplace_adder(algo, n)?;
    check_circuit(&format!("inplace_adder/{algo} n={n}"), &c, all_pairs(n), |v| {
        vec![v[0], (v[0] + v[1]) & mask(n)]
    })
}

pub fn outofplace_adder(algo: OutOfPlaceAdderAlgo, n: usize) -> Result<Report, VerifyError> {
    let c = adders::build_outofplace_adder(algo, n)?;
    let inputs = all_pairs(n).map(|mut v| {
        v.push(0);
        v
    });
    check_circuit(&format!("outofplace_adder/{algo} n={n}"), &c, inputs, |v| {
        vec![v[0], v[1], (v[0] + v[1]) & mask(n)]
    })
}

pub fn const_adder(algo: ConstAdderAlgo, n: usize, constant: u64) -> Result<Report, VerifyError> {
    let c = adders::build_const_adder(algo, n, &BigUint::from(constant))?;
    check_circuit(
        &format!("const_adder/{algo} n={n} c={constant}"),
        &c,
        (0..1u64 << n).map(|y| vec![y]),
        |v| vec![(v[0] + constant) & mask(n)],
    )
}

pub fn subtractor(algo: InPlaceAdderAlgo, n: usize) -> Result<Report, VerifyError> {
    let c = adders::build_subtractor(algo, n)?;
    check_circuit(&format!("subtractor/{algo} n={n}"), &c, all_pairs(n), |v| {
        vec![v[0], v[1].wrapping_sub(v[0]) & mask(n)]
    })
}

pub fn multiplier(algo: MultiplierAlgo, n: usize, sampling: Sampling) -> Result<Report, VerifyError> {
    let c = muldiv::build_multiplier(algo, n)?;
    let inputs = sample_pairs(n, sampling).map(|mut v| {
        v.push(0);
        v
    });
    check_circuit(&format!("multiplier/{algo} n={n}"), &c, inputs, |v| vec![v[0], v[1], v[0] * v[1]])
}

/// All `a` and all `b > 0`; `b = 0` has no arithmetic contract.
pub fn divider(spec: DividerSpec, n: usize) -> Result<Report, VerifyError> {
    let c = muldiv::build_divider(spec, n)?;
    let m = 1u64 << n;
    let inputs = (1..m).flat_map(move |b| (0..m).map(move |a| vec![a, b, 0]));
    check_circuit(&format!("divider/{spec} n={n}"), &c, inputs, |v| vec![v[0] % v[1], v[1], v[0] / v[1]])
}

fn pow_mod(a: u64, e: u64, m: u64) -> u64 {
    BigUint::from(a).modpow(&BigUint::from(e), &BigUint::from(m)).to_u64().expect("below modulus")
}

/// Every exponent `x` in `[0, 2^n)` with a zeroed output register.
pub fn modexp(algo: ModExpAlgo, a: u64, modulus: u64, n: usize) -> Result<Report, VerifyError> {
    let c = modexp::build_modexp(algo, &BigUint::from(a), &BigUint::from(modulus), n)?;
    check_circuit(
        &format!("modexp/{algo} n={n} a={a} N={modulus}"),
        &c,
        (0..1u64 << n).map(|x| vec![x, 0]),
        |v| vec![v[0], pow_mod(a, v[0], modulus)],
    )
}

/// Every `x < N`.
pub fn modmul_const(mult: u64, modulus: u64, n: usize) -> Result<Report, VerifyError> {
    let c = modexp::build_modmul_const(&BigUint::from(mult), &BigUint::from(modulus), n)?;
    check_circuit(
        &format!("modmul c={mult} N={modulus} n={n}"),
        &c,
        (0..modulus).map(|x| vec![x]),
        |v| vec![(v[0] * mult) % modulus],
    )
}

/// Every address and every target value.
pub fn lookup(table: &LookupTable, m: usize) -> Result<Report, VerifyError> {
    let c = modexp::build_table_lookup(table, m)?;
    let k = table.address_bits();
    let entries: Vec<u64> = table.entries().iter().map(|e| e.to_u64().expect("entry below 2^m")).collect();
    let inputs = (0..1u64 << m).flat_map(move |y| (0..1u64 << k).map(move |addr| vec![addr, y]));
    check_circuit(&format!("lookup k={k} m={m}"), &c, inputs, |v| vec![v[0], v[1] ^ entries[v[0] as usize]])
}

/// `c` followed by its adjoint must act as the identity on every sampled
/// basis state. Circuits of up to `exhaustive_qubits` qubits are checked on
/// all of them.
pub fn adjoint_identity(c: &Circuit, exhaustive_qubits: u32, seed: u64) -> Result<Report, VerifyError> {
    let round = c.then(&c.adjoint());
    let n = c.num_qubits();
    let states: Box<dyn Iterator<Item = BasisState>> = if n <= exhaustive_qubits {
        Box::new((0..1u64 << n).map(move |v| BasisState::from_u64(n, v)))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Box::new((0..256).map(move |_| {
            let mut s = BasisState::zeros(n);
            for q in 0..n {
                s.set_bit(crate::circuit::QubitId(q), rng.gen());
            }
            s
        }))
    };
    let states: Vec<BasisState> = states.collect();
    let outs = if round.is_permutation() {
        simulate_permutation_batch(&round, &states)?
    } else {
        states
            .iter()
            .map(|s| extract_basis(&simulate_statevector(&round, s)?, BASIS_TOLERANCE))
            .collect::<Result<_, _>>()?
    };
    let cases = states.len() as u64;
    if let Some((s, out)) = states.iter().zip(&outs).find(|(s, o)| s != o) {
        let mismatch = Mismatch {
            inputs: vec![s.to_u64().unwrap_or(0)],
            expected: vec![s.to_u64().unwrap_or(0)],
            actual: vec![out.to_u64().unwrap_or(0)],
            dirty_ancilla: false,
        };
        return Ok(Report { label: "adjoint round trip".into(), cases, mismatch: Some(mismatch) });
    }
    Ok(Report { label: "adjoint round trip".into(), cases, mismatch: None })
}
