//! Modular multiplication and exponentiation, plain and windowed, with the
//! unary-iteration table lookup the windowed form needs.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::adders::{add_constant, add_in_place, sub_constant, sub_in_place, ConstAdderAlgo, InPlaceAdderAlgo};
use crate::circuit::{Builder, Circuit, GateSink, QubitId};
use crate::ArithError;

const ADDER: InPlaceAdderAlgo = InPlaceAdderAlgo::Gidney;
const CONST_ADDER: ConstAdderAlgo = ConstAdderAlgo::ViaInPlace(InPlaceAdderAlgo::Gidney);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModExpAlgo {
    Lyy,
    LyyWindowed(usize),
    LyyWindowedOpt,
}

impl ModExpAlgo {
    /// Window size used at width `n`, if windowed.
    pub fn window(self, n: usize) -> Option<usize> {
        match self {
            ModExpAlgo::Lyy => None,
            ModExpAlgo::LyyWindowed(w) => Some(w),
            ModExpAlgo::LyyWindowedOpt => Some(optimal_window(n)),
        }
    }
}

impl fmt::Display for ModExpAlgo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModExpAlgo::Lyy => f.write_str("LYY"),
            ModExpAlgo::LyyWindowed(w) => write!(f, "LYYWindowed({w})"),
            ModExpAlgo::LyyWindowedOpt => f.write_str("LYYWindowedOpt"),
        }
    }
}

/// `floor(2 log2 n + 0.5)`, clamped to `[1, n]`.
pub fn optimal_window(n: usize) -> usize {
    let w = (2.0 * (n.max(1) as f64).log2() + 0.5).floor() as usize;
    w.clamp(1, n.max(1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LookupTable {
    address_bits: usize,
    entries: Vec<BigUint>,
}

impl LookupTable {
    pub fn new(entries: Vec<BigUint>) -> Result<Self, ArithError> {
        if entries.len() < 2 || !entries.len().is_power_of_two() {
            return Err(ArithError::TableSize { got: entries.len() });
        }
        Ok(LookupTable { address_bits: entries.len().trailing_zeros() as usize, entries })
    }

    pub fn from_u64(entries: &[u64]) -> Result<Self, ArithError> {
        Self::new(entries.iter().map(|&e| BigUint::from(e)).collect())
    }

    pub fn address_bits(&self) -> usize {
        self.address_bits
    }

    pub fn entries(&self) -> &[BigUint] {
        &self.entries
    }
}

fn xor_entry<S: GateSink>(b: &mut Builder<S>, ctrl: Option<QubitId>, entry: &BigUint, target: &[QubitId]) {
    b.xor_constant(target, entry, ctrl);
}

/// Unary iteration over the address bits from the top down. `ctrl` is the
/// AND of the control and every address bit above `addr`; each internal
/// node spends two Toffolis on a fresh ancilla for its children.
fn lookup_rec<S: GateSink>(
    b: &mut Builder<S>,
    ctrl: Option<QubitId>,
    addr: &[QubitId],
    entries: &[BigUint],
    target: &[QubitId],
) {
    let Some((&top, rest)) = addr.split_last() else {
        xor_entry(b, ctrl, &entries[0], target);
        return;
    };
    let half = entries.len() / 2;
    match ctrl {
        None => {
            b.x(top);
            lookup_rec(b, Some(top), rest, &entries[..half], target);
            b.x(top);
            lookup_rec(b, Some(top), rest, &entries[half..], target);
        }
        Some(c) => {
            let anc = b.ancilla();
            b.x(top);
            b.ccx(c, top, anc);
            b.x(top);
            lookup_rec(b, Some(anc), rest, &entries[..half], target);
            b.cx(c, anc);
            lookup_rec(b, Some(anc), rest, &entries[half..], target);
            b.ccx(c, top, anc);
            b.release(&[anc]);
        }
    }
}

/// `target ^= entries[addr]` for a little-endian `addr` of `log2(len)` bits.
pub fn lookup_xor<S: GateSink>(b: &mut Builder<S>, addr: &[QubitId], entries: &[BigUint], target: &[QubitId]) {
    assert_eq!(entries.len(), 1 << addr.len());
    lookup_rec(b, None, addr, entries, target);
}

/// Registers `addr` and `y`, with `y ^= t[addr]`.
pub fn build_table_lookup(t: &LookupTable, m: usize) -> Result<Circuit, ArithError> {
    if m == 0 {
        return Err(ArithError::ZeroWidth);
    }
    if let Some(e) = t.entries.iter().find(|e| e.bits() as usize > m) {
        return Err(ArithError::TableEntryOverflow { entry: e.to_string(), bits: m });
    }
    let mut b = Builder::new();
    let addr = b.alloc_register(t.address_bits).expect("at least one address bit");
    let y = b.alloc_register(m).expect("m checked");
    lookup_xor(&mut b, &addr, &t.entries, &y);
    Ok(b.finalize())
}

/// `z <- (z + u) mod N` for `z, u < N`; `z` carries one spare top qubit.
/// The comparison flag is uncomputed by comparing the result against `u`.
fn mod_add<S: GateSink>(b: &mut Builder<S>, u: &[QubitId], z: &[QubitId], modulus: &BigUint) {
    let top = *z.last().expect("nonempty");
    let flag = b.ancilla();
    add_in_place(b, ADDER, u, z);
    sub_constant(b, CONST_ADDER, modulus, z, None);
    b.cx(top, flag);
    add_constant(b, CONST_ADDER, modulus, z, Some(flag));
    sub_in_place(b, ADDER, u, z);
    b.cx(top, flag);
    b.x(flag);
    add_in_place(b, ADDER, u, z);
    b.release(&[flag]);
}

/// `z <- (z + k) mod N` for a classical `k < N`, when `ctrl` is 1 (or
/// always, without a control).
fn mod_add_const<S: GateSink>(
    b: &mut Builder<S>,
    k: &BigUint,
    z: &[QubitId],
    modulus: &BigUint,
    ctrl: Option<QubitId>,
) {
    if k.bits() == 0 {
        return;
    }
    let top = *z.last().expect("nonempty");
    let flag = b.ancilla();
    add_constant(b, CONST_ADDER, k, z, ctrl);
    sub_constant(b, CONST_ADDER, modulus, z, None);
    b.cx(top, flag);
    add_constant(b, CONST_ADDER, modulus, z, Some(flag));
    sub_constant(b, CONST_ADDER, k, z, ctrl);
    b.cx(top, flag);
    b.x(flag);
    add_constant(b, CONST_ADDER, k, z, ctrl);
    b.release(&[flag]);
}

/// Gates of `r <- 2r mod N` acting on the already shifted register `r`
/// (whose LSB is the old top qubit, so it reads `2r` on entry). Needs odd N.
fn double_gates<S: GateSink>(b: &mut Builder<S>, r: &[QubitId], modulus: &BigUint) {
    let top = *r.last().expect("nonempty");
    let flag = b.ancilla();
    sub_constant(b, CONST_ADDER, modulus, r, None);
    b.cx(top, flag);
    add_constant(b, CONST_ADDER, modulus, r, Some(flag));
    // 2r mod N is odd exactly when the subtraction went through.
    b.cx(r[0], flag);
    b.x(flag);
    b.release(&[flag]);
}

fn shift_up(r: &[QubitId]) -> Vec<QubitId> {
    let (&top, rest) = r.split_last().expect("nonempty");
    std::iter::once(top).chain(rest.iter().copied()).collect()
}

fn shift_down(r: &[QubitId]) -> Vec<QubitId> {
    let (&low, rest) = r.split_first().expect("nonempty");
    rest.iter().copied().chain(std::iter::once(low)).collect()
}

/// `z <- (z + acc * t) mod N` with `acc` and `z` of width n+1 and `t` of
/// width n. `acc` is doubled once per bit of `t` and halved back afterwards.
fn mul_acc<S: GateSink>(b: &mut Builder<S>, acc: &[QubitId], t: &[QubitId], z: &[QubitId], modulus: &BigUint) {
    let n = t.len();
    let mut d = acc.to_vec();
    for (j, &tj) in t.iter().enumerate() {
        let scratch = b.ancillas(n);
        for (&q, &s) in d[..n].iter().zip(scratch.iter()) {
            b.ccx(tj, q, s);
        }
        mod_add(b, &scratch, z, modulus);
        for (&q, &s) in d[..n].iter().zip(scratch.iter()).rev() {
            b.ccx(tj, q, s);
        }
        b.release(&scratch);
        if j + 1 < n {
            d = shift_up(&d);
            double_gates(b, &d, modulus);
        }
    }
    for _ in 1..n {
        b.adjoint_block(|b| double_gates(b, &d, modulus));
        d = shift_down(&d);
    }
    debug_assert_eq!(d, acc);
}

/// `z <- (z + k * x) mod N` for classical `k`, controlled on `ctrl` if given.
fn mul_acc_const<S: GateSink>(
    b: &mut Builder<S>,
    k: &BigUint,
    x: &[QubitId],
    z: &[QubitId],
    modulus: &BigUint,
    ctrl: Option<QubitId>,
) {
    let mut term = k % modulus;
    for &xj in x {
        match ctrl {
            None => mod_add_const(b, &term, z, modulus, Some(xj)),
            Some(c) => {
                let both = b.ancilla();
                b.ccx(c, xj, both);
                mod_add_const(b, &term, z, modulus, Some(both));
                b.ccx(c, xj, both);
                b.release(&[both]);
            }
        }
        term = (term << 1u8) % modulus;
    }
}

fn mod_inverse(c: &BigUint, modulus: &BigUint) -> Option<BigUint> {
    let (c, m) = (num_bigint::BigInt::from(c.clone()), num_bigint::BigInt::from(modulus.clone()));
    let e = c.extended_gcd(&m);
    e.gcd.is_one().then(|| e.x.mod_floor(&m).to_biguint().expect("reduced mod m"))
}

fn check_modulus(modulus: &BigUint, n: usize) -> Result<(), ArithError> {
    if n == 0 {
        return Err(ArithError::ZeroWidth);
    }
    if *modulus <= BigUint::one() || modulus.bits() as usize > n {
        return Err(ArithError::InvalidModulus { modulus: modulus.to_string(), bits: n });
    }
    Ok(())
}

fn inverse_or_err(c: &BigUint, modulus: &BigUint) -> Result<BigUint, ArithError> {
    mod_inverse(&(c % modulus), modulus)
        .ok_or_else(|| ArithError::NotCoprime { value: c.to_string(), modulus: modulus.to_string() })
}

/// `x <- c x mod N` in place: multiply-accumulate into scratch, swap, and
/// clear the old value with the inverse constant. Optionally controlled.
fn modmul_const_in_place<S: GateSink>(
    b: &mut Builder<S>,
    c: &BigUint,
    cinv: &BigUint,
    x: &[QubitId],
    modulus: &BigUint,
    ctrl: Option<QubitId>,
) {
    let n = x.len();
    let z = b.ancillas(n + 1);
    mul_acc_const(b, c, x, &z, modulus, ctrl);
    for (&p, &q) in x.iter().zip(z.iter()) {
        match ctrl {
            None => b.swap(p, q),
            Some(k) => {
                b.cx(q, p);
                b.ccx(k, p, q);
                b.cx(q, p);
            }
        }
    }
    let neg = (modulus - cinv) % modulus;
    mul_acc_const(b, &neg, x, &z, modulus, ctrl);
    b.release(&z);
}

/// One register `x`; `x <- c x mod N` for every `x < N`. Inputs `x >= N`
/// are permuted deterministically but may leave scratch dirty.
pub fn build_modmul_const(c: &BigUint, modulus: &BigUint, n: usize) -> Result<Circuit, ArithError> {
    check_modulus(modulus, n)?;
    let cinv = inverse_or_err(c, modulus)?;
    let mut b = Builder::new();
    let x = b.alloc_register(n).expect("n checked");
    modmul_const_in_place(&mut b, &(c % modulus), &cinv, &x, modulus, None);
    Ok(b.finalize())
}

fn windowed<S: GateSink>(
    b: &mut Builder<S>,
    w: usize,
    a: &BigUint,
    modulus: &BigUint,
    x: &[QubitId],
    out: &[QubitId],
) {
    let n = out.len();
    let spare = b.ancilla();
    let mut acc: Vec<QubitId> = out.iter().copied().chain([spare]).collect();
    let scratch = b.ancillas(n + 1);
    let mut z = scratch.to_vec();
    let t = b.ancillas(n);
    b.x(acc[0]);
    let mut base = a % modulus;
    for chunk in x.chunks(w) {
        let size = 1usize << chunk.len();
        let mut table = Vec::with_capacity(size);
        let mut v = BigUint::one();
        for _ in 0..size {
            table.push(v.clone());
            v = v * &base % modulus;
        }
        let inv: Vec<BigUint> = table.iter().map(|e| mod_inverse(e, modulus).expect("coprime")).collect();
        let swap_table: Vec<BigUint> = table.iter().zip(&inv).map(|(e, i)| e ^ i).collect();

        lookup_xor(b, chunk, &table, &t);
        mul_acc(b, &acc, &t, &z, modulus);
        std::mem::swap(&mut acc, &mut z);
        lookup_xor(b, chunk, &swap_table, &t);
        b.adjoint_block(|b| mul_acc(b, &acc, &t, &z, modulus));
        lookup_xor(b, chunk, &inv, &t);

        base = base.modpow(&BigUint::from(size), modulus);
    }
    if acc[..n] != *out {
        b.swap_registers(&acc[..n], out);
    }
    b.release(&t);
    b.release(&scratch);
    b.release(&[spare]);
}

fn plain<S: GateSink>(b: &mut Builder<S>, a: &BigUint, modulus: &BigUint, x: &[QubitId], out: &[QubitId]) {
    b.x(out[0]);
    let mut c = a % modulus;
    for &xi in x {
        let cinv = mod_inverse(&c, modulus).expect("coprime");
        modmul_const_in_place(b, &c, &cinv, out, modulus, Some(xi));
        c = &c * &c % modulus;
    }
}

pub fn check_modexp(algo: ModExpAlgo, a: &BigUint, modulus: &BigUint, n: usize) -> Result<(), ArithError> {
    check_modulus(modulus, n)?;
    inverse_or_err(a, modulus)?;
    if let Some(w) = algo.window(n) {
        if w == 0 || w > n {
            return Err(ArithError::InvalidWindow { w, n });
        }
        if modulus.is_even() {
            return Err(ArithError::InvalidModulus { modulus: modulus.to_string(), bits: n });
        }
    }
    Ok(())
}

/// Emits `out <- a^x mod N` for a zeroed `out`.
pub fn modexp<S: GateSink>(
    b: &mut Builder<S>,
    algo: ModExpAlgo,
    a: &BigUint,
    modulus: &BigUint,
    x: &[QubitId],
    out: &[QubitId],
) {
    match algo.window(out.len()) {
        None => plain(b, a, modulus, x, out),
        Some(w) => windowed(b, w, a, modulus, x, out),
    }
}

/// Emits a full ModExp circuit (registers `x`, `out`) into `sink`.
pub fn emit_modexp<S: GateSink>(
    algo: ModExpAlgo,
    a: &BigUint,
    modulus: &BigUint,
    n: usize,
    sink: S,
) -> Result<(u32, S), ArithError> {
    check_modexp(algo, a, modulus, n)?;
    let mut b = Builder::with_sink(sink);
    let x = b.alloc_register(n).expect("n checked");
    let out = b.alloc_register(n).expect("n checked");
    modexp(&mut b, algo, a, modulus, &x, &out);
    let (layout, sink) = b.into_parts();
    Ok((layout.num_qubits, sink))
}

/// Registers `x`, `out` (n each); `|x>|0> -> |x>|a^x mod N>`.
pub fn build_modexp(algo: ModExpAlgo, a: &BigUint, modulus: &BigUint, n: usize) -> Result<Circuit, ArithError> {
    check_modexp(algo, a, modulus, n)?;
    let mut b = Builder::new();
    let x = b.alloc_register(n).expect("n checked");
    let out = b.alloc_register(n).expect("n checked");
    modexp(&mut b, algo, a, modulus, &x, &out);
    Ok(b.finalize())
}

/// Sweep constants: `N = 2^n - 1` and `a = 5^24 + 24^5 mod N`, moved to the
/// next value coprime to N when needed.
pub fn sweep_constants(n: usize) -> (BigUint, BigUint) {
    assert!(n >= 2, "N = 2^n - 1 needs n >= 2");
    let modulus = (BigUint::one() << n) - 1u8;
    let seed = BigUint::from(5u8).pow(24) + BigUint::from(24u8).pow(5);
    let one = BigUint::one();
    let mut a = &seed % &modulus;
    while a <= one || a.gcd(&modulus) != one {
        a = (a + 1u8) % &modulus;
    }
    (a, modulus)
}
