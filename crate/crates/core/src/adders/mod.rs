//! In-place, out-of-place and constant adders, plus the complement-trick
//! subtractor.
//!
//! Every in-place adder computes `t <- (t + a) mod 2^len(t)` with `a`
//! unchanged. The `add_*` functions emit into an existing builder and are
//! what the multipliers, dividers and modular arithmetic are made of; the
//! `build_*` functions wrap them into standalone circuits.

mod lookahead;
mod qft;
mod ripple;

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::circuit::{Builder, Circuit, GateSink, QubitId};
use crate::ArithError;

pub use qft::{qft, qft_inverse};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InPlaceAdderAlgo {
    Gidney,
    Ttk,
    Cdkm,
    Dkrs,
    Qft,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OutOfPlaceAdderAlgo {
    Gidney,
    Dkrs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstAdderAlgo {
    ViaInPlace(InPlaceAdderAlgo),
    Qft,
}

impl InPlaceAdderAlgo {
    pub const ALL: [InPlaceAdderAlgo; 5] = [
        InPlaceAdderAlgo::Gidney,
        InPlaceAdderAlgo::Ttk,
        InPlaceAdderAlgo::Cdkm,
        InPlaceAdderAlgo::Dkrs,
        InPlaceAdderAlgo::Qft,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InPlaceAdderAlgo::Gidney => "Gidney",
            InPlaceAdderAlgo::Ttk => "TTK",
            InPlaceAdderAlgo::Cdkm => "CDKM",
            InPlaceAdderAlgo::Dkrs => "DKRS",
            InPlaceAdderAlgo::Qft => "QFT",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name().eq_ignore_ascii_case(s))
    }

    /// Ripple-carry adders, whose cost grows linearly in n.
    pub fn is_ripple_carry(self) -> bool {
        matches!(self, InPlaceAdderAlgo::Gidney | InPlaceAdderAlgo::Ttk | InPlaceAdderAlgo::Cdkm)
    }

    pub fn uses_rotations(self) -> bool {
        self == InPlaceAdderAlgo::Qft
    }
}

impl OutOfPlaceAdderAlgo {
    pub const ALL: [OutOfPlaceAdderAlgo; 2] = [OutOfPlaceAdderAlgo::Gidney, OutOfPlaceAdderAlgo::Dkrs];

    pub fn name(self) -> &'static str {
        match self {
            OutOfPlaceAdderAlgo::Gidney => "Gidney",
            OutOfPlaceAdderAlgo::Dkrs => "DKRS",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name().eq_ignore_ascii_case(s))
    }
}

impl ConstAdderAlgo {
    pub fn all() -> Vec<ConstAdderAlgo> {
        let mut v: Vec<_> = InPlaceAdderAlgo::ALL.into_iter().map(ConstAdderAlgo::ViaInPlace).collect();
        v.push(ConstAdderAlgo::Qft);
        v
    }

    pub fn uses_rotations(self) -> bool {
        match self {
            ConstAdderAlgo::ViaInPlace(a) => a.uses_rotations(),
            ConstAdderAlgo::Qft => true,
        }
    }
}

impl fmt::Display for InPlaceAdderAlgo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for OutOfPlaceAdderAlgo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for ConstAdderAlgo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstAdderAlgo::ViaInPlace(a) => write!(f, "ViaInPlace({a})"),
            ConstAdderAlgo::Qft => f.write_str("QFT"),
        }
    }
}

/// `t += a (mod 2^len(t))`. `a` may be shorter than `t`; it is treated as
/// zero-extended.
pub fn add_in_place<S: GateSink>(b: &mut Builder<S>, algo: InPlaceAdderAlgo, a: &[QubitId], t: &[QubitId]) {
    assert!(a.len() <= t.len(), "source register wider than target");
    if a.is_empty() {
        return;
    }
    match algo {
        InPlaceAdderAlgo::Gidney => ripple::gidney(b, a, t),
        InPlaceAdderAlgo::Qft => qft::add(b, a, t),
        _ if a.len() < t.len() => {
            let pad = b.ancillas(t.len() - a.len());
            let ext: Vec<QubitId> = a.iter().chain(pad.iter()).copied().collect();
            add_in_place(b, algo, &ext, t);
            b.release(&pad);
        }
        InPlaceAdderAlgo::Ttk => ripple::ttk(b, a, t),
        InPlaceAdderAlgo::Cdkm => ripple::cdkm(b, a, t),
        InPlaceAdderAlgo::Dkrs => lookahead::add_in_place(b, a, t),
    }
}

/// `t -= a (mod 2^len(t))`, as the complement of `complement(t) + a`.
pub fn sub_in_place<S: GateSink>(b: &mut Builder<S>, algo: InPlaceAdderAlgo, a: &[QubitId], t: &[QubitId]) {
    b.x_all(t);
    add_in_place(b, algo, a, t);
    b.x_all(t);
}

/// `t += a` when `ctrl` is 1. The controlled operand is materialized as
/// `a AND ctrl` in scratch qubits around an uncontrolled addition.
pub fn controlled_add_in_place<S: GateSink>(
    b: &mut Builder<S>,
    algo: InPlaceAdderAlgo,
    ctrl: QubitId,
    a: &[QubitId],
    t: &[QubitId],
) {
    let tmp = b.ancillas(a.len());
    for (&q, &s) in a.iter().zip(tmp.iter()) {
        b.ccx(ctrl, q, s);
    }
    add_in_place(b, algo, &tmp, t);
    for (&q, &s) in a.iter().zip(tmp.iter()).rev() {
        b.ccx(ctrl, q, s);
    }
    b.release(&tmp);
}

/// `z <- a + bb (mod 2^n)` into a zeroed `z`; `a` and `bb` are unchanged.
pub fn add_out_of_place<S: GateSink>(
    b: &mut Builder<S>,
    algo: OutOfPlaceAdderAlgo,
    a: &[QubitId],
    bb: &[QubitId],
    z: &[QubitId],
) {
    assert!(a.len() == bb.len() && bb.len() == z.len(), "out-of-place adder needs equal widths");
    match algo {
        OutOfPlaceAdderAlgo::Gidney => ripple::gidney_out_of_place(b, a, bb, z),
        OutOfPlaceAdderAlgo::Dkrs => lookahead::add_out_of_place(b, a, bb, z),
    }
}

/// `t += c (mod 2^len(t))`, optionally controlled.
pub fn add_constant<S: GateSink>(
    b: &mut Builder<S>,
    algo: ConstAdderAlgo,
    c: &BigUint,
    t: &[QubitId],
    ctrl: Option<QubitId>,
) {
    let c = c % (BigUint::from(1u8) << t.len());
    if c.bits() == 0 {
        return;
    }
    match algo {
        ConstAdderAlgo::Qft => qft::add_constant(b, &c, t, ctrl),
        ConstAdderAlgo::ViaInPlace(inner) => {
            let width = c.bits() as usize;
            let tmp = b.ancillas(width);
            b.xor_constant(&tmp, &c, ctrl);
            add_in_place(b, inner, &tmp, t);
            b.xor_constant(&tmp, &c, ctrl);
            b.release(&tmp);
        }
    }
}

/// `t -= c (mod 2^len(t))`, optionally controlled.
pub fn sub_constant<S: GateSink>(
    b: &mut Builder<S>,
    algo: ConstAdderAlgo,
    c: &BigUint,
    t: &[QubitId],
    ctrl: Option<QubitId>,
) {
    let m = BigUint::from(1u8) << t.len();
    let neg = (&m - (c % &m)) % &m;
    add_constant(b, algo, &neg, t, ctrl);
}

fn check_width(n: usize) -> Result<(), ArithError> {
    if n == 0 {
        Err(ArithError::ZeroWidth)
    } else {
        Ok(())
    }
}

/// Registers `a`, `b` (n each); `b` receives `(a + b) mod 2^n`.
pub fn build_inplace_adder(algo: InPlaceAdderAlgo, n: usize) -> Result<Circuit, ArithError> {
    check_width(n)?;
    let mut b = Builder::new();
    let x = b.alloc_register(n).expect("n checked");
    let y = b.alloc_register(n).expect("n checked");
    add_in_place(&mut b, algo, &x, &y);
    Ok(b.finalize())
}

/// Registers `a`, `b`, `sum` (n each).
pub fn build_outofplace_adder(algo: OutOfPlaceAdderAlgo, n: usize) -> Result<Circuit, ArithError> {
    check_width(n)?;
    let mut b = Builder::new();
    let x = b.alloc_register(n).expect("n checked");
    let y = b.alloc_register(n).expect("n checked");
    let z = b.alloc_register(n).expect("n checked");
    add_out_of_place(&mut b, algo, &x, &y, &z);
    Ok(b.finalize())
}

/// One data register `b` receiving `(constant + b) mod 2^n`.
pub fn build_const_adder(algo: ConstAdderAlgo, n: usize, constant: &BigUint) -> Result<Circuit, ArithError> {
    check_width(n)?;
    if constant.bits() as usize > n {
        return Err(ArithError::ConstantOutOfRange { constant: constant.to_string(), bits: n });
    }
    let mut b = Builder::new();
    let t = b.alloc_register(n).expect("n checked");
    add_constant(&mut b, algo, constant, &t, None);
    Ok(b.finalize())
}

/// Registers `a`, `b`; `b` receives `(b - a) mod 2^n`.
pub fn build_subtractor(algo: InPlaceAdderAlgo, n: usize) -> Result<Circuit, ArithError> {
    check_width(n)?;
    let mut b = Builder::new();
    let x = b.alloc_register(n).expect("n checked");
    let y = b.alloc_register(n).expect("n checked");
    sub_in_place(&mut b, algo, &x, &y);
    Ok(b.finalize())
}

/// The fixed sweep constant `sum_{i=0}^{ceil(n/2)} 4^i mod 2^n`.
pub fn sweep_constant(n: usize) -> BigUint {
    let mut c = BigUint::default();
    for i in 0..=n.div_ceil(2) {
        c.set_bit(2 * i as u64, true);
    }
    c % (BigUint::from(1u8) << n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{permutation_table, simulate_permutation, BasisState};

    fn reg_values(c: &Circuit, input: u64) -> Vec<u64> {
        let out = simulate_permutation(c, &BasisState::from_u64(c.num_qubits(), input)).unwrap();
        c.data_registers().iter().map(|r| out.get_register(r)).collect()
    }

    #[test]
    fn ttk_five_plus_six() {
        let c = build_inplace_adder(InPlaceAdderAlgo::Ttk, 3).unwrap();
        assert_eq!(reg_values(&c, 5 | (6 << 3)), vec![5, 3]);
    }

    #[test]
    fn gidney_five_plus_six() {
        let c = build_inplace_adder(InPlaceAdderAlgo::Gidney, 3).unwrap();
        assert_eq!(reg_values(&c, 5 | (6 << 3)), vec![5, 3]);
    }

    #[test]
    fn out_of_place_nine_plus_nine() {
        let c = build_outofplace_adder(OutOfPlaceAdderAlgo::Gidney, 4).unwrap();
        assert_eq!(reg_values(&c, 9 | (9 << 4)), vec![9, 9, 2]);
    }

    #[test]
    fn zero_width_rejected() {
        assert_eq!(build_inplace_adder(InPlaceAdderAlgo::Cdkm, 0), Err(ArithError::ZeroWidth));
        assert_eq!(build_outofplace_adder(OutOfPlaceAdderAlgo::Dkrs, 0), Err(ArithError::ZeroWidth));
        assert_eq!(build_subtractor(InPlaceAdderAlgo::Ttk, 0), Err(ArithError::ZeroWidth));
    }

    #[test]
    fn constant_range_checked() {
        let r = build_const_adder(ConstAdderAlgo::Qft, 3, &BigUint::from(8u8));
        assert!(matches!(r, Err(ArithError::ConstantOutOfRange { .. })));
    }

    #[test]
    fn via_in_place_fifteen_plus_one() {
        let c = build_const_adder(ConstAdderAlgo::ViaInPlace(InPlaceAdderAlgo::Gidney), 4, &BigUint::from(15u8))
            .unwrap();
        assert_eq!(reg_values(&c, 1), vec![0]);
    }

    #[test]
    fn subtract_two_from_five() {
        let c = build_subtractor(InPlaceAdderAlgo::Ttk, 3).unwrap();
        assert_eq!(reg_values(&c, 2 | (5 << 3)), vec![2, 3]);
    }

    #[test]
    fn sweep_constant_values() {
        assert_eq!(sweep_constant(5), BigUint::from((1u32 + 4 + 16 + 64) % 32));
        assert_eq!(sweep_constant(4), BigUint::from((1u32 + 4 + 16) % 16));
    }

    #[test]
    fn mixed_width_gidney() {
        for (na, nt) in [(1usize, 3usize), (2, 5), (3, 4)] {
            let mut b = Builder::new();
            let a = b.alloc_register(na).unwrap();
            let t = b.alloc_register(nt).unwrap();
            add_in_place(&mut b, InPlaceAdderAlgo::Gidney, &a, &t);
            let c = b.finalize();
            let table = permutation_table(&c).unwrap();
            for x in 0..1u64 << na {
                for y in 0..1u64 << nt {
                    let out = table[(x | (y << na)) as usize];
                    assert_eq!(out, x | (((x + y) % (1 << nt)) << na));
                }
            }
        }
    }
}
