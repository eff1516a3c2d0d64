use std::f64::consts::{PI, TAU};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::circuit::{dyadic_angle, Builder, GateSink, QubitId};

/// Fourier transform without the final bit reversal: afterwards qubit k
/// carries the phase `2 pi x / 2^(k+1)`.
pub fn qft<S: GateSink>(b: &mut Builder<S>, t: &[QubitId]) {
    for k in (0..t.len()).rev() {
        b.h(t[k]);
        for j in (0..k).rev() {
            b.cphase(t[j], t[k], dyadic_angle((k - j) as u32));
        }
    }
}

pub fn qft_inverse<S: GateSink>(b: &mut Builder<S>, t: &[QubitId]) {
    b.adjoint_block(|b| qft(b, t));
}

/// Draper adder: phase kickback from `a` onto the transformed target.
pub(super) fn add<S: GateSink>(b: &mut Builder<S>, a: &[QubitId], t: &[QubitId]) {
    qft(b, t);
    for k in (0..t.len()).rev() {
        for j in (0..=k.min(a.len() - 1)).rev() {
            b.cphase(a[j], t[k], dyadic_angle((k - j) as u32));
        }
    }
    qft_inverse(b, t);
}

/// Phase `pi (c mod 2^(k+1)) / 2^k` reduced to `(-pi, pi]`, or `None` when
/// it is exactly zero.
fn constant_phase(c: &BigUint, k: usize) -> Option<f64> {
    let window = c % (BigUint::from(1u8) << (k + 1));
    if window.bits() == 0 {
        return None;
    }
    // Only the top 60 bits of the window influence the double result.
    let shift = (k + 1).saturating_sub(60);
    let top = (&window >> shift).to_u64().expect("at most 60 bits");
    let mut phi = PI * top as f64 * 0.5f64.powi((k - shift) as i32);
    phi %= TAU;
    if phi > PI {
        phi -= TAU;
    }
    (phi != 0.0).then_some(phi)
}

/// Constant adder: the classical operand's contribution to each Fourier
/// phase is summed at build time into a single rotation per qubit.
pub(super) fn add_constant<S: GateSink>(b: &mut Builder<S>, c: &BigUint, t: &[QubitId], ctrl: Option<QubitId>) {
    qft(b, t);
    for k in (0..t.len()).rev() {
        if let Some(phi) = constant_phase(c, k) {
            match ctrl {
                Some(q) => b.cphase(q, t[k], phi),
                None => b.rz(t[k], phi),
            }
        }
    }
    qft_inverse(b, t);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phases_of_small_constants() {
        let c = BigUint::from(3u8);
        assert_eq!(constant_phase(&c, 0), Some(PI));
        assert!((constant_phase(&c, 1).unwrap() - (-PI / 2.0)).abs() < 1e-15);
        assert_eq!(constant_phase(&BigUint::from(4u8), 1), None);
    }
}
