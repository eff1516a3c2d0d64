use num_bigint::BigUint;
use qarith::adders::{ConstAdderAlgo, InPlaceAdderAlgo, OutOfPlaceAdderAlgo};
use qarith::modexp::{sweep_constants, LookupTable, ModExpAlgo};
use qarith::muldiv::{DividerKind, DividerSpec, MultiplierAlgo};
use qarith::verify::{self, Report, Sampling, DEFAULT_SEED};
use num_traits::ToPrimitive;

fn ok(r: Report) {
    assert!(r.passed(), "{r}");
}

fn const_for(n: usize) -> u64 {
    qarith::adders::sweep_constant(n).to_u64().unwrap()
}

#[test]
fn inplace_adders_exhaustive() {
    for algo in InPlaceAdderAlgo::ALL {
        let range = if algo == InPlaceAdderAlgo::Qft { 1..=5 } else { 1..=6 };
        for n in range {
            ok(verify::inplace_adder(algo, n).unwrap());
        }
    }
}

#[test]
fn outofplace_adders_exhaustive() {
    for algo in OutOfPlaceAdderAlgo::ALL {
        for n in 1..=6 {
            ok(verify::outofplace_adder(algo, n).unwrap());
        }
    }
}

#[test]
fn const_adders_exhaustive() {
    for algo in ConstAdderAlgo::all() {
        let max = if algo.uses_rotations() { 5 } else { 6 };
        for n in 1..=max {
            for c in [0, 1, const_for(n), (1 << n) - 1] {
                ok(verify::const_adder(algo, n, c).unwrap());
            }
        }
    }
}

#[test]
fn subtractors_exhaustive() {
    for algo in InPlaceAdderAlgo::ALL {
        let max = if algo == InPlaceAdderAlgo::Qft { 5 } else { 6 };
        for n in 1..=max {
            ok(verify::subtractor(algo, n).unwrap());
        }
    }
}

#[test]
fn multipliers() {
    for algo in [MultiplierAlgo::Schoolbook, MultiplierAlgo::Karatsuba { piece_size: 2 }, MultiplierAlgo::KARATSUBA_8] {
        for n in 1..=4 {
            ok(verify::multiplier(algo, n, Sampling::Exhaustive).unwrap());
        }
    }
    for n in [5, 8] {
        ok(verify::multiplier(MultiplierAlgo::Karatsuba { piece_size: 2 }, n, Sampling::Random { cases: 300, seed: 3 })
            .unwrap());
    }
    ok(verify::multiplier(MultiplierAlgo::KARATSUBA_8, 8, Sampling::Random { cases: 1000, seed: DEFAULT_SEED }).unwrap());
    ok(verify::multiplier(MultiplierAlgo::Karatsuba { piece_size: 3 }, 9, Sampling::Random { cases: 200, seed: 4 })
        .unwrap());
}

#[test]
fn dividers() {
    for spec in DividerSpec::all() {
        for n in 1..=4 {
            ok(verify::divider(spec, n).unwrap());
        }
    }
    for kind in [DividerKind::Restoring, DividerKind::NonRestoring] {
        for adder in [InPlaceAdderAlgo::Dkrs, InPlaceAdderAlgo::Qft] {
            ok(verify::divider(DividerSpec { kind, adder }, 2).unwrap());
        }
    }
}

#[test]
fn lookups() {
    let t = LookupTable::from_u64(&[0, 1, 2, 3]).unwrap();
    ok(verify::lookup(&t, 2).unwrap());
    let t = LookupTable::from_u64(&[5, 0, 15, 9, 3, 12, 7, 1]).unwrap();
    ok(verify::lookup(&t, 4).unwrap());
    let t = LookupTable::from_u64(&[0; 16]).unwrap();
    ok(verify::lookup(&t, 3).unwrap());
}

#[test]
fn modmul() {
    ok(verify::modmul_const(2, 15, 4).unwrap());
    ok(verify::modmul_const(7, 15, 4).unwrap());
    ok(verify::modmul_const(1, 13, 4).unwrap());
    ok(verify::modmul_const(3, 10, 4).unwrap());
}

#[test]
fn modexp_all_variants() {
    for n in 2..=4 {
        let (a, m) = sweep_constants(n);
        let (a, m) = (a.to_u64().unwrap(), m.to_u64().unwrap());
        let mut algos = vec![ModExpAlgo::Lyy, ModExpAlgo::LyyWindowedOpt];
        algos.extend((1..=3.min(n)).map(ModExpAlgo::LyyWindowed));
        for algo in algos {
            ok(verify::modexp(algo, a, m, n).unwrap());
        }
    }
    ok(verify::modexp(ModExpAlgo::Lyy, 7, 15, 4).unwrap());
    ok(verify::modexp(ModExpAlgo::LyyWindowed(2), 2, 15, 4).unwrap());
    ok(verify::modexp(ModExpAlgo::Lyy, 3, 10, 4).unwrap());
}

#[test]
fn modexp_spot_values() {
    let c = qarith::modexp::build_modexp(ModExpAlgo::Lyy, &BigUint::from(7u8), &BigUint::from(15u8), 4).unwrap();
    let mut s = qarith::sim::BasisState::zeros(c.num_qubits());
    s.set_register(&c.data_registers()[0], 3);
    let out = qarith::sim::simulate_permutation(&c, &s).unwrap();
    assert_eq!(out.get_register(&c.data_registers()[1]), 13);
}
