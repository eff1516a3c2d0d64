//! Logical resource counts, raw or after lowering to Clifford+T.
//!
//! Counting is done by a [`Tally`] gate sink, so a builder can stream a
//! circuit straight into the counter without keeping its gates.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, GateSink, QubitId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LogicalCounts {
    pub qubits: u64,
    pub t_count: u64,
    pub toffoli_count: u64,
    pub cnot_count: u64,
    pub single_qubit_clifford: u64,
    pub rotation_count: u64,
    pub depth: u64,
    pub t_depth: u64,
}

/// Rotation-synthesis cost model: one arbitrary-angle rotation costs
/// `ceil(slope * log2(1/epsilon_syn) + offset)` T gates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthesisParams {
    pub epsilon_syn: f64,
    pub t_per_rotation_slope: f64,
    pub t_per_rotation_offset: f64,
}

impl Default for SynthesisParams {
    fn default() -> Self {
        SynthesisParams { epsilon_syn: 1e-10, t_per_rotation_slope: 0.53, t_per_rotation_offset: 5.3 }
    }
}

impl SynthesisParams {
    /// Splits `budget` evenly over `rotations` rotations.
    pub fn for_budget(rotations: u64, budget: f64) -> Self {
        let epsilon_syn = if rotations == 0 { budget } else { budget / rotations as f64 };
        SynthesisParams { epsilon_syn, ..Self::default() }
    }

    pub fn t_per_rotation(&self) -> u64 {
        (self.t_per_rotation_slope * (1.0 / self.epsilon_syn).log2() + self.t_per_rotation_offset).ceil().max(0.0)
            as u64
    }
}

/// The 7-T, 15-gate Toffoli decomposition.
pub fn toffoli_decomposition(a: QubitId, b: QubitId, c: QubitId) -> [Gate; 15] {
    use Gate::*;
    [
        H(c),
        Cnot(b, c),
        Tdg(c),
        Cnot(a, c),
        T(c),
        Cnot(b, c),
        Tdg(c),
        Cnot(a, c),
        T(b),
        T(c),
        H(c),
        Cnot(a, b),
        T(a),
        Tdg(b),
        Cnot(a, b),
    ]
}

/// How a phase angle is realised.
enum PhaseCost {
    Identity,
    Clifford,
    T,
    Rotation,
}

fn multiple_of(angle: f64, unit: f64) -> Option<i64> {
    let k = (angle / unit).round();
    ((angle - k * unit).abs() < 1e-12).then_some(k as i64)
}

fn rz_cost(angle: f64) -> PhaseCost {
    match multiple_of(angle, FRAC_PI_4) {
        Some(k) if k.rem_euclid(8) == 0 => PhaseCost::Identity,
        Some(k) if k % 2 == 0 => PhaseCost::Clifford,
        Some(_) => PhaseCost::T,
        None => PhaseCost::Rotation,
    }
}

fn cphase_cost(angle: f64) -> PhaseCost {
    match multiple_of(angle, PI) {
        Some(k) if k % 2 == 0 => PhaseCost::Identity,
        Some(_) => PhaseCost::Clifford,
        None => PhaseCost::Rotation,
    }
}

/// Streaming counter. In raw mode gates are tallied as they come; in
/// lowered mode Toffolis, MCX and rotations are first expanded to
/// Clifford+T, with a synthesized rotation occupying `t_per_rotation`
/// consecutive T layers.
#[derive(Debug, Clone)]
pub struct Tally {
    lowered: bool,
    t_per_rotation: u64,
    counts: LogicalCounts,
    layer: Vec<u64>,
    t_layer: Vec<u64>,
    // Lowering ancillas live in their own arrays, addressed from ANCILLA_BASE.
    anc_layer: Vec<u64>,
    anc_t_layer: Vec<u64>,
    extra_qubits: u64,
}

const ANCILLA_BASE: u32 = 1 << 31;

impl Tally {
    pub fn raw() -> Self {
        Self::new(false, 0)
    }

    pub fn lowered(p: &SynthesisParams) -> Self {
        Self::new(true, p.t_per_rotation())
    }

    fn new(lowered: bool, t_per_rotation: u64) -> Self {
        Tally {
            lowered,
            t_per_rotation,
            counts: LogicalCounts::default(),
            layer: Vec::new(),
            t_layer: Vec::new(),
            anc_layer: Vec::new(),
            anc_t_layer: Vec::new(),
            extra_qubits: 0,
        }
    }

    /// Counts for a circuit over `num_qubits` qubits; lowering ancillas are
    /// added on top.
    pub fn finish(self, num_qubits: u32) -> LogicalCounts {
        LogicalCounts { qubits: num_qubits as u64 + self.extra_qubits, ..self.counts }
    }

    fn slot(&mut self, q: usize) -> (&mut u64, &mut u64) {
        let (layer, t_layer, i) = match q.checked_sub(ANCILLA_BASE as usize) {
            Some(i) => (&mut self.anc_layer, &mut self.anc_t_layer, i),
            None => (&mut self.layer, &mut self.t_layer, q),
        };
        if i >= layer.len() {
            layer.resize(i + 1, 0);
            t_layer.resize(i + 1, 0);
        }
        (&mut layer[i], &mut t_layer[i])
    }

    /// Schedules one operation on `qs` lasting `weight` layers, of which
    /// `t_weight` are T layers.
    fn schedule(&mut self, qs: &[usize], weight: u64, t_weight: u64) {
        let (mut start, mut t_start) = (0, 0);
        for &q in qs {
            let (l, t) = self.slot(q);
            start = start.max(*l);
            t_start = t_start.max(*t);
        }
        for &q in qs {
            let (l, t) = self.slot(q);
            *l = start + weight;
            *t = t_start + t_weight;
        }
        self.counts.depth = self.counts.depth.max(start + weight);
        self.counts.t_depth = self.counts.t_depth.max(t_start + t_weight);
    }

    fn elementary(&mut self, g: &Gate) {
        let q = |x: &QubitId| x.index();
        match g {
            Gate::X(t) | Gate::H(t) | Gate::S(t) | Gate::Sdg(t) => {
                self.counts.single_qubit_clifford += 1;
                self.schedule(&[q(t)], 1, 0);
            }
            Gate::T(t) | Gate::Tdg(t) => {
                self.counts.t_count += 1;
                self.schedule(&[q(t)], 1, 1);
            }
            Gate::Cnot(c, t) => {
                self.counts.cnot_count += 1;
                self.schedule(&[q(c), q(t)], 1, 0);
            }
            _ => unreachable!("only elementary gates reach here"),
        }
    }

    fn rotation(&mut self, qs: &[usize]) {
        self.counts.rotation_count += 1;
        self.counts.t_count += self.t_per_rotation;
        self.schedule(qs, self.t_per_rotation, self.t_per_rotation);
    }

    fn emit_lowered(&mut self, g: Gate) {
        match g {
            Gate::Ccx(a, b, c) => {
                self.counts.toffoli_count += 1;
                for e in toffoli_decomposition(a, b, c) {
                    self.elementary(&e);
                }
            }
            Gate::Mcx(cs, t) => {
                // Ladder of k-1 Toffolis into k-1 fresh ancillas, a CNOT onto
                // the target, and the mirrored ladder.
                let k = cs.len();
                let anc: Vec<QubitId> = (0..k as u32 - 1).map(|j| QubitId(ANCILLA_BASE + j)).collect();
                self.extra_qubits = self.extra_qubits.max(k as u64 - 1);
                let mut ladder = vec![(cs[0], cs[1], anc[0])];
                for j in 2..k {
                    ladder.push((anc[j - 2], cs[j], anc[j - 1]));
                }
                for &(a, b, c) in &ladder {
                    self.emit_lowered(Gate::Ccx(a, b, c));
                }
                self.elementary(&Gate::Cnot(anc[k - 2], t));
                for &(a, b, c) in ladder.iter().rev() {
                    self.emit_lowered(Gate::Ccx(a, b, c));
                }
            }
            Gate::Swap(a, b) => {
                for (c, t) in [(a, b), (b, a), (a, b)] {
                    self.elementary(&Gate::Cnot(c, t));
                }
            }
            Gate::Rz(t, angle) => match rz_cost(angle) {
                PhaseCost::Identity => {}
                PhaseCost::Clifford => self.elementary(&Gate::S(t)),
                PhaseCost::T => self.elementary(&Gate::T(t)),
                PhaseCost::Rotation => self.rotation(&[t.index()]),
            },
            Gate::CPhase(c, t, angle) => match cphase_cost(angle) {
                PhaseCost::Identity => {}
                PhaseCost::Clifford | PhaseCost::T => {
                    // CZ = H CNOT H
                    self.elementary(&Gate::H(t));
                    self.elementary(&Gate::Cnot(c, t));
                    self.elementary(&Gate::H(t));
                }
                PhaseCost::Rotation => self.rotation(&[c.index(), t.index()]),
            },
            g => self.elementary(&g),
        }
    }

    fn emit_raw(&mut self, g: Gate) {
        let mut qs = [0usize; 3];
        let mut n = 0;
        let mut wide = Vec::new();
        if let Gate::Mcx(cs, t) = &g {
            wide.extend(cs.iter().chain([t]).map(|q| q.index()));
        } else {
            g.for_each_qubit(|q| {
                qs[n] = q.index();
                n += 1;
            });
        }
        let ops: &[usize] = if wide.is_empty() { &qs[..n] } else { &wide };
        let mut t_weight = 0;
        match &g {
            Gate::Ccx(..) | Gate::Mcx(..) => self.counts.toffoli_count += 1,
            Gate::Cnot(..) => self.counts.cnot_count += 1,
            Gate::Swap(..) => self.counts.cnot_count += 3,
            Gate::T(_) | Gate::Tdg(_) => {
                self.counts.t_count += 1;
                t_weight = 1;
            }
            Gate::Rz(..) | Gate::CPhase(..) => self.counts.rotation_count += 1,
            Gate::X(_) | Gate::H(_) | Gate::S(_) | Gate::Sdg(_) => self.counts.single_qubit_clifford += 1,
        }
        self.schedule(ops, 1, t_weight);
    }
}

/// MCX with fewer than three controls is an X, CNOT or CCX.
fn narrow_mcx(gate: Gate) -> Gate {
    match gate {
        Gate::Mcx(cs, t) if cs.len() < 3 => match *cs {
            [] => Gate::X(t),
            [c] => Gate::Cnot(c, t),
            [a, b] => Gate::Ccx(a, b, t),
            _ => unreachable!(),
        },
        g => g,
    }
}

impl GateSink for Tally {
    fn emit(&mut self, gate: Gate) {
        let gate = narrow_mcx(gate);
        if self.lowered {
            self.emit_lowered(gate)
        } else {
            self.emit_raw(gate)
        }
    }
}

/// Gate tallies by class without decomposition, with greedy ASAP depth.
pub fn count_raw(c: &Circuit) -> LogicalCounts {
    let mut t = Tally::raw();
    for g in c.gates() {
        t.emit(g.clone());
    }
    t.finish(c.num_qubits())
}

/// Counts after expanding Toffolis, MCX and rotations to Clifford+T.
pub fn lower_to_clifford_t(c: &Circuit, p: &SynthesisParams) -> LogicalCounts {
    let mut t = Tally::lowered(p);
    for g in c.gates() {
        t.emit(g.clone());
    }
    t.finish(c.num_qubits())
}

/// Counts only Toffolis; the cheapest sink for very large circuits.
#[derive(Debug, Clone, Copy, Default)]
pub struct ToffoliTally(pub u64);

impl GateSink for ToffoliTally {
    #[inline]
    fn emit(&mut self, gate: Gate) {
        if matches!(gate, Gate::Ccx(..)) || matches!(&gate, Gate::Mcx(cs, _) if cs.len() >= 2) {
            self.0 += 1;
        }
    }
}

/// Checks once that [`toffoli_decomposition`] equals CCX on all 8 basis
/// states, up to global phase.
pub fn toffoli_decomposition_is_exact() -> bool {
    use crate::sim::{extract_basis, simulate_statevector, BasisState};
    let gates = toffoli_decomposition(QubitId(0), QubitId(1), QubitId(2)).to_vec();
    let c = Circuit::new(3, gates, vec![], vec![]).expect("valid gates");
    (0..8u64).all(|v| {
        let out = simulate_statevector(&c, &BasisState::from_u64(3, v)).expect("3 qubits");
        let want = if v & 3 == 3 { v ^ 4 } else { v };
        let amp = out.amplitudes()[want as usize];
        extract_basis(&out, 1e-12).ok().and_then(|s| s.to_u64()) == Some(want)
            && (amp.re - 1.0).abs() < 1e-9
            && amp.im.abs() < 1e-9
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate::*;

    fn circ(n: u32, gates: Vec<Gate>) -> Circuit {
        Circuit::new(n, gates, vec![], vec![]).unwrap()
    }

    #[test]
    fn empty_is_zero() {
        assert_eq!(count_raw(&circ(0, vec![])), LogicalCounts::default());
    }

    #[test]
    fn single_toffoli() {
        let c = circ(3, vec![Ccx(QubitId(0), QubitId(1), QubitId(2))]);
        let raw = count_raw(&c);
        assert_eq!((raw.toffoli_count, raw.depth, raw.t_count), (1, 1, 0));
        let low = lower_to_clifford_t(&c, &SynthesisParams::default());
        assert_eq!((low.t_count, low.toffoli_count, low.cnot_count), (7, 1, 6));
        assert!(low.t_depth >= 3 && low.depth <= 15);
    }

    #[test]
    fn disjoint_cnots_share_a_layer() {
        let c = circ(4, vec![Cnot(QubitId(0), QubitId(1)), Cnot(QubitId(2), QubitId(3))]);
        assert_eq!(count_raw(&c).depth, 1);
    }

    #[test]
    fn rotation_cost_formula() {
        let p = SynthesisParams { epsilon_syn: 1e-10, t_per_rotation_slope: 0.53, t_per_rotation_offset: 5.3 };
        let per = (0.53 * 1e10f64.log2() + 5.3).ceil() as u64;
        assert_eq!(p.t_per_rotation(), per);
        let c = circ(10, (0..10).map(|i| Rz(QubitId(i), 0.1)).collect());
        let low = lower_to_clifford_t(&c, &p);
        assert_eq!((low.t_count, low.rotation_count, low.t_depth), (10 * per, 10, per));
    }

    #[test]
    fn clifford_angles_are_not_rotations() {
        let c = circ(2, vec![Rz(QubitId(0), PI / 2.0), Rz(QubitId(0), PI / 4.0), CPhase(QubitId(0), QubitId(1), PI)]);
        let low = lower_to_clifford_t(&c, &SynthesisParams::default());
        assert_eq!((low.rotation_count, low.t_count), (0, 1));
    }

    #[test]
    fn mcx_ladder() {
        let c = circ(5, vec![Mcx(vec![QubitId(0), QubitId(1), QubitId(2), QubitId(3)].into(), QubitId(4))]);
        let low = lower_to_clifford_t(&c, &SynthesisParams::default());
        assert_eq!((low.toffoli_count, low.t_count, low.qubits), (6, 42, 8));
    }

    #[test]
    fn narrow_mcx_counts_as_small_gates() {
        let q = QubitId;
        let c = circ(3, vec![Mcx(vec![q(0)].into(), q(1)), Mcx(vec![q(0), q(1)].into(), q(2)), Mcx(vec![].into(), q(2))]);
        let low = lower_to_clifford_t(&c, &SynthesisParams::default());
        assert_eq!((low.toffoli_count, low.t_count, low.qubits), (1, 7, 3));
        let raw = count_raw(&c);
        assert_eq!((raw.toffoli_count, raw.cnot_count, raw.single_qubit_clifford), (1, 1, 1));
    }

    #[test]
    fn swap_is_three_cnots() {
        let c = circ(2, vec![Swap(QubitId(0), QubitId(1))]);
        assert_eq!(count_raw(&c).cnot_count, 3);
        assert_eq!(lower_to_clifford_t(&c, &SynthesisParams::default()).cnot_count, 3);
    }

    #[test]
    fn decomposition_self_test() {
        assert!(toffoli_decomposition_is_exact());
    }
}
