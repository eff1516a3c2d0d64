//! Multipliers and dividers built on the in-place adders.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::adders::{add_in_place, controlled_add_in_place, sub_in_place, InPlaceAdderAlgo};
use crate::circuit::{Builder, Circuit, GateSink, QubitId, Register};
use crate::resources::{lower_to_clifford_t, LogicalCounts, SynthesisParams};
use crate::ArithError;

pub const DEFAULT_PIECE_SIZE: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MultiplierAlgo {
    Schoolbook,
    Karatsuba { piece_size: usize },
}

impl MultiplierAlgo {
    pub const KARATSUBA_8: MultiplierAlgo = MultiplierAlgo::Karatsuba { piece_size: 8 };

    pub fn karatsuba() -> Self {
        MultiplierAlgo::Karatsuba { piece_size: DEFAULT_PIECE_SIZE }
    }
}

impl fmt::Display for MultiplierAlgo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultiplierAlgo::Schoolbook => f.write_str("Schoolbook"),
            MultiplierAlgo::Karatsuba { piece_size } => write!(f, "Karatsuba({piece_size})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DividerKind {
    Restoring,
    NonRestoring,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DividerSpec {
    pub kind: DividerKind,
    pub adder: InPlaceAdderAlgo,
}

impl DividerSpec {
    /// Adders explored in the divider design space.
    pub const ADDERS: [InPlaceAdderAlgo; 3] = [InPlaceAdderAlgo::Gidney, InPlaceAdderAlgo::Ttk, InPlaceAdderAlgo::Cdkm];

    pub fn all() -> Vec<DividerSpec> {
        [DividerKind::Restoring, DividerKind::NonRestoring]
            .into_iter()
            .flat_map(|kind| Self::ADDERS.into_iter().map(move |adder| DividerSpec { kind, adder }))
            .collect()
    }
}

impl fmt::Display for DividerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DividerKind::Restoring => "Restoring",
            DividerKind::NonRestoring => "NonRestoring",
        })
    }
}

impl fmt::Display for DividerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}", self.kind, self.adder)
    }
}

/// Shift-and-add: each row `a AND b_i` is formed in scratch qubits and added
/// into the `n+1`-qubit window of the product starting at bit `i`.
fn schoolbook<S: GateSink>(b: &mut Builder<S>, a: &[QubitId], y: &[QubitId], p: &[QubitId]) {
    let n = a.len();
    debug_assert!(y.len() == n && p.len() == 2 * n);
    for (&q, &out) in a.iter().zip(p) {
        b.ccx(q, y[0], out);
    }
    if n == 1 {
        return;
    }
    let row = b.ancillas(n);
    for i in 1..n {
        for (&q, &s) in a.iter().zip(row.iter()) {
            b.ccx(q, y[i], s);
        }
        add_in_place(b, InPlaceAdderAlgo::Gidney, &row, &p[i..i + n + 1]);
        for (&q, &s) in a.iter().zip(row.iter()).rev() {
            b.ccx(q, y[i], s);
        }
    }
    b.release(&row);
}

/// Scratch registers left dirty by one forward Karatsuba node, in the shape
/// of the recursion, so the reverse pass can find them again.
struct Garbage {
    regs: Vec<Register>,
    children: Vec<Garbage>,
}

fn cnot_copy<S: GateSink>(b: &mut Builder<S>, src: &[QubitId], dst: &[QubitId]) {
    for (&s, &d) in src.iter().zip(dst) {
        b.cx(s, d);
    }
}

/// `out <- a * y` into a zeroed `out`, leaving scratch garbage behind. With
/// `adj` set, `garbage` must come from the matching forward call and the
/// whole node is undone, clearing both `out` and the garbage.
fn karatsuba_node<S: GateSink>(
    b: &mut Builder<S>,
    a: &[QubitId],
    y: &[QubitId],
    out: &[QubitId],
    piece: usize,
    adj: bool,
    garbage: Option<Garbage>,
) -> Option<Garbage> {
    let k = a.len();
    // The middle product has width ceil(k/2) + 1, which only shrinks for k > 3.
    if k <= piece.max(3) {
        b.maybe_adjoint(adj, |b| schoolbook(b, a, y, out));
        return None;
    }
    let h = k.div_ceil(2);
    let (a0, a1) = a.split_at(h);
    let (y0, y1) = y.split_at(h);
    let (regs, mut children) = match garbage {
        Some(g) => (g.regs, g.children.into_iter().map(Some).collect::<Vec<_>>()),
        None => {
            let sizes = [2 * h, 2 * (k - h), h + 1, h + 1, 2 * (h + 1)];
            (sizes.iter().map(|&s| b.ancillas(s)).collect(), vec![None, None, None])
        }
    };
    let (p0, p2, sa, sy, p1) = (&regs[0], &regs[1], &regs[2], &regs[3], &regs[4]);

    let sums = |b: &mut Builder<S>| {
        cnot_copy(b, a0, sa);
        add_in_place(b, InPlaceAdderAlgo::Gidney, a1, sa);
        cnot_copy(b, y0, sy);
        add_in_place(b, InPlaceAdderAlgo::Gidney, y1, sy);
    };
    let combine = |b: &mut Builder<S>| {
        cnot_copy(b, p0, out);
        cnot_copy(b, p2, &out[2 * h..]);
        let mid = &out[h..];
        let p1 = &p1[..p1.len().min(mid.len())];
        add_in_place(b, InPlaceAdderAlgo::Gidney, p1, mid);
        sub_in_place(b, InPlaceAdderAlgo::Gidney, p0, mid);
        sub_in_place(b, InPlaceAdderAlgo::Gidney, p2, mid);
    };

    if !adj {
        let g0 = karatsuba_node(b, a0, y0, p0, piece, false, None);
        let g2 = karatsuba_node(b, a1, y1, p2, piece, false, None);
        sums(b);
        let g1 = karatsuba_node(b, sa, sy, p1, piece, false, None);
        combine(b);
        let children = [g0, g2, g1].into_iter().map(|g| g.unwrap_or(Garbage { regs: vec![], children: vec![] }));
        Some(Garbage { regs, children: children.collect() })
    } else {
        let take = |c: &mut Option<Garbage>| c.take().filter(|g| !g.regs.is_empty());
        b.adjoint_block(combine);
        let g1 = take(&mut children[2]);
        karatsuba_node(b, sa, sy, p1, piece, true, g1);
        b.adjoint_block(sums);
        let g2 = take(&mut children[1]);
        karatsuba_node(b, a1, y1, p2, piece, true, g2);
        let g0 = take(&mut children[0]);
        karatsuba_node(b, a0, y0, p0, piece, true, g0);
        for r in regs.iter().rev() {
            b.release(r);
        }
        None
    }
}

/// Pads to a power of two, multiplies into a zeroed workspace, copies the
/// product out and runs the multiplication backwards to clean up.
fn karatsuba<S: GateSink>(b: &mut Builder<S>, a: &[QubitId], y: &[QubitId], p: &[QubitId], piece: usize) {
    let n = a.len();
    if n <= piece.max(3) {
        schoolbook(b, a, y, p);
        return;
    }
    let padded = n.next_power_of_two();
    let pad_a = b.ancillas(padded - n);
    let pad_y = b.ancillas(padded - n);
    let ax: Vec<QubitId> = a.iter().chain(pad_a.iter()).copied().collect();
    let yx: Vec<QubitId> = y.iter().chain(pad_y.iter()).copied().collect();
    let work = b.ancillas(2 * padded);
    let g = karatsuba_node(b, &ax, &yx, &work, piece, false, None);
    cnot_copy(b, &work[..2 * n], p);
    karatsuba_node(b, &ax, &yx, &work, piece, true, g);
    b.release(&work);
    b.release(&pad_y);
    b.release(&pad_a);
}

/// Emits `p ^= a * y` for a zeroed `p` of width `2 * len(a)`.
pub fn multiply<S: GateSink>(b: &mut Builder<S>, algo: MultiplierAlgo, a: &[QubitId], y: &[QubitId], p: &[QubitId]) {
    match algo {
        MultiplierAlgo::Schoolbook => schoolbook(b, a, y, p),
        MultiplierAlgo::Karatsuba { piece_size } => karatsuba(b, a, y, p, piece_size),
    }
}

pub fn check_multiplier(algo: MultiplierAlgo, n: usize) -> Result<(), ArithError> {
    if n == 0 {
        return Err(ArithError::ZeroWidth);
    }
    match algo {
        MultiplierAlgo::Karatsuba { piece_size } if piece_size < 2 => Err(ArithError::InvalidPieceSize(piece_size)),
        _ => Ok(()),
    }
}

/// Emits a full multiplier circuit (registers `a`, `b`, `p`) into `sink`.
pub fn emit_multiplier<S: GateSink>(algo: MultiplierAlgo, n: usize, sink: S) -> Result<(u32, S), ArithError> {
    check_multiplier(algo, n)?;
    let mut b = Builder::with_sink(sink);
    let x = b.alloc_register(n).expect("n checked");
    let y = b.alloc_register(n).expect("n checked");
    let p = b.alloc_register(2 * n).expect("n checked");
    multiply(&mut b, algo, &x, &y, &p);
    let (layout, sink) = b.into_parts();
    Ok((layout.num_qubits, sink))
}

/// Registers `a`, `b` (n each) and `p` (2n), with `p` receiving `a * b`.
pub fn build_multiplier(algo: MultiplierAlgo, n: usize) -> Result<Circuit, ArithError> {
    check_multiplier(algo, n)?;
    let mut b = Builder::new();
    let x = b.alloc_register(n).expect("n checked");
    let y = b.alloc_register(n).expect("n checked");
    let p = b.alloc_register(2 * n).expect("n checked");
    multiply(&mut b, algo, &x, &y, &p);
    Ok(b.finalize())
}

/// Conditionally complements `w` when `ctrl` is 0.
fn complement_unless<S: GateSink>(b: &mut Builder<S>, ctrl: QubitId, w: &[QubitId]) {
    b.x(ctrl);
    for &q in w {
        b.cx(ctrl, q);
    }
    b.x(ctrl);
}

/// `a <- a mod d`, `q <- floor(a / d)` for a zeroed `q`. The partial
/// remainder at step `i` lives in the `n+1`-qubit window starting at bit `i`
/// of the concatenation `a ++ q`, whose top bit becomes quotient bit `i`.
pub fn divide<S: GateSink>(b: &mut Builder<S>, spec: DividerSpec, a: &[QubitId], d: &[QubitId], q: &[QubitId]) {
    let n = a.len();
    let z: Vec<QubitId> = a.iter().chain(q).copied().collect();
    let top = b.ancilla();
    let dx: Vec<QubitId> = d.iter().copied().chain([top]).collect();
    let window = |i: usize| &z[i..i + n + 1];
    match spec.kind {
        DividerKind::Restoring => {
            for i in (0..n).rev() {
                let w = window(i);
                sub_in_place(b, spec.adder, &dx, w);
                controlled_add_in_place(b, spec.adder, q[i], d, &w[..n]);
                b.x(q[i]);
            }
        }
        DividerKind::NonRestoring => {
            sub_in_place(b, spec.adder, &dx, window(n - 1));
            for i in (0..n - 1).rev() {
                let w = window(i);
                complement_unless(b, q[i + 1], w);
                add_in_place(b, spec.adder, &dx, w);
                complement_unless(b, q[i + 1], w);
            }
            controlled_add_in_place(b, spec.adder, q[0], d, a);
            b.x_all(q);
        }
    }
    b.release(&[top]);
}

/// Registers `a` (dividend, becomes remainder), `b` (divisor) and `q`.
pub fn build_divider(spec: DividerSpec, n: usize) -> Result<Circuit, ArithError> {
    if n == 0 {
        return Err(ArithError::ZeroWidth);
    }
    let mut b = Builder::new();
    let x = b.alloc_register(n).expect("n checked");
    let d = b.alloc_register(n).expect("n checked");
    let q = b.alloc_register(n).expect("n checked");
    divide(&mut b, spec, &x, &d, &q);
    Ok(b.finalize())
}

/// Every divider configuration with its lowered counts, ordered by logical
/// qubits and then T-count.
pub fn divider_design_space(n: usize) -> Result<Vec<(DividerSpec, LogicalCounts)>, ArithError> {
    let params = SynthesisParams::default();
    let mut rows = DividerSpec::all()
        .into_iter()
        .map(|spec| Ok((spec, lower_to_clifford_t(&build_divider(spec, n)?, &params))))
        .collect::<Result<Vec<_>, ArithError>>()?;
    rows.sort_by_key(|(_, c)| (c.qubits, c.t_count));
    Ok(rows)
}
