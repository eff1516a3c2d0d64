use crate::circuit::{Builder, GateSink, QubitId};

/// Log-depth carry propagation. On entry `g[k]` (1 <= k <= m, `g[0]` unused)
/// holds the generate bit of position k-1 and `p[i]` the propagate bit of
/// position i; on exit `g[k]` holds the carry into position k. Intermediate
/// propagate products live in ancillas that are cleared before returning.
fn carry_tree<S: GateSink>(b: &mut Builder<S>, p: &[QubitId], g: &[QubitId]) {
    let m = p.len();
    if m < 2 {
        return;
    }
    let levels = m.ilog2() as usize;
    // prop[t][j] covers propagate bits [2^t j, 2^t (j+1)); entry 0 is never used for t >= 1.
    let mut prop: Vec<Vec<Option<QubitId>>> = vec![p.iter().copied().map(Some).collect()];
    let mut scratch = Vec::new();
    let mut p_rounds = Vec::new();
    for t in 1..levels {
        let count = m >> t;
        let mut row = vec![None; count];
        for (j, slot) in row.iter_mut().enumerate().skip(1) {
            let q = b.ancilla();
            scratch.push(q);
            let (x, y) = (prop[t - 1][2 * j].unwrap(), prop[t - 1][2 * j + 1].unwrap());
            b.ccx(x, y, q);
            p_rounds.push((x, y, q));
            *slot = Some(q);
        }
        prop.push(row);
    }
    for t in 1..=levels {
        for j in 0..m >> t {
            let (lo, hi) = (1usize << (t - 1), 1usize << t);
            b.ccx(g[hi * j + lo], prop[t - 1][2 * j + 1].unwrap(), g[hi * j + hi]);
        }
    }
    let top = (2 * m / 3).max(1).ilog2() as usize;
    for t in (1..=top).rev() {
        let (lo, hi) = (1usize << (t - 1), 1usize << t);
        for j in 1..=(m - lo) / hi {
            b.ccx(g[hi * j], prop[t - 1][2 * j].unwrap(), g[hi * j + lo]);
        }
    }
    for &(x, y, q) in p_rounds.iter().rev() {
        b.ccx(x, y, q);
    }
    b.release(&scratch);
}

/// Carry-lookahead out-of-place adder into a zeroed `z`.
pub(super) fn add_out_of_place<S: GateSink>(b: &mut Builder<S>, a: &[QubitId], y: &[QubitId], z: &[QubitId]) {
    let n = a.len();
    let m = n - 1;
    for i in 0..m {
        b.ccx(a[i], y[i], z[i + 1]);
    }
    for i in 0..n {
        b.cx(a[i], y[i]);
    }
    carry_tree(b, &y[..m], z);
    for i in 0..n {
        b.cx(y[i], z[i]);
    }
    for i in 0..n {
        b.cx(a[i], y[i]);
    }
}

/// `t <- t - a` computed out of place into a zeroed `out`.
fn difference<S: GateSink>(b: &mut Builder<S>, a: &[QubitId], t: &[QubitId], out: &[QubitId]) {
    b.x_all(t);
    add_out_of_place(b, a, t, out);
    b.x_all(out);
    b.x_all(t);
}

/// In-place form: add out of place into scratch, swap the sum in, then
/// erase the old value by running the out-of-place difference backwards.
pub(super) fn add_in_place<S: GateSink>(b: &mut Builder<S>, a: &[QubitId], t: &[QubitId]) {
    let s = b.ancillas(t.len());
    add_out_of_place(b, a, t, &s);
    b.swap_registers(t, &s);
    b.adjoint_block(|b| difference(b, a, t, &s));
    b.release(&s);
}
