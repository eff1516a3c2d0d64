use crate::circuit::{Builder, GateSink, QubitId};

/// Ripple-carry adder with one ancilla, built from MAJ and UMA blocks.
pub(super) fn cdkm<S: GateSink>(b: &mut Builder<S>, a: &[QubitId], t: &[QubitId]) {
    let n = a.len();
    if n == 1 {
        b.cx(a[0], t[0]);
        return;
    }
    let c0 = b.ancilla();
    let maj = |b: &mut Builder<S>, c: QubitId, y: QubitId, x: QubitId| {
        b.cx(x, y);
        b.cx(x, c);
        b.ccx(c, y, x);
    };
    let uma = |b: &mut Builder<S>, c: QubitId, y: QubitId, x: QubitId| {
        b.ccx(c, y, x);
        b.cx(x, c);
        b.cx(c, y);
    };
    maj(b, c0, t[0], a[0]);
    for i in 1..n - 1 {
        maj(b, a[i - 1], t[i], a[i]);
    }
    // a[n-2] now holds the carry into the top bit.
    b.cx(a[n - 1], t[n - 1]);
    b.cx(a[n - 2], t[n - 1]);
    for i in (1..n - 1).rev() {
        uma(b, a[i - 1], t[i], a[i]);
    }
    uma(b, c0, t[0], a[0]);
    b.release(&[c0]);
}

/// Ancilla-free ripple-carry adder; carries travel through the `a` register.
pub(super) fn ttk<S: GateSink>(b: &mut Builder<S>, a: &[QubitId], t: &[QubitId]) {
    let n = a.len();
    if n > 1 {
        let outer = |b: &mut Builder<S>, rev: bool| {
            let mut gates: Vec<(QubitId, QubitId)> = (1..n).map(|i| (a[i], t[i])).collect();
            gates.extend((1..n - 1).rev().map(|i| (a[i], a[i + 1])));
            if rev {
                gates.reverse();
            }
            for (c, x) in gates {
                b.cx(c, x);
            }
        };
        outer(b, false);
        for i in 0..n - 1 {
            b.ccx(a[i], t[i], a[i + 1]);
        }
        for i in (1..n).rev() {
            b.cx(a[i], t[i]);
            b.ccx(a[i - 1], t[i - 1], a[i]);
        }
        outer(b, true);
    }
    b.cx(a[0], t[0]);
}

/// Unitary form of the temporary-logical-AND adder: n-1 carry ancillas, each
/// computed with one Toffoli and uncomputed with another. `a` may be shorter
/// than `t`; the missing high bits of `a` reduce to an incrementer chain.
pub(super) fn gidney<S: GateSink>(b: &mut Builder<S>, a: &[QubitId], t: &[QubitId]) {
    let m = t.len();
    let src = |i: usize| a.get(i).copied();
    let carries = b.ancillas(m - 1);
    // c(i) is the carry into bit i, for 1 <= i < m.
    let c = |i: usize| carries[i - 1];

    for i in 0..m - 1 {
        if i == 0 {
            b.ccx(a[0], t[0], c(1));
            continue;
        }
        match src(i) {
            Some(ai) => {
                b.cx(c(i), ai);
                b.cx(c(i), t[i]);
                b.ccx(ai, t[i], c(i + 1));
                b.cx(c(i), c(i + 1));
            }
            None => b.ccx(c(i), t[i], c(i + 1)),
        }
    }
    if let Some(top) = src(m - 1) {
        b.cx(top, t[m - 1]);
    }
    if m >= 2 {
        b.cx(c(m - 1), t[m - 1]);
    }
    for i in (0..m - 1).rev() {
        if i == 0 {
            b.ccx(a[0], t[0], c(1));
            b.cx(a[0], t[0]);
            continue;
        }
        match src(i) {
            Some(ai) => {
                b.cx(c(i), c(i + 1));
                b.ccx(ai, t[i], c(i + 1));
                b.cx(c(i), ai);
                b.cx(ai, t[i]);
            }
            None => {
                b.ccx(c(i), t[i], c(i + 1));
                b.cx(c(i), t[i]);
            }
        }
    }
    b.release(&carries);
}

/// Out-of-place variant: the carries live in the zeroed output register
/// itself, so no ancillas are needed.
pub(super) fn gidney_out_of_place<S: GateSink>(b: &mut Builder<S>, a: &[QubitId], y: &[QubitId], z: &[QubitId]) {
    let n = a.len();
    for i in 0..n - 1 {
        if i == 0 {
            b.ccx(a[0], y[0], z[1]);
            continue;
        }
        b.cx(z[i], a[i]);
        b.cx(z[i], y[i]);
        b.ccx(a[i], y[i], z[i + 1]);
        b.cx(z[i], z[i + 1]);
        b.cx(z[i], a[i]);
        b.cx(z[i], y[i]);
    }
    for i in 0..n {
        b.cx(a[i], z[i]);
        b.cx(y[i], z[i]);
    }
}
