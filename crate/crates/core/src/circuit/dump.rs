//! Line-oriented text form of a circuit: a `qubits=<N>` header followed by
//! one `GATE q0[,q1,...][;angle=<radians>]` line per gate.

use std::fmt::Write;

use super::{Circuit, CircuitError, Gate, QubitId};

pub fn dump(c: &Circuit) -> String {
    let mut s = String::with_capacity(16 * c.gates().len() + 16);
    writeln!(s, "qubits={}", c.num_qubits()).unwrap();
    for g in c.gates() {
        writeln!(s, "{g}").unwrap();
    }
    s
}

/// Parses the output of [`dump`]. Register layout is not part of the format,
/// so the result has no registers.
pub fn parse_dump(text: &str) -> Result<Circuit, CircuitError> {
    let err = |line: usize, reason: &str| CircuitError::Parse { line, reason: reason.to_string() };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
    let num_qubits: u32 = header
        .trim()
        .strip_prefix("qubits=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| err(1, "expected qubits=<N>"))?;

    let mut gates = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        let (name, rest) = line.trim().split_once(' ').ok_or_else(|| err(lineno, "missing operands"))?;
        let (ops, angle) = match rest.split_once(';') {
            Some((ops, a)) => {
                let v = a
                    .strip_prefix("angle=")
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| err(lineno, "bad angle"))?;
                (ops, Some(v))
            }
            None => (rest, None),
        };
        let qs: Vec<QubitId> = ops
            .split(',')
            .map(|t| t.trim().parse().map(QubitId))
            .collect::<Result<_, _>>()
            .map_err(|_| err(lineno, "bad qubit index"))?;
        let arity = |k: usize| {
            if qs.len() == k {
                Ok(())
            } else {
                Err(err(lineno, "wrong operand count"))
            }
        };
        let need_angle = || angle.ok_or_else(|| err(lineno, "missing angle"));
        let g = match name {
            "X" => arity(1).map(|_| Gate::X(qs[0]))?,
            "H" => arity(1).map(|_| Gate::H(qs[0]))?,
            "S" => arity(1).map(|_| Gate::S(qs[0]))?,
            "SDG" => arity(1).map(|_| Gate::Sdg(qs[0]))?,
            "T" => arity(1).map(|_| Gate::T(qs[0]))?,
            "TDG" => arity(1).map(|_| Gate::Tdg(qs[0]))?,
            "RZ" => {
                arity(1)?;
                Gate::Rz(qs[0], need_angle()?)
            }
            "CNOT" => arity(2).map(|_| Gate::Cnot(qs[0], qs[1]))?,
            "SWAP" => arity(2).map(|_| Gate::Swap(qs[0], qs[1]))?,
            "CPHASE" => {
                arity(2)?;
                Gate::CPhase(qs[0], qs[1], need_angle()?)
            }
            "CCX" => arity(3).map(|_| Gate::Ccx(qs[0], qs[1], qs[2]))?,
            "MCX" => {
                if qs.len() < 2 {
                    return Err(err(lineno, "MCX needs a target and controls"));
                }
                let (t, cs) = qs.split_last().unwrap();
                Gate::Mcx(cs.into(), *t)
            }
            _ => return Err(err(lineno, "unknown gate")),
        };
        gates.push(g);
    }
    Circuit::new(num_qubits, gates, vec![], vec![])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dump_format() {
        let c = Circuit::new(
            4,
            vec![
                Gate::X(QubitId(0)),
                Gate::Ccx(QubitId(0), QubitId(1), QubitId(2)),
                Gate::CPhase(QubitId(3), QubitId(1), 0.25),
                Gate::Mcx(vec![QubitId(0), QubitId(1), QubitId(2)].into(), QubitId(3)),
            ],
            vec![],
            vec![],
        )
        .unwrap();
        let text = dump(&c);
        assert_eq!(text, "qubits=4\nX 0\nCCX 0,1,2\nCPHASE 3,1;angle=0.25\nMCX 0,1,2,3\n");
        assert_eq!(parse_dump(&text).unwrap(), c);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_dump("").is_err());
        assert!(parse_dump("qubits=2\nFOO 1").is_err());
        assert!(parse_dump("qubits=2\nCNOT 1").is_err());
        assert!(parse_dump("qubits=2\nRZ 1").is_err());
        assert!(parse_dump("qubits=2\nX 5").is_err());
    }
}
