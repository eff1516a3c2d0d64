//! Names for every (operation class, algorithm) pair, parsing, and uniform
//! construction, counting and verification at a width `n`.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::adders::{self, ConstAdderAlgo, InPlaceAdderAlgo, OutOfPlaceAdderAlgo};
use crate::circuit::{Builder, Circuit, GateSink};
use crate::modexp::{self, ModExpAlgo};
use crate::muldiv::{self, DividerKind, DividerSpec, MultiplierAlgo};
use crate::resources::{LogicalCounts, SynthesisParams, Tally};
use crate::verify::{self, Report, Sampling, VerifyError};
use crate::ArithError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown operation class '{0}'")]
    UnknownOpClass(String),
    #[error("unknown algorithm '{algo}' for {op_class}")]
    UnknownAlgorithm { op_class: OpClass, algo: String },
    #[error("{op} at n={n} exceeds the verification limit n <= {limit}")]
    LimitExceeded { op: String, n: usize, limit: usize },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpClass {
    InplaceAdder,
    OutofplaceAdder,
    ConstAdder,
    Subtractor,
    Multiplier,
    Divider,
    Modexp,
}

impl OpClass {
    pub const ALL: [OpClass; 7] = [
        OpClass::InplaceAdder,
        OpClass::OutofplaceAdder,
        OpClass::ConstAdder,
        OpClass::Subtractor,
        OpClass::Multiplier,
        OpClass::Divider,
        OpClass::Modexp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OpClass::InplaceAdder => "inplace_adder",
            OpClass::OutofplaceAdder => "outofplace_adder",
            OpClass::ConstAdder => "const_adder",
            OpClass::Subtractor => "subtractor",
            OpClass::Multiplier => "multiplier",
            OpClass::Divider => "divider",
            OpClass::Modexp => "modexp",
        }
    }
}

impl fmt::Display for OpClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OpClass {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, CatalogError> {
        Self::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| CatalogError::UnknownOpClass(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    InPlace(InPlaceAdderAlgo),
    OutOfPlace(OutOfPlaceAdderAlgo),
    Const(ConstAdderAlgo),
    Subtractor(InPlaceAdderAlgo),
    Multiplier(MultiplierAlgo),
    Divider(DividerSpec),
    ModExp(ModExpAlgo),
}

/// A concrete operation: class plus fully parameterized algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OpSpec {
    pub algo: Algorithm,
}

impl OpSpec {
    pub fn op_class(&self) -> OpClass {
        match self.algo {
            Algorithm::InPlace(_) => OpClass::InplaceAdder,
            Algorithm::OutOfPlace(_) => OpClass::OutofplaceAdder,
            Algorithm::Const(_) => OpClass::ConstAdder,
            Algorithm::Subtractor(_) => OpClass::Subtractor,
            Algorithm::Multiplier(_) => OpClass::Multiplier,
            Algorithm::Divider(_) => OpClass::Divider,
            Algorithm::ModExp(_) => OpClass::Modexp,
        }
    }

    pub fn algorithm_name(&self) -> String {
        match self.algo {
            Algorithm::InPlace(a) | Algorithm::Subtractor(a) => a.to_string(),
            Algorithm::OutOfPlace(a) => a.to_string(),
            Algorithm::Const(a) => a.to_string(),
            Algorithm::Multiplier(a) => a.to_string(),
            Algorithm::Divider(d) => divider_name(d),
            Algorithm::ModExp(a) => a.to_string(),
        }
    }

    pub fn parse(op_class: &str, algo: &str) -> Result<Self, CatalogError> {
        let class: OpClass = op_class.parse()?;
        let unknown = || CatalogError::UnknownAlgorithm { op_class: class, algo: algo.to_string() };
        let s = algo.trim();
        let algo = match class {
            OpClass::InplaceAdder => Algorithm::InPlace(InPlaceAdderAlgo::from_name(s).ok_or_else(unknown)?),
            OpClass::Subtractor => Algorithm::Subtractor(InPlaceAdderAlgo::from_name(s).ok_or_else(unknown)?),
            OpClass::OutofplaceAdder => Algorithm::OutOfPlace(OutOfPlaceAdderAlgo::from_name(s).ok_or_else(unknown)?),
            OpClass::ConstAdder => Algorithm::Const(if s.eq_ignore_ascii_case("QFT") {
                ConstAdderAlgo::Qft
            } else {
                let inner = call_arg(s, "ViaInPlace").ok_or_else(unknown)?;
                ConstAdderAlgo::ViaInPlace(InPlaceAdderAlgo::from_name(inner).ok_or_else(unknown)?)
            }),
            OpClass::Multiplier => Algorithm::Multiplier(if s.eq_ignore_ascii_case("Schoolbook") {
                MultiplierAlgo::Schoolbook
            } else if s.eq_ignore_ascii_case("Karatsuba") {
                MultiplierAlgo::karatsuba()
            } else {
                let k = call_arg(s, "Karatsuba").and_then(|k| k.parse().ok()).ok_or_else(unknown)?;
                MultiplierAlgo::Karatsuba { piece_size: k }
            }),
            OpClass::Divider => {
                let (kind, adder) = s.split_once('+').ok_or_else(unknown)?;
                let kind = match kind.trim().to_ascii_lowercase().as_str() {
                    "restoring" => DividerKind::Restoring,
                    "nonrestoring" => DividerKind::NonRestoring,
                    _ => return Err(unknown()),
                };
                let adder = InPlaceAdderAlgo::from_name(adder.trim()).ok_or_else(unknown)?;
                Algorithm::Divider(DividerSpec { kind, adder })
            }
            OpClass::Modexp => Algorithm::ModExp(if s.eq_ignore_ascii_case("LYY") {
                ModExpAlgo::Lyy
            } else if s.eq_ignore_ascii_case("LYYWindowedOpt") {
                ModExpAlgo::LyyWindowedOpt
            } else {
                let w = call_arg(s, "LYYWindowed").and_then(|w| w.parse().ok()).ok_or_else(unknown)?;
                ModExpAlgo::LyyWindowed(w)
            }),
        };
        Ok(OpSpec { algo })
    }

    /// Comma-separated algorithms; a parenthesized `lo..hi` argument expands
    /// to every integer in the inclusive range, so `LYYWindowed(2..4)` names
    /// three algorithms.
    pub fn parse_many(op_class: &str, algos: &str) -> Result<Vec<Self>, CatalogError> {
        let mut out = Vec::new();
        for item in split_top_level(algos) {
            let expanded = match item.find('(') {
                Some(open) if item.ends_with(')') => {
                    let (name, arg) = (&item[..open], &item[open + 1..item.len() - 1]);
                    match arg.split_once("..") {
                        Some((lo, hi)) => {
                            let bad = || CatalogError::UnknownAlgorithm {
                                op_class: op_class.parse().unwrap_or(OpClass::Modexp),
                                algo: item.to_string(),
                            };
                            let lo: usize = lo.trim().parse().map_err(|_| bad())?;
                            let hi: usize = hi.trim().parse().map_err(|_| bad())?;
                            (lo..=hi).map(|k| format!("{name}({k})")).collect()
                        }
                        None => vec![item.to_string()],
                    }
                }
                _ => vec![item.to_string()],
            };
            for a in expanded {
                out.push(Self::parse(op_class, &a)?);
            }
        }
        Ok(out)
    }

    /// Rotation circuits get their synthesis precision from the budget.
    pub fn uses_rotations(&self) -> bool {
        match self.algo {
            Algorithm::InPlace(a) | Algorithm::Subtractor(a) => a.uses_rotations(),
            Algorithm::Const(a) => a.uses_rotations(),
            Algorithm::Divider(d) => d.adder.uses_rotations(),
            _ => false,
        }
    }
}

impl fmt::Display for OpSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.op_class(), self.algorithm_name())
    }
}

fn divider_name(d: DividerSpec) -> String {
    let kind = match d.kind {
        DividerKind::Restoring => "Restoring",
        DividerKind::NonRestoring => "NonRestoring",
    };
    format!("{kind}+{}", d.adder)
}

fn split_top_level(s: &str) -> Vec<&str> {
    let (mut depth, mut start, mut out) = (0i32, 0, Vec::new());
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.into_iter().filter(|x| !x.is_empty()).collect()
}

/// `name(arg)` -> `arg`, case-insensitive on `name`.
fn call_arg<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    let open = s.find('(')?;
    if !s[..open].trim().eq_ignore_ascii_case(name) || !s.ends_with(')') {
        return None;
    }
    Some(s[open + 1..s.len() - 1].trim())
}

/// One row of the catalog listing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub op_class: OpClass,
    pub algorithm: String,
    pub params: &'static str,
}

/// Every supported pair in a fixed order.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut v = Vec::new();
    let mut push = |op_class, algorithm: String, params| v.push(CatalogEntry { op_class, algorithm, params });
    for a in InPlaceAdderAlgo::ALL {
        push(OpClass::InplaceAdder, a.to_string(), "n");
    }
    for a in OutOfPlaceAdderAlgo::ALL {
        push(OpClass::OutofplaceAdder, a.to_string(), "n");
    }
    for a in ConstAdderAlgo::all() {
        push(OpClass::ConstAdder, a.to_string(), "n; constant = sum of 4^i mod 2^n");
    }
    for a in InPlaceAdderAlgo::ALL {
        push(OpClass::Subtractor, a.to_string(), "n");
    }
    push(OpClass::Multiplier, "Schoolbook".into(), "n");
    push(OpClass::Multiplier, MultiplierAlgo::KARATSUBA_8.to_string(), "n; piece_size >= 2 via Karatsuba(k)");
    push(OpClass::Multiplier, MultiplierAlgo::karatsuba().to_string(), "n; piece_size >= 2 via Karatsuba(k)");
    for d in DividerSpec::all() {
        push(OpClass::Divider, divider_name(d), "n; any in-place adder via Kind+Adder");
    }
    push(OpClass::Modexp, "LYY".into(), "n >= 2; N = 2^n - 1");
    push(OpClass::Modexp, "LYYWindowed(w)".into(), "n >= 2; 1 <= w <= n; N = 2^n - 1");
    push(OpClass::Modexp, "LYYWindowedOpt".into(), "n >= 2; w = floor(2 log2 n + 0.5)");
    v
}

fn check_n(n: usize) -> Result<(), ArithError> {
    if n == 0 {
        Err(ArithError::ZeroWidth)
    } else {
        Ok(())
    }
}

fn construct<S: GateSink>(b: &mut Builder<S>, spec: &OpSpec, n: usize) -> Result<(), ArithError> {
    check_n(n)?;
    let reg = |b: &mut Builder<S>, k: usize| b.alloc_register(k).expect("width checked");
    match spec.algo {
        Algorithm::InPlace(a) => {
            let (x, y) = (reg(b, n), reg(b, n));
            adders::add_in_place(b, a, &x, &y);
        }
        Algorithm::Subtractor(a) => {
            let (x, y) = (reg(b, n), reg(b, n));
            adders::sub_in_place(b, a, &x, &y);
        }
        Algorithm::OutOfPlace(a) => {
            let (x, y, z) = (reg(b, n), reg(b, n), reg(b, n));
            adders::add_out_of_place(b, a, &x, &y, &z);
        }
        Algorithm::Const(a) => {
            let t = reg(b, n);
            adders::add_constant(b, a, &adders::sweep_constant(n), &t, None);
        }
        Algorithm::Multiplier(a) => {
            muldiv::check_multiplier(a, n)?;
            let (x, y, p) = (reg(b, n), reg(b, n), reg(b, 2 * n));
            muldiv::multiply(b, a, &x, &y, &p);
        }
        Algorithm::Divider(d) => {
            let (x, y, q) = (reg(b, n), reg(b, n), reg(b, n));
            muldiv::divide(b, d, &x, &y, &q);
        }
        Algorithm::ModExp(a) => {
            if n < 2 {
                return Err(ArithError::InvalidModulus { modulus: "2^n - 1".into(), bits: n });
            }
            let (base, modulus) = modexp::sweep_constants(n);
            modexp::check_modexp(a, &base, &modulus, n)?;
            let (x, out) = (reg(b, n), reg(b, n));
            modexp::modexp(b, a, &base, &modulus, &x, &out);
        }
    }
    Ok(())
}

/// Streams the operation at width `n` into `sink`, returning the qubit
/// count alongside it.
pub fn emit<S: GateSink>(spec: &OpSpec, n: usize, sink: S) -> Result<(u32, S), ArithError> {
    let mut b = Builder::with_sink(sink);
    construct(&mut b, spec, n)?;
    let (layout, sink) = b.into_parts();
    Ok((layout.num_qubits, sink))
}

pub fn build(spec: &OpSpec, n: usize) -> Result<Circuit, ArithError> {
    let mut b = Builder::new();
    construct(&mut b, spec, n)?;
    Ok(b.finalize())
}

/// Lowered counts. For rotation circuits a first pass counts rotations so
/// that the synthesis precision can split the synthesis share of `budget`.
pub fn logical_counts(spec: &OpSpec, n: usize, synthesis_budget: f64) -> Result<LogicalCounts, ArithError> {
    let params = if spec.uses_rotations() {
        let (q, raw) = emit(spec, n, Tally::raw())?;
        SynthesisParams::for_budget(raw.finish(q).rotation_count, synthesis_budget)
    } else {
        SynthesisParams::default()
    };
    let (q, t) = emit(spec, n, Tally::lowered(&params))?;
    Ok(t.finish(q))
}

/// Toffoli count only, without scheduling.
pub fn toffoli_count(spec: &OpSpec, n: usize) -> Result<u64, ArithError> {
    Ok(emit(spec, n, crate::resources::ToffoliTally::default())?.1 .0)
}

/// Largest `n` accepted by [`verify`].
pub fn verify_limit(spec: &OpSpec) -> usize {
    match spec.algo {
        Algorithm::InPlace(a) | Algorithm::Subtractor(a) if a.uses_rotations() => 6,
        Algorithm::InPlace(_) | Algorithm::Subtractor(_) | Algorithm::OutOfPlace(_) => 10,
        Algorithm::Const(a) if a.uses_rotations() => 10,
        Algorithm::Const(_) => 16,
        Algorithm::Multiplier(_) => 24,
        Algorithm::Divider(d) if d.adder.uses_rotations() => 3,
        Algorithm::Divider(_) => 7,
        Algorithm::ModExp(_) => 8,
    }
}

/// Widths up to which multipliers are checked exhaustively.
pub const MULTIPLIER_EXHAUSTIVE_MAX: usize = 6;
pub const RANDOM_CASES: u64 = 1000;

/// Oracle check at one width: exhaustive, except multipliers above
/// [`MULTIPLIER_EXHAUSTIVE_MAX`] which draw [`RANDOM_CASES`] inputs from `seed`.
pub fn verify(spec: &OpSpec, n: usize, seed: u64) -> Result<Report, CatalogError> {
    let limit = verify_limit(spec);
    if n > limit {
        return Err(CatalogError::LimitExceeded { op: spec.to_string(), n, limit });
    }
    let report = match spec.algo {
        Algorithm::InPlace(a) => verify::inplace_adder(a, n)?,
        Algorithm::Subtractor(a) => verify::subtractor(a, n)?,
        Algorithm::OutOfPlace(a) => verify::outofplace_adder(a, n)?,
        Algorithm::Const(a) => {
            let c = adders::sweep_constant(n).to_u64().expect("n <= 64");
            verify::const_adder(a, n, c)?
        }
        Algorithm::Multiplier(a) => {
            let sampling = if n <= MULTIPLIER_EXHAUSTIVE_MAX {
                Sampling::Exhaustive
            } else {
                Sampling::Random { cases: RANDOM_CASES, seed }
            };
            verify::multiplier(a, n, sampling)?
        }
        Algorithm::Divider(d) => verify::divider(d, n)?,
        Algorithm::ModExp(a) => {
            if n < 2 {
                return Err(ArithError::InvalidModulus { modulus: "2^n - 1".into(), bits: n }.into());
            }
            let (base, modulus) = modexp::sweep_constants(n);
            verify::modexp(a, base.to_u64().expect("n <= 8"), modulus.to_u64().expect("n <= 8"), n)?
        }
    };
    Ok(report)
}

/// Smallest width the operation accepts.
pub fn min_width(spec: &OpSpec) -> usize {
    match spec.algo {
        Algorithm::ModExp(ModExpAlgo::LyyWindowed(w)) => w.max(2),
        Algorithm::ModExp(_) => 2,
        _ => 1,
    }
}
