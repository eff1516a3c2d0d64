//! The acceptance claims as executable checks, with markdown and JSON
//! reports.

use std::fmt;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::adders::{sweep_constant, ConstAdderAlgo, InPlaceAdderAlgo, OutOfPlaceAdderAlgo};
use crate::analysis::{self, SweepSeries};
use crate::catalog::{self, OpSpec};
use crate::circuit::Circuit;
use crate::modexp::{self, optimal_window, ModExpAlgo};
use crate::muldiv::{DividerKind, DividerSpec, MultiplierAlgo};
use crate::physical::{self, PhysicalParams};
use crate::verify::{self, Report, Sampling};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimCheck {
    pub claim_id: String,
    pub description: String,
    pub status: Status,
    pub observed: String,
}

/// Identifier and description of every acceptance claim, in report order.
pub const CLAIMS: [(&str, &str); 11] = [
    ("C01", "adder oracle equivalence: in-place, out-of-place, constant adders and subtractors exhaustive for n in 1..6 (QFT in-place 2..5 via statevector) in under 10 minutes"),
    ("C02", "multiplier equivalence: Schoolbook and Karatsuba exhaustive for n in 2..4, Karatsuba(8) on 1000 seeded random cases at n = 8"),
    ("C03", "divider equivalence: restoring and non-restoring with Gidney, TTK and CDKM adders, all a and b > 0 for n in 2..4"),
    ("C04", "ModExp equivalence: LYY and LYYWindowed(1..3) for n in 2..4 with N = 2^n - 1 and coprime a"),
    ("C05", "structural invariants: unitary gate alphabet only, adjoint composition is the identity for n <= 5, clean ancillas on every checked input"),
    ("C06", "T-count slopes: ripple-carry adders in [0.9, 1.15], Schoolbook in [1.85, 2.3], Karatsuba(8) on 2^5..2^12 in [1.4, 1.95], LYYWindowedOpt on 2^3..2^7 in [2.6, 3.3], sweep under 1 hour"),
    ("C07", "tipping point: Karatsuba(8) Toffoli count drops below Schoolbook at a power of two n* <= 2^13 and stays below"),
    ("C08", "window optimum: brute-force argmin of LYYWindowed(w) T-count over w in 1..min(n,16) is within 3 of floor(2 log2 n + 0.5) at n = 16 and 32"),
    ("C09", "divider design space on logical proxies (qubits, T-count): a TTK divider has the fewest qubits and non-restoring beats restoring on T-count per adder, n in {8, 16, 32}"),
    ("C10", "Pareto frontiers are non-dominated and runtime-ordered; the QFT constant adder frontier at n = 32 spans a larger max/min runtime ratio than ViaInPlace(Gidney)"),
    ("C11", "absolute physical qubit counts and runtimes of the reference estimator are not reproduced; claims C01..C10 substitute for figure matching"),
];

struct Outcome {
    ok: bool,
    observed: String,
}

impl Outcome {
    fn from_reports(reports: Vec<Report>, elapsed: Duration, limit: Option<Duration>) -> Outcome {
        let cases: u64 = reports.iter().map(|r| r.cases).sum();
        let failed = reports.iter().find(|r| !r.passed());
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let mut observed = format!("{} checks, {cases} cases, {:.1}s", reports.len(), elapsed.as_secs_f64());
        if let Some(r) = failed {
            observed = format!("{observed}; first failure: {r}");
        }
        if !in_time {
            observed.push_str("; time limit exceeded");
        }
        Outcome { ok: failed.is_none() && in_time, observed }
    }

    fn error(e: impl fmt::Display) -> Outcome {
        Outcome { ok: false, observed: format!("error: {e}") }
    }
}

type Checked = Result<Outcome, String>;

fn collect(items: Vec<Result<Report, verify::VerifyError>>) -> Result<Vec<Report>, String> {
    items.into_iter().map(|r| r.map_err(|e| e.to_string())).collect()
}

fn adder_checks() -> Checked {
    let start = Instant::now();
    let mut jobs: Vec<Box<dyn Fn() -> Result<Report, verify::VerifyError> + Send + Sync>> = Vec::new();
    for n in 1..=6usize {
        for a in InPlaceAdderAlgo::ALL {
            if a.uses_rotations() && !(2..=5).contains(&n) {
                continue;
            }
            jobs.push(Box::new(move || verify::inplace_adder(a, n)));
            jobs.push(Box::new(move || verify::subtractor(a, n)));
        }
        for a in OutOfPlaceAdderAlgo::ALL {
            jobs.push(Box::new(move || verify::outofplace_adder(a, n)));
        }
        let top = (1u64 << n) - 1;
        let sweep = sweep_constant(n).to_u64().expect("n <= 6");
        let mut constants = vec![0, 1, sweep, top];
        constants.sort_unstable();
        constants.dedup();
        for a in ConstAdderAlgo::all() {
            for &c in &constants {
                jobs.push(Box::new(move || verify::const_adder(a, n, c)));
            }
        }
    }
    let reports = collect(jobs.par_iter().map(|j| j()).collect())?;
    Ok(Outcome::from_reports(reports, start.elapsed(), Some(Duration::from_secs(600))))
}

fn multiplier_checks(seed: u64) -> Checked {
    let start = Instant::now();
    let algos = [MultiplierAlgo::Schoolbook, MultiplierAlgo::Karatsuba { piece_size: 2 }, MultiplierAlgo::KARATSUBA_8];
    let mut jobs: Vec<(MultiplierAlgo, usize, Sampling)> =
        (2..=4).flat_map(|n| algos.map(|a| (a, n, Sampling::Exhaustive))).collect();
    let random = Sampling::Random { cases: 1000, seed };
    jobs.push((MultiplierAlgo::KARATSUBA_8, 8, random));
    jobs.push((MultiplierAlgo::Karatsuba { piece_size: 2 }, 8, random));
    let reports = collect(jobs.par_iter().map(|&(a, n, s)| verify::multiplier(a, n, s)).collect())?;
    Ok(Outcome::from_reports(reports, start.elapsed(), None))
}

fn divider_checks() -> Checked {
    let start = Instant::now();
    let jobs: Vec<(DividerSpec, usize)> = DividerSpec::all().into_iter().flat_map(|s| (2..=4).map(move |n| (s, n))).collect();
    let reports = collect(jobs.par_iter().map(|&(s, n)| verify::divider(s, n)).collect())?;
    Ok(Outcome::from_reports(reports, start.elapsed(), None))
}

fn modexp_checks() -> Checked {
    let start = Instant::now();
    let mut jobs = Vec::new();
    for n in 2..=4usize {
        let (a, m) = modexp::sweep_constants(n);
        let (a, m) = (a.to_u64().expect("small"), m.to_u64().expect("small"));
        jobs.push((ModExpAlgo::Lyy, a, m, n));
        for w in (1..=3).filter(|&w| w <= n) {
            jobs.push((ModExpAlgo::LyyWindowed(w), a, m, n));
        }
    }
    let reports = collect(jobs.par_iter().map(|&(algo, a, m, n)| verify::modexp(algo, a, m, n)).collect())?;
    Ok(Outcome::from_reports(reports, start.elapsed(), None))
}

const UNITARY_GATES: [&str; 12] = ["X", "CNOT", "CCX", "MCX", "SWAP", "H", "S", "SDG", "T", "TDG", "RZ", "CPHASE"];

/// Widest circuits whose adjoint round trip is checked on every basis state,
/// for permutation and statevector simulation respectively.
const EXHAUSTIVE_ADJOINT_QUBITS: u32 = 18;
const EXHAUSTIVE_ADJOINT_QUBITS_SV: u32 = 10;

fn adjoint_limit(c: &Circuit) -> u32 {
    if c.is_permutation() {
        EXHAUSTIVE_ADJOINT_QUBITS
    } else {
        EXHAUSTIVE_ADJOINT_QUBITS_SV
    }
}

fn structural_checks(seed: u64) -> Checked {
    let start = Instant::now();
    let mut circuits: Vec<(String, Circuit)> = Vec::new();
    for e in catalog::catalog() {
        let algo = e.algorithm.replace("(w)", "(2)");
        let spec = OpSpec::parse(e.op_class.name(), &algo).map_err(|e| e.to_string())?;
        for n in 1..=5usize {
            if let Ok(c) = catalog::build(&spec, n) {
                circuits.push((format!("{spec} n={n}"), c));
            }
        }
    }
    let gate_names_ok = circuits.iter().all(|(_, c)| c.gates().iter().all(|g| UNITARY_GATES.contains(&g.name())));
    if !gate_names_ok {
        return Ok(Outcome { ok: false, observed: "non-unitary gate found".into() });
    }
    let results: Vec<Result<Report, String>> = circuits
        .par_iter()
        .map(|(label, c)| {
            verify::adjoint_identity(c, adjoint_limit(c), seed)
                .map(|r| Report { label: format!("adjoint {label}"), ..r })
                .map_err(|e| e.to_string())
        })
        .collect();
    let reports: Vec<Report> = results.into_iter().collect::<Result<_, _>>()?;
    let exhaustive = circuits.iter().filter(|(_, c)| c.num_qubits() <= adjoint_limit(c)).count();
    let mut out = Outcome::from_reports(reports, start.elapsed(), None);
    out.observed = format!(
        "{} circuits scanned, {exhaustive} adjoint checks exhaustive, the rest on 256 seeded states; ancilla cleanliness is part of every oracle check in C01..C04; {}",
        circuits.len(),
        out.observed
    );
    Ok(out)
}

fn series_of(spec: &OpSpec, grid: &[u64], params: &PhysicalParams) -> Result<SweepSeries, String> {
    let pts: Result<Vec<(u64, f64)>, String> = grid
        .par_iter()
        .map(|&n| {
            let c = catalog::logical_counts(spec, n as usize, params.budget_share()).map_err(|e| e.to_string())?;
            Ok((n, c.t_count as f64))
        })
        .collect();
    SweepSeries::new(spec.to_string(), pts?).map_err(|e| e.to_string())
}

/// Grids used for the slope claims.
pub fn slope_cases() -> Vec<(OpSpec, Vec<u64>, (f64, f64))> {
    let spec = |op: &str, a: &str| OpSpec::parse(op, a).expect("catalog name");
    let adder_grid = analysis::log_grid(3, 4096).expect("valid range");
    let mut v: Vec<(OpSpec, Vec<u64>, (f64, f64))> = ["Gidney", "TTK", "CDKM"]
        .into_iter()
        .map(|a| (spec("inplace_adder", a), adder_grid.clone(), (0.9, 1.15)))
        .collect();
    v.push((spec("multiplier", "Schoolbook"), analysis::log_grid(3, 1024).expect("valid range"), (1.85, 2.3)));
    v.push((spec("multiplier", "Karatsuba(8)"), analysis::pow2_grid(1 << 5, 1 << 12), (1.4, 1.95)));
    v.push((spec("modexp", "LYYWindowedOpt"), analysis::log_grid(1 << 3, 1 << 7).expect("valid range"), (2.6, 3.3)));
    v
}

fn slope_checks(params: &PhysicalParams) -> Checked {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (spec, grid, (lo, hi)) in slope_cases() {
        let s = series_of(&spec, &grid, params)?;
        let (slope, _) = analysis::fit_power_law(&s).map_err(|e| e.to_string())?;
        let inside = (lo..=hi).contains(&slope);
        ok &= inside;
        parts.push(format!("{spec} {slope:.3}{}", if inside { "" } else { " (out of range)" }));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(3600);
    Ok(Outcome { ok, observed: format!("{}; {:.1}s", parts.join(", "), elapsed.as_secs_f64()) })
}

fn toffoli_series(spec: &OpSpec, grid: &[u64]) -> Result<SweepSeries, String> {
    let pts: Result<Vec<(u64, f64)>, String> = grid
        .par_iter()
        .map(|&n| Ok((n, catalog::toffoli_count(spec, n as usize).map_err(|e| e.to_string())? as f64)))
        .collect();
    SweepSeries::new(spec.to_string(), pts?).map_err(|e| e.to_string())
}

/// Power-of-two grid on which the tipping point is searched.
pub const TIPPING_GRID: (u64, u64) = (8, 1 << 13);

fn tipping_check() -> Checked {
    let grid = analysis::pow2_grid(TIPPING_GRID.0, TIPPING_GRID.1);
    let school = toffoli_series(&OpSpec::parse("multiplier", "Schoolbook").expect("name"), &grid)?;
    let kara = toffoli_series(&OpSpec::parse("multiplier", "Karatsuba(8)").expect("name"), &grid)?;
    let tip = analysis::find_tipping_point(&school, &kara).map_err(|e| e.to_string())?;
    let ok = tip.is_some_and(|n| n <= 1 << 13);
    Ok(Outcome { ok, observed: format!("n* = {}", tip.map_or("none".to_string(), |n| n.to_string())) })
}

/// Empirical T-count argmin over `w` in `1..=min(n, 16)`.
pub fn window_argmin(n: usize, params: &PhysicalParams) -> Result<(usize, Vec<(usize, u64)>), String> {
    let costs: Result<Vec<(usize, u64)>, String> = (1..=n.min(16))
        .into_par_iter()
        .map(|w| {
            let spec = OpSpec { algo: catalog::Algorithm::ModExp(ModExpAlgo::LyyWindowed(w)) };
            let c = catalog::logical_counts(&spec, n, params.budget_share()).map_err(|e| e.to_string())?;
            Ok((w, c.t_count))
        })
        .collect();
    let costs = costs?;
    let best = costs.iter().min_by_key(|&&(w, t)| (t, w)).map_or(1, |&(w, _)| w);
    Ok((best, costs))
}

fn window_check(params: &PhysicalParams) -> Checked {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [16usize, 32] {
        let (best, _) = window_argmin(n, params)?;
        let target = optimal_window(n);
        ok &= best.abs_diff(target) <= 3;
        parts.push(format!("n={n}: argmin w={best}, rule w={target}"));
    }
    Ok(Outcome { ok, observed: parts.join("; ") })
}

fn divider_ordering_check(params: &PhysicalParams) -> Checked {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [8usize, 16, 32] {
        let rows: Result<Vec<(DividerSpec, crate::resources::LogicalCounts)>, String> = DividerSpec::all()
            .into_par_iter()
            .map(|s| {
                let spec = OpSpec { algo: catalog::Algorithm::Divider(s) };
                catalog::logical_counts(&spec, n, params.budget_share()).map(|c| (s, c)).map_err(|e| e.to_string())
            })
            .collect();
        let rows = rows?;
        let min_q = rows.iter().map(|(_, c)| c.qubits).min().unwrap_or(0);
        let ttk_min = rows.iter().any(|(s, c)| s.adder == InPlaceAdderAlgo::Ttk && c.qubits == min_q);
        let t_of = |kind, adder| rows.iter().find(|(s, _)| s.kind == kind && s.adder == adder).map(|(_, c)| c.t_count);
        let nr_wins = DividerSpec::ADDERS
            .iter()
            .all(|&a| t_of(DividerKind::NonRestoring, a) < t_of(DividerKind::Restoring, a));
        ok &= ttk_min && nr_wins;
        parts.push(format!(
            "n={n}: min qubits {min_q} ({}), non-restoring cheaper for every adder: {nr_wins}",
            if ttk_min { "TTK" } else { "not TTK" }
        ));
    }
    Ok(Outcome { ok, observed: parts.join("; ") })
}

/// Operations whose n = 32 frontiers are checked for non-domination.
pub const PARETO_OPS: [(&str, &str); 6] = [
    ("inplace_adder", "TTK"),
    ("inplace_adder", "QFT"),
    ("const_adder", "QFT"),
    ("const_adder", "ViaInPlace(Gidney)"),
    ("multiplier", "Schoolbook"),
    ("divider", "NonRestoring+TTK"),
];

fn runtime_ratio(f: &[physical::PhysicalEstimate]) -> f64 {
    match (f.first(), f.last()) {
        (Some(a), Some(b)) => b.runtime / a.runtime,
        _ => 1.0,
    }
}

fn pareto_check(params: &PhysicalParams) -> Checked {
    let frontiers: Result<Vec<(String, Vec<physical::PhysicalEstimate>)>, String> = PARETO_OPS
        .par_iter()
        .map(|&(op, a)| {
            let spec = OpSpec::parse(op, a).map_err(|e| e.to_string())?;
            let c = catalog::logical_counts(&spec, 32, params.budget_share()).map_err(|e| e.to_string())?;
            Ok((spec.to_string(), physical::pareto_frontier(&c, params).map_err(|e| e.to_string())?))
        })
        .collect();
    let frontiers = frontiers?;
    let ordered = frontiers.iter().all(|(_, f)| {
        !f.is_empty() && f.windows(2).all(|w| w[0].runtime < w[1].runtime && w[0].physical_qubits > w[1].physical_qubits)
    });
    let ratio = |name: &str| frontiers.iter().find(|(l, _)| l == name).map_or(1.0, |(_, f)| runtime_ratio(f));
    let qft = ratio("const_adder/QFT");
    let gidney = ratio("const_adder/ViaInPlace(Gidney)");
    let school = frontiers.iter().find(|(l, _)| l == "multiplier/Schoolbook").map_or(0, |(_, f)| f.len());
    Ok(Outcome {
        ok: ordered && qft > gidney,
        observed: format!(
            "{} frontiers non-dominated and ordered: {ordered}; runtime ratio QFT {qft:.2} vs ViaInPlace(Gidney) {gidney:.2}; Schoolbook n=32 frontier has {school} points",
            frontiers.len()
        ),
    })
}

fn run_one(id: &str, params: &PhysicalParams, seed: u64) -> Outcome {
    let r = match id {
        "C01" => adder_checks(),
        "C02" => multiplier_checks(seed),
        "C03" => divider_checks(),
        "C04" => modexp_checks(),
        "C05" => structural_checks(seed),
        "C06" => slope_checks(params),
        "C07" => tipping_check(),
        "C08" => window_check(params),
        "C09" => divider_ordering_check(params),
        "C10" => pareto_check(params),
        _ => Err(format!("no check registered for {id}")),
    };
    r.unwrap_or_else(Outcome::error)
}

/// Runs every claim. Failures are reported as statuses.
pub fn run_claims(params: &PhysicalParams, seed: u64) -> Vec<ClaimCheck> {
    run_selected(params, seed, &CLAIMS.map(|c| c.0))
}

/// Runs the claims with the given ids, in [`CLAIMS`] order. C11 summarizes
/// the others and passes when all of them that ran passed.
pub fn run_selected(params: &PhysicalParams, seed: u64, ids: &[&str]) -> Vec<ClaimCheck> {
    let selected: Vec<(&str, &str)> = CLAIMS.iter().copied().filter(|(id, _)| ids.contains(id)).collect();
    let mut checks: Vec<ClaimCheck> = selected
        .par_iter()
        .filter(|(id, _)| *id != "C11")
        .map(|&(id, description)| {
            let o = run_one(id, params, seed);
            ClaimCheck {
                claim_id: id.to_string(),
                description: description.to_string(),
                status: if o.ok { Status::Pass } else { Status::Fail },
                observed: o.observed,
            }
        })
        .collect();
    if let Some(&(id, description)) = selected.iter().find(|(id, _)| *id == "C11") {
        let failed: Vec<&str> = checks.iter().filter(|c| c.status == Status::Fail).map(|c| c.claim_id.as_str()).collect();
        let observed = if failed.is_empty() {
            "independent cost model; no figure matching attempted; substitute property claims all passed".to_string()
        } else {
            format!("independent cost model; substitute claims failing: {}", failed.join(", "))
        };
        let status = if failed.is_empty() { Status::Pass } else { Status::Fail };
        checks.push(ClaimCheck { claim_id: id.into(), description: description.into(), status, observed });
    }
    checks.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
    checks
}

/// Every listed claim appears exactly once and nothing else does.
pub fn audit(checks: &[ClaimCheck]) -> Result<(), String> {
    for (id, _) in CLAIMS {
        let k = checks.iter().filter(|c| c.claim_id == id).count();
        if k != 1 {
            return Err(format!("claim {id} appears {k} times"));
        }
    }
    if let Some(c) = checks.iter().find(|c| !CLAIMS.iter().any(|(id, _)| *id == c.claim_id)) {
        return Err(format!("unlisted claim {}", c.claim_id));
    }
    Ok(())
}

pub fn markdown_report(checks: &[ClaimCheck]) -> String {
    let mut s = String::from("| claim | status | description | observed |\n|---|---|---|---|\n");
    for c in checks {
        s.push_str(&format!(
            "| {} | {} | {} | {} |\n",
            c.claim_id,
            c.status,
            c.description.replace('|', "\\|"),
            c.observed.replace('|', "\\|")
        ));
    }
    s
}

pub fn json_report(checks: &[ClaimCheck]) -> String {
    serde_json::to_string_pretty(checks).expect("claims serialize")
}
