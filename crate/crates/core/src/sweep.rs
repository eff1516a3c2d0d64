//! Sweep records, their CSV/JSON forms, the parallel sweep runner and the
//! fits applied to sweep files.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{self, AnalysisError, SweepSeries, WindowSample};
use crate::catalog::{self, Algorithm, CatalogError, OpSpec};
use crate::modexp::ModExpAlgo;
use crate::physical::{self, PhysicalError, PhysicalEstimate, PhysicalParams};
use crate::resources::LogicalCounts;
use crate::ArithError;

pub const CSV_HEADER: &str = "op_class,algorithm,n,logical_qubits,t_count,toffoli_count,cnot_count,rotation_count,depth,t_depth,code_distance,physical_qubits,runtime_seconds,num_factories";

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Physical(#[from] PhysicalError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Input(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub op_class: String,
    pub algorithm: String,
    pub n: u64,
    pub logical_qubits: u64,
    pub t_count: u64,
    pub toffoli_count: u64,
    pub cnot_count: u64,
    pub rotation_count: u64,
    pub depth: u64,
    pub t_depth: u64,
    pub code_distance: u32,
    pub physical_qubits: u64,
    pub runtime_seconds: f64,
    pub num_factories: u64,
}

impl SweepRecord {
    pub fn new(spec: &OpSpec, n: usize, c: &LogicalCounts, e: &PhysicalEstimate) -> Self {
        SweepRecord {
            op_class: spec.op_class().to_string(),
            algorithm: spec.algorithm_name(),
            n: n as u64,
            logical_qubits: c.qubits,
            t_count: c.t_count,
            toffoli_count: c.toffoli_count,
            cnot_count: c.cnot_count,
            rotation_count: c.rotation_count,
            depth: c.depth,
            t_depth: c.t_depth,
            code_distance: e.code_distance,
            physical_qubits: e.physical_qubits,
            runtime_seconds: e.runtime,
            num_factories: e.num_factories,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format '{s}' (expected csv or json)")),
        }
    }
}

/// Lowered counts with synthesis precision drawn from the budget.
pub fn counts_for(spec: &OpSpec, n: usize, params: &PhysicalParams) -> Result<LogicalCounts, SweepError> {
    Ok(catalog::logical_counts(spec, n, params.budget_share())?)
}

/// One record at the single-factory estimate (no factory for T-free
/// circuits).
pub fn sweep_point(spec: &OpSpec, n: usize, params: &PhysicalParams) -> Result<SweepRecord, SweepError> {
    let c = counts_for(spec, n, params)?;
    let e = physical::estimate(&c, params, u64::from(c.t_count > 0))?;
    Ok(SweepRecord::new(spec, n, &c, &e))
}

/// Every (spec, n) pair, evaluated in parallel, returned spec-major in grid
/// order.
pub fn run_sweep(specs: &[OpSpec], grid: &[u64], params: &PhysicalParams) -> Result<Vec<SweepRecord>, SweepError> {
    let jobs: Vec<(OpSpec, u64)> = specs.iter().flat_map(|s| grid.iter().map(move |&n| (*s, n))).collect();
    jobs.par_iter().map(|(s, n)| sweep_point(s, *n as usize, params)).collect()
}

/// Frontier rows for one operation at width `n`.
pub fn pareto_records(spec: &OpSpec, n: usize, params: &PhysicalParams) -> Result<Vec<SweepRecord>, SweepError> {
    let c = counts_for(spec, n, params)?;
    Ok(physical::pareto_frontier(&c, params)?.iter().map(|e| SweepRecord::new(spec, n, &c, e)).collect())
}

pub fn write_records<W: Write>(records: &[SweepRecord], format: Format, mut out: W) -> Result<(), SweepError> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(CSV_HEADER.split(','))?;
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, records)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

/// Reads sweep CSV; the header must match [`CSV_HEADER`].
pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRecord>, SweepError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(SweepError::Input(format!("unexpected CSV header: {}", header.join(","))));
    }
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

/// Groups records by (op_class, algorithm) in first-appearance order.
fn groups(records: &[SweepRecord]) -> Vec<((String, String), Vec<&SweepRecord>)> {
    let mut out: Vec<((String, String), Vec<&SweepRecord>)> = Vec::new();
    for r in records {
        let key = (r.op_class.clone(), r.algorithm.clone());
        match out.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(r),
            None => out.push((key, vec![r])),
        }
    }
    out
}

fn t_series(label: &str, rows: &[&SweepRecord]) -> Result<SweepSeries, SweepError> {
    let mut pts: Vec<(u64, f64)> = rows.iter().map(|r| (r.n, r.t_count as f64)).collect();
    pts.sort_by_key(|p| p.0);
    pts.dedup_by_key(|p| p.0);
    Ok(SweepSeries::new(label, pts)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    pub label: String,
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

/// Power-law fit of T-count against n for each algorithm in the file.
pub fn fit_slopes(records: &[SweepRecord]) -> Result<Vec<SlopeFit>, SweepError> {
    groups(records)
        .into_iter()
        .map(|((op, algo), rows)| {
            let label = format!("{op}/{algo}");
            let s = t_series(&label, &rows)?;
            let (slope, intercept) = analysis::fit_power_law(&s)?;
            Ok(SlopeFit { label, slope, intercept, points: s.points.len() })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tipping {
    pub baseline: String,
    pub challenger: String,
    /// First n from which the challenger's T-count stays below the baseline's.
    pub n: Option<u64>,
}

/// Tipping points between the first two algorithms in the file, in both
/// directions, over their common grid.
pub fn fit_tipping(records: &[SweepRecord]) -> Result<Vec<Tipping>, SweepError> {
    let g = groups(records);
    if g.len() != 2 {
        return Err(SweepError::Input(format!("tipping needs exactly two algorithms, found {}", g.len())));
    }
    let label = |k: &(String, String)| format!("{}/{}", k.0, k.1);
    let (a, b) = (t_series(&label(&g[0].0), &g[0].1)?, t_series(&label(&g[1].0), &g[1].1)?);
    let common: Vec<u64> = a.grid().into_iter().filter(|n| b.grid().contains(n)).collect();
    let restrict = |s: &SweepSeries| {
        SweepSeries::new(s.label.clone(), s.points.iter().copied().filter(|p| common.contains(&p.0)).collect())
    };
    let (a, b) = (restrict(&a)?, restrict(&b)?);
    Ok(vec![
        Tipping { baseline: a.label.clone(), challenger: b.label.clone(), n: analysis::find_tipping_point(&a, &b)? },
        Tipping { baseline: b.label.clone(), challenger: a.label.clone(), n: analysis::find_tipping_point(&b, &a)? },
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowFit {
    pub c1: f64,
    pub c2: f64,
    /// (n, predicted optimal w, empirical argmin w) per width in the file.
    pub per_n: Vec<(u64, u64, u64)>,
}

fn window_of(algorithm: &str) -> Option<u64> {
    match OpSpec::parse("modexp", algorithm).ok()?.algo {
        Algorithm::ModExp(ModExpAlgo::LyyWindowed(w)) => Some(w as u64),
        _ => None,
    }
}

/// Fits the window-cost model to every `LYYWindowed(w)` row.
pub fn fit_window(records: &[SweepRecord]) -> Result<WindowFit, SweepError> {
    let samples: Vec<WindowSample> = records
        .iter()
        .filter(|r| r.op_class == "modexp")
        .filter_map(|r| Some(WindowSample { n: r.n, w: window_of(&r.algorithm)?, cost: r.t_count as f64 }))
        .collect();
    let (c1, c2) = analysis::fit_window_model(&samples)?;
    let mut ns: Vec<u64> = samples.iter().map(|s| s.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let per_n = ns
        .into_iter()
        .map(|n| {
            let at_n = samples.iter().filter(|s| s.n == n);
            let w_max = at_n.clone().map(|s| s.w).max().unwrap_or(1);
            let best = at_n.min_by(|a, b| a.cost.total_cmp(&b.cost)).map_or(1, |s| s.w);
            (n, analysis::predicted_window(c1, c2, n, w_max), best)
        })
        .collect();
    Ok(WindowFit { c1, c2, per_n })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(op: &str, a: &str) -> OpSpec {
        OpSpec::parse(op, a).unwrap()
    }

    #[test]
    fn csv_header_and_round_trip() {
        let p = PhysicalParams::default();
        let recs = run_sweep(&[spec("inplace_adder", "TTK")], &[3, 4, 5], &p).unwrap();
        let mut buf = Vec::new();
        write_records(&recs, Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(text.lines().count(), 4);
        assert_eq!(read_csv(&buf[..]).unwrap(), recs);
    }

    #[test]
    fn json_mirrors_csv_fields() {
        let p = PhysicalParams::default();
        let recs = run_sweep(&[spec("subtractor", "CDKM")], &[3], &p).unwrap();
        let mut buf = Vec::new();
        write_records(&recs, Format::Json, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let obj = v.as_array().unwrap()[0].as_object().unwrap();
        let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        let mut want: Vec<&str> = CSV_HEADER.split(',').collect();
        want.sort_unstable();
        let mut got = keys.clone();
        got.sort_unstable();
        assert_eq!(got, want);
    }

    #[test]
    fn bad_header_rejected() {
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn exact_power_law_file() {
        let mk = |n: u64| SweepRecord {
            op_class: "x".into(),
            algorithm: "y".into(),
            n,
            logical_qubits: 1,
            t_count: n * n * n,
            toffoli_count: 0,
            cnot_count: 0,
            rotation_count: 0,
            depth: 1,
            t_depth: 1,
            code_distance: 3,
            physical_qubits: 1,
            runtime_seconds: 1.0,
            num_factories: 1,
        };
        let fits = fit_slopes(&[mk(4), mk(8), mk(16), mk(32)]).unwrap();
        assert!((fits[0].slope - 3.0).abs() < 1e-12);
        assert!(fit_slopes(&[mk(4), mk(8)]).is_err());
    }

    #[test]
    fn ordered_parallel_output() {
        let p = PhysicalParams::default();
        let g = analysis::log_grid(3, 40).unwrap();
        let a = run_sweep(&[spec("inplace_adder", "Gidney"), spec("multiplier", "Schoolbook")], &g, &p).unwrap();
        let b = run_sweep(&[spec("inplace_adder", "Gidney"), spec("multiplier", "Schoolbook")], &g, &p).unwrap();
        assert_eq!(a, b);
        let ns: Vec<u64> = a[..g.len()].iter().map(|r| r.n).collect();
        assert_eq!(ns, g);
        assert_eq!(a[g.len()].algorithm, "Schoolbook");
    }
}
