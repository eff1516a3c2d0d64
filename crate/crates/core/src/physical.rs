//! Simplified surface-code cost model: code distance selection, a 15-to-1
//! T-factory, physical qubit and runtime estimates, and the space-time
//! Pareto frontier over the number of factories.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::resources::LogicalCounts;

pub const MAX_DISTANCE: u32 = 51;
/// Upper bound on factory counts explored by [`pareto_frontier`].
pub const MAX_FACTORIES: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhysicalError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no code distance up to {MAX_DISTANCE} meets the logical error budget")]
    NoDistance,
    #[error("no factory design meets the per-T-state error budget")]
    NoFactory,
    #[error("a circuit with T gates needs at least one factory")]
    ZeroFactories,
    #[error("config line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Rule mapping algorithm qubits to logical tiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Layout {
    /// `2Q + ceil(sqrt(8Q)) + 1`.
    Psspc,
    /// One tile per qubit.
    Dense,
}

impl Layout {
    pub fn logical_tiles(self, q: u64) -> u64 {
        match self {
            Layout::Psspc => 2 * q + (8.0 * q as f64).sqrt().ceil() as u64 + 1,
            Layout::Dense => q,
        }
    }
}

impl FromStr for Layout {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "psspc" => Ok(Layout::Psspc),
            "dense" => Ok(Layout::Dense),
            _ => Err(format!("unknown layout '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub p_phys: f64,
    pub p_threshold: f64,
    pub prefactor_a: f64,
    /// Seconds per code cycle; a logical step at distance d takes d cycles.
    pub t_cycle_factor: f64,
    /// Split evenly between logical errors, T states and rotation synthesis.
    pub error_budget: f64,
    pub layout: Layout,
    /// Logical tiles occupied by one distillation unit.
    pub factory_tiles: u64,
    /// Duration of one distillation round, in units of d cycles.
    pub factory_cycles: u64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams {
            p_phys: 1e-3,
            p_threshold: 1e-2,
            prefactor_a: 0.03,
            t_cycle_factor: 6.0 * 100e-9,
            error_budget: 1e-3,
            layout: Layout::Psspc,
            factory_tiles: 16,
            factory_cycles: 11,
        }
    }
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<(), PhysicalError> {
        let bad = |m: &str| Err(PhysicalError::InvalidParams(m.to_string()));
        if !(self.p_phys > 0.0 && self.p_phys < self.p_threshold) {
            return bad("need 0 < p_phys < p_threshold");
        }
        if !(self.error_budget > 0.0 && self.error_budget < 1.0) {
            return bad("error_budget must lie in (0, 1)");
        }
        if !(self.prefactor_a > 0.0 && self.t_cycle_factor > 0.0) {
            return bad("prefactor_a and t_cycle_factor must be positive");
        }
        if self.factory_tiles == 0 || self.factory_cycles == 0 {
            return bad("factory_tiles and factory_cycles must be positive");
        }
        Ok(())
    }

    /// Each of the three error shares.
    pub fn budget_share(&self) -> f64 {
        self.error_budget / 3.0
    }

    /// Logical error of one tile over one logical cycle at distance `d`.
    pub fn logical_error_rate(&self, d: u32) -> f64 {
        self.prefactor_a * (self.p_phys / self.p_threshold).powf((d as f64 + 1.0) / 2.0)
    }

    /// Parses flat `key = value` lines; `#` starts a comment. Keys not
    /// mentioned keep their defaults.
    pub fn parse_config(text: &str) -> Result<Self, PhysicalError> {
        let mut p = PhysicalParams::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |reason: String| PhysicalError::Parse { line: i + 1, reason };
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected key = value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let num = || value.parse::<f64>().map_err(|_| err(format!("bad number '{value}'")));
            let int = || value.parse::<u64>().map_err(|_| err(format!("bad integer '{value}'")));
            match key {
                "p_phys" => p.p_phys = num()?,
                "p_threshold" => p.p_threshold = num()?,
                "prefactor_a" => p.prefactor_a = num()?,
                "t_cycle_factor" => p.t_cycle_factor = num()?,
                "error_budget" => p.error_budget = num()?,
                "layout" => p.layout = value.parse().map_err(err)?,
                "factory_tiles" => p.factory_tiles = int()?,
                "factory_cycles" => p.factory_cycles = int()?,
                _ => return Err(err(format!("unknown key '{key}'"))),
            }
        }
        p.validate()?;
        Ok(p)
    }
}

fn odd_distances() -> impl Iterator<Item = u32> {
    (1..=MAX_DISTANCE).step_by(2)
}

/// Smallest odd `d` with `a (p/p_th)^((d+1)/2) * qubits * depth` within the
/// logical share of the budget.
pub fn required_code_distance(p: &PhysicalParams, logical_qubits: u64, logical_depth: u64) -> Result<u32, PhysicalError> {
    p.validate()?;
    let volume = logical_qubits as f64 * logical_depth as f64;
    odd_distances()
        .find(|&d| p.logical_error_rate(d) * volume <= p.budget_share())
        .ok_or(PhysicalError::NoDistance)
}

/// 15-to-1 distillation, one level or two cascaded levels. In the
/// two-level form 15 first-level units at `inner_distance` feed one
/// output unit at `distance`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FactorySpec {
    pub levels: u32,
    pub distance: u32,
    /// Zero for a single level.
    pub inner_distance: u32,
    pub output_error: f64,
    pub factory_qubits: u64,
    /// Seconds per produced T state.
    pub factory_duration: f64,
}

pub fn distillation_output(p_in: f64) -> f64 {
    35.0 * p_in.powi(3)
}

impl PhysicalParams {
    /// Logical failure probability of one distillation unit run at `d`.
    fn unit_error(&self, d: u32) -> f64 {
        self.logical_error_rate(d) * (self.factory_tiles * self.factory_cycles * d as u64) as f64
    }

    fn unit_qubits(&self, d: u32) -> u64 {
        self.factory_tiles * 2 * (d as u64).pow(2)
    }

    fn unit_duration(&self, d: u32) -> f64 {
        (self.factory_cycles * d as u64) as f64 * self.t_cycle_factor
    }
}

/// Cheapest factory whose output error, including its own logical errors,
/// stays within the per-T-state share of the budget. Logical errors of the
/// first level are distilled again by the second.
pub fn design_factory(p: &PhysicalParams, t_count: u64) -> Result<FactorySpec, PhysicalError> {
    p.validate()?;
    let per_t = p.budget_share() / t_count.max(1) as f64;
    let raw = distillation_output(p.p_phys);
    if raw < per_t {
        if let Some(d) = odd_distances().find(|&d| raw + p.unit_error(d) <= per_t) {
            return Ok(FactorySpec {
                levels: 1,
                distance: d,
                inner_distance: 0,
                output_error: raw + p.unit_error(d),
                factory_qubits: p.unit_qubits(d),
                factory_duration: p.unit_duration(d),
            });
        }
    }
    for d2 in odd_distances() {
        for d1 in odd_distances().take_while(|&d1| d1 <= d2) {
            let out = distillation_output(raw + p.unit_error(d1)) + p.unit_error(d2);
            if out <= per_t {
                return Ok(FactorySpec {
                    levels: 2,
                    distance: d2,
                    inner_distance: d1,
                    output_error: out,
                    factory_qubits: 15 * p.unit_qubits(d1) + p.unit_qubits(d2),
                    factory_duration: p.unit_duration(d1) + p.unit_duration(d2),
                });
            }
        }
    }
    Err(PhysicalError::NoFactory)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LimitingFactor {
    DepthLimited,
    TLimited,
}

impl fmt::Display for LimitingFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitingFactor::DepthLimited => "depth-limited",
            LimitingFactor::TLimited => "t-limited",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalEstimate {
    pub code_distance: u32,
    pub logical_tiles: u64,
    pub physical_qubits: u64,
    pub runtime: f64,
    pub num_factories: u64,
    pub limiting_factor: LimitingFactor,
}

/// Cost at a fixed factory count. The distance must cover every logical
/// cycle of the actual runtime, which grows when T states are the
/// bottleneck.
pub fn estimate(counts: &LogicalCounts, p: &PhysicalParams, num_factories: u64) -> Result<PhysicalEstimate, PhysicalError> {
    p.validate()?;
    if num_factories == 0 && counts.t_count > 0 {
        return Err(PhysicalError::ZeroFactories);
    }
    let factory = if counts.t_count > 0 { Some(design_factory(p, counts.t_count)?) } else { None };
    let tiles = p.layout.logical_tiles(counts.qubits.max(1));
    let t_time = factory.map_or(0.0, |f| counts.t_count as f64 / num_factories as f64 * f.factory_duration);
    for d in odd_distances() {
        let cycle = d as f64 * p.t_cycle_factor;
        let depth_time = counts.depth.max(1) as f64 * cycle;
        let runtime = depth_time.max(t_time);
        let cycles = runtime / cycle;
        if p.logical_error_rate(d) * tiles as f64 * cycles <= p.budget_share() {
            let factory_qubits = factory.map_or(0, |f| num_factories * f.factory_qubits);
            return Ok(PhysicalEstimate {
                code_distance: d,
                logical_tiles: tiles,
                physical_qubits: tiles * 2 * (d as u64).pow(2) + factory_qubits,
                runtime,
                num_factories: if factory.is_some() { num_factories } else { 0 },
                limiting_factor: if t_time > depth_time { LimitingFactor::TLimited } else { LimitingFactor::DepthLimited },
            });
        }
    }
    Err(PhysicalError::NoDistance)
}

/// Estimates for 1, 2, ... factories up to the first depth-limited count,
/// reduced to the non-dominated points and sorted by runtime.
pub fn pareto_frontier(counts: &LogicalCounts, p: &PhysicalParams) -> Result<Vec<PhysicalEstimate>, PhysicalError> {
    if counts.t_count == 0 {
        return Ok(vec![estimate(counts, p, 0)?]);
    }
    let mut all = Vec::new();
    for f in 1..=MAX_FACTORIES {
        let e = estimate(counts, p, f)?;
        all.push(e);
        if e.limiting_factor == LimitingFactor::DepthLimited {
            break;
        }
    }
    Ok(non_dominated(all))
}

/// Keeps points that no other point beats on both runtime and qubits.
pub fn non_dominated(mut points: Vec<PhysicalEstimate>) -> Vec<PhysicalEstimate> {
    points.sort_by(|a, b| a.runtime.total_cmp(&b.runtime).then(a.physical_qubits.cmp(&b.physical_qubits)));
    let mut out: Vec<PhysicalEstimate> = Vec::new();
    for e in points {
        if out.last().is_none_or(|l| e.physical_qubits < l.physical_qubits) {
            if out.last().is_some_and(|l| l.runtime == e.runtime) {
                continue;
            }
            out.push(e);
        }
    }
    out
}
