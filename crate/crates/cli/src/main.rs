use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use qarith::analysis;
use qarith::catalog::{self, OpSpec};
use qarith::claims::{self, Status};
use qarith::physical::PhysicalParams;
use qarith::sweep::{self, Format};
use qarith::verify::DEFAULT_SEED;

#[derive(Parser)]
#[command(name = "qarith", version, about = "Quantum arithmetic circuits: verification, resource sweeps, Pareto frontiers and fits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Grid {
    /// n_min * 2^(k/4), rounded and deduplicated.
    Log,
    /// Powers of two.
    Pow2,
}

#[derive(Clone, Copy, ValueEnum)]
enum FitMode {
    Slope,
    Tipping,
    Window,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Markdown,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print every (op_class, algorithm) pair with its parameter slots.
    List,
    /// Check circuits against classical oracles for every width up to --n-max.
    Verify {
        #[arg(long)]
        op_class: String,
        /// Algorithm; lists (`A,B`) and ranges (`LYYWindowed(1..3)`) allowed.
        #[arg(long)]
        algo: String,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Resource counts and single-factory estimates over a grid of widths.
    Sweep {
        #[arg(long)]
        op_class: String,
        #[arg(long)]
        algo: String,
        #[arg(long)]
        n_min: u64,
        #[arg(long)]
        n_max: u64,
        #[arg(long, value_enum, default_value = "log")]
        grid: Grid,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutFormat,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Physical parameter file (`key = value` lines).
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Space-time frontier over the number of T factories at one width.
    Pareto {
        #[arg(long)]
        op_class: String,
        #[arg(long)]
        algo: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Slope, tipping-point or window-model fit of a sweep CSV.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: FitMode,
    },
    /// Run the acceptance claims and print a report.
    Claims {
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "markdown")]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated claim ids; all when omitted.
        #[arg(long)]
        only: Option<String>,
    },
}

fn load_params(path: Option<&Path>) -> Result<PhysicalParams> {
    match path {
        None => Ok(PhysicalParams::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(PhysicalParams::parse_config(&text)?)
        }
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        None => Box::new(BufWriter::new(io::stdout().lock())),
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
    })
}

fn cmd_list() -> Result<bool> {
    let mut out = io::stdout().lock();
    for e in catalog::catalog() {
        writeln!(out, "{}\t{}\t{}", e.op_class, e.algorithm, e.params)?;
    }
    Ok(true)
}

fn cmd_verify(op_class: &str, algo: &str, n_min: Option<usize>, n_max: usize, seed: u64) -> Result<bool> {
    let specs = OpSpec::parse_many(op_class, algo)?;
    for spec in &specs {
        let limit = catalog::verify_limit(spec);
        if n_max > limit {
            bail!("{spec}: n_max {n_max} exceeds the verification limit {limit}");
        }
    }
    for spec in &specs {
        let lo = n_min.unwrap_or(1).max(catalog::min_width(spec));
        for n in lo..=n_max {
            let report = catalog::verify(spec, n, seed)?;
            println!("{report}");
            if !report.passed() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn grid_of(grid: Grid, n_min: u64, n_max: u64) -> Result<Vec<u64>> {
    match grid {
        Grid::Log => Ok(analysis::log_grid(n_min, n_max)?),
        Grid::Pow2 => {
            let g = analysis::pow2_grid(n_min, n_max);
            if g.is_empty() {
                bail!("no power of two in {n_min}..={n_max}");
            }
            Ok(g)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::List => cmd_list(),
        Command::Verify { op_class, algo, n_max, n_min, seed } => cmd_verify(&op_class, &algo, n_min, n_max, seed),
        Command::Sweep { op_class, algo, n_min, n_max, grid, format, out, params } => (|| {
            let params = load_params(params.as_deref())?;
            let specs = OpSpec::parse_many(&op_class, &algo)?;
            let grid = grid_of(grid, n_min, n_max)?;
            let records = sweep::run_sweep(&specs, &grid, &params)?;
            let mut w = open_out(out.as_deref())?;
            sweep::write_records(&records, format.into(), &mut w)?;
            w.flush()?;
            Ok(true)
        })(),
        Command::Pareto { op_class, algo, n, format, out, params } => (|| {
            let params = load_params(params.as_deref())?;
            let spec = OpSpec::parse(&op_class, &algo)?;
            let records = sweep::pareto_records(&spec, n, &params)?;
            let mut w = open_out(out.as_deref())?;
            sweep::write_records(&records, format.into(), &mut w)?;
            w.flush()?;
            Ok(true)
        })(),
        Command::Fit { input, mode } => (|| {
            let file = File::open(&input).with_context(|| format!("opening {}", input.display()))?;
            let records = sweep::read_csv(file)?;
            match mode {
                FitMode::Slope => {
                    for f in sweep::fit_slopes(&records)? {
                        println!("{}\tslope {:.6}\tintercept {:.6}\tpoints {}", f.label, f.slope, f.intercept, f.points);
                    }
                }
                FitMode::Tipping => {
                    for t in sweep::fit_tipping(&records)? {
                        let n = t.n.map_or("none".to_string(), |n| n.to_string());
                        println!("{} below {}: {n}", t.challenger, t.baseline);
                    }
                }
                FitMode::Window => {
                    let f = sweep::fit_window(&records)?;
                    println!("c1 {:.6e}\tc2 {:.6e}", f.c1, f.c2);
                    for (n, predicted, observed) in f.per_n {
                        println!("n {n}\tpredicted w {predicted}\tobserved argmin w {observed}");
                    }
                }
            }
            Ok(true)
        })(),
        Command::Claims { params, seed, format, out, only } => (|| {
            let params = load_params(params.as_deref())?;
            let checks = match only {
                None => claims::run_claims(&params, seed),
                Some(ids) => {
                    let ids: Vec<&str> = ids.split(',').map(str::trim).collect();
                    if let Some(bad) = ids.iter().find(|id| !claims::CLAIMS.iter().any(|c| c.0 == **id)) {
                        bail!("unknown claim id '{bad}'");
                    }
                    claims::run_selected(&params, seed, &ids)
                }
            };
            let text = match format {
                ReportFormat::Markdown => claims::markdown_report(&checks),
                ReportFormat::Json => claims::json_report(&checks) + "\n",
            };
            let mut w = open_out(out.as_deref())?;
            w.write_all(text.as_bytes())?;
            w.flush()?;
            Ok(checks.iter().all(|c| c.status != Status::Fail))
        })(),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
