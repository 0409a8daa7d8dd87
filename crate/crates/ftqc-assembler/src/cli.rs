//! Command-line interface: assemble one architecture, sweep the slowdown
//! trade-off, or sweep a built-in model grid. Reports go to JSON (and
//! optionally CSV); a one-screen summary goes to stdout.
//!
//! Exit codes: 0 on success, 2 for invalid input, 3 when the problem is
//! infeasible within its caps, 1 for anything else.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::assembler::{assemble, ArchitecturePlan, AssemblyConfig};
use crate::config::{parse_config, RunConfig};
use crate::error::{Error, Result};
use crate::preset;
use crate::report;
use crate::sweep::{beta_sweep, grid_sweep, BetaGrid, CellSweep, SweepPoint};

/// Environment variable capping the worker threads used by grid sweeps.
pub const THREADS_ENV: &str = "FTQC_ASSEMBLER_THREADS";

#[derive(Parser)]
#[command(
    name = "ftqc-assembler",
    version,
    about = "Size fault-tolerant quantum architectures: code distances, \
             distillation levels, unit counts, and the space/time frontier"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble one architecture at a single slowdown target
    Assemble {
        #[command(flatten)]
        common: CommonArgs,
        /// Override the slowdown target from the configuration
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Sweep the slowdown target and report the space/time frontier
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Grid as lo:hi:log or lo:hi:lin; default extends 0.2 upward ten
        /// points per decade until the factory bottoms out
        #[arg(long)]
        beta_grid: Option<String>,
    },
    /// Sweep a built-in model grid, one slowdown sweep per cell
    Grid {
        #[command(flatten)]
        common: CommonArgs,
        /// Which grid: 1a (workload scaling), 1b (hardware quality),
        /// 4 (slowdown trade-off)
        #[arg(long)]
        fig: String,
        /// Grid as lo:hi:log or lo:hi:lin; default as in sweep
        #[arg(long)]
        beta_grid: Option<String>,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// JSON configuration file (a report written by this tool also works)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in configuration name
    #[arg(long, default_value = "paper-2024")]
    preset: String,
    /// Directory to write reports into
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Comma-separated output formats: json,csv
    #[arg(long, default_value = "json,csv")]
    format: String,
}

struct Formats {
    json: bool,
    csv: bool,
}

impl CommonArgs {
    fn load(&self) -> Result<RunConfig> {
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            parse_config(&text)
        } else {
            preset::by_name(&self.preset)
                .map(|cfg| RunConfig::from(&cfg))
                .ok_or_else(|| Error::InvalidConfig {
                    path: "--preset".into(),
                    message: format!(
                        "unknown preset {:?}; available: {}",
                        self.preset,
                        preset::PRESET_NAMES.join(", ")
                    ),
                })
        }
    }

    fn formats(&self) -> Result<Formats> {
        let mut formats = Formats {
            json: false,
            csv: false,
        };
        for token in self.format.split(',') {
            match token.trim() {
                "json" => formats.json = true,
                "csv" => formats.csv = true,
                other => {
                    return Err(Error::InvalidConfig {
                        path: "--format".into(),
                        message: format!("unknown format {other:?}; use json,csv"),
                    })
                }
            }
        }
        Ok(formats)
    }

    fn prepare_out(&self) -> Result<()> {
        fs::create_dir_all(&self.out).map_err(|e| Error::Io {
            path: self.out.display().to_string(),
            source: e,
        })
    }

    fn write_json(&self, name: &str, value: &serde_json::Value) -> Result<PathBuf> {
        let path = self.out.join(name);
        let text = serde_json::to_string_pretty(value)?;
        write_text(&path, &text)?;
        Ok(path)
    }

    fn write_csv(&self, name: &str, key_names: &[String], cells: &[CellSweep]) -> Result<PathBuf> {
        let path = self.out.join(name);
        let mut buf = Vec::new();
        report::write_sweep_csv(&mut buf, key_names, cells)?;
        write_text(
            &path,
            std::str::from_utf8(&buf).expect("csv output is utf-8"),
        )?;
        Ok(path)
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// Insert thousands separators into an integer.
fn group(value: u64) -> String {
    let digits = value.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

fn grid_for(spec: &Option<String>) -> Result<BetaGrid> {
    match spec {
        Some(s) => BetaGrid::parse(s),
        None => Ok(BetaGrid::auto()),
    }
}

fn print_plan_summary(cfg: &AssemblyConfig, plan: &ArchitecturePlan) {
    println!(
        "architecture at slowdown target {:.4} (achieved {:.4})",
        plan.beta_target, plan.beta_achieved
    );
    println!(
        "  core:      d={}, {} logical qubits, {} physical",
        plan.d_core,
        cfg.circuit.logical_qubits,
        group(plan.core_physical.ceil() as u64)
    );
    if plan.levels.is_empty() {
        println!(
            "  factory:   none; direct preparation at d={}",
            plan.d_injection
        );
    } else {
        let d: Vec<String> = plan.distances().iter().map(|v| v.to_string()).collect();
        let u: Vec<String> = plan.units().iter().map(|v| v.to_string()).collect();
        println!(
            "  factory:   {} levels, d=[{}], units=[{}], {} physical",
            plan.num_levels(),
            d.join(", "),
            u.join(", "),
            group(plan.msf_physical)
        );
        println!("  injection: d={}", plan.d_injection);
    }
    println!("  total:     {} physical qubits", group(plan.s_physical));
    println!(
        "  runtime:   {:.4} s ({} cycles)",
        plan.r_seconds,
        group(plan.k_cycles as u64)
    );
    println!(
        "  error:     {:.3e} of budget {:.3e} (factory {:.3e}, core idle {:.3e})",
        plan.error_total, cfg.optimizer.error_budget, plan.e_msf_total, plan.e_core_total
    );
}

fn print_sweep_summary(points: &[SweepPoint]) {
    println!(
        "{:>10}  {:>13}  {:>12}  {:>7}  plan",
        "beta", "S(physical)", "R(seconds)", "pareto"
    );
    for p in points {
        match &p.plan {
            Some(plan) => {
                let d: Vec<String> = plan.distances().iter().map(|v| v.to_string()).collect();
                let u: Vec<String> = plan.units().iter().map(|v| v.to_string()).collect();
                println!(
                    "{:>10.4}  {:>13}  {:>12.4}  {:>7}  d_core={} d=[{}] u=[{}]",
                    p.beta_target,
                    group(plan.s_physical),
                    plan.r_seconds,
                    if p.pareto { "*" } else { "" },
                    plan.d_core,
                    d.join(","),
                    u.join(","),
                );
            }
            None => println!(
                "{:>10.4}  {:>13}  {:>12}  {:>7}  {}",
                p.beta_target,
                "-",
                "-",
                "",
                p.error.as_deref().unwrap_or("infeasible"),
            ),
        }
    }
}

fn print_grid_summary(cells: &[CellSweep]) {
    for cell in cells {
        let key: Vec<String> = cell.key.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let feasible: Vec<u64> = cell
            .points
            .iter()
            .filter_map(|p| p.plan.as_ref().map(|plan| plan.s_physical))
            .collect();
        let span = match (feasible.iter().min(), feasible.iter().max()) {
            (Some(lo), Some(hi)) => format!("S in [{}, {}]", group(*lo), group(*hi)),
            _ => "no feasible points".into(),
        };
        println!(
            "cell [{}]: {} points, {}",
            key.join(", "),
            cell.points.len(),
            span
        );
    }
}

fn worker_pool() -> Result<Option<rayon::ThreadPool>> {
    match std::env::var(THREADS_ENV) {
        Ok(raw) => {
            let n: usize =
                raw.parse()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| Error::InvalidConfig {
                        path: THREADS_ENV.into(),
                        message: format!("must be a positive integer, got {raw:?}"),
                    })?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidConfig {
                    path: THREADS_ENV.into(),
                    message: e.to_string(),
                })?;
            Ok(Some(pool))
        }
        Err(_) => Ok(None),
    }
}

fn run_command(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Assemble { common, beta } => {
            let mut run_cfg = common.load()?;
            if let Some(beta) = beta {
                run_cfg.optimizer.beta = beta;
            }
            let cfg = run_cfg.to_assembly();
            let plan = assemble(&cfg)?;
            print_plan_summary(&cfg, &plan);
            let formats = common.formats()?;
            common.prepare_out()?;
            if formats.json {
                let path = common.write_json("plan.json", &report::plan_report(&run_cfg, &plan))?;
                println!("wrote {}", path.display());
            }
            if formats.csv {
                let point = SweepPoint {
                    beta_target: cfg.optimizer.beta,
                    plan: Some(plan),
                    error: None,
                    pareto: true,
                };
                let path = common.write_csv("plan.csv", &[], &report::sweep_as_cell(&[point]))?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Sweep { common, beta_grid } => {
            let run_cfg = common.load()?;
            let grid = grid_for(&beta_grid)?;
            let cfg = run_cfg.to_assembly();
            let points = beta_sweep(&cfg, &grid)?;
            print_sweep_summary(&points);
            let formats = common.formats()?;
            common.prepare_out()?;
            if formats.json {
                let path =
                    common.write_json("sweep.json", &report::sweep_report(&run_cfg, &points))?;
                println!("wrote {}", path.display());
            }
            if formats.csv {
                let path = common.write_csv("sweep.csv", &[], &report::sweep_as_cell(&points))?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Grid {
            common,
            fig,
            beta_grid,
        } => {
            let run_cfg = common.load()?;
            let base = run_cfg.to_assembly();
            let cells = preset::fig_by_name(&fig, &base).ok_or_else(|| Error::InvalidConfig {
                path: "--fig".into(),
                message: format!(
                    "unknown grid {:?}; available: {}",
                    fig,
                    preset::FIG_NAMES.join(", ")
                ),
            })?;
            let grid = grid_for(&beta_grid)?;
            let swept = match worker_pool()? {
                Some(pool) => pool.install(|| grid_sweep(&cells, &grid))?,
                None => grid_sweep(&cells, &grid)?,
            };
            print_grid_summary(&swept);
            let formats = common.formats()?;
            common.prepare_out()?;
            if formats.json {
                let path = common.write_json(
                    &format!("grid-{fig}.json"),
                    &report::grid_report(&fig, &swept),
                )?;
                println!("wrote {}", path.display());
            }
            if formats.csv {
                let key_names: Vec<String> = swept
                    .first()
                    .map(|c| c.key.iter().map(|(k, _)| k.clone()).collect())
                    .unwrap_or_default();
                let path = common.write_csv(&format!("grid-{fig}.csv"), &key_names, &swept)?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

/// Parse the process arguments, run, and return the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match run_command(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
