//! Sweeps over the slowdown target and over model grids, with Pareto
//! filtering of the space/time trade-off.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assembler::{assemble, ArchitecturePlan, AssemblyConfig};
use crate::error::{Error, Result};

/// Multiplicative step of the default slowdown grid: ten points per decade.
pub const GRID_RATIO: f64 = 1.2589254117941673; // 10^(1/10)

/// First point of the default slowdown grid.
pub const GRID_START: f64 = 0.2;

/// Safety cap on auto-extension.
const BETA_CAP: f64 = 1e6;

/// A slowdown grid: explicit points, optionally auto-extended past the last
/// one (ten points per decade) until the factory bottoms out at a single
/// top-level unit.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaGrid {
    /// Points to sweep, ascending.
    pub points: Vec<f64>,
    /// Keep extending past the last point until a terminal plan appears.
    pub auto_extend: bool,
}

impl BetaGrid {
    /// The default grid: starts at 0.2 and extends ten points per decade
    /// until the factory is down to one top-level unit.
    pub fn auto() -> Self {
        BetaGrid {
            points: vec![GRID_START],
            auto_extend: true,
        }
    }

    /// A fixed grid, swept exactly as given.
    pub fn explicit(points: Vec<f64>) -> Self {
        BetaGrid {
            points,
            auto_extend: false,
        }
    }

    /// Parse a `lo:hi:scale` range. `log` walks ten points per decade from
    /// `lo` while staying at or below `hi`; `lin` places eleven evenly
    /// spaced points from `lo` to `hi` inclusive.
    pub fn parse(spec: &str) -> Result<Self> {
        let invalid = |message: String| Error::InvalidConfig {
            path: "beta-grid".into(),
            message,
        };
        let parts: Vec<&str> = spec.split(':').collect();
        let [lo, hi, scale] = parts.as_slice() else {
            return Err(invalid(format!("expected lo:hi:scale, got {spec:?}")));
        };
        let lo: f64 = lo
            .parse()
            .map_err(|_| invalid(format!("bad lower bound {lo:?}")))?;
        let hi: f64 = hi
            .parse()
            .map_err(|_| invalid(format!("bad upper bound {hi:?}")))?;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(invalid(format!("need 0 < lo <= hi, got {lo}:{hi}")));
        }
        let points = match *scale {
            "log" => {
                let mut pts = Vec::new();
                let mut b = lo;
                while b <= hi * (1.0 + 1e-9) {
                    pts.push(b);
                    b *= GRID_RATIO;
                }
                pts
            }
            "lin" => (0..=10)
                .map(|k| lo + (hi - lo) * f64::from(k) / 10.0)
                .collect(),
            other => return Err(invalid(format!("scale must be log or lin, got {other:?}"))),
        };
        Ok(BetaGrid::explicit(points))
    }
}

/// One point of a slowdown sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    /// Slowdown this point targeted.
    pub beta_target: f64,
    /// The assembled plan, absent when this target is infeasible.
    pub plan: Option<ArchitecturePlan>,
    /// Why the point is infeasible, when it is.
    pub error: Option<String>,
    /// Whether the point survives Pareto filtering on (space, runtime).
    pub pareto: bool,
}

impl SweepPoint {
    fn feasible(beta_target: f64, plan: ArchitecturePlan) -> Self {
        SweepPoint {
            beta_target,
            plan: Some(plan),
            error: None,
            pareto: false,
        }
    }

    fn infeasible(beta_target: f64, error: &Error) -> Self {
        SweepPoint {
            beta_target,
            plan: None,
            error: Some(error.to_string()),
            pareto: false,
        }
    }
}

/// A plan past which slowing down further cannot shrink the factory: the top
/// level is already a single unit (or there is no factory at all).
fn terminal(plan: &ArchitecturePlan) -> bool {
    plan.levels.last().is_none_or(|top| top.units == 1)
}

/// Sweep the slowdown target over a grid, sequentially and in order.
/// Infeasible points are recorded, not fatal; configuration errors abort.
pub fn beta_sweep(cfg: &AssemblyConfig, grid: &BetaGrid) -> Result<Vec<SweepPoint>> {
    let mut points = Vec::new();
    let mut idx = 0;
    let mut last_beta = None;
    loop {
        let beta = if idx < grid.points.len() {
            grid.points[idx]
        } else if grid.auto_extend {
            match last_beta {
                Some(b) => b * GRID_RATIO,
                None => break,
            }
        } else {
            break;
        };
        idx += 1;
        if beta > BETA_CAP {
            break;
        }
        last_beta = Some(beta);

        let mut point_cfg = cfg.clone();
        point_cfg.optimizer.beta = beta;
        match assemble(&point_cfg) {
            Ok(plan) => {
                let stop = grid.auto_extend && terminal(&plan);
                points.push(SweepPoint::feasible(beta, plan));
                if stop {
                    break;
                }
            }
            Err(err) if err.exit_code() == 3 => {
                points.push(SweepPoint::infeasible(beta, &err));
            }
            Err(err) => return Err(err),
        }
    }
    for i in pareto_filter(&points) {
        points[i].pareto = true;
    }
    Ok(points)
}

/// Indices of the Pareto-optimal feasible points, sorted by runtime
/// ascending (and therefore space strictly descending). A point is kept when
/// no other point is at least as good on both space and runtime and strictly
/// better on one; exact ties keep only the lowest slowdown target.
pub fn pareto_filter(points: &[SweepPoint]) -> Vec<usize> {
    let plans: Vec<(usize, u64, f64, f64)> = points
        .iter()
        .enumerate()
        .filter_map(|(i, p)| {
            p.plan
                .as_ref()
                .map(|plan| (i, plan.s_physical, plan.r_seconds, p.beta_target))
        })
        .collect();
    let mut front: Vec<usize> = Vec::new();
    for &(i, s, r, beta) in &plans {
        let mut keep = true;
        for &(j, s2, r2, beta2) in &plans {
            if i == j {
                continue;
            }
            let dominates = s2 <= s && r2 <= r && (s2 < s || r2 < r);
            let tie_loses = s2 == s && r2 == r && beta2 < beta;
            if dominates || tie_loses {
                keep = false;
                break;
            }
        }
        if keep {
            front.push(i);
        }
    }
    front.sort_by(|&a, &b| {
        let ra = points[a].plan.as_ref().map(|p| p.r_seconds).unwrap();
        let rb = points[b].plan.as_ref().map(|p| p.r_seconds).unwrap();
        ra.partial_cmp(&rb).unwrap()
    });
    front
}

/// One cell of a model grid: a label (key/value pairs for reporting) and the
/// full configuration to sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    /// Reporting key, e.g. `[("t_count", 1e9), ("logical_qubits", 1e3)]`.
    pub key: Vec<(String, f64)>,
    /// Configuration of this cell.
    pub config: AssemblyConfig,
}

/// A swept cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSweep {
    /// The cell's reporting key.
    pub key: Vec<(String, f64)>,
    /// Sweep points of this cell.
    pub points: Vec<SweepPoint>,
}

/// Sweep every cell of a grid in parallel (cells are independent; each
/// cell's slowdown sweep stays sequential). Results come back in cell
/// order regardless of scheduling.
pub fn grid_sweep(cells: &[GridCell], grid: &BetaGrid) -> Result<Vec<CellSweep>> {
    cells
        .par_iter()
        .map(|cell| {
            beta_sweep(&cell.config, grid).map(|points| CellSweep {
                key: cell.key.clone(),
                points,
            })
        })
        .collect()
}
