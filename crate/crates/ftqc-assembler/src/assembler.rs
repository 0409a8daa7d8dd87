//! End-to-end sizing of a fault-tolerant architecture: given hardware and
//! workload models plus an error budget, pick the core code distance, the
//! distillation chain shape (level count and distances), and the unit counts
//! per level, minimizing physical qubits subject to the budget and a target
//! slowdown.
//!
//! The pipeline runs in stages:
//!
//! 1. smallest core distance whose idle memory error fits the budget at the
//!    target pace,
//! 2. the error budget left for the factory, frozen at a serial reference
//!    point so faster or slower targets are sized against the same quality
//!    bar,
//! 3. best achievable first-level output error and from it the minimum
//!    number of distillation levels,
//! 4. per-level distance refinement against the factory budget,
//! 5. unit counts per level from steady-state rates, trimming top-level
//!    units while the slowdown and budget tolerances allow,
//! 6. a first-improvement local search over distance bumps that re-runs
//!    refinement and sizing per candidate and keeps strict space wins.

use serde::{Deserialize, Serialize};

use crate::chain::{self, ChainLedger, ModelSet};
use crate::circuit::{self, CircuitProfile};
use crate::error::{Error, Result, Step};
use crate::models;

/// Relative slack on budget comparisons, absorbing float noise on exact
/// boundary cases.
pub(crate) const BUDGET_REL_TOL: f64 = 1e-12;

/// Upper bound on refinement passes before declaring non-convergence.
const MAX_REFINE_PASSES: usize = 32;

/// Knobs of the optimization itself (as opposed to the physical models).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    /// Total failure probability the architecture may accumulate.
    pub error_budget: f64,
    /// Target slowdown relative to one T-layer per logical cycle; values
    /// below 1 demand speedup through parallel consumption.
    #[serde(default = "default_beta")]
    pub beta: f64,
    /// Largest code distance the search may use.
    #[serde(default = "default_max_distance")]
    pub max_distance: u32,
    /// Largest number of distillation levels the search may use.
    #[serde(default = "default_max_levels")]
    pub max_levels: u32,
    /// How far past the target pace unit trimming may slow the machine,
    /// as a ratio (1.16 allows a 16% overshoot).
    #[serde(default = "default_max_slowdown_ratio")]
    pub max_slowdown_ratio: f64,
}

fn default_beta() -> f64 {
    1.0
}
fn default_max_distance() -> u32 {
    101
}
fn default_max_levels() -> u32 {
    4
}
fn default_max_slowdown_ratio() -> f64 {
    1.16
}

impl OptimizerConfig {
    /// Validate ranges.
    pub fn validate(&self) -> Result<()> {
        if !(self.error_budget > 0.0 && self.error_budget < 1.0) {
            return Err(Error::InvalidParameter {
                name: "optimizer.error_budget",
                value: self.error_budget,
                reason: "must lie strictly between 0 and 1",
            });
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::InvalidParameter {
                name: "optimizer.beta",
                value: self.beta,
                reason: "must be positive and finite",
            });
        }
        if self.max_distance < 3 {
            return Err(Error::InvalidParameter {
                name: "optimizer.max_distance",
                value: f64::from(self.max_distance),
                reason: "must be at least 3",
            });
        }
        if self.max_levels < 1 {
            return Err(Error::InvalidParameter {
                name: "optimizer.max_levels",
                value: f64::from(self.max_levels),
                reason: "must be at least 1",
            });
        }
        if !(self.max_slowdown_ratio >= 1.0 && self.max_slowdown_ratio.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "optimizer.max_slowdown_ratio",
                value: self.max_slowdown_ratio,
                reason: "must be at least 1",
            });
        }
        Ok(())
    }
}

/// A complete assembly problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssemblyConfig {
    /// Physical and protocol models.
    pub models: ModelSet,
    /// Workload being compiled.
    pub circuit: CircuitProfile,
    /// Optimization knobs.
    pub optimizer: OptimizerConfig,
}

impl AssemblyConfig {
    /// Validate every part.
    pub fn validate(&self) -> Result<()> {
        self.models.validate()?;
        self.circuit.validate()?;
        self.optimizer.validate()
    }
}

/// One sized distillation level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelPlan {
    /// Code distance of the level.
    pub distance: u32,
    /// Number of distillation units running in parallel.
    pub units: u64,
}

/// Informational core-volume accounting attached to a plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoreAudit {
    /// Idle patch-cycles accumulated over the makespan.
    pub idle_volume: f64,
    /// Active operation volume of the workload.
    pub active_volume: f64,
    /// Failure probability if both idle and active volume decohered at the
    /// memory rate; the budgeted figure charges only the idle part, active
    /// operations being priced by their own error channels.
    pub combined_volume_error: f64,
}

/// Physical footprint split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceCost {
    /// Total physical qubits (core plus factory, rounded up once).
    pub total: u64,
    /// Core processor footprint before rounding.
    pub core: f64,
    /// Factory footprint (exact integer).
    pub msf: u64,
}

/// The assembled architecture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchitecturePlan {
    /// Slowdown the caller asked for.
    pub beta_target: f64,
    /// Slowdown the sized machine actually runs at.
    pub beta_achieved: f64,
    /// Core processor code distance.
    pub d_core: u32,
    /// Injection distance raw states are prepared at.
    pub d_injection: u32,
    /// Sized distillation levels, bottom-up (empty when direct preparation
    /// already meets the budget).
    pub levels: Vec<LevelPlan>,
    /// Error bookkeeping of the chain.
    pub ledger: ChainLedger,
    /// Per-state error budget the factory was sized against.
    pub msf_budget: f64,
    /// Total factory-induced failure probability (per-state error times
    /// T-count).
    pub e_msf_total: f64,
    /// Total core idle-memory failure probability over the makespan.
    pub e_core_total: f64,
    /// Sum of the two budgeted failure probabilities.
    pub error_total: f64,
    /// Makespan in logical cycles of the core.
    pub k_cycles: f64,
    /// Makespan in seconds.
    pub r_seconds: f64,
    /// Total physical qubits.
    pub s_physical: u64,
    /// Core footprint before rounding.
    pub core_physical: f64,
    /// Factory footprint.
    pub msf_physical: u64,
    /// Magic states per second the core demands at the target pace.
    pub demand_rate: f64,
    /// Informational volume accounting.
    pub audit: CoreAudit,
}

impl ArchitecturePlan {
    /// Number of distillation levels.
    pub fn num_levels(&self) -> u32 {
        self.levels.len() as u32
    }

    /// Level distances bottom-up.
    pub fn distances(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.distance).collect()
    }

    /// Unit counts bottom-up.
    pub fn units(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.units).collect()
    }
}

/// Unit counts plus the pace they imply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitSizing {
    /// Units per level, bottom-up.
    pub units: Vec<u64>,
    /// Achieved makespan in logical cycles.
    pub k_cycles: f64,
    /// Achieved slowdown (makespan over T-count).
    pub beta_achieved: f64,
    /// Demand rate (states per second) at the target pace.
    pub demand_rate: f64,
}

fn odd_at_least(d: u32) -> u32 {
    let d = d.max(3);
    if d.is_multiple_of(2) {
        d + 1
    } else {
        d
    }
}

fn fits(value: f64, budget: f64) -> bool {
    value <= budget * (1.0 + BUDGET_REL_TOL)
}

/// Stage 1: smallest odd core distance whose idle memory error over a
/// makespan of `ceil(beta * t_count)` cycles fits the whole error budget.
pub fn choose_core_distance(
    models_: &ModelSet,
    circuit_: &CircuitProfile,
    error_budget: f64,
    beta: f64,
    max_distance: u32,
) -> Result<u32> {
    let k1 = (beta * circuit_.t_count).ceil().max(1.0);
    let v_idle = circuit::idle_volume(circuit_, k1);
    let mut d = 3;
    while d <= max_distance {
        let e = v_idle * models::mem_error(&models_.hardware, d, d);
        if fits(e, error_budget) {
            return Ok(d);
        }
        d += 2;
    }
    Err(Error::CapExceeded {
        step: Step::CoreDistance,
        what: "core code distance",
        cap: max_distance,
    })
}

/// Stage 2: error budget left per magic state once the core has taken its
/// share.
pub fn msf_budget(error_budget: f64, e_core_total: f64, t_count: f64) -> f64 {
    (error_budget - e_core_total) / t_count
}

/// Stage 3a: the first-level distance minimizing the single-level output
/// error among distances with a positive acceptance probability; returns the
/// distance and its output error.
pub fn choose_first_level_distance(models_: &ModelSet, max_distance: u32) -> Result<(u32, f64)> {
    let mut best: Option<(u32, f64)> = None;
    let mut d = 3;
    while d <= max_distance {
        let ledger = chain::chain_errors(models_, d, &[d])?;
        if ledger.acceptance_feasible() {
            let e = ledger.e_msf;
            if best.is_none_or(|(_, be)| e < be) {
                best = Some((d, e));
            }
        }
        d += 2;
    }
    best.ok_or(Error::Infeasible {
        step: Step::FirstLevelDistance,
        detail: "no first-level distance gives a positive acceptance probability",
    })
}

/// Stage 3b: minimum number of distillation levels. Zero levels suffice when
/// direct preparation at some distance already meets the per-state budget;
/// otherwise the smallest level count whose idealized chain (best first
/// level, noiseless Cliffords above it) fits.
pub fn choose_num_levels(
    models_: &ModelSet,
    best_first_level_error: Option<f64>,
    budget: f64,
    max_levels: u32,
    max_distance: u32,
) -> Result<u32> {
    let mut d = 3;
    while d <= max_distance {
        if fits(models::prep_error(&models_.prep, d), budget) {
            return Ok(0);
        }
        d += 2;
    }
    let e_first = best_first_level_error.ok_or(Error::Infeasible {
        step: Step::LevelCount,
        detail: "distillation is required but no first level is viable",
    })?;
    for levels in 1..=max_levels {
        if fits(
            chain::ideal_tail_error(&models_.protocol, e_first, levels),
            budget,
        ) {
            return Ok(levels);
        }
    }
    Err(Error::CapExceeded {
        step: Step::LevelCount,
        what: "distillation levels",
        cap: max_levels,
    })
}

/// Stage 4: per-level distances. Levels start at the core distance and are
/// lowered one level at a time (bottom-up, repeated to a fixpoint) to the
/// smallest odd value keeping the full-chain error within the budget, every
/// level's acceptance positive, and distances non-decreasing. `floors`
/// optionally pins per-level minimum distances (used by the local search).
pub fn refine_distances(
    models_: &ModelSet,
    d_core: u32,
    num_levels: u32,
    budget: f64,
    floors: Option<&[u32]>,
) -> Result<Vec<u32>> {
    let n = num_levels as usize;
    if n == 0 {
        return Ok(Vec::new());
    }
    if let Some(f) = floors {
        assert_eq!(f.len(), n, "one floor per level");
    }
    let infeasible = Error::Infeasible {
        step: Step::DistanceRefinement,
        detail: "no monotone distance assignment fits the factory error budget",
    };
    let floor_of = |l: usize| floors.map_or(3, |f| f[l].max(3));
    if (0..n).any(|l| odd_at_least(floor_of(l)) > d_core) {
        return Err(infeasible);
    }

    let mut dist = vec![d_core; n];
    for _pass in 0..MAX_REFINE_PASSES {
        let mut changed = false;
        for l in 0..n {
            let lo = odd_at_least(floor_of(l).max(if l > 0 { dist[l - 1] } else { 3 }));
            let hi = if l + 1 < n { dist[l + 1] } else { d_core };
            let before = dist[l];
            let mut chosen = None;
            let mut d = lo;
            while d <= hi {
                dist[l] = d;
                let ledger = chain::chain_errors(models_, dist[0], &dist)?;
                if ledger.acceptance_feasible() && fits(ledger.e_msf, budget) {
                    chosen = Some(d);
                    break;
                }
                d += 2;
            }
            match chosen {
                Some(d) => {
                    dist[l] = d;
                    changed |= d != before;
                }
                None => return Err(infeasible),
            }
        }
        if !changed {
            return Ok(dist);
        }
    }
    // No fixpoint within the pass cap: accept the current assignment if it
    // still verifies, otherwise report infeasibility.
    let ledger = chain::chain_errors(models_, dist[0], &dist)?;
    if ledger.acceptance_feasible() && fits(ledger.e_msf, budget) {
        Ok(dist)
    } else {
        Err(infeasible)
    }
}

/// Stage 5: unit counts per level.
///
/// The top level is sized from raw production against the demand at the
/// target pace, then trimmed one unit at a time while the achieved makespan
/// stays within the slowdown tolerance and the total error stays within
/// budget. Lower levels are sized to feed the input consumption cascading
/// down from the top. Acceptance losses slow the machine (they stretch the
/// makespan) rather than inflate unit counts.
pub fn size_units(
    models_: &ModelSet,
    circuit_: &CircuitProfile,
    optimizer: &OptimizerConfig,
    d_core: u32,
    ledger: &ChainLedger,
) -> Result<UnitSizing> {
    let w = models_.hardware.round_seconds;
    let t = circuit_.t_count;
    let cycle = w * f64::from(d_core);
    let k_target = circuit_.t_depth.max((optimizer.beta * t).ceil()).max(1.0);
    let demand = t / (k_target * cycle);

    let n = ledger.levels.len();
    if n == 0 {
        return Ok(UnitSizing {
            units: Vec::new(),
            k_cycles: k_target,
            beta_achieved: k_target / t,
            demand_rate: demand,
        });
    }

    let protocol = &models_.protocol;
    let top = &ledger.levels[n - 1];
    if top.accept <= 0.0 || top.accept.is_nan() {
        return Err(Error::Infeasible {
            step: Step::UnitSizing,
            detail: "top level acceptance probability is not positive",
        });
    }
    let prod_top = chain::unit_production_rate(protocol, w, top.distance, 1.0);
    let k_of = |u: u64| -> f64 {
        let per_cycle = u as f64 * prod_top * top.accept * cycle;
        chain::ceil_cycles(t / per_cycle).max(k_target)
    };
    let e_mem_core = models::mem_error(&models_.hardware, d_core, d_core);
    let budget_ok = |k: f64| {
        let total = ledger.e_msf * t + circuit::idle_volume(circuit_, k) * e_mem_core;
        fits(total, optimizer.error_budget)
    };
    let k_cap = optimizer.max_slowdown_ratio * k_target * (1.0 + BUDGET_REL_TOL);

    let mut u_top = chain::required_units(demand, prod_top, 1.0);
    while u_top > 1 {
        let k_next = k_of(u_top - 1);
        if k_next <= k_cap && budget_ok(k_next) {
            u_top -= 1;
        } else {
            break;
        }
    }
    let k = k_of(u_top);

    let ratio_in_out = f64::from(protocol.inputs_per_round) / f64::from(protocol.outputs_per_round);
    let mut units = vec![0u64; n];
    units[n - 1] = u_top;
    let cons_top = chain::unit_consumption_rate(protocol, w, top.distance);
    let mut inflow = (u_top as f64 * cons_top).min(demand * ratio_in_out);
    let mut first_level_duty = 1.0;
    for l in (0..n - 1).rev() {
        let d_l = ledger.levels[l].distance;
        let prod = chain::unit_production_rate(protocol, w, d_l, 1.0);
        let u = chain::required_units(inflow, prod, 1.0);
        units[l] = u;
        let duty = (inflow / (u as f64 * prod)).min(1.0);
        if l == 0 {
            first_level_duty = duty;
        }
        let cons = chain::unit_consumption_rate(protocol, w, d_l);
        inflow = u as f64 * cons * duty;
    }
    if n == 1 {
        let supply = u_top as f64 * prod_top;
        first_level_duty = (demand / supply).min(1.0);
    }

    // Raw-state preparation attached to each first-level unit must keep up
    // with that unit's input consumption at its duty cycle.
    let d_first = ledger.levels[0].distance;
    let prep_supply = f64::from(protocol.prep_units_per_first_level_unit)
        / (f64::from(protocol.prep_cycles_per_state) * w * f64::from(ledger.d_injection));
    let prep_need = chain::unit_consumption_rate(protocol, w, d_first) * first_level_duty;
    if prep_supply < prep_need * (1.0 - chain::FLOW_REL_TOL) {
        return Err(Error::Infeasible {
            step: Step::UnitSizing,
            detail: "raw state preparation cannot keep up with the first distillation level",
        });
    }

    Ok(UnitSizing {
        units,
        k_cycles: k,
        beta_achieved: k / t,
        demand_rate: demand,
    })
}

/// Physical qubit footprint of a sized architecture. The core holds the
/// logical registers plus routing; each factory level holds its units'
/// tiles (distillation body, routing share, growth interface above the
/// first level, preparation and extra interface at the first level) plus a
/// fixed routing strip, all at the level's own patch size.
pub fn space_cost(
    protocol: &crate::models::DistillationProtocol,
    circuit_: &CircuitProfile,
    d_core: u32,
    levels: &[LevelPlan],
) -> SpaceCost {
    let q = circuit_.logical_qubits;
    let core_patch = 2.0 * f64::from(d_core) * f64::from(d_core) - 1.0;
    let core = core_patch * (2.0 * q + (8.0 * q).sqrt() + 29.0);

    let first_coeff = u64::from(
        protocol.tiles_per_unit
            + protocol.first_level_extra_tiles
            + protocol.prep_tiles_per_unit
            + protocol.routing_per_unit,
    );
    let upper_coeff = u64::from(
        protocol.tiles_per_unit + protocol.growth_tiles_per_unit + protocol.routing_per_unit,
    );
    let mut msf: u64 = 0;
    for (l, level) in levels.iter().enumerate() {
        let patch = 2 * u64::from(level.distance) * u64::from(level.distance) - 1;
        let coeff = if l == 0 { first_coeff } else { upper_coeff };
        msf += patch * (coeff * level.units + u64::from(protocol.routing_base));
    }
    let total = (core + msf as f64).ceil() as u64;
    SpaceCost { total, core, msf }
}

/// Wall-clock makespan of `k_cycles` logical cycles at distance `d_core`.
pub fn runtime_seconds(k_cycles: f64, round_seconds: f64, d_core: u32) -> f64 {
    k_cycles * round_seconds * f64::from(d_core)
}

/// A fully evaluated candidate (distances plus sizing plus audits).
struct Evaluated {
    d_core: u32,
    d_injection: u32,
    ledger: ChainLedger,
    sizing: UnitSizing,
    e_msf_total: f64,
    e_core_total: f64,
    error_total: f64,
    space: SpaceCost,
    budget_ok: bool,
    flow_ok: bool,
}

fn evaluate(
    cfg: &AssemblyConfig,
    d_core: u32,
    d_injection: u32,
    distances: &[u32],
) -> Result<Evaluated> {
    let ledger = chain::chain_errors(&cfg.models, d_injection, distances)?;
    let sizing = size_units(&cfg.models, &cfg.circuit, &cfg.optimizer, d_core, &ledger)?;
    let t = cfg.circuit.t_count;
    let e_mem_core = models::mem_error(&cfg.models.hardware, d_core, d_core);
    let e_msf_total = ledger.e_msf * t;
    let e_core_total = circuit::idle_volume(&cfg.circuit, sizing.k_cycles) * e_mem_core;
    let error_total = e_msf_total + e_core_total;
    let budget_ok = fits(error_total, cfg.optimizer.error_budget);
    let demand_achieved =
        t / (sizing.k_cycles * cfg.models.hardware.round_seconds * f64::from(d_core));
    let flow_ok = chain::steady_flow_check(
        &cfg.models.protocol,
        cfg.models.hardware.round_seconds,
        distances,
        &sizing.units,
        demand_achieved,
    );
    let levels: Vec<LevelPlan> = distances
        .iter()
        .zip(&sizing.units)
        .map(|(&distance, &units)| LevelPlan { distance, units })
        .collect();
    let space = space_cost(&cfg.models.protocol, &cfg.circuit, d_core, &levels);
    Ok(Evaluated {
        d_core,
        d_injection,
        ledger,
        sizing,
        e_msf_total,
        e_core_total,
        error_total,
        space,
        budget_ok,
        flow_ok,
    })
}

fn to_plan(cfg: &AssemblyConfig, budget: f64, ev: Evaluated) -> ArchitecturePlan {
    let levels: Vec<LevelPlan> = ev
        .ledger
        .levels
        .iter()
        .zip(&ev.sizing.units)
        .map(|(l, &units)| LevelPlan {
            distance: l.distance,
            units,
        })
        .collect();
    let idle = circuit::idle_volume(&cfg.circuit, ev.sizing.k_cycles);
    let active = circuit::active_volume(&cfg.circuit);
    let e_mem_core = models::mem_error(&cfg.models.hardware, ev.d_core, ev.d_core);
    ArchitecturePlan {
        beta_target: cfg.optimizer.beta,
        beta_achieved: ev.sizing.beta_achieved,
        d_core: ev.d_core,
        d_injection: ev.d_injection,
        levels,
        msf_budget: budget,
        e_msf_total: ev.e_msf_total,
        e_core_total: ev.e_core_total,
        error_total: ev.error_total,
        k_cycles: ev.sizing.k_cycles,
        r_seconds: runtime_seconds(
            ev.sizing.k_cycles,
            cfg.models.hardware.round_seconds,
            ev.d_core,
        ),
        s_physical: ev.space.total,
        core_physical: ev.space.core,
        msf_physical: ev.space.msf,
        demand_rate: ev.sizing.demand_rate,
        audit: CoreAudit {
            idle_volume: idle,
            active_volume: active,
            combined_volume_error: (idle + active) * e_mem_core,
        },
        ledger: ev.ledger,
    }
}

/// Smallest odd injection distance whose preparation error fits the budget.
fn choose_injection_distance(models_: &ModelSet, budget: f64, max_distance: u32) -> Option<u32> {
    let mut d = 3;
    while d <= max_distance {
        if fits(models::prep_error(&models_.prep, d), budget) {
            return Some(d);
        }
        d += 2;
    }
    None
}

/// Stage 6: first-improvement local search. The scan tries, in a fixed
/// order: widening one level's distance (re-minimizing the other levels
/// around it), widening the core (re-deriving the whole stack), narrowing
/// one level in place, narrowing the core in place, and widening the core
/// while keeping the stack. The in-place moves are judged against the whole
/// error budget rather than the per-state allocation, so they can reclaim
/// slack the allocation left unspent. A move is kept only if it strictly
/// shrinks the footprint while staying within budget and steady-state
/// flow; every accepted move restarts the scan.
pub fn local_search(
    cfg: &AssemblyConfig,
    budget: f64,
    plan: ArchitecturePlan,
) -> Result<ArchitecturePlan> {
    let max_distance = cfg.optimizer.max_distance;
    let mut best = plan;
    'search: loop {
        let distances = best.distances();
        let n = distances.len();
        for mv in 0..=(2 * n + 2) {
            let candidate: Option<(u32, Vec<u32>)> = if mv < n {
                // Widen level `mv`, letting the other levels re-minimize.
                let mut floors = vec![3u32; n];
                floors[mv] = distances[mv] + 2;
                if floors[mv] > best.d_core.min(max_distance) {
                    continue;
                }
                refine_distances(&cfg.models, best.d_core, n as u32, budget, Some(&floors))
                    .ok()
                    .map(|d| (best.d_core, d))
            } else if mv == n {
                // Widen the core and re-derive the stack from scratch.
                let d_core = best.d_core + 2;
                if d_core > max_distance {
                    continue;
                }
                refine_distances(&cfg.models, d_core, n as u32, budget, None)
                    .ok()
                    .map(|d| (d_core, d))
            } else if mv <= 2 * n {
                // Narrow level `mv - n - 1` in place.
                let l = mv - n - 1;
                let lower = if l == 0 { 3 } else { distances[l - 1] };
                if distances[l] < lower + 2 {
                    continue;
                }
                let mut narrowed = distances.clone();
                narrowed[l] -= 2;
                Some((best.d_core, narrowed))
            } else if mv == 2 * n + 1 {
                // Narrow the core in place.
                let floor = distances.last().copied().unwrap_or(3).max(3);
                if best.d_core < floor + 2 {
                    continue;
                }
                Some((best.d_core - 2, distances.clone()))
            } else {
                // Widen the core, keeping the stack as it stands.
                let d_core = best.d_core + 2;
                if d_core > max_distance {
                    continue;
                }
                Some((d_core, distances.clone()))
            };
            let Some((d_core, cand_distances)) = candidate else {
                continue;
            };
            let d_injection = cand_distances.first().copied().unwrap_or(best.d_injection);
            let Ok(ev) = evaluate(cfg, d_core, d_injection, &cand_distances) else {
                continue;
            };
            if ev.budget_ok && ev.flow_ok && ev.space.total < best.s_physical {
                best = to_plan(cfg, budget, ev);
                continue 'search;
            }
        }
        return Ok(best);
    }
}

/// Run the whole pipeline and return the assembled architecture.
pub fn assemble(cfg: &AssemblyConfig) -> Result<ArchitecturePlan> {
    cfg.validate()?;
    let opt = &cfg.optimizer;
    let circuit_ = &cfg.circuit;
    let models_ = &cfg.models;
    let t = circuit_.t_count;

    // Freeze the factory budget at the serial reference point: the budget a
    // serial-paced machine would grant, so faster and slower targets are
    // sized against the same per-state quality bar.
    let beta_ref = opt.beta.min(1.0);
    let mut d_core_ref = choose_core_distance(
        models_,
        circuit_,
        opt.error_budget,
        beta_ref,
        opt.max_distance,
    )?;
    let k_ref = circuit_.t_depth.max((beta_ref * t).ceil()).max(1.0);
    let budget = loop {
        let e_core_ref = circuit::idle_volume(circuit_, k_ref)
            * models::mem_error(&models_.hardware, d_core_ref, d_core_ref);
        let b = msf_budget(opt.error_budget, e_core_ref, t);
        if b > 0.0 {
            break b;
        }
        // The depth floor can add idle volume beyond what the reference
        // distance was picked against; widen until some budget remains.
        d_core_ref += 2;
        if d_core_ref > opt.max_distance {
            return Err(Error::CapExceeded {
                step: Step::CoreDistance,
                what: "core code distance",
                cap: opt.max_distance,
            });
        }
    };

    let mut d_core = choose_core_distance(
        models_,
        circuit_,
        opt.error_budget,
        opt.beta,
        opt.max_distance,
    )?;

    loop {
        let d_cap = d_core.min(opt.max_distance);
        let first = choose_first_level_distance(models_, d_cap);
        let num_levels = choose_num_levels(
            models_,
            first.as_ref().ok().map(|&(_, e)| e),
            budget,
            opt.max_levels,
            d_cap,
        )?;

        let evaluated = if num_levels == 0 {
            let d_injection =
                choose_injection_distance(models_, budget, d_cap).ok_or(Error::Infeasible {
                    step: Step::LevelCount,
                    detail: "direct preparation stopped fitting the factory budget",
                })?;
            evaluate(cfg, d_core, d_injection, &[])
        } else {
            match refine_distances(models_, d_core, num_levels, budget, None) {
                Ok(distances) => evaluate(cfg, d_core, distances[0], &distances),
                Err(e) => {
                    // A wider core raises the distance cap on the top level;
                    // retry until the cap is exhausted.
                    if d_core + 2 <= opt.max_distance {
                        d_core += 2;
                        continue;
                    }
                    return Err(e);
                }
            }
        };
        let ev = evaluated?;

        if !ev.budget_ok {
            if d_core + 2 <= opt.max_distance {
                d_core += 2;
                continue;
            }
            return Err(Error::Infeasible {
                step: Step::PlanAudit,
                detail: "error budget cannot be met at the distance cap",
            });
        }
        if !ev.flow_ok {
            return Err(Error::Infeasible {
                step: Step::UnitSizing,
                detail: "sized units cannot sustain steady-state flow",
            });
        }

        let plan = to_plan(cfg, budget, ev);
        return local_search(cfg, budget, plan);
    }
}
