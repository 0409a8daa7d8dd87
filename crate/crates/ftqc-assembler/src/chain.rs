//! Error propagation and throughput of a multi-level distillation chain.
//!
//! A chain takes raw magic states prepared at an injection distance `d0`,
//! pushes them through `L` distillation levels at code distances
//! `d_1 <= d_2 <= ... <= d_L`, and delivers output states to the core
//! processor. This module computes
//!
//! * the error ledger of the chain — input, Clifford, growth, and output
//!   error per level plus the final state error, and
//! * the steady-state rates — how fast the core consumes states, how fast a
//!   single unit produces and consumes them, and how many units a demand
//!   requires.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{self, DistillationProtocol, GrowthModel, HardwareModel, PrepModel};

/// Absolute tolerance subtracted before taking `ceil` of a unit count, so
/// that exact integer ratios (common: rates share the round length) do not
/// round up on float noise.
pub(crate) const UNIT_CEIL_TOL: f64 = 1e-9;

/// Relative tolerance applied before taking `ceil` of a cycle count.
pub(crate) const CYCLE_CEIL_REL_TOL: f64 = 1e-12;

/// Relative slack accepted by steady-flow comparisons.
pub(crate) const FLOW_REL_TOL: f64 = 1e-9;

/// `ceil` with an absolute downward tolerance, floored at 1: unit counts.
pub(crate) fn ceil_units(x: f64) -> u64 {
    let c = (x - UNIT_CEIL_TOL).ceil();
    if c < 1.0 {
        1
    } else {
        c as u64
    }
}

/// `ceil` with a relative downward tolerance: cycle counts.
pub(crate) fn ceil_cycles(x: f64) -> f64 {
    (x * (1.0 - CYCLE_CEIL_REL_TOL)).ceil().max(1.0)
}

/// The full set of physical models a chain is evaluated against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSet {
    /// Device-level error rates.
    pub hardware: HardwareModel,
    /// Magic state preparation model.
    pub prep: PrepModel,
    /// Patch growth model between levels (error-free by default).
    #[serde(default = "crate::preset::paper_growth")]
    pub growth: GrowthModel,
    /// Distillation protocol (15-to-1 by default).
    #[serde(default = "crate::preset::protocol_15_to_1")]
    pub protocol: DistillationProtocol,
    /// When true (the default), the Clifford noise floor inside a
    /// distillation unit is taken as one logical cycle of memory at the
    /// unit's distance; when false, it is a full lattice-surgery Clifford
    /// with a bus as long as the distance.
    #[serde(default = "default_clifford_from_memory")]
    pub clifford_from_memory: bool,
}

fn default_clifford_from_memory() -> bool {
    true
}

impl ModelSet {
    /// Validate every component model.
    pub fn validate(&self) -> Result<()> {
        self.hardware.validate()?;
        self.prep.validate()?;
        self.growth.validate()?;
        self.protocol.validate()
    }

    /// Clifford noise floor inside a distillation unit at distance `d`.
    pub fn clifford_floor(&self, d: u32) -> f64 {
        if self.clifford_from_memory {
            models::mem_error(&self.hardware, d, d)
        } else {
            models::clifford_error(&self.hardware, d, d, d)
        }
    }
}

/// Error bookkeeping for one distillation level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelErrors {
    /// Code distance of this level.
    pub distance: u32,
    /// Error of the states entering the level (previous output plus growth).
    pub e_in: f64,
    /// Clifford noise floor inside the level's units.
    pub e_clifford: f64,
    /// Growth error added when hopping from the previous distance.
    pub e_growth: f64,
    /// Error of the states the level outputs.
    pub e_out: f64,
    /// Raw (unclamped) acceptance probability; non-positive means the level
    /// cannot run at these error rates.
    pub accept_raw: f64,
    /// Acceptance probability clamped into [0, 1].
    pub accept: f64,
}

/// Error ledger of a whole chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLedger {
    /// Injection distance the raw states are prepared at.
    pub d_injection: u32,
    /// Preparation error of the raw states.
    pub e_prep: f64,
    /// Per-level error bookkeeping, first level first.
    pub levels: Vec<LevelErrors>,
    /// Error of the states delivered to the core (the last level's output,
    /// or the preparation error itself for a chain with no levels).
    pub e_msf: f64,
}

impl ChainLedger {
    /// True when every level's raw acceptance probability is positive.
    pub fn acceptance_feasible(&self) -> bool {
        self.levels.iter().all(|l| l.accept_raw > 0.0)
    }
}

/// Compute the error ledger of a chain.
///
/// `d_injection` is where raw states are prepared; `distances` lists the
/// level distances bottom-up and must be odd, non-decreasing, and at least
/// `d_injection`. An empty `distances` describes a distillation-free chain.
pub fn chain_errors(
    models_: &ModelSet,
    d_injection: u32,
    distances: &[u32],
) -> Result<ChainLedger> {
    models::validate_distance(d_injection)?;
    let mut prev_d = d_injection;
    for &d in distances {
        models::validate_distance(d)?;
        if d < prev_d {
            return Err(Error::InvalidParameter {
                name: "chain.distances",
                value: f64::from(d),
                reason: "level distances must be non-decreasing from the injection distance",
            });
        }
        prev_d = d;
    }

    let e_prep = models::prep_error(&models_.prep, d_injection);
    let mut levels = Vec::with_capacity(distances.len());
    let mut carry = e_prep;
    let mut carry_d = d_injection;
    for &d in distances {
        let e_growth = models::growth_error(&models_.growth, carry_d, d);
        let e_in = models::combine_grow(carry, e_growth);
        let e_clifford = models_.clifford_floor(d);
        let e_out = models::distill_output(&models_.protocol, e_in, e_clifford);
        let accept = models::acceptance_prob(&models_.protocol, e_in, e_clifford);
        levels.push(LevelErrors {
            distance: d,
            e_in,
            e_clifford,
            e_growth,
            e_out,
            accept_raw: accept.raw,
            accept: accept.clamped,
        });
        carry = e_out;
        carry_d = d;
    }

    Ok(ChainLedger {
        d_injection,
        e_prep,
        levels,
        e_msf: carry,
    })
}

/// Best-case output error of a chain whose first level outputs `e_first`
/// and whose higher levels are idealized (no Clifford noise, no growth):
/// each extra level cubes the error through the protocol's cubic
/// coefficient. This is a lower bound on any real chain with the same
/// level count.
pub fn ideal_tail_error(protocol: &DistillationProtocol, e_first: f64, levels: u32) -> f64 {
    let mut e = e_first;
    for _ in 1..levels {
        e = models::distill_output(protocol, e, 0.0);
    }
    e
}

/// Rate (magic states per second) at which the core processor consumes
/// states when running its T-layers back to back: `(t_count / t_depth)`
/// states per logical cycle of `round_seconds * d_core` seconds.
pub fn core_consumption_rate(t_count: f64, t_depth: f64, round_seconds: f64, d_core: u32) -> f64 {
    (t_count / t_depth) / (round_seconds * f64::from(d_core))
}

/// Rate (states per second) at which one distillation unit at distance `d`
/// produces accepted output states: `outputs_per_round * accept` states per
/// round of `cycles_per_round` logical cycles.
pub fn unit_production_rate(
    protocol: &DistillationProtocol,
    round_seconds: f64,
    d: u32,
    accept: f64,
) -> f64 {
    let round = round_seconds * f64::from(d) * f64::from(protocol.cycles_per_round());
    accept * f64::from(protocol.outputs_per_round) / round
}

/// Rate (states per second) at which one distillation unit at distance `d`
/// consumes input states when running at full duty.
pub fn unit_consumption_rate(protocol: &DistillationProtocol, round_seconds: f64, d: u32) -> f64 {
    let round = round_seconds * f64::from(d) * f64::from(protocol.cycles_per_round());
    f64::from(protocol.inputs_per_round) / round
}

/// Number of units needed to serve `demand` states per second when one unit
/// produces `single_production` states per second and the computation is
/// allowed to run `beta` times slower than demand assumes. Never less
/// than 1.
pub fn required_units(demand: f64, single_production: f64, beta: f64) -> u64 {
    ceil_units(demand / (beta * single_production))
}

/// Check that a sized chain can sustain `demand` output states per second in
/// steady state, using full-duty (raw) rates: the top level must out-produce
/// the demand, and each lower level must out-produce the input consumption
/// of the level above it (at the duty cycle the level above actually runs
/// at).
pub fn steady_flow_check(
    protocol: &DistillationProtocol,
    round_seconds: f64,
    distances: &[u32],
    units: &[u64],
    demand: f64,
) -> bool {
    assert_eq!(
        distances.len(),
        units.len(),
        "each level needs a distance and a unit count"
    );
    if distances.is_empty() {
        return true;
    }
    let last = distances.len() - 1;
    let mut need_out = demand;
    for l in (0..=last).rev() {
        let prod = unit_production_rate(protocol, round_seconds, distances[l], 1.0);
        let supply = units[l] as f64 * prod;
        if supply < need_out * (1.0 - FLOW_REL_TOL) {
            return false;
        }
        let duty = (need_out / supply).min(1.0);
        let cons = unit_consumption_rate(protocol, round_seconds, distances[l]);
        need_out = units[l] as f64 * cons * duty;
    }
    true
}
