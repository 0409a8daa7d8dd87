//! Workload profile and spacetime-volume accounting for the core processor.
//!
//! The core processor executes the algorithm's `t_count` non-Clifford gates
//! over `k` logical cycles on `logical_qubits` logical patches. Its error
//! contribution is dominated by idling: every patch-cycle not actively
//! consumed by a gate accumulates memory error. The idle volume is the
//! primary budget term; the active (gate) volume is kept as an audit
//! quantity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{self, HardwareModel};

/// Logical workload profile of the algorithm to run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitProfile {
    /// Total number of magic states the algorithm consumes (T-gate count).
    pub t_count: f64,
    /// Number of logical qubits the algorithm acts on.
    pub logical_qubits: f64,
    /// Length of the algorithm's critical path in T-layers; consuming more
    /// than one magic state per logical cycle is only useful down to this
    /// depth.
    pub t_depth: f64,
    /// Fraction of logical qubits touched by an average gate layer.
    pub active_fraction: f64,
}

impl CircuitProfile {
    /// Validate counts and fractions.
    pub fn validate(&self) -> Result<()> {
        if !self.t_count.is_finite() || self.t_count < 1.0 {
            return Err(Error::InvalidParameter {
                name: "circuit.t_count",
                value: self.t_count,
                reason: "must be finite and >= 1",
            });
        }
        if !self.logical_qubits.is_finite() || self.logical_qubits < 1.0 {
            return Err(Error::InvalidParameter {
                name: "circuit.logical_qubits",
                value: self.logical_qubits,
                reason: "must be finite and >= 1",
            });
        }
        if !self.t_depth.is_finite() || self.t_depth < 1.0 || self.t_depth > self.t_count {
            return Err(Error::InvalidParameter {
                name: "circuit.t_depth",
                value: self.t_depth,
                reason: "must be finite and in [1, t_count]",
            });
        }
        if !self.active_fraction.is_finite()
            || self.active_fraction <= 0.0
            || self.active_fraction > 1.0
        {
            return Err(Error::InvalidParameter {
                name: "circuit.active_fraction",
                value: self.active_fraction,
                reason: "must be in (0, 1]",
            });
        }
        Ok(())
    }

    /// Average number of patches actively consumed per gate: at least one,
    /// otherwise `active_fraction * logical_qubits` rounded to the nearest
    /// integer.
    pub fn avg_active_patches(&self) -> f64 {
        (self.active_fraction * self.logical_qubits)
            .round()
            .max(1.0)
    }
}

/// Idle spacetime volume (in patch-cycles) of a `k`-cycle computation:
/// total volume `k * Q` minus the volume actively consumed by gates,
/// floored at zero.
pub fn idle_volume(circuit: &CircuitProfile, k_cycles: f64) -> f64 {
    let total = k_cycles * circuit.logical_qubits;
    let active = circuit.t_count * circuit.avg_active_patches();
    (total - active).max(0.0)
}

/// Active spacetime volume of the gate layers themselves:
/// `(2Q + sqrt(8Q) + 26) * active_fraction * t_count` patch-cycles
/// (each gate touches its operand row, an ancilla row, and fixed routing).
pub fn active_volume(circuit: &CircuitProfile) -> f64 {
    let q = circuit.logical_qubits;
    (2.0 * q + (8.0 * q).sqrt() + 26.0) * circuit.active_fraction * circuit.t_count
}

/// Combined-volume core error estimate (audit quantity):
/// `(idle_volume + active_volume) * e_mem_cycle`, where `e_mem_cycle` is
/// the per-patch-per-cycle memory error at the core distance.
pub fn core_error(circuit: &CircuitProfile, k_cycles: f64, e_mem_cycle: f64) -> f64 {
    (idle_volume(circuit, k_cycles) + active_volume(circuit)) * e_mem_cycle
}

/// Audit variant of the core error that charges each gate one explicit
/// lattice-surgery merge across a length-`bus` route instead of folding
/// gates into volume: `V_idle * e_mem + t_count * surgery_error`.
pub fn core_error_surgery(
    circuit: &CircuitProfile,
    hw: &HardwareModel,
    k_cycles: f64,
    d_core: u32,
    bus: u32,
) -> f64 {
    let e_mem_cycle = models::mem_error(hw, d_core, d_core);
    idle_volume(circuit, k_cycles) * e_mem_cycle
        + circuit.t_count * models::surgery_error(hw, d_core, bus, d_core)
}

/// Audit variant of the core error that charges each gate one logical
/// Clifford operation: `V_idle * e_mem + t_count * clifford_error`.
pub fn core_error_clifford(
    circuit: &CircuitProfile,
    hw: &HardwareModel,
    k_cycles: f64,
    d_core: u32,
    bus: u32,
) -> f64 {
    let e_mem_cycle = models::mem_error(hw, d_core, d_core);
    idle_volume(circuit, k_cycles) * e_mem_cycle
        + circuit.t_count * models::clifford_error(hw, d_core, bus, d_core)
}
