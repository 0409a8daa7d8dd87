//! Canonical parameter sets: the 2024 superconducting-hardware baseline and
//! the sweep grids used to reproduce the published figures.

use crate::assembler::{AssemblyConfig, OptimizerConfig};
use crate::chain::ModelSet;
use crate::circuit::CircuitProfile;
use crate::models::{DistillationProtocol, GrowthModel, HardwareModel, PrepModel};
use crate::sweep::GridCell;

/// Uniform superconducting baseline: every channel fails at 3.8e-3 per
/// opportunity and is suppressed tenfold per distance step; rounds take
/// 450 ns; no extra buffering or decoding latency.
pub fn paper_hardware() -> HardwareModel {
    HardwareModel {
        mu_mem: 3.8e-3,
        lambda_mem: 10.0,
        mu_x: 3.8e-3,
        lambda_x: 10.0,
        mu_z: 3.8e-3,
        lambda_z: 10.0,
        mu_t: 3.8e-3,
        lambda_t: 10.0,
        mu_surgery: 3.8e-3,
        lambda_surgery: 10.0,
        buffer_rounds: 0.0,
        decode_rounds: 0.0,
        round_seconds: 450e-9,
    }
}

/// The 15-to-1 distillation protocol with its standard error and layout
/// coefficients.
pub fn protocol_15_to_1() -> DistillationProtocol {
    DistillationProtocol {
        inputs_per_round: 15,
        outputs_per_round: 1,
        overhead_cycles: 13,
        output_cubic_coeff: 35.0,
        output_clifford_coeff: 7.1,
        accept_input_coeff: 15.0,
        accept_clifford_coeff: 356.0,
        tiles_per_unit: 23,
        growth_tiles_per_unit: 5,
        first_level_extra_tiles: 10,
        prep_tiles_per_unit: 3,
        routing_per_unit: 5,
        routing_base: 4,
        prep_units_per_first_level_unit: 3,
        prep_cycles_per_state: 2,
    }
}

/// Injection-based preparation whose error decreases linearly with the
/// injection distance (the slope is gentle, so small distances stay close
/// to the measured 1.44e-4 baseline).
pub fn paper_prep() -> PrepModel {
    PrepModel::Linear {
        mu: 1.44e-4,
        lambda: -2.5e-5,
    }
}

/// Patch growth treated as error-free.
pub fn paper_growth() -> GrowthModel {
    GrowthModel::Zero
}

/// The full baseline model set.
pub fn paper_models() -> ModelSet {
    ModelSet {
        hardware: paper_hardware(),
        prep: paper_prep(),
        growth: paper_growth(),
        protocol: protocol_15_to_1(),
        clifford_from_memory: true,
    }
}

/// The reference workload: a million T gates over a thousand logical qubits
/// in two hundred thousand layers, with a tenth of the qubits active in an
/// average cycle.
pub fn paper_circuit() -> CircuitProfile {
    CircuitProfile {
        t_count: 1e6,
        logical_qubits: 1e3,
        t_depth: 2e5,
        active_fraction: 0.1,
    }
}

/// Default optimizer settings: a 1% failure budget, no target slowdown,
/// generous structural caps, and a 16% tolerance on slowdown overshoot when
/// trimming top-level units.
pub fn paper_optimizer() -> OptimizerConfig {
    OptimizerConfig {
        error_budget: 0.01,
        beta: 1.0,
        max_distance: 101,
        max_levels: 4,
        max_slowdown_ratio: 1.16,
    }
}

/// The complete baseline assembly problem.
pub fn paper_config() -> AssemblyConfig {
    AssemblyConfig {
        models: paper_models(),
        circuit: paper_circuit(),
        optimizer: paper_optimizer(),
    }
}

/// Look up a named preset configuration.
pub fn by_name(name: &str) -> Option<AssemblyConfig> {
    match name {
        "paper-2024" => Some(paper_config()),
        _ => None,
    }
}

/// Names accepted by [`by_name`].
pub const PRESET_NAMES: &[&str] = &["paper-2024"];

/// Workload-scaling grid: T-count from 1e6 to 1e15 crossed with processor
/// sizes of 1e2 to 1e4 logical qubits; depth tracks a fifth of the T-count.
/// Models and optimizer settings come from `base`.
pub fn fig_scaling_cells(base: &AssemblyConfig) -> Vec<GridCell> {
    let mut cells = Vec::new();
    for &t in &[1e6, 1e9, 1e12, 1e15] {
        for &q in &[1e2, 1e3, 1e4] {
            let mut config = base.clone();
            config.circuit = CircuitProfile {
                t_count: t,
                logical_qubits: q,
                t_depth: t / 5.0,
                active_fraction: base.circuit.active_fraction,
            };
            cells.push(GridCell {
                key: vec![("t_count".into(), t), ("logical_qubits".into(), q)],
                config,
            });
        }
    }
    cells
}

/// Hardware-quality grid: suppression factors of 3, 5, and 10 crossed with
/// constant preparation errors of 1e-2, 1e-5, and 1e-8, on a deep
/// (T = 1e12) hundred-qubit workload. Other settings come from `base`.
pub fn fig_quality_cells(base: &AssemblyConfig) -> Vec<GridCell> {
    let mut cells = Vec::new();
    for &lambda in &[3.0, 5.0, 10.0] {
        for &e_prep in &[1e-2, 1e-5, 1e-8] {
            let mut config = base.clone();
            config.models.hardware.lambda_mem = lambda;
            config.models.hardware.lambda_x = lambda;
            config.models.hardware.lambda_z = lambda;
            config.models.hardware.lambda_t = lambda;
            config.models.hardware.lambda_surgery = lambda;
            config.models.prep = PrepModel::Constant { error: e_prep };
            config.circuit = CircuitProfile {
                t_count: 1e12,
                logical_qubits: 1e2,
                t_depth: 2e11,
                active_fraction: base.circuit.active_fraction,
            };
            cells.push(GridCell {
                key: vec![("lambda".into(), lambda), ("prep_error".into(), e_prep)],
                config,
            });
        }
    }
    cells
}

/// Single-cell grid holding the base configuration unchanged, for the
/// slowdown trade-off sweep.
pub fn fig_tradeoff_cells(base: &AssemblyConfig) -> Vec<GridCell> {
    vec![GridCell {
        key: Vec::new(),
        config: base.clone(),
    }]
}

/// Look up a named figure grid built on top of `base`.
pub fn fig_by_name(name: &str, base: &AssemblyConfig) -> Option<Vec<GridCell>> {
    match name {
        "1a" => Some(fig_scaling_cells(base)),
        "1b" => Some(fig_quality_cells(base)),
        "4" => Some(fig_tradeoff_cells(base)),
        _ => None,
    }
}

/// Names accepted by [`fig_by_name`].
pub const FIG_NAMES: &[&str] = &["1a", "1b", "4"];
