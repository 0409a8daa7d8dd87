//! Physical/logical error-rate primitives.
//!
//! Everything downstream (distillation chains, core-processor budgets, the
//! assembler) is built from the handful of closed-form error models in this
//! module: memory idling, Clifford gates via lattice surgery, magic state
//! preparation, patch growth, and the 15-to-1 distillation transfer
//! functions.
//!
//! All rates are probabilities in `[0, 1]`; outputs are clamped at 1 where a
//! formula can exceed it (the raw acceptance probability is deliberately
//! exposed unclamped so callers can detect non-positive acceptance).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Suppression factor exponent for a distance-`d` code: `lambda^(-(d+1)/2)`.
#[inline]
fn suppression(lambda: f64, d: u32) -> f64 {
    lambda.powf(-(f64::from(d) + 1.0) / 2.0)
}

/// Clamp a rate into `[0, 1]`.
#[inline]
pub(crate) fn clamp01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Validate that a code distance is an odd integer >= 3.
pub fn validate_distance(d: u32) -> Result<()> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::InvalidDistance { distance: d });
    }
    Ok(())
}

/// Hardware-level error model for a surface-code device.
///
/// Per-round logical failure rates are expressed as a prefactor `mu` times a
/// suppression factor `lambda^(-(d+1)/2)`; separate (`mu`, `lambda`) pairs
/// cover memory idling, X- and Z-type surgery faults, twist/T faults, and
/// merged-patch surgery. `round_seconds` is the duration of one syndrome
/// measurement round; a logical cycle at distance `d` lasts `d` rounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardwareModel {
    /// Memory idling prefactor (per patch, per logical cycle).
    pub mu_mem: f64,
    /// Memory idling suppression base.
    pub lambda_mem: f64,
    /// X-type surgery fault prefactor.
    pub mu_x: f64,
    /// X-type suppression base.
    pub lambda_x: f64,
    /// Z-type surgery fault prefactor.
    pub mu_z: f64,
    /// Z-type suppression base.
    pub lambda_z: f64,
    /// Twist/T fault prefactor (suppressed in rounds, not distance).
    pub mu_t: f64,
    /// Twist/T suppression base.
    pub lambda_t: f64,
    /// Merged-patch surgery fault prefactor.
    pub mu_surgery: f64,
    /// Merged-patch surgery suppression base.
    pub lambda_surgery: f64,
    /// Buffer wait in rounds between surgery operations.
    pub buffer_rounds: f64,
    /// Decoder latency in rounds.
    pub decode_rounds: f64,
    /// Wall-clock seconds per syndrome measurement round.
    pub round_seconds: f64,
}

impl HardwareModel {
    /// Check prefactors are non-negative, suppression bases exceed 1, and
    /// the round time is positive.
    pub fn validate(&self) -> Result<()> {
        let prefactors = [
            ("mu_mem", self.mu_mem),
            ("mu_x", self.mu_x),
            ("mu_z", self.mu_z),
            ("mu_t", self.mu_t),
            ("mu_surgery", self.mu_surgery),
            ("buffer_rounds", self.buffer_rounds),
            ("decode_rounds", self.decode_rounds),
        ];
        for (name, value) in prefactors {
            if value < 0.0 || !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite and non-negative",
                });
            }
        }
        let bases = [
            ("lambda_mem", self.lambda_mem),
            ("lambda_x", self.lambda_x),
            ("lambda_z", self.lambda_z),
            ("lambda_t", self.lambda_t),
            ("lambda_surgery", self.lambda_surgery),
        ];
        for (name, value) in bases {
            if value <= 1.0 || !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "suppression base must be finite and > 1",
                });
            }
        }
        if self.round_seconds <= 0.0 || !self.round_seconds.is_finite() {
            return Err(Error::InvalidParameter {
                name: "round_seconds",
                value: self.round_seconds,
                reason: "must be finite and positive",
            });
        }
        Ok(())
    }
}

/// Magic state preparation (injection) error model at the injection
/// distance `d0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PrepModel {
    /// `clamp01(mu - lambda * d0)`. A negative `lambda` makes the error rate
    /// grow with the injection distance (post-selected injection gets harder
    /// on larger patches).
    Linear { mu: f64, lambda: f64 },
    /// `mu * lambda^(-(d0+1)/2)`: preparation benefits from code suppression.
    Exponential { mu: f64, lambda: f64 },
    /// Distance-independent preparation error.
    Constant { error: f64 },
}

impl PrepModel {
    /// Validate model parameters.
    pub fn validate(&self) -> Result<()> {
        match *self {
            PrepModel::Linear { mu, lambda } => {
                if !mu.is_finite() || mu < 0.0 {
                    return Err(Error::InvalidParameter {
                        name: "prep.mu",
                        value: mu,
                        reason: "must be finite and non-negative",
                    });
                }
                if !lambda.is_finite() {
                    return Err(Error::InvalidParameter {
                        name: "prep.lambda",
                        value: lambda,
                        reason: "must be finite",
                    });
                }
            }
            PrepModel::Exponential { mu, lambda } => {
                if !mu.is_finite() || mu < 0.0 {
                    return Err(Error::InvalidParameter {
                        name: "prep.mu",
                        value: mu,
                        reason: "must be finite and non-negative",
                    });
                }
                if lambda <= 1.0 || !lambda.is_finite() {
                    return Err(Error::InvalidParameter {
                        name: "prep.lambda",
                        value: lambda,
                        reason: "suppression base must be finite and > 1",
                    });
                }
            }
            PrepModel::Constant { error } => {
                if !error.is_finite() || !(0.0..=1.0).contains(&error) {
                    return Err(Error::InvalidParameter {
                        name: "prep.error",
                        value: error,
                        reason: "must be a probability in [0, 1]",
                    });
                }
            }
        }
        Ok(())
    }
}

/// Error model for growing a patch from one code distance to a larger one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GrowthModel {
    /// Growth is error-free (the default: growth faults are far below the
    /// surrounding distillation noise).
    Zero,
    /// `mu * d_to^2 * lambda^(-(d_from+1)/2)`: the grown patch idles like
    /// memory at the target size while protected at the source distance.
    MemoryLike { mu: f64, lambda: f64 },
}

impl GrowthModel {
    /// Validate model parameters.
    pub fn validate(&self) -> Result<()> {
        if let GrowthModel::MemoryLike { mu, lambda } = *self {
            if !mu.is_finite() || mu < 0.0 {
                return Err(Error::InvalidParameter {
                    name: "growth.mu",
                    value: mu,
                    reason: "must be finite and non-negative",
                });
            }
            if lambda <= 1.0 || !lambda.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "growth.lambda",
                    value: lambda,
                    reason: "suppression base must be finite and > 1",
                });
            }
        }
        Ok(())
    }
}

/// Description of one distillation protocol stage (the classic 15-to-1 by
/// default): input/output multiplicities, round length, output-error and
/// acceptance coefficients, and per-unit tile footprints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistillationProtocol {
    /// Input magic states consumed per distillation round.
    pub inputs_per_round: u32,
    /// Output magic states produced per distillation round.
    pub outputs_per_round: u32,
    /// Extra logical cycles of overhead per round (a round lasts
    /// `overhead_cycles + outputs_per_round` logical cycles).
    pub overhead_cycles: u32,
    /// Cubic coefficient of the output error: `out = c3 * e_in^3 + ...`.
    pub output_cubic_coeff: f64,
    /// Linear Clifford-noise coefficient of the output error.
    pub output_clifford_coeff: f64,
    /// Input-error coefficient of the acceptance probability.
    pub accept_input_coeff: f64,
    /// Clifford-noise coefficient of the acceptance probability.
    pub accept_clifford_coeff: f64,
    /// Logical tiles occupied by one distillation unit.
    pub tiles_per_unit: u32,
    /// Extra tiles per unit for growing outputs to the next level's distance.
    pub growth_tiles_per_unit: u32,
    /// Extra tiles per first-level unit (injection staging).
    pub first_level_extra_tiles: u32,
    /// Tiles per first-level unit hosting magic state preparation.
    pub prep_tiles_per_unit: u32,
    /// Routing tiles per unit.
    pub routing_per_unit: u32,
    /// Fixed routing tiles per factory level.
    pub routing_base: u32,
    /// Preparation units attached to each first-level distillation unit.
    pub prep_units_per_first_level_unit: u32,
    /// Logical cycles for one preparation attempt (a prep unit outputs one
    /// candidate state every this many cycles).
    pub prep_cycles_per_state: u32,
}

impl DistillationProtocol {
    /// Logical cycles per distillation round.
    pub fn cycles_per_round(&self) -> u32 {
        self.overhead_cycles + self.outputs_per_round
    }

    /// Validate multiplicities and coefficients.
    pub fn validate(&self) -> Result<()> {
        if self.inputs_per_round == 0 || self.outputs_per_round == 0 {
            return Err(Error::InvalidParameter {
                name: "protocol multiplicities",
                value: 0.0,
                reason: "inputs_per_round and outputs_per_round must be positive",
            });
        }
        let coeffs = [
            ("output_cubic_coeff", self.output_cubic_coeff),
            ("output_clifford_coeff", self.output_clifford_coeff),
            ("accept_input_coeff", self.accept_input_coeff),
            ("accept_clifford_coeff", self.accept_clifford_coeff),
        ];
        for (name, value) in coeffs {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite and non-negative",
                });
            }
        }
        if self.prep_cycles_per_state == 0 {
            return Err(Error::InvalidParameter {
                name: "prep_cycles_per_state",
                value: 0.0,
                reason: "must be positive",
            });
        }
        Ok(())
    }
}

/// Memory idling error of one distance-`d` patch held for `r` rounds:
/// `min(1, mu_mem * d * r * lambda_mem^(-(d+1)/2))`.
///
/// Holding a patch for one logical cycle corresponds to `r = d`.
pub fn mem_error(hw: &HardwareModel, d: u32, r: u32) -> f64 {
    let raw = hw.mu_mem * f64::from(d) * f64::from(r) * suppression(hw.lambda_mem, d);
    raw.min(1.0)
}

/// Logical error of one Clifford gate executed by lattice surgery on a
/// distance-`d` patch with a length-`b` routing bus, measured for `r`
/// rounds:
///
/// `mu_x*(2d+b)*r*lx^(-(d+1)/2) + mu_z*d*lz^(-(d+1)/2) + mu_t*d*b*lt^(-(r+1)/2)`
///
/// clamped to `[0, 1]`.
pub fn clifford_error(hw: &HardwareModel, d: u32, b: u32, r: u32) -> f64 {
    let d_f = f64::from(d);
    let b_f = f64::from(b);
    let r_f = f64::from(r);
    let x_term = hw.mu_x * (2.0 * d_f + b_f) * r_f * suppression(hw.lambda_x, d);
    let z_term = hw.mu_z * d_f * suppression(hw.lambda_z, d);
    let t_term = hw.mu_t * d_f * b_f * suppression(hw.lambda_t, r);
    clamp01(x_term + z_term + t_term)
}

/// Logical error of one lattice-surgery merge across a length-`b` bus at
/// distance `d`, measured for `r` rounds with the hardware's buffer and
/// decoder latencies:
///
/// `mu_s*[d*(2r + tau_b + tau_d + 1) + b*r]*ls^(-(d+1)/2) + mu_t*d*b*lt^(-(r+1)/2)`
///
/// clamped to `[0, 1]`.
pub fn surgery_error(hw: &HardwareModel, d: u32, b: u32, r: u32) -> f64 {
    let d_f = f64::from(d);
    let b_f = f64::from(b);
    let r_f = f64::from(r);
    let volume = d_f * (2.0 * r_f + hw.buffer_rounds + hw.decode_rounds + 1.0) + b_f * r_f;
    let s_term = hw.mu_surgery * volume * suppression(hw.lambda_surgery, d);
    let t_term = hw.mu_t * d_f * b_f * suppression(hw.lambda_t, r);
    clamp01(s_term + t_term)
}

/// Magic state preparation error at injection distance `d0`.
pub fn prep_error(model: &PrepModel, d0: u32) -> f64 {
    match *model {
        PrepModel::Linear { mu, lambda } => clamp01(mu - lambda * f64::from(d0)),
        PrepModel::Exponential { mu, lambda } => clamp01(mu * suppression(lambda, d0)),
        PrepModel::Constant { error } => error,
    }
}

/// Error added by growing a patch from distance `d_from` to `d_to`.
pub fn growth_error(model: &GrowthModel, d_from: u32, d_to: u32) -> f64 {
    match *model {
        GrowthModel::Zero => 0.0,
        GrowthModel::MemoryLike { mu, lambda } => {
            clamp01(mu * f64::from(d_to) * f64::from(d_to) * suppression(lambda, d_from))
        }
    }
}

/// Combine two independent error channels: `1 - (1-a)(1-b)`.
///
/// Equals `a + b - a*b`; commutative, with identity 0 and absorber 1.
pub fn combine_grow(a: f64, b: f64) -> f64 {
    1.0 - (1.0 - a) * (1.0 - b)
}

/// Output error of one distillation round:
/// `min(1, c3 * e_in^3 + c_cliff * e_cliff)`.
pub fn distill_output(protocol: &DistillationProtocol, e_in: f64, e_cliff: f64) -> f64 {
    let raw = protocol.output_cubic_coeff * e_in.powi(3) + protocol.output_clifford_coeff * e_cliff;
    raw.min(1.0)
}

/// Acceptance probability of one distillation round, both raw
/// (`1 - a_in*e_in - a_cliff*e_cliff`, possibly negative) and clamped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Acceptance {
    /// Raw linearized value; non-positive means the distillation level is
    /// infeasible at these error rates.
    pub raw: f64,
    /// `raw` clamped into `[0, 1]`.
    pub clamped: f64,
}

/// Acceptance probability of one distillation round.
pub fn acceptance_prob(protocol: &DistillationProtocol, e_in: f64, e_cliff: f64) -> Acceptance {
    let raw = 1.0 - protocol.accept_input_coeff * e_in - protocol.accept_clifford_coeff * e_cliff;
    Acceptance {
        raw,
        clamped: clamp01(raw),
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    /// Hardware model with every channel's prefactor 1e-3 and base 10,
    /// buffer/decode 3 rounds: handy for exercising the gate formulas.
    pub fn uniform_hw(mu: f64, lambda: f64) -> HardwareModel {
        HardwareModel {
            mu_mem: mu,
            lambda_mem: lambda,
            mu_x: mu,
            lambda_x: lambda,
            mu_z: mu,
            lambda_z: lambda,
            mu_t: mu,
            lambda_t: lambda,
            mu_surgery: mu,
            lambda_surgery: lambda,
            buffer_rounds: 3.0,
            decode_rounds: 3.0,
            round_seconds: 450e-9,
        }
    }
}
