//! Error types shared across the crate.
//!
//! Infeasibility is always reported as a structured error carrying the
//! pipeline step that failed, never as a silently clamped result.

use thiserror::Error;

/// Pipeline step provenance attached to infeasibility errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// Selecting the core processor code distance.
    CoreDistance,
    /// Selecting the first distillation level's code distance.
    FirstLevelDistance,
    /// Selecting the number of distillation levels.
    LevelCount,
    /// Refining per-level code distances against the factory budget.
    DistanceRefinement,
    /// Sizing unit counts per level.
    UnitSizing,
    /// Final feasibility audit of the assembled plan.
    PlanAudit,
}

impl std::fmt::Display for Step {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Step::CoreDistance => "core-distance selection",
            Step::FirstLevelDistance => "first-level distance selection",
            Step::LevelCount => "level-count selection",
            Step::DistanceRefinement => "distance refinement",
            Step::UnitSizing => "unit sizing",
            Step::PlanAudit => "plan audit",
        };
        f.write_str(name)
    }
}

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A code distance was not an odd integer >= 3.
    #[error("invalid code distance {distance}: must be an odd integer >= 3")]
    InvalidDistance { distance: u32 },

    /// A model parameter failed validation.
    #[error("invalid model parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A configuration document failed schema validation.
    #[error("invalid configuration at {path}: {message}")]
    InvalidConfig { path: String, message: String },

    /// No feasible assignment exists within the configured caps.
    #[error("infeasible during {step}: {detail}")]
    Infeasible { step: Step, detail: &'static str },

    /// A search cap (maximum distance or level count) was exhausted.
    #[error("cap exceeded during {step}: {what} capped at {cap}")]
    CapExceeded {
        step: Step,
        what: &'static str,
        cap: u32,
    },

    /// I/O failure reading or writing configs and reports.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// JSON (de)serialization failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// CSV serialization failure.
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 for invalid input, 3 for
    /// infeasibility, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidDistance { .. }
            | Error::InvalidParameter { .. }
            | Error::InvalidConfig { .. }
            | Error::Json(_) => 2,
            Error::Infeasible { .. } | Error::CapExceeded { .. } => 3,
            Error::Io { .. } | Error::Csv(_) => 1,
        }
    }
}
