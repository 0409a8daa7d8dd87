//! Resource assembler for fault-tolerant quantum architectures built on
//! surface codes with multi-level magic state factories.
//!
//! Given a hardware error model, a circuit workload (T-gate count, logical
//! qubit count, T-depth), and a total error budget, the assembler picks
//!
//! * the code distance of the core processor,
//! * the number of distillation levels and the code distance of each level,
//! * the number of distillation units per level,
//!
//! so that the whole computation fits the error budget while minimizing
//! physical-qubit footprint at a target slowdown factor, and sweeps the
//! slowdown factor to trace space/time trade-off frontiers.
//!
//! Modules, bottom-up:
//!
//! * [`models`] — physical/logical error-rate primitives and the
//!   distillation protocol description.
//! * [`circuit`] — workload profile and spacetime-volume accounting for the
//!   core processor.
//! * [`chain`] — error propagation and throughput of a multi-level
//!   distillation chain.
//! * [`assembler`] — the sizing pipeline: distance selection, level count,
//!   distance refinement, unit sizing, local search.
//! * [`sweep`] — slowdown sweeps, Pareto filtering, and parameter grids.
//! * [`cli`] — command-line front end (config parsing, reports, CSV).

pub mod assembler;
pub mod chain;
pub mod circuit;
pub mod cli;
pub mod config;
pub mod error;
pub mod models;
pub mod preset;
pub mod report;
pub mod sweep;

pub use error::{Error, Result, Step};
