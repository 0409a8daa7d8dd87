//! Result reporting: versioned JSON documents that embed the configuration
//! they were produced from (so any report can be re-run as-is), and CSV
//! tables with a fixed column set for plotting.
//!
//! Probability-like quantities are rounded to six significant digits in
//! reports; configuration echoes are kept at full precision so a re-run
//! reproduces the plan bit for bit.

use std::io;

use serde_json::json;

use crate::assembler::ArchitecturePlan;
use crate::config::RunConfig;
use crate::error::Result;
use crate::sweep::{CellSweep, SweepPoint};

/// Version stamp written into every JSON report.
pub const SCHEMA_VERSION: &str = "1";

/// Round to six significant digits (reports only; never used in the
/// optimization itself).
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().unwrap()
}

fn rounded_plan(plan: &ArchitecturePlan) -> ArchitecturePlan {
    let mut p = plan.clone();
    p.msf_budget = round_sig(p.msf_budget);
    p.e_msf_total = round_sig(p.e_msf_total);
    p.e_core_total = round_sig(p.e_core_total);
    p.error_total = round_sig(p.error_total);
    p.audit.combined_volume_error = round_sig(p.audit.combined_volume_error);
    p.ledger.e_prep = round_sig(p.ledger.e_prep);
    p.ledger.e_msf = round_sig(p.ledger.e_msf);
    for level in &mut p.ledger.levels {
        level.e_in = round_sig(level.e_in);
        level.e_clifford = round_sig(level.e_clifford);
        level.e_growth = round_sig(level.e_growth);
        level.e_out = round_sig(level.e_out);
        level.accept_raw = round_sig(level.accept_raw);
        level.accept = round_sig(level.accept);
    }
    p
}

fn rounded_point(point: &SweepPoint) -> SweepPoint {
    let mut p = point.clone();
    p.plan = p.plan.as_ref().map(rounded_plan);
    p
}

/// Report for a single assembled architecture.
pub fn plan_report(config: &RunConfig, plan: &ArchitecturePlan) -> serde_json::Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "plan": rounded_plan(plan),
    })
}

/// Report for a slowdown sweep.
pub fn sweep_report(config: &RunConfig, points: &[SweepPoint]) -> serde_json::Value {
    let pts: Vec<SweepPoint> = points.iter().map(rounded_point).collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "sweep": pts,
    })
}

/// Report for a model-grid sweep.
pub fn grid_report(grid_name: &str, cells: &[CellSweep]) -> serde_json::Value {
    let cells_json: Vec<serde_json::Value> = cells
        .iter()
        .map(|cell| {
            let key: serde_json::Map<String, serde_json::Value> = cell
                .key
                .iter()
                .map(|(k, v)| (k.clone(), json!(v)))
                .collect();
            let pts: Vec<SweepPoint> = cell.points.iter().map(rounded_point).collect();
            json!({ "key": key, "points": pts })
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "grid": grid_name,
        "cells": cells_json,
    })
}

/// Fixed trailing columns of every sweep CSV (cell key columns, when any,
/// come first).
pub const CSV_COLUMNS: [&str; 12] = [
    "beta_target",
    "beta_achieved",
    "s_physical",
    "r_seconds",
    "levels",
    "d_core",
    "d_injection",
    "distances",
    "units",
    "feasible",
    "pareto",
    "error",
];

fn join_u32(values: &[u32]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn join_u64(values: &[u64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

/// Write one or more swept cells as CSV. `key_names` label the leading cell
/// columns and must match the keys carried by every cell (pass an empty
/// slice for a plain sweep).
pub fn write_sweep_csv<W: io::Write>(
    out: W,
    key_names: &[String],
    cells: &[CellSweep],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = key_names.to_vec();
    header.extend(CSV_COLUMNS.iter().map(|c| c.to_string()));
    w.write_record(&header)?;

    for cell in cells {
        debug_assert_eq!(
            cell.key.iter().map(|(k, _)| k.as_str()).collect::<Vec<_>>(),
            key_names.iter().map(String::as_str).collect::<Vec<_>>(),
            "cell keys must match the declared key columns"
        );
        for point in &cell.points {
            let mut row: Vec<String> = cell.key.iter().map(|(_, v)| v.to_string()).collect();
            row.push(point.beta_target.to_string());
            match &point.plan {
                Some(plan) => {
                    row.push(plan.beta_achieved.to_string());
                    row.push(plan.s_physical.to_string());
                    row.push(plan.r_seconds.to_string());
                    row.push(plan.num_levels().to_string());
                    row.push(plan.d_core.to_string());
                    row.push(plan.d_injection.to_string());
                    row.push(join_u32(&plan.distances()));
                    row.push(join_u64(&plan.units()));
                    row.push("true".into());
                    row.push(point.pareto.to_string());
                    row.push(String::new());
                }
                None => {
                    for _ in 0..8 {
                        row.push(String::new());
                    }
                    row.push("false".into());
                    row.push("false".into());
                    row.push(point.error.clone().unwrap_or_default());
                }
            }
            w.write_record(&row)?;
        }
    }
    w.flush().map_err(|e| crate::Error::Io {
        path: "<csv>".into(),
        source: e,
    })?;
    Ok(())
}

/// Wrap a plain sweep as a single key-less cell for the CSV writer.
pub fn sweep_as_cell(points: &[SweepPoint]) -> Vec<CellSweep> {
    vec![CellSweep {
        key: Vec::new(),
        points: points.to_vec(),
    }]
}
