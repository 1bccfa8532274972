//! Side-by-side metric table: computed values next to the published ones.

use anyhow::Result;
use qca_core::layout::{layout_metrics, CircuitKind};
use serde::Serialize;

use crate::designs::Design;

/// Published figures for a design; `None` where no value was given.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Reference {
    pub cell_count: Option<usize>,
    pub area_um2: Option<f64>,
    pub delay_zones: Option<usize>,
    pub maj_count: Option<usize>,
    pub not_count: Option<usize>,
    pub garbage_outputs: Option<usize>,
    pub constant_inputs: Option<usize>,
}

pub fn reference(kind: CircuitKind) -> Reference {
    let single = |cells, maj| Reference {
        cell_count: Some(cells),
        area_um2: Some(0.04),
        delay_zones: Some(3),
        maj_count: Some(maj),
        not_count: Some(2),
        garbage_outputs: Some(2),
        constant_inputs: Some(0),
    };
    let ripple = |cells, area| Reference {
        cell_count: Some(cells),
        area_um2: Some(area),
        delay_zones: None,
        ..Default::default()
    };
    match kind {
        CircuitKind::Fa | CircuitKind::Fas => single(48, 3),
        CircuitKind::Fa5 => single(58, 2),
        CircuitKind::Ripple8 => Reference { delay_zones: Some(32), ..ripple(570, 0.55) },
        CircuitKind::Ripple8Sub => Reference { delay_zones: Some(42), ..ripple(1040, 1.12) },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub design: String,
    pub cell_count: usize,
    pub area_um2: f64,
    pub delay_zones: usize,
    pub maj_count: usize,
    pub not_count: usize,
    pub garbage_outputs: usize,
    pub constant_inputs: usize,
    pub paper_cell_count: Option<usize>,
    pub paper_area_um2: Option<f64>,
    pub paper_delay_zones: Option<usize>,
    pub paper_maj_count: Option<usize>,
    pub paper_not_count: Option<usize>,
    pub paper_garbage_outputs: Option<usize>,
    pub paper_constant_inputs: Option<usize>,
}

pub const COLUMNS: [&str; 15] = [
    "design",
    "cell_count",
    "area_um2",
    "delay_zones",
    "maj_count",
    "not_count",
    "garbage_outputs",
    "constant_inputs",
    "paper_cell_count",
    "paper_area_um2",
    "paper_delay_zones",
    "paper_maj_count",
    "paper_not_count",
    "paper_garbage_outputs",
    "paper_constant_inputs",
];

pub fn row(design: Design) -> Result<ReportRow> {
    let logic = design.network()?.metrics();
    let geo = layout_metrics(&design.layout()?)?;
    let r = reference(design.kind);
    Ok(ReportRow {
        design: design.kind.name().to_string(),
        cell_count: geo.cell_count,
        area_um2: geo.area_um2,
        delay_zones: geo.delay_zones,
        maj_count: logic.majority_count(),
        not_count: logic.not_count,
        garbage_outputs: logic.garbage_output_count,
        constant_inputs: logic.constant_input_count,
        paper_cell_count: r.cell_count,
        paper_area_um2: r.area_um2,
        paper_delay_zones: r.delay_zones,
        paper_maj_count: r.maj_count,
        paper_not_count: r.not_count,
        paper_garbage_outputs: r.garbage_outputs,
        paper_constant_inputs: r.constant_inputs,
    })
}

pub fn to_csv(rows: &[ReportRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(COLUMNS)?;
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Plain-text table; published values appear as `computed (published)`.
pub fn to_text(rows: &[ReportRow]) -> String {
    let pair = |got: String, want: Option<String>| match want {
        Some(w) => format!("{got} ({w})"),
        None => got,
    };
    let header = ["design", "cells", "area_um2", "zones", "maj", "not", "garbage", "const"];
    let mut table: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for r in rows {
        table.push(vec![
            r.design.clone(),
            pair(r.cell_count.to_string(), r.paper_cell_count.map(|v| v.to_string())),
            pair(format!("{:.4}", r.area_um2), r.paper_area_um2.map(|v| format!("{v}"))),
            pair(r.delay_zones.to_string(), r.paper_delay_zones.map(|v| v.to_string())),
            pair(r.maj_count.to_string(), r.paper_maj_count.map(|v| v.to_string())),
            pair(r.not_count.to_string(), r.paper_not_count.map(|v| v.to_string())),
            pair(r.garbage_outputs.to_string(), r.paper_garbage_outputs.map(|v| v.to_string())),
            pair(r.constant_inputs.to_string(), r.paper_constant_inputs.map(|v| v.to_string())),
        ]);
    }
    let widths: Vec<usize> = (0..header.len()).map(|c| table.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in &table {
        let line: Vec<String> = r.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}
