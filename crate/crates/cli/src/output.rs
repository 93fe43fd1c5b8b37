use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use tempbc::distance::DistanceSummary;
use tempbc::eval::EvalReport;
use tempbc::graph::GraphSummary;
use tempbc::progressive::StopReport;
use tempbc::{ScoreVector, TemporalGraph};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Default, Serialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSummary>,
    pub algorithm: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimality: Option<String>,
    pub parameters: Parameters,
    pub wall_clock_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop: Option<StopReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scores_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scores: Option<Vec<ScoreRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<EvalReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distances: Option<DistanceSummary>,
}

impl RunReport {
    pub fn new(algorithm: &str) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            command: std::env::args().collect(),
            graph: None,
            algorithm: algorithm.to_string(),
            optimality: None,
            parameters: Parameters::default(),
            wall_clock_seconds: 0.0,
            stop: None,
            scores_path: None,
            scores: None,
            evaluation: None,
            distances: None,
        }
    }

    pub fn emit(&self, out: Option<&Path>) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).expect("report serializes");
        match out {
            Some(path) => std::fs::write(path, text + "\n")?,
            None => {
                let mut out = std::io::stdout().lock();
                match writeln!(out, "{text}").and_then(|_| out.flush()) {
                    Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Serialize)]
pub struct ScoreRow {
    pub node_id: u64,
    pub score: f64,
}

pub fn score_rows(graph: &TemporalGraph, scores: &ScoreVector) -> Vec<ScoreRow> {
    scores
        .values
        .iter()
        .enumerate()
        .map(|(v, &score)| ScoreRow {
            node_id: graph.original_id(v),
            score,
        })
        .collect()
}

/// `node_id,score` with 17 significant digits, in internal node order.
pub fn write_scores(path: &Path, rows: &[ScoreRow]) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "node_id,score")?;
    for r in rows {
        writeln!(w, "{},{:.16e}", r.node_id, r.score)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_scores(path: &Path) -> Result<Vec<(u64, f64)>, CliError> {
    let reader = BufReader::new(File::open(path)?);
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.starts_with("node_id")) {
            continue;
        }
        let bad = || {
            CliError::Invalid(format!(
                "{}:{}: expected node_id,score",
                path.display(),
                i + 1
            ))
        };
        let (id, score) = line.split_once(',').ok_or_else(bad)?;
        rows.push((
            id.trim().parse().map_err(|_| bad())?,
            score.trim().parse().map_err(|_| bad())?,
        ));
    }
    Ok(rows)
}
