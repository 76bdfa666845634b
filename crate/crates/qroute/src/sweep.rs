//! Cartesian size sweeps and their CSV/JSON tables.

use std::path::{Path, PathBuf};

use qroute_core::topology::Family;
use qroute_core::{InitialMapping, RoutingStrategy};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::pipeline::{run_pipeline, CircuitFamily, PipelineError, PointConfig, ResultRow, Stage};
use crate::report::render_report;
use crate::trace::DEFAULT_CELL_PX;

pub const ROUTER_VERSION: &str = "qroute-router/1";

fn default_topologies() -> Vec<Family> {
    vec![Family::Star, Family::HeavyHex, Family::Square]
}

fn default_seed() -> u64 {
    42
}

fn default_one() -> usize {
    1
}

fn default_cell_px() -> usize {
    DEFAULT_CELL_PX
}

fn default_true() -> bool {
    true
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<CircuitFamily>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(CircuitFamily),
        Many(Vec<CircuitFamily>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(f) => vec![f],
        OneOrMany::Many(v) => v,
    })
}

/// Sweep description, read from JSON. Every field but `families` has a
/// default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(alias = "family", deserialize_with = "one_or_many")]
    pub families: Vec<CircuitFamily>,
    /// Shared size grid; each family uses its own default grid when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    #[serde(default = "default_topologies")]
    pub topologies: Vec<Family>,
    #[serde(default)]
    pub strategy: RoutingStrategy,
    #[serde(default)]
    pub initial_mapping: InitialMapping,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_one")]
    pub grover_iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_cell_px")]
    pub cell_px: usize,
    /// Write per-point routed circuits, traces and metrics.
    #[serde(default = "default_true")]
    pub point_artifacts: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("config: {0}")]
    Invalid(String),
    #[error("config: {0}")]
    Json(String),
}

impl ExperimentConfig {
    pub fn new(families: Vec<CircuitFamily>) -> Self {
        ExperimentConfig {
            families,
            sizes: None,
            topologies: default_topologies(),
            strategy: RoutingStrategy::Baseline,
            initial_mapping: InitialMapping::Identity,
            seed: 42,
            grover_iterations: 1,
            output_dir: None,
            cell_px: DEFAULT_CELL_PX,
            point_artifacts: true,
        }
    }

    /// The default sweep: all four benchmark families on all topologies.
    pub fn default_sweep() -> Self {
        Self::new(vec![
            CircuitFamily::Qft,
            CircuitFamily::Cuccaro,
            CircuitFamily::Grover,
            CircuitFamily::Qaoa02,
        ])
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.into()));
        if self.families.is_empty() {
            return bad("families must be non-empty");
        }
        if self.topologies.is_empty() {
            return bad("topologies must be non-empty");
        }
        if let Some(s) = &self.sizes {
            if s.is_empty() {
                return bad("size grid must be non-empty");
            }
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return bad("size grid must be strictly ascending");
            }
        }
        if self.cell_px == 0 {
            return bad("cell_px must be positive");
        }
        if self.grover_iterations == 0 {
            return bad("grover_iterations must be positive");
        }
        Ok(())
    }

    pub fn sizes_for(&self, f: &CircuitFamily) -> Vec<usize> {
        match (f, &self.sizes) {
            (CircuitFamily::File(_), _) => vec![0],
            (_, Some(s)) => s.clone(),
            (_, None) => f.default_sizes(),
        }
    }

    /// Every point of the sweep, in config order.
    pub fn points(&self) -> Vec<PointConfig> {
        let mut out = Vec::new();
        for f in &self.families {
            for size in self.sizes_for(f) {
                for &t in &self.topologies {
                    out.push(PointConfig {
                        family: f.clone(),
                        size,
                        topology: t,
                        strategy: self.strategy,
                        initial_mapping: self.initial_mapping,
                        seed: self.seed,
                        grover_iterations: self.grover_iterations,
                        cell_px: self.cell_px,
                    });
                }
            }
        }
        out
    }
}

/// A point that failed, with the stage that failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointError {
    pub family: String,
    pub size: usize,
    pub topology: String,
    pub strategy: String,
    pub stage: Stage,
    pub message: String,
}

/// Conventions a reader needs to compare numbers across tools.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Meta {
    pub router_version: &'static str,
    pub strategy: String,
    pub initial_mapping: String,
    pub seed: u64,
    pub variance: &'static str,
    pub swap_crediting: &'static str,
    pub hotspot_vector: &'static str,
    pub burst_vector: &'static str,
    pub zero_mean: &'static str,
    pub sizing_rule: &'static str,
    pub schedule: &'static str,
    pub op_counting: &'static str,
    pub qaoa_parameters: &'static str,
    pub grover_iterations: usize,
}

impl Meta {
    pub fn for_config(cfg: &ExperimentConfig) -> Self {
        Meta {
            router_version: ROUTER_VERSION,
            strategy: cfg.strategy.name().into(),
            initial_mapping: cfg.initial_mapping.name().into(),
            seed: cfg.seed,
            variance: "population (divide by N)",
            swap_crediting: "each routing swap counts once for both operand qubits",
            hotspot_vector: "all physical qubits of the chip, used or not",
            burst_vector: "all timeslices in [0, makespan), including swap-free ones",
            zero_mean: "dispersion is 0 when the mean is 0",
            sizing_rule: "smallest chip with enough nodes: star n=q, square ceil(sqrt q) x ceil(sqrt q), heavy-hex smallest odd d>=3 with (5d^2-3d)/2 >= q",
            schedule: "ASAP, unit duration per gate, swaps atomic",
            op_counting: "n_ops counts non-routing gates after decomposition",
            qaoa_parameters: "p=1, edge probability 0.2, gamma 0.7, beta 0.3",
            grover_iterations: cfg.grover_iterations,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub meta: Meta,
    pub rows: Vec<ResultRow>,
    pub errors: Vec<PointError>,
}

fn sort_key(r: &ResultRow) -> (&str, &str, usize, &str) {
    (&r.family, &r.topology, r.n_logical, &r.strategy)
}

/// Runs every point, concurrently; when `point_dir` is given, each point's
/// artifacts are written there as it completes.
pub fn run_sweep(cfg: &ExperimentConfig, point_dir: Option<&Path>) -> SweepResult {
    let outcomes: Vec<(PointConfig, Result<ResultRow, PipelineError>)> = cfg
        .points()
        .into_par_iter()
        .map(|p| {
            let r = run_pipeline(&p).and_then(|res| {
                if let Some(dir) = point_dir {
                    res.artifacts(p.cell_px)?.write(dir)?;
                }
                Ok(res.row)
            });
            (p, r)
        })
        .collect();

    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for (p, r) in outcomes {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => errors.push(PointError {
                family: p.family.label(),
                size: p.size,
                topology: p.topology.name().into(),
                strategy: p.strategy.name().into(),
                stage: e.stage,
                message: e.message,
            }),
        }
    }
    rows.sort_by(|a, b| sort_key(a).cmp(&sort_key(b)));
    errors.sort_by(|a, b| {
        (&a.family, &a.topology, a.size, &a.strategy).cmp(&(&b.family, &b.topology, b.size, &b.strategy))
    });
    SweepResult { meta: Meta::for_config(cfg), rows, errors }
}

pub fn rows_csv(rows: &[ResultRow]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(ROW_FIELDS)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn read_rows_csv(text: &str) -> Result<Vec<ResultRow>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}

pub const ROW_FIELDS: [&str; 15] = [
    "family",
    "n_logical",
    "n_physical",
    "topology",
    "topo_param",
    "strategy",
    "n_ops",
    "n_1q",
    "n_2q",
    "n_swap",
    "ccr",
    "hotspotness",
    "burstiness",
    "makespan",
    "seed",
];

pub fn errors_csv(errors: &[PointError]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["family", "size", "topology", "strategy", "stage", "message"])?;
    for e in errors {
        w.write_record([
            e.family.as_str(),
            &e.size.to_string(),
            &e.topology,
            &e.strategy,
            e.stage.name(),
            &e.message,
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Runs the sweep and writes `results.csv`, `errors.csv`, `results.json`,
/// `charts/` and (if enabled) `points/` under `out`.
pub fn run_sweep_to(cfg: &ExperimentConfig, out: &Path) -> Result<SweepResult, PipelineError> {
    let werr = |e: std::io::Error| PipelineError::new(Stage::Write, e);
    std::fs::create_dir_all(out).map_err(werr)?;
    let points = out.join("points");
    let res = run_sweep(cfg, cfg.point_artifacts.then_some(points.as_path()));

    let csv = rows_csv(&res.rows).map_err(|e| PipelineError::new(Stage::Write, e))?;
    std::fs::write(out.join("results.csv"), csv).map_err(werr)?;
    let errs = errors_csv(&res.errors).map_err(|e| PipelineError::new(Stage::Write, e))?;
    std::fs::write(out.join("errors.csv"), errs).map_err(werr)?;
    let mut json = serde_json::to_string_pretty(&res).map_err(|e| PipelineError::new(Stage::Write, e))?;
    json.push('\n');
    std::fs::write(out.join("results.json"), json).map_err(werr)?;

    if !res.rows.is_empty() {
        let charts = render_report(&res.rows).map_err(|e| PipelineError::new(Stage::Render, e))?;
        let dir = out.join("charts");
        std::fs::create_dir_all(&dir).map_err(werr)?;
        for (name, svg) in charts {
            std::fs::write(dir.join(name), svg).map_err(werr)?;
        }
    }
    Ok(res)
}
