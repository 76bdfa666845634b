//! Generate or load, size a chip, map, route, verify, schedule, analyze.

use std::fmt;
use std::path::{Path, PathBuf};

use qroute_core::generators::{self, DEFAULT_BETA, DEFAULT_EDGE_PROBABILITY, DEFAULT_GAMMA};
use qroute_core::metrics::analyze;
use qroute_core::router::{route, verify_routed};
use qroute_core::schedule::schedule_asap;
use qroute_core::topology::{sized_for, Family};
use qroute_core::{
    Circuit, CouplingGraph, InitialMapping, MetricsReport, RoutedCircuit, RoutingStrategy, Trace,
};
use serde::{Deserialize, Serialize};

use crate::qasm::{emit_qasm, parse_qasm};
use crate::trace::{render_svg, trace_csv, DEFAULT_CELL_PX};

/// Stage names used in error reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Generate,
    Load,
    Topology,
    Mapping,
    Route,
    Verify,
    Schedule,
    Analyze,
    Render,
    Write,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Generate => "generate",
            Stage::Load => "load",
            Stage::Topology => "topology",
            Stage::Mapping => "mapping",
            Stage::Route => "route",
            Stage::Verify => "verify",
            Stage::Schedule => "schedule",
            Stage::Analyze => "analyze",
            Stage::Render => "render",
            Stage::Write => "write",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{stage} stage failed: {message}")]
pub struct PipelineError {
    pub stage: Stage,
    pub message: String,
}

impl PipelineError {
    pub fn new(stage: Stage, e: impl fmt::Display) -> Self {
        PipelineError { stage, message: e.to_string() }
    }

    /// A routed circuit that fails verification is a router bug, not bad input.
    pub fn is_verification(&self) -> bool {
        self.stage == Stage::Verify
    }
}

/// Benchmark family, or a circuit file.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitFamily {
    Qft,
    Cuccaro,
    Grover,
    /// QAOA MaxCut on G(n, 0.2).
    Qaoa02,
    File(PathBuf),
}

impl CircuitFamily {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "qft" => Some(CircuitFamily::Qft),
            "cuccaro" => Some(CircuitFamily::Cuccaro),
            "grover" => Some(CircuitFamily::Grover),
            "qaoa02" => Some(CircuitFamily::Qaoa02),
            _ => None,
        }
    }

    /// Label used in result rows; files are labelled by their stem.
    pub fn label(&self) -> String {
        match self {
            CircuitFamily::Qft => "qft".into(),
            CircuitFamily::Cuccaro => "cuccaro".into(),
            CircuitFamily::Grover => "grover".into(),
            CircuitFamily::Qaoa02 => "qaoa02".into(),
            CircuitFamily::File(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "file".into()),
        }
    }

    /// Size grid used when the config gives none. For a file the grid is
    /// a single placeholder; the file fixes the size.
    pub fn default_sizes(&self) -> Vec<usize> {
        match self {
            CircuitFamily::Qft | CircuitFamily::Qaoa02 => (1..=16).map(|k| 4 * k).collect(),
            CircuitFamily::Grover => (3..=16).collect(),
            CircuitFamily::Cuccaro => (2..=15).collect(),
            CircuitFamily::File(_) => vec![0],
        }
    }

    /// Logical qubit count of the circuit generated for `size`, when known
    /// without generating.
    pub fn qubits_for(&self, size: usize) -> Option<usize> {
        match self {
            CircuitFamily::Qft | CircuitFamily::Qaoa02 => Some(size),
            CircuitFamily::Cuccaro => Some(2 * size + 2),
            CircuitFamily::Grover => (2 * size).checked_sub(2),
            CircuitFamily::File(_) => None,
        }
    }

    /// Builds the circuit. `size` is n for qft/qaoa02, the operand width
    /// for cuccaro and the data-register width for grover.
    pub fn build(&self, size: usize, seed: u64, grover_iterations: usize) -> Result<Circuit, PipelineError> {
        let gen = |r: Result<Circuit, generators::GenError>| r.map_err(|e| PipelineError::new(Stage::Generate, e));
        match self {
            CircuitFamily::Qft => gen(generators::qft(size)),
            CircuitFamily::Cuccaro => gen(generators::cuccaro(size)),
            CircuitFamily::Grover => gen(generators::grover(size, grover_iterations)),
            CircuitFamily::Qaoa02 => gen(generators::qaoa_maxcut(
                size,
                DEFAULT_EDGE_PROBABILITY,
                seed,
                DEFAULT_GAMMA,
                DEFAULT_BETA,
            )),
            CircuitFamily::File(path) => load_circuit(path),
        }
    }
}

pub fn load_circuit(path: &Path) -> Result<Circuit, PipelineError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| PipelineError::new(Stage::Load, format!("{}: {e}", path.display())))?;
    let mut c = parse_qasm(&text)
        .map_err(|e| PipelineError::new(Stage::Load, format!("{}: {e}", path.display())))?;
    if c.name.is_empty() {
        c.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
    }
    Ok(c)
}

/// One point of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfig {
    pub family: CircuitFamily,
    pub size: usize,
    pub topology: Family,
    pub strategy: RoutingStrategy,
    pub initial_mapping: InitialMapping,
    pub seed: u64,
    pub grover_iterations: usize,
    pub cell_px: usize,
}

impl PointConfig {
    pub fn new(family: CircuitFamily, size: usize, topology: Family) -> Self {
        PointConfig {
            family,
            size,
            topology,
            strategy: RoutingStrategy::Baseline,
            initial_mapping: InitialMapping::Identity,
            seed: 42,
            grover_iterations: 1,
            cell_px: DEFAULT_CELL_PX,
        }
    }
}

/// Summary line of one routed point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub family: String,
    pub n_logical: usize,
    pub n_physical: usize,
    pub topology: String,
    pub topo_param: String,
    pub strategy: String,
    pub n_ops: usize,
    pub n_1q: usize,
    pub n_2q: usize,
    pub n_swap: usize,
    pub ccr: f64,
    pub hotspotness: f64,
    pub burstiness: f64,
    pub makespan: usize,
    pub seed: u64,
}

/// Routed circuit, its schedule and its metrics.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub routed: RoutedCircuit,
    pub trace: Trace,
    pub report: MetricsReport,
}

/// Routes `c` on `g`, rejects unfaithful routings, schedules and analyzes.
pub fn evaluate(
    c: &Circuit,
    g: &CouplingGraph,
    strategy: RoutingStrategy,
    mapping: InitialMapping,
) -> Result<Evaluation, PipelineError> {
    let m0 = mapping.build(c, g).map_err(|e| PipelineError::new(Stage::Mapping, e))?;
    let (routed, _) = route(c, g, &m0, strategy).map_err(|e| PipelineError::new(Stage::Route, e))?;
    if !verify_routed(c, &routed) {
        return Err(PipelineError::new(
            Stage::Verify,
            format!("routed {} does not implement the input circuit", c.name),
        ));
    }
    let trace = schedule_asap(&routed);
    let report = analyze(&routed, &trace).map_err(|e| PipelineError::new(Stage::Analyze, e))?;
    Ok(Evaluation { routed, trace, report })
}

pub fn make_row(
    family: &str,
    c: &Circuit,
    g: &CouplingGraph,
    strategy: RoutingStrategy,
    seed: u64,
    r: &MetricsReport,
) -> ResultRow {
    ResultRow {
        family: family.to_string(),
        n_logical: c.num_qubits,
        n_physical: g.num_nodes(),
        topology: g.kind().family().to_string(),
        topo_param: g.kind().to_string(),
        strategy: strategy.name().to_string(),
        n_ops: r.counts.n_ops,
        n_1q: r.counts.n_1q,
        n_2q: r.counts.n_2q,
        n_swap: r.counts.n_swap,
        ccr: r.ccr,
        hotspotness: r.hotspotness,
        burstiness: r.burstiness,
        makespan: r.makespan,
        seed,
    }
}

/// Text artifacts of one point, keyed by file extension.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub stem: String,
    pub routed_qasm: String,
    pub trace_svg: String,
    pub trace_csv: String,
    pub metrics_json: String,
}

impl Artifacts {
    pub fn write(&self, dir: &Path) -> Result<(), PipelineError> {
        std::fs::create_dir_all(dir).map_err(|e| PipelineError::new(Stage::Write, e))?;
        for (ext, body) in [
            ("qasm", &self.routed_qasm),
            ("svg", &self.trace_svg),
            ("csv", &self.trace_csv),
            ("json", &self.metrics_json),
        ] {
            let path = dir.join(format!("{}.{ext}", self.stem));
            std::fs::write(&path, body)
                .map_err(|e| PipelineError::new(Stage::Write, format!("{}: {e}", path.display())))?;
        }
        Ok(())
    }
}

pub fn artifacts(stem: String, ev: &Evaluation, cell_px: usize) -> Result<Artifacts, PipelineError> {
    let routed_qasm = emit_qasm(&ev.routed.to_circuit(stem.clone()));
    let trace_svg = if ev.trace.makespan() == 0 {
        // empty circuits have nothing to draw
        String::new()
    } else {
        render_svg(&ev.trace, cell_px).map_err(|e| PipelineError::new(Stage::Render, e))?
    };
    let mut metrics_json =
        serde_json::to_string_pretty(&ev.report).map_err(|e| PipelineError::new(Stage::Render, e))?;
    metrics_json.push('\n');
    Ok(Artifacts { stem, routed_qasm, trace_svg, trace_csv: trace_csv(&ev.trace), metrics_json })
}

/// Result of `run_pipeline`.
#[derive(Debug, Clone)]
pub struct PointResult {
    pub row: ResultRow,
    pub evaluation: Evaluation,
}

impl PointResult {
    pub fn stem(&self) -> String {
        let r = &self.row;
        format!("{}_{}_{}_{}", r.family, r.n_logical, r.topology, r.strategy)
    }

    pub fn artifacts(&self, cell_px: usize) -> Result<Artifacts, PipelineError> {
        artifacts(self.stem(), &self.evaluation, cell_px)
    }
}

/// Runs one point end to end.
pub fn run_pipeline(p: &PointConfig) -> Result<PointResult, PipelineError> {
    let c = p.family.build(p.size, p.seed, p.grover_iterations)?;
    let g = sized_for(p.topology, c.num_qubits).map_err(|e| PipelineError::new(Stage::Topology, e))?;
    let evaluation = evaluate(&c, &g, p.strategy, p.initial_mapping)?;
    let row = make_row(&p.family.label(), &c, &g, p.strategy, p.seed, &evaluation.report);
    Ok(PointResult { row, evaluation })
}

/// Runs one point and writes its artifacts into `dir`.
pub fn run_pipeline_to(p: &PointConfig, dir: &Path) -> Result<ResultRow, PipelineError> {
    let r = run_pipeline(p)?;
    r.artifacts(p.cell_px)?.write(dir)?;
    Ok(r.row)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qft8_square() {
        let p = PointConfig::new(CircuitFamily::Qft, 8, Family::Square);
        let r = run_pipeline(&p).unwrap();
        assert_eq!(r.row.n_2q, 28);
        assert_eq!(r.row.n_physical, 9);
        assert_eq!(r.row.topo_param, "3x3");
        assert_eq!(r.row.n_logical, 8);
        assert_eq!(r.row.ccr, r.row.n_swap as f64 / r.row.n_ops as f64);
    }

    #[test]
    fn deterministic_artifacts() {
        let p = PointConfig::new(CircuitFamily::Qaoa02, 8, Family::HeavyHex);
        let a = run_pipeline(&p).unwrap().artifacts(4).unwrap();
        let b = run_pipeline(&p).unwrap().artifacts(4).unwrap();
        assert_eq!(a, b);
        assert!(a.routed_qasm.starts_with("OPENQASM 2.0;"));
    }

    #[test]
    fn qubit_counts_match_generators() {
        for fam in [CircuitFamily::Qft, CircuitFamily::Cuccaro, CircuitFamily::Grover, CircuitFamily::Qaoa02] {
            for &s in &fam.default_sizes()[..3] {
                let c = fam.build(s, 42, 1).unwrap();
                assert_eq!(fam.qubits_for(s), Some(c.num_qubits));
            }
        }
    }

    #[test]
    fn stage_named_in_errors() {
        let p = PointConfig::new(CircuitFamily::Qft, 0, Family::Star);
        let e = run_pipeline(&p).unwrap_err();
        assert_eq!(e.stage, Stage::Generate);
        assert!(e.to_string().starts_with("generate stage failed"));

        let p = PointConfig::new(CircuitFamily::File("/nonexistent/x.qasm".into()), 0, Family::Star);
        assert_eq!(run_pipeline(&p).unwrap_err().stage, Stage::Load);
    }

    #[test]
    fn family_serde_forms() {
        let f: Vec<CircuitFamily> = serde_json::from_str(r#"["qft", "qaoa02", {"file": "a/b.qasm"}]"#).unwrap();
        assert_eq!(f[2], CircuitFamily::File("a/b.qasm".into()));
        assert_eq!(f[2].label(), "b");
        assert_eq!(f[1], CircuitFamily::Qaoa02);
    }
}
