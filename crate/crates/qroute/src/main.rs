use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qroute::pipeline::{evaluate, load_circuit, CircuitFamily, PipelineError};
use qroute::qasm::emit_qasm;
use qroute::report::render_report;
use qroute::sweep::{read_rows_csv, run_sweep_to, ExperimentConfig};
use qroute::trace::{edge_list, render_svg, trace_csv, DEFAULT_CELL_PX};
use qroute_core::metrics::analyze_gates;
use qroute_core::schedule::schedule_gates;
use qroute_core::topology::{self, sized_for, Family};
use qroute_core::{CouplingGraph, InitialMapping, RoutingStrategy};

#[derive(Parser)]
#[command(name = "qroute", version, about = "Route quantum circuits onto chip topologies and measure the communication overhead")]
#[command(subcommand_required = false, arg_required_else_help = true)]
struct Cli {
    /// Print a topology as an edge list: `star N`, `path N`, `heavy_hex D`,
    /// `square R C` or `square RxC`.
    #[arg(long, num_args = 2..=3, value_names = ["T", "PARAMS"])]
    dump_topology: Option<Vec<String>>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark circuit as OpenQASM.
    Gen {
        #[arg(long)]
        family: String,
        /// qft/qaoa02: qubits; cuccaro: operand bits; grover: data qubits.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Grover iterations.
        #[arg(long, default_value_t = 1)]
        iterations: usize,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Route a circuit file onto a topology.
    Route {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        topo: TopoArgs,
        #[arg(long, default_value = "baseline", value_parser = parse_strategy)]
        strategy: RoutingStrategy,
        #[arg(long, default_value = "identity", value_parser = parse_mapping)]
        mapping: InitialMapping,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Schedule a routed circuit and compute its metrics.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        topo: TopoArgs,
        /// Write metrics.json into the output directory.
        #[arg(long)]
        json: bool,
        /// Write trace.csv into the output directory.
        #[arg(long)]
        csv: bool,
        /// Write trace.svg into the output directory.
        #[arg(long)]
        svg: bool,
        #[arg(short, long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CELL_PX)]
        cell_px: usize,
    },
    /// Run a size sweep described by a JSON config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `output_dir` in the config.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Draw metric charts from a results CSV.
    Render {
        #[arg(long)]
        rows: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct TopoArgs {
    /// star, heavy_hex, square or path.
    #[arg(long)]
    topology: String,
    /// Heavy-hex code distance.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, requires = "cols")]
    rows: Option<usize>,
    #[arg(long, requires = "rows")]
    cols: Option<usize>,
    /// Star or path node count.
    #[arg(long)]
    n: Option<usize>,
}

enum Failure {
    Usage(String),
    Data(String),
    Verify(String),
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        if e.is_verification() {
            Failure::Verify(e.to_string())
        } else {
            Failure::Data(e.to_string())
        }
    }
}

fn data(e: impl std::fmt::Display) -> Failure {
    Failure::Data(e.to_string())
}

fn parse_strategy(s: &str) -> Result<RoutingStrategy, String> {
    match s {
        "baseline" => Ok(RoutingStrategy::Baseline),
        "lookahead" => Ok(RoutingStrategy::Lookahead),
        _ => Err(format!("unknown strategy {s:?} (baseline, lookahead)")),
    }
}

fn parse_mapping(s: &str) -> Result<InitialMapping, String> {
    match s {
        "identity" => Ok(InitialMapping::Identity),
        "degree_matched" => Ok(InitialMapping::DegreeMatched),
        _ => Err(format!("unknown mapping {s:?} (identity, degree_matched)")),
    }
}

fn family_of(name: &str) -> Result<Option<Family>, Failure> {
    match name {
        "star" => Ok(Some(Family::Star)),
        "heavy_hex" | "heavy-hex" => Ok(Some(Family::HeavyHex)),
        "square" => Ok(Some(Family::Square)),
        "path" => Ok(None),
        _ => Err(Failure::Usage(format!("unknown topology {name:?} (star, heavy_hex, square, path)"))),
    }
}

/// Builds the topology from explicit parameters, or sizes it for `qubits`.
fn build_topology(t: &TopoArgs, qubits: usize) -> Result<CouplingGraph, Failure> {
    let fam = family_of(&t.topology)?;
    let g = match (fam, t.d, t.rows.zip(t.cols), t.n) {
        (Some(Family::HeavyHex), Some(d), None, None) => topology::heavy_hex(d),
        (Some(Family::Square), None, Some((r, c)), None) => topology::square_lattice(r, c),
        (Some(Family::Star), None, None, Some(n)) => topology::star(n),
        (None, None, None, Some(n)) => topology::path(n),
        (None, None, None, None) => topology::path(qubits.max(2)),
        (Some(f), None, None, None) => sized_for(f, qubits),
        _ => {
            return Err(Failure::Usage(format!(
                "parameters do not fit topology {} (heavy_hex: --d, square: --rows/--cols, star/path: --n)",
                t.topology
            )))
        }
    };
    g.map_err(data)
}

fn dump_topology(args: &[String]) -> Result<String, Failure> {
    let usage = || Failure::Usage("--dump-topology expects `star N`, `path N`, `heavy_hex D` or `square R C`".into());
    let num = |s: &str| s.parse::<usize>().map_err(|_| usage());
    let g = match (args[0].as_str(), &args[1..]) {
        ("star", [n]) => topology::star(num(n)?),
        ("path", [n]) => topology::path(num(n)?),
        ("heavy_hex" | "heavy-hex", [d]) => topology::heavy_hex(num(d)?),
        ("square", [r, c]) => topology::square_lattice(num(r)?, num(c)?),
        ("square", [rc]) => {
            let (r, c) = rc.split_once('x').ok_or_else(usage)?;
            topology::square_lattice(num(r)?, num(c)?)
        }
        _ => return Err(usage()),
    };
    Ok(edge_list(&g.map_err(data)?))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| data(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(args) = &cli.dump_topology {
        print!("{}", dump_topology(args)?);
        if cli.command.is_none() {
            return Ok(());
        }
    }
    let Some(command) = cli.command else {
        return Err(Failure::Usage("no subcommand given".into()));
    };
    match command {
        Command::Gen { family, n, seed, iterations, out } => {
            let fam = CircuitFamily::parse(&family)
                .ok_or_else(|| Failure::Usage(format!("unknown family {family:?} (qft, cuccaro, grover, qaoa02)")))?;
            let c = fam.build(n, seed, iterations)?;
            write_out(out.as_deref(), &emit_qasm(&c))
        }
        Command::Route { input, topo, strategy, mapping, out } => {
            let c = load_circuit(&input)?;
            let g = build_topology(&topo, c.num_qubits)?;
            let ev = evaluate(&c, &g, strategy, mapping)?;
            let routed = ev.routed.to_circuit(c.name.clone());
            eprintln!(
                "{}: {} swaps on {} {} ({} physical qubits)",
                c.name,
                ev.report.n_swap(),
                g.kind().family(),
                g.kind(),
                g.num_nodes()
            );
            write_out(out.as_deref(), &emit_qasm(&routed))
        }
        Command::Analyze { input, topo, json, csv, svg, out, cell_px } => {
            let c = load_circuit(&input)?;
            let g = build_topology(&topo, c.num_qubits)?;
            if g.num_nodes() != c.num_qubits {
                return Err(data(format!(
                    "routed circuit has {} qubits, topology has {} nodes",
                    c.num_qubits,
                    g.num_nodes()
                )));
            }
            for (i, gate) in c.gates.iter().enumerate() {
                if let [a, b] = gate.qubits() {
                    if !g.is_adjacent(a.index(), b.index()) {
                        return Err(data(format!("gate {i} acts on uncoupled qubits {} and {}", a.index(), b.index())));
                    }
                }
            }
            let trace = schedule_gates(c.num_qubits, &c.gates);
            let report = analyze_gates(&c.gates, &trace).map_err(data)?;
            let mut metrics = serde_json::to_string_pretty(&report).map_err(data)?;
            metrics.push('\n');
            if !(json || csv || svg) {
                print!("{metrics}");
                return Ok(());
            }
            std::fs::create_dir_all(&out).map_err(data)?;
            if json {
                write_out(Some(&out.join("metrics.json")), &metrics)?;
            }
            if csv {
                write_out(Some(&out.join("trace.csv")), &trace_csv(&trace))?;
            }
            if svg {
                let s = render_svg(&trace, cell_px).map_err(data)?;
                write_out(Some(&out.join("trace.svg")), &s)?;
            }
            Ok(())
        }
        Command::Sweep { config, out } => {
            let text = std::fs::read_to_string(&config).map_err(|e| data(format!("{}: {e}", config.display())))?;
            let cfg = ExperimentConfig::from_json(&text).map_err(data)?;
            let dir = out
                .or_else(|| cfg.output_dir.clone())
                .ok_or_else(|| Failure::Usage("sweep needs -o DIR or output_dir in the config".into()))?;
            let res = run_sweep_to(&cfg, &dir)?;
            eprintln!("{} rows, {} failed points, written to {}", res.rows.len(), res.errors.len(), dir.display());
            for e in &res.errors {
                eprintln!("  {} size {} on {}: {} stage: {}", e.family, e.size, e.topology, e.stage, e.message);
            }
            if let Some(e) = res.errors.iter().find(|e| e.stage == qroute::pipeline::Stage::Verify) {
                return Err(Failure::Verify(e.message.clone()));
            }
            Ok(())
        }
        Command::Render { rows, out } => {
            let text = std::fs::read_to_string(&rows).map_err(|e| data(format!("{}: {e}", rows.display())))?;
            let rows = read_rows_csv(&text).map_err(data)?;
            let charts = render_report(&rows).map_err(data)?;
            std::fs::create_dir_all(&out).map_err(data)?;
            for (name, svg) in charts {
                write_out(Some(&out.join(name)), &svg)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Verify(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}
