//! Acceptance checks. Prints one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p qroute --test acceptance`. The process fails if a
//! criterion fails that is not in `EXPECTED_FAILURES`, or if an expected
//! failure no longer fails (so the list cannot go stale).

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use qroute::pipeline::{evaluate, CircuitFamily, ResultRow};
use qroute::qasm::{emit_qasm, parse_qasm};
use qroute::sweep::{run_sweep_to, ExperimentConfig};
use qroute::trace::render_svg;
use qroute_core::generators;
use qroute_core::metrics::{ccr, index_of_dispersion};
use qroute_core::rng::SplitMix64;
use qroute_core::router::oracle::brute_force_min_swaps;
use qroute_core::router::{route, verify_routed};
use qroute_core::schedule::schedule_asap;
use qroute_core::topology::{self, sized_for, DistanceMatrix, Family};
use qroute_core::{
    Circuit, CouplingGraph, Gate, InitialMapping, Mapping, MetricsReport, OpCounts, RoutingStrategy,
    Trace,
};

/// Criteria that fail under the baseline router, with the measured values
/// asserted inside the check itself.
const EXPECTED_FAILURES: &[&str] = &["4a", "4b"];

type Outcome = Result<String, String>;
type Check = (&'static str, &'static str, fn() -> Outcome);

const FAMILIES: [CircuitFamily; 4] = [
    CircuitFamily::Qft,
    CircuitFamily::Cuccaro,
    CircuitFamily::Grover,
    CircuitFamily::Qaoa02,
];
const TOPOLOGIES: [Family; 3] = [Family::Star, Family::HeavyHex, Family::Square];
const STRATEGIES: [RoutingStrategy; 2] = [RoutingStrategy::Baseline, RoutingStrategy::Lookahead];
const TARGET_QUBITS: [usize; 4] = [4, 9, 16, 25];

/// Family size parameter whose qubit count is closest to `q`, smaller on ties.
fn nearest_size(f: &CircuitFamily, q: usize) -> usize {
    (1..=64)
        .filter(|&s| f.build(s, 42, 1).is_ok())
        .min_by_key(|&s| (f.qubits_for(s).unwrap().abs_diff(q), s))
        .unwrap()
}

fn conservation(rep: &MetricsReport, t: &Trace) -> Result<(), String> {
    let per_slice: usize = t.swaps_per_slice.iter().sum();
    let per_qubit: usize = t.swaps_per_qubit.iter().sum();
    if rep.n_swap() == per_slice && 2 * rep.n_swap() == per_qubit {
        Ok(())
    } else {
        Err(format!("n_swap {} vs slices {per_slice} vs qubits/2 {}", rep.n_swap(), per_qubit / 2))
    }
}

fn two_qubit_adjacent(gates: &[Gate], g: &CouplingGraph) -> bool {
    gates.iter().all(|gate| match gate.qubits() {
        [a, b] => g.is_adjacent(a.index(), b.index()),
        _ => true,
    })
}

/// Circuits of criterion 1, with a label.
fn criterion1_circuits() -> Vec<(String, Circuit)> {
    let mut out = Vec::new();
    for f in &FAMILIES {
        let mut seen = Vec::new();
        for q in TARGET_QUBITS {
            let s = nearest_size(f, q);
            if seen.contains(&s) {
                continue;
            }
            seen.push(s);
            out.push((format!("{}({s})", f.label()), f.build(s, 42, 1).unwrap()));
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut runs = 0;
    for (label, c) in criterion1_circuits() {
        for fam in TOPOLOGIES {
            let g = sized_for(fam, c.num_qubits).map_err(|e| e.to_string())?;
            for strategy in STRATEGIES {
                let m0 = Mapping::identity(c.num_qubits, g.num_nodes()).unwrap();
                let (rc, st) = route(&c, &g, &m0, strategy).map_err(|e| format!("{label}: {e}"))?;
                let what = format!("{label} on {} {}", fam.name(), strategy.name());
                if !two_qubit_adjacent(&rc.gates, &g) {
                    return Err(format!("{what}: non-adjacent two-qubit gate"));
                }
                if !verify_routed(&c, &rc) {
                    return Err(format!("{what}: verify_routed false"));
                }
                if st.n_swap_inserted != rc.n_swaps() {
                    return Err(format!("{what}: stats disagree with circuit"));
                }
                runs += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 60.0 {
        return Err(format!("{runs} routings took {secs:.1}s (limit 60s)"));
    }
    Ok(format!("{runs} routings adjacent and verified in {secs:.2}s"))
}

fn random_circuit(rng: &mut SplitMix64, n_qubits: usize) -> Circuit {
    let below = |rng: &mut SplitMix64, k: usize| (rng.next_u64() % k as u64) as usize;
    let n_2q = 1 + below(rng, 3);
    let mut c = Circuit::new("random", n_qubits);
    for _ in 0..n_2q {
        for _ in 0..below(rng, 3) {
            c.push(Gate::h(below(rng, n_qubits)));
        }
        let a = below(rng, n_qubits);
        let mut b = below(rng, n_qubits - 1);
        if b >= a {
            b += 1;
        }
        c.push(Gate::cx(a, b));
    }
    c
}

fn criterion_2() -> Outcome {
    let graphs = [
        topology::path(4).unwrap(),
        topology::path(5).unwrap(),
        topology::star(4).unwrap(),
        topology::star(5).unwrap(),
    ];
    let mut rng = SplitMix64::new(2024);
    let (mut single, mut multi, mut worst) = (0, 0, 1.0f64);
    for i in 0..200 {
        let g = &graphs[i % graphs.len()];
        let nq = 2 + (rng.next_u64() % (g.num_nodes() as u64 - 1)) as usize;
        let c = random_circuit(&mut rng, nq);
        let m0 = Mapping::identity(nq, g.num_nodes()).unwrap();
        let (rc, _) = route(&c, g, &m0, RoutingStrategy::Baseline).map_err(|e| e.to_string())?;
        let base = rc.n_swaps();
        let opt = brute_force_min_swaps(&c, g, &m0, 6)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("case {i}: optimum above budget 6"))?;
        let n_2q = c.two_qubit_gates().count();
        let ok = if n_2q == 1 {
            single += 1;
            base == opt
        } else {
            multi += 1;
            if opt > 0 {
                worst = worst.max(base as f64 / opt as f64);
            }
            opt <= base && base <= 3 * opt
        };
        if !ok {
            return Err(format!("case {i}: baseline {base} vs optimum {opt} ({n_2q} two-qubit gates) on {:?}", g.kind()));
        }
    }
    Ok(format!("200 cases: {single} single-gate exact, {multi} multi-gate within [1x, {worst:.2}x]"))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12
}

fn criterion_3() -> Outcome {
    let d = |v: &[usize]| index_of_dispersion(v).unwrap();
    if !close(d(&[4, 0, 0, 0]), 3.0) || !close(d(&[2, 2, 2]), 0.0) {
        return Err("index_of_dispersion fixtures".into());
    }
    let counts = OpCounts { n_ops: 12, n_swap: 3, n_1q: 12, n_2q: 0 };
    if !close(ccr(&counts).unwrap(), 0.25) {
        return Err("ccr fixture".into());
    }
    let mut runs = 0;
    for (label, c) in criterion1_circuits() {
        for fam in TOPOLOGIES {
            let g = sized_for(fam, c.num_qubits).unwrap();
            for strategy in STRATEGIES {
                let ev = evaluate(&c, &g, strategy, InitialMapping::Identity).map_err(|e| e.to_string())?;
                conservation(&ev.report, &ev.trace).map_err(|e| format!("{label}: {e}"))?;
                runs += 1;
            }
        }
    }
    Ok(format!("fixtures exact; swap conservation on {runs} pipeline runs"))
}

fn qft_point(n: usize, g: &CouplingGraph) -> MetricsReport {
    let c = generators::qft(n).unwrap();
    evaluate(&c, g, RoutingStrategy::Baseline, InitialMapping::Identity).unwrap().report
}

fn criterion_4a() -> Outcome {
    let ccrs: Vec<(usize, f64)> =
        [8, 16, 24].iter().map(|&n| (n, qft_point(n, &topology::star(n).unwrap()).ccr)).collect();
    // Swap counts 6, 14, 22 over 36, 136, 300 ops, reproduced by an
    // independent simulation of the baseline rule on a star.
    let expected = [6.0 / 36.0, 14.0 / 136.0, 22.0 / 300.0];
    assert!(ccrs.iter().zip(expected).all(|(&(_, a), b)| close(a, b)), "star QFT ccr drifted: {ccrs:?}");
    let max = ccrs.iter().map(|p| p.1).fold(f64::MIN, f64::max);
    let min = ccrs.iter().map(|p| p.1).fold(f64::MAX, f64::min);
    let detail = format!(
        "star QFT ccr {}, max/min = {:.4}",
        ccrs.iter().map(|(n, c)| format!("n={n}: {c:.4}")).collect::<Vec<_>>().join(", "),
        max / min
    );
    if max / min <= 2.0 {
        Ok(detail)
    } else {
        Err(format!("{detail} > 2.0"))
    }
}

fn criterion_4b() -> Outcome {
    let hs: Vec<f64> = [8, 16, 24].iter().map(|&n| qft_point(n, &topology::star(n).unwrap()).hotspotness).collect();
    let increasing = hs.windows(2).all(|w| w[0] < w[1]);
    let star25 = qft_point(25, &topology::star(25).unwrap()).hotspotness;
    let square25 = qft_point(25, &topology::square_lattice(5, 5).unwrap()).hotspotness;
    // Values reproduced by an independent baseline-router simulation.
    let pinned = [2.0, 5.75, 9.666666666666675, 10.16, 22.707124463519317];
    let got = [hs[0], hs[1], hs[2], star25, square25];
    assert!(got.iter().zip(pinned).all(|(a, b)| (a - b).abs() <= 1e-9), "hotspotness drifted: {got:?}");
    let detail = format!(
        "star QFT hotspotness n=8,16,24: {:.4}, {:.4}, {:.4} ({}); n=25 star {star25:.4} vs square 5x5 {square25:.4}",
        hs[0],
        hs[1],
        hs[2],
        if increasing { "strictly increasing" } else { "not increasing" },
    );
    if increasing && star25 > square25 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_4c() -> Outcome {
    let sq = qft_point(49, &topology::square_lattice(7, 7).unwrap()).ccr;
    let hh_graph = topology::heavy_hex(7).unwrap();
    let hh = qft_point(49, &hh_graph).ccr;
    let detail = format!("QFT n=49 ccr: square 7x7 {sq:.4}, heavy-hex d=7 ({} nodes) {hh:.4}", hh_graph.num_nodes());
    if sq <= hh {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Mutations of a valid program: byte edits, truncation and splicing.
fn malformed(rng: &mut SplitMix64, seeds: &[String]) -> String {
    const ALPHABET: &[u8] = b"OPENQASM2.0;qreg q[]cxhrzpi/*+-()\n\t //\"include,measure->barrier0123456789eE.{}#@";
    let below = |rng: &mut SplitMix64, k: usize| (rng.next_u64() % k.max(1) as u64) as usize;
    let mut b: Vec<u8> = seeds[below(rng, seeds.len())].clone().into_bytes();
    match below(rng, 4) {
        0 => b.truncate(below(rng, b.len() + 1)),
        1 => {
            let other = seeds[below(rng, seeds.len())].as_bytes();
            let cut = below(rng, b.len() + 1);
            let from = below(rng, other.len() + 1);
            b.truncate(cut);
            b.extend_from_slice(&other[from..]);
        }
        2 => b = (0..below(rng, 80)).map(|_| ALPHABET[below(rng, ALPHABET.len())]).collect(),
        _ => {}
    }
    for _ in 0..1 + below(rng, 6) {
        let pos = below(rng, b.len() + 1);
        let ch = ALPHABET[below(rng, ALPHABET.len())];
        match below(rng, 3) {
            0 => b.insert(pos, ch),
            1 if pos < b.len() => {
                b.remove(pos);
            }
            _ if pos < b.len() => b[pos] = ch,
            _ => b.push(ch),
        }
    }
    String::from_utf8_lossy(&b).into_owned()
}

fn criterion_5() -> Outcome {
    let mut round_trips = 0;
    let mut texts = Vec::new();
    for (label, c) in criterion1_circuits() {
        let text = emit_qasm(&c);
        let back = parse_qasm(&text).map_err(|e| format!("{label}: {e}"))?;
        if back != c {
            return Err(format!("{label}: round trip changed the circuit"));
        }
        round_trips += 1;
        // routed output carries routing markers
        let g = sized_for(Family::Star, c.num_qubits).unwrap();
        let m0 = Mapping::identity(c.num_qubits, g.num_nodes()).unwrap();
        let routed = route(&c, &g, &m0, RoutingStrategy::Baseline).unwrap().0.to_circuit(label.clone());
        if parse_qasm(&emit_qasm(&routed)).as_ref() != Ok(&routed) {
            return Err(format!("{label}: routed round trip changed the circuit"));
        }
        round_trips += 1;
        if text.len() < 4000 {
            texts.push(text);
        }
    }
    texts.push("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\ncreg c[3];\nrz(-3*pi/8) q[0];\ncu1(pi/2) q[0],q[1];\nccx q[0],q[1],q[2];\nbarrier q;\nmeasure q[0] -> c[0];\n// routing\nswap q[1],q[2];\n".into());

    let mut rng = SplitMix64::new(7);
    let (mut ok, mut err) = (0, 0);
    let hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let mut crash = None;
    for i in 0..10_000 {
        let input = malformed(&mut rng, &texts);
        match std::panic::catch_unwind(|| parse_qasm(&input)) {
            Ok(Ok(c)) => {
                if c.validate().is_err() {
                    crash = Some(format!("case {i}: parser accepted an invalid circuit"));
                    break;
                }
                ok += 1;
            }
            Ok(Err(e)) if e.line >= 1 && e.col >= 1 => err += 1,
            Ok(Err(e)) => {
                crash = Some(format!("case {i}: unpositioned error {e}"));
                break;
            }
            Err(_) => {
                crash = Some(format!("case {i}: parser panicked on {input:?}"));
                break;
            }
        }
    }
    std::panic::set_hook(hook);
    if let Some(c) = crash {
        return Err(c);
    }
    Ok(format!("{round_trips} round trips exact; fuzz 10000 inputs, 0 crashes ({ok} parsed, {err} positioned errors)"))
}

fn criterion_6() -> Outcome {
    for (d, nodes) in [(3, 18), (5, 55), (7, 112)] {
        let g = topology::heavy_hex(d).map_err(|e| e.to_string())?;
        if g.num_nodes() != nodes || g.max_degree() != 3 {
            return Err(format!("heavy-hex d={d}: {} nodes, max degree {}", g.num_nodes(), g.max_degree()));
        }
        if g.bfs(0).iter().any(Option::is_none) {
            return Err(format!("heavy-hex d={d} disconnected"));
        }
    }
    for (r, c) in [(1, 2), (2, 2), (3, 3), (3, 5), (7, 7)] {
        let g = topology::square_lattice(r, c).map_err(|e| e.to_string())?;
        if g.num_edges() != r * (c - 1) + c * (r - 1) {
            return Err(format!("square {r}x{c}: {} edges", g.num_edges()));
        }
    }
    for n in [3, 5, 25] {
        let g = topology::star(n).unwrap();
        let dm = DistanceMatrix::new(&g).unwrap();
        for u in 0..n {
            for v in 0..n {
                let want = if u == v { 0 } else if u == 0 || v == 0 { 1 } else { 2 };
                if dm.get(u, v) != want {
                    return Err(format!("star({n}) dist({u},{v}) = {}", dm.get(u, v)));
                }
            }
        }
    }
    Ok("heavy-hex 18/55/112 nodes, degree 3, connected; square edge formula; star distances".into())
}

fn criterion_7() -> Outcome {
    let render = || {
        let g = topology::path(3).unwrap();
        let c = Circuit::with_gates("path3", 3, vec![Gate::cx(0, 2)]);
        let m0 = Mapping::identity(3, 3).unwrap();
        let (rc, _) = route(&c, &g, &m0, RoutingStrategy::Baseline).unwrap();
        let t = schedule_asap(&rc);
        (render_svg(&t, 10).unwrap(), t)
    };
    let (svg, t) = render();
    let rects: Vec<&str> = svg.lines().filter(|l| l.starts_with("<rect")).collect();
    if rects.len() != t.num_qubits() * t.makespan() || svg.matches("<rect").count() != rects.len() {
        return Err(format!("{} rects for {}x{}", rects.len(), t.num_qubits(), t.makespan()));
    }
    let white_x: Vec<&str> = rects
        .iter()
        .filter(|r| r.contains("fill=\"#FFFFFF\""))
        .map(|r| r.split('"').nth(1).unwrap())
        .collect();
    if white_x.len() != 2 || white_x[0] != white_x[1] {
        return Err(format!("white cells at x = {white_x:?}"));
    }
    if render().0 != svg {
        return Err("two renders differ".into());
    }
    Ok(format!("{} rects ({}x{}), two white cells in one column, byte-identical", rects.len(), t.num_qubits(), t.makespan()))
}

fn read_tree(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in std::fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let cfg = ExperimentConfig::default_sweep();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let ra = run_sweep_to(&cfg, a.path()).map_err(|e| e.to_string())?;
    run_sweep_to(&cfg, b.path()).map_err(|e| e.to_string())?;
    let (ta, tb) = (read_tree(a.path()), read_tree(b.path()));
    if ta.keys().ne(tb.keys()) {
        return Err("runs wrote different file sets".into());
    }
    if let Some(k) = ta.keys().find(|k| ta[*k] != tb[*k]) {
        return Err(format!("{k} differs between runs"));
    }
    if !ra.errors.is_empty() {
        return Err(format!("{} sweep points failed", ra.errors.len()));
    }
    // CSV and JSON carry the same rows
    let csv = String::from_utf8(ta["results.csv"].clone()).unwrap();
    let from_csv = qroute::sweep::read_rows_csv(&csv).map_err(|e| e.to_string())?;
    let json: serde_json::Value = serde_json::from_slice(&ta["results.json"]).unwrap();
    let from_json: Vec<ResultRow> = serde_json::from_value(json["rows"].clone()).unwrap();
    if from_csv != from_json || from_csv != ra.rows {
        return Err("results.csv and results.json disagree".into());
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(600) {
        return Err(format!("two sweeps took {:.0}s", elapsed.as_secs_f64()));
    }
    let bytes: usize = ta.values().map(Vec::len).sum();
    Ok(format!(
        "{} rows, {} files ({:.0} MB) byte-identical across two runs in {:.1}s",
        ra.rows.len(),
        ta.len(),
        bytes as f64 / 1e6,
        elapsed.as_secs_f64()
    ))
}

fn main() {
    let checks: [Check; 10] = [
        ("1", "router validity and semantics", criterion_1),
        ("2", "baseline against exhaustive optimum", criterion_2),
        ("3", "metric fixtures and swap conservation", criterion_3),
        ("4a", "star CCR low and stable", criterion_4a),
        ("4b", "star hotspotness surge", criterion_4b),
        ("4c", "square CCR at most heavy-hex CCR", criterion_4c),
        ("5", "parser round trip and fuzz", criterion_5),
        ("6", "topology audits", criterion_6),
        ("7", "trace rendering", criterion_7),
        ("8", "end-to-end determinism", criterion_8),
    ];
    let mut unexpected = Vec::new();
    for (id, name, check) in checks {
        let expected_fail = EXPECTED_FAILURES.contains(&id);
        match check() {
            Ok(detail) => {
                println!("PASS [{id}] {name}: {detail}");
                if expected_fail {
                    unexpected.push(format!("{id} passed but is listed as an expected failure"));
                }
            }
            Err(detail) => {
                let tag = if expected_fail { " (known)" } else { "" };
                println!("FAIL [{id}] {name}{tag}: {detail}");
                if !expected_fail {
                    unexpected.push(format!("{id} failed"));
                }
            }
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: no unexpected outcomes");
    } else {
        println!("acceptance: {}", unexpected.join("; "));
        std::process::exit(1);
    }
}
