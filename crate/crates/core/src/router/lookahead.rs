//! Front-layer routing with a fixed look-ahead window.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::{Emitter, Mapping, RoutedCircuit, RouterError, RoutingStats};
use crate::ir::Circuit;
use crate::topology::{CouplingGraph, DistanceMatrix};

/// Number of upcoming two-qubit gates (beyond the front layer) scored.
pub const LOOKAHEAD_WINDOW: usize = 20;
/// Weight of the window term relative to the front-layer term.
pub const LOOKAHEAD_WEIGHT: f64 = 0.5;

/// Gate dependency structure: a gate depends on the previous gate on each
/// of its qubits.
struct Dag {
    successors: Vec<Vec<usize>>,
    pending_preds: Vec<usize>,
}

impl Dag {
    fn new(c: &Circuit) -> Self {
        let n = c.len();
        let mut last: Vec<Option<usize>> = vec![None; c.num_qubits];
        let mut successors = vec![Vec::new(); n];
        let mut pending_preds = vec![0; n];
        for (i, g) in c.gates.iter().enumerate() {
            let mut preds: Vec<usize> = g.qubits().iter().filter_map(|q| last[q.index()]).collect();
            preds.dedup();
            for p in preds {
                successors[p].push(i);
                pending_preds[i] += 1;
            }
            for q in g.qubits() {
                last[q.index()] = Some(i);
            }
        }
        Dag { successors, pending_preds }
    }
}

/// Scores are kept doubled so the 0.5 window weight stays integral.
fn doubled_score(
    front: &[(usize, usize)],
    window: &[(usize, usize)],
    dist: &DistanceMatrix,
    m: &Mapping,
    swap: (usize, usize),
) -> usize {
    let at = |l: usize| {
        let p = m.phys(l);
        if p == swap.0 {
            swap.1
        } else if p == swap.1 {
            swap.0
        } else {
            p
        }
    };
    let f: usize = front.iter().map(|&(a, b)| dist.get(at(a), at(b))).sum();
    let w: usize = window.iter().map(|&(a, b)| dist.get(at(a), at(b))).sum();
    2 * f + w
}

pub(super) fn route_lookahead(
    c: &Circuit,
    g: &CouplingGraph,
    m0: &Mapping,
) -> Result<(RoutedCircuit, RoutingStats), RouterError> {
    let dist = DistanceMatrix::new(g)?;
    let mut dag = Dag::new(c);
    let mut executed = vec![false; c.len()];
    let mut ready: BTreeSet<usize> = (0..c.len()).filter(|&i| dag.pending_preds[i] == 0).collect();
    let mut em = Emitter::new(g, m0.clone(), c.len());
    let operands = |i: usize| {
        let q = c.gates[i].qubits();
        (q[0].index(), q[1].index())
    };
    // first index that might still be unexecuted
    let mut cursor = 0;

    let mut best_seen = usize::MAX;
    let mut stalled = 0;

    loop {
        // execute everything executable, smallest index first
        let mut progressed = false;
        while let Some(i) = ready.iter().copied().find(|&i| {
            let gate = &c.gates[i];
            !gate.is_two_qubit() || {
                let (a, b) = operands(i);
                g.is_adjacent(em.mapping.phys(a), em.mapping.phys(b))
            }
        }) {
            ready.remove(&i);
            em.gate(i, &c.gates[i]);
            executed[i] = true;
            for &s in &dag.successors[i] {
                dag.pending_preds[s] -= 1;
                if dag.pending_preds[s] == 0 {
                    ready.insert(s);
                }
            }
            progressed = true;
        }
        if ready.is_empty() {
            break;
        }
        if progressed {
            best_seen = usize::MAX;
            stalled = 0;
        }

        // every ready gate is now a blocked two-qubit gate
        let front: Vec<(usize, usize)> = ready.iter().map(|&i| operands(i)).collect();
        while executed[cursor] {
            cursor += 1;
        }
        let window: Vec<(usize, usize)> = (cursor..c.len())
            .filter(|&i| !executed[i] && c.gates[i].is_two_qubit() && !ready.contains(&i))
            .take(LOOKAHEAD_WINDOW)
            .map(operands)
            .collect();

        let mut candidates = BTreeSet::new();
        for &(a, b) in &front {
            for l in [a, b] {
                let p = em.mapping.phys(l);
                for &nb in g.neighbors(p) {
                    candidates.insert((p.min(nb), p.max(nb)));
                }
            }
        }
        // BTreeSet iterates in (min, max) order, so the first minimum wins ties
        let (score, swap) = candidates
            .iter()
            .map(|&s| (doubled_score(&front, &window, &dist, &em.mapping, s), s))
            .min_by_key(|&(score, _)| score)
            .expect("a blocked gate always has neighbours to swap with");

        if score < best_seen {
            best_seen = score;
            stalled = 0;
        } else {
            stalled += 1;
        }

        if stalled >= g.num_nodes() {
            // no progress: push the oldest front gate through on its path
            let oldest = *ready.first().expect("non-empty");
            em.route_along_path(&c.gates[oldest])?;
            best_seen = usize::MAX;
            stalled = 0;
        } else {
            em.swap(swap.0, swap.1);
        }
    }
    Ok(em.finish(m0.clone()))
}
