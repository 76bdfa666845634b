//! Exhaustive minimum-swap search for tiny instances. Used as a test oracle.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;

use super::{Mapping, RouterError};
use crate::ir::Circuit;
use crate::topology::CouplingGraph;

pub const MAX_NODES: usize = 6;
pub const MAX_TWO_QUBIT_GATES: usize = 3;
pub const MAX_BUDGET: usize = 6;

/// Minimum number of swaps needed to execute the two-qubit gates of `c`
/// in order, starting from `m0`. Returns `Ok(None)` when the minimum exceeds
/// `budget`.
///
/// Breadth-first over `(mapping, gates done)`; executing an adjacent gate is
/// free and never changes the mapping, so each state is closed under
/// execution before it is expanded by single swaps.
pub fn brute_force_min_swaps(
    c: &Circuit,
    g: &CouplingGraph,
    m0: &Mapping,
    budget: usize,
) -> Result<Option<usize>, RouterError> {
    if g.num_nodes() > MAX_NODES {
        return Err(RouterError::InstanceTooLarge("more than 6 nodes"));
    }
    let pairs: Vec<(usize, usize)> = c
        .two_qubit_gates()
        .map(|gate| (gate.qubits()[0].index(), gate.qubits()[1].index()))
        .collect();
    if pairs.len() > MAX_TWO_QUBIT_GATES {
        return Err(RouterError::InstanceTooLarge("more than 3 two-qubit gates"));
    }
    if budget > MAX_BUDGET {
        return Err(RouterError::InstanceTooLarge("budget above 6"));
    }
    if m0.num_logical() != c.num_qubits || m0.num_physical() != g.num_nodes() {
        return Err(RouterError::MappingMismatch);
    }

    let advance = |m: &Mapping, mut done: usize| {
        while done < pairs.len() && g.is_adjacent(m.phys(pairs[done].0), m.phys(pairs[done].1)) {
            done += 1;
        }
        done
    };
    let edges = g.edges();

    let start = (m0.clone(), advance(m0, 0));
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back((start, 0usize));
    while let Some(((m, done), cost)) = queue.pop_front() {
        if done == pairs.len() {
            return Ok(Some(cost));
        }
        if cost == budget {
            continue;
        }
        for &(a, b) in &edges {
            let mut next = m.clone();
            next.swap_physical(a, b);
            let d = advance(&next, done);
            let key = (next, d);
            if seen.insert(key.clone()) {
                queue.push_back((key, cost + 1));
            }
        }
    }
    Ok(None)
}
