//! SWAP-insertion routing.
//!
//! The router rewrites a logical circuit onto the physical qubits of a
//! [`CouplingGraph`], inserting routing swaps so that every two-qubit gate
//! acts on coupled qubits. Two strategies ship:
//!
//! * [`RoutingStrategy::Baseline`] walks the circuit in order and, for each
//!   non-adjacent pair, moves the operand on the smaller physical id along
//!   the lexicographically smallest shortest path.
//! * [`RoutingStrategy::Lookahead`] keeps a front layer of ready two-qubit
//!   gates and picks swaps by a front-plus-window distance score.

mod lookahead;
pub mod oracle;

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::ir::{Circuit, Gate, QubitId, Violation};
use crate::topology::{CouplingGraph, TopologyError};

pub use self::lookahead::{LOOKAHEAD_WEIGHT, LOOKAHEAD_WINDOW};
pub use self::oracle::brute_force_min_swaps;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RouterError {
    #[error("circuit needs {logical} qubits but the chip has {physical}")]
    CircuitTooLarge { logical: usize, physical: usize },
    #[error("invalid circuit: {} violation(s), first: {}", .0.len(), .0[0])]
    InvalidCircuit(Vec<Violation>),
    #[error("mapping does not match circuit/graph sizes")]
    MappingMismatch,
    #[error("mapping is not injective or out of range")]
    BadMapping,
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("instance too large for exhaustive search: {0}")]
    InstanceTooLarge(&'static str),
}

/// Logical-to-physical placement with its exact inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mapping {
    log_to_phys: Vec<usize>,
    phys_to_log: Vec<Option<usize>>,
}

impl Mapping {
    pub fn identity(num_logical: usize, num_physical: usize) -> Result<Self, RouterError> {
        Self::from_placement((0..num_logical).collect(), num_physical)
    }

    /// `placement[l]` is the physical home of logical `l`.
    pub fn from_placement(placement: Vec<usize>, num_physical: usize) -> Result<Self, RouterError> {
        if placement.len() > num_physical {
            return Err(RouterError::CircuitTooLarge {
                logical: placement.len(),
                physical: num_physical,
            });
        }
        let mut phys_to_log = vec![None; num_physical];
        for (l, &p) in placement.iter().enumerate() {
            if p >= num_physical || phys_to_log[p].is_some() {
                return Err(RouterError::BadMapping);
            }
            phys_to_log[p] = Some(l);
        }
        Ok(Mapping {
            log_to_phys: placement,
            phys_to_log,
        })
    }

    pub fn num_logical(&self) -> usize {
        self.log_to_phys.len()
    }

    pub fn num_physical(&self) -> usize {
        self.phys_to_log.len()
    }

    #[inline]
    pub fn phys(&self, logical: usize) -> usize {
        self.log_to_phys[logical]
    }

    #[inline]
    pub fn logical(&self, physical: usize) -> Option<usize> {
        self.phys_to_log[physical]
    }

    pub fn log_to_phys(&self) -> &[usize] {
        &self.log_to_phys
    }

    pub fn phys_to_log(&self) -> &[Option<usize>] {
        &self.phys_to_log
    }

    /// Exchanges the contents of two physical qubits. Either may be empty.
    pub fn swap_physical(&mut self, a: usize, b: usize) {
        self.phys_to_log.swap(a, b);
        for p in [a, b] {
            if let Some(l) = self.phys_to_log[p] {
                self.log_to_phys[l] = p;
            }
        }
    }

    pub(crate) fn to_physical(&self, g: &Gate) -> Gate {
        g.map_qubits(|q| QubitId(self.phys(q.index())))
    }
}

/// Initial placement policy.
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum InitialMapping {
    #[default]
    Identity,
    /// Busiest logical qubits (by two-qubit gate participation) onto the
    /// highest-degree physical nodes; ties broken by index on both sides.
    DegreeMatched,
}

impl InitialMapping {
    pub fn name(self) -> &'static str {
        match self {
            InitialMapping::Identity => "identity",
            InitialMapping::DegreeMatched => "degree_matched",
        }
    }

    pub fn build(self, c: &Circuit, g: &CouplingGraph) -> Result<Mapping, RouterError> {
        let (nl, np) = (c.num_qubits, g.num_nodes());
        if nl > np {
            return Err(RouterError::CircuitTooLarge { logical: nl, physical: np });
        }
        match self {
            InitialMapping::Identity => Mapping::identity(nl, np),
            InitialMapping::DegreeMatched => {
                let mut load = vec![0usize; nl];
                for gate in c.two_qubit_gates() {
                    for q in gate.qubits() {
                        if let Some(x) = load.get_mut(q.index()) {
                            *x += 1;
                        }
                    }
                }
                let mut logical: Vec<usize> = (0..nl).collect();
                logical.sort_by_key(|&l| (core::cmp::Reverse(load[l]), l));
                let mut physical: Vec<usize> = (0..np).collect();
                physical.sort_by_key(|&p| (core::cmp::Reverse(g.degree(p)), p));
                let mut placement = vec![0; nl];
                for (&l, &p) in logical.iter().zip(&physical) {
                    placement[l] = p;
                }
                Mapping::from_placement(placement, np)
            }
        }
    }
}

#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum RoutingStrategy {
    #[default]
    Baseline,
    Lookahead,
}

impl RoutingStrategy {
    pub fn name(self) -> &'static str {
        match self {
            RoutingStrategy::Baseline => "baseline",
            RoutingStrategy::Lookahead => "lookahead",
        }
    }
}

/// A circuit rewritten onto physical qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct RoutedCircuit {
    pub graph: CouplingGraph,
    pub initial_mapping: Mapping,
    pub final_mapping: Mapping,
    /// Gates over physical qubit ids; inserted swaps carry the routing flag.
    pub gates: Vec<Gate>,
}

impl RoutedCircuit {
    pub fn num_physical(&self) -> usize {
        self.graph.num_nodes()
    }

    pub fn n_swaps(&self) -> usize {
        self.gates.iter().filter(|g| g.is_routing()).count()
    }

    /// The routed gates as a circuit over all physical qubits.
    pub fn to_circuit(&self, name: impl Into<alloc::string::String>) -> Circuit {
        Circuit::with_gates(name, self.num_physical(), self.gates.clone())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoutingStats {
    pub n_swap_inserted: usize,
    /// `(source gate index, swaps inserted right before it)`, only for gates
    /// that needed swaps.
    pub per_gate_swaps: Vec<(usize, usize)>,
}

/// Emits gates and swaps while keeping the mapping and statistics in step.
pub(crate) struct Emitter<'g> {
    pub graph: &'g CouplingGraph,
    pub mapping: Mapping,
    pub gates: Vec<Gate>,
    pub stats: RoutingStats,
    pending: usize,
}

impl<'g> Emitter<'g> {
    pub fn new(graph: &'g CouplingGraph, mapping: Mapping, capacity: usize) -> Self {
        Emitter {
            graph,
            mapping,
            gates: Vec::with_capacity(capacity),
            stats: RoutingStats::default(),
            pending: 0,
        }
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        debug_assert!(self.graph.is_adjacent(a, b));
        self.gates.push(Gate::routing_swap(a, b));
        self.mapping.swap_physical(a, b);
        self.stats.n_swap_inserted += 1;
        self.pending += 1;
    }

    pub fn gate(&mut self, index: usize, g: &Gate) {
        let pg = self.mapping.to_physical(g);
        debug_assert!(!pg.is_two_qubit() || self.graph.is_adjacent(pg.qubits()[0].0, pg.qubits()[1].0));
        self.gates.push(pg);
        if self.pending > 0 {
            self.stats.per_gate_swaps.push((index, self.pending));
            self.pending = 0;
        }
    }

    /// Moves the operand on the smaller physical id along the canonical
    /// shortest path until it neighbours the other operand.
    pub fn route_along_path(&mut self, g: &Gate) -> Result<(), RouterError> {
        let p = self.mapping.phys(g.qubits()[0].index());
        let q = self.mapping.phys(g.qubits()[1].index());
        if self.graph.is_adjacent(p, q) {
            return Ok(());
        }
        let (s, t) = (p.min(q), p.max(q));
        let path = self.graph.shortest_path(s, t)?;
        for k in 0..path.len() - 2 {
            self.swap(path[k], path[k + 1]);
        }
        Ok(())
    }

    pub fn finish(self, initial: Mapping) -> (RoutedCircuit, RoutingStats) {
        (
            RoutedCircuit {
                graph: self.graph.clone(),
                initial_mapping: initial,
                final_mapping: self.mapping,
                gates: self.gates,
            },
            self.stats,
        )
    }
}

fn check_inputs(c: &Circuit, g: &CouplingGraph, m0: &Mapping) -> Result<(), RouterError> {
    c.validate().map_err(RouterError::InvalidCircuit)?;
    if c.num_qubits > g.num_nodes() {
        return Err(RouterError::CircuitTooLarge {
            logical: c.num_qubits,
            physical: g.num_nodes(),
        });
    }
    if m0.num_logical() != c.num_qubits || m0.num_physical() != g.num_nodes() {
        return Err(RouterError::MappingMismatch);
    }
    Ok(())
}

/// Routes `c` onto `g` starting from placement `m0`.
pub fn route(
    c: &Circuit,
    g: &CouplingGraph,
    m0: &Mapping,
    strategy: RoutingStrategy,
) -> Result<(RoutedCircuit, RoutingStats), RouterError> {
    check_inputs(c, g, m0)?;
    match strategy {
        RoutingStrategy::Baseline => route_baseline(c, g, m0),
        RoutingStrategy::Lookahead => lookahead::route_lookahead(c, g, m0),
    }
}

fn route_baseline(
    c: &Circuit,
    g: &CouplingGraph,
    m0: &Mapping,
) -> Result<(RoutedCircuit, RoutingStats), RouterError> {
    let mut em = Emitter::new(g, m0.clone(), c.len());
    for (i, gate) in c.gates.iter().enumerate() {
        if gate.is_two_qubit() {
            em.route_along_path(gate)?;
        }
        em.gate(i, gate);
    }
    Ok(em.finish(m0.clone()))
}

/// Checks that `rc` is a faithful routing of `c`.
///
/// Every two-qubit gate must act on coupled qubits, and replaying the
/// routing swaps from the initial mapping must translate the remaining
/// gates back into the gates of `c`, each logical qubit seeing its gates in
/// the original order (the lookahead router may interleave independent
/// gates; the baseline router reproduces the exact sequence). The replayed
/// mapping must end at `rc.final_mapping`.
pub fn verify_routed(c: &Circuit, rc: &RoutedCircuit) -> bool {
    let g = &rc.graph;
    let n_phys = g.num_nodes();
    if rc.initial_mapping.num_logical() != c.num_qubits
        || rc.initial_mapping.num_physical() != n_phys
    {
        return false;
    }

    // per-logical queues of original gate indices
    let mut queue: Vec<Vec<usize>> = vec![Vec::new(); c.num_qubits];
    for (i, gate) in c.gates.iter().enumerate() {
        for q in gate.qubits() {
            match queue.get_mut(q.index()) {
                Some(v) => v.push(i),
                None => return false,
            }
        }
    }
    let mut head = vec![0usize; c.num_qubits];

    let mut mapping = rc.initial_mapping.clone();
    for gate in &rc.gates {
        let qs = gate.qubits();
        if qs.iter().any(|q| q.index() >= n_phys) {
            return false;
        }
        if gate.is_two_qubit() && !g.is_adjacent(qs[0].index(), qs[1].index()) {
            return false;
        }
        if gate.is_routing() {
            mapping.swap_physical(qs[0].index(), qs[1].index());
            continue;
        }
        let mut logical = [0usize; 2];
        for (k, q) in qs.iter().enumerate() {
            match mapping.logical(q.index()) {
                Some(l) => logical[k] = l,
                None => return false,
            }
        }
        let logical = &logical[..qs.len()];
        let Some(&idx) = queue[logical[0]].get(head[logical[0]]) else {
            return false;
        };
        if logical.iter().any(|&l| queue[l].get(head[l]) != Some(&idx)) {
            return false;
        }
        let original = &c.gates[idx];
        let translated = gate.map_qubits(|p| QubitId(mapping.logical(p.index()).unwrap_or(usize::MAX)));
        if *original != translated {
            return false;
        }
        for &l in logical {
            head[l] += 1;
        }
    }
    head.iter().zip(&queue).all(|(&h, q)| h == q.len()) && mapping == rc.final_mapping
}
