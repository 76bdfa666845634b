//! ASAP timeslice scheduling and the qubit-activity trace.

use alloc::vec;
use alloc::vec::Vec;

use crate::ir::Gate;
use crate::router::RoutedCircuit;

/// Activity of one qubit in one timeslice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellState {
    Compute,
    Swap,
    Idle,
}

impl CellState {
    /// Single-letter code used by the CSV export.
    pub fn code(self) -> char {
        match self {
            CellState::Compute => 'C',
            CellState::Swap => 'S',
            CellState::Idle => 'I',
        }
    }
}

/// Qubit-by-timeslice activity matrix with routing-swap tallies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    num_qubits: usize,
    makespan: usize,
    /// Row-major: `cells[q * makespan + t]`.
    cells: Vec<CellState>,
    /// Slice assigned to each scheduled gate, in gate order.
    gate_slices: Vec<usize>,
    pub swaps_per_slice: Vec<usize>,
    pub swaps_per_qubit: Vec<usize>,
}

impl Trace {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn makespan(&self) -> usize {
        self.makespan
    }

    pub fn cell(&self, qubit: usize, slice: usize) -> CellState {
        self.cells[qubit * self.makespan + slice]
    }

    pub fn row(&self, qubit: usize) -> &[CellState] {
        &self.cells[qubit * self.makespan..(qubit + 1) * self.makespan]
    }

    pub fn gate_slices(&self) -> &[usize] {
        &self.gate_slices
    }

    pub fn count(&self, state: CellState) -> usize {
        self.cells.iter().filter(|&&c| c == state).count()
    }

    pub fn total_swaps(&self) -> usize {
        self.swaps_per_slice.iter().sum()
    }
}

/// Schedules `gates` over `num_qubits` qubits with unit durations, each gate
/// in the earliest slice after the last use of any of its operands.
///
/// # Panics
///
/// If a gate references a qubit `>= num_qubits`.
pub fn schedule_gates(num_qubits: usize, gates: &[Gate]) -> Trace {
    let mut next_free = vec![0usize; num_qubits];
    let mut gate_slices = Vec::with_capacity(gates.len());
    let mut makespan = 0;
    for g in gates {
        let t = g.qubits().iter().map(|q| next_free[q.index()]).max().unwrap_or(0);
        for q in g.qubits() {
            next_free[q.index()] = t + 1;
        }
        gate_slices.push(t);
        makespan = makespan.max(t + 1);
    }

    let mut cells = vec![CellState::Idle; num_qubits * makespan];
    let mut swaps_per_slice = vec![0; makespan];
    let mut swaps_per_qubit = vec![0; num_qubits];
    for (g, &t) in gates.iter().zip(&gate_slices) {
        let state = if g.is_routing() {
            swaps_per_slice[t] += 1;
            CellState::Swap
        } else {
            CellState::Compute
        };
        for q in g.qubits() {
            cells[q.index() * makespan + t] = state;
            if g.is_routing() {
                swaps_per_qubit[q.index()] += 1;
            }
        }
    }
    Trace {
        num_qubits,
        makespan,
        cells,
        gate_slices,
        swaps_per_slice,
        swaps_per_qubit,
    }
}

/// ASAP schedule of a routed circuit over every physical qubit of its chip.
pub fn schedule_asap(rc: &RoutedCircuit) -> Trace {
    schedule_gates(rc.num_physical(), &rc.gates)
}
