//! Benchmark circuit families, fully decomposed to 1- and 2-qubit gates.
//!
//! Every generator is deterministic: the same arguments always produce the
//! same gate list.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use thiserror::Error;

use crate::ir::{Circuit, Gate, QubitId};
use crate::rng::SplitMix64;

pub const DEFAULT_GAMMA: f64 = 0.7;
pub const DEFAULT_BETA: f64 = 0.3;
pub const DEFAULT_EDGE_PROBABILITY: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("{family}: size {got} below minimum {min}")]
    TooSmall {
        family: &'static str,
        got: usize,
        min: usize,
    },
    #[error("edge probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("toffoli operands must be distinct")]
    DuplicateQubits,
}

/// Undirected simple graph as a sorted `(u, v)` list with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

/// `pi / 2^k` without relying on `powi` (unavailable in `core`).
fn pi_over_pow2(k: usize) -> f64 {
    let mut a = PI;
    for _ in 0..k {
        a *= 0.5;
    }
    a
}

/// Quantum Fourier transform on `n` qubits, without the final bit-reversal swaps.
pub fn qft(n: usize) -> Result<Circuit, GenError> {
    if n == 0 {
        return Err(GenError::TooSmall { family: "qft", got: n, min: 1 });
    }
    let mut c = Circuit::new(format!("qft_{n}"), n);
    for i in 0..n {
        c.push(Gate::h(i));
        for j in i + 1..n {
            c.push(Gate::cp(pi_over_pow2(j - i), j, i));
        }
    }
    Ok(c)
}

/// Standard 15-gate Clifford+T Toffoli with controls `a`, `b` and target `c`.
pub fn toffoli(a: usize, b: usize, c: usize) -> Result<[Gate; 15], GenError> {
    if a == b || a == c || b == c {
        return Err(GenError::DuplicateQubits);
    }
    Ok([
        Gate::h(c),
        Gate::cx(b, c),
        Gate::tdg(c),
        Gate::cx(a, c),
        Gate::t(c),
        Gate::cx(b, c),
        Gate::tdg(c),
        Gate::cx(a, c),
        Gate::t(b),
        Gate::t(c),
        Gate::h(c),
        Gate::cx(a, b),
        Gate::t(a),
        Gate::tdg(b),
        Gate::cx(a, b),
    ])
}

/// Same as [`toffoli`] for callers holding typed ids.
pub fn decompose_toffoli(a: QubitId, b: QubitId, c: QubitId) -> Result<[Gate; 15], GenError> {
    toffoli(a.index(), b.index(), c.index())
}

fn push_toffoli(c: &mut Circuit, a: usize, b: usize, t: usize) {
    // Callers only pass distinct qubits.
    c.gates.extend(toffoli(a, b, t).expect("distinct toffoli operands"));
}

/// Cuccaro ripple-carry adder on `2*n_bits + 2` qubits.
///
/// Layout: carry-in at 0, `a_i` at `2i+1`, `b_i` at `2i+2`, carry-out at
/// `2*n_bits+1`, so that neighbours in the ripple chain are index-adjacent.
pub fn cuccaro(n_bits: usize) -> Result<Circuit, GenError> {
    if n_bits == 0 {
        return Err(GenError::TooSmall { family: "cuccaro", got: n_bits, min: 1 });
    }
    let a = |i: usize| 2 * i + 1;
    let b = |i: usize| 2 * i + 2;
    let z = 2 * n_bits + 1;
    let mut c = Circuit::new(format!("cuccaro_{n_bits}"), 2 * n_bits + 2);

    // carry source for bit i: the input carry, then the previous a register
    let carry = |i: usize| if i == 0 { 0 } else { a(i - 1) };

    for i in 0..n_bits {
        let (x, y, w) = (carry(i), b(i), a(i));
        // MAJ(x, y, w)
        c.push(Gate::cx(w, y));
        c.push(Gate::cx(w, x));
        push_toffoli(&mut c, x, y, w);
    }
    c.push(Gate::cx(a(n_bits - 1), z));
    for i in (0..n_bits).rev() {
        let (x, y, w) = (carry(i), b(i), a(i));
        // UMA(x, y, w)
        push_toffoli(&mut c, x, y, w);
        c.push(Gate::cx(w, x));
        c.push(Gate::cx(x, y));
    }
    Ok(c)
}

/// Multi-controlled X via the ancilla V-chain: the AND of all controls is
/// accumulated in `ancillas` (`controls.len() - 1` of them), copied onto the
/// target, then uncomputed in mirror order.
fn push_mcx(c: &mut Circuit, controls: &[usize], target: usize, ancillas: &[usize]) {
    match controls.len() {
        0 => c.push(Gate::x(target)),
        1 => c.push(Gate::cx(controls[0], target)),
        m => {
            debug_assert!(ancillas.len() >= m - 1);
            let mut ladder = Vec::with_capacity(m - 1);
            ladder.push((controls[0], controls[1], ancillas[0]));
            for k in 2..m {
                ladder.push((controls[k], ancillas[k - 2], ancillas[k - 1]));
            }
            for &(x, y, t) in &ladder {
                push_toffoli(c, x, y, t);
            }
            c.push(Gate::cx(ancillas[m - 2], target));
            for &(x, y, t) in ladder.iter().rev() {
                push_toffoli(c, x, y, t);
            }
        }
    }
}

/// Z controlled on every qubit of `qubits` but the last (the target).
fn push_mcz(c: &mut Circuit, qubits: &[usize], ancillas: &[usize]) {
    let (&target, controls) = qubits.split_last().expect("non-empty");
    c.push(Gate::h(target));
    push_mcx(c, controls, target, ancillas);
    c.push(Gate::h(target));
}

/// Grover search over `n_data` qubits marking the all-ones state.
///
/// Ancillas (`n_data - 2` of them) follow the data register.
pub fn grover(n_data: usize, iterations: usize) -> Result<Circuit, GenError> {
    if n_data < 2 {
        return Err(GenError::TooSmall { family: "grover", got: n_data, min: 2 });
    }
    let n_anc = n_data - 2;
    let data: Vec<usize> = (0..n_data).collect();
    let anc: Vec<usize> = (n_data..n_data + n_anc).collect();
    let mut c = Circuit::new(format!("grover_{n_data}"), n_data + n_anc);

    for &q in &data {
        c.push(Gate::h(q));
    }
    for _ in 0..iterations {
        push_mcz(&mut c, &data, &anc);
        for &q in &data {
            c.push(Gate::h(q));
        }
        for &q in &data {
            c.push(Gate::x(q));
        }
        push_mcz(&mut c, &data, &anc);
        for &q in &data {
            c.push(Gate::x(q));
        }
        for &q in &data {
            c.push(Gate::h(q));
        }
    }
    Ok(c)
}

/// G(n, p) over pairs `(i, j)`, `i < j`, visited in lexicographic order, each
/// kept iff the next SplitMix64 unit draw is below `p`.
pub fn sample_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<EdgeList, GenError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GenError::Probability(p));
    }
    let mut rng = SplitMix64::new(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.next_unit_f64() < p {
                edges.push((i, j));
            }
        }
    }
    Ok(EdgeList { n, edges })
}

/// One-layer QAOA for MaxCut on a G(n, p_edge) instance.
pub fn qaoa_maxcut(
    n: usize,
    p_edge: f64,
    seed: u64,
    gamma: f64,
    beta: f64,
) -> Result<Circuit, GenError> {
    if n < 2 {
        return Err(GenError::TooSmall { family: "qaoa", got: n, min: 2 });
    }
    let graph = sample_erdos_renyi(n, p_edge, seed)?;
    let mut c = Circuit::new(format!("qaoa_{n}"), n);
    for q in 0..n {
        c.push(Gate::h(q));
    }
    for &(u, v) in &graph.edges {
        c.push(Gate::cx(u, v));
        c.push(Gate::rz(2.0 * gamma, v));
        c.push(Gate::cx(u, v));
    }
    for q in 0..n {
        c.push(Gate::rx(2.0 * beta, q));
    }
    Ok(c)
}
