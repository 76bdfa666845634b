//! Communication-overhead metrics: communication-to-computation ratio,
//! mean qubit hotspotness and temporal burstiness.
//!
//! Hotspotness and burstiness are both an index of dispersion (population
//! variance over mean) of a SWAP tally, per physical qubit and per timeslice
//! respectively. A zero mean yields 0 and sets `no_communication`.

use thiserror::Error;

use crate::ir::{Gate, OpCounts};
use crate::router::RoutedCircuit;
use crate::schedule::Trace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("{0}: empty input vector")]
    Empty(&'static str),
    #[error("ccr undefined: circuit has no computation gates")]
    NoComputation,
    #[error("trace/circuit mismatch: {0} swaps counted in the circuit, {1} in the trace")]
    Inconsistent(usize, usize),
}

/// Population mean and variance of a count vector.
pub fn mean_variance(v: &[usize]) -> Option<(f64, f64)> {
    if v.is_empty() {
        return None;
    }
    let n = v.len() as f64;
    let mean = v.iter().map(|&x| x as f64).sum::<f64>() / n;
    let var = v
        .iter()
        .map(|&x| {
            let d = x as f64 - mean;
            d * d
        })
        .sum::<f64>()
        / n;
    Some((mean, var))
}

/// Population variance divided by mean; 0 when the mean is 0.
pub fn index_of_dispersion(v: &[usize]) -> Result<f64, MetricsError> {
    let (mean, var) = mean_variance(v).ok_or(MetricsError::Empty("index_of_dispersion"))?;
    Ok(if mean > 0.0 { var / mean } else { 0.0 })
}

/// Routing swaps per computation gate.
pub fn ccr(counts: &OpCounts) -> Result<f64, MetricsError> {
    if counts.n_ops == 0 {
        return Err(MetricsError::NoComputation);
    }
    Ok(counts.n_swap as f64 / counts.n_ops as f64)
}

/// Dispersion of per-qubit swap participation (each swap credits both operands).
pub fn hotspotness(swaps_per_qubit: &[usize]) -> Result<f64, MetricsError> {
    if swaps_per_qubit.is_empty() {
        return Err(MetricsError::Empty("hotspotness"));
    }
    index_of_dispersion(swaps_per_qubit)
}

/// Dispersion of swaps per timeslice, over every slice including quiet ones.
pub fn burstiness(swaps_per_slice: &[usize]) -> Result<f64, MetricsError> {
    if swaps_per_slice.is_empty() {
        return Err(MetricsError::Empty("burstiness"));
    }
    index_of_dispersion(swaps_per_slice)
}

#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsReport {
    pub ccr: f64,
    pub hotspotness: f64,
    pub burstiness: f64,
    pub counts: OpCounts,
    pub mu_swap_per_qubit: f64,
    pub var_swap_per_qubit: f64,
    pub mu_swap_per_slice: f64,
    pub var_swap_per_slice: f64,
    pub makespan: usize,
    pub no_communication: bool,
}

impl MetricsReport {
    pub fn n_swap(&self) -> usize {
        self.counts.n_swap
    }

    pub fn n_ops(&self) -> usize {
        self.counts.n_ops
    }
}

/// Metrics for a gate list and its schedule.
pub fn analyze_gates(gates: &[Gate], trace: &Trace) -> Result<MetricsReport, MetricsError> {
    let counts = OpCounts::of(gates);
    let from_trace = trace.total_swaps();
    let per_qubit: usize = trace.swaps_per_qubit.iter().sum();
    if counts.n_swap != from_trace || 2 * counts.n_swap != per_qubit {
        return Err(MetricsError::Inconsistent(counts.n_swap, from_trace));
    }
    let ccr = ccr(&counts)?;
    let hotspotness = hotspotness(&trace.swaps_per_qubit)?;
    let burstiness = burstiness(&trace.swaps_per_slice)?;
    let (mu_q, var_q) = mean_variance(&trace.swaps_per_qubit).unwrap_or_default();
    let (mu_t, var_t) = mean_variance(&trace.swaps_per_slice).unwrap_or_default();
    Ok(MetricsReport {
        ccr,
        hotspotness,
        burstiness,
        counts,
        mu_swap_per_qubit: mu_q,
        var_swap_per_qubit: var_q,
        mu_swap_per_slice: mu_t,
        var_swap_per_slice: var_t,
        makespan: trace.makespan(),
        no_communication: counts.n_swap == 0,
    })
}

/// Metrics for a routed circuit; `trace` must be its ASAP schedule.
pub fn analyze(rc: &RoutedCircuit, trace: &Trace) -> Result<MetricsReport, MetricsError> {
    analyze_gates(&rc.gates, trace)
}
