//! Routing-overhead analysis core.
//!
//! Everything in this crate is a pure function over owned values and works
//! without the standard library (only `alloc` is required). File formats,
//! the pipeline driver and the CLI live in the `qroute` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
#[macro_use]
extern crate std;

pub mod generators;
pub mod ir;
pub mod metrics;
pub mod rng;
pub mod router;
pub mod schedule;
pub mod topology;

pub use crate::ir::{Circuit, Gate, GateKind, IrError, OpCounts, QubitId, Violation};
pub use crate::metrics::{MetricsError, MetricsReport};
pub use crate::router::{
    InitialMapping, Mapping, RoutedCircuit, RouterError, RoutingStats, RoutingStrategy,
};
pub use crate::schedule::{CellState, Trace};
pub use crate::topology::{CouplingGraph, DistanceMatrix, TopologyError, TopologyKind};
