//! Text renderings of schedules and coupling graphs.

use std::fmt::Write as _;

use qroute_core::{CellState, CouplingGraph, Trace};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("cannot render an empty trace")]
    EmptyTrace,
    #[error("cell size must be positive")]
    ZeroCell,
}

pub const DEFAULT_CELL_PX: usize = 10;

pub fn fill(state: CellState) -> &'static str {
    match state {
        CellState::Compute => "#CC0000",
        CellState::Swap => "#FFFFFF",
        CellState::Idle => "#000000",
    }
}

/// Raster of the trace: one rect per (qubit, slice), qubit 0 on top,
/// slice 0 on the left.
pub fn render_svg(t: &Trace, cell_px: usize) -> Result<String, RenderError> {
    if t.makespan() == 0 || t.num_qubits() == 0 {
        return Err(RenderError::EmptyTrace);
    }
    if cell_px == 0 {
        return Err(RenderError::ZeroCell);
    }
    let (w, h) = (t.makespan() * cell_px, t.num_qubits() * cell_px);
    let mut s = String::with_capacity(64 * t.num_qubits() * t.makespan() + 256);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    s.push_str("<g stroke=\"#808080\" stroke-width=\"1\">\n");
    for q in 0..t.num_qubits() {
        for (slice, &cell) in t.row(q).iter().enumerate() {
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{cell_px}" height="{cell_px}" fill="{}"/>"#,
                slice * cell_px,
                q * cell_px,
                fill(cell)
            );
        }
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

/// `qubit,t0,t1,...` header, then one row of C/S/I codes per qubit.
pub fn trace_csv(t: &Trace) -> String {
    let mut s = String::from("qubit");
    for slice in 0..t.makespan() {
        let _ = write!(s, ",t{slice}");
    }
    s.push('\n');
    for q in 0..t.num_qubits() {
        let _ = write!(s, "{q}");
        for &cell in t.row(q) {
            s.push(',');
            s.push(cell.code());
        }
        s.push('\n');
    }
    s
}

/// Node count on the first line, then sorted `u v` pairs.
pub fn edge_list(g: &CouplingGraph) -> String {
    let mut s = format!("{}\n", g.num_nodes());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}
