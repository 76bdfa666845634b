//! Circuit intermediate representation and the computation/communication
//! counting rules.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign};

use thiserror::Error;

/// A qubit label, logical or physical depending on context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QubitId(pub usize);

impl QubitId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for QubitId {
    fn from(i: usize) -> Self {
        QubitId(i)
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The supported gate set. Rotation angles are in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    H,
    X,
    T,
    Tdg,
    RZ(f64),
    RX(f64),
    CX,
    CP(f64),
    SWAP,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::H
            | GateKind::X
            | GateKind::T
            | GateKind::Tdg
            | GateKind::RZ(_)
            | GateKind::RX(_) => 1,
            GateKind::CX | GateKind::CP(_) | GateKind::SWAP => 2,
        }
    }

    pub fn angle(self) -> Option<f64> {
        match self {
            GateKind::RZ(a) | GateKind::RX(a) | GateKind::CP(a) => Some(a),
            _ => None,
        }
    }

    /// Lower-case mnemonic, identical to the OpenQASM gate name.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::RZ(_) => "rz",
            GateKind::RX(_) => "rx",
            GateKind::CX => "cx",
            GateKind::CP(_) => "cp",
            GateKind::SWAP => "swap",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IrError {
    #[error("gate {kind} expects {expected} qubit(s), got {got}")]
    Arity {
        kind: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("non-finite angle on gate {0}")]
    NonFiniteAngle(&'static str),
    #[error("duplicate qubit {0}")]
    DuplicateQubit(QubitId),
    #[error("routing flag is only valid on swap gates")]
    RoutingNonSwap,
}

/// A gate application. Operands are stored inline; only the first
/// `kind.arity()` entries are meaningful.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gate {
    kind: GateKind,
    qubits: [QubitId; 2],
    is_routing: bool,
}

impl Gate {
    /// Checked constructor. Distinctness of operands is *not* enforced here
    /// so that malformed circuits can still be represented and reported by
    /// [`Circuit::validate`].
    pub fn new(kind: GateKind, qubits: &[QubitId]) -> Result<Self, IrError> {
        if qubits.len() != kind.arity() {
            return Err(IrError::Arity {
                kind: kind.name(),
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        if let Some(a) = kind.angle() {
            if !a.is_finite() {
                return Err(IrError::NonFiniteAngle(kind.name()));
            }
        }
        let second = if qubits.len() == 2 { qubits[1] } else { qubits[0] };
        Ok(Gate {
            kind,
            qubits: [qubits[0], second],
            is_routing: false,
        })
    }

    fn one(kind: GateKind, q: usize) -> Self {
        debug_assert_eq!(kind.arity(), 1);
        Gate {
            kind,
            qubits: [QubitId(q), QubitId(q)],
            is_routing: false,
        }
    }

    fn two(kind: GateKind, a: usize, b: usize) -> Self {
        debug_assert_eq!(kind.arity(), 2);
        Gate {
            kind,
            qubits: [QubitId(a), QubitId(b)],
            is_routing: false,
        }
    }

    pub fn h(q: usize) -> Self {
        Self::one(GateKind::H, q)
    }
    pub fn x(q: usize) -> Self {
        Self::one(GateKind::X, q)
    }
    pub fn t(q: usize) -> Self {
        Self::one(GateKind::T, q)
    }
    pub fn tdg(q: usize) -> Self {
        Self::one(GateKind::Tdg, q)
    }
    pub fn rz(angle: f64, q: usize) -> Self {
        Self::one(GateKind::RZ(angle), q)
    }
    pub fn rx(angle: f64, q: usize) -> Self {
        Self::one(GateKind::RX(angle), q)
    }
    pub fn cx(control: usize, target: usize) -> Self {
        Self::two(GateKind::CX, control, target)
    }
    pub fn cp(angle: f64, control: usize, target: usize) -> Self {
        Self::two(GateKind::CP(angle), control, target)
    }
    /// An algorithmic swap (counted as computation).
    pub fn swap(a: usize, b: usize) -> Self {
        Self::two(GateKind::SWAP, a, b)
    }
    /// A swap inserted by the router (counted as communication).
    pub fn routing_swap(a: usize, b: usize) -> Self {
        Gate {
            is_routing: true,
            ..Self::two(GateKind::SWAP, a, b)
        }
    }

    /// Sets the routing flag. Fails unless the gate is a swap.
    pub fn into_routing(self) -> Result<Self, IrError> {
        if self.kind != GateKind::SWAP {
            return Err(IrError::RoutingNonSwap);
        }
        Ok(Gate {
            is_routing: true,
            ..self
        })
    }

    #[inline]
    pub fn kind(&self) -> GateKind {
        self.kind
    }

    #[inline]
    pub fn qubits(&self) -> &[QubitId] {
        &self.qubits[..self.kind.arity()]
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.kind.arity()
    }

    #[inline]
    pub fn is_two_qubit(&self) -> bool {
        self.kind.arity() == 2
    }

    #[inline]
    pub fn is_routing(&self) -> bool {
        self.is_routing
    }

    /// Same gate with every operand passed through `f`.
    pub fn map_qubits(&self, mut f: impl FnMut(QubitId) -> QubitId) -> Self {
        Gate {
            qubits: [f(self.qubits[0]), f(self.qubits[1])],
            ..*self
        }
    }
}

/// A single broken circuit invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoQubits,
    QubitOutOfRange { gate: usize, qubit: QubitId },
    DuplicateQubit { gate: usize },
    RoutingNonSwap { gate: usize },
    NonFiniteAngle { gate: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoQubits => f.write_str("circuit has no qubits"),
            Violation::QubitOutOfRange { gate, .. } => {
                write!(f, "qubit index out of range at gate {gate}")
            }
            Violation::DuplicateQubit { gate } => write!(f, "duplicate qubit at gate {gate}"),
            Violation::RoutingNonSwap { gate } => {
                write!(f, "routing flag on non-swap at gate {gate}")
            }
            Violation::NonFiniteAngle { gate } => write!(f, "non-finite angle at gate {gate}"),
        }
    }
}

/// Ordered gate list over `num_qubits` qubits. Gate order is execution order.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub name: String,
    pub num_qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(name: impl Into<String>, num_qubits: usize) -> Self {
        Circuit {
            name: name.into(),
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn with_gates(name: impl Into<String>, num_qubits: usize, gates: Vec<Gate>) -> Self {
        Circuit {
            name: name.into(),
            num_qubits,
            gates,
        }
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn two_qubit_gates(&self) -> impl Iterator<Item = &Gate> {
        self.gates.iter().filter(|g| g.is_two_qubit())
    }

    /// Lists every broken invariant, in gate order.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        if self.num_qubits == 0 {
            out.push(Violation::NoQubits);
        }
        for (i, g) in self.gates.iter().enumerate() {
            for &q in g.qubits() {
                if q.index() >= self.num_qubits {
                    out.push(Violation::QubitOutOfRange { gate: i, qubit: q });
                }
            }
            if g.is_two_qubit() && g.qubits()[0] == g.qubits()[1] {
                out.push(Violation::DuplicateQubit { gate: i });
            }
            if g.is_routing() && g.kind() != GateKind::SWAP {
                out.push(Violation::RoutingNonSwap { gate: i });
            }
            if g.kind().angle().is_some_and(|a| !a.is_finite()) {
                out.push(Violation::NonFiniteAngle { gate: i });
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    pub fn count_ops(&self) -> OpCounts {
        OpCounts::of(&self.gates)
    }
}

/// Gate tallies. Classification is by the routing flag, not by kind: an
/// algorithmic swap is computation.
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub n_ops: usize,
    pub n_swap: usize,
    pub n_1q: usize,
    pub n_2q: usize,
}

impl OpCounts {
    pub fn of(gates: &[Gate]) -> Self {
        gates.iter().fold(OpCounts::default(), |mut acc, g| {
            if g.is_routing() {
                acc.n_swap += 1;
            } else {
                acc.n_ops += 1;
                if g.is_two_qubit() {
                    acc.n_2q += 1;
                } else {
                    acc.n_1q += 1;
                }
            }
            acc
        })
    }

    pub fn total(&self) -> usize {
        self.n_ops + self.n_swap
    }
}

impl Add for OpCounts {
    type Output = OpCounts;
    fn add(self, rhs: OpCounts) -> OpCounts {
        OpCounts {
            n_ops: self.n_ops + rhs.n_ops,
            n_swap: self.n_swap + rhs.n_swap,
            n_1q: self.n_1q + rhs.n_1q,
            n_2q: self.n_2q + rhs.n_2q,
        }
    }
}

impl AddAssign for OpCounts {
    fn add_assign(&mut self, rhs: OpCounts) {
        *self = *self + rhs;
    }
}
