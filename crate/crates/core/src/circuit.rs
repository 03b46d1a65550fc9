//! Circuit data model shared by every backend.
//!
//! Qubit `i` is bit `i` of a [`BasisState`] mask. Text renderings put qubit 0
//! in the leftmost character, so `"010"` is the state with only qubit 1 set.

use std::f64::consts::FRAC_PI_2;
use std::f64::consts::FRAC_PI_4;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::gate::{classify_gate, GateClass};

/// Complex amplitude with double-precision parts.
pub type Amplitude = Complex64;

/// Largest supported register width. A basis state always fits one `u64`.
pub const MAX_QUBITS: usize = 62;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("qubit count {0} is outside the supported range 1..={MAX_QUBITS}")]
    WidthOutOfRange(usize),
    #[error("basis state {bits:#x} has bits set at or above width {width}")]
    BitsBeyondWidth { bits: u64, width: usize },
    #[error("{kind} takes {expected} operand(s), got {got}")]
    ArityMismatch {
        kind: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("gate {position}: qubit {qubit} is out of range for a {num_qubits}-qubit circuit")]
    QubitOutOfRange {
        position: usize,
        qubit: usize,
        num_qubits: usize,
    },
    #[error("gate {position}: duplicate operand {qubit}")]
    DuplicateOperand { position: usize, qubit: usize },
    #[error("gate {position}: angle {angle} is not finite")]
    NonFiniteAngle { position: usize, angle: f64 },
}

/// Classical `width`-bit register state, one node label in the computation tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisState {
    bits: u64,
    width: usize,
}

impl BasisState {
    pub fn new(bits: u64, width: usize) -> Result<Self, CircuitError> {
        if width == 0 || width > MAX_QUBITS {
            return Err(CircuitError::WidthOutOfRange(width));
        }
        if bits >> width != 0 {
            return Err(CircuitError::BitsBeyondWidth { bits, width });
        }
        Ok(Self { bits, width })
    }

    /// The all-zero state. Panics if `width` is outside `1..=MAX_QUBITS`.
    pub fn zero(width: usize) -> Self {
        Self::new(0, width).expect("basis state width out of range")
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn bit(&self, qubit: usize) -> bool {
        (self.bits >> qubit) & 1 == 1
    }

    pub fn with_bit(self, qubit: usize, value: bool) -> Self {
        debug_assert!(qubit < self.width);
        let mask = 1u64 << qubit;
        let bits = if value {
            self.bits | mask
        } else {
            self.bits & !mask
        };
        Self {
            bits,
            width: self.width,
        }
    }

    pub fn hamming_distance(&self, other: &BasisState) -> u32 {
        (self.bits ^ other.bits).count_ones()
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.width {
            f.write_str(if self.bit(q) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// The closed gate set. Angles are radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    T,
    P(f64),
    CP(f64),
    CNOT,
    CCX,
    I,
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::CP(_) | GateKind::CNOT => 2,
            GateKind::CCX => 3,
            _ => 1,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::P(theta) | GateKind::CP(theta) => Some(theta),
            _ => None,
        }
    }

    /// Lowercase text-format mnemonic.
    pub fn mnemonic(&self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::T => "t",
            GateKind::P(_) => "p",
            GateKind::CP(_) => "cp",
            GateKind::CNOT => "cx",
            GateKind::CCX => "ccx",
            GateKind::I => "id",
        }
    }

    pub fn inverse(&self) -> GateKind {
        match *self {
            GateKind::S => GateKind::P(-FRAC_PI_2),
            GateKind::T => GateKind::P(-FRAC_PI_4),
            GateKind::P(theta) => GateKind::P(-theta),
            GateKind::CP(theta) => GateKind::CP(-theta),
            other => other,
        }
    }
}

/// One gate applied to specific qubits. Controls precede the target.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gate {
    kind: GateKind,
    // Slots past `kind.arity()` are always zero.
    operands: [usize; 3],
}

impl Gate {
    /// Builds a gate from a kind and operand list, checking only the arity.
    /// Range and distinctness checks happen in [`Circuit::new`].
    pub fn new(kind: GateKind, qubits: &[usize]) -> Result<Self, CircuitError> {
        if qubits.len() != kind.arity() {
            return Err(CircuitError::ArityMismatch {
                kind: kind.mnemonic(),
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        let mut operands = [0; 3];
        operands[..qubits.len()].copy_from_slice(qubits);
        Ok(Self { kind, operands })
    }

    fn single(kind: GateKind, q: usize) -> Self {
        Self {
            kind,
            operands: [q, 0, 0],
        }
    }

    pub fn h(q: usize) -> Self {
        Self::single(GateKind::H, q)
    }
    pub fn x(q: usize) -> Self {
        Self::single(GateKind::X, q)
    }
    pub fn y(q: usize) -> Self {
        Self::single(GateKind::Y, q)
    }
    pub fn z(q: usize) -> Self {
        Self::single(GateKind::Z, q)
    }
    pub fn s(q: usize) -> Self {
        Self::single(GateKind::S, q)
    }
    pub fn t(q: usize) -> Self {
        Self::single(GateKind::T, q)
    }
    pub fn id(q: usize) -> Self {
        Self::single(GateKind::I, q)
    }
    pub fn p(q: usize, theta: f64) -> Self {
        Self::single(GateKind::P(theta), q)
    }
    pub fn cp(control: usize, target: usize, theta: f64) -> Self {
        Self {
            kind: GateKind::CP(theta),
            operands: [control, target, 0],
        }
    }
    pub fn cnot(control: usize, target: usize) -> Self {
        Self {
            kind: GateKind::CNOT,
            operands: [control, target, 0],
        }
    }
    pub fn ccx(control1: usize, control2: usize, target: usize) -> Self {
        Self {
            kind: GateKind::CCX,
            operands: [control1, control2, target],
        }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.operands[..self.kind.arity()]
    }

    /// Last operand; the qubit whose bit a flip acts on.
    pub fn target(&self) -> usize {
        self.operands[self.kind.arity() - 1]
    }

    pub fn class(&self) -> GateClass {
        classify_gate(&self.kind)
    }

    pub fn inverse(&self) -> Gate {
        Gate {
            kind: self.kind.inverse(),
            operands: self.operands,
        }
    }

    fn validate(&self, position: usize, num_qubits: usize) -> Result<(), CircuitError> {
        if let Some(angle) = self.kind.angle() {
            if !angle.is_finite() {
                return Err(CircuitError::NonFiniteAngle { position, angle });
            }
        }
        let qubits = self.qubits();
        for (i, &qubit) in qubits.iter().enumerate() {
            if qubit >= num_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    position,
                    qubit,
                    num_qubits,
                });
            }
            if qubits[..i].contains(&qubit) {
                return Err(CircuitError::DuplicateOperand { position, qubit });
            }
        }
        Ok(())
    }
}

/// An ordered gate list on `num_qubits` qubits. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    branching: usize,
}

impl Circuit {
    pub fn new(num_qubits: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(CircuitError::WidthOutOfRange(num_qubits));
        }
        for (position, gate) in gates.iter().enumerate() {
            gate.validate(position, num_qubits)?;
        }
        let branching = gates
            .iter()
            .filter(|g| g.class() == GateClass::Branching)
            .count();
        Ok(Self {
            num_qubits,
            gates,
            branching,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Total gate count `l`.
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Number of branching gates `h`.
    pub fn branching_count(&self) -> usize {
        self.branching
    }

    /// Number of non-branching gates `t`.
    pub fn nonbranching_count(&self) -> usize {
        self.gates.len() - self.branching
    }

    /// The adjoint circuit: gates reversed, each replaced by its inverse.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            branching: self.branching,
        }
    }
}

/// A request for `<end|C|start>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AmplitudeQuery {
    pub start: BasisState,
    pub end: BasisState,
}

impl AmplitudeQuery {
    pub fn new(start: BasisState, end: BasisState) -> Self {
        Self { start, end }
    }

    /// `<0...0|C|0...0>` on `width` qubits.
    pub fn zero(width: usize) -> Self {
        let zero = BasisState::zero(width);
        Self::new(zero, zero)
    }

    /// Checks both widths against the circuit.
    pub fn check_width(&self, circuit: &Circuit) -> Result<(), WidthMismatch> {
        let expected = circuit.num_qubits();
        for (role, state) in [("start", self.start), ("end", self.end)] {
            if state.width() != expected {
                return Err(WidthMismatch {
                    role,
                    got: state.width(),
                    expected,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{role} state has {got} qubits but the circuit has {expected}")]
pub struct WidthMismatch {
    pub role: &'static str,
    pub got: usize,
    pub expected: usize,
}
