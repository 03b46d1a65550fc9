//! Action of each gate on a classical basis state.
//!
//! A gate is non-branching when its matrix has one nonzero entry per row: it
//! maps a basis state to exactly one basis state times a unit-modulus phase.
//! Hadamard is the only branching kind in the gate set.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Amplitude, BasisState, Gate, GateKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateClass {
    Branching,
    NonBranching,
}

/// One outgoing edge of a tree node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Branch {
    pub next_state: BasisState,
    pub factor: Amplitude,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("{0} is a branching gate")]
    ExpectedNonBranching(&'static str),
    #[error("{0} is a non-branching gate")]
    ExpectedBranching(&'static str),
}

pub fn classify_gate(kind: &GateKind) -> GateClass {
    match kind {
        GateKind::H => GateClass::Branching,
        _ => GateClass::NonBranching,
    }
}

/// Successor state and phase of a non-branching gate.
pub fn apply_nonbranching(gate: &Gate, state: BasisState) -> Result<Branch, SemanticsError> {
    match CompiledGate::new(gate) {
        CompiledGate::Hadamard { .. } => {
            Err(SemanticsError::ExpectedNonBranching(gate.kind().mnemonic()))
        }
        compiled => {
            let (bits, factor) = compiled.apply(state.bits());
            Ok(Branch {
                next_state: BasisState::new(bits, state.width())
                    .expect("non-branching gate kept the state in range"),
                factor,
            })
        }
    }
}

/// Both branches of a Hadamard: the target-bit-0 edge first, then the
/// target-bit-1 edge. Factors come from the matrix row picked by the current
/// target bit.
pub fn branch_gate(gate: &Gate, state: BasisState) -> Result<[Branch; 2], SemanticsError> {
    if gate.class() != GateClass::Branching {
        return Err(SemanticsError::ExpectedBranching(gate.kind().mnemonic()));
    }
    let q = gate.target();
    let (f0, f1) = hadamard_factors(state.bit(q));
    Ok([
        Branch {
            next_state: state.with_bit(q, false),
            factor: Complex64::new(f0, 0.0),
        },
        Branch {
            next_state: state.with_bit(q, true),
            factor: Complex64::new(f1, 0.0),
        },
    ])
}

/// Hadamard matrix row for a given input bit: `(<0|H|b>, <1|H|b>)`.
#[inline]
pub(crate) fn hadamard_factors(bit_set: bool) -> (f64, f64) {
    if bit_set {
        (FRAC_1_SQRT_2, -FRAC_1_SQRT_2)
    } else {
        (FRAC_1_SQRT_2, FRAC_1_SQRT_2)
    }
}

/// A gate lowered to bitmasks and a precomputed phase, so the engine's inner
/// loop does no trigonometry and no operand lookups.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum CompiledGate {
    Hadamard {
        mask: u64,
    },
    /// Flip `target` when every bit of `controls` is set (X, CNOT, CCX).
    Flip {
        controls: u64,
        target: u64,
    },
    Y {
        target: u64,
    },
    /// Multiply by `factor` when every bit of `mask` is set (Z, S, T, P, CP).
    Phase {
        mask: u64,
        factor: Amplitude,
    },
    Identity,
}

impl CompiledGate {
    pub(crate) fn new(gate: &Gate) -> Self {
        let bit = |i: usize| 1u64 << gate.qubits()[i];
        match gate.kind() {
            GateKind::H => CompiledGate::Hadamard { mask: bit(0) },
            GateKind::X => CompiledGate::Flip {
                controls: 0,
                target: bit(0),
            },
            GateKind::CNOT => CompiledGate::Flip {
                controls: bit(0),
                target: bit(1),
            },
            GateKind::CCX => CompiledGate::Flip {
                controls: bit(0) | bit(1),
                target: bit(2),
            },
            GateKind::Y => CompiledGate::Y { target: bit(0) },
            GateKind::Z => CompiledGate::Phase {
                mask: bit(0),
                factor: Complex64::new(-1.0, 0.0),
            },
            GateKind::S => CompiledGate::Phase {
                mask: bit(0),
                factor: Complex64::i(),
            },
            GateKind::T => CompiledGate::Phase {
                mask: bit(0),
                factor: Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            },
            GateKind::P(theta) => CompiledGate::Phase {
                mask: bit(0),
                factor: Complex64::from_polar(1.0, theta),
            },
            GateKind::CP(theta) => CompiledGate::Phase {
                mask: bit(0) | bit(1),
                factor: Complex64::from_polar(1.0, theta),
            },
            GateKind::I => CompiledGate::Identity,
        }
    }

    /// Applies a non-branching gate to a raw state word.
    #[inline]
    pub(crate) fn apply(&self, bits: u64) -> (u64, Amplitude) {
        let one = Complex64::new(1.0, 0.0);
        match *self {
            CompiledGate::Flip { controls, target } => {
                if bits & controls == controls {
                    (bits ^ target, one)
                } else {
                    (bits, one)
                }
            }
            CompiledGate::Y { target } => {
                // Y|0> = i|1>, Y|1> = -i|0>
                let factor = if bits & target == 0 {
                    Complex64::i()
                } else {
                    -Complex64::i()
                };
                (bits ^ target, factor)
            }
            CompiledGate::Phase { mask, factor } => {
                if bits & mask == mask {
                    (bits, factor)
                } else {
                    (bits, one)
                }
            }
            CompiledGate::Identity => (bits, one),
            CompiledGate::Hadamard { .. } => unreachable!("Hadamard has two successors"),
        }
    }
}
