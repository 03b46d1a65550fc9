//! Dense state-vector reference backend.
//!
//! Holds all `2^n` amplitudes and updates them gate by gate, `O(l 2^n)` time
//! and `O(2^n)` memory. Used as the correctness oracle for the path-sum engine
//! and as the performance baseline.

use std::f64::consts::FRAC_1_SQRT_2;
use std::mem::size_of;
use std::time::Instant;

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Amplitude, AmplitudeQuery, BasisState, Circuit, Gate, WidthMismatch};
use crate::gate::CompiledGate;

/// Widest register this backend will allocate (1 GiB of amplitudes).
pub const MAX_STATEVECTOR_QUBITS: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateVectorError {
    #[error(
        "refusing to simulate {num_qubits} qubits: the state vector needs {bytes} bytes \
         (limit is {MAX_STATEVECTOR_QUBITS} qubits)"
    )]
    TooManyQubits { num_qubits: usize, bytes: u128 },
    #[error(transparent)]
    WidthMismatch(#[from] WidthMismatch),
    #[error("deadline exceeded after {gates_applied} gates")]
    DeadlineExceeded { gates_applied: usize },
}

/// Bytes needed for a dense `num_qubits` state vector.
pub fn statevector_bytes(num_qubits: usize) -> u128 {
    (1u128 << num_qubits) * size_of::<Amplitude>() as u128
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Amplitude>,
}

impl StateVector {
    /// The vector with amplitude 1 on `state` and 0 elsewhere.
    pub fn basis(state: BasisState) -> Result<Self, StateVectorError> {
        let num_qubits = state.width();
        if num_qubits > MAX_STATEVECTOR_QUBITS {
            return Err(StateVectorError::TooManyQubits {
                num_qubits,
                bytes: statevector_bytes(num_qubits),
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[state.bits() as usize] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amplitudes
    }

    pub fn amplitude(&self, state: BasisState) -> Amplitude {
        self.amplitudes[state.bits() as usize]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies one gate in place. The gate's operands must be below
    /// `num_qubits`, which holds for any gate of a circuit of this width.
    pub fn apply(&mut self, gate: &Gate) {
        match CompiledGate::new(gate) {
            CompiledGate::Hadamard { mask } => {
                self.for_each_pair(mask, 0, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = (x + y) * FRAC_1_SQRT_2;
                    *b = (x - y) * FRAC_1_SQRT_2;
                });
            }
            CompiledGate::Flip { controls, target } => {
                self.for_each_pair(target, controls, std::mem::swap);
            }
            CompiledGate::Y { target } => {
                // Y = [[0, -i], [i, 0]]
                let i = Complex64::i();
                self.for_each_pair(target, 0, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = -i * y;
                    *b = i * x;
                });
            }
            CompiledGate::Phase { mask, factor } => {
                for (index, amplitude) in self.amplitudes.iter_mut().enumerate() {
                    if index as u64 & mask == mask {
                        *amplitude *= factor;
                    }
                }
            }
            CompiledGate::Identity => {}
        }
    }

    /// Visits each index pair `(i, i | target)` with the target bit clear in
    /// `i` and every `controls` bit set.
    fn for_each_pair(
        &mut self,
        target: u64,
        controls: u64,
        mut update: impl FnMut(&mut Amplitude, &mut Amplitude),
    ) {
        let stride = target as usize;
        for (block_index, block) in self.amplitudes.chunks_exact_mut(2 * stride).enumerate() {
            let base = block_index * 2 * stride;
            let (low, high) = block.split_at_mut(stride);
            for (offset, (a, b)) in low.iter_mut().zip(high.iter_mut()).enumerate() {
                if (base + offset) as u64 & controls == controls {
                    update(a, b);
                }
            }
        }
    }
}

/// Evolves `start` through every gate of `circuit`.
pub fn statevector_simulate(
    circuit: &Circuit,
    start: BasisState,
) -> Result<StateVector, StateVectorError> {
    statevector_simulate_until(circuit, start, None)
}

/// Like [`statevector_simulate`], giving up once `deadline` passes. The clock
/// is read between gates.
pub fn statevector_simulate_until(
    circuit: &Circuit,
    start: BasisState,
    deadline: Option<Instant>,
) -> Result<StateVector, StateVectorError> {
    if start.width() != circuit.num_qubits() {
        return Err(WidthMismatch {
            role: "start",
            got: start.width(),
            expected: circuit.num_qubits(),
        }
        .into());
    }
    let mut vector = StateVector::basis(start)?;
    for (gates_applied, gate) in circuit.gates().iter().enumerate() {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(StateVectorError::DeadlineExceeded { gates_applied });
        }
        vector.apply(gate);
    }
    Ok(vector)
}

/// `<end|C|start>` read off the simulated vector.
pub fn statevector_amplitude(
    circuit: &Circuit,
    query: &AmplitudeQuery,
) -> Result<Amplitude, StateVectorError> {
    query.check_width(circuit)?;
    Ok(statevector_simulate(circuit, query.start)?.amplitude(query.end))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(bits: u64, width: usize) -> BasisState {
        BasisState::new(bits, width).unwrap()
    }

    #[test]
    fn hadamard_on_zero() {
        let c = Circuit::new(1, vec![Gate::h(0)]).unwrap();
        let v = statevector_simulate(&c, state(0, 1)).unwrap();
        let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
        assert_eq!(v.amplitudes(), &[r, r]);
    }

    #[test]
    fn empty_circuit_keeps_basis_state() {
        let c = Circuit::new(3, vec![]).unwrap();
        let v = statevector_simulate(&c, state(5, 3)).unwrap();
        for (i, a) in v.amplitudes().iter().enumerate() {
            let expected = if i == 5 { 1.0 } else { 0.0 };
            assert_eq!(*a, Complex64::new(expected, 0.0));
        }
    }

    #[test]
    fn amplitude_queries() {
        let c = Circuit::new(1, vec![Gate::h(0), Gate::h(0)]).unwrap();
        let q = AmplitudeQuery::new(state(0, 1), state(1, 1));
        assert!(statevector_amplitude(&c, &q).unwrap().norm() < 1e-15);

        let c = Circuit::new(1, vec![Gate::x(0)]).unwrap();
        assert_eq!(
            statevector_amplitude(&c, &q).unwrap(),
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn controls_gate_the_swap() {
        let c = Circuit::new(3, vec![Gate::ccx(0, 2, 1)]).unwrap();
        let v = statevector_simulate(&c, state(0b101, 3)).unwrap();
        assert_eq!(v.amplitude(state(0b111, 3)), Complex64::new(1.0, 0.0));
        let v = statevector_simulate(&c, state(0b001, 3)).unwrap();
        assert_eq!(v.amplitude(state(0b001, 3)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn refuses_wide_registers() {
        let c = Circuit::new(30, vec![Gate::h(0)]).unwrap();
        let err = statevector_simulate(&c, BasisState::zero(30)).unwrap_err();
        assert_eq!(
            err,
            StateVectorError::TooManyQubits {
                num_qubits: 30,
                bytes: 16 << 30
            }
        );
        assert!(err.to_string().contains("17179869184 bytes"));
    }

    #[test]
    fn width_mismatch() {
        let c = Circuit::new(2, vec![]).unwrap();
        assert!(matches!(
            statevector_simulate(&c, state(0, 3)),
            Err(StateVectorError::WidthMismatch(_))
        ));
    }

    #[test]
    fn norm_survives_long_circuits() {
        let mut gates = Vec::new();
        for i in 0..1000usize {
            let q = i % 6;
            gates.push(match i % 5 {
                0 => Gate::h(q),
                1 => Gate::cp(q, (q + 1) % 6, 0.1 * i as f64),
                2 => Gate::y(q),
                3 => Gate::ccx(q, (q + 2) % 6, (q + 4) % 6),
                _ => Gate::t(q),
            });
        }
        let c = Circuit::new(6, gates).unwrap();
        let mut v = StateVector::basis(BasisState::zero(6)).unwrap();
        for gate in c.gates() {
            v.apply(gate);
            assert!((v.norm_sqr() - 1.0).abs() < 1e-9);
        }
    }
}
