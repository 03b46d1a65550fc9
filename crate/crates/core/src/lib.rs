//! Linear-space quantum circuit simulation by recursive path summation.
//!
//! [`engine`] computes single amplitudes `<end|C|start>` by walking the
//! circuit's computation tree depth first, using memory proportional to the
//! qubit count plus the number of Hadamard gates. [`statevector`] is the dense
//! `2^n` reference backend. [`generators`] builds the benchmark families and
//! [`text`] reads and writes circuit files.

pub mod circuit;
pub mod engine;
pub mod gate;
pub mod generators;
pub mod statevector;
pub mod text;

pub use circuit::{
    Amplitude, AmplitudeQuery, BasisState, Circuit, CircuitError, Gate, GateKind, WidthMismatch,
    MAX_QUBITS,
};
pub use engine::{
    end_state_reachable, path_sum_amplitude, EngineError, EngineOptions, PathSumEngine,
    TraversalStats,
};
pub use gate::{apply_nonbranching, branch_gate, classify_gate, Branch, GateClass};
pub use generators::{
    gen_hsp_standard, gen_hsp_with_layout, gen_layered_hadamard, gen_layered_qft, gen_qft, Family,
    GeneratorError, HspLayout, Seed,
};
pub use statevector::{
    statevector_amplitude, statevector_simulate, statevector_simulate_until, StateVector,
    StateVectorError, MAX_STATEVECTOR_QUBITS,
};
pub use text::{parse_basis_state, parse_circuit, read_circuit, serialize_circuit, ParseError};
