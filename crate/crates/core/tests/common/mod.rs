#![allow(dead_code)]

use num_complex::Complex64;
use pathsum_core::{BasisState, Circuit, Gate};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A uniformly random gate from the full gate set on `n` qubits.
pub fn random_gate(rng: &mut impl Rng, n: usize) -> Gate {
    loop {
        let kind = rng.gen_range(0..11);
        let needed = match kind {
            7 | 8 => 2,
            9 => 3,
            _ => 1,
        };
        if needed > n {
            continue;
        }
        let q = index::sample(rng, n, needed).into_vec();
        let theta = rng.gen_range(-std::f64::consts::TAU..std::f64::consts::TAU);
        return match kind {
            0 => Gate::h(q[0]),
            1 => Gate::x(q[0]),
            2 => Gate::y(q[0]),
            3 => Gate::z(q[0]),
            4 => Gate::s(q[0]),
            5 => Gate::t(q[0]),
            6 => Gate::p(q[0], theta),
            7 => Gate::cp(q[0], q[1], theta),
            8 => Gate::cnot(q[0], q[1]),
            9 => Gate::ccx(q[0], q[1], q[2]),
            _ => Gate::id(q[0]),
        };
    }
}

pub fn random_circuit(rng: &mut impl Rng, n: usize, len: usize) -> Circuit {
    let gates = (0..len).map(|_| random_gate(rng, n)).collect();
    Circuit::new(n, gates).unwrap()
}

/// The seeded random suite: `count` circuits with `n` in `qubits` and gate
/// count in `lengths`.
pub fn random_suite(
    seed: u64,
    count: usize,
    qubits: std::ops::RangeInclusive<usize>,
    lengths: std::ops::RangeInclusive<usize>,
) -> Vec<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(qubits.clone());
            let len = rng.gen_range(lengths.clone());
            random_circuit(&mut rng, n, len)
        })
        .collect()
}

pub fn random_state(rng: &mut impl Rng, n: usize) -> BasisState {
    BasisState::new(rng.gen_range(0..1u64 << n), n).unwrap()
}

pub type Matrix = Vec<Vec<Complex64>>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Textbook matrix of a gate on its own operands; operand `j` is bit `j` of
/// the local index.
fn local_matrix(gate: &Gate) -> Matrix {
    use pathsum_core::GateKind::*;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let diag = |d: Vec<Complex64>| -> Matrix {
        (0..d.len())
            .map(|i| {
                (0..d.len())
                    .map(|j| if i == j { d[i] } else { z })
                    .collect()
            })
            .collect()
    };
    let perm = |p: Vec<usize>| -> Matrix {
        // column j maps to row p[j]
        (0..p.len())
            .map(|i| {
                (0..p.len())
                    .map(|j| if p[j] == i { o } else { z })
                    .collect()
            })
            .collect()
    };
    match gate.kind() {
        H => vec![vec![c(r, 0.0), c(r, 0.0)], vec![c(r, 0.0), c(-r, 0.0)]],
        X => vec![vec![z, o], vec![o, z]],
        Y => vec![vec![z, c(0.0, -1.0)], vec![c(0.0, 1.0), z]],
        Z => diag(vec![o, c(-1.0, 0.0)]),
        S => diag(vec![o, c(0.0, 1.0)]),
        T => diag(vec![o, c(r, r)]),
        P(theta) => diag(vec![o, c(theta.cos(), theta.sin())]),
        CP(theta) => diag(vec![o, o, o, c(theta.cos(), theta.sin())]),
        // control = bit 0, target = bit 1: |c=1,t=0> (1) <-> |c=1,t=1> (3)
        CNOT => perm(vec![0, 3, 2, 1]),
        // controls = bits 0,1, target = bit 2: 3 <-> 7
        CCX => perm(vec![0, 1, 2, 7, 4, 5, 6, 3]),
        I => diag(vec![o, o]),
    }
}

/// Full `2^n x 2^n` matrix of one gate, built by embedding the local matrix.
pub fn gate_matrix(gate: &Gate, n: usize) -> Matrix {
    let local = local_matrix(gate);
    let qubits = gate.qubits();
    let operand_mask: usize = qubits.iter().map(|&q| 1 << q).sum();
    let local_index = |i: usize| -> usize {
        qubits
            .iter()
            .enumerate()
            .map(|(j, &q)| ((i >> q) & 1) << j)
            .sum()
    };
    let dim = 1 << n;
    (0..dim)
        .map(|row| {
            (0..dim)
                .map(|col| {
                    if row & !operand_mask == col & !operand_mask {
                        local[local_index(row)][local_index(col)]
                    } else {
                        c(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let dim = a.len();
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| (0..dim).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Product of all gate matrices, last gate leftmost.
pub fn circuit_matrix(circuit: &Circuit) -> Matrix {
    let n = circuit.num_qubits();
    let dim = 1 << n;
    let mut m: Matrix = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| c(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();
    for gate in circuit.gates() {
        m = matmul(&gate_matrix(gate, n), &m);
    }
    m
}
