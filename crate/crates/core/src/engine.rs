//! Recursive depth-first path summation.
//!
//! The amplitude `<end|C|start>` is the sum, over every root-to-leaf path of
//! the computation tree that lands on `end`, of the product of the phase
//! factors along the path. The traversal keeps one mutable state word and an
//! amplitude register with one slot per tree level, so a query uses
//! `O(n + h)` memory regardless of how many paths it visits.

use std::thread;
use std::time::Instant;

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Amplitude, AmplitudeQuery, BasisState, Circuit, WidthMismatch};
use crate::gate::{hadamard_factors, CompiledGate};

const ZERO: Amplitude = Complex64::new(0.0, 0.0);
const ONE: Amplitude = Complex64::new(1.0, 0.0);

/// How many branch nodes to visit between clock reads when a deadline is set.
const DEADLINE_CHECK_INTERVAL: u32 = 1024;

#[derive(Clone, Copy, Debug)]
pub struct EngineOptions {
    /// Cut subtrees that cannot reach the end state with the gates left.
    pub prune: bool,
    /// Abandon the query once this instant passes. Checked at branch nodes.
    pub deadline: Option<Instant>,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            prune: true,
            deadline: None,
        }
    }
}

impl EngineOptions {
    pub fn unpruned() -> Self {
        Self {
            prune: false,
            ..Self::default()
        }
    }
}

/// Counters collected during one traversal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TraversalStats {
    /// Recursive invocations below the top-level call; two per branch node.
    pub recursion_calls: u64,
    /// Tree edges descended. Each edge is also walked back once on unwind.
    pub edges_traversed: u64,
    pub prunes: u64,
    pub max_depth_reached: usize,
}

impl TraversalStats {
    fn absorb(&mut self, other: &TraversalStats) {
        self.recursion_calls += other.recursion_calls;
        self.edges_traversed += other.edges_traversed;
        self.prunes += other.prunes;
        self.max_depth_reached = self.max_depth_reached.max(other.max_depth_reached);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    WidthMismatch(#[from] WidthMismatch),
    #[error("deadline exceeded after {} recursion calls", .0.recursion_calls)]
    DeadlineExceeded(TraversalStats),
}

/// True when `end` can still be reached from `current`: every gate flips at
/// most one bit, so the Hamming distance must not exceed the gates left.
pub fn end_state_reachable(current: BasisState, end: BasisState, gates_remaining: usize) -> bool {
    debug_assert_eq!(current.width(), end.width());
    current.hamming_distance(&end) as usize <= gates_remaining
}

/// Computes `<end|C|start>` by depth-first path summation.
pub fn path_sum_amplitude(
    circuit: &Circuit,
    query: &AmplitudeQuery,
    options: EngineOptions,
) -> Result<(Amplitude, TraversalStats), EngineError> {
    PathSumEngine::new(circuit).amplitude(query, options)
}

/// A circuit lowered once for repeated amplitude queries.
///
/// The engine itself is immutable; each query builds its own traversal state,
/// so one engine can serve queries from several threads.
#[derive(Clone, Debug)]
pub struct PathSumEngine<'c> {
    circuit: &'c Circuit,
    ops: Vec<CompiledGate>,
}

impl<'c> PathSumEngine<'c> {
    pub fn new(circuit: &'c Circuit) -> Self {
        Self {
            circuit,
            ops: circuit.gates().iter().map(CompiledGate::new).collect(),
        }
    }

    pub fn circuit(&self) -> &Circuit {
        self.circuit
    }

    pub fn amplitude(
        &self,
        query: &AmplitudeQuery,
        options: EngineOptions,
    ) -> Result<(Amplitude, TraversalStats), EngineError> {
        query.check_width(self.circuit)?;
        let mut walk = self.traversal(query, options);
        walk.recursive_step(0, 0, ONE);
        walk.finish(0)
    }

    /// Same result as [`amplitude`](Self::amplitude), with the two subtrees
    /// of the first branching gate evaluated on separate threads. Branch
    /// results are combined in the serial order, so the value is identical.
    pub fn amplitude_parallel(
        &self,
        query: &AmplitudeQuery,
        options: EngineOptions,
    ) -> Result<(Amplitude, TraversalStats), EngineError> {
        query.check_width(self.circuit)?;
        let mut root = self.traversal(query, options);
        let Some((index, phase)) = root.advance(0, 0, ONE) else {
            return root.finish(0);
        };
        let CompiledGate::Hadamard { mask } = self.ops[index] else {
            unreachable!("advance stops only at branching gates");
        };
        let saved = root.current;
        let (f0, f1) = hadamard_factors(saved & mask != 0);
        let branches = [(saved & !mask, f0), (saved | mask, f1)];

        let children = thread::scope(|scope| {
            let handles = branches.map(|(bits, factor)| {
                scope.spawn(move || {
                    let mut child = self.traversal(query, options);
                    child.current = bits;
                    child.recursive_step(1, index + 1, phase * factor);
                    child
                })
            });
            handles.map(|h| h.join().expect("path-sum worker panicked"))
        });

        let mut total = ZERO;
        for child in &children {
            root.stats.absorb(&child.stats);
            root.stats.recursion_calls += 1;
            root.stats.edges_traversed += 1;
            root.timed_out |= child.timed_out;
            total += child.register[1];
        }
        root.register[0] = total;
        root.finish(0)
    }

    fn traversal(&self, query: &AmplitudeQuery, options: EngineOptions) -> Traversal<'_> {
        Traversal {
            ops: &self.ops,
            end: query.end.bits(),
            current: query.start.bits(),
            register: vec![ZERO; self.circuit.branching_count() + 1],
            stats: TraversalStats::default(),
            prune: options.prune,
            deadline: options.deadline,
            until_clock_check: 0,
            timed_out: false,
        }
    }
}

/// Mutable state of one query.
struct Traversal<'a> {
    ops: &'a [CompiledGate],
    end: u64,
    current: u64,
    /// Slot `d` holds the partial amplitude of the active call at depth `d`.
    register: Vec<Amplitude>,
    stats: TraversalStats,
    prune: bool,
    deadline: Option<Instant>,
    until_clock_check: u32,
    timed_out: bool,
}

impl Traversal<'_> {
    fn finish(self, depth: usize) -> Result<(Amplitude, TraversalStats), EngineError> {
        if self.timed_out {
            Err(EngineError::DeadlineExceeded(self.stats))
        } else {
            Ok((self.register[depth], self.stats))
        }
    }

    /// Evaluates the subtree rooted at gate `index` with the current state
    /// word, leaving its amplitude in `register[depth]`.
    fn recursive_step(&mut self, depth: usize, index: usize, phase: Amplitude) {
        let Some((index, phase)) = self.advance(depth, index, phase) else {
            return;
        };
        let CompiledGate::Hadamard { mask } = self.ops[index] else {
            unreachable!("advance stops only at branching gates");
        };
        if self.clock_expired() {
            self.timed_out = true;
            self.register[depth] = ZERO;
            return;
        }

        self.register[depth] = ZERO;
        let saved = self.current;
        let (f0, f1) = hadamard_factors(saved & mask != 0);
        for (bits, factor) in [(saved & !mask, f0), (saved | mask, f1)] {
            self.current = bits;
            self.stats.edges_traversed += 1;
            self.stats.recursion_calls += 1;
            self.recursive_step(depth + 1, index + 1, phase * factor);
            let child = self.register[depth + 1];
            self.register[depth] += child;
            self.current = saved;
            if self.timed_out {
                return;
            }
        }
    }

    /// Applies non-branching gates from `index` on. Returns the position and
    /// accumulated phase of the next branching gate, or `None` once this path
    /// is resolved (leaf reached or pruned) with `register[depth]` written.
    fn advance(
        &mut self,
        depth: usize,
        mut index: usize,
        mut phase: Amplitude,
    ) -> Option<(usize, Amplitude)> {
        self.stats.max_depth_reached = self.stats.max_depth_reached.max(depth);
        let total = self.ops.len();
        while index < total {
            if self.prune && (self.current ^ self.end).count_ones() as usize > total - index {
                self.stats.prunes += 1;
                self.register[depth] = ZERO;
                return None;
            }
            match self.ops[index] {
                CompiledGate::Hadamard { .. } => return Some((index, phase)),
                op => {
                    let (bits, factor) = op.apply(self.current);
                    self.current = bits;
                    phase *= factor;
                    self.stats.edges_traversed += 1;
                    index += 1;
                }
            }
        }
        self.register[depth] = if self.current == self.end {
            phase
        } else {
            ZERO
        };
        None
    }

    fn clock_expired(&mut self) -> bool {
        let Some(deadline) = self.deadline else {
            return false;
        };
        if self.until_clock_check > 0 {
            self.until_clock_check -= 1;
            return false;
        }
        self.until_clock_check = DEADLINE_CHECK_INTERVAL;
        Instant::now() >= deadline
    }
}
