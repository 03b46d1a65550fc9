//! Seeded benchmark circuit families.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`, a platform-independent stream. The same family, size and
//! seed always produce the same gate list.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Seed(pub u64);

impl Seed {
    fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("{family} needs at least {min} qubits, got {n}")]
    TooFewQubits {
        family: Family,
        n: usize,
        min: usize,
    },
    #[error("register a of size {a_size} is invalid for {n} qubits (need 2 <= |a| <= n - 1)")]
    InvalidSplit { n: usize, a_size: usize },
    #[error("--a-size only applies to the hsp family")]
    SplitNotSupported,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// The benchmark circuit families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// H on every qubit, `n` random Toffolis, H on every qubit.
    LayeredHadamard,
    /// QFT, `n` random Toffolis, QFT.
    LayeredQft,
    /// H on register a, `n` Toffolis from a onto b, QFT on a.
    HspStandard,
}

impl Family {
    pub const ALL: [Family; 3] = [
        Family::LayeredHadamard,
        Family::LayeredQft,
        Family::HspStandard,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::LayeredHadamard => "h-layer",
            Family::LayeredQft => "qft-layer",
            Family::HspStandard => "hsp",
        }
    }

    pub fn min_qubits(&self) -> usize {
        match self {
            Family::LayeredHadamard | Family::LayeredQft => 3,
            Family::HspStandard => 5,
        }
    }

    /// Builds the family member on `n` qubits. `a_size` overrides the HSP
    /// register split and is rejected for the layered families.
    pub fn generate(
        &self,
        n: usize,
        seed: Seed,
        a_size: Option<usize>,
    ) -> Result<Circuit, GeneratorError> {
        match (self, a_size) {
            (Family::LayeredHadamard, None) => gen_layered_hadamard(n, seed),
            (Family::LayeredQft, None) => gen_layered_qft(n, seed),
            (Family::HspStandard, None) => gen_hsp_standard(n, seed),
            (Family::HspStandard, Some(a)) => {
                gen_hsp_with_layout(n, seed, HspLayout::with_a_size(n, a)?)
            }
            (_, Some(_)) => Err(GeneratorError::SplitNotSupported),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family `{s}` (expected h-layer, qft-layer or hsp)"))
    }
}

/// Split of an HSP register into a prefix `a` and suffix `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HspLayout {
    pub a_qubits: Range<usize>,
    pub b_qubits: Range<usize>,
}

impl HspLayout {
    /// `|a| = floor(2n/3)`, `|b| = n - |a|`.
    pub fn standard(n: usize) -> Result<Self, GeneratorError> {
        let min = Family::HspStandard.min_qubits();
        if n < min {
            return Err(GeneratorError::TooFewQubits {
                family: Family::HspStandard,
                n,
                min,
            });
        }
        Self::with_a_size(n, 2 * n / 3)
    }

    pub fn with_a_size(n: usize, a_size: usize) -> Result<Self, GeneratorError> {
        if a_size < 2 || a_size >= n {
            return Err(GeneratorError::InvalidSplit { n, a_size });
        }
        Ok(Self {
            a_qubits: 0..a_size,
            b_qubits: a_size..n,
        })
    }
}

/// QFT cascade on `qubits` without the final swaps: for each qubit in order,
/// an H followed by `CP(2pi/2^k)` from every later qubit, `k = 2, 3, ...`.
pub fn gen_qft(qubits: &[usize]) -> Vec<Gate> {
    let mut gates = Vec::with_capacity(qubits.len() * (qubits.len() + 1) / 2);
    for (i, &target) in qubits.iter().enumerate() {
        gates.push(Gate::h(target));
        for (offset, &control) in qubits[i + 1..].iter().enumerate() {
            let k = offset as i32 + 2;
            gates.push(Gate::cp(control, target, TAU / 2f64.powi(k)));
        }
    }
    gates
}

fn check_min(family: Family, n: usize) -> Result<(), GeneratorError> {
    let min = family.min_qubits();
    if n < min {
        return Err(GeneratorError::TooFewQubits { family, n, min });
    }
    Ok(())
}

/// `count` Toffolis on uniformly sampled distinct triples of `0..n`.
fn random_toffolis(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Gate> {
    (0..count)
        .map(|_| {
            let q = index::sample(rng, n, 3);
            Gate::ccx(q.index(0), q.index(1), q.index(2))
        })
        .collect()
}

pub fn gen_layered_hadamard(n: usize, seed: Seed) -> Result<Circuit, GeneratorError> {
    check_min(Family::LayeredHadamard, n)?;
    let mut rng = seed.rng();
    let mut gates: Vec<Gate> = (0..n).map(Gate::h).collect();
    gates.extend(random_toffolis(n, n, &mut rng));
    gates.extend((0..n).map(Gate::h));
    Ok(Circuit::new(n, gates)?)
}

pub fn gen_layered_qft(n: usize, seed: Seed) -> Result<Circuit, GeneratorError> {
    check_min(Family::LayeredQft, n)?;
    let mut rng = seed.rng();
    let all: Vec<usize> = (0..n).collect();
    let mut gates = gen_qft(&all);
    gates.extend(random_toffolis(n, n, &mut rng));
    gates.extend(gen_qft(&all));
    Ok(Circuit::new(n, gates)?)
}

pub fn gen_hsp_standard(n: usize, seed: Seed) -> Result<Circuit, GeneratorError> {
    gen_hsp_with_layout(n, seed, HspLayout::standard(n)?)
}

/// HSP circuit over an explicit register split. Each Toffoli takes two
/// distinct controls from `a` and one target from `b`; controls may repeat
/// across gates.
pub fn gen_hsp_with_layout(
    n: usize,
    seed: Seed,
    layout: HspLayout,
) -> Result<Circuit, GeneratorError> {
    let a: Vec<usize> = layout.a_qubits.clone().collect();
    let b = layout.b_qubits.clone();
    let mut rng = seed.rng();

    let mut gates: Vec<Gate> = a.iter().copied().map(Gate::h).collect();
    for _ in 0..n {
        let controls = index::sample(&mut rng, a.len(), 2);
        let target = rng.gen_range(b.clone());
        gates.push(Gate::ccx(
            a[controls.index(0)],
            a[controls.index(1)],
            target,
        ));
    }
    gates.extend(gen_qft(&a));
    Ok(Circuit::new(n, gates)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;

    #[test]
    fn qft_on_one_qubit_is_hadamard() {
        assert_eq!(gen_qft(&[0]), vec![Gate::h(0)]);
    }

    #[test]
    fn qft_cascade_order_and_angles() {
        let gates = gen_qft(&[0, 1, 2]);
        assert_eq!(gates.len(), 6);
        let quarter = TAU / 4.0;
        let eighth = TAU / 8.0;
        assert_eq!(
            gates,
            vec![
                Gate::h(0),
                Gate::cp(1, 0, quarter),
                Gate::cp(2, 0, eighth),
                Gate::h(1),
                Gate::cp(2, 1, quarter),
                Gate::h(2),
            ]
        );
        for m in 1..10usize {
            let q: Vec<usize> = (0..m).collect();
            let gates = gen_qft(&q);
            assert_eq!(gates.len(), m * (m + 1) / 2);
            assert_eq!(gates.iter().filter(|g| g.kind() == GateKind::H).count(), m);
        }
    }

    #[test]
    fn layered_hadamard_counts() {
        let c = gen_layered_hadamard(4, Seed(7)).unwrap();
        assert_eq!((c.branching_count(), c.nonbranching_count()), (8, 4));
    }

    #[test]
    fn layered_qft_counts() {
        let c = gen_layered_qft(4, Seed(7)).unwrap();
        assert_eq!((c.branching_count(), c.nonbranching_count()), (8, 16));
        let c = gen_layered_qft(3, Seed(7)).unwrap();
        assert_eq!((c.branching_count(), c.nonbranching_count()), (6, 9));
    }

    #[test]
    fn hsp_counts_and_layout() {
        let layout = HspLayout::standard(6).unwrap();
        assert_eq!((layout.a_qubits.len(), layout.b_qubits.len()), (4, 2));
        let c = gen_hsp_standard(6, Seed(3)).unwrap();
        assert_eq!((c.branching_count(), c.nonbranching_count()), (8, 12));

        let layout = HspLayout::standard(9).unwrap();
        assert_eq!((layout.a_qubits.len(), layout.b_qubits.len()), (6, 3));
        let c = gen_hsp_standard(9, Seed(3)).unwrap();
        assert_eq!((c.branching_count(), c.nonbranching_count()), (12, 24));
    }

    #[test]
    fn hsp_toffolis_run_from_a_to_b() {
        let c = gen_hsp_standard(11, Seed(99)).unwrap();
        let layout = HspLayout::standard(11).unwrap();
        for g in c.gates().iter().filter(|g| g.kind() == GateKind::CCX) {
            let q = g.qubits();
            assert!(layout.a_qubits.contains(&q[0]) && layout.a_qubits.contains(&q[1]));
            assert!(layout.b_qubits.contains(&q[2]));
        }
    }

    #[test]
    fn hsp_has_fewer_branching_gates() {
        for n in 5..=20 {
            let hsp = gen_hsp_standard(n, Seed(1)).unwrap();
            let layered = gen_layered_hadamard(n, Seed(1)).unwrap();
            assert!(hsp.branching_count() < layered.branching_count());
        }
    }

    #[test]
    fn custom_split() {
        let c = Family::HspStandard.generate(8, Seed(2), Some(4)).unwrap();
        assert_eq!(
            (c.branching_count(), c.nonbranching_count()),
            (8, 4 * 3 / 2 + 8)
        );
        assert_eq!(
            Family::HspStandard.generate(8, Seed(2), Some(8)),
            Err(GeneratorError::InvalidSplit { n: 8, a_size: 8 })
        );
        assert_eq!(
            Family::LayeredQft.generate(8, Seed(2), Some(4)),
            Err(GeneratorError::SplitNotSupported)
        );
    }

    #[test]
    fn deterministic_under_seed() {
        for family in Family::ALL {
            let a = family.generate(7, Seed(42), None).unwrap();
            let b = family.generate(7, Seed(42), None).unwrap();
            assert_eq!(a, b);
        }
        assert_ne!(
            gen_layered_hadamard(8, Seed(1)).unwrap(),
            gen_layered_hadamard(8, Seed(2)).unwrap()
        );
    }

    #[test]
    fn rejects_small_registers() {
        assert!(matches!(
            gen_layered_hadamard(2, Seed(0)),
            Err(GeneratorError::TooFewQubits { min: 3, .. })
        ));
        assert!(gen_layered_qft(2, Seed(0)).is_err());
        assert!(matches!(
            gen_hsp_standard(4, Seed(0)),
            Err(GeneratorError::TooFewQubits { min: 5, .. })
        ));
    }

    #[test]
    fn family_names_parse() {
        for family in Family::ALL {
            assert_eq!(family.name().parse::<Family>().unwrap(), family);
        }
        assert!("qft".parse::<Family>().is_err());
    }
}
