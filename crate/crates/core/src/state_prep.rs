//! Preparation of the dyadic-weight superpositions over the input register.
//!
//! A rotation stage of one `Ry` per input qubit produces squared amplitudes
//! `2^(2^n - 1 - x) / (2^(2^n) - 1)` on `|x>` (or `2^x / ...` for the upward
//! ladder). A permutation stage then moves each amplitude to the word whose
//! Hamming-weight rank matches, so the final weights decrease (or increase)
//! with the rank `p(x)`.

use std::fmt::Write as _;

use num_integer::binomial;

use crate::boolean::InputWord;
use crate::error::{Result, TnnError};
use crate::network::word_qubit_mask;
use crate::scalar::Real;
use crate::statevector::{GateOp, StateVector};

/// Largest arity for which a ranking table is built.
pub const MAX_RANKING_ARITY: usize = 20;

/// Which end of the ranking gets the large weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Weight `2^(2^n - 1 - p(x))`: low Hamming weight dominates.
    Down,
    /// Weight `2^p(x)`: high Hamming weight dominates.
    Up,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::Down => Direction::Up,
            Direction::Up => Direction::Down,
        }
    }
}

/// 1-based rank of `x` among the words of the same Hamming weight, in integer order.
pub fn weight_rank(x: InputWord) -> usize {
    let mut remaining = x.weight();
    let mut below = 0usize;
    for j in (0..x.arity()).rev() {
        if x.value() >> j & 1 == 1 {
            below += binomial(j, remaining);
            remaining -= 1;
        }
    }
    below + 1
}

/// The bijection `p` ordering words by Hamming weight, then by integer value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ranking {
    n: usize,
    p: Vec<usize>,
    inverse: Vec<usize>,
}

impl Ranking {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_RANKING_ARITY {
            return Err(TnnError::ArityTooLarge {
                n,
                max: MAX_RANKING_ARITY,
            });
        }
        let dim = 1usize << n;
        let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        for x in 0..dim {
            classes[x.count_ones() as usize].push(x);
        }
        let mut p = vec![0usize; dim];
        // p(0) = 0; each later class starts right after the previous class's maximum
        let mut prev_max = 0usize;
        for class in classes.iter().skip(1) {
            let mut class_max = prev_max;
            for &x in class {
                let r = prev_max + weight_rank(InputWord::new(x, n)?);
                p[x] = r;
                class_max = class_max.max(r);
            }
            prev_max = class_max;
        }
        let mut inverse = vec![0usize; dim];
        for (x, &r) in p.iter().enumerate() {
            inverse[r] = x;
        }
        Ok(Self { n, p, inverse })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn rank(&self, x: usize) -> usize {
        self.p[x]
    }

    pub fn word_of_rank(&self, r: usize) -> usize {
        self.inverse[r]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.p
    }

    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }
}

pub fn ranking(n: usize) -> Result<Ranking> {
    Ranking::new(n)
}

/// `θ_k = arccos(sqrt(2^(2^k) / (2^(2^k) + 1)))`, evaluated as `atan(2^(-2^(k-1)))`
/// so large `k` does not overflow.
pub fn theta<T: Real>(k: usize) -> T {
    T::from_f64_lossy(half_angle_tan(k).atan())
}

fn half_angle_tan(k: usize) -> f64 {
    let e = (k as f64 - 1.0).exp2();
    (-e).exp2()
}

fn ladder_angle<T: Real>(k: usize, direction: Direction) -> T {
    let t = half_angle_tan(k);
    let a = match direction {
        Direction::Down => t.atan(),
        // arcsin in place of arccos: π/2 - θ_k = atan(1 / tan θ_k)
        Direction::Up => 1.0f64.atan2(t),
    };
    T::from_f64_lossy(a)
}

/// One `Ry` per input qubit: qubit `i` gets `Ry(2 θ_{n-1-i})` (or its complement for `Up`).
pub fn rotation_stage<T: Real>(n: usize, direction: Direction) -> Vec<GateOp<T>> {
    (0..n)
        .map(|i| GateOp::Ry {
            target: i,
            theta: T::from_f64_lossy(2.0) * ladder_angle::<T>(n - 1 - i, direction),
        })
        .collect()
}

/// `σ(x) = p^{-1}(x)`, as a lookup table over word values.
pub fn sigma(n: usize) -> Result<Vec<usize>> {
    Ok(Ranking::new(n)?.inverse)
}

/// A swap of two word values.
pub type Transposition = (usize, usize);

/// Splits a permutation into transpositions by repeatedly fixing the smallest moved point.
///
/// Applying the returned transpositions to a word in list order (first entry
/// first) reproduces `perm`.
pub fn decompose_transpositions(perm: &[usize]) -> Vec<Transposition> {
    let mut rest = perm.to_vec();
    let mut found = Vec::new();
    while let Some(x0) = (0..rest.len()).find(|&x| rest[x] != x) {
        let t = (x0, rest[x0]);
        for v in rest.iter_mut() {
            *v = apply_transposition(t, *v);
        }
        found.push(t);
    }
    // perm = t_1 ∘ t_2 ∘ ... ∘ t_k, so t_k acts first
    found.reverse();
    found
}

pub fn apply_transposition((a, b): Transposition, x: usize) -> usize {
    if x == a {
        b
    } else if x == b {
        a
    } else {
        x
    }
}

/// Multi-controlled X gates swapping basis words `a` and `b` of the input register.
///
/// Walks a single-bit-flip path from `a` to `b`, flipping differing bits from
/// `x_0` downwards. Every step is an X on the flipped qubit, controlled on all
/// other input qubits with the polarity they have before the step.
pub fn gray_circuit<T: Real>(a: InputWord, b: InputWord) -> Result<Vec<GateOp<T>>> {
    if a.arity() != b.arity() {
        return Err(TnnError::ArityMismatch {
            left: a.arity(),
            right: b.arity(),
        });
    }
    if a == b {
        return Err(TnnError::DegenerateTransposition(a.value()));
    }
    let n = a.arity();
    let all = word_qubit_mask((1usize << n) - 1, n);
    let mut steps = Vec::new();
    let mut current = a.value();
    for i in (0..n).filter(|&i| a.bit(i) != b.bit(i)) {
        let pos = word_qubit_mask(current, n) & !(1 << i);
        let neg = all & !pos & !(1 << i);
        steps.push(GateOp::Mcx {
            pos,
            neg,
            target: i,
        });
        current ^= 1 << (n - 1 - i);
    }
    let pivot = steps.pop().expect("a != b differ somewhere");
    let mut gates = steps.clone();
    gates.push(pivot);
    gates.extend(steps.into_iter().rev());
    Ok(gates)
}

/// A synthesized preparation circuit on an `n + 1` qubit register; the readout
/// (qubit `n`) is never touched.
#[derive(Clone, Debug, PartialEq)]
pub struct PrepCircuit<T> {
    pub n: usize,
    pub direction: Direction,
    pub rotation: Vec<GateOp<T>>,
    pub permutation: Vec<GateOp<T>>,
}

impl<T: Real> PrepCircuit<T> {
    pub fn synthesize(n: usize, direction: Direction) -> Result<Self> {
        let perm = sigma(n)?;
        let mut permutation = Vec::new();
        for (a, b) in decompose_transpositions(&perm) {
            permutation.extend(gray_circuit(InputWord::new(a, n)?, InputWord::new(b, n)?)?);
        }
        Ok(Self {
            n,
            direction,
            rotation: rotation_stage(n, direction),
            permutation,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n + 1
    }

    pub fn gates(&self) -> impl Iterator<Item = &GateOp<T>> {
        self.rotation.iter().chain(self.permutation.iter())
    }

    /// One gate per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for g in self.gates() {
            let _ = writeln!(out, "{}", g.dump_line(self.n_qubits()));
        }
        out
    }

    /// Runs the circuit from `|0...0>|0>`.
    pub fn run(&self) -> Result<StateVector<T>> {
        let mut s = StateVector::zero(self.n_qubits())?;
        s.apply_all(self.gates())?;
        Ok(s)
    }
}

/// Synthesizes and simulates the preparation of the chosen superposition.
pub fn prepare<T: Real>(
    n: usize,
    direction: Direction,
) -> Result<(PrepCircuit<T>, StateVector<T>)> {
    let circuit = PrepCircuit::synthesize(n, direction)?;
    let state = circuit.run()?;
    Ok((circuit, state))
}

/// Writes the closed-form amplitudes straight into an `n + 1` qubit state (readout 0).
pub fn prepare_direct<T: Real>(n: usize, direction: Direction) -> Result<StateVector<T>> {
    let amps = reference_amplitudes::<T>(n, direction)?;
    let mut full = vec![T::zero(); amps.len() * 2];
    for (x, a) in amps.into_iter().enumerate() {
        full[x << 1] = a;
    }
    StateVector::from_amplitudes(n + 1, full)
}

/// Closed-form amplitudes over the `2^n` input words.
pub fn reference_amplitudes<T: Real>(n: usize, direction: Direction) -> Result<Vec<T>> {
    let ranking = Ranking::new(n)?;
    let dim = 1usize << n;
    // 2^e / (2^(2^n) - 1) = 2^(e - 2^n) / (1 - 2^(-2^n))
    let denom = 1.0 - (-(dim as f64)).exp2();
    Ok(ranking
        .ranks()
        .iter()
        .map(|&r| {
            let e = match direction {
                Direction::Down => dim - 1 - r,
                Direction::Up => r,
            };
            let w = (e as f64 - dim as f64).exp2() / denom;
            T::from_f64_lossy(w.sqrt())
        })
        .collect())
}

/// Subset weight `Σ_{x∈S} 2^(2^n - 1 - p(x))` (or `2^p(x)` upward) as an integer.
///
/// Needs `2^n <= 64`.
pub fn subset_weight(ranking: &Ranking, subset: &[usize], direction: Direction) -> u64 {
    let dim = 1usize << ranking.arity();
    assert!(dim <= 64, "subset weights exceed 64 bits");
    subset
        .iter()
        .map(|&x| {
            let r = ranking.rank(x);
            let bit = match direction {
                Direction::Down => dim - 1 - r,
                Direction::Up => r,
            };
            1u64 << bit
        })
        .fold(0, |a, b| a | b)
}
