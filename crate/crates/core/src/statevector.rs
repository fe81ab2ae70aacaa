//! Dense real-amplitude state vectors and the gate kernels used by the network,
//! the oracle and the state-preparation circuits.
//!
//! Qubit `i` of an `n_qubits` register occupies bit `n_qubits - 1 - i` of the
//! basis index, so `|x_0 ... x_{n-1}>|q_r>` reads as the binary number
//! `x_0 ... x_{n-1} q_r`. Gate control masks are *qubit sets*: bit `i` of a mask
//! selects qubit `i`, independent of the register width.

use std::fmt;

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Result, TnnError};
use crate::scalar::Real;

pub const MAX_QUBITS: usize = 30;

/// One gate of the supported set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateOp<T> {
    /// X on `target`, fired when every qubit in `pos` is 1 and every qubit in `neg` is 0.
    Mcx {
        pos: u64,
        neg: u64,
        target: usize,
    },
    Ry {
        target: usize,
        theta: T,
    },
    H {
        target: usize,
    },
}

impl<T: Real> GateOp<T> {
    /// Validated multi-controlled X.
    pub fn mcx(pos: u64, neg: u64, target: usize) -> Result<Self> {
        validate_mcx(pos, neg, target)?;
        Ok(GateOp::Mcx { pos, neg, target })
    }

    pub fn x(target: usize) -> Self {
        GateOp::Mcx {
            pos: 0,
            neg: 0,
            target,
        }
    }

    pub fn target(&self) -> usize {
        match *self {
            GateOp::Mcx { target, .. } | GateOp::Ry { target, .. } | GateOp::H { target } => target,
        }
    }

    /// One line of the circuit dump format for a register of `n_qubits`.
    pub fn dump_line(&self, n_qubits: usize) -> String {
        match *self {
            GateOp::Mcx { pos, neg, target } => format!(
                "MCX target={target} pos={} neg={}",
                mask_string(pos, n_qubits),
                mask_string(neg, n_qubits)
            ),
            GateOp::Ry { target, theta } => format!("RY target={target} theta={theta:.12}"),
            GateOp::H { target } => format!("H target={target}"),
        }
    }
}

/// Qubit-set mask as a `0`/`1` string, qubit 0 first.
pub fn mask_string(mask: u64, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|q| if mask >> q & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn validate_mcx(pos: u64, neg: u64, target: usize) -> Result<()> {
    if pos & neg != 0 {
        return Err(TnnError::InvalidGate(format!(
            "positive and negative controls overlap: {pos:#b} & {neg:#b}"
        )));
    }
    if target >= 64 || (pos | neg) >> target & 1 == 1 {
        return Err(TnnError::InvalidGate(format!(
            "target {target} is also a control"
        )));
    }
    Ok(())
}

#[derive(Clone, PartialEq)]
pub struct StateVector<T> {
    n_qubits: usize,
    amps: Vec<T>,
}

impl<T: Real> StateVector<T> {
    /// `|0 ... 0>`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis_state(n_qubits, 0)
    }

    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(TnnError::ArityTooLarge {
                n: n_qubits,
                max: MAX_QUBITS,
            });
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(TnnError::BasisIndexOutOfRange { index, n_qubits });
        }
        let mut amps = vec![T::zero(); dim];
        amps[index] = T::one();
        Ok(Self { n_qubits, amps })
    }

    /// Wraps an amplitude array; it must have `2^n_qubits` entries and unit norm.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<T>) -> Result<Self> {
        if n_qubits > MAX_QUBITS || amps.len() != 1usize << n_qubits {
            return Err(TnnError::InvalidArgument(format!(
                "{} amplitudes for {n_qubits} qubits",
                amps.len()
            )));
        }
        let s = Self { n_qubits, amps };
        let tol = T::from_f64_lossy(1e-10).max(T::epsilon() * T::from_f64_lossy(64.0));
        if (s.norm_sqr() - T::one()).abs() > tol {
            return Err(TnnError::InvalidArgument(format!(
                "state is not normalized: {}",
                s.norm_sqr()
            )));
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[T] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> T {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|&a| a * a).sum()
    }

    #[inline]
    fn qubit_bit(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            Err(TnnError::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            })
        } else {
            Ok(())
        }
    }

    fn basis_mask(&self, qubit_mask: u64) -> Result<usize> {
        if self.n_qubits < 64 && qubit_mask >> self.n_qubits != 0 {
            return Err(TnnError::QubitOutOfRange {
                qubit: 63 - qubit_mask.leading_zeros() as usize,
                n_qubits: self.n_qubits,
            });
        }
        Ok((0..self.n_qubits)
            .filter(|&q| qubit_mask >> q & 1 == 1)
            .map(|q| self.qubit_bit(q))
            .fold(0, |acc, b| acc | b))
    }

    /// Multi-controlled X with mixed control polarity. Amplitudes are permuted, never combined.
    pub fn apply_mcx(&mut self, pos: u64, neg: u64, target: usize) -> Result<()> {
        validate_mcx(pos, neg, target)?;
        self.check_qubit(target)?;
        let pos_b = self.basis_mask(pos)?;
        let neg_b = self.basis_mask(neg)?;
        let t = self.qubit_bit(target);
        for b in 0..self.amps.len() {
            if b & t == 0 && b & pos_b == pos_b && b & neg_b == 0 {
                self.amps.swap(b, b | t);
            }
        }
        Ok(())
    }

    /// `Ry(theta) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]]` on one qubit.
    pub fn apply_ry(&mut self, qubit: usize, theta: T) -> Result<()> {
        self.check_qubit(qubit)?;
        let half = theta / T::from_f64_lossy(2.0);
        let (s, c) = half.sin_cos();
        self.pairwise(qubit, |a0, a1| (c * a0 - s * a1, s * a0 + c * a1));
        Ok(())
    }

    pub fn apply_h(&mut self, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        let r = T::FRAC_1_SQRT_2();
        self.pairwise(qubit, |a0, a1| (r * (a0 + a1), r * (a0 - a1)));
        Ok(())
    }

    fn pairwise(&mut self, qubit: usize, op: impl Fn(T, T) -> (T, T)) {
        let t = self.qubit_bit(qubit);
        for b in 0..self.amps.len() {
            if b & t == 0 {
                let (a0, a1) = op(self.amps[b], self.amps[b | t]);
                self.amps[b] = a0;
                self.amps[b | t] = a1;
            }
        }
    }

    pub fn apply(&mut self, gate: &GateOp<T>) -> Result<()> {
        match *gate {
            GateOp::Mcx { pos, neg, target } => self.apply_mcx(pos, neg, target),
            GateOp::Ry { target, theta } => self.apply_ry(target, theta),
            GateOp::H { target } => self.apply_h(target),
        }
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a GateOp<T>>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// Functional form of [`StateVector::apply`].
    pub fn applied(mut self, gate: &GateOp<T>) -> Result<Self> {
        self.apply(gate)?;
        Ok(self)
    }

    /// Probability of reading `|1>` on `qubit`.
    pub fn prob_one(&self, qubit: usize) -> Result<T> {
        self.check_qubit(qubit)?;
        let t = self.qubit_bit(qubit);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(b, _)| b & t != 0)
            .map(|(_, &a)| a * a)
            .sum())
    }

    /// Number of ones among `shots` independent single-qubit measurements of `qubit`.
    pub fn sample_counts<R: Rng + ?Sized>(
        &self,
        qubit: usize,
        shots: u64,
        rng: &mut R,
    ) -> Result<u64> {
        if shots == 0 {
            return Err(TnnError::InvalidArgument("shots must be at least 1".into()));
        }
        let p = self
            .prob_one(qubit)?
            .to_f64()
            .unwrap_or(0.0)
            .clamp(0.0, 1.0);
        Ok(sample_bernoulli_sum(p, shots, rng))
    }
}

/// Sum of `shots` Bernoulli(`p`) draws.
pub(crate) fn sample_bernoulli_sum<R: Rng + ?Sized>(p: f64, shots: u64, rng: &mut R) -> u64 {
    if p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return shots;
    }
    Binomial::new(shots, p).expect("p in (0, 1)").sample(rng)
}

impl<T: Real> fmt::Debug for StateVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "StateVector({} qubits)", self.n_qubits)?;
        for (b, a) in self.amps.iter().enumerate() {
            if *a != T::zero() {
                writeln!(f, "  |{:0w$b}> {a}", b, w = self.n_qubits)?;
            }
        }
        Ok(())
    }
}
