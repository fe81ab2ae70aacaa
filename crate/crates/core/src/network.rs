//! The tunable network: one slot `G_u ∈ {I, C_u}` per monomial mask `u`, the
//! identification with ANF coefficient vectors, and the marking oracle.

use std::fmt;
use std::str::FromStr;

use crate::bits::BitTable;
use crate::boolean::{
    anf_from_truth_table, check_arity, truth_table_from_anf, Anf, BooleanFunction, InputWord,
};
use crate::error::{Result, TnnError};
use crate::scalar::Real;
use crate::statevector::{GateOp, StateVector};

/// Qubit-set mask selecting the input qubits `{i | u_i = 1}`.
pub(crate) fn word_qubit_mask(u: usize, n: usize) -> u64 {
    (0..n)
        .filter(|&i| (u >> (n - 1 - i)) & 1 == 1)
        .fold(0u64, |m, i| m | 1 << i)
}

/// Gate configuration; bit `u` set means `G_u = C_u`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TnnConfig {
    n: usize,
    gates: BitTable,
}

impl TnnConfig {
    /// All gates set to the identity.
    pub fn identity(n: usize) -> Result<Self> {
        check_arity(n)?;
        Ok(Self {
            n,
            gates: BitTable::zeros(1 << n),
        })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &BitTable {
        &self.gates
    }

    pub fn is_active(&self, u: usize) -> bool {
        self.gates.get(u)
    }

    pub fn active_gates(&self) -> impl Iterator<Item = InputWord> + '_ {
        let n = self.n;
        self.gates
            .iter_ones()
            .map(move |u| InputWord::new(u, n).expect("gate index fits arity"))
    }

    /// Flips `G_u` between `I` and `C_u`.
    pub fn toggle(&mut self, u: InputWord) -> Result<()> {
        self.check_word(u)?;
        self.gates.toggle(u.value());
        Ok(())
    }

    pub fn toggled(mut self, u: InputWord) -> Result<Self> {
        self.toggle(u)?;
        Ok(self)
    }

    /// The function computed on the readout from `|x>|0>`.
    pub fn computed_function(&self) -> BooleanFunction {
        truth_table_from_anf(&phi_inverse(self))
    }

    /// Multi-controlled X gates of the active slots, ascending by mask.
    /// The readout is qubit `n`.
    pub fn gate_ops<T: Real>(&self) -> Vec<GateOp<T>> {
        self.gates
            .iter_ones()
            .map(|u| GateOp::Mcx {
                pos: word_qubit_mask(u, self.n),
                neg: 0,
                target: self.n,
            })
            .collect()
    }

    /// Applies the network in place to an `n + 1` qubit state.
    pub fn apply<T: Real>(&self, s: &mut StateVector<T>) -> Result<()> {
        self.check_register(s)?;
        for u in self.gates.iter_ones() {
            s.apply_mcx(word_qubit_mask(u, self.n), 0, self.n)?;
        }
        Ok(())
    }

    fn check_word(&self, u: InputWord) -> Result<()> {
        if u.arity() != self.n {
            return Err(TnnError::ArityMismatch {
                left: self.n,
                right: u.arity(),
            });
        }
        Ok(())
    }

    fn check_register<T: Real>(&self, s: &StateVector<T>) -> Result<()> {
        if s.n_qubits() != self.n + 1 {
            return Err(TnnError::ArityMismatch {
                left: self.n + 1,
                right: s.n_qubits(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for TnnConfig {
    /// `2^n` characters in mask order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.gates.fmt(f)
    }
}

impl fmt::Debug for TnnConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TnnConfig(n={}, {})", self.n, self.gates)
    }
}

impl FromStr for TnnConfig {
    type Err = TnnError;

    fn from_str(s: &str) -> Result<Self> {
        if !s.len().is_power_of_two() {
            return Err(TnnError::Parse(format!(
                "config length {} is not a power of two",
                s.len()
            )));
        }
        if let Some(c) = s.chars().find(|c| *c != '0' && *c != '1') {
            return Err(TnnError::Parse(format!("invalid config character {c:?}")));
        }
        let n = s.len().trailing_zeros() as usize;
        check_arity(n)?;
        Ok(Self {
            n,
            gates: BitTable::from_bools(s.chars().map(|c| c == '1')),
        })
    }
}

/// `Φ`: gate `u` is active iff monomial `m_u` is present.
pub fn phi(a: &Anf) -> TnnConfig {
    TnnConfig {
        n: a.arity(),
        gates: a.coeffs().clone(),
    }
}

pub fn phi_inverse(c: &TnnConfig) -> Anf {
    Anf::new(c.n, c.gates.clone()).expect("config length matches arity")
}

/// Functional form of [`TnnConfig::apply`].
pub fn apply_tnn<T: Real>(c: &TnnConfig, mut s: StateVector<T>) -> Result<StateVector<T>> {
    c.apply(&mut s)?;
    Ok(s)
}

pub fn toggle_gate(c: &TnnConfig, u: InputWord) -> Result<TnnConfig> {
    c.clone().toggled(u)
}

/// Marking oracle for a target function, realized as `|x>|q> -> |x>|q ⊕ f(x)>`.
///
/// This sends `|x>|f(x)>` to `|x>|0>` and `|x>|1 ⊕ f(x)>` to `|x>|1>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Oracle {
    f: BooleanFunction,
    circuit: TnnConfig,
}

impl Oracle {
    pub fn new(f: BooleanFunction) -> Self {
        let circuit = phi(&anf_from_truth_table(&f));
        Self { f, circuit }
    }

    pub fn function(&self) -> &BooleanFunction {
        &self.f
    }

    pub fn arity(&self) -> usize {
        self.f.arity()
    }

    pub fn apply<T: Real>(&self, s: &mut StateVector<T>) -> Result<()> {
        self.circuit.apply(s)
    }
}

pub fn apply_oracle<T: Real>(o: &Oracle, mut s: StateVector<T>) -> Result<StateVector<T>> {
    o.apply(&mut s)?;
    Ok(s)
}
