//! Tunable quantum neural networks built from multi-controlled X gates.
//!
//! A Boolean function `f: B^n -> B` has a unique algebraic normal form
//! `f = XOR_u c_u m_u`. Replacing each monomial `m_u` by the X gate on a
//! readout qubit controlled by the inputs selected in `u` gives a circuit that
//! maps `|x>|q>` to `|x>|q ⊕ f(x)>`. A *tunable* network has one slot per mask,
//! each either the identity or that gate, and is trained by toggling the slots
//! of every input currently answered wrongly.
//!
//! Modules:
//! - [`boolean`]: truth tables, ANF and the Möbius transform.
//! - [`statevector`]: real-amplitude simulation of MCX, Ry and H.
//! - [`network`]: gate configurations, the ANF/circuit identification, the oracle.
//! - [`state_prep`]: dyadic-weight superpositions and their circuits.
//! - [`learner`]: the training loop in ideal and sampled modes.
//!
//! Simulation code is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar for common use.

pub mod bits;
pub mod boolean;
pub mod error;
pub mod learner;
pub mod network;
pub mod scalar;
pub mod state_prep;
pub mod statevector;

pub use bits::BitTable;
pub use boolean::{
    anf_from_truth_table, eval_monomial, parse_function, transform_matrix, truth_table_from_anf,
    xor_functions, Anf, BooleanFunction, InputWord, TransformMatrix,
};
pub use error::{Result, TnnError};
pub use learner::{
    decode_subset, default_max_updates, qt_ideal, qt_sampled, shot_count, target_config, train,
    IdealBackend, IdealOptions, QtMode, Rounding, SampledOptions, ShotPolicy, Superposition,
    SwitchRule, TrainReport,
};
pub use network::{apply_oracle, apply_tnn, phi, phi_inverse, toggle_gate, Oracle, TnnConfig};
pub use scalar::Real;
pub use state_prep::{Direction, Ranking};

pub type StateVectorF64 = statevector::StateVector<f64>;
pub type StateVectorF32 = statevector::StateVector<f32>;
pub type GateOpF64 = statevector::GateOp<f64>;
pub type GateOpF32 = statevector::GateOp<f32>;
pub type PrepCircuitF64 = state_prep::PrepCircuit<f64>;
pub type PrepCircuitF32 = state_prep::PrepCircuit<f32>;
