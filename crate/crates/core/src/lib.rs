//! Simulator and two-party harness for quantum privacy-preserving price
//! negotiation.
//!
//! A buyer and a seller each hold `N` private prices. The protocol loads
//! them into superposed quantum registers, flags products with
//! `buyer ≥ seller` using a reversible comparator, counts flagged products
//! with quantum counting, cross-checks the counts through a bit-string
//! commitment, and trades when the count reaches a threshold `ε`.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

pub mod analysis;
pub mod circuits;
pub mod commitment;
pub mod counting;
mod error;
pub mod protocol;
pub mod rng;
mod scalar;
pub mod scenario_file;
pub mod statevec;

pub use circuits::{classical_f, Circuit, ComparatorKind, PriceScenario};
pub use commitment::{commit, cheat_detection_probability, Commitment, LinearCode};
pub use counting::{error_bound, quantum_count, CountEstimate, CountingParams, PhaseEstimation};
pub use error::{Error, Result};
pub use protocol::{
    measurement_attack, run_negotiation, run_with_adversary, transcript_costs, Adversary, Behavior, NegotiationConfig,
    NegotiationTranscript, Role,
};
pub use scalar::{Amplitude, Real};
pub use statevec::{Register, RegisterLayout, Segment, StateVector};

pub type StateVector64 = StateVector<f64>;
pub type StateVector32 = StateVector<f32>;
pub type Circuit64 = Circuit<f64>;
pub type CountEstimate64 = CountEstimate<f64>;
pub type Commitment64 = Commitment<f64>;
pub type Transcript64 = NegotiationTranscript<f64>;
