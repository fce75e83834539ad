//! Discrete-amplitude noise-based logic on a digital machine.
//!
//! * [`noise`]: seeded telegraph reference waves and Gaussian (OU) noise.
//! * [`nbl`]: the noise-bit hyperspace, superpositions and correlator readout.
//! * [`gates`]: single-bit gates on product-form states.
//! * [`rng`]: sign-of-amplitude XOR sign-of-velocity bit generation.
//! * [`stat_tests`]: the randomness battery.
//! * [`bench`]: counted-operation scaling against a dense baseline.

pub mod bench;
pub mod cli;
pub mod error;
pub mod files;
pub mod gates;
pub mod nbl;
pub mod noise;
pub mod precision;
pub mod rng;

pub use error::{Error, Result};
pub use gates::{apply_gate, gate_cost, standard_gates, Gate2x2, GateOp};
pub use nbl::{
    amplitude_estimate, amplitude_exact, brute_force_state, hyperspace_value, measure_membership,
    superposition_value, BitString, CorrelatorEstimate, ExplicitSet, NoiseBitSystem, OpCount, ProductState,
    SuperpositionState,
};
pub use noise::{dissipation_bound, rtw_sample, OuConfig, OuProcess, TelegraphStream};
pub use precision::Precision;
pub use rng::{extract_bit, generate, xor_combine, BitStream, ExtractorConfig, PipelineConfig};
pub use stat_tests::{run_battery, TestResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
