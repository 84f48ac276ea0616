//! Linear deterministic models of two interfering cells: the interfering
//! MAC (two transmitters per receiver) and its dual, the interfering BC.
//!
//! The crate evaluates both channel laws exactly over GF(2), computes the
//! closed-form achievable sum rates and upper bounds as exact rationals,
//! builds interference-alignment schemes, certifies them with a rank test,
//! and cross-checks everything against brute-force oracles.

pub mod channel;
pub mod cli;
pub mod error;
pub mod gf2;
pub mod rates;
pub mod scheme;

pub use channel::{classify_regime, ibc_output, imac_output, CellParams, Model, Regime, RegimeTag, SubCase};
pub use error::{Error, Result};
pub use gf2::{mat_mul, rank, reverse_levels, shift_apply, BitMatrix, BitVector};
pub use rates::{
    achievable_sum, floor_ratio, phi, subsystem_rates, upper_bound_ktx, upper_bound_sum, wcurve_sweep,
    Rate, SubsystemParams, WCurvePoint,
};
pub use scheme::{
    construct_imac, dualize, receiver_blocks, search_best, verify, verify_exhaustive, Certificate,
    LinearScheme, MessageEntry, ReceiverCertificate, SearchConfig, SearchOutcome,
};
