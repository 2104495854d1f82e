//! Coherent-information rates and error thresholds of stabilizer codes over
//! Pauli channels.
//!
//! The crate evaluates coset weight enumerators numerically: exhaustively for
//! small codes ([`exact`]), in closed form for concatenated repetition codes
//! ([`rep`]), by effective-channel composition for general code stacks
//! ([`concat`]) and by a binned log-domain convolution estimator for very long
//! repetition codes ([`longrep`]). On top of those sit rates, thresholds and
//! sweeps ([`capacity`]) and channel optimization ([`optimize`]).

pub mod capacity;
pub mod channel;
pub mod code;
pub mod concat;
pub mod error;
pub mod exact;
pub mod longrep;
pub mod optimize;
pub mod pauli;
pub mod rep;
pub mod tables;

pub use capacity::{rate, sweep, threshold, Method, Model, RateRow, ThresholdOptions, ThresholdResult};
pub use channel::{hashing_point, ChannelFamily, Coefficients, PauliChannel};
pub use code::{registry_get, RepType, StabilizerCode};
pub use concat::CodeStack;
pub use error::{Error, Result};
pub use optimize::{optimize_channel, OptimizationResult, OptimizeOptions};
pub use pauli::{Letter, PauliString};
pub use tables::{run_table, RowOutcome};
