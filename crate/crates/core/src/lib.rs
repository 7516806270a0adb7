//! A decoding laboratory for the GRAND family of universal short-block-code
//! decoders.
//!
//! GRAND decodes by testing putative error patterns against codebook
//! membership until one of them turns the hard-decision word into a codeword.
//! The crate provides:
//!
//! * binary linear codes (including BCH construction over GF(2^m)) and the
//!   alist interchange format ([`gf2`]),
//! * the BPSK/AWGN channel model with exact LLR reliability statistics
//!   ([`channel`]),
//! * offline basis error-pattern lists for ORB-type orderings and the
//!   on-the-fly maximum-likelihood ordering of SGRAND ([`pattern`]),
//! * exact and asymptotic counting of pattern positions through integer
//!   partitions ([`partition`]),
//! * re-ordering of an ORB-type test sequence using one or two exact channel
//!   soft values ([`finetune`]),
//! * the decoders themselves plus an exhaustive ML oracle ([`decoder`]),
//! * aggregation of Monte Carlo trials ([`metrics`]) and a deterministic
//!   parallel simulation harness ([`sim`]).

pub mod bits;
pub mod channel;
pub mod decoder;
mod error;
pub mod finetune;
pub mod gf2;
pub mod metrics;
pub mod partition;
pub mod pattern;
pub mod sim;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
