//! Binary linear block codes: GF(2^m) arithmetic, BCH construction,
//! systematic encoding, and parity-check membership tests.

mod alist;
mod bch;
mod code;
mod field;

pub use alist::{read_alist, read_alist_str, write_alist, write_alist_string};
pub use bch::{bch_construct, BchSpec};
pub use code::{GeneratorMatrix, LinearCode, ParityCheckMatrix};
pub use field::Gf2m;
