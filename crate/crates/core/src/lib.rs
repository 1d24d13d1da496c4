//! Belief-propagation decoding of binary linear codes.
//!
//! The crate covers the whole pipeline: code construction ([`bch`],
//! [`alist`]), the BPSK/AWGN channel ([`channel`]), unrolled decoders with
//! sum-product, min-sum, offset min-sum, neural offset min-sum and neural
//! sum-product check rules ([`decoder`]), gradient training of the learnable
//! variants ([`train`]) and Monte-Carlo error-rate evaluation ([`eval`]).

pub mod alist;
pub mod bch;
pub mod channel;
pub mod checkpoint;
pub mod cli;
pub mod code;
pub mod codespec;
pub mod decoder;
pub mod error;
pub mod eval;
pub mod gf2;
pub mod real;
pub mod train;

pub use code::{LinearCode, ParityCheckMatrix, TannerGraph};
pub use decoder::{decode, Decoder, DecoderParams, SoftOutput, Tying, Variant};
pub use error::{Error, Result};
