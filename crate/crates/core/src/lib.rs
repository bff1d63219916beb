//! Polar-coded modulation for `2^m`-ASK constellations.
//!
//! The crate is `no_std` (it needs `alloc`) and contains the algorithmic core:
//!
//! * [`polar`]: the polar transform, successive cancellation (SC) and SC list
//!   decoding, the 16-bit CRC and LLR algebra.
//! * [`modulation`]: ASK constellations, the MM and SP polar label maps and the
//!   AWGN channel.
//! * [`demapper`]: the three successive polar demappers for 8-ASK.
//! * [`rates`]: achievable-rate estimators (LM-rate, GMI, mutual information)
//!   and the J-function.
//! * [`construction`]: frozen-set construction by CGA, MI-DGA, LM-DGA and
//!   Monte Carlo simulation.
//! * [`pcm`]: multilevel encoding and SC / SC list decoding of a full frame.
//!
//! File formats, the CLI and the parallel FER harness live in the `pcm-sim`
//! crate.
#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod construction;
pub mod demapper;
mod error;
pub mod math;
pub mod modulation;
pub mod pcm;
pub mod polar;
pub mod rates;
pub mod rng;

pub use error::Error;

pub type Result<T> = core::result::Result<T, Error>;
