//! Secure rate-distortion-perception (RDP) regions over finite alphabets.
//!
//! The crate computes and empirically validates trade-offs between message
//! rate, common-randomness rate, and distortion when the reconstruction
//! must match the source law (realism) and stay independent of the public
//! message (strong secrecy):
//!
//! - [`prob`] / [`info`]: exact finite-alphabet probability arithmetic and
//!   information measures (log base 2 throughout).
//! - [`noiseless`]: witness evaluation, membership certification, and
//!   frontier sweeps for the noiseless-channel region.
//! - [`bc`]: broadcast-channel inner bounds, the more-capable check,
//!   Blahut-Arimoto capacity, and the separation threshold.
//! - [`sideinfo`]: side information at both ends or decoder-only.
//! - [`closed_form`]: the binary symmetric family and the one-parameter
//!   Gaussian family in closed form.
//! - [`osrb`]: an exact enumerative simulator of the random-binning coding
//!   scheme at small blocklengths, measuring realism, distortion, and
//!   leakage per seeded codebook.

// dense stride arithmetic reads better with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod bc;
pub mod closed_form;
pub mod error;
pub mod info;
pub mod noiseless;
mod optimize;
pub mod osrb;
pub mod prob;
pub mod sideinfo;

pub use error::{Result, SrdpError};
pub use info::Bits;
pub use noiseless::{DistortionMeasure, NoiselessWitness, RateTuple};
pub use prob::{Channel, JointPmf, Pmf, DEFAULT_ENUM_CAP};
