//! Irregular repeat-accumulate LDPC codes with root-check structure for
//! block-fading channels.
//!
//! The crate covers the full experimental loop:
//!
//! - [`gf2`]: sparse GF(2) matrices, rank/inverse/product, alist I/O.
//! - [`scaffold`]: fixed parity-check layouts for RA, IRA and IRAA
//!   root-check families, with indicator vectors constraining edge growth.
//! - [`construction`]: constrained progressive edge growth, girth, and
//!   root-check verification.
//! - [`codec`]: systematic encoding (accumulator and generator routes),
//!   puncturing and syndromes.
//! - [`channel`]: BPSK over real Rayleigh block/fast fading with AWGN and
//!   per-bit LLRs under perfect CSI.
//! - [`decoder`]: log-domain sum-product decoding with early stopping.
//! - [`analysis`]: outage probability, FER sweeps with reproducible
//!   parallelism, diversity-order slope fits.

pub mod analysis;
pub mod channel;
pub mod codec;
pub mod construction;
pub mod decoder;
pub mod error;
pub mod gf2;
pub mod scaffold;

pub use codec::{CodeMetadata, LinearCode};
pub use construction::{build_code, build_code_with, verify_root_check};
pub use error::{Error, Result};
pub use gf2::BitMatrix;
pub use scaffold::{CodeFamily, FamilyKind, PunctureMode, ScaffoldOptions};
