//! Bergman kernels of generalized complex ellipsoids
//! `{Σ_j ‖z_j‖^{2/p_j} < 1}`, with closed forms built by folding and
//! inflating one-variable profiles, independent series and Monte-Carlo
//! oracles, and certified searches for kernel zeros.

pub mod domains;
pub mod error;
pub mod jets;
pub mod kernels;
pub mod oracle;
pub mod verify;
pub mod zeros;

pub use error::{Error, Result};
