//! Transverse dynamics of a vertical clamped-free rod under gravity, viscous
//! friction and pulsed uneven heating.
//!
//! The crate is `no_std` with `alloc`. The `std` feature (on by default) adds
//! the FFT-based transfer-function solver in [`dynamics::fourier`].
//!
//! Lengths along the rod are dimensionless (`z̄ = z/L`) inside the spectral
//! code; dimensional values appear only in [`dynamics::Trajectory`] and in the
//! static solutions.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod dynamics;
pub mod error;
pub mod forcing;
pub mod oracle;
pub mod quad;
pub mod roots;
pub mod special;
pub mod spectrum;
pub mod statics;

pub use error::{Error, Result};

/// Standard gravity, m/s².
pub const GRAVITY: f64 = 9.80665;
