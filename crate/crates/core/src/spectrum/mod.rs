//! Spatial eigenproblems of the clamped-free rod.
//!
//! Three families are provided: the gravity roots p_k at λ = 0
//! ([`gravity`]), the general spectrum λ̄_k(p) ([`general`]) and the
//! zero-gravity Krylov modes ([`krylov`]).

pub mod general;
pub mod gravity;
pub mod krylov;

pub use general::{count_unstable, frobenius_eps, general_eigenvalues, GeneralMode};
pub use gravity::{g_series, gravity_eigenvalues, z0_mode, GravityMode};
pub use krylov::{krylov_alpha_offsets, krylov_alpha_roots, krylov_residual, krylov_mode, krylov_mode_dd, krylov_modes, KrylovMode};

use crate::quad::{GaussLegendre, REL_TOL};
use crate::special::SeriesControl;
use crate::Result;

/// Which family a [`Mode`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Gravity,
    General,
    Krylov,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::Gravity => "gravity",
            Family::General => "general",
            Family::Krylov => "krylov",
        }
    }
}

/// A spatial mode from any of the three families.
#[derive(Debug, Clone, PartialEq)]
pub enum Mode {
    Gravity(GravityMode),
    General(GeneralMode),
    Krylov(KrylovMode),
}

impl Mode {
    pub fn family(&self) -> Family {
        match self {
            Mode::Gravity(_) => Family::Gravity,
            Mode::General(_) => Family::General,
            Mode::Krylov(_) => Family::Krylov,
        }
    }

    pub fn index(&self) -> usize {
        match self {
            Mode::Gravity(m) => m.index,
            Mode::General(m) => m.index,
            Mode::Krylov(m) => m.index,
        }
    }

    /// Spatial function: Z̄_k⁽⁰⁾, Φ_k or W_k.
    pub fn value(&self, z: f64) -> f64 {
        match self {
            Mode::Gravity(m) => m.z0(z),
            Mode::General(m) => m.value(z),
            Mode::Krylov(m) => m.value(z),
        }
    }

    pub fn d2(&self, z: f64) -> f64 {
        match self {
            Mode::Gravity(m) => m.g_dz(z),
            Mode::General(m) => m.derivative(2, z),
            Mode::Krylov(m) => m.d2(z),
        }
    }

    /// Dimensionless eigenvalue: p_k for gravity modes, λ̄_k otherwise.
    pub fn eigenvalue(&self) -> f64 {
        match self {
            Mode::Gravity(m) => m.p,
            Mode::General(m) => m.lambda_bar,
            Mode::Krylov(m) => m.lambda_bar(),
        }
    }

    /// λ̄ entering the modal time equation (0 for gravity modes).
    pub fn lambda_bar(&self) -> f64 {
        match self {
            Mode::Gravity(_) => 0.0,
            Mode::General(m) => m.lambda_bar,
            Mode::Krylov(m) => m.lambda_bar(),
        }
    }

    /// Stored squared norm (weighted ‖G‖² for gravity modes).
    pub fn norm2(&self) -> f64 {
        match self {
            Mode::Gravity(m) => m.norm2_g,
            Mode::General(m) => m.norm2,
            Mode::Krylov(m) => m.norm2,
        }
    }

    /// ε₁ for general modes, C₄ for Krylov modes, none for gravity modes.
    pub fn secondary_coefficient(&self) -> Option<f64> {
        match self {
            Mode::Gravity(_) => None,
            Mode::General(m) => Some(m.eps1),
            Mode::Krylov(m) => Some(m.c4),
        }
    }
}

/// Squared norm by quadrature: ∫(1 − z̄)G² for gravity modes, ∫Φ² or ∫W²
/// otherwise.
pub fn mode_norm2(mode: &Mode, _ctrl: &SeriesControl) -> Result<f64> {
    let gl = GaussLegendre::default();
    match mode {
        Mode::Gravity(m) => gl.integrate(
            |z| {
                let g = m.g(z);
                (1.0 - z) * g * g
            },
            0.0,
            1.0,
            REL_TOL,
        ),
        other => gl.integrate(
            |z| {
                let v = other.value(z);
                v * v
            },
            0.0,
            1.0,
            REL_TOL,
        ),
    }
}
