//! Modal time evolution and trajectory assembly.
//!
//! Each spatial mode n carries a damped oscillator
//! a₁w̄ₙ'' + a₂w̄ₙ' + λₙw̄ₙ = f̄ₙ(t) with λₙ = λ̄ₙ/L⁴. Three solution routes
//! are provided: closed forms ([`modal`]), the eigenfunction-in-time series
//! ([`green`]) and, with the `std` feature, the transfer-function integral
//! ([`fourier`]).

#[cfg(feature = "std")]
pub mod fourier;
pub mod green;
pub mod modal;
mod model;

pub use modal::{
    cauchy_response, chi, chi_all, instant_heating_state, i_n1, i_n2, lambda0_evolution, periodic_response,
    omega_branches, projection_coefficients, ModalOscillator, ModalState, Regime,
};
pub use model::{ModalModel, ModalSystem};

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::spectrum::Mode;
use crate::{error::invalid, Result, GRAVITY};

/// Geometry, material and medium of the rod (SI units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RodParameters {
    /// Length L, m.
    pub length: f64,
    /// Outer diameter d₀, m.
    pub d0: f64,
    /// Wall thickness Δd₀, m.
    pub wall: f64,
    /// Density ρ, kg/m³.
    pub rho: f64,
    /// Young's modulus E, Pa.
    pub young: f64,
    /// Linear thermal expansion α_T, 1/K.
    pub alpha_t: f64,
    /// Viscous friction η, N·s/m³.
    pub eta: f64,
    /// Wall-to-mean temperature ratio ι.
    pub iota: f64,
    /// Total mass M₀, kg; defaults to ρSL when absent.
    pub m0: Option<f64>,
}

impl Default for RodParameters {
    fn default() -> Self {
        Self {
            length: 1.0,
            d0: 0.017,
            wall: 4.5e-4,
            rho: 7950.0,
            young: 200e9,
            alpha_t: 17.3e-6,
            eta: 11.24,
            iota: 0.05,
            m0: None,
        }
    }
}

impl RodParameters {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("geometry.L", self.length),
            ("geometry.d0", self.d0),
            ("geometry.wall", self.wall),
            ("material.rho", self.rho),
            ("material.E", self.young),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, "must be positive and finite"));
            }
        }
        let non_negative = [
            ("material.alphaT", self.alpha_t),
            ("medium.eta", self.eta),
            ("medium.iota", self.iota),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(name, "must be non-negative and finite"));
            }
        }
        if self.wall >= self.d0 / 2.0 {
            return Err(invalid("geometry.wall", "must be less than d0/2"));
        }
        if let Some(m) = self.m0 {
            if !(m >= 0.0 && m.is_finite()) {
                return Err(invalid("geometry.M0", "must be non-negative and finite"));
            }
        }
        Ok(())
    }
}

/// Coefficients of a₁u_tt + a₂u_t + u_zzzz + b(P_z u_z)_z = f̄.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedCoefficients {
    pub params: RodParameters,
    /// Second moment of area J_x, m⁴.
    pub j_x: f64,
    /// Annulus area S, m².
    pub area: f64,
    /// ρS/(EJ_x), s²/m⁴.
    pub a1: f64,
    /// d₀η/(EJ_x), s/m⁴.
    pub a2: f64,
    /// 1/(EJ_x), 1/(N·m²).
    pub b: f64,
    /// Mass used in the weight term, kg.
    pub m0: f64,
    /// b L² M₀ g.
    pub p: f64,
    /// a₂/(2a₁), 1/s.
    pub gamma: f64,
}

impl DerivedCoefficients {
    /// −α_T ι/(d₀L²): multiplies τ̄ₙ'' β(t) to give f̄ₙ(t).
    pub fn forcing_scale(&self) -> f64 {
        let p = &self.params;
        -p.alpha_t * p.iota / (p.d0 * p.length * p.length)
    }

    /// Dimensional eigenvalue λ = λ̄/L⁴.
    pub fn lambda(&self, lambda_bar: f64) -> f64 {
        lambda_bar / self.params.length.powi(4)
    }

    /// Copy with the friction switched off (a₂ = γ = 0).
    pub fn without_friction(&self) -> Self {
        Self { a2: 0.0, gamma: 0.0, ..*self }
    }
}

/// Derived coefficients from the rod description.
pub fn derive(params: &RodParameters) -> Result<DerivedCoefficients> {
    params.validate()?;
    let r2 = params.d0 / 2.0;
    let r1 = r2 - params.wall;
    let j_x = PI / 4.0 * (r2.powi(4) - r1.powi(4));
    let area = PI * (r2 * r2 - r1 * r1);
    let ej = params.young * j_x;
    let a1 = params.rho * area / ej;
    let a2 = params.d0 * params.eta / ej;
    let b = 1.0 / ej;
    let m0 = params.m0.unwrap_or(params.rho * area * params.length);
    let p = b * params.length * params.length * m0 * GRAVITY;
    Ok(DerivedCoefficients {
        params: *params,
        j_x,
        area,
        a1,
        a2,
        b,
        m0,
        p,
        gamma: a2 / (2.0 * a1),
    })
}

/// Damped frequency β = √(4a₁λ − a₂²)/(2a₁), or the non-oscillatory regime.
pub fn beta_freq(lambda_n: f64, coeffs: &DerivedCoefficients) -> Regime {
    Regime::classify(coeffs.a1, coeffs.a2, lambda_n)
}

/// R̂(ω) = −1/(a₁ω² − λ − iωa₂).
pub fn transfer_function(omega: f64, lambda_n: f64, coeffs: &DerivedCoefficients) -> Complex64 {
    let d = Complex64::new(coeffs.a1 * omega * omega - lambda_n, -omega * coeffs.a2);
    -d.inv()
}

/// Which solver produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Green,
    Fourier,
    Lambda0,
    Oracle,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Green => "green",
            Method::Fourier => "fourier",
            Method::Lambda0 => "lambda0",
            Method::Oracle => "oracle",
        }
    }
}

/// Sampled rod motion.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Sample times, s.
    pub times: Vec<f64>,
    /// Tip displacement u(L, t), m.
    pub tip: Vec<f64>,
    /// Dimensionless positions z̄ of the shape samples.
    pub z_grid: Vec<f64>,
    /// u(z̄ᵢ, tⱼ) as `shapes[j][i]`, when requested.
    pub shapes: Option<Vec<Vec<f64>>>,
    /// Modal coefficients as `modal[n][j]`, when available.
    pub modal: Option<Vec<Vec<f64>>>,
    pub method: Method,
    pub mode_count: usize,
}

impl Trajectory {
    /// max |u(L, t)|.
    pub fn peak_tip(&self) -> f64 {
        self.tip.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Sums modal contributions u = Σ w̄ₙ(t) Φₙ(z̄) over the first `n_modes`
/// modes, in ascending index order.
pub fn reconstruct(
    modes: &[Mode],
    modal: &[Vec<f64>],
    z_grid: &[f64],
    times: &[f64],
    n_modes: usize,
    method: Method,
) -> Result<Trajectory> {
    if n_modes == 0 {
        return Err(invalid("n_modes", "must be at least 1"));
    }
    if n_modes > modes.len() || n_modes > modal.len() {
        return Err(invalid("n_modes", "exceeds the number of available modes"));
    }
    if modal[..n_modes].iter().any(|w| w.len() != times.len()) {
        return Err(invalid("modal", "every modal series must match the time grid"));
    }
    let tip_values: Vec<f64> = modes[..n_modes].iter().map(|m| m.value(1.0)).collect();
    let tip = (0..times.len())
        .map(|j| {
            let mut s = 0.0;
            for n in 0..n_modes {
                s += modal[n][j] * tip_values[n];
            }
            s
        })
        .collect();
    let shapes = if z_grid.is_empty() {
        None
    } else {
        let table: Vec<Vec<f64>> = modes[..n_modes]
            .iter()
            .map(|m| z_grid.iter().map(|&z| m.value(z)).collect())
            .collect();
        Some(
            (0..times.len())
                .map(|j| {
                    (0..z_grid.len())
                        .map(|i| {
                            let mut s = 0.0;
                            for n in 0..n_modes {
                                s += modal[n][j] * table[n][i];
                            }
                            s
                        })
                        .collect()
                })
                .collect(),
        )
    };
    Ok(Trajectory {
        times: times.to_vec(),
        tip,
        z_grid: z_grid.to_vec(),
        shapes,
        modal: Some(modal[..n_modes].to_vec()),
        method,
        mode_count: n_modes,
    })
}

/// Uniform grid 0, dt, 2dt, … up to and including `t_end` (within rounding).
pub fn time_grid(t_end: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0 && t_end >= 0.0 && dt.is_finite() && t_end.is_finite()) {
        return Err(invalid("time grid", "need dt > 0 and t_end ≥ 0"));
    }
    let n = (t_end / dt + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| k as f64 * dt).collect())
}
