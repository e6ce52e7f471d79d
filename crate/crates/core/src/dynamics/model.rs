use alloc::vec::Vec;

use super::green::{green_response, GreenConditions, GreenOptions, PiecewiseForcing};
use super::modal::pulse_modal_series;
use super::{reconstruct, DerivedCoefficients, Method, ModalOscillator, ModalState, Trajectory};
use crate::forcing::{project_tau_dd, PulseSpec, TemperatureProfile};
use crate::special::SeriesControl;
use crate::spectrum::{general_eigenvalues, krylov_modes, Mode};
use crate::{Error, Result};

/// One modal equation a₁w̄'' + a₂w̄' + λw̄ = f̄ₙ(t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalSystem {
    /// 1-based mode index.
    pub index: usize,
    pub lambda_bar: f64,
    /// λ = λ̄/L⁴.
    pub lambda: f64,
    /// Projection τ̄ₙ'' of the temperature curvature.
    pub tau_dd: f64,
    pub osc: ModalOscillator,
}

/// Spatial modes with their modal equations for one rod and profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalModel {
    pub coeffs: DerivedCoefficients,
    pub modes: Vec<Mode>,
    pub systems: Vec<ModalSystem>,
}

impl ModalModel {
    pub fn from_modes(coeffs: DerivedCoefficients, profile: &TemperatureProfile, modes: Vec<Mode>) -> Result<Self> {
        let ctrl = SeriesControl::default();
        let systems = modes
            .iter()
            .map(|m| {
                let lambda_bar = m.lambda_bar();
                let lambda = coeffs.lambda(lambda_bar);
                Ok(ModalSystem {
                    index: m.index(),
                    lambda_bar,
                    lambda,
                    tau_dd: project_tau_dd(profile, m, &ctrl)?,
                    osc: ModalOscillator::new(coeffs.a1, coeffs.a2, lambda),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { coeffs, modes, systems })
    }

    /// Zero-gravity basis W₁…W_N.
    pub fn krylov(coeffs: DerivedCoefficients, profile: &TemperatureProfile, n: usize) -> Result<Self> {
        let modes = krylov_modes(n)?.into_iter().map(Mode::Krylov).collect();
        Self::from_modes(coeffs, profile, modes)
    }

    /// Gravity-loaded basis Φ₁…Φ_N at the rod's own p.
    pub fn general(coeffs: DerivedCoefficients, profile: &TemperatureProfile, n: usize) -> Result<Self> {
        let ctrl = SeriesControl::default();
        let modes = general_eigenvalues(coeffs.p, n, &ctrl)?.into_iter().map(Mode::General).collect();
        Self::from_modes(coeffs, profile, modes)
    }

    pub fn len(&self) -> usize {
        self.systems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.systems.is_empty()
    }

    /// Forcing amplitude f̄ₙ while a pulse is on.
    pub fn amplitude(&self, n: usize, pulse: &PulseSpec) -> f64 {
        self.coeffs.forcing_scale() * self.systems[n].tau_dd * pulse.beta0
    }

    /// Modal series w̄ₙ(t_j) from the closed forms.
    pub fn closed_form_modal(&self, pulse: &PulseSpec, state: &ModalState, times: &[f64]) -> Vec<Vec<f64>> {
        pulse_modal_series(&self.systems, state, pulse, &self.coeffs, times)
    }

    pub fn closed_form(&self, pulse: &PulseSpec, state: &ModalState, times: &[f64], z_grid: &[f64]) -> Result<Trajectory> {
        let modal = self.closed_form_modal(pulse, state, times);
        reconstruct(&self.modes, &modal, z_grid, times, self.len(), Method::ClosedForm)
    }

    /// Modal series from the eigenfunction-in-time expansion on
    /// [0, max(times)]; `rel_tol` bounds each tail relative to the static
    /// amplitude of the first mode.
    pub fn green_modal(&self, pulse: &PulseSpec, state: &ModalState, times: &[f64], rel_tol: f64) -> Result<Vec<Vec<f64>>> {
        let horizon = times.iter().copied().fold(0.0, f64::max);
        let reference = self.reference_amplitude(pulse);
        let opts = GreenOptions { abs_tol: rel_tol * reference, ..GreenOptions::default() };
        let windows = pulse.windows();
        self.systems
            .iter()
            .enumerate()
            .map(|(n, s)| {
                let forcing = PiecewiseForcing::windows(self.amplitude(n, pulse), &windows);
                let cond = GreenConditions::Cauchy {
                    u0: state.w0.get(n).copied().unwrap_or(0.0),
                    u1: state.w1.get(n).copied().unwrap_or(0.0),
                };
                let series = green_response(&s.osc, &forcing, cond, horizon, &opts).map_err(|e| match e {
                    Error::ResonantBasis { m, .. } => Error::ResonantBasis { mode: s.index, m },
                    other => other,
                })?;
                Ok(series.eval_many(times))
            })
            .collect()
    }

    pub fn green(&self, pulse: &PulseSpec, state: &ModalState, times: &[f64], z_grid: &[f64], rel_tol: f64) -> Result<Trajectory> {
        let modal = self.green_modal(pulse, state, times, rel_tol)?;
        reconstruct(&self.modes, &modal, z_grid, times, self.len(), Method::Green)
    }

    /// Modal series from the transfer-function integral, sampled at
    /// k·dt_out up to t_end.
    #[cfg(feature = "std")]
    pub fn fourier_modal(&self, pulse: &PulseSpec, state: &ModalState, t_end: f64, dt_out: f64, rel_tol: f64) -> Result<Vec<Vec<f64>>> {
        use super::fourier::{fourier_response, FourierOptions};
        let opts = FourierOptions { abs_tol: rel_tol * self.reference_amplitude(pulse), ..FourierOptions::default() };
        self.systems
            .iter()
            .enumerate()
            .map(|(n, s)| {
                fourier_response(
                    &s.osc,
                    &self.coeffs,
                    self.coeffs.forcing_scale() * s.tau_dd,
                    pulse,
                    state.w0.get(n).copied().unwrap_or(0.0),
                    state.w1.get(n).copied().unwrap_or(0.0),
                    t_end,
                    dt_out,
                    &opts,
                )
            })
            .collect()
    }

    #[cfg(feature = "std")]
    pub fn fourier(&self, pulse: &PulseSpec, state: &ModalState, t_end: f64, dt_out: f64, z_grid: &[f64], rel_tol: f64) -> Result<Trajectory> {
        let modal = self.fourier_modal(pulse, state, t_end, dt_out, rel_tol)?;
        let times = super::time_grid(t_end, dt_out)?;
        reconstruct(&self.modes, &modal, z_grid, &times, self.len(), Method::Fourier)
    }

    /// Static modal response |f̄₁/λ₁| of the first stable mode, used to turn
    /// relative tolerances into absolute ones.
    pub fn reference_amplitude(&self, pulse: &PulseSpec) -> f64 {
        let v = self
            .systems
            .iter()
            .enumerate()
            .filter(|(_, s)| s.lambda > 0.0)
            .map(|(n, s)| (self.amplitude(n, pulse) / s.lambda).abs())
            .fold(0.0, f64::max);
        if v > 0.0 {
            v
        } else {
            1.0
        }
    }
}
