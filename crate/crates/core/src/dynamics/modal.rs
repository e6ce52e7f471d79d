//! Closed-form modal responses.
//!
//! All responses are written with the fundamental pair
//! c(t) = e^{−γt}cos βt and s(t) = e^{−γt}sin(βt)/β, which continue
//! analytically to cosh/sinh in the overdamped (or unstable, λ < 0) regime
//! and to 1, t at critical damping. The free response is
//! w₀(c + γs) + w₁s and a unit step of forcing contributes H(t)/a₁ with
//! H(t) = ∫₀ᵗ s = (1 − c − γs)/ω₀², ω₀² = λ/a₁.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::{DerivedCoefficients, Method, ModalSystem, Trajectory};
use crate::forcing::{PulseKind, PulseSpec};
use crate::quad::{GaussLegendre, REL_TOL};
use crate::special::krylov_all;
use crate::spectrum::{GravityMode, KrylovMode, Mode};
use crate::statics::StaticSolution;
use crate::{error::invalid, Result};

/// Character of a modal oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    /// 4a₁λ > a₂²; β is the damped angular frequency.
    Underdamped { beta: f64 },
    /// 4a₁λ = a₂².
    Critical,
    /// 4a₁λ < a₂² (including λ < 0); κ = √(a₂² − 4a₁λ)/(2a₁).
    Overdamped { kappa: f64 },
}

impl Regime {
    pub fn classify(a1: f64, a2: f64, lambda: f64) -> Self {
        let disc = 4.0 * a1 * lambda - a2 * a2;
        let scale = (4.0 * a1 * lambda).abs().max(a2 * a2);
        if disc.abs() <= 1e-12 * scale {
            Regime::Critical
        } else if disc > 0.0 {
            Regime::Underdamped {
                beta: disc.sqrt() / (2.0 * a1),
            }
        } else {
            Regime::Overdamped {
                kappa: (-disc).sqrt() / (2.0 * a1),
            }
        }
    }

    /// β for underdamped modes.
    pub fn frequency(&self) -> Option<f64> {
        match self {
            Regime::Underdamped { beta } => Some(*beta),
            _ => None,
        }
    }
}

/// a₁w'' + a₂w' + λw = f.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalOscillator {
    pub a1: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub regime: Regime,
}

impl ModalOscillator {
    pub fn new(a1: f64, a2: f64, lambda: f64) -> Self {
        Self {
            a1,
            gamma: a2 / (2.0 * a1),
            lambda,
            regime: Regime::classify(a1, a2, lambda),
        }
    }

    /// ω₀² = λ/a₁ = β² + γ².
    pub fn omega2(&self) -> f64 {
        self.lambda / self.a1
    }

    /// β² (negative κ² when overdamped).
    fn q(&self) -> f64 {
        match self.regime {
            Regime::Underdamped { beta } => beta * beta,
            Regime::Critical => 0.0,
            Regime::Overdamped { kappa } => -kappa * kappa,
        }
    }

    /// (c(t), s(t)).
    pub fn cs(&self, t: f64) -> (f64, f64) {
        let g = self.gamma;
        match self.regime {
            Regime::Underdamped { beta } => {
                let e = (-g * t).exp();
                let (sn, cs) = (beta * t).sin_cos();
                (e * cs, e * sn / beta)
            }
            Regime::Critical => {
                let e = (-g * t).exp();
                (e, t * e)
            }
            Regime::Overdamped { kappa } => {
                if kappa * t.abs() < 20.0 {
                    let e = (-g * t).exp();
                    (e * (kappa * t).cosh(), e * (kappa * t).sinh() / kappa)
                } else {
                    let up = ((kappa - g) * t).exp();
                    let down = (-(kappa + g) * t).exp();
                    (0.5 * (up + down), 0.5 * (up - down) / kappa)
                }
            }
        }
    }

    /// Free response with w(0) = w0, w'(0) = w1, and its rate.
    pub fn free(&self, t: f64, w0: f64, w1: f64) -> (f64, f64) {
        let (c, s) = self.cs(t);
        let g = self.gamma;
        let dc = -g * c - self.q() * s;
        let ds = c - g * s;
        (w0 * (c + g * s) + w1 * s, w0 * (dc + g * ds) + w1 * ds)
    }

    /// H(t) = ∫₀ᵗ s, zero for t ≤ 0, and its rate s(t).
    pub fn step(&self, t: f64) -> (f64, f64) {
        if t <= 0.0 {
            return (0.0, 0.0);
        }
        let (c, s) = self.cs(t);
        let w2 = self.omega2();
        let g = self.gamma;
        let h = if w2 != 0.0 {
            (1.0 - c - g * s) / w2
        } else if g != 0.0 {
            t / (2.0 * g) + (-2.0 * g * t).exp_m1() / (4.0 * g * g)
        } else {
            0.5 * t * t
        };
        (h, s)
    }

    /// Scaled antiderivative D̃(t) = D(t)/β = −(c + γs)/ω₀², with
    /// D(t) = ∫ e^{−γt} sin βt dt as printed for the pulse-train table.
    pub fn d_scaled(&self, t: f64) -> f64 {
        let (c, s) = self.cs(t);
        -(c + self.gamma * s) / self.omega2()
    }

    /// Response to forcing `amp` switched on over each window, with rate.
    pub fn windows_response(&self, t: f64, amp: f64, windows: &[(f64, f64)]) -> (f64, f64) {
        let mut v = 0.0;
        let mut d = 0.0;
        for &(a, b) in windows {
            let (ha, sa) = self.step(t - a);
            let (hb, sb) = self.step(t - b);
            v += ha - hb;
            d += sa - sb;
        }
        (amp / self.a1 * v, amp / self.a1 * d)
    }
}

/// Initial modal data w̄ₙ(0), w̄ₙ'(0).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModalState {
    pub w0: Vec<f64>,
    pub w1: Vec<f64>,
}

impl ModalState {
    pub fn zeros(n: usize) -> Self {
        Self {
            w0: alloc::vec![0.0; n],
            w1: alloc::vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.w0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w0.is_empty()
    }

    fn get(&self, n: usize) -> (f64, f64) {
        (
            self.w0.get(n).copied().unwrap_or(0.0),
            self.w1.get(n).copied().unwrap_or(0.0),
        )
    }
}

/// w̄ₙ(t) under constant forcing from t = 0 with ι·β = 1 K:
/// −X + (X + w₀)c + (γX + w₁ + γw₀)s, X = ᾱ_T τ̄ₙ''/(a₁d₀L²ω₀²).
pub fn cauchy_response(t: f64, n: usize, state: &ModalState, sys: &ModalSystem, coeffs: &DerivedCoefficients) -> f64 {
    let (w0, w1) = state.get(n);
    let p = &coeffs.params;
    let f = -p.alpha_t * sys.tau_dd / (p.d0 * p.length * p.length);
    let osc = &sys.osc;
    osc.free(t, w0, w1).0 + f / osc.a1 * osc.step(t).0
}

/// w̄ₙ(t) under a pulse train, assembled literally from the
/// I⁽¹⁾, I⁽²⁾, I⁽³⁾ branch table; a step pulse is the one-pulse train.
pub fn periodic_response(
    t: f64,
    n: usize,
    state: &ModalState,
    sys: &ModalSystem,
    pulse: &PulseSpec,
    coeffs: &DerivedCoefficients,
) -> f64 {
    let (w0, w1) = state.get(n);
    let osc = &sys.osc;
    let amp = coeffs.forcing_scale() * sys.tau_dd * pulse.beta0;
    let d = |x: f64| osc.d_scaled(x);
    let count = match pulse.kind {
        PulseKind::Step => 0,
        PulseKind::Train => pulse.count,
    };
    let period = pulse.duty_cycle() * pulse.dt;
    let mut i_bar = 0.0;
    if t > 0.0 {
        for k in 0..=count {
            let start = k as f64 * period;
            let end = start + pulse.dt;
            let i1 = if t >= end { d(t) - d(t - end) } else { d(t) - d(0.0) };
            let i2 = if t >= start { d(t - start) - d(0.0) } else { 0.0 };
            i_bar += i1 + i2;
        }
        i_bar -= (count as f64 + 1.0) * (d(t) - d(0.0));
    }
    osc.free(t, w0, w1).0 + amp / osc.a1 * i_bar
}

/// Closed-form trajectory of a pulse (step or train) for all modes.
pub(crate) fn pulse_modal_series(sys: &[ModalSystem], state: &ModalState, pulse: &PulseSpec, coeffs: &DerivedCoefficients, times: &[f64]) -> Vec<Vec<f64>> {
    let windows = pulse.windows();
    sys.iter()
        .enumerate()
        .map(|(n, s)| {
            let (w0, w1) = state.get(n);
            let amp = coeffs.forcing_scale() * s.tau_dd * pulse.beta0;
            times
                .iter()
                .map(|&t| s.osc.free(t, w0, w1).0 + s.osc.windows_response(t, amp, &windows).0)
                .collect()
        })
        .collect()
}

/// (e^{−x} − 1 + x)/x².
fn phi2(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0
    } else {
        ((-x).exp_m1() + x) / (x * x)
    }
}

/// (1 − e^{−x})/x.
fn psi1(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        -(-x).exp_m1() / x
    }
}

/// The two printed branches of Ω(t) = 2γt + e^{−2γt} − 1 (pulse on) and
/// 2γΔt − e^{2γ(Δt−t)} + e^{−2γt} (pulse off), both evaluated at t.
pub fn omega_branches(t: f64, gamma: f64, dt: f64) -> (f64, f64) {
    let x = 2.0 * gamma;
    (
        x * t + (-x * t).exp() - 1.0,
        x * dt - (x * (dt - t)).exp() + (-x * t).exp(),
    )
}

/// λ = 0 time factor χ(t) for a step pulse:
/// χ = 1 − (C/(2γa₂))[β₀Ω(t) + a₂κ₀(1 − e^{−2γt})], C = α_T ιτ₀/(d₀L²),
/// with Ω(t) = 2γt + e^{−2γt} − 1 during the pulse and
/// Ω(t) = 2γΔt − e^{2γ(Δt−t)} + e^{−2γt} afterwards. Evaluated in a form
/// that stays finite as γ → 0.
pub fn chi(t: f64, coeffs: &DerivedCoefficients, pulse: &PulseSpec, kappa0: f64, tau0: f64) -> Result<f64> {
    Ok(chi_all(t, coeffs, pulse, kappa0, tau0)?.0)
}

/// (χ, χ', χ'').
pub fn chi_all(t: f64, coeffs: &DerivedCoefficients, pulse: &PulseSpec, kappa0: f64, tau0: f64) -> Result<(f64, f64, f64)> {
    if pulse.kind != PulseKind::Step {
        return Err(invalid("pulse.kind", "the λ = 0 evolution is defined for a step pulse"));
    }
    let p = &coeffs.params;
    let c = p.alpha_t * p.iota * tau0 / (p.d0 * p.length * p.length);
    let (a1, g, dt, b0) = (coeffs.a1, coeffs.gamma, pulse.dt, pulse.beta0);
    let x = 2.0 * g;
    // Ω/(4γ²a₁), its rate and acceleration.
    let (om, om_d, om_dd) = if t < dt {
        let e = (-x * t).exp();
        (t * t * phi2(x * t) / a1, t * psi1(x * t) / a1, e / a1)
    } else {
        let s = t - dt;
        let head = dt * psi1(x * dt);
        let e = (-x * s).exp();
        (
            (dt * dt * phi2(x * dt) + head * s * psi1(x * s)) / a1,
            head * e / a1,
            -x * head * e / a1,
        )
    };
    let e = (-x * t).exp();
    let chi = 1.0 - c * (b0 * om + kappa0 * t * psi1(x * t));
    let rate = -c * (b0 * om_d + kappa0 * e);
    let acc = -c * (b0 * om_dd - x * kappa0 * e);
    Ok((chi, rate, acc))
}

/// Factorised λ = 0 solution u = Z̄_ℓ⁽⁰⁾(z̄)χ(t) on the given grids.
pub fn lambda0_evolution(
    times: &[f64],
    mode: &GravityMode,
    pulse: &PulseSpec,
    coeffs: &DerivedCoefficients,
    kappa0: f64,
    tau0: f64,
    z_grid: &[f64],
) -> Result<Trajectory> {
    let chis = times
        .iter()
        .map(|&t| chi(t, coeffs, pulse, kappa0, tau0))
        .collect::<Result<Vec<f64>>>()?;
    let tip_shape = mode.z0(1.0);
    let shape: Vec<f64> = z_grid.iter().map(|&z| mode.z0(z)).collect();
    let shapes = if z_grid.is_empty() {
        None
    } else {
        Some(chis.iter().map(|c| shape.iter().map(|s| s * c).collect()).collect())
    };
    Ok(Trajectory {
        times: times.to_vec(),
        tip: chis.iter().map(|c| c * tip_shape).collect(),
        z_grid: z_grid.to_vec(),
        shapes,
        modal: Some(alloc::vec![chis]),
        method: Method::Lambda0,
        mode_count: 1,
    })
}

/// Modal initial data (1/‖Φₙ‖²)∫₀¹ u(z̄L)Φₙ(z̄) dz̄ for displacement and
/// velocity shapes given as functions of z in metres.
pub fn projection_coefficients<F, G>(u0: F, u1: G, modes: &[Mode], length: f64) -> Result<ModalState>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let gl = GaussLegendre::default();
    let mut st = ModalState::zeros(modes.len());
    for (n, m) in modes.iter().enumerate() {
        let nn = m.norm2();
        st.w0[n] = gl.integrate(|z| u0(z * length) * m.value(z), 0.0, 1.0, REL_TOL)? / nn;
        st.w1[n] = gl.integrate(|z| u1(z * length) * m.value(z), 0.0, 1.0, REL_TOL)? / nn;
    }
    Ok(st)
}

/// I⁽¹⁾ = ∫_{z̄₁}^{z̄₂} (z̄ − z̄₁)² W dz̄ in closed form.
pub fn i_n1(alpha: f64, z1: f64, z2: f64) -> f64 {
    let ka = krylov_all(alpha);
    let k2 = krylov_all(alpha * z2);
    let k1 = krylov_all(alpha * z1);
    let a = alpha;
    4.0 / a.powi(3) * ka[0] * ((k2[1] - k1[1]) / ka[0] - (k2[2] - k1[2]) / ka[1])
        + 4.0 * (z1 - z2) / (a * a) * ka[0] * (k2[0] / ka[0] - k2[1] / ka[1])
        + 2.0 * (z2 - z1).powi(2) / a * ka[3] * (k2[3] / ka[3] - k2[0] / ka[0])
}

/// I⁽²⁾ = ∫_{z̄₂}^1 (2z̄ − 1) W dz̄ in closed form.
pub fn i_n2(alpha: f64, z2: f64) -> f64 {
    let ka = krylov_all(alpha);
    let k2 = krylov_all(alpha * z2);
    let a = alpha;
    2.0 / a * (2.0 * z2 - 1.0) * ka[3] * (k2[0] / ka[0] - k2[3] / ka[3])
        + 4.0 / (a * a) * ka[0] * (k2[0] / ka[0] - k2[1] / ka[1])
}

/// Modal data for the instant-heating start u₀ = 0, u₁ = ζu⁽⁴⁾/δt, using
/// the closed forms I⁽¹⁾, I⁽²⁾.
pub fn instant_heating_state(zeta: f64, reaction_time: f64, modes: &[KrylovMode], sol: &StaticSolution) -> Result<ModalState> {
    if !(reaction_time > 0.0) {
        return Err(invalid("reaction_time", "must be positive"));
    }
    let amp = -sol.alpha_t_bar * sol.length * sol.length / (2.0 * sol.d0);
    let (z1, z2) = (sol.z1, sol.z2);
    let mut st = ModalState::zeros(modes.len());
    for (n, m) in modes.iter().enumerate() {
        let proj = amp * (i_n1(m.alpha, z1, z2) + (z2 - z1) * i_n2(m.alpha, z2)) / m.norm2;
        st.w1[n] = zeta * proj / reaction_time;
    }
    Ok(st)
}
