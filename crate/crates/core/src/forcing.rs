//! Temperature profiles τ̄(z̄), pulse shapes β(t) and their projections onto
//! spatial modes.
//!
//! The heating amplitude enters the dynamics only through the product ι·β₀
//! (wall-to-mean temperature ratio times pulse amplitude); both are stored but
//! only the product is observable.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::DerivedCoefficients;
use crate::quad::{unit_breaks, GaussLegendre, REL_TOL};
use crate::special::{heaviside, rect, theta_train, SeriesControl};
use crate::spectrum::{gravity_eigenvalues, GravityMode, Mode};
use crate::{error::invalid, Error, Result};

/// Shape of the pulse in time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseKind {
    /// β₀ θ(Δt − t): on from the start until Δt.
    Step,
    /// β₀ Θ(t, ν): N + 1 windows of length Δt with period (ν + 1)Δt.
    Train,
}

/// Thermal pulse train.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    /// Pulse length Δt, seconds.
    pub dt: f64,
    /// Amplitude β₀, kelvin.
    pub beta0: f64,
    /// Duty parameter ν ≥ 0; the duty cycle is S = ν + 1.
    pub nu: f64,
    /// Index N of the last pulse; the train has N + 1 pulses.
    pub count: usize,
    pub kind: PulseKind,
}

impl Default for PulseSpec {
    fn default() -> Self {
        Self {
            dt: 1.0,
            beta0: 20.0,
            nu: 0.0,
            count: 0,
            kind: PulseKind::Step,
        }
    }
}

impl PulseSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid("pulse.dt", "must be positive"));
        }
        if !(self.nu >= 0.0 && self.nu.is_finite()) {
            return Err(invalid("pulse.nu", "must be non-negative"));
        }
        if !self.beta0.is_finite() {
            return Err(invalid("pulse.beta0", "must be finite"));
        }
        Ok(())
    }

    /// Duty cycle S = ν + 1.
    pub fn duty_cycle(&self) -> f64 {
        self.nu + 1.0
    }

    /// Heating windows [start, end] on t ≥ 0, in order.
    pub fn windows(&self) -> Vec<(f64, f64)> {
        match self.kind {
            PulseKind::Step => alloc::vec![(0.0, self.dt)],
            PulseKind::Train => {
                let period = self.duty_cycle() * self.dt;
                (0..=self.count)
                    .map(|k| {
                        let s = k as f64 * period;
                        (s, s + self.dt)
                    })
                    .collect()
            }
        }
    }

    /// Every switching instant, ascending and deduplicated.
    pub fn edges(&self) -> Vec<f64> {
        let mut e: Vec<f64> = Vec::new();
        for (a, b) in self.windows() {
            for x in [a, b] {
                if e.last().map_or(true, |&l| (x - l).abs() > 1e-12 * x.abs().max(1.0)) {
                    e.push(x);
                }
            }
        }
        e
    }
}

/// Pulse amplitude β(t), kelvin.
pub fn beta(t: f64, pulse: &PulseSpec) -> f64 {
    match pulse.kind {
        PulseKind::Step => pulse.beta0 * heaviside(pulse.dt - t),
        PulseKind::Train => pulse.beta0 * theta_train(t, pulse),
    }
}

/// τ̄ built from a gravity mode: τ₀ Σ aₙ/(3n+1)[z̄²/2 − (1−z̄)³ⁿ⁺³/((3n+2)(3n+3))] + τ₁z̄ + τ₂,
/// whose curvature is τ₀ Z̄_ℓ⁽⁰⁾.
#[derive(Debug, Clone, PartialEq)]
pub struct EllProfile {
    pub mode: GravityMode,
    pub tau0: f64,
    pub tau1: f64,
    pub tau2: f64,
}

impl EllProfile {
    pub fn new(mode: GravityMode, tau0: f64, tau1: f64, tau2: f64) -> Self {
        Self { mode, tau0, tau1, tau2 }
    }

    /// Constants with τ̄(0) = 0 and mean 1 on [0, 1]; the remaining freedom is
    /// spent minimising ∫(τ̄ − 1)².
    pub fn fitted(mode: GravityMode) -> Result<Self> {
        let gl = GaussLegendre::default();
        let s0 = mode.z0_second_antiderivative(0.0);
        let q0 = |z: f64| mode.z0_second_antiderivative(z) - s0;
        let m_s = gl.integrate(q0, 0.0, 1.0, 1e-13)?;
        // τ̄ − 1 = τ₀ q(z̄) + (2z̄ − 1), q = (S − S₀) − 2 m_S z̄
        let q = |z: f64| q0(z) - 2.0 * m_s * z;
        let num = gl.integrate(|z| q(z) * (2.0 * z - 1.0), 0.0, 1.0, 1e-13)?;
        let den = gl.integrate(|z| q(z) * q(z), 0.0, 1.0, 1e-13)?;
        if den <= 0.0 {
            return Err(Error::IllConditioned {
                what: "ell profile fit",
                value: den,
            });
        }
        let tau0 = -num / den;
        let tau1 = 2.0 * (1.0 - tau0 * m_s);
        let tau2 = -tau0 * s0;
        Ok(Self { mode, tau0, tau1, tau2 })
    }

    pub fn value(&self, z: f64) -> f64 {
        self.tau0 * self.mode.z0_second_antiderivative(z) + self.tau1 * z + self.tau2
    }
}

/// Evaluates the ℓ-mode temperature profile for gravity mode ℓ.
pub fn tau_ell(z: f64, ell: usize, tau0: f64, tau1: f64, tau2: f64, ctrl: &SeriesControl) -> Result<f64> {
    if ell == 0 {
        return Err(invalid("ell", "gravity mode index starts at 1"));
    }
    let mode = gravity_eigenvalues(ell, ctrl)?.pop().ok_or(Error::BracketNotFound {
        what: "tau_ell",
        index: ell,
    })?;
    Ok(EllProfile::new(mode, tau0, tau1, tau2).value(z))
}

/// Normalised temperature distribution along the rod.
#[derive(Debug, Clone, PartialEq)]
pub enum TemperatureProfile {
    /// 1/(1 + e^{Ῡ(z̄₁−z̄)}) + 1/(1 + e^{Ῡ(z̄−z̄₂)}) − 1.
    Logistic { upsilon: f64, z1: f64, z2: f64 },
    /// rect[(2z̄ − z̄₂ − z̄₁)/(2(z̄₂ − z̄₁))].
    Rectangular { z1: f64, z2: f64 },
    /// Built from gravity mode ℓ.
    Ell(EllProfile),
    /// τ̄ ≡ level.
    Uniform { level: f64 },
}

impl Default for TemperatureProfile {
    fn default() -> Self {
        TemperatureProfile::Logistic {
            upsilon: 100.0,
            z1: 0.3,
            z2: 0.7,
        }
    }
}

/// Logistic σ(x) = 1/(1 + e^{−x}) without overflow.
fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

impl TemperatureProfile {
    pub fn validate(&self) -> Result<()> {
        let bounds = |z1: f64, z2: f64| {
            if 0.0 < z1 && z1 < z2 && z2 < 1.0 {
                Ok(())
            } else {
                Err(invalid("profile.z1/z2", "need 0 < z1 < z2 < 1"))
            }
        };
        match self {
            TemperatureProfile::Logistic { upsilon, z1, z2 } => {
                if !(*upsilon > 0.0 && upsilon.is_finite()) {
                    return Err(invalid("profile.upsilon", "must be positive"));
                }
                bounds(*z1, *z2)
            }
            TemperatureProfile::Rectangular { z1, z2 } => bounds(*z1, *z2),
            TemperatureProfile::Ell(_) | TemperatureProfile::Uniform { .. } => Ok(()),
        }
    }

    /// τ̄(z̄).
    pub fn value(&self, z: f64) -> f64 {
        match self {
            TemperatureProfile::Logistic { upsilon, z1, z2 } => {
                sigmoid(upsilon * (z - z1)) + sigmoid(upsilon * (z2 - z)) - 1.0
            }
            TemperatureProfile::Rectangular { z1, z2 } => {
                rect((2.0 * z - z2 - z1) / (2.0 * (z2 - z1)))
            }
            TemperatureProfile::Ell(e) => e.value(z),
            TemperatureProfile::Uniform { level } => *level,
        }
    }

    /// τ̄'(z̄) where it exists classically.
    pub fn d1(&self, z: f64) -> Option<f64> {
        match self {
            TemperatureProfile::Logistic { upsilon, z1, z2 } => {
                let a = sigmoid(upsilon * (z - z1));
                let b = sigmoid(upsilon * (z2 - z));
                Some(upsilon * (a * (1.0 - a) - b * (1.0 - b)))
            }
            TemperatureProfile::Rectangular { z1, z2 } => {
                (z != *z1 && z != *z2).then_some(0.0)
            }
            TemperatureProfile::Ell(e) => {
                let h = 1e-6;
                Some((e.value((z + h).min(1.0)) - e.value((z - h).max(0.0))) / ((z + h).min(1.0) - (z - h).max(0.0)))
            }
            TemperatureProfile::Uniform { .. } => Some(0.0),
        }
    }

    /// τ̄''(z̄) where it exists classically (not for the rectangle).
    pub fn d2(&self, z: f64) -> Option<f64> {
        match self {
            TemperatureProfile::Logistic { upsilon, z1, z2 } => {
                let a = sigmoid(upsilon * (z - z1));
                let b = sigmoid(upsilon * (z2 - z));
                let u2 = upsilon * upsilon;
                Some(u2 * (a * (1.0 - a) * (1.0 - 2.0 * a) + b * (1.0 - b) * (1.0 - 2.0 * b)))
            }
            TemperatureProfile::Rectangular { .. } => None,
            TemperatureProfile::Ell(e) => Some(e.tau0 * e.mode.z0(z)),
            TemperatureProfile::Uniform { .. } => Some(0.0),
        }
    }

    /// Points in (0, 1) where the profile changes rapidly.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            TemperatureProfile::Logistic { upsilon, z1, z2 } => {
                let mut v = Vec::new();
                for c in [*z1, *z2] {
                    for w in [-20.0, -6.0, -2.0, 0.0, 2.0, 6.0, 20.0] {
                        v.push(c + w / upsilon);
                    }
                }
                unit_breaks(&v)
            }
            TemperatureProfile::Rectangular { z1, z2 } => unit_breaks(&[*z1, *z2]),
            _ => unit_breaks(&[]),
        }
    }

    /// True when τ̄(1) and τ̄'(1) vanish, so ∫τ̄''Φ = ∫τ̄Φ'' for clamped modes.
    pub fn free_at_tip(&self) -> bool {
        let tol = 1e-9;
        let v = self.value(1.0).abs();
        let d = self.d1(1.0).map(f64::abs).unwrap_or(f64::INFINITY);
        match self {
            TemperatureProfile::Rectangular { z2, .. } => *z2 < 1.0,
            _ => v < tol && d < tol,
        }
    }
}

/// τ̄ₙ'' = (1/‖Φₙ‖²) ∫₀¹ τ̄'' Φₙ dz̄.
pub fn project_tau_dd_direct(profile: &TemperatureProfile, mode: &Mode, gl: &GaussLegendre) -> Result<f64> {
    if profile.d2(0.5).is_none() {
        return Err(invalid("profile", "curvature is not a classical function"));
    }
    let breaks = profile.breakpoints();
    let i = gl.integrate_pieces(|z| profile.d2(z).unwrap_or(0.0) * mode.value(z), &breaks, REL_TOL)?;
    Ok(i / mode.norm2())
}

/// τ̄ₙ'' = (1/‖Φₙ‖²) ∫₀¹ τ̄ Φₙ'' dz̄ (integrated by parts).
pub fn project_tau_dd_by_parts(profile: &TemperatureProfile, mode: &Mode, gl: &GaussLegendre) -> Result<f64> {
    let breaks = profile.breakpoints();
    project_function(|z| profile.value(z), mode, &breaks, gl)
}

/// (1/‖Φₙ‖²) ∫₀¹ f Φₙ'' dz̄ for an arbitrary temperature function.
pub fn project_function<F: Fn(f64) -> f64>(f: F, mode: &Mode, breaks: &[f64], gl: &GaussLegendre) -> Result<f64> {
    let i = gl.integrate_pieces(|z| f(z) * mode.d2(z), breaks, REL_TOL)?;
    Ok(i / mode.norm2())
}

/// Projection of the temperature curvature onto a mode, choosing the
/// integrated-by-parts form whenever the tip boundary terms vanish.
pub fn project_tau_dd(profile: &TemperatureProfile, mode: &Mode, _ctrl: &SeriesControl) -> Result<f64> {
    let gl = GaussLegendre::default();
    if profile.free_at_tip() {
        project_tau_dd_by_parts(profile, mode, &gl)
    } else {
        project_tau_dd_direct(profile, mode, &gl)
    }
}

/// f̄ₙ(t) = −(α_T ι/(d₀L²)) τ̄ₙ'' β(t).
pub fn modal_forcing(t: f64, tau_dd_n: f64, pulse: &PulseSpec, coeffs: &DerivedCoefficients) -> f64 {
    coeffs.forcing_scale() * tau_dd_n * beta(t, pulse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{derive, RodParameters};
    use crate::spectrum::krylov_modes;
    use proptest::prelude::*;

    fn w(k: usize) -> Mode {
        Mode::Krylov(krylov_modes(k).unwrap().pop().unwrap())
    }

    #[test]
    fn logistic_values() {
        let p = TemperatureProfile::default();
        assert!((p.value(0.5) - (1.0 - 2.0 / (1.0 + 20f64.exp()))).abs() < 1e-15);
        assert!((p.value(0.5) - 1.0).abs() < 1e-8);
        assert!(p.value(0.0).abs() < 1e-8);
        assert!(p.free_at_tip());
    }

    #[test]
    fn rectangular_values() {
        let p = TemperatureProfile::Rectangular { z1: 0.3, z2: 0.7 };
        assert_eq!(p.value(0.5), 1.0);
        assert_eq!(p.value(0.1), 0.0);
        assert_eq!(p.value(0.3), 0.5);
    }

    #[test]
    fn logistic_derivatives_match_differences() {
        let p = TemperatureProfile::default();
        let h = 1e-6;
        for z in [0.25, 0.31, 0.5, 0.69] {
            let d1 = (p.value(z + h) - p.value(z - h)) / (2.0 * h);
            assert!((d1 - p.d1(z).unwrap()).abs() < 1e-5 * (1.0 + d1.abs()));
            let d2 = (p.d1(z + h).unwrap() - p.d1(z - h).unwrap()) / (2.0 * h);
            assert!((d2 - p.d2(z).unwrap()).abs() < 1e-4 * (1.0 + d2.abs()));
        }
    }

    #[test]
    fn logistic_is_symmetric() {
        let p = TemperatureProfile::Logistic { upsilon: 80.0, z1: 0.25, z2: 0.75 };
        for i in 0..=100 {
            let z = i as f64 / 100.0;
            assert!((p.value(z) - p.value(1.0 - z)).abs() < 1e-12);
        }
    }

    #[test]
    fn rectangle_is_close_to_logistic() {
        let l = TemperatureProfile::default();
        let r = TemperatureProfile::Rectangular { z1: 0.3, z2: 0.7 };
        let gl = GaussLegendre::default();
        let d = gl
            .integrate_pieces(|z| (l.value(z) - r.value(z)).abs(), &l.breakpoints(), 1e-12)
            .unwrap();
        assert!(d < 4.0 / 100.0, "{d}");
    }

    #[test]
    fn both_projection_forms_agree() {
        let p = TemperatureProfile::default();
        let gl = GaussLegendre::default();
        for k in 1..=4 {
            let m = w(k);
            let a = project_tau_dd_direct(&p, &m, &gl).unwrap();
            let b = project_tau_dd_by_parts(&p, &m, &gl).unwrap();
            assert!((a - b).abs() < 1e-8, "k={k}: {a} vs {b}");
        }
    }

    #[test]
    fn projection_orders_agree() {
        let p = TemperatureProfile::default();
        let m = w(1);
        let a = project_tau_dd_by_parts(&p, &m, &GaussLegendre::new(64)).unwrap();
        let b = project_tau_dd_by_parts(&p, &m, &GaussLegendre::new(128)).unwrap();
        assert!((a - b).abs() < 1e-9);
        let zero = TemperatureProfile::Uniform { level: 0.0 };
        assert_eq!(project_tau_dd(&zero, &m, &SeriesControl::default()).unwrap(), 0.0);
    }

    #[test]
    fn curvature_reconstruction_improves_with_more_modes() {
        // Σ τ̄ₙ'' Wₙ approximates τ̄'' in L² (Wₙ have unit norm).
        let p = TemperatureProfile::default();
        let gl = GaussLegendre::default();
        let modes: Vec<Mode> = krylov_modes(32).unwrap().into_iter().map(Mode::Krylov).collect();
        let coef: Vec<f64> = modes
            .iter()
            .map(|m| project_tau_dd_by_parts(&p, m, &gl).unwrap())
            .collect();
        let residual = |n: usize| {
            gl.integrate_pieces(
                |z| {
                    let s: f64 = (0..n).map(|i| coef[i] * modes[i].value(z) * modes[i].norm2()).sum();
                    let r = p.d2(z).unwrap() - s;
                    r * r
                },
                &p.breakpoints(),
                1e-10,
            )
            .unwrap()
        };
        let (r8, r16, r32) = (residual(8), residual(16), residual(32));
        assert!(r16 < r8 && r32 < r16, "{r8} {r16} {r32}");
    }

    #[test]
    fn ell_profile_curvature_and_calibration() {
        let ctrl = SeriesControl::default();
        let modes = gravity_eigenvalues(3, &ctrl).unwrap();
        let gl = GaussLegendre::default();
        for m in modes {
            let e = EllProfile::fitted(m.clone()).unwrap();
            assert!(e.value(0.0).abs() < 1e-12);
            let mean = gl.integrate(|z| e.value(z), 0.0, 1.0, 1e-12).unwrap();
            assert!((mean - 1.0).abs() < 0.05);
            assert!((mean - 1.0).abs() < 1e-10);
            let h = 1e-4;
            let d2 = (e.value(0.5 + h) - 2.0 * e.value(0.5) + e.value(0.5 - h)) / (h * h);
            assert!((d2 - e.tau0 * m.z0(0.5)).abs() < 1e-5 * (1.0 + d2.abs()));
        }
    }

    #[test]
    fn tau_ell_at_origin() {
        let ctrl = SeriesControl::default();
        let m = gravity_eigenvalues(2, &ctrl).unwrap().pop().unwrap();
        let (t0, t1, t2) = (1.3, -0.4, 0.25);
        let want = t2
            + t0 * m
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| {
                    let n = n as f64;
                    c / (3.0 * n + 1.0) * (-1.0 / ((3.0 * n + 2.0) * (3.0 * n + 3.0)))
                })
                .sum::<f64>();
        assert!((tau_ell(0.0, 2, t0, t1, t2, &ctrl).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn pulse_amplitudes() {
        let step = PulseSpec { dt: 0.4, ..PulseSpec::default() };
        assert_eq!(beta(0.2, &step), step.beta0);
        assert_eq!(beta(0.8, &step), 0.0);
        let s2 = PulseSpec { nu: 1.0, count: 4, kind: PulseKind::Train, ..step };
        assert_eq!(beta(2.5 * 0.4, &s2), s2.beta0);
        let s5 = PulseSpec { nu: 4.0, count: 4, kind: PulseKind::Train, ..step };
        assert_eq!(beta(2.5 * 0.4, &s5), 0.0);
    }

    #[test]
    fn modal_forcing_values() {
        let c = derive(&RodParameters::default()).unwrap();
        let off = PulseSpec { beta0: 0.0, ..PulseSpec::default() };
        assert_eq!(modal_forcing(0.3, 2.0, &off, &c), 0.0);
        // ι·β₀ = 1 K gives the constant −ᾱ_T τ̄ₙ''/(d₀L²)
        let unit = PulseSpec { beta0: 1.0 / c.params.iota, dt: 10.0, ..PulseSpec::default() };
        let p = &c.params;
        let want = -p.alpha_t * 2.0 / (p.d0 * p.length * p.length);
        for t in [0.0, 1.0, 5.0] {
            assert!((modal_forcing(t, 2.0, &unit, &c) - want).abs() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn projection_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, k in 1usize..5) {
            let m = w(k);
            let gl = GaussLegendre::default();
            let t1 = TemperatureProfile::default();
            let t2 = TemperatureProfile::Logistic { upsilon: 60.0, z1: 0.2, z2: 0.55 };
            let mut br = t1.breakpoints();
            br.extend(t2.breakpoints());
            let br = unit_breaks(&br);
            let combo = project_function(|z| a * t1.value(z) + b * t2.value(z), &m, &br, &gl).unwrap();
            let p1 = project_function(|z| t1.value(z), &m, &br, &gl).unwrap();
            let p2 = project_function(|z| t2.value(z), &m, &br, &gl).unwrap();
            prop_assert!((combo - (a * p1 + b * p2)).abs() < 1e-10);
        }
    }
}
