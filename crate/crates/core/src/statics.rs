//! Static thermal bending under sustained uneven heating.
//!
//! With the free constants of integration set to zero, the particular
//! solution satisfies d²u/dz̄² = −(ᾱ_T L²/d₀)τ̄(z̄). For the logistic
//! profile the double integral has a closed form in terms of the
//! dilogarithm; cruder profiles give a parabola and a piecewise quadratic.

#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::DerivedCoefficients;
use crate::forcing::{PulseSpec, TemperatureProfile};
use crate::special::{dilog_neg_exp, rect};
use crate::{error::invalid, Result};

/// Which closed form to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StaticVariant {
    /// Full dilogarithm solution, vanishing with its slope at the clamp.
    DilogFull,
    /// The same without its affine part.
    DilogReduced,
    /// Uniform heating: −ᾱ_T z²/(2d₀).
    Parabola,
    /// Rectangular profile on [z̄₁, z̄₂] with z̄₁ + z̄₂ = 1.
    PiecewiseRect,
}

impl StaticVariant {
    pub fn tag(self) -> &'static str {
        match self {
            StaticVariant::DilogFull => "dilog-full",
            StaticVariant::DilogReduced => "dilog-reduced",
            StaticVariant::Parabola => "parabola",
            StaticVariant::PiecewiseRect => "piecewise-rect",
        }
    }
}

/// Parameters of a static bend. `alpha_t_bar` is α_T times the sustained
/// wall temperature excess ι·β₀ (dimensionless).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticSolution {
    pub variant: StaticVariant,
    pub alpha_t_bar: f64,
    pub length: f64,
    pub d0: f64,
    pub upsilon: f64,
    pub z1: f64,
    pub z2: f64,
}

impl StaticSolution {
    pub fn new(
        variant: StaticVariant,
        alpha_t_bar: f64,
        length: f64,
        d0: f64,
        upsilon: f64,
        z1: f64,
        z2: f64,
    ) -> Result<Self> {
        if !(alpha_t_bar >= 0.0 && alpha_t_bar.is_finite()) {
            return Err(invalid("alpha_t_bar", "must be non-negative"));
        }
        if !(length > 0.0 && d0 > 0.0) {
            return Err(invalid("geometry", "L and d0 must be positive"));
        }
        if !(0.0 <= z1 && z1 < z2 && z2 <= 1.0) {
            return Err(invalid("profile.z1/z2", "need 0 ≤ z1 < z2 ≤ 1"));
        }
        if matches!(variant, StaticVariant::DilogFull | StaticVariant::DilogReduced) && !(upsilon > 0.0) {
            return Err(invalid("profile.upsilon", "must be positive"));
        }
        Ok(Self { variant, alpha_t_bar, length, d0, upsilon, z1, z2 })
    }

    /// The bend for a rod heated by `pulse.beta0` held indefinitely; the
    /// transition parameters are taken from a logistic or rectangular
    /// profile (other profiles fall back to the default logistic ones).
    pub fn from_model(
        variant: StaticVariant,
        coeffs: &DerivedCoefficients,
        profile: &TemperatureProfile,
        pulse: &PulseSpec,
    ) -> Result<Self> {
        let p = &coeffs.params;
        let (upsilon, z1, z2) = match *profile {
            TemperatureProfile::Logistic { upsilon, z1, z2 } => (upsilon, z1, z2),
            TemperatureProfile::Rectangular { z1, z2 } => (100.0, z1, z2),
            _ => (100.0, 0.3, 0.7),
        };
        Self::new(variant, p.alpha_t * p.iota * pulse.beta0, p.length, p.d0, upsilon, z1, z2)
    }

    /// Default rod, logistic profile and ι·β₀ = 1 K.
    pub fn defaults(variant: StaticVariant) -> Self {
        Self {
            variant,
            alpha_t_bar: 17.3e-6,
            length: 1.0,
            d0: 0.017,
            upsilon: 100.0,
            z1: 0.3,
            z2: 0.7,
        }
    }

    /// ᾱ_T L²/d₀, the common amplitude factor.
    fn scale(&self) -> f64 {
        self.alpha_t_bar * self.length * self.length / self.d0
    }

    /// u(z) with z in metres.
    pub fn u(&self, z: f64) -> f64 {
        u_static(z, self)
    }
}

/// Double integral ∫₀^z̄ ds ∫₀^s dv /(1 + e^{Ῡ(z̄₀ − v)}):
/// z̄²/2 − (z̄/Ῡ)ln(1 + e^{Ῡz̄₀}) − Li₂(−e^{Ῡz̄₀})/Ῡ² + Li₂(−e^{Ῡ(z̄₀−z̄)})/Ῡ².
pub fn i_upsilon(z: f64, z0: f64, upsilon: f64) -> Result<f64> {
    let y = upsilon;
    let a = dilog_neg_exp(y * z0)?;
    let b = dilog_neg_exp(y * (z0 - z))?;
    Ok(0.5 * z * z - z / y * softplus(y * z0) + (b - a) / (y * y))
}

/// ln(1 + eˣ) without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Static displacement at z (metres), by the selected closed form.
pub fn u_static(z: f64, sol: &StaticSolution) -> f64 {
    let zb = z / sol.length;
    let y = sol.upsilon;
    let (z1, z2) = (sol.z1, sol.z2);
    let s = sol.scale();
    let li = |x: f64| dilog_neg_exp(x).unwrap_or(f64::NAN);
    match sol.variant {
        StaticVariant::DilogFull => {
            let parabola = -0.5 * s * zb * zb;
            let linear = -s / y * ((-y * z2).exp().ln_1p() - softplus(y * z1)) * zb;
            let constant = s / (y * y) * (li(y * z1) + li(-y * z2));
            let varying = -s / (y * y) * (li(-y * (z2 - zb)) + li(y * (z1 - zb)));
            parabola + linear + constant + varying
        }
        StaticVariant::DilogReduced => {
            -0.5 * s * zb * zb - s / (y * y) * (li(-y * (z2 - zb)) + li(y * (z1 - zb)))
        }
        StaticVariant::Parabola => -0.5 * s * zb * zb,
        StaticVariant::PiecewiseRect => {
            if zb < z2 {
                let r = rect((2.0 * zb - z2 - z1) / (2.0 * (z2 - z1)));
                -0.5 * s * (zb - z1).powi(2) * r
            } else {
                -0.5 * s * (z2 - z1) * (2.0 * zb - 1.0)
            }
        }
    }
}

/// Δ_L = |u(L)|.
pub fn delta_l(sol: &StaticSolution) -> f64 {
    u_static(sol.length, sol).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::GaussLegendre;

    #[test]
    fn i_upsilon_basic() {
        assert_eq!(i_upsilon(0.0, 0.3, 100.0).unwrap(), 0.0);
        let h = 1e-3;
        let f = |z: f64| i_upsilon(z, 0.45, 30.0).unwrap();
        let d2 = (f(0.5 + h) - 2.0 * f(0.5) + f(0.5 - h)) / (h * h);
        let want = 1.0 / (1.0 + (30.0f64 * (0.45 - 0.5)).exp());
        assert!((d2 - want).abs() < 1e-5, "{d2} vs {want}");
    }

    #[test]
    fn i_upsilon_matches_nested_quadrature() {
        let gl = GaussLegendre::default();
        for (z, z0, y) in [(1.0, 0.3, 100.0), (0.7, 0.5, 20.0), (0.4, 0.7, -100.0)] {
            let sig = |v: f64| 1.0 / (1.0 + (y * (z0 - v)).exp());
            // ∫₀^z ∫₀^s g = ∫₀^z (z − v) g(v) dv
            let breaks = [0.0, (z0 - 0.2).clamp(0.0, z), z0.clamp(0.0, z), (z0 + 0.2).clamp(0.0, z), z];
            let q = gl.integrate_pieces(|v| (z - v) * sig(v), &breaks, 1e-13).unwrap();
            let c = i_upsilon(z, z0, y).unwrap();
            assert!((q - c).abs() < 1e-12, "{z} {z0} {y}: {q} vs {c}");
        }
    }

    #[test]
    fn endpoint_values() {
        let full = StaticSolution::defaults(StaticVariant::DilogFull);
        assert!(u_static(0.0, &full).abs() < 1e-18);
        let par = StaticSolution::defaults(StaticVariant::Parabola);
        assert!((u_static(1.0, &par) + 17.3e-6 / (2.0 * 0.017)).abs() < 1e-18);
        let rect = StaticSolution::defaults(StaticVariant::PiecewiseRect);
        assert!((u_static(1.0, &rect) + 2.035e-4).abs() < 1e-7);
        assert!((delta_l(&rect) - 2.035e-4).abs() < 1e-7);
        let cold = StaticSolution { alpha_t_bar: 0.0, ..rect };
        assert_eq!(delta_l(&cold), 0.0);
        let d = delta_l(&full);
        assert!((d - delta_l(&rect)).abs() < 0.02 * delta_l(&rect), "{d}");
    }

    #[test]
    fn full_solution_is_the_double_integral() {
        let sol = StaticSolution::defaults(StaticVariant::DilogFull);
        let s = sol.alpha_t_bar * sol.length * sol.length / sol.d0;
        for k in 0..=20 {
            let z = k as f64 / 20.0;
            let via = -s * (i_upsilon(z, sol.z1, sol.upsilon).unwrap() + i_upsilon(z, sol.z2, -sol.upsilon).unwrap() - 0.5 * z * z);
            assert!((via - u_static(z, &sol)).abs() < 1e-15, "z={z}");
        }
    }

    /// Richardson-extrapolated fourth difference.
    fn d4(f: &dyn Fn(f64) -> f64, z: f64, h: f64) -> f64 {
        let raw = |h: f64| (f(z + 2.0 * h) - 4.0 * f(z + h) + 6.0 * f(z) - 4.0 * f(z - h) + f(z - 2.0 * h)) / h.powi(4);
        (4.0 * raw(h / 2.0) - raw(h)) / 3.0
    }

    #[test]
    fn fourth_derivative_residual() {
        let sol = StaticSolution::defaults(StaticVariant::DilogFull);
        let prof = TemperatureProfile::Logistic { upsilon: sol.upsilon, z1: sol.z1, z2: sol.z2 };
        let s = sol.alpha_t_bar / sol.d0;
        let f = |z: f64| u_static(z, &sol);
        let mut pts = alloc::vec::Vec::new();
        for c in [sol.z1, sol.z2] {
            for side in [-1.0, 1.0] {
                for j in 0..5 {
                    pts.push(c + side * (0.055 + 0.012 * j as f64));
                }
            }
        }
        assert_eq!(pts.len(), 20);
        for z in pts {
            let got = d4(&f, z, 4e-3);
            let want = -s * prof.d2(z).unwrap();
            assert!((got - want).abs() < 1e-3 * want.abs(), "z={z}: {got} vs {want}");
        }
    }

    #[test]
    fn second_derivative_is_curvature_plus_affine() {
        let sol = StaticSolution::defaults(StaticVariant::DilogFull);
        let prof = TemperatureProfile::default();
        let s = sol.alpha_t_bar / sol.d0;
        let h = 1e-4;
        for k in 1..20 {
            let z = k as f64 / 20.0;
            let d2 = (sol.u(z + h) - 2.0 * sol.u(z) + sol.u(z - h)) / (h * h);
            // with zero integration constants the affine part vanishes
            assert!((d2 + s * prof.value(z)).abs() < 1e-5 * s, "z={z}");
        }
    }

    #[test]
    fn reduced_differs_by_an_affine_function() {
        let full = StaticSolution::defaults(StaticVariant::DilogFull);
        let red = StaticSolution::defaults(StaticVariant::DilogReduced);
        let n = 41;
        let zs: alloc::vec::Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
        let d: alloc::vec::Vec<f64> = zs.iter().map(|&z| full.u(z) - red.u(z)).collect();
        let slope = (d[n - 1] - d[0]) / (zs[n - 1] - zs[0]);
        let amp = delta_l(&full);
        for (z, v) in zs.iter().zip(&d) {
            assert!((v - d[0] - slope * z).abs() < 1e-10 * amp);
        }
    }

    #[test]
    fn rectangle_approximates_logistic_better_than_parabola() {
        let full = StaticSolution::defaults(StaticVariant::DilogFull);
        let rect = StaticSolution::defaults(StaticVariant::PiecewiseRect);
        let par = StaticSolution::defaults(StaticVariant::Parabola);
        let mut d4 = 0.0f64;
        let mut d3 = 0.0f64;
        for k in 0..=200 {
            let z = k as f64 / 200.0;
            d4 = d4.max((rect.u(z) - full.u(z)).abs());
            d3 = d3.max((par.u(z) - full.u(z)).abs());
        }
        assert!(d4 < 0.1 * d3, "{d4} vs {d3}");
    }
}
