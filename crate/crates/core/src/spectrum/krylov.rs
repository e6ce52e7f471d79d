//! Zero-gravity clamped-free modes W_k = 2K₃(α_k z̄) + C₄K₄(α_k z̄) with
//! cos α_k cosh α_k = −1.
//!
//! Evaluation uses an algebraically equivalent form in which the growing
//! exponentials cancel analytically, so high modes keep full precision and
//! nothing overflows.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::quad::{GaussLegendre, REL_TOL};
use crate::special::krylov_all;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct KrylovMode {
    pub index: usize,
    pub alpha: f64,
    /// C₄ = −2K₁(α)/K₂(α).
    pub c4: f64,
    /// ∫₀¹ W_k² dz̄.
    pub norm2: f64,
}

/// Offsets δ_k = α_k − (k − ½)π of the roots of cos α cosh α + 1 = 0.
///
/// Near (k − ½)π the equation reads (−1)^k sin δ cosh α = −1, which is
/// solved for δ directly. Keeping δ separate represents α_k well beyond
/// double precision; the root of mode 10 sits within 1e-13 of (k − ½)π.
pub fn krylov_alpha_offsets(k_max: usize) -> Vec<f64> {
    (1..=k_max)
        .map(|k| {
            let base = PI * (k as f64 - 0.5);
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let mut d = 0.0f64;
            for _ in 0..200 {
                let next = (sign / (base + d).cosh()).asin();
                if next == d {
                    break;
                }
                d = next;
            }
            d
        })
        .collect()
}

/// cos α cosh α + 1 at α = (k − ½)π + δ, with the cosine reduced exactly.
pub fn krylov_residual(k: usize, delta: f64) -> f64 {
    let alpha = PI * (k as f64 - 0.5) + delta;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    sign * delta.sin() * alpha.cosh() + 1.0
}

/// First `k_max` roots of cos α cosh α + 1 = 0.
pub fn krylov_alpha_roots(k_max: usize) -> Vec<f64> {
    krylov_alpha_offsets(k_max)
        .into_iter()
        .enumerate()
        .map(|(i, d)| PI * (i as f64 + 0.5) + d)
        .collect()
}

/// Krylov modes 1..=k_max with measured norms.
pub fn krylov_modes(k_max: usize) -> Result<Vec<KrylovMode>> {
    let gl = GaussLegendre::default();
    krylov_alpha_roots(k_max)
        .into_iter()
        .enumerate()
        .map(|(i, alpha)| {
            let c4 = c4_of(alpha);
            let mut m = KrylovMode {
                index: i + 1,
                alpha,
                c4,
                norm2: 0.0,
            };
            m.norm2 = gl.integrate(
                |z| {
                    let w = m.value(z);
                    w * w
                },
                0.0,
                1.0,
                REL_TOL,
            )?;
            Ok(m)
        })
        .collect()
}

fn c4_of(alpha: f64) -> f64 {
    // −2(ch + cos)/(sh + sin), scaled by e^{−α} to avoid overflow.
    let e = (-alpha).exp();
    let num = 1.0 + e * e + 2.0 * e * alpha.cos();
    let den = 1.0 - e * e + 2.0 * e * alpha.sin();
    -2.0 * num / den
}

impl KrylovMode {
    /// Shared pieces of the stable form: returns (D, P, Q) where, with
    /// σ = K₁(α)/K₂(α),
    ///   ch(αz̄) − σ sh(αz̄) = P/D and sh(αz̄) − σ ch(αz̄) = Q/D,
    /// all scaled by 2e^{−α}.
    fn hyperbolic(&self, z: f64) -> (f64, f64, f64) {
        let a = self.alpha;
        let (s, c) = (a.sin(), a.cos());
        let e1 = (-a * z).exp(); // e^{−αz}
        let e2 = (-a * (2.0 - z)).exp(); // e^{−α(2−z)}
        let e3 = (a * (z - 1.0)).exp(); // e^{α(z−1)}
        let e4 = (-a * (1.0 + z)).exp(); // e^{−α(1+z)}
        let d = 1.0 - (-2.0 * a).exp() + 2.0 * (-a).exp() * s;
        // 2e^{−α}: sh(α(1−z)) = e1 − e2, ch(αz) = e3 + e4, sh(αz) = e3 − e4,
        // ch(α(1−z)) = e1 + e2.
        let p = (e1 - e2) + s * (e3 + e4) - c * (e3 - e4);
        let q = -(e1 + e2) + s * (e3 - e4) - c * (e3 + e4);
        (d, p, q)
    }

    fn sigma(&self) -> f64 {
        -0.5 * self.c4
    }

    /// W_k(z̄).
    pub fn value(&self, z: f64) -> f64 {
        let (d, p, _) = self.hyperbolic(z);
        let x = self.alpha * z;
        p / d - x.cos() + self.sigma() * x.sin()
    }

    /// W_k'(z̄).
    pub fn d1(&self, z: f64) -> f64 {
        let (d, _, q) = self.hyperbolic(z);
        let x = self.alpha * z;
        self.alpha * (q / d + x.sin() + self.sigma() * x.cos())
    }

    /// W_k''(z̄).
    pub fn d2(&self, z: f64) -> f64 {
        let (d, p, _) = self.hyperbolic(z);
        let x = self.alpha * z;
        self.alpha * self.alpha * (p / d + x.cos() - self.sigma() * x.sin())
    }

    /// W_k'''(z̄).
    pub fn d3(&self, z: f64) -> f64 {
        let (d, _, q) = self.hyperbolic(z);
        let x = self.alpha * z;
        self.alpha.powi(3) * (q / d - x.sin() - self.sigma() * x.cos())
    }

    /// λ̄_k = α_k⁴.
    pub fn lambda_bar(&self) -> f64 {
        self.alpha.powi(4)
    }
}

/// W_k(z̄) from the Krylov-function definition.
pub fn krylov_mode(z: f64, mode: &KrylovMode) -> f64 {
    mode.value(z)
}

/// W_k''(z̄) = 2α²K₁(α)[K₁(αz̄)/K₁(α) − K₂(αz̄)/K₂(α)].
pub fn krylov_mode_dd(z: f64, mode: &KrylovMode) -> f64 {
    mode.d2(z)
}

/// Direct textbook evaluation 2K₃(αz̄) + C₄K₄(αz̄). Loses about αz̄/ln 10
/// digits to cancellation; kept as a reference for low modes.
pub fn krylov_mode_direct(z: f64, mode: &KrylovMode) -> f64 {
    let k = krylov_all(mode.alpha * z);
    2.0 * k[2] + mode.c4 * k[3]
}

/// Large-k form with α ≈ π(k − 1/2):
/// W ≈ e^{−αz̄} + (−1)^{k+1} e^{−α(1−z̄)} − cos αz̄ + sin αz̄.
pub fn krylov_mode_asymptotic(z: f64, k: usize) -> f64 {
    let a = PI * (k as f64 - 0.5);
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    (-a * z).exp() + sign * (-a * (1.0 - z)).exp() - (a * z).cos() + (a * z).sin()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots() {
        let r = krylov_alpha_roots(20);
        assert!((r[0] - 1.875_104_068_711_961).abs() < 1e-12);
        assert!((r[1] - 4.694_091_132_974_175).abs() < 1e-12);
        assert!((r[19] - PI * 19.5).abs() < 1e-6);
        for (k, d) in krylov_alpha_offsets(10).iter().enumerate() {
            assert!(krylov_residual(k + 1, *d).abs() < 1e-10, "k = {}", k + 1);
        }
        // in plain double precision the residual is limited by the spacing
        // of doubles near α times the slope cosh α
        for a in r.iter().take(3) {
            assert!((a.cos() * a.cosh() + 1.0).abs() < 1e-12);
        }
        assert!(r.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn stable_form_matches_definition() {
        for m in krylov_modes(4).unwrap() {
            for i in 0..=20 {
                let z = i as f64 / 20.0;
                let a = m.value(z);
                let b = krylov_mode_direct(z, &m);
                assert!((a - b).abs() < 1e-10, "k={} z={z}: {a} vs {b}", m.index);
            }
        }
    }

    #[test]
    fn boundary_values() {
        for m in krylov_modes(12).unwrap() {
            let sign = if m.index % 2 == 1 { 2.0 } else { -2.0 };
            assert_eq!(m.value(0.0).abs() < 1e-15, true);
            assert!(m.d1(0.0).abs() < 1e-12 * m.alpha);
            assert!(m.d2(1.0).abs() < 1e-10 * m.alpha.powi(2));
            assert!(m.d3(1.0).abs() < 1e-10 * m.alpha.powi(3));
            assert!((m.value(1.0) - sign).abs() < 1e-8);
            assert!((m.norm2 - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn second_derivative_values() {
        let m = &krylov_modes(1).unwrap()[0];
        assert!((krylov_mode_dd(0.0, m) - 2.0 * m.alpha * m.alpha).abs() < 1e-12);
        let h = 1e-4;
        let fd = (m.value(0.4 + h) - 2.0 * m.value(0.4) + m.value(0.4 - h)) / (h * h);
        assert!((fd - m.d2(0.4)).abs() < 1e-5 * m.d2(0.4).abs());
    }

    #[test]
    fn derivatives_are_consistent() {
        let m = &krylov_modes(3).unwrap()[2];
        let h = 1e-6;
        for z in [0.1, 0.5, 0.9] {
            let d1 = (m.value(z + h) - m.value(z - h)) / (2.0 * h);
            let d3 = (m.d2(z + h) - m.d2(z - h)) / (2.0 * h);
            assert!((d1 - m.d1(z)).abs() < 1e-6 * m.alpha);
            assert!((d3 - m.d3(z)).abs() < 1e-6 * m.alpha.powi(3));
        }
    }

    #[test]
    fn asymptotic_form_for_high_modes() {
        for m in krylov_modes(9).unwrap().into_iter().skip(4) {
            for z in [0.1, 0.5, 0.8] {
                let d = (m.value(z) - krylov_mode_asymptotic(z, m.index)).abs();
                assert!(d < 1e-3, "k={} z={z}: {d}", m.index);
            }
        }
    }
}
