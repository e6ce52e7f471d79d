//! Eigenfunction expansion in time on a finite horizon [0, T].
//!
//! Subtracting the affine interpolant of the end values leaves a problem
//! with homogeneous two-point data, expanded in ψ_m(t) = √(2/T)e^{−γt}sin μ_m t,
//! μ_m = πm/T. These are eigenfunctions of a₁∂² + a₂∂ + λ with eigenvalues
//! λ̃_m = λ − a₁(γ² + μ_m²) and are orthonormal with weight e^{2γt}.
//! Forcing is piecewise constant, so every inner product is integrated
//! exactly.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::ModalOscillator;
use crate::{error::invalid, Error, Result};

/// End conditions for the time problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GreenConditions {
    /// w(0) = u0 and w(T) = ut.
    TwoPoint { u0: f64, ut: f64 },
    /// w(0) = u0 and w'(0) = u1; converted to two-point data first.
    Cauchy { u0: f64, u1: f64 },
}

/// Series truncation control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenOptions {
    /// Upper bound on the number of basis functions.
    pub max_terms: usize,
    /// Bound on the estimated tail of the series, in the units of w.
    pub abs_tol: f64,
}

impl Default for GreenOptions {
    fn default() -> Self {
        Self { max_terms: 400_000, abs_tol: 1e-12 }
    }
}

/// Forcing f(t) = Σ value·1[start, end).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PiecewiseForcing {
    pub pieces: Vec<(f64, f64, f64)>,
}

impl PiecewiseForcing {
    pub fn windows(amp: f64, windows: &[(f64, f64)]) -> Self {
        Self { pieces: windows.iter().map(|&(a, b)| (a, b, amp)).collect() }
    }

    pub fn constant(amp: f64, horizon: f64) -> Self {
        Self { pieces: alloc::vec![(0.0, horizon, amp)] }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.pieces
            .iter()
            .filter(|(a, b, _)| t >= *a && t < *b)
            .map(|p| p.2)
            .sum()
    }
}

/// A truncated expansion w(t) = ℓ(t) + Σ c_m ψ_m(t).
#[derive(Debug, Clone, PartialEq)]
pub struct GreenSeries {
    pub horizon: f64,
    pub gamma: f64,
    pub u0: f64,
    pub ut: f64,
    /// c_m for m = 1, 2, …
    pub coeffs: Vec<f64>,
    /// Estimated magnitude of the discarded tail.
    pub tail: f64,
}

/// Orthonormal time basis function ψ_m.
pub fn time_basis(m: usize, t: f64, gamma: f64, horizon: f64) -> f64 {
    (2.0 / horizon).sqrt() * (-gamma * t).exp() * (PI * m as f64 * t / horizon).sin()
}

/// ∫_{s0}^{s1} (α + βt)e^{kt} dt.
fn linear_exp_integral(alpha: f64, beta: f64, k: Complex64, s0: f64, s1: f64) -> Complex64 {
    let prim = |t: f64| {
        let e = (k * t).exp();
        e * (alpha / k + beta * (t / k - 1.0 / (k * k)))
    };
    prim(s1) - prim(s0)
}

/// Solves a₁w'' + a₂w' + λw = f on [0, T] by the eigenfunction series.
pub fn green_response(
    osc: &ModalOscillator,
    forcing: &PiecewiseForcing,
    cond: GreenConditions,
    horizon: f64,
    opts: &GreenOptions,
) -> Result<GreenSeries> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(invalid("horizon", "must be positive"));
    }
    let (a1, g, lambda) = (osc.a1, osc.gamma, osc.lambda);
    let a2 = 2.0 * a1 * g;
    let (u0, ut) = match cond {
        GreenConditions::TwoPoint { u0, ut } => (u0, ut),
        GreenConditions::Cauchy { u0, u1 } => {
            let mut w = osc.free(horizon, u0, u1).0;
            for &(a, b, v) in &forcing.pieces {
                w += osc.windows_response(horizon, v, &[(a, b)]).0;
            }
            (u0, w)
        }
    };
    let slope = (ut - u0) / horizon;
    // f̂ = f − a₂ slope − λ(u0 + slope·t), linear on each segment.
    let mut cuts: Vec<f64> = alloc::vec![0.0, horizon];
    for &(a, b, _) in &forcing.pieces {
        for x in [a, b] {
            if x > 0.0 && x < horizon {
                cuts.push(x);
            }
        }
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let segments: Vec<(f64, f64, f64, f64)> = cuts
        .windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            let alpha = forcing.value(mid) - a2 * slope - lambda * u0;
            (w[0], w[1], alpha, -lambda * slope)
        })
        .collect();

    let norm = (2.0 / horizon).sqrt();
    let scale = lambda.abs().max(a1 * g * g).max(a1 * (PI / horizon).powi(2));
    let m_res = match osc.regime.frequency() {
        Some(b) => (b * horizon / PI) as usize,
        None => 0,
    };
    let m_min = 2 * m_res + 10;
    let mut coeffs: Vec<f64> = Vec::new();
    let mut tail = f64::INFINITY;
    for m in 1..=opts.max_terms {
        let mu = PI * m as f64 / horizon;
        let lt = lambda - a1 * (g * g + mu * mu);
        if lt.abs() <= 1e-10 * scale.max(a1 * mu * mu) {
            return Err(Error::ResonantBasis { mode: 0, m });
        }
        let k = Complex64::new(g, mu);
        let mut acc = Complex64::new(0.0, 0.0);
        for &(s0, s1, al, be) in &segments {
            acc += linear_exp_integral(al, be, k, s0, s1);
        }
        coeffs.push(norm * acc.im / lt);
        if m >= m_min && m >= 64 {
            let peak = coeffs[m - 64..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.abs() * ((m - 63 + i) as f64).powi(3))
                .fold(0.0, f64::max);
            tail = norm * peak / (2.0 * (m as f64).powi(2));
            if tail < opts.abs_tol {
                return Ok(GreenSeries { horizon, gamma: g, u0, ut, coeffs, tail });
            }
        }
    }
    Err(Error::Truncation { what: "green series", tail, tol: opts.abs_tol })
}

impl GreenSeries {
    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    /// w(t) for t in [0, T].
    pub fn eval(&self, t: f64) -> f64 {
        let th = PI * t / self.horizon;
        let step = Complex64::new(th.cos(), th.sin());
        let mut z = step;
        let mut s = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let m = i + 1;
            if m % 256 == 0 {
                let a = th * m as f64;
                z = Complex64::new(a.cos(), a.sin());
            }
            s += c * z.im;
            z *= step;
        }
        let affine = self.u0 + (self.ut - self.u0) * t / self.horizon;
        affine + (2.0 / self.horizon).sqrt() * (-self.gamma * t).exp() * s
    }

    pub fn eval_many(&self, times: &[f64]) -> Vec<f64> {
        times.iter().map(|&t| self.eval(t)).collect()
    }
}
