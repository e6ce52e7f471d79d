//! Krylov functions, the real dilogarithm and the step/rectangle/pulse-train
//! primitives used by the forcing terms.

use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::forcing::PulseSpec;
use crate::{error::invalid, Error, Result};

/// Truncation control for the power series used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub max_terms: usize,
    pub abs_tol: f64,
}

impl SeriesControl {
    pub fn new(max_terms: usize, abs_tol: f64) -> Result<Self> {
        if max_terms < 8 {
            return Err(invalid("max_terms", "must be at least 8"));
        }
        if !(abs_tol > 0.0 && abs_tol <= 1e-6) {
            return Err(invalid("abs_tol", "must lie in (0, 1e-6]"));
        }
        Ok(Self { max_terms, abs_tol })
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            max_terms: 600,
            abs_tol: 1e-16,
        }
    }
}

/// Largest |x| for which cosh x is finite.
pub const KRYLOV_MAX_ARG: f64 = 710.475_860_073_943_9;

/// Krylov function K_j(x), j in 1..=4.
///
/// K1 = (ch + cos)/2, K2 = (sh + sin)/2, K3 = (ch − cos)/2, K4 = (sh − sin)/2.
pub fn krylov(j: u8, x: f64) -> Result<f64> {
    if !(1..=4).contains(&j) {
        return Err(invalid("j", "Krylov index must be 1, 2, 3 or 4"));
    }
    if !x.is_finite() {
        return Err(Error::Domain { func: "krylov", value: x });
    }
    if x.abs() > KRYLOV_MAX_ARG {
        return Err(Error::Overflow { func: "krylov", value: x });
    }
    Ok(krylov_all(x)[usize::from(j - 1)])
}

/// All four Krylov functions at once, without range checks.
pub fn krylov_all(x: f64) -> [f64; 4] {
    let (ch, sh) = (x.cosh(), x.sinh());
    let (c, s) = (x.cos(), x.sin());
    // For small |x| the differences ch − cos and sh − sin cancel; use series.
    let (k3, k4) = if x.abs() < 0.1 {
        let x2 = x * x;
        let x4 = x2 * x2;
        let k3 = x2 / 2.0 * (1.0 + x4 / 360.0 + x4 * x4 / 1_814_400.0);
        let k4 = x * x2 / 6.0 * (1.0 + x4 / 840.0 + x4 * x4 / 6_652_800.0);
        (k3, k4)
    } else {
        ((ch - c) / 2.0, (sh - s) / 2.0)
    };
    [(ch + c) / 2.0, (sh + s) / 2.0, k3, k4]
}

/// Real dilogarithm Li₂(x) = −∫₀ˣ ln(1 − t)/t dt for x ≤ 0.
pub fn dilog(x: f64) -> Result<f64> {
    if x.is_nan() || x > 0.0 {
        return Err(Error::Domain { func: "dilog", value: x });
    }
    if x == f64::NEG_INFINITY {
        return Err(Error::Overflow { func: "dilog", value: x });
    }
    Ok(dilog_nonpos(x))
}

/// Li₂(−eˢ) for any finite s, without forming eˢ.
///
/// Large positive `s` goes through the inversion identity, so arguments like
/// −e^{800} are handled.
pub fn dilog_neg_exp(s: f64) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::Domain { func: "dilog_neg_exp", value: s });
    }
    if s > 0.0 {
        // Li₂(−eˢ) = −π²/6 − s²/2 − Li₂(−e^{−s})
        Ok(-PI * PI / 6.0 - 0.5 * s * s - dilog_nonpos(-(-s).exp()))
    } else {
        Ok(dilog_nonpos(-s.exp()))
    }
}

fn dilog_nonpos(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x >= -0.5 {
        dilog_series(x)
    } else if x >= -1.0 {
        // Landen: Li₂(x) = −Li₂(x/(x−1)) − ln²(1−x)/2, with x/(x−1) in [1/3, 1/2].
        let y = x / (x - 1.0);
        let l = (1.0 - x).ln();
        -dilog_series(y) - 0.5 * l * l
    } else {
        // Inversion: Li₂(x) = −π²/6 − ln²(−x)/2 − Li₂(1/x), with 1/x in (−1, 0).
        let l = (-x).ln();
        -PI * PI / 6.0 - 0.5 * l * l - dilog_nonpos(1.0 / x)
    }
}

/// Σ x^k/k² for |x| ≤ 1/2.
fn dilog_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0;
    for k in 1..200 {
        pow *= x;
        let kf = k as f64;
        let term = pow / (kf * kf);
        sum += term;
        if term.abs() <= 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Heaviside step with θ(0) = 1/2.
pub fn heaviside(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        0.0
    } else {
        0.5
    }
}

/// Rectangle function: 1 inside |t| < 1/2, 1/2 on the edges, 0 outside.
pub fn rect(t: f64) -> f64 {
    let a = t.abs();
    if a < 0.5 {
        1.0
    } else if a == 0.5 {
        0.5
    } else {
        0.0
    }
}

/// Periodic rectangular pulse train Θ(t, ν): 1 on each closed window
/// [k(ν+1)Δt, k(ν+1)Δt + Δt] for k = 0..=N, 0 elsewhere.
pub fn theta_train(t: f64, pulse: &PulseSpec) -> f64 {
    let period = (pulse.nu + 1.0) * pulse.dt;
    if !(t >= 0.0) {
        return 0.0;
    }
    let k = (t / period).floor();
    for kk in [k - 1.0, k] {
        if kk < 0.0 || kk > pulse.count as f64 {
            continue;
        }
        let start = kk * period;
        if t >= start && t <= start + pulse.dt {
            return 1.0;
        }
    }
    0.0
}
