//! Transfer-function route: the particular solution is the inverse Fourier
//! transform of f̂(ω)R̂(ω), evaluated on a uniform frequency grid by FFT.
//!
//! The pulse spectrum is exact; truncation happens only at |ω| > Ω and in
//! the periodic wrap of the time axis, which is made long enough for the
//! response to decay by e^{−36}.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{transfer_function, DerivedCoefficients, ModalOscillator};
use crate::forcing::PulseSpec;
use crate::{error::invalid, Result};

/// Grid and accuracy control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierOptions {
    /// Bound on the frequency-truncation error, in the units of w.
    pub abs_tol: f64,
    /// Ω is at least this multiple of the undamped frequency √(λ/a₁).
    pub min_band: f64,
    /// Upper bound on the FFT length.
    pub max_len: usize,
}

impl Default for FourierOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-12, min_band: 4.0, max_len: 1 << 24 }
    }
}

/// Fourier transform (1/√2π)∫β(t)e^{−iωt}dt of the pulse.
pub fn pulse_spectrum(omega: f64, pulse: &PulseSpec) -> Complex64 {
    let c = pulse.beta0 / (2.0 * PI).sqrt();
    let mut s = Complex64::new(0.0, 0.0);
    for (a, b) in pulse.windows() {
        // (e^{−iωa} − e^{−iωb})/(iω) = e^{−iω(a+b)/2}·2sin(ω(b−a)/2)/ω
        let half = 0.5 * (b - a);
        let sinc = if omega == 0.0 { 2.0 * half } else { 2.0 * (omega * half).sin() / omega };
        s += Complex64::new(0.0, -omega * 0.5 * (a + b)).exp() * sinc;
    }
    s * c
}

/// Samples of w(t) at t = k·dt_out, k = 0..=⌊t_end/dt_out⌋, for forcing
/// `scale`·β(t) and initial data (w0, w1).
pub fn fourier_response(
    osc: &ModalOscillator,
    coeffs: &DerivedCoefficients,
    scale: f64,
    pulse: &PulseSpec,
    w0: f64,
    w1: f64,
    t_end: f64,
    dt_out: f64,
    opts: &FourierOptions,
) -> Result<Vec<f64>> {
    let lambda = osc.lambda;
    let g = osc.gamma;
    if !(g > 0.0) {
        return Err(invalid("medium.eta", "the transfer-function route needs positive friction"));
    }
    if !(lambda > 0.0) {
        return Err(invalid("lambda", "the transfer-function route needs a stable mode"));
    }
    if !(dt_out > 0.0 && t_end >= 0.0) {
        return Err(invalid("time grid", "need dt_out > 0 and t_end ≥ 0"));
    }
    let windows = pulse.windows();
    let amp = scale * pulse.beta0;
    let w0sq = lambda / osc.a1;
    let band = (opts.min_band * w0sq.sqrt())
        .max((amp.abs() * windows.len() as f64 / (PI * osc.a1 * opts.abs_tol)).sqrt());
    let q = (dt_out * band / PI).ceil().max(1.0) as usize;
    let delta = dt_out / q as f64;
    let last = windows.iter().map(|w| w.1).fold(t_end, f64::max);
    let period_min = last + 36.0 / g;
    let n = ((period_min / delta).ceil() as usize).next_power_of_two();
    if n > opts.max_len {
        return Err(invalid("fourier grid", "required FFT length exceeds the configured limit"));
    }
    let period = n as f64 * delta;
    let d_omega = 2.0 * PI / period;
    let omega_max = PI / delta;

    let spectrum = |j: i64| {
        let w = j as f64 * d_omega;
        pulse_spectrum(w, pulse) * scale * transfer_function(w, lambda, coeffs)
    };
    let half = (n / 2) as i64;
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    let mut rate0 = 0.0;
    for j in -half..half {
        let v = spectrum(j);
        let idx = j.rem_euclid(n as i64) as usize;
        buf[idx] = v;
        let weight = if j == -half { 0.5 } else { 1.0 };
        rate0 += weight * (Complex64::new(0.0, j as f64 * d_omega) * v).re;
    }
    rate0 += 0.5 * (Complex64::new(0.0, half as f64 * d_omega) * spectrum(half)).re;
    let norm = d_omega / (2.0 * PI).sqrt();
    rate0 *= norm;
    // The ω⁻² tail of iωf̂R̂ from windows that switch on at t = 0.
    let starts_at_zero = windows.iter().filter(|w| w.0 == 0.0).count() as f64;
    rate0 -= starts_at_zero * amp / (PI * osc.a1 * omega_max);

    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let value0 = buf[0].re * norm;
    let a = w0 - value0;
    let b = w1 - rate0;
    let count = (t_end / dt_out + 1e-9).floor() as usize;
    Ok((0..=count)
        .map(|k| {
            let t = k as f64 * dt_out;
            buf[k * q].re * norm + osc.free(t, a, b).0
        })
        .collect())
}
