//! Post-processing of sampled tip signals.

/// Indices of strict interior local maxima of `x`.
fn local_maxima(x: &[f64]) -> Vec<usize> {
    (1..x.len().saturating_sub(1)).filter(|&i| x[i] > x[i - 1] && x[i] > x[i + 1]).collect()
}

/// Oscillation amplitude (max − min)/2 over consecutive windows
/// [k·period, (k+1)·period) that end no later than `t_max`.
pub fn window_amplitudes(times: &[f64], x: &[f64], period: f64, t_max: f64) -> Vec<f64> {
    let windows = (t_max / period + 1e-9).floor() as usize;
    let mut lo = vec![f64::INFINITY; windows];
    let mut hi = vec![f64::NEG_INFINITY; windows];
    for (&t, &v) in times.iter().zip(x) {
        let k = (t / period).floor() as usize;
        if k < windows {
            lo[k] = lo[k].min(v);
            hi[k] = hi[k].max(v);
        }
    }
    lo.iter().zip(&hi).filter(|(l, h)| h >= l).map(|(l, h)| 0.5 * (h - l)).collect()
}

/// Number of local maxima of the oscillation envelope before `t_max`, the
/// envelope being sampled once per `period`.
pub fn envelope_maxima(times: &[f64], x: &[f64], period: f64, t_max: f64) -> usize {
    local_maxima(&window_amplitudes(times, x, period, t_max)).len()
}

/// max |x| over each period [k·period, (k+1)·period) for k = 0..count.
pub fn period_peaks(times: &[f64], x: &[f64], period: f64, count: usize) -> Vec<f64> {
    let mut peaks = vec![0.0_f64; count];
    for (&t, &v) in times.iter().zip(x) {
        let k = (t / period).floor() as usize;
        if k < count {
            peaks[k] = peaks[k].max(v.abs());
        }
    }
    peaks
}

/// Least-squares slope of log|y| against log x.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.abs().ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
