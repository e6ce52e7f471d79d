//! General eigenproblem Φ'''' + p((1 − z̄)Φ')' = λ̄Φ with clamped-free ends,
//! solved by the Frobenius expansion Φ = Σ εₙ (1 − z̄)ⁿ.
//!
//! With x = 1 − z̄ the free-end conditions at x = 0 force ε₂ = ε₃ = 0 and
//! leave ε₀ = 1 and ε₁ free. Writing Φ = A + ε₁B, where A and B are the
//! series seeded by (1, 0, 0, 0) and (0, 1, 0, 0), the clamped conditions at
//! x = 1 give the eigenvalue condition A(1)B'(1) − A'(1)B(1) = 0. This form
//! has no poles, so every sign change of it on the scan grid brackets an
//! eigenvalue.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::quad::{GaussLegendre, REL_TOL};
use crate::roots::bisect;
use crate::special::SeriesControl;
use crate::{error::invalid, Error, Result};

/// One eigenpair λ̄_k(p), Φ_k.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralMode {
    pub index: usize,
    pub p: f64,
    pub lambda_bar: f64,
    pub eps1: f64,
    /// Series coefficients; eps[0] = 1, eps[2] = eps[3] = 0.
    pub eps: Vec<f64>,
    /// ∫₀¹ Φ_k² dz̄.
    pub norm2: f64,
}

/// Frobenius coefficients ε₀..ε_{n−1} for given p, λ̄ and ε₁.
pub fn frobenius_eps(p: f64, lambda_bar: f64, eps1: f64, n: usize) -> Vec<f64> {
    let n = n.max(4);
    let mut e = Vec::with_capacity(n);
    e.extend_from_slice(&[1.0, eps1, 0.0, 0.0]);
    extend_recurrence(&mut e, p, lambda_bar, n);
    e
}

/// εₙ = [λ̄ εₙ₋₄ − p (n − 3)² εₙ₋₃] · (n − 4)!/n!.
fn extend_recurrence(e: &mut Vec<f64>, p: f64, lambda_bar: f64, n: usize) {
    while e.len() < n {
        let k = e.len();
        let kf = k as f64;
        let denom = kf * (kf - 1.0) * (kf - 2.0) * (kf - 3.0);
        let m = kf - 3.0;
        let v = (lambda_bar * e[k - 4] - p * m * m * e[k - 3]) / denom;
        e.push(v);
    }
}

/// The A and B series, grown until four consecutive coefficients of both are
/// negligible.
fn seed_pair(p: f64, lambda_bar: f64, ctrl: &SeriesControl) -> Result<(Vec<f64>, Vec<f64>)> {
    let scale = 1f64.max(lambda_bar.abs()).max(p.abs());
    let mut a = alloc::vec![1.0, 0.0, 0.0, 0.0];
    let mut b = alloc::vec![0.0, 1.0, 0.0, 0.0];
    let floor = 40;
    let limit = ctrl.max_terms.max(floor + 4);
    let mut quiet = 0;
    while a.len() < limit {
        let n = a.len() + 1;
        extend_recurrence(&mut a, p, lambda_bar, n);
        extend_recurrence(&mut b, p, lambda_bar, n);
        let k = a.len() - 1;
        if (a[k].abs() + b[k].abs()) * scale < 1e-16 * (1.0 + peak(&a).max(peak(&b))) {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if a.len() >= floor && quiet >= 4 {
            return Ok((a, b));
        }
    }
    Err(Error::SeriesTruncation {
        what: "frobenius_eps",
        terms: limit,
    })
}

fn peak(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// (value, d/dx) of Σ cₙ xⁿ at x = 1.
fn at_clamp(c: &[f64]) -> (f64, f64) {
    let mut v = 0.0;
    let mut d = 0.0;
    for (n, &x) in c.iter().enumerate() {
        v += x;
        d += n as f64 * x;
    }
    (v, d)
}

struct Clamp {
    det: f64,
    a: (f64, f64),
    b: (f64, f64),
}

fn clamp_condition(p: f64, lambda_bar: f64, ctrl: &SeriesControl) -> Result<Clamp> {
    let (sa, sb) = seed_pair(p, lambda_bar, ctrl)?;
    let a = at_clamp(&sa);
    let b = at_clamp(&sb);
    Ok(Clamp {
        det: a.0 * b.1 - a.1 * b.0,
        a,
        b,
    })
}

/// Sign of the eigenvalue condition at λ̄, exposed for diagnostics.
pub fn characteristic(p: f64, lambda_bar: f64, ctrl: &SeriesControl) -> Result<f64> {
    Ok(clamp_condition(p, lambda_bar, ctrl)?.det)
}

/// ε₁ from whichever of the two clamped conditions is better conditioned.
fn eps1_at(p: f64, lambda_bar: f64, ctrl: &SeriesControl) -> Result<f64> {
    let c = clamp_condition(p, lambda_bar, ctrl)?;
    let (a0, a1) = c.a;
    let (b0, b1) = c.b;
    let r0 = b0.abs() / (a0.abs() + b0.abs()).max(f64::MIN_POSITIVE);
    let r1 = b1.abs() / (a1.abs() + b1.abs()).max(f64::MIN_POSITIVE);
    if r0.max(r1) < 1e-12 {
        return Err(Error::IllConditioned {
            what: "general_eigenvalues: ε₁ denominators",
            value: lambda_bar,
        });
    }
    Ok(if r0 >= r1 { -a0 / b0 } else { -a1 / b1 })
}

/// Scan step proportional to the local eigenvalue spacing 4π|λ̄|^{3/4}.
fn scan_step(lambda_bar: f64) -> f64 {
    0.02 * 4.0 * core::f64::consts::PI * lambda_bar.abs().max(1.0).powf(0.75)
}

fn scan_roots(
    p: f64,
    from: f64,
    to: f64,
    max_roots: usize,
    ctrl: &SeriesControl,
) -> Result<Vec<f64>> {
    let mut roots = Vec::new();
    let mut lo = from;
    let mut f_lo = characteristic(p, lo, ctrl)?;
    while lo < to && roots.len() < max_roots {
        let hi = (lo + scan_step(lo)).min(to);
        let f_hi = characteristic(p, hi, ctrl)?;
        if f_hi == 0.0 && hi < to {
            roots.push(hi);
        } else if f_lo != 0.0 && (f_lo < 0.0) != (f_hi < 0.0) {
            let r = bisect(
                |l| characteristic(p, l, ctrl).unwrap_or(f64::NAN),
                lo,
                hi,
                1e-13,
            );
            roots.push(r);
        }
        lo = hi;
        f_lo = f_hi;
    }
    Ok(roots)
}

/// All negative eigenvalues at `p`, ascending. Below −10p² the quadratic
/// form of the operator is positive, so the scan range is exhaustive.
pub fn negative_eigenvalues(p: f64, ctrl: &SeriesControl) -> Result<Vec<f64>> {
    if p <= 0.0 {
        return Ok(Vec::new());
    }
    let from = -10.0 * p * p - 1.0;
    scan_roots(p, from, 0.0, usize::MAX, ctrl)
}

/// Number of eigenvalues λ̄_k(p) < 0.
pub fn count_unstable(p: f64) -> Result<usize> {
    Ok(negative_eigenvalues(p, &SeriesControl::default())?.len())
}

/// The first `k_max` eigenpairs in ascending order of λ̄, negative ones first.
pub fn general_eigenvalues(p: f64, k_max: usize, ctrl: &SeriesControl) -> Result<Vec<GeneralMode>> {
    if k_max == 0 {
        return Err(invalid("k_max", "must be at least 1"));
    }
    if !p.is_finite() {
        return Err(Error::Domain {
            func: "general_eigenvalues",
            value: p,
        });
    }
    let mut lambdas = negative_eigenvalues(p, ctrl)?;
    lambdas.truncate(k_max);
    let need = k_max - lambdas.len();
    if need > 0 {
        // Positive branch: α⁴ with α ≈ π(k − 1/2) for small p, shifted by at
        // most the gravity term; scan with generous headroom.
        let alpha = core::f64::consts::PI * (need as f64 + 1.5);
        let top = (alpha.powi(4) + 10.0 * p.abs() * alpha * alpha + 100.0) * 2.0;
        let pos = scan_roots(p, 0.0, top, need, ctrl)?;
        if pos.len() < need {
            return Err(Error::BracketNotFound {
                what: "general_eigenvalues",
                index: lambdas.len() + pos.len() + 1,
            });
        }
        lambdas.extend(pos);
    }
    lambdas
        .into_iter()
        .enumerate()
        .map(|(i, l)| GeneralMode::build(i + 1, p, l, ctrl))
        .collect()
}

impl GeneralMode {
    /// Assembles the mode at a known eigenvalue.
    pub fn build(index: usize, p: f64, lambda_bar: f64, ctrl: &SeriesControl) -> Result<Self> {
        let eps1 = eps1_at(p, lambda_bar, ctrl)?;
        let (a, b) = seed_pair(p, lambda_bar, ctrl)?;
        let eps: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + eps1 * y).collect();
        let mut mode = Self {
            index,
            p,
            lambda_bar,
            eps1,
            eps,
            norm2: 0.0,
        };
        let gl = GaussLegendre::default();
        mode.norm2 = gl.integrate(
            |z| {
                let v = mode.derivative(0, z);
                v * v
            },
            0.0,
            1.0,
            REL_TOL,
        )?;
        Ok(mode)
    }

    /// d^k Φ/dz̄^k at z̄ for k in 0..=4.
    pub fn derivative(&self, k: usize, z: f64) -> f64 {
        let x = 1.0 - z;
        let mut acc = 0.0;
        for (n, &c) in self.eps.iter().enumerate().skip(k).rev() {
            let mut f = 1.0;
            for j in 0..k {
                f *= (n - j) as f64;
            }
            acc = acc * x + f * c;
        }
        if k % 2 == 1 {
            -acc
        } else {
            acc
        }
    }

    pub fn value(&self, z: f64) -> f64 {
        self.derivative(0, z)
    }

    /// L_p Φ − λ̄Φ at z̄.
    pub fn residual(&self, z: f64) -> f64 {
        // ((1 − z̄)Φ')' = (1 − z̄)Φ'' − Φ'
        let d1 = self.derivative(1, z);
        let d2 = self.derivative(2, z);
        let d4 = self.derivative(4, z);
        d4 + self.p * ((1.0 - z) * d2 - d1) - self.lambda_bar * self.value(z)
    }
}
