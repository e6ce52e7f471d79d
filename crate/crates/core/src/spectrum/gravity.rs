//! Gravity eigenproblem at λ = 0: G'' + p(1 − z̄)G = 0 written in the
//! variable 1 − z̄ and solved by the Frobenius series
//! G = Σ (−p)ⁿ/cₙ (1 − z̄)³ⁿ, c₀ = 1, cₙ = 3n(3n − 1)cₙ₋₁.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::quad::{GaussLegendre, REL_TOL};
use crate::roots::bisect;
use crate::special::SeriesControl;
use crate::{error::invalid, Error, Result};

/// One root p_k of G(0; p) = 0 with its series coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct GravityMode {
    pub index: usize,
    pub p: f64,
    /// aₙ = (−p)ⁿ/cₙ, truncated once |aₙ| drops below the series tolerance.
    pub coeffs: Vec<f64>,
    /// ‖G_k‖² = ∫₀¹ (1 − z̄) G_k² dz̄.
    pub norm2_g: f64,
}

/// Coefficients (−p)ⁿ/cₙ. Because 0 ≤ 1 − z̄ ≤ 1 the truncation is uniform
/// on [0, 1].
pub fn g_coefficients(p: f64, ctrl: &SeriesControl) -> Result<Vec<f64>> {
    if !p.is_finite() {
        return Err(Error::Domain { func: "g_series", value: p });
    }
    let mut out = Vec::with_capacity(32);
    let mut a = 1.0;
    out.push(a);
    for n in 1..ctrl.max_terms {
        let nf = n as f64;
        let ratio = -p / (3.0 * nf * (3.0 * nf - 1.0));
        a *= ratio;
        if a == 0.0 {
            return Ok(out);
        }
        out.push(a);
        if a.abs() < ctrl.abs_tol && ratio.abs() < 1.0 {
            return Ok(out);
        }
    }
    Err(Error::SeriesTruncation {
        what: "g_series",
        terms: ctrl.max_terms,
    })
}

fn check_unit(z: f64, name: &'static str) -> Result<()> {
    if (0.0..=1.0).contains(&z) {
        Ok(())
    } else {
        Err(invalid(name, "must lie in [0, 1]"))
    }
}

/// G(z̄; p).
pub fn g_series(z: f64, p: f64, ctrl: &SeriesControl) -> Result<f64> {
    check_unit(z, "z")?;
    Ok(eval_g(&g_coefficients(p, ctrl)?, z))
}

/// Σ aₙ x³ⁿ with x = 1 − z̄, by Horner in x³.
fn eval_g(a: &[f64], z: f64) -> f64 {
    let x = 1.0 - z;
    let x3 = x * x * x;
    a.iter().rev().fold(0.0, |acc, &c| acc * x3 + c)
}

/// dG/dz̄ = −Σ 3n aₙ x³ⁿ⁻¹.
fn eval_g_dz(a: &[f64], z: f64) -> f64 {
    let x = 1.0 - z;
    let x3 = x * x * x;
    let mut acc = 0.0;
    for (n, &c) in a.iter().enumerate().skip(1).rev() {
        acc = acc * x3 + 3.0 * n as f64 * c;
    }
    // acc now holds Σ 3n aₙ x³⁽ⁿ⁻¹⁾
    -acc * x * x
}

/// Z̄(z̄) = ∫₀^z̄ G = Σ aₙ (1 − x³ⁿ⁺¹)/(3n + 1).
fn eval_z0(a: &[f64], z: f64) -> f64 {
    let x = 1.0 - z;
    let x3 = x * x * x;
    let mut tail = 0.0;
    let mut head = 0.0;
    for (n, &c) in a.iter().enumerate().rev() {
        let d = 3.0 * n as f64 + 1.0;
        tail = tail * x3 + c / d;
        head += c / d;
    }
    head - x * tail
}

/// Σ aₙ at z̄ = 0, the boundary function whose zeros are p_k.
fn boundary_value(p: f64, ctrl: &SeriesControl) -> Result<f64> {
    Ok(g_coefficients(p, ctrl)?.iter().sum())
}

/// First `k_max` roots of Σ (−1)ⁿ pⁿ/cₙ = 0 in ascending order.
pub fn gravity_eigenvalues(k_max: usize, ctrl: &SeriesControl) -> Result<Vec<GravityMode>> {
    if k_max == 0 {
        return Err(invalid("k_max", "must be at least 1"));
    }
    let step = 0.5;
    // WKB: (2/3)√p_k ≈ π(k − 1/4); scan a margin past the last expected root.
    let p_max = {
        let s = 1.5 * core::f64::consts::PI * (k_max as f64 + 1.0);
        s * s + 50.0
    };
    let mut roots = Vec::with_capacity(k_max);
    let mut lo = 0.0;
    let mut f_lo = boundary_value(lo, ctrl)?;
    while roots.len() < k_max && lo < p_max {
        let hi = lo + step;
        let f_hi = boundary_value(hi, ctrl)?;
        if f_lo == 0.0 || (f_lo < 0.0) != (f_hi < 0.0) {
            let r = bisect(|p| boundary_value(p, ctrl).unwrap_or(f64::NAN), lo, hi, 1e-14);
            roots.push(r);
        }
        lo = hi;
        f_lo = f_hi;
    }
    if roots.len() < k_max {
        return Err(Error::BracketNotFound {
            what: "gravity_eigenvalues",
            index: roots.len() + 1,
        });
    }
    let gl = GaussLegendre::default();
    roots
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let coeffs = g_coefficients(p, ctrl)?;
            let norm2_g = gl.integrate(
                |z| {
                    let g = eval_g(&coeffs, z);
                    (1.0 - z) * g * g
                },
                0.0,
                1.0,
                REL_TOL,
            )?;
            Ok(GravityMode {
                index: i + 1,
                p,
                coeffs,
                norm2_g,
            })
        })
        .collect()
}

impl GravityMode {
    /// Builds the mode data for an arbitrary `p` (not necessarily a root).
    pub fn from_p(index: usize, p: f64, ctrl: &SeriesControl) -> Result<Self> {
        let coeffs = g_coefficients(p, ctrl)?;
        let gl = GaussLegendre::default();
        let norm2_g = gl.integrate(
            |z| {
                let g = eval_g(&coeffs, z);
                (1.0 - z) * g * g
            },
            0.0,
            1.0,
            REL_TOL,
        )?;
        Ok(Self {
            index,
            p,
            coeffs,
            norm2_g,
        })
    }

    pub fn g(&self, z: f64) -> f64 {
        eval_g(&self.coeffs, z)
    }

    pub fn g_dz(&self, z: f64) -> f64 {
        eval_g_dz(&self.coeffs, z)
    }

    /// Z̄_k⁽⁰⁾(z̄).
    pub fn z0(&self, z: f64) -> f64 {
        eval_z0(&self.coeffs, z)
    }

    /// Σ aₙ/(3n+1) · [z̄²/2 − (1 − z̄)³ⁿ⁺³/((3n+2)(3n+3))], a second
    /// antiderivative of Z̄_k⁽⁰⁾ (it differs from ∫₀∫₀ Z̄ by an affine term).
    pub fn z0_second_antiderivative(&self, z: f64) -> f64 {
        let x = 1.0 - z;
        let mut s = 0.0;
        for (n, &c) in self.coeffs.iter().enumerate() {
            let m = 3 * n;
            let d1 = (m + 1) as f64;
            let d2 = (m + 2) as f64;
            let d3 = (m + 3) as f64;
            s += c / d1 * (0.5 * z * z - x.powi(m as i32 + 3) / (d2 * d3));
        }
        s
    }
}

/// Z̄_k⁽⁰⁾(z̄) for a computed gravity mode.
pub fn z0_mode(z: f64, mode: &GravityMode, _ctrl: &SeriesControl) -> Result<f64> {
    check_unit(z, "z")?;
    Ok(mode.z0(z))
}
