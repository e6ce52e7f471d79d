//! Gauss-Legendre quadrature with uniform panel refinement.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Fixed-order Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the `n`-point rule by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let nf = n as f64;
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integral of `f` over [a, b] with a single application of the rule.
    pub fn apply<F: FnMut(f64) -> f64>(&self, f: &mut F, a: f64, b: f64) -> f64 {
        self.apply_with_abs(f, a, b).0
    }

    fn apply_with_abs<F: FnMut(f64) -> f64>(&self, f: &mut F, a: f64, b: f64) -> (f64, f64) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = 0.0;
        let mut sa = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(c + h * x);
            s += w * v;
            sa += w * v.abs();
        }
        (s * h, sa * h.abs())
    }

    /// Composite rule on `panels` equal sub-intervals; also returns ∫|f|.
    fn composite<F: FnMut(f64) -> f64>(&self, f: &mut F, a: f64, b: f64, panels: usize) -> (f64, f64) {
        let h = (b - a) / panels as f64;
        let mut s = 0.0;
        let mut sa = 0.0;
        for k in 0..panels {
            let lo = a + k as f64 * h;
            let hi = if k + 1 == panels { b } else { lo + h };
            let (v, va) = self.apply_with_abs(f, lo, hi);
            s += v;
            sa += va;
        }
        (s, sa)
    }

    /// Doubles the panel count until two successive estimates differ by less
    /// than `rel_tol` times ∫|f| (so integrals that vanish still terminate).
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
        self.integrate_floor(&mut f, a, b, rel_tol, 0.0)
    }

    /// As [`integrate`](Self::integrate), also accepting a change below
    /// `rel_tol * floor`.
    fn integrate_floor<F: FnMut(f64) -> f64>(&self, f: &mut F, a: f64, b: f64, rel_tol: f64, floor: f64) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        let (mut prev, _) = self.composite(f, a, b, 1);
        let mut panels = 1;
        let mut change = f64::INFINITY;
        while panels < MAX_PANELS {
            panels *= 2;
            let (cur, abs) = self.composite(f, a, b, panels);
            change = (cur - prev).abs();
            if change <= rel_tol * abs.max(floor) || change <= f64::MIN_POSITIVE {
                return Ok(cur);
            }
            prev = cur;
        }
        Err(Error::Quadrature {
            what: "gauss-legendre",
            change,
        })
    }

    /// [`integrate`](Self::integrate) over consecutive intervals between the
    /// sorted points in `breaks`. Pieces where the integrand is negligible
    /// are judged against ∫|f| over the whole range.
    pub fn integrate_pieces<F: FnMut(f64) -> f64>(&self, mut f: F, breaks: &[f64], rel_tol: f64) -> Result<f64> {
        let mut scale = 0.0;
        for w in breaks.windows(2) {
            if w[1] > w[0] {
                scale += self.composite(&mut f, w[0], w[1], 2).1;
            }
        }
        let mut total = 0.0;
        for w in breaks.windows(2) {
            if w[1] > w[0] {
                total += self.integrate_floor(&mut f, w[0], w[1], rel_tol, scale)?;
            }
        }
        Ok(total)
    }
}

const MAX_PANELS: usize = 1 << 12;

impl Default for GaussLegendre {
    fn default() -> Self {
        Self::new(64)
    }
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Default relative tolerance for projections and norms.
pub const REL_TOL: f64 = 1e-10;

/// Sorted, deduplicated break points inside [0, 1] including both ends.
pub(crate) fn unit_breaks(extra: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = Vec::with_capacity(extra.len() + 2);
    v.push(0.0);
    v.push(1.0);
    for &x in extra {
        if x > 0.0 && x < 1.0 {
            v.push(x);
        }
    }
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let gl = GaussLegendre::new(8);
        let v = gl.apply(&mut |x: f64| x.powi(15) + 3.0 * x * x, 0.0, 2.0);
        assert!((v - (2f64.powi(16) / 16.0 + 8.0)).abs() < 1e-10);
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 5, 64, 128] {
            let gl = GaussLegendre::new(n);
            let s: f64 = gl.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn refinement_handles_sharp_features() {
        let gl = GaussLegendre::default();
        let f = |x: f64| 1.0 / (1.0 + (200.0 * (0.37 - x)).exp());
        let exact = {
            let s = |x: f64| x + (1.0 + (200.0 * (0.37 - x)).exp()).ln() / 200.0;
            s(1.0) - s(0.0)
        };
        let v = gl.integrate(f, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - exact).abs() < 1e-11);
    }
}
