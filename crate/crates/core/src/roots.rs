//! Scalar root refinement shared by the eigenvalue solvers.

#[allow(unused_imports)]
use num_traits::Float;

/// Bisection on a bracket with `f(a)` and `f(b)` of opposite sign, followed by
/// one secant-Newton polish step that is kept only if it stays inside the
/// final bracket.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, rel_tol: f64) -> f64 {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= rel_tol * m.abs().max(1e-300) || m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    let m = 0.5 * (a + b);
    if fb != fa {
        let x = a - fa * (b - a) / (fb - fa);
        if x >= a.min(b) && x <= a.max(b) {
            return x;
        }
    }
    m
}
