//! Finite-difference solver for the full rod equation
//! a₁u_tt + a₂u_t + u_zzzz + b(P_z u_z)_z = −(α_T ι/d₀)β(t)τ''(z),
//! P_z = M₀g(1 − z/L), used to cross-check the modal solutions.
//!
//! Space: five-point fourth difference with one ghost node behind the clamp
//! and two beyond the free end, and a conservative flux difference for the
//! weight term. At the free end the bending moment vanishes including its
//! thermal part, u_zz = −κτ and u_zzz = −κτ_z with κ = α_T ιβ/d₀; for
//! profiles that vanish at the tip this is the plain u_zz = u_zzz = 0.
//! Time: trapezoidal rule on (u, u_t), steps aligned with the pulse edges
//! and refined around them.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::{derive, DerivedCoefficients, Method, RodParameters, Trajectory};
use crate::forcing::{beta, PulseSpec, TemperatureProfile};
use crate::{error::invalid, Error, Result, GRAVITY};

/// Grid and stepping control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Grid points including both ends, at least 41.
    pub points: usize,
    /// Base time step, s.
    pub dt: f64,
    /// Upper bound for `dt`, s.
    pub dt_max: f64,
    /// Step used near pulse edges, s.
    pub edge_dt: f64,
    /// Half-width of the refined window around each edge, s.
    pub edge_window: f64,
    pub t_end: f64,
    pub dt_out: f64,
    /// Keep the weight term.
    pub gravity: bool,
    /// Keep viscous friction.
    pub friction: bool,
    /// Record the shape at every `shape_stride`-th node (0 disables shapes).
    pub shape_stride: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            points: 201,
            dt: 1e-4,
            dt_max: 4e-4,
            edge_dt: 1e-5,
            edge_window: 0.05,
            t_end: 3.2,
            dt_out: 1e-3,
            gravity: true,
            friction: true,
            shape_stride: 0,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.points < 41 {
            return Err(invalid("oracle.points", "need at least 41 grid points"));
        }
        if !(self.dt > 0.0 && self.dt <= self.dt_max) {
            return Err(invalid("oracle.dt", "need 0 < dt ≤ dt_max"));
        }
        if !(self.edge_dt > 0.0 && self.edge_window >= 0.0) {
            return Err(invalid("oracle.edge_dt", "need a positive edge step"));
        }
        if !(self.t_end >= 0.0 && self.dt_out > 0.0) {
            return Err(invalid("oracle.t_end", "need t_end ≥ 0 and dt_out > 0"));
        }
        Ok(())
    }
}

/// Initial displacement and velocity as functions of z in metres.
pub struct InitialShapes<'a> {
    pub u0: &'a dyn Fn(f64) -> f64,
    pub u1: &'a dyn Fn(f64) -> f64,
}

impl InitialShapes<'_> {
    pub fn at_rest() -> InitialShapes<'static> {
        InitialShapes { u0: &|_| 0.0, u1: &|_| 0.0 }
    }
}

/// Row-major band storage with room for pivoting fill-in.
#[derive(Debug, Clone)]
struct Banded {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
    pivots: Vec<usize>,
}

impl Banded {
    fn new(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self { n, kl, ku, width, data: alloc::vec![0.0; n * width], pivots: Vec::new() }
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.kl - i)
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.idx(i, j)]
    }

    fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    fn mul(&self, x: &[f64], out: &mut [f64]) {
        for i in 0..self.n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            out[i] = (lo..=hi).map(|j| self.get(i, j) * x[j]).sum();
        }
    }

    /// LU with partial pivoting, in place.
    fn factor(mut self) -> Result<Self> {
        let n = self.n;
        let reach = self.kl + self.ku;
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut piv = Vec::with_capacity(n);
        for k in 0..n {
            let last = (k + self.kl).min(n - 1);
            let mut p = k;
            for i in k + 1..=last {
                if self.get(i, k).abs() > self.get(p, k).abs() {
                    p = i;
                }
            }
            if self.get(p, k).abs() <= 1e-15 * scale {
                return Err(Error::Singular { what: "finite-difference system" });
            }
            piv.push(p);
            let cols = (k + reach).min(n - 1);
            if p != k {
                for j in k..=cols {
                    let (a, b) = (self.idx(k, j), self.idx(p, j));
                    self.data.swap(a, b);
                }
            }
            let d = self.get(k, k);
            for i in k + 1..=last {
                let l = self.get(i, k) / d;
                let ik = self.idx(i, k);
                self.data[ik] = l;
                if l != 0.0 {
                    for j in k + 1..=cols {
                        let v = self.get(k, j);
                        self.add(i, j, -l * v);
                    }
                }
            }
        }
        self.pivots = piv;
        Ok(self)
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        let reach = self.kl + self.ku;
        for k in 0..n {
            b.swap(k, self.pivots[k]);
            let last = (k + self.kl).min(n - 1);
            for i in k + 1..=last {
                b[i] -= self.get(i, k) * b[k];
            }
        }
        for i in (0..n).rev() {
            let hi = (i + reach).min(n - 1);
            let mut s = b[i];
            for j in i + 1..=hi {
                s -= self.get(i, j) * b[j];
            }
            b[i] = s / self.get(i, i);
        }
    }
}

/// Spatial operator on the free nodes z₁…z_K (the clamp node is fixed).
struct Operator {
    k: usize,
    h: f64,
    stiff: Banded,
    /// Right-hand side per kelvin of β.
    thermal: Vec<f64>,
}

impl Operator {
    fn new(coeffs: &DerivedCoefficients, profile: &TemperatureProfile, points: usize, gravity: bool) -> Self {
        let p = &coeffs.params;
        let k = points - 1;
        let h = p.length / k as f64;
        let h4 = h.powi(4);
        let mut s = Banded::new(k, 2, 2);
        // rows/cols are node index − 1
        let put = |row: usize, node: isize, v: f64, s: &mut Banded| {
            if node >= 1 {
                s.add(row - 1, node as usize - 1, v);
            }
        };
        for i in 1..=k {
            let stencil: [(isize, f64); 5] = if i == 1 {
                [(1, 7.0), (2, -4.0), (3, 1.0), (0, 0.0), (0, 0.0)]
            } else if i == k {
                [(k as isize - 2, 2.0), (k as isize - 1, -4.0), (k as isize, 2.0), (0, 0.0), (0, 0.0)]
            } else if i == k - 1 {
                let c = i as isize;
                [(c - 2, 1.0), (c - 1, -4.0), (c, 5.0), (c + 1, -2.0), (0, 0.0)]
            } else {
                let c = i as isize;
                [(c - 2, 1.0), (c - 1, -4.0), (c, 6.0), (c + 1, -4.0), (c + 2, 1.0)]
            };
            for (node, v) in stencil {
                if v != 0.0 {
                    put(i, node, v / h4, &mut s);
                }
            }
        }
        let pz = |z: f64| coeffs.m0 * GRAVITY * (1.0 - z / p.length);
        let b = coeffs.b;
        if gravity {
            for i in 1..=k {
                let zi = i as f64 * h;
                let (pl, pr) = (pz(zi - 0.5 * h), pz(zi + 0.5 * h));
                let c = b / (h * h);
                if i < k {
                    put(i, i as isize - 1, c * pl, &mut s);
                    put(i, i as isize, -c * (pl + pr), &mut s);
                    put(i, i as isize + 1, c * pr, &mut s);
                } else {
                    // ghost u_{K+1} = 2u_K − u_{K−1} + h²u_zz(L)
                    put(i, i as isize - 1, c * (pl - pr), &mut s);
                    put(i, i as isize, c * (pr - pl), &mut s);
                }
            }
        }
        let kappa = p.alpha_t * p.iota / p.d0;
        let tau: Vec<f64> = (0..=k).map(|i| profile.value(i as f64 / k as f64)).collect();
        let mut thermal = alloc::vec![0.0; k];
        for i in 1..k {
            thermal[i - 1] = -kappa * (tau[i + 1] - 2.0 * tau[i] + tau[i - 1]) / (h * h);
        }
        // free end: u_zz(L) = −κτ(L); u_zzz(L) = −κτ_z(L) cancels against the
        // one-sided curvature of τ at the tip node
        let m2 = -kappa * tau[k];
        thermal[k - 2] += -m2 / (h * h);
        thermal[k - 1] = -2.0 * kappa * tau[k - 1] / (h * h);
        if gravity {
            let pr = pz(p.length + 0.5 * h);
            thermal[k - 1] -= b * pr * m2;
        }
        Self { k, h, stiff: s, thermal }
    }

    fn apply(&self, u: &[f64], out: &mut [f64]) {
        self.stiff.mul(u, out);
    }

    /// Quadrature weight of node i (1-based): half at the tip.
    fn weight(&self, i: usize) -> f64 {
        if i == self.k {
            0.5 * self.h
        } else {
            self.h
        }
    }
}

/// Discrete energy ½a₁Σwᵢvᵢ² + ½Σwᵢuᵢ(Ku)ᵢ (kinetic, bending and weight).
fn energy(op: &Operator, a1: f64, u: &[f64], v: &[f64], scratch: &mut [f64]) -> f64 {
    op.apply(u, scratch);
    let mut e = 0.0;
    for i in 0..op.k {
        let w = op.weight(i + 1);
        e += 0.5 * w * (a1 * v[i] * v[i] + u[i] * scratch[i]);
    }
    e
}

/// Step schedule: (start, end, dt) segments aligned with the pulse edges.
fn schedule(pulse: &PulseSpec, oc: &OracleConfig) -> Vec<(f64, f64, f64)> {
    let mut marks: Vec<f64> = alloc::vec![0.0, oc.t_end];
    let mut refined: Vec<(f64, f64)> = Vec::new();
    for e in pulse.edges() {
        if e > 0.0 && e < oc.t_end {
            marks.push(e);
        }
        if e <= oc.t_end && oc.edge_window > 0.0 {
            let (a, b) = ((e - oc.edge_window).max(0.0), (e + oc.edge_window).min(oc.t_end));
            if b > a {
                marks.push(a);
                marks.push(b);
                refined.push((a, b));
            }
        }
    }
    marks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    marks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let base = oc.dt.min(oc.dt_max);
    marks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            let fine = refined.iter().any(|&(a, b)| mid > a && mid < b);
            let target = if fine { oc.edge_dt.min(base) } else { base };
            let n = ((w[1] - w[0]) / target).ceil().max(1.0);
            (w[0], w[1], (w[1] - w[0]) / n)
        })
        .collect()
}

/// Cubic Hermite interpolation on [0, dt] at s.
fn hermite(u0: f64, v0: f64, u1: f64, v1: f64, dt: f64, s: f64) -> f64 {
    let x = s / dt;
    let h00 = (1.0 + 2.0 * x) * (1.0 - x) * (1.0 - x);
    let h10 = x * (1.0 - x) * (1.0 - x);
    let h01 = x * x * (3.0 - 2.0 * x);
    let h11 = x * x * (x - 1.0);
    h00 * u0 + h10 * dt * v0 + h01 * u1 + h11 * dt * v1
}

/// Result of [`fd_solve`] with the energy history at output times.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRun {
    pub trajectory: Trajectory,
    /// Discrete energy after every step.
    pub energy: Vec<f64>,
    pub steps: usize,
}

/// Integrates the rod equation on [0, t_end]; output at k·dt_out.
pub fn fd_solve(
    params: &RodParameters,
    profile: &TemperatureProfile,
    pulse: &PulseSpec,
    ic: &InitialShapes<'_>,
    oc: &OracleConfig,
) -> Result<OracleRun> {
    oc.validate()?;
    pulse.validate()?;
    let mut coeffs = derive(params)?;
    if !oc.friction {
        coeffs = coeffs.without_friction();
    }
    let op = Operator::new(&coeffs, profile, oc.points, oc.gravity);
    let (k, h) = (op.k, op.h);
    let (a1, a2) = (coeffs.a1, coeffs.a2);
    let mut u: Vec<f64> = (1..=k).map(|i| (ic.u0)(i as f64 * h)).collect();
    let mut v: Vec<f64> = (1..=k).map(|i| (ic.u1)(i as f64 * h)).collect();
    let mut ku = alloc::vec![0.0; k];
    let mut rhs = alloc::vec![0.0; k];

    let n_out = (oc.t_end / oc.dt_out + 1e-9).floor() as usize;
    let out_times: Vec<f64> = (0..=n_out).map(|j| j as f64 * oc.dt_out).collect();
    let stride = oc.shape_stride;
    let shape_nodes: Vec<usize> = if stride > 0 { (0..=k).step_by(stride).collect() } else { Vec::new() };
    let sample = |u: &[f64], node: usize| if node == 0 { 0.0 } else { u[node - 1] };
    let mut tip = Vec::with_capacity(out_times.len());
    let mut shapes: Vec<Vec<f64>> = Vec::new();
    tip.push(u[k - 1]);
    if stride > 0 {
        shapes.push(shape_nodes.iter().map(|&n| sample(&u, n)).collect());
    }
    let mut next_out = 1;

    let mut energies = alloc::vec![energy(&op, a1, &u, &v, &mut ku)];
    let mut cache: Vec<(u64, Banded)> = Vec::new();
    let mut steps = 0;
    let mut t = 0.0;
    for (start, end, dt) in schedule(pulse, oc) {
        let key = dt.to_bits();
        if !cache.iter().any(|(b, _)| *b == key) {
            let mut m = op.stiff.clone();
            let diag = 4.0 * a1 / (dt * dt) + 2.0 * a2 / dt;
            for i in 0..k {
                m.add(i, i, diag);
            }
            cache.push((key, m.factor()?));
        }
        let lu = &cache.iter().find(|(b, _)| *b == key).unwrap().1;
        let n = ((end - start) / dt).round() as usize;
        for s in 0..n {
            let t0 = start + s as f64 * dt;
            let t1 = if s + 1 == n { end } else { t0 + dt };
            let bmid = beta(0.5 * (t0 + t1), pulse);
            op.apply(&u, &mut ku);
            for i in 0..k {
                rhs[i] = 4.0 * a1 / dt * v[i] - 2.0 * ku[i] + 2.0 * bmid * op.thermal[i];
            }
            lu.solve(&mut rhs);
            let u_old_tip = u[k - 1];
            let v_old_tip = v[k - 1];
            let old_shape: Vec<f64> = if stride > 0 && next_out < out_times.len() && out_times[next_out] <= t1 + 1e-12 {
                shape_nodes.iter().map(|&nd| sample(&u, nd)).chain(shape_nodes.iter().map(|&nd| sample(&v, nd))).collect()
            } else {
                Vec::new()
            };
            for i in 0..k {
                u[i] += rhs[i];
                v[i] = 2.0 * rhs[i] / dt - v[i];
            }
            steps += 1;
            if !u[k - 1].is_finite() || u[k - 1].abs() > 1e3 * params.length {
                return Err(Error::Divergence { time: t1 });
            }
            energies.push(energy(&op, a1, &u, &v, &mut ku));
            while next_out < out_times.len() && out_times[next_out] <= t1 + 1e-12 {
                let so = (out_times[next_out] - t0).clamp(0.0, t1 - t0);
                tip.push(hermite(u_old_tip, v_old_tip, u[k - 1], v[k - 1], t1 - t0, so));
                if stride > 0 {
                    let m = shape_nodes.len();
                    shapes.push(
                        shape_nodes
                            .iter()
                            .enumerate()
                            .map(|(j, &nd)| hermite(old_shape[j], old_shape[m + j], sample(&u, nd), sample(&v, nd), t1 - t0, so))
                            .collect(),
                    );
                }
                next_out += 1;
            }
            t = t1;
        }
    }
    let _ = t;
    let z_grid = shape_nodes.iter().map(|&n| n as f64 / k as f64).collect();
    Ok(OracleRun {
        trajectory: Trajectory {
            times: out_times,
            tip,
            z_grid,
            shapes: (stride > 0).then_some(shapes),
            modal: None,
            method: Method::Oracle,
            mode_count: 0,
        },
        energy: energies,
        steps,
    })
}

/// Steady bend on the grid with its conditioning.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticShape {
    /// Node positions, m.
    pub z: Vec<f64>,
    pub u: Vec<f64>,
    /// Eigenvalue of L⁴·(operator) closest to zero.
    pub min_eigenvalue: f64,
    /// ‖A‖∞ / |min eigenvalue|, a lower estimate of the condition number.
    pub condition: f64,
}

/// Below this |λ̄|, the static operator is treated as singular.
pub const SINGULAR_EIGENVALUE: f64 = 1e-3 * 12.362_363_7;

/// Solves u_zzzz + b(P_z u_z)_z = f̄(z) with heating ι·β₀ held constant.
pub fn fd_static(params: &RodParameters, profile: &TemperatureProfile, beta0: f64, points: usize, gravity: bool) -> Result<StaticShape> {
    if points < 41 {
        return Err(invalid("oracle.points", "need at least 41 grid points"));
    }
    let coeffs = derive(params)?;
    let op = Operator::new(&coeffs, profile, points, gravity);
    let k = op.k;
    let lu = op.stiff.clone().factor()?;
    let l4 = params.length.powi(4);
    // inverse iteration for the eigenvalue nearest zero
    let mut x: Vec<f64> = (1..=k).map(|i| (i as f64 / k as f64).powi(2)).collect();
    let mut mu = 0.0;
    for _ in 0..60 {
        let mut y = x.clone();
        lu.solve(&mut y);
        let xy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let xx: f64 = x.iter().map(|a| a * a).sum();
        mu = xx / xy;
        let ny = y.iter().map(|a| a * a).sum::<f64>().sqrt();
        x = y.iter().map(|a| a / ny).collect();
    }
    let min_eig = mu * l4;
    if min_eig.abs() < SINGULAR_EIGENVALUE {
        return Err(Error::Singular { what: "static operator at a gravity eigenvalue" });
    }
    let norm_inf = (0..k)
        .map(|i| {
            let lo = i.saturating_sub(2);
            let hi = (i + 2).min(k - 1);
            (lo..=hi).map(|j| op.stiff.get(i, j).abs()).sum::<f64>()
        })
        .fold(0.0, f64::max);
    let mut rhs: Vec<f64> = op.thermal.iter().map(|r| r * beta0).collect();
    lu.solve(&mut rhs);
    let mut u = alloc::vec![0.0];
    u.extend_from_slice(&rhs);
    Ok(StaticShape {
        z: (0..=k).map(|i| i as f64 * op.h).collect(),
        u,
        min_eigenvalue: min_eig,
        condition: norm_inf / mu.abs(),
    })
}
