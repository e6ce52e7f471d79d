//! Flat `section.key = value` configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Every key has a
//! default, so an empty file runs the default scenario on the default rod.

use std::fmt::Write as _;
use std::str::FromStr;

use fuelrod_core::dynamics::RodParameters;
use fuelrod_core::forcing::{EllProfile, PulseKind, PulseSpec, TemperatureProfile};
use fuelrod_core::special::SeriesControl;
use fuelrod_core::spectrum::gravity_eigenvalues;
use fuelrod_core::GRAVITY;

use crate::error::{CliError, CliResult};

/// One documented configuration key.
#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub key: &'static str,
    pub default: &'static str,
    pub doc: &'static str,
}

const fn k(key: &'static str, default: &'static str, doc: &'static str) -> KeySpec {
    KeySpec { key, default, doc }
}

/// Every accepted key with its default and a short description.
pub const KEYS: &[KeySpec] = &[
    k("scenario.name", "step-pulse", "modes, bifurcation-sweep, static, lambda0, step-pulse, instant-pulse, periodic, oracle-compare or beats"),
    k("geometry.L_m", "1", "rod length, m"),
    k("geometry.d0_m", "0.017", "outer diameter, m"),
    k("geometry.wall_m", "0.00045", "wall thickness, m"),
    k("geometry.M0_kg", "auto", "total mass, kg; auto uses rho*S*L"),
    k("material.rho_kg_m3", "7950", "density, kg/m^3"),
    k("material.E_Pa", "200000000000", "Young's modulus, Pa"),
    k("material.alphaT_perK", "0.0000173", "linear thermal expansion, 1/K"),
    k("medium.eta", "11.24", "viscous friction, N*s/m^3"),
    k("medium.iota", "0.05", "wall-to-mean temperature ratio"),
    k("pulse.kind", "step", "step (single pulse) or train"),
    k("pulse.dt_s", "1", "pulse length, s"),
    k("pulse.beta0_K", "20", "pulse amplitude, K"),
    k("pulse.nu", "0", "duty parameter; the period is (nu+1)*dt_s"),
    k("pulse.count", "0", "index of the last pulse in a train (count+1 pulses)"),
    k("pulse.zeta", "0", "initial-velocity factor of the instant-pulse start"),
    k("pulse.reaction_s", "auto", "material reaction time of the instant-pulse start, s; auto is dt_s/100"),
    k("pulse.kappa0", "0", "pre-existing cooling rate in the lambda0 scenario"),
    k("profile.kind", "logistic", "logistic, rect, uniform or ell"),
    k("profile.upsilon", "100", "logistic steepness"),
    k("profile.z1", "0.3", "lower edge of the heated zone, fraction of L"),
    k("profile.z2", "0.7", "upper edge of the heated zone, fraction of L"),
    k("profile.level", "1", "value of the uniform profile"),
    k("profile.ell", "1", "gravity mode index of the ell profile and of the lambda0 scenario"),
    k("solver.modes", "8", "number of spatial modes"),
    k("solver.basis", "general", "general (gravity-loaded) or krylov (weightless) modes"),
    k("solver.method", "closed-form", "closed-form, green or fourier"),
    k("solver.rel_tol", "0.00001", "truncation tolerance of the green and fourier methods, relative to the static amplitude"),
    k("solver.t_end_s", "3.2", "simulated horizon, s"),
    k("solver.dt_out_s", "0.001", "output sampling step, s"),
    k("solver.p", "auto", "gravity parameter override; auto derives it from M0"),
    k("solver.write_modal", "false", "append modal coefficient columns w_1..w_N to trajectory.csv"),
    k("solver.shape_points", "101", "samples along the rod in shape.csv"),
    k("solver.shape_every_s", "0.1", "time between shape snapshots of dynamic scenarios, s"),
    k("solver.sweep_p_min", "0", "first p of the bifurcation sweep"),
    k("solver.sweep_p_max", "300", "last p of the bifurcation sweep"),
    k("solver.sweep_p_step", "1", "p increment of the bifurcation sweep"),
    k("solver.fd_points", "401", "finite-difference grid points"),
    k("solver.fd_dt_s", "0.00001", "finite-difference base step, s"),
    k("solver.fd_dt_max_s", "0.0004", "upper bound of the finite-difference step, s"),
    k("solver.fd_edge_dt_s", "0.00001", "finite-difference step near pulse edges, s"),
    k("solver.fd_edge_window_s", "0.05", "half-width of the refined window around pulse edges, s"),
    k("solver.fd_gravity", "true", "keep the weight term in the finite-difference run"),
    k("solver.fd_friction", "true", "keep viscous friction in the finite-difference run"),
];

/// Named scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Modes,
    BifurcationSweep,
    Static,
    Lambda0,
    StepPulse,
    InstantPulse,
    Periodic,
    OracleCompare,
    Beats,
}

impl Scenario {
    pub const ALL: [Scenario; 9] = [
        Scenario::Modes,
        Scenario::BifurcationSweep,
        Scenario::Static,
        Scenario::Lambda0,
        Scenario::StepPulse,
        Scenario::InstantPulse,
        Scenario::Periodic,
        Scenario::OracleCompare,
        Scenario::Beats,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Modes => "modes",
            Scenario::BifurcationSweep => "bifurcation-sweep",
            Scenario::Static => "static",
            Scenario::Lambda0 => "lambda0",
            Scenario::StepPulse => "step-pulse",
            Scenario::InstantPulse => "instant-pulse",
            Scenario::Periodic => "periodic",
            Scenario::OracleCompare => "oracle-compare",
            Scenario::Beats => "beats",
        }
    }
}

impl FromStr for Scenario {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Scenario::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("expected one of {}", Scenario::ALL.map(|c| c.name()).join(", ")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Logistic,
    Rect,
    Uniform,
    Ell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    General,
    Krylov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    ClosedForm,
    Green,
    Fourier,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileConfig {
    pub kind: ProfileKind,
    pub upsilon: f64,
    pub z1: f64,
    pub z2: f64,
    pub level: f64,
    pub ell: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub modes: usize,
    pub basis: Basis,
    pub method: SolveMethod,
    pub rel_tol: f64,
    pub t_end: f64,
    pub dt_out: f64,
    pub p: Option<f64>,
    pub write_modal: bool,
    pub shape_points: usize,
    pub shape_every: f64,
    pub sweep_p_min: f64,
    pub sweep_p_max: f64,
    pub sweep_p_step: f64,
    pub fd_points: usize,
    pub fd_dt: f64,
    pub fd_dt_max: f64,
    pub fd_edge_dt: f64,
    pub fd_edge_window: f64,
    pub fd_gravity: bool,
    pub fd_friction: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    pub scenario: Scenario,
    pub rod: RodParameters,
    pub pulse: PulseSpec,
    pub zeta: f64,
    pub reaction: Option<f64>,
    pub kappa0: f64,
    pub profile: ProfileConfig,
    pub solver: SolverConfig,
}

impl Default for Config {
    fn default() -> Self {
        let mut c = Config {
            scenario: Scenario::StepPulse,
            rod: RodParameters::default(),
            pulse: PulseSpec::default(),
            zeta: 0.0,
            reaction: None,
            kappa0: 0.0,
            profile: ProfileConfig { kind: ProfileKind::Logistic, upsilon: 0.0, z1: 0.0, z2: 0.0, level: 0.0, ell: 1 },
            solver: SolverConfig {
                modes: 1,
                basis: Basis::General,
                method: SolveMethod::ClosedForm,
                rel_tol: 0.0,
                t_end: 0.0,
                dt_out: 0.0,
                p: None,
                write_modal: false,
                shape_points: 0,
                shape_every: 0.0,
                sweep_p_min: 0.0,
                sweep_p_max: 0.0,
                sweep_p_step: 0.0,
                fd_points: 0,
                fd_dt: 0.0,
                fd_dt_max: 0.0,
                fd_edge_dt: 0.0,
                fd_edge_window: 0.0,
                fd_gravity: true,
                fd_friction: true,
            },
        };
        for entry in KEYS {
            c.set(entry.key, entry.default, 0).expect("documented default must parse");
        }
        c
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> CliResult<T>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| CliError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        line,
        reason: e.to_string(),
    })
}

fn parse_optional(key: &str, value: &str, line: usize) -> CliResult<Option<f64>> {
    if value == "auto" {
        Ok(None)
    } else {
        parse_value(key, value, line).map(Some)
    }
}

fn parse_choice<T: Copy>(key: &str, value: &str, line: usize, choices: &[(&str, T)]) -> CliResult<T> {
    choices
        .iter()
        .find(|(name, _)| *name == value)
        .map(|&(_, v)| v)
        .ok_or_else(|| CliError::BadValue {
            key: key.to_string(),
            value: value.to_string(),
            line,
            reason: format!("expected one of {}", choices.iter().map(|c| c.0).collect::<Vec<_>>().join(", ")),
        })
}

const PROFILE_KINDS: [(&str, ProfileKind); 4] = [
    ("logistic", ProfileKind::Logistic),
    ("rect", ProfileKind::Rect),
    ("uniform", ProfileKind::Uniform),
    ("ell", ProfileKind::Ell),
];
const BASES: [(&str, Basis); 2] = [("general", Basis::General), ("krylov", Basis::Krylov)];
const METHODS: [(&str, SolveMethod); 3] = [
    ("closed-form", SolveMethod::ClosedForm),
    ("green", SolveMethod::Green),
    ("fourier", SolveMethod::Fourier),
];
const PULSE_KINDS: [(&str, PulseKind); 2] = [("step", PulseKind::Step), ("train", PulseKind::Train)];

fn name_of<T: PartialEq + Copy>(choices: &[(&'static str, T)], v: T) -> &'static str {
    choices.iter().find(|c| c.1 == v).map(|c| c.0).unwrap_or("?")
}

fn optional_text(v: Option<f64>) -> String {
    v.map_or_else(|| "auto".to_string(), |x| x.to_string())
}

impl Config {
    /// Parses a whole configuration file on top of the defaults.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut cfg = Config::default();
        let mut seen: Vec<&str> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or(CliError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            let entry = KEYS.iter().find(|s| s.key == key).ok_or_else(|| CliError::UnknownKey {
                key: key.to_string(),
                line,
            })?;
            if seen.contains(&entry.key) {
                return Err(CliError::Duplicate { key: key.to_string(), line });
            }
            seen.push(entry.key);
            cfg.set(entry.key, value, line)?;
        }
        Ok(cfg)
    }

    /// Assigns one key; `line` is used for error messages.
    pub fn set(&mut self, key: &str, value: &str, line: usize) -> CliResult<()> {
        let f = |v: &str| parse_value::<f64>(key, v, line);
        let n = |v: &str| parse_value::<usize>(key, v, line);
        let b = |v: &str| parse_value::<bool>(key, v, line);
        match key {
            "scenario.name" => self.scenario = parse_value(key, value, line)?,
            "geometry.L_m" => self.rod.length = f(value)?,
            "geometry.d0_m" => self.rod.d0 = f(value)?,
            "geometry.wall_m" => self.rod.wall = f(value)?,
            "geometry.M0_kg" => self.rod.m0 = parse_optional(key, value, line)?,
            "material.rho_kg_m3" => self.rod.rho = f(value)?,
            "material.E_Pa" => self.rod.young = f(value)?,
            "material.alphaT_perK" => self.rod.alpha_t = f(value)?,
            "medium.eta" => self.rod.eta = f(value)?,
            "medium.iota" => self.rod.iota = f(value)?,
            "pulse.kind" => self.pulse.kind = parse_choice(key, value, line, &PULSE_KINDS)?,
            "pulse.dt_s" => self.pulse.dt = f(value)?,
            "pulse.beta0_K" => self.pulse.beta0 = f(value)?,
            "pulse.nu" => self.pulse.nu = f(value)?,
            "pulse.count" => self.pulse.count = n(value)?,
            "pulse.zeta" => self.zeta = f(value)?,
            "pulse.reaction_s" => self.reaction = parse_optional(key, value, line)?,
            "pulse.kappa0" => self.kappa0 = f(value)?,
            "profile.kind" => self.profile.kind = parse_choice(key, value, line, &PROFILE_KINDS)?,
            "profile.upsilon" => self.profile.upsilon = f(value)?,
            "profile.z1" => self.profile.z1 = f(value)?,
            "profile.z2" => self.profile.z2 = f(value)?,
            "profile.level" => self.profile.level = f(value)?,
            "profile.ell" => self.profile.ell = n(value)?,
            "solver.modes" => self.solver.modes = n(value)?,
            "solver.basis" => self.solver.basis = parse_choice(key, value, line, &BASES)?,
            "solver.method" => self.solver.method = parse_choice(key, value, line, &METHODS)?,
            "solver.rel_tol" => self.solver.rel_tol = f(value)?,
            "solver.t_end_s" => self.solver.t_end = f(value)?,
            "solver.dt_out_s" => self.solver.dt_out = f(value)?,
            "solver.p" => self.solver.p = parse_optional(key, value, line)?,
            "solver.write_modal" => self.solver.write_modal = b(value)?,
            "solver.shape_points" => self.solver.shape_points = n(value)?,
            "solver.shape_every_s" => self.solver.shape_every = f(value)?,
            "solver.sweep_p_min" => self.solver.sweep_p_min = f(value)?,
            "solver.sweep_p_max" => self.solver.sweep_p_max = f(value)?,
            "solver.sweep_p_step" => self.solver.sweep_p_step = f(value)?,
            "solver.fd_points" => self.solver.fd_points = n(value)?,
            "solver.fd_dt_s" => self.solver.fd_dt = f(value)?,
            "solver.fd_dt_max_s" => self.solver.fd_dt_max = f(value)?,
            "solver.fd_edge_dt_s" => self.solver.fd_edge_dt = f(value)?,
            "solver.fd_edge_window_s" => self.solver.fd_edge_window = f(value)?,
            "solver.fd_gravity" => self.solver.fd_gravity = b(value)?,
            "solver.fd_friction" => self.solver.fd_friction = b(value)?,
            _ => return Err(CliError::UnknownKey { key: key.to_string(), line }),
        }
        Ok(())
    }

    /// Current value of a documented key, formatted so that `set` restores it
    /// exactly.
    pub fn get(&self, key: &str) -> Option<String> {
        let s = &self.solver;
        let v = match key {
            "scenario.name" => self.scenario.name().to_string(),
            "geometry.L_m" => self.rod.length.to_string(),
            "geometry.d0_m" => self.rod.d0.to_string(),
            "geometry.wall_m" => self.rod.wall.to_string(),
            "geometry.M0_kg" => optional_text(self.rod.m0),
            "material.rho_kg_m3" => self.rod.rho.to_string(),
            "material.E_Pa" => self.rod.young.to_string(),
            "material.alphaT_perK" => self.rod.alpha_t.to_string(),
            "medium.eta" => self.rod.eta.to_string(),
            "medium.iota" => self.rod.iota.to_string(),
            "pulse.kind" => name_of(&PULSE_KINDS, self.pulse.kind).to_string(),
            "pulse.dt_s" => self.pulse.dt.to_string(),
            "pulse.beta0_K" => self.pulse.beta0.to_string(),
            "pulse.nu" => self.pulse.nu.to_string(),
            "pulse.count" => self.pulse.count.to_string(),
            "pulse.zeta" => self.zeta.to_string(),
            "pulse.reaction_s" => optional_text(self.reaction),
            "pulse.kappa0" => self.kappa0.to_string(),
            "profile.kind" => name_of(&PROFILE_KINDS, self.profile.kind).to_string(),
            "profile.upsilon" => self.profile.upsilon.to_string(),
            "profile.z1" => self.profile.z1.to_string(),
            "profile.z2" => self.profile.z2.to_string(),
            "profile.level" => self.profile.level.to_string(),
            "profile.ell" => self.profile.ell.to_string(),
            "solver.modes" => s.modes.to_string(),
            "solver.basis" => name_of(&BASES, s.basis).to_string(),
            "solver.method" => name_of(&METHODS, s.method).to_string(),
            "solver.rel_tol" => s.rel_tol.to_string(),
            "solver.t_end_s" => s.t_end.to_string(),
            "solver.dt_out_s" => s.dt_out.to_string(),
            "solver.p" => optional_text(s.p),
            "solver.write_modal" => s.write_modal.to_string(),
            "solver.shape_points" => s.shape_points.to_string(),
            "solver.shape_every_s" => s.shape_every.to_string(),
            "solver.sweep_p_min" => s.sweep_p_min.to_string(),
            "solver.sweep_p_max" => s.sweep_p_max.to_string(),
            "solver.sweep_p_step" => s.sweep_p_step.to_string(),
            "solver.fd_points" => s.fd_points.to_string(),
            "solver.fd_dt_s" => s.fd_dt.to_string(),
            "solver.fd_dt_max_s" => s.fd_dt_max.to_string(),
            "solver.fd_edge_dt_s" => s.fd_edge_dt.to_string(),
            "solver.fd_edge_window_s" => s.fd_edge_window.to_string(),
            "solver.fd_gravity" => s.fd_gravity.to_string(),
            "solver.fd_friction" => s.fd_friction.to_string(),
            _ => return None,
        };
        Some(v)
    }

    /// The whole configuration as a file that parses back to `self`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for entry in KEYS {
            let value = self.get(entry.key).expect("every documented key has a value");
            let _ = writeln!(out, "{} = {}", entry.key, value);
        }
        out
    }

    /// Rod parameters with the `solver.p` override applied through M0.
    pub fn rod(&self) -> CliResult<RodParameters> {
        let mut rod = self.rod;
        rod.validate()?;
        if let Some(p) = self.solver.p {
            if !(p >= 0.0 && p.is_finite()) {
                return Err(CliError::Invalid("solver.p must be a non-negative number".into()));
            }
            let c = fuelrod_core::dynamics::derive(&rod)?;
            rod.m0 = Some(p / (c.b * rod.length * rod.length * GRAVITY));
        }
        Ok(rod)
    }

    /// The temperature profile selected by `profile.*`.
    pub fn temperature_profile(&self) -> CliResult<TemperatureProfile> {
        let p = &self.profile;
        let profile = match p.kind {
            ProfileKind::Logistic => TemperatureProfile::Logistic { upsilon: p.upsilon, z1: p.z1, z2: p.z2 },
            ProfileKind::Rect => TemperatureProfile::Rectangular { z1: p.z1, z2: p.z2 },
            ProfileKind::Uniform => TemperatureProfile::Uniform { level: p.level },
            ProfileKind::Ell => {
                if p.ell == 0 {
                    return Err(CliError::Invalid("profile.ell starts at 1".into()));
                }
                let mode = gravity_eigenvalues(p.ell, &SeriesControl::default())?.remove(p.ell - 1);
                TemperatureProfile::Ell(EllProfile::fitted(mode)?)
            }
        };
        profile.validate().map_err(|e| CliError::Invalid(e.to_string()))?;
        Ok(profile)
    }

    /// Reaction time of the instant-pulse start.
    pub fn reaction_time(&self) -> f64 {
        self.reaction.unwrap_or(self.pulse.dt / 100.0)
    }

    /// Checks that do not need any numerics.
    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: &str| Err(CliError::Invalid(m.to_string()));
        self.rod.validate().map_err(|e| CliError::Invalid(e.to_string()))?;
        self.pulse.validate().map_err(|e| CliError::Invalid(e.to_string()))?;
        let s = &self.solver;
        if s.modes == 0 {
            return bad("solver.modes must be at least 1");
        }
        if !(s.t_end > 0.0 && s.t_end.is_finite()) {
            return bad("solver.t_end_s must be positive");
        }
        if !(s.dt_out > 0.0 && s.dt_out <= s.t_end) {
            return bad("solver.dt_out_s must be positive and not exceed solver.t_end_s");
        }
        if !(s.rel_tol > 0.0 && s.rel_tol < 1.0) {
            return bad("solver.rel_tol must lie in (0, 1)");
        }
        if s.shape_points < 2 {
            return bad("solver.shape_points must be at least 2");
        }
        if !(s.shape_every > 0.0) {
            return bad("solver.shape_every_s must be positive");
        }
        if !(s.sweep_p_step > 0.0 && s.sweep_p_min >= 0.0 && s.sweep_p_max >= s.sweep_p_min) {
            return bad("sweep needs 0 <= solver.sweep_p_min <= solver.sweep_p_max and a positive step");
        }
        if let Some(r) = self.reaction {
            if !(r > 0.0) {
                return bad("pulse.reaction_s must be positive");
            }
        }
        Ok(())
    }
}
