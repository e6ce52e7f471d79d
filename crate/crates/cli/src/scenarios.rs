use std::path::{Path, PathBuf};

use fuelrod_core::dynamics::{
    derive, instant_heating_state, lambda0_evolution, projection_coefficients, time_grid, DerivedCoefficients,
    ModalModel, ModalState, Regime, Trajectory,
};
use fuelrod_core::forcing::{PulseKind, PulseSpec, TemperatureProfile};
use fuelrod_core::oracle::{fd_solve, fd_static, InitialShapes, OracleConfig};
use fuelrod_core::special::SeriesControl;
use fuelrod_core::spectrum::{count_unstable, general_eigenvalues, gravity_eigenvalues, krylov_modes, Mode};
use fuelrod_core::statics::{delta_l, StaticSolution, StaticVariant};

use crate::analysis::{envelope_maxima, period_peaks};
use crate::config::{Basis, Config, Scenario, SolveMethod};
use crate::csv::{emit_csv, Cell, Table};
use crate::error::{CliError, CliResult};

/// A written file with a short description for the summary line.
#[derive(Debug, Clone)]
pub struct Output {
    pub path: PathBuf,
    pub rows: usize,
    pub note: String,
}

impl Output {
    pub fn summary(&self) -> String {
        format!("{}: {} rows; {}", self.path.display(), self.rows, self.note)
    }
}

fn write(table: &Table, dir: &Path, name: &str, note: String) -> CliResult<Output> {
    let path = emit_csv(table, dir, name)?;
    Ok(Output { path, rows: table.rows.len(), note })
}

/// Runs the configured scenario and writes its CSV files into `out_dir`.
pub fn run(cfg: &Config, out_dir: &Path) -> CliResult<Vec<Output>> {
    cfg.validate()?;
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Io { path: out_dir.to_path_buf(), source })?;
    match cfg.scenario {
        Scenario::Modes => modes(cfg, out_dir),
        Scenario::BifurcationSweep => sweep(cfg, out_dir),
        Scenario::Static => statics(cfg, out_dir),
        Scenario::Lambda0 => lambda0(cfg, out_dir),
        Scenario::StepPulse => step_pulse(cfg, out_dir),
        Scenario::InstantPulse => instant_pulse(cfg, out_dir),
        Scenario::Periodic => periodic(cfg, out_dir),
        Scenario::OracleCompare => oracle_compare(cfg, out_dir),
        Scenario::Beats => beats(cfg, out_dir),
    }
}

fn coefficients(cfg: &Config) -> CliResult<DerivedCoefficients> {
    Ok(derive(&cfg.rod()?)?)
}

/// Spatial basis with modal equations per `solver.basis`.
pub fn modal_model(cfg: &Config, coeffs: DerivedCoefficients, profile: &TemperatureProfile) -> CliResult<ModalModel> {
    let n = cfg.solver.modes;
    Ok(match cfg.solver.basis {
        Basis::General => ModalModel::general(coeffs, profile, n)?,
        Basis::Krylov => ModalModel::krylov(coeffs, profile, n)?,
    })
}

fn shape_grid(cfg: &Config) -> Vec<f64> {
    let m = cfg.solver.shape_points;
    (0..m).map(|i| i as f64 / (m - 1) as f64).collect()
}

/// Solves the modal equations with the configured method on the output grid.
pub fn solve(
    cfg: &Config,
    model: &ModalModel,
    pulse: &PulseSpec,
    state: &ModalState,
    z_grid: &[f64],
) -> CliResult<Trajectory> {
    let s = &cfg.solver;
    let times = time_grid(s.t_end, s.dt_out)?;
    Ok(match s.method {
        SolveMethod::ClosedForm => model.closed_form(pulse, state, &times, z_grid)?,
        SolveMethod::Green => model.green(pulse, state, &times, z_grid, s.rel_tol)?,
        SolveMethod::Fourier => model.fourier(pulse, state, s.t_end, s.dt_out, z_grid, s.rel_tol)?,
    })
}

fn trajectory_table(tr: &Trajectory, write_modal: bool, extra: &[(&str, &[f64])]) -> Table {
    let modal = tr.modal.as_ref().filter(|_| write_modal);
    let mut header = vec!["t_s".to_string(), "u_tip_m".to_string()];
    header.extend(extra.iter().map(|e| e.0.to_string()));
    if let Some(m) = modal {
        header.extend((1..=m.len()).map(|n| format!("w_{n}")));
    }
    let mut t = Table::new(header);
    for (j, &time) in tr.times.iter().enumerate() {
        let mut row = vec![Cell::Num(time), Cell::Num(tr.tip[j])];
        row.extend(extra.iter().map(|e| Cell::Num(e.1[j])));
        if let Some(m) = modal {
            row.extend(m.iter().map(|w| Cell::Num(w[j])));
        }
        t.push(row);
    }
    t
}

/// Long-format snapshots t_s,z_m,u_m every `solver.shape_every_s`.
fn snapshot_table(cfg: &Config, tr: &Trajectory, length: f64) -> Table {
    let mut t = Table::new(["t_s", "z_m", "u_m"]);
    let Some(shapes) = &tr.shapes else { return t };
    let every = ((cfg.solver.shape_every / cfg.solver.dt_out).round() as usize).max(1);
    for (j, shape) in shapes.iter().enumerate().step_by(every) {
        for (z, u) in tr.z_grid.iter().zip(shape) {
            t.push(vec![Cell::Num(tr.times[j]), Cell::Num(z * length), Cell::Num(*u)]);
        }
    }
    t
}

fn write_dynamic(cfg: &Config, dir: &Path, tr: &Trajectory, length: f64, extra: &[(&str, &[f64])], note: String) -> CliResult<Vec<Output>> {
    let traj = trajectory_table(tr, cfg.solver.write_modal, extra);
    let snaps = snapshot_table(cfg, tr, length);
    Ok(vec![
        write(&traj, dir, "trajectory.csv", note)?,
        write(&snaps, dir, "shape.csv", format!("{} snapshots of u(z, t)", snaps.rows.len() / tr.z_grid.len().max(1)))?,
    ])
}

fn damped_frequency(lambda_bar: f64, coeffs: &DerivedCoefficients) -> f64 {
    match Regime::classify(coeffs.a1, coeffs.a2, coeffs.lambda(lambda_bar)) {
        Regime::Underdamped { beta } => beta,
        _ => f64::NAN,
    }
}

fn modes(cfg: &Config, dir: &Path) -> CliResult<Vec<Output>> {
    let coeffs = coefficients(cfg)?;
    let ctrl = SeriesControl::default();
    let n = cfg.solver.modes;
    let mut rows: Vec<Mode> = gravity_eigenvalues(n, &ctrl)?.into_iter().map(Mode::Gravity).collect();
    rows.extend(general_eigenvalues(coeffs.p, n, &ctrl)?.into_iter().map(Mode::General));
    rows.extend(krylov_modes(n)?.into_iter().map(Mode::Krylov));
    let mut t = Table::new(["family", "k", "eigenvalue", "eps1_or_c4", "norm2", "beta_rad_per_s"]);
    for m in &rows {
        let beta = match m {
            Mode::Gravity(_) => f64::NAN,
            other => damped_frequency(other.lambda_bar(), &coeffs),
        };
        t.push(vec![
            Cell::Text(m.family().tag()),
            Cell::Int(m.index() as i64),
            Cell::Num(m.eigenvalue()),
            Cell::Num(m.secondary_coefficient().unwrap_or(f64::NAN)),
            Cell::Num(m.norm2()),
            Cell::Num(beta),
        ]);
    }
    let note = format!("p = {:.6}, {} unstable general modes", coeffs.p, count_unstable(coeffs.p)?);
    Ok(vec![write(&t, dir, "modes.csv", note)?])
}

fn sweep(cfg: &Config, dir: &Path) -> CliResult<Vec<Output>> {
    let s = &cfg.solver;
    let ctrl = SeriesControl::default();
    let steps = ((s.sweep_p_max - s.sweep_p_min) / s.sweep_p_step + 1e-9).floor() as usize;
    let mut t = Table::new(["p", "unstable_count", "lambda_bar_1"]);
    let mut changes = Vec::new();
    let mut last = None;
    for i in 0..=steps {
        let p = s.sweep_p_min + i as f64 * s.sweep_p_step;
        let count = count_unstable(p)?;
        let first = general_eigenvalues(p, 1, &ctrl)?.remove(0).lambda_bar;
        if last.is_some_and(|c| c != count) {
            changes.push(format!("{p}"));
        }
        last = Some(count);
        t.push(vec![Cell::Num(p), Cell::Int(count as i64), Cell::Num(first)]);
    }
    let note = format!("count changes at p = [{}]", changes.join(", "));
    Ok(vec![write(&t, dir, "sweep.csv", note)?])
}

const STATIC_VARIANTS: [StaticVariant; 4] = [
    StaticVariant::DilogFull,
    StaticVariant::DilogReduced,
    StaticVariant::Parabola,
    StaticVariant::PiecewiseRect,
];

fn statics(cfg: &Config, dir: &Path) -> CliResult<Vec<Output>> {
    let rod = cfg.rod()?;
    let coeffs = derive(&rod)?;
    let profile = cfg.temperature_profile()?;
    let s = &cfg.solver;
    if s.fd_points < 2 || (s.fd_points - 1) % (s.shape_points - 1) != 0 {
        return Err(CliError::Invalid("static: solver.fd_points - 1 must be a multiple of solver.shape_points - 1".into()));
    }
    let sols = STATIC_VARIANTS
        .iter()
        .map(|&v| StaticSolution::from_model(v, &coeffs, &profile, &cfg.pulse))
        .collect::<Result<Vec<_>, _>>()?;
    let fd = fd_static(&rod, &profile, cfg.pulse.beta0, s.fd_points, s.fd_gravity)?;
    let stride = (s.fd_points - 1) / (s.shape_points - 1);
    let mut header = vec!["z_m".to_string()];
    header.extend(STATIC_VARIANTS.iter().map(|v| format!("u_{}_m", v.tag().replace('-', "_"))));
    header.push("u_fd_m".to_string());
    let mut t = Table::new(header);
    for (i, z) in shape_grid(cfg).into_iter().enumerate() {
        let zm = z * rod.length;
        let mut row = vec![Cell::Num(zm)];
        row.extend(sols.iter().map(|sol| Cell::Num(sol.u(zm))));
        row.push(Cell::Num(fd.u[i * stride]));
        t.push(row);
    }
    let deltas: Vec<String> = sols.iter().map(|sol| format!("{} {:.4e}", sol.variant.tag(), delta_l(sol))).collect();
    let note = format!("tip deflection: {}, fd {:.4e} m", deltas.join(", "), fd.u.last().copied().unwrap_or(0.0));
    Ok(vec![write(&t, dir, "shape.csv", note)?])
}

fn step_of(pulse: &PulseSpec) -> PulseSpec {
    PulseSpec { kind: PulseKind::Step, ..*pulse }
}

fn lambda0(cfg: &Config, dir: &Path) -> CliResult<Vec<Output>> {
    let ell = cfg.profile.ell;
    if ell == 0 {
        return Err(CliError::Invalid("profile.ell starts at 1".into()));
    }
    let coeffs = coefficients(cfg)?;
    let mode = gravity_eigenvalues(ell, &SeriesControl::default())?.remove(ell - 1);
    let ell_profile = fuelrod_core::forcing::EllProfile::fitted(mode.clone())?;
    let times = time_grid(cfg.solver.t_end, cfg.solver.dt_out)?;
    let pulse = step_of(&cfg.pulse);
    let tr = lambda0_evolution(&times, &mode, &pulse, &coeffs, cfg.kappa0, ell_profile.tau0, &shape_grid(cfg))?;
    let note = format!("mode {ell} at p = {:.6}, chi(t_end) = {:.6}", mode.p, tr.modal.as_ref().map_or(f64::NAN, |m| m[0][times.len() - 1]));
    write_dynamic(cfg, dir, &tr, cfg.rod.length, &[], note)
}

fn step_pulse(cfg: &Config, dir: &Path) -> CliResult<Vec<Output>> {
    let coeffs = coefficients(cfg)?;
    let profile = cfg.temperature_profile()?;
    let model = modal_model(cfg, coeffs, &profile)?;
    let pulse = step_of(&cfg.pulse);
    let tr = solve(cfg, &model, &pulse, &ModalState::zeros(model.len()), &shape_grid(cfg))?;
    let note = format!("{} modes, {}, peak |u_tip| = {:.6e} m", model.len(), tr.method.tag(), tr.peak_tip());
    write_dynamic(cfg, dir, &tr, coeffs.params.length, &[], note)
}

/// Modal start for a rod hit by heat that stays on: zero displacement and
/// velocity ζ·u_rect/δt.
pub fn instant_state(cfg: &Config, model: &ModalModel, profile: &TemperatureProfile) -> CliResult<ModalState> {
    let coeffs = &model.coeffs;
    let sol = StaticSolution::from_model(StaticVariant::PiecewiseRect, coeffs, profile, &cfg.pulse)?;
    let dt = cfg.reaction_time();
    if cfg.zeta == 0.0 {
        return Ok(ModalState::zeros(model.len()));
    }
    let krylov: Option<Vec<_>> = model
        .modes
        .iter()
        .map(|m| match m {
            Mode::Krylov(k) => Some(k.clone()),
            _ => None,
        })
        .collect();
    Ok(match krylov {
        Some(k) => instant_heating_state(cfg.zeta, dt, &k, &sol)?,
        None => {
            let zeta = cfg.zeta;
            projection_coefficients(|_| 0.0, |z| zeta * sol.u(z) / dt, &model.modes, coeffs.params.length)?
        }
    })
}

/// Heating switched on at t = 0 and held past the horizon.
pub fn held_pulse(cfg: &Config) -> PulseSpec {
    PulseSpec { kind: PulseKind::Step, dt: cfg.pulse.dt.max(cfg.solver.t_end) + 1.0, ..cfg.pulse }
}

fn instant_pulse(cfg: &Config, dir: &Path) -> CliResult<Vec<Output>> {
    let coeffs = coefficients(cfg)?;
    let profile = cfg.temperature_profile()?;
    let model = modal_model(cfg, coeffs, &profile)?;
    let state = instant_state(cfg, &model, &profile)?;
    let tr = solve(cfg, &model, &held_pulse(cfg), &state, &shape_grid(cfg))?;
    let note = format!("zeta = {}, peak |u_tip| = {:.6e} m", cfg.zeta, tr.peak_tip());
    write_dynamic(cfg, dir, &tr, coeffs.params.length, &[], note)
}

fn periodic(cfg: &Config, dir: &Path) -> CliResult<Vec<Output>> {
    let coeffs = coefficients(cfg)?;
    let profile = cfg.temperature_profile()?;
    let model = modal_model(cfg, coeffs, &profile)?;
    let pulse = PulseSpec { kind: PulseKind::Train, ..cfg.pulse };
    let tr = solve(cfg, &model, &pulse, &ModalState::zeros(model.len()), &shape_grid(cfg))?;
    let period = pulse.duty_cycle() * pulse.dt;
    let peaks = period_peaks(&tr.times, &tr.tip, period, pulse.count + 1);
    let list: Vec<String> = peaks.iter().map(|p| format!("{p:.4e}")).collect();
    let note = format!("S = {}, peak |u_tip| per period: [{}] m", pulse.duty_cycle(), list.join(", "));
    write_dynamic(cfg, dir, &tr, coeffs.params.length, &[], note)
}

fn oracle_compare(cfg: &Config, dir: &Path) -> CliResult<Vec<Output>> {
    let rod = cfg.rod()?;
    let s = &cfg.solver;
    let mut coeffs = derive(&rod)?;
    if !s.fd_gravity {
        coeffs = DerivedCoefficients { p: 0.0, m0: 0.0, ..coeffs };
    }
    if !s.fd_friction {
        coeffs = coeffs.without_friction();
    }
    let profile = cfg.temperature_profile()?;
    let model = modal_model(cfg, coeffs, &profile)?;
    let pulse = cfg.pulse;
    let analytic = solve(cfg, &model, &pulse, &ModalState::zeros(model.len()), &[])?;
    let oc = OracleConfig {
        points: s.fd_points,
        dt: s.fd_dt,
        dt_max: s.fd_dt_max,
        edge_dt: s.fd_edge_dt,
        edge_window: s.fd_edge_window,
        t_end: s.t_end,
        dt_out: s.dt_out,
        gravity: s.fd_gravity,
        friction: s.fd_friction,
        shape_stride: 0,
    };
    let run = fd_solve(&rod, &profile, &pulse, &InitialShapes::at_rest(), &oc)?;
    let n = analytic.times.len().min(run.trajectory.times.len());
    let mut tr = analytic;
    tr.times.truncate(n);
    tr.tip.truncate(n);
    if let Some(m) = tr.modal.as_mut() {
        m.iter_mut().for_each(|w| w.truncate(n));
    }
    let fd = &run.trajectory.tip[..n];
    let dev = tr.tip.iter().zip(fd).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / tr.peak_tip().max(f64::MIN_POSITIVE);
    let note = format!("{} fd steps, max deviation {:.3}% of peak", run.steps, 100.0 * dev);
    let table = trajectory_table(&tr, s.write_modal, &[("u_tip_oracle_m", fd)]);
    Ok(vec![write(&table, dir, "trajectory.csv", note)?])
}

fn beats(cfg: &Config, dir: &Path) -> CliResult<Vec<Output>> {
    let coeffs = coefficients(cfg)?;
    let profile = cfg.temperature_profile()?;
    let model = modal_model(cfg, coeffs, &profile)?;
    let state = instant_state(cfg, &model, &profile)?;
    let tr = solve(cfg, &model, &held_pulse(cfg), &state, &[])?;
    let modal = tr.modal.as_ref().ok_or_else(|| CliError::Invalid("beats: no modal series".into()))?;
    let tips: Vec<f64> = model.modes.iter().take(2).map(|m| m.value(1.0)).collect();
    let two: Vec<f64> = (0..tr.times.len()).map(|j| tips.iter().zip(modal).map(|(w, series)| w * series[j]).sum()).collect();
    let period = match model.systems[0].osc.regime.frequency() {
        Some(beta) => 2.0 * std::f64::consts::PI / beta,
        None => return Err(CliError::Invalid("beats: the first mode does not oscillate".into())),
    };
    let maxima = envelope_maxima(&tr.times, &two, period, 1.5_f64.min(cfg.solver.t_end));
    let note = format!("two-mode envelope has {maxima} local maxima before 1.5 s");
    let table = trajectory_table(&tr, cfg.solver.write_modal, &[("u_tip_two_modes_m", &two)]);
    Ok(vec![write(&table, dir, "trajectory.csv", note)?])
}
