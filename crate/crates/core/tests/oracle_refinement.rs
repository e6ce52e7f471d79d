use fuelrod_core::dynamics::{derive, ModalOscillator, RodParameters};
use fuelrod_core::forcing::{PulseSpec, TemperatureProfile};
use fuelrod_core::oracle::{fd_solve, InitialShapes, OracleConfig};
use fuelrod_core::spectrum::krylov_modes;

/// Maximum tip deviation from the exact single-mode free vibration.
fn tip_error(points: usize, dt: f64) -> f64 {
    let params = RodParameters::default();
    let coeffs = derive(&params).unwrap();
    let w1 = krylov_modes(1).unwrap().remove(0);
    let amp = 1e-4;
    let osc = ModalOscillator::new(coeffs.a1, coeffs.a2, coeffs.lambda(w1.lambda_bar()));
    let mode = w1.clone();
    let u0 = move |z: f64| amp * mode.value(z / params.length);
    let u1 = |_: f64| 0.0;
    let ic = InitialShapes { u0: &u0, u1: &u1 };
    let pulse = PulseSpec { beta0: 0.0, ..PulseSpec::default() };
    let oc = OracleConfig {
        points,
        dt,
        dt_max: dt,
        edge_dt: dt,
        edge_window: 0.0,
        t_end: 0.25,
        dt_out: 1e-3,
        gravity: false,
        friction: true,
        shape_stride: 0,
    };
    let run = fd_solve(&params, &TemperatureProfile::default(), &pulse, &ic, &oc).unwrap();
    let tip0 = w1.value(1.0) * amp;
    run.trajectory
        .times
        .iter()
        .zip(&run.trajectory.tip)
        .map(|(&t, &u)| (u - tip0 * osc.free(t, 1.0, 0.0).0).abs())
        .fold(0.0, f64::max)
}

#[test]
fn halving_space_and_time_steps_quarters_the_error() {
    let e: Vec<f64> = [(51, 4e-4), (101, 2e-4), (201, 1e-4)].iter().map(|&(m, dt)| tip_error(m, dt)).collect();
    for w in e.windows(2) {
        let ratio = w[0] / w[1];
        eprintln!("{ratio}");
        assert!((3.2..=4.8).contains(&ratio), "errors {e:?}, ratio {ratio}");
    }
}
