use fuelrod_core::dynamics::{derive, time_grid, ModalModel, ModalState, RodParameters, Trajectory};
use fuelrod_core::forcing::{PulseSpec, TemperatureProfile};

fn rel_linf(a: &Trajectory, b: &Trajectory) -> f64 {
    assert_eq!(a.tip.len(), b.tip.len());
    let peak = a.peak_tip().max(b.peak_tip());
    a.tip.iter().zip(&b.tip).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / peak
}

#[test]
fn closed_form_green_and_fourier_agree_on_the_step_pulse() {
    let coeffs = derive(&RodParameters::default()).unwrap();
    let model = ModalModel::general(coeffs, &TemperatureProfile::default(), 8).unwrap();
    let pulse = PulseSpec::default();
    let state = ModalState::zeros(8);
    let times = time_grid(2.0, 1e-3).unwrap();

    let closed = model.closed_form(&pulse, &state, &times, &[]).unwrap();
    let green = model.green(&pulse, &state, &times, &[], 1e-5).unwrap();
    let fourier = model.fourier(&pulse, &state, 2.0, 1e-3, &[], 1e-5).unwrap();

    let pairs = [
        ("closed/green", rel_linf(&closed, &green)),
        ("closed/fourier", rel_linf(&closed, &fourier)),
        ("green/fourier", rel_linf(&green, &fourier)),
    ];
    for (name, d) in pairs {
        eprintln!("{name}: {d:e}");
        assert!(d < 1e-3, "{name}: {d:e}");
    }
}

#[test]
fn krylov_and_gravity_bases_nearly_coincide_at_small_p() {
    let coeffs = derive(&RodParameters::default()).unwrap();
    let profile = TemperatureProfile::default();
    let pulse = PulseSpec::default();
    let times = time_grid(1.5, 1e-3).unwrap();
    let a = ModalModel::general(coeffs, &profile, 6).unwrap().closed_form(&pulse, &ModalState::zeros(6), &times, &[]).unwrap();
    let b = ModalModel::krylov(coeffs, &profile, 6).unwrap().closed_form(&pulse, &ModalState::zeros(6), &times, &[]).unwrap();
    // p ≈ 0.011 shifts the spectrum by about a tenth of a percent
    assert!(rel_linf(&a, &b) < 0.05, "{}", rel_linf(&a, &b));
}
