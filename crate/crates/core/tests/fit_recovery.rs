use neqr_core::{fit, Family, FitModel};
use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

fn control_counts() -> Vec<f64> {
    (1..=11).map(|i| 2.0 * f64::from(i)).collect()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() & 1 == 0 {
        (v[mid - 1] + v[mid]) / 2.0
    } else {
        v[mid]
    }
}

fn noisy_asymptotes(truth: &FitModel, sigma: f64, trials: u64) -> Vec<f64> {
    let noise = Normal::new(0.0, sigma).unwrap();
    (0..trials)
        .map(|t| {
            let mut rng = StdRng::seed_from_u64(1000 + t);
            let pts: Vec<(f64, f64)> = control_counts()
                .into_iter()
                .map(|m| (m, truth.eval(m).unwrap() + noise.sample(&mut rng)))
                .collect();
            let res = fit(&pts, truth.family, None).unwrap();
            res.model.params[3]
        })
        .collect()
}

#[test]
fn growth_base_is_recovered_from_default_start() {
    let truth = FitModel::growth(1.33, 0.49);
    let pts: Vec<(f64, f64)> = control_counts()
        .into_iter()
        .map(|m| (m, truth.eval(m).unwrap()))
        .collect();
    let res = fit(&pts, Family::GrowthExp, None).unwrap();
    assert!(res.converged, "{res:?}");
    assert!((res.model.params[0] - 1.33).abs() < 1e-6, "{res:?}");
}

#[test]
fn decay_asymptote_survives_noise() {
    let truth = FitModel::decay(1.82, 0.24, 5.93, 52.27);
    let e = median(noisy_asymptotes(&truth, 0.2, 50));
    assert!((e - 52.27).abs() <= 1.0, "median asymptote {e}");
}

#[test]
fn rate_decay_asymptote_survives_noise() {
    let truth = FitModel::decay(1.12, 1.60, 9.45, 2.10);
    let e = median(noisy_asymptotes(&truth, 0.02, 50));
    assert!((e - 2.10).abs() <= 0.1, "median asymptote {e}");
}

#[test]
fn negated_decay_fits_curve_approaching_from_below() {
    let truth = FitModel::negated_decay(2.43, 0.24, 4.54, 100.89);
    let pts: Vec<(f64, f64)> = control_counts()
        .into_iter()
        .map(|m| (m, truth.eval(m).unwrap()))
        .collect();
    let init = [1.5, 0.5, 0.0, 100.0];
    let res = fit(&pts, truth.family, Some(&init)).unwrap();
    assert!(res.residual_sum_squares < 1e-8, "{res:?}");
    assert!((res.model.params[3] - 100.89).abs() < 1e-3, "{res:?}");
}

#[test]
fn accepted_steps_never_increase_cost() {
    // The fitter asserts this internally; exercise it from several poor starts.
    let truth = FitModel::decay(1.82, 0.24, 5.93, 52.27);
    let pts: Vec<(f64, f64)> = control_counts()
        .into_iter()
        .map(|m| (m, truth.eval(m).unwrap()))
        .collect();
    for init in [
        [1.1, 0.1, 0.0, 40.0],
        [3.0, 2.0, 5.0, 60.0],
        [1.5, 0.5, 0.0, 53.0],
    ] {
        let _ = fit(&pts, truth.family, Some(&init));
    }
}
