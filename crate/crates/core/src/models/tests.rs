use super::*;
use crate::solver::{euler_solve, Rhs};

fn eval(rhs: &ModelRhs, x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut dx = vec![f64::NAN; x.len()];
    rhs.eval(0.3, x, y, &mut dx);
    dx
}

fn rhs_of(model: &ModelSpec) -> ModelRhs {
    model.rhs(model.target_grid()).unwrap()
}

#[test]
fn every_model_validates_with_consistent_dimensions() {
    for name in MODEL_NAMES {
        let m = model_by_name(name).unwrap();
        m.validate().unwrap();
        assert_eq!(m.name(), name);
        let grid = m.target_grid();
        let rhs = m.rhs(grid).unwrap();
        assert_eq!(rhs.state_dim(), m.state_dim(grid).unwrap(), "{name}");
        assert_eq!(rhs.noise_dim(), m.noise_dim(), "{name}");
        let defaults = m.defaults();
        assert!(defaults
            .resolutions
            .iter()
            .all(|n| defaults.n_target.is_multiple_of(*n)));
    }
    assert!(model_by_name("lorenz").is_err());
}

#[test]
fn linear_homogeneous() {
    let m = model_linear_homogeneous();
    let rhs = rhs_of(&m);
    assert_eq!(eval(&rhs, &[2.0], &[3.0]), vec![6.0]);
    assert_eq!(eval(&rhs, &[-7.5], &[0.0]), vec![0.0]);
    assert_eq!(m.target, TargetStrategy::ExactLinearHomogeneous);
    let d = m.defaults();
    assert_eq!(d.samples, 500);
    assert_eq!(d.resolutions.first(), Some(&16));
    assert_eq!(d.resolutions.last(), Some(&16384));
    assert_eq!(d.resolutions.len(), 11);
    assert_eq!(d.n_target, 1 << 16);
}

#[test]
fn all_noise_linear() {
    let m = model_all_noise_linear_system();
    let rhs = rhs_of(&m);
    assert_eq!(m.noises.len(), 9);
    assert_eq!(m.error_norm, ErrorNorm::Euclidean);
    let x = [0.4, -1.0, 2.0, 0.0, 1.0, 3.0, -2.0, 0.5, 9.0];
    assert_eq!(eval(&rhs, &x, &[0.0; 9]), vec![0.0; 9]);
    let mut e1 = [0.0; 9];
    e1[0] = 1.0;
    assert_eq!(eval(&rhs, &e1, &e1), vec![0.0; 9]);
    let d = m.defaults();
    assert_eq!((d.samples, d.n_target), (80, 1 << 18));
    assert_eq!(d.resolutions, vec![64, 128, 256, 512]);
}

#[test]
fn fbm_linear() {
    let m = model_fbm_linear(0.3).unwrap();
    assert_eq!(eval(&rhs_of(&m), &[1.0], &[1.0]), vec![0.0]);
    assert_eq!(m.hurst(), Some(0.3));
    assert_eq!(m.defaults().samples, 200);
    for h in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
        assert!(model_fbm_linear(h).is_err(), "H = {h}");
    }
    for h in [0.1, 0.2, 0.3, 0.4, 0.5, 0.7, 0.9] {
        model_fbm_linear(h).unwrap().validate().unwrap();
    }
}

#[test]
fn population_dynamics() {
    let m = model_population_dynamics();
    let rhs = rhs_of(&m);
    assert_eq!(eval(&rhs, &[-0.5], &[1.3, 0.4]), vec![0.0]);
    assert_eq!(eval(&rhs, &[0.0], &[1.3, 0.4]), vec![0.0]);
    assert_eq!(eval(&rhs, &[1.0], &[1.3, 0.0]), vec![0.0]);
    // x = 0.5, g = 0, h = 0.5: 0.8 * 0.25 - 0.64 * 0.25 / 1.5
    let v = eval(&rhs, &[0.5], &[0.0, 0.5])[0];
    assert!((v - (0.2 - 0.16 / 1.5)).abs() < 1e-15);
    let d = m.defaults();
    assert_eq!(d.resolutions, vec![16, 32, 64, 128, 256, 512]);
}

#[test]
fn population_paths_stay_near_unit_interval() {
    let m = model_population_dynamics();
    let rhs = rhs_of(&m);
    let n = 512;
    let mesh = TimeMesh::new(0.0, 1.0, n).unwrap();
    let bundle = m.prepare_noise(&mesh).unwrap();
    for s in 0..200 {
        let mut rng = RngStream::new(17, s);
        let x0 = m.draw_initial(None, &mut rng).unwrap();
        let y = bundle.sample(&mut rng).unwrap();
        let path = euler_solve(&rhs, &x0, &y).unwrap();
        let mut fmax: f64 = 0.0;
        for (x, yr) in path.rows().zip(y.rows()) {
            fmax = fmax.max(eval(&rhs, x, yr)[0].abs());
        }
        let slack = mesh.dt() * fmax;
        for v in path.values() {
            assert!(*v >= -slack && *v <= 1.0 + slack, "sample {s}: {v}");
        }
    }
}

#[test]
fn earthquake() {
    let m = model_earthquake();
    let rhs = rhs_of(&m);
    assert_eq!(eval(&rhs, &[0.0, 0.0], &[0.0]), vec![0.0, 0.0]);
    assert_eq!(eval(&rhs, &[1.0, 0.0], &[0.0]), vec![0.0, -225.0]);
    assert_eq!(eval(&rhs, &[0.0, 1.0], &[0.0]), vec![1.0, -18.0]);
    assert_eq!(eval(&rhs, &[0.0, 0.0], &[2.0]), vec![0.0, -2.0]);
    assert_eq!(m.horizon, 2.0);
    assert_eq!(m.defaults().samples, 100);
}

#[test]
fn earthquake_unforced_matches_damped_oscillator() {
    let m = model_earthquake();
    let rhs = rhs_of(&m);
    let (zeta, omega): (f64, f64) = (0.6, 15.0);
    let wd = omega * (1.0 - zeta * zeta).sqrt();
    let exact = |t: f64| (-zeta * omega * t).exp() * ((wd * t).cos() + zeta * omega / wd * (wd * t).sin());
    let mut prev = f64::INFINITY;
    for n in [1usize << 12, 1 << 13, 1 << 14] {
        let mesh = TimeMesh::new(0.0, 2.0, n).unwrap();
        let y = SamplePath::scalar(mesh, vec![0.0; n + 1]).unwrap();
        let path = euler_solve(&rhs, &[1.0, 0.0], &y).unwrap();
        let err = path
            .rows()
            .zip(mesh.nodes())
            .map(|(x, t)| (x[0] - exact(t)).abs())
            .fold(0.0, f64::max);
        assert!(err < prev);
        assert!(err < 2000.0 * mesh.dt(), "n = {n}: {err}");
        prev = err;
    }
}

#[test]
fn toggle_switch() {
    let m = model_toggle_switch();
    let rhs = rhs_of(&m);
    assert_eq!(eval(&rhs, &[0.0, 0.0], &[0.0, 0.0]), vec![0.0, 0.0]);
    let dx = eval(&rhs, &[4.0, 0.0], &[0.0, 0.0])[0];
    let oracle = 256.0 / 256.003_906_25 - 3.0;
    assert!((dx - oracle).abs() < 1e-14, "{dx} vs {oracle}");
    assert!((dx + 2.000_015_26).abs() < 1e-8);
    let big = eval(&rhs, &[50.0, 50.0], &[3.0, 3.0]);
    assert!(big[0] < 0.0 && big[1] < 0.0);
    assert_eq!(m.defaults().resolutions, vec![32, 64, 128, 256, 512]);
}

#[test]
fn risk() {
    let m = model_risk();
    let rhs = rhs_of(&m);
    assert_eq!(eval(&rhs, &[3.0], &[0.0, 0.0, 0.0]), vec![1.0]);
    let mut m0 = model_risk();
    m0.set_param("premium", &ParamValue::Real(0.0)).unwrap();
    assert_eq!(eval(&rhs_of(&m0), &[1.0], &[0.0, 0.0, 0.2]), vec![0.2]);
    // o contributes (r + nu) o
    let v = eval(&rhs_of(&m0), &[0.0], &[1.0, 0.0, 0.5])[0];
    assert!((v - 5.5).abs() < 1e-15);
    assert_eq!(m.defaults().samples, 400);
}

#[test]
fn risk_surplus_adds_claims_and_ou() {
    let mesh = TimeMesh::new(0.0, 1.0, 2).unwrap();
    let x = SamplePath::scalar(mesh, vec![1.0, 2.0, 3.0]).unwrap();
    let y = SamplePath::new(mesh, 3, vec![0.0, 0.0, 0.2, 0.5, 0.1, 0.2, -0.5, 0.3, 0.2]).unwrap();
    let u = risk_surplus(&x, &y).unwrap();
    assert_eq!(u.values(), &[1.0, 2.6, 2.8]);
    assert!(risk_surplus(&y, &x).is_err());
}

#[test]
fn fisher_kpp() {
    let m = model_fisher_kpp();
    let k = 8;
    let rhs = m.rhs(Some(k)).unwrap();
    assert_eq!(eval(&rhs, &[0.0; 9], &[0.0]), vec![0.0; 9]);
    assert_eq!(eval(&rhs, &[1.0; 9], &[0.0]), vec![0.0; 9]);
    let y = 0.7;
    let f = eval(&rhs, &[0.0; 9], &[y]);
    let oracle = 2.0 * 0.009 * y / (1.0 / k as f64);
    assert!((f[0] - oracle).abs() < 1e-15, "{} vs {oracle}", f[0]);
    assert!(f[1..].iter().all(|v| *v == 0.0));
    assert_eq!(m.grid_for(32).unwrap(), Some(8));
    assert_eq!(m.grid_for(128).unwrap(), Some(16));
    assert_eq!(m.grid_for(512).unwrap(), Some(32));
    assert!(m.grid_for(64).is_err());
    assert_eq!(m.state_dim(Some(32)).unwrap(), 33);
    assert_eq!(m.noise_dim(), 1);
}

#[test]
fn fisher_kpp_stability_check() {
    let m = model_fisher_kpp();
    for &(n, k) in &[(32, 8), (128, 16), (512, 32)] {
        m.check_resolution(n, Some(k)).unwrap();
    }
    // 2 * 0.009 * (2/4) * 64^2 > 1
    assert!(m.check_resolution(4, Some(64)).is_err());
    assert!(m.check_resolution(1 << 13, Some(1 << 7)).is_ok());
    assert!(m.check_resolution(1 << 13, Some(1 << 9)).is_err());
    assert!(m.check_resolution(1 << 18, Some(1 << 9)).is_ok());
}

#[test]
fn fisher_mass_nondecreasing_with_nonnegative_influx() {
    let m = model_fisher_kpp();
    let k = 16;
    let rhs = m.rhs(Some(k)).unwrap();
    let n = 512;
    let mesh = TimeMesh::new(0.0, 2.0, n).unwrap();
    let y = SamplePath::scalar(mesh, mesh.nodes().map(|t| 0.5 + (5.0 * t).sin().abs()).collect()).unwrap();
    let path = euler_solve(&rhs, &vec![0.0; k + 1], &y).unwrap();
    let mut prev = 0.0;
    for row in path.rows() {
        if row.iter().any(|u| *u > 1.0) {
            break;
        }
        let mass: f64 = row.iter().sum();
        assert!(mass >= prev - 1e-15);
        prev = mass;
    }
    assert!(prev > 0.0);
}

#[test]
fn restriction_takes_coarse_nodes() {
    let m = model_fisher_kpp();
    let fine: Vec<f64> = (0..=8).map(f64::from).collect();
    assert_eq!(m.restrict(&fine, Some(8), Some(2)).unwrap(), vec![0.0, 4.0, 8.0]);
    assert_eq!(m.restrict(&fine, Some(8), Some(8)).unwrap(), fine);
    assert!(m.restrict(&fine, Some(8), Some(3)).is_err());
}

#[test]
fn product_mix_multiplies_pointwise() {
    let m = model_fisher_kpp();
    let mesh = TimeMesh::new(0.0, 2.0, 64).unwrap();
    let bundle = m.prepare_noise(&mesh).unwrap();
    let y = bundle.sample(&mut RngStream::new(3, 0)).unwrap();
    let mut rng = RngStream::new(3, 0);
    let h = m.noises[0].sample(&mesh, &mut rng).unwrap();
    let o = m.noises[1].sample(&mesh, &mut rng).unwrap();
    assert_eq!(y.dim(), 1);
    for j in 0..mesh.len() {
        assert_eq!(y.values()[j], h.values()[j] * o.values()[j]);
    }
}

#[test]
fn error_norms() {
    let a = [1.0, -2.0, 2.0];
    let b = [0.0; 3];
    assert_eq!(ErrorNorm::Abs.distance(&[1.5], &[-1.0]), 2.5);
    assert_eq!(ErrorNorm::Euclidean.distance(&a, &b), 3.0);
    assert_eq!(ErrorNorm::SpatialSum.distance(&a, &b), 5.0);
}

#[test]
fn initial_laws() {
    let mut rng = RngStream::new(1, 1);
    assert_eq!(model_earthquake().draw_initial(None, &mut rng).unwrap(), vec![0.0, 0.0]);
    assert_eq!(
        model_toggle_switch().draw_initial(None, &mut rng).unwrap(),
        vec![4.0, 4.0]
    );
    assert_eq!(
        model_fisher_kpp().draw_initial(Some(8), &mut rng).unwrap(),
        vec![0.0; 9]
    );
    let x = model_population_dynamics().draw_initial(None, &mut rng).unwrap();
    assert!(x[0] > 0.0 && x[0] < 1.0);
    assert_eq!(
        model_all_noise_linear_system()
            .draw_initial(None, &mut rng)
            .unwrap()
            .len(),
        9
    );
}

#[test]
fn params_round_trip_through_set_param() {
    for name in MODEL_NAMES {
        let m = model_by_name(name).unwrap();
        let mut copy = model_by_name(name).unwrap();
        copy.horizon = 99.0;
        for (k, v) in m.param_list() {
            copy.set_param(k, &v).unwrap();
        }
        assert_eq!(copy, m, "{name}");
    }
}

#[test]
fn set_param_rejects_foreign_keys() {
    let mut m = model_earthquake();
    assert!(m.set_param("premium", &ParamValue::Real(1.0)).is_err());
    assert!(m.set_param("damping", &ParamValue::Name("x".into())).is_err());
    let mut f = model_fbm_linear(0.3).unwrap();
    f.set_param("hurst", &ParamValue::Real(0.7)).unwrap();
    assert_eq!(f.hurst(), Some(0.7));
}

#[test]
fn validation_catches_inconsistencies() {
    let mut m = model_linear_homogeneous();
    m.noises = vec![NoiseSpec::default_of("ornstein_uhlenbeck").unwrap()];
    assert!(m.validate().is_err());

    let mut m = model_earthquake();
    m.initial = InitialLaw::Components(vec![DistributionSpec::Constant { value: 0.0 }]);
    assert!(m.validate().is_err());

    let mut m = model_risk();
    m.target = TargetStrategy::ExactLinearHomogeneous;
    assert!(m.validate().is_err());

    let mut m = model_fisher_kpp();
    m.set_param("levels", &ParamValue::Pairs(vec![(32, 7)])).unwrap();
    assert!(m.validate().is_err());

    let mut m = model_population_dynamics();
    m.horizon = -1.0;
    assert!(m.validate().is_err());
}
