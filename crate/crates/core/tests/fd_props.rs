use scalewave::fd::{
    detect_lifespan, detect_lifespan_refined, detect_lifespan_system, solve_semilinear_field, Coupling, Forcing,
    CONVERGENCE_BAND, DEFAULT_THRESHOLD,
};
use scalewave::field::GridSpec;
use scalewave::params::{ScaleInvariantParams, SystemParams};
use scalewave::profile::{BumpFamily, CauchyProfile};

#[test]
fn numerical_support_stays_in_cone() {
    for (mu, nu2) in [(2.0, 0.0), (0.5, 0.0), (3.0, 0.5)] {
        let params = ScaleInvariantParams::new(mu, nu2).unwrap();
        let data = CauchyProfile::bump_pair(BumpFamily::Smooth, 1.0, 0.5).unwrap();
        let grid = GridSpec::covering(1.0 / 40.0, 0.5, 1.0, 6.0).unwrap();
        let (field, _) = solve_semilinear_field(&params, &data, &Forcing::Power { p: 2.0 }, &grid, 2).unwrap();
        for (k, &t) in field.times.iter().enumerate() {
            for (i, &x) in field.xs.iter().enumerate() {
                if x.abs() > 1.0 + t + 2.0 * grid.dx {
                    assert!(field.values[k][i].abs() <= 1e-14, "mu {mu}: u({t}, {x}) = {}", field.values[k][i]);
                }
            }
        }
    }
}

#[test]
fn mass_nondecreasing_for_nonnegative_data() {
    // μ = 2, ν² = 0 with u0 = u1 >= 0.
    let params = ScaleInvariantParams::new(2.0, 0.0).unwrap();
    for p in [1.5, 2.0, 3.0] {
        let data = CauchyProfile::bump_pair(BumpFamily::Polynomial { k: 4 }, 1.0, 0.5).unwrap();
        let grid = GridSpec::covering(1.0 / 50.0, 0.5, 1.0, 8.0).unwrap();
        let (field, _) = solve_semilinear_field(&params, &data, &Forcing::Power { p }, &grid, 1).unwrap();
        let mass: Vec<f64> = field.values.iter().map(|row| row.iter().sum::<f64>() * grid.dx).collect();
        for w in mass.windows(2) {
            assert!(w[1] >= w[0] * (1.0 - 1e-12), "p {p}: mass dropped from {} to {}", w[0], w[1]);
        }
    }
}

#[test]
fn refinement_flag_follows_band() {
    let params = ScaleInvariantParams::new(2.0, 0.0).unwrap();
    let data = CauchyProfile::bump_pair(BumpFamily::Smooth, 1.0, 2.0).unwrap();
    for dx in [1.0 / 10.0, 1.0 / 50.0] {
        let grid = GridSpec::covering(dx, 0.5, 1.0, 40.0).unwrap();
        let rec = detect_lifespan_refined(&params, &data, 1.5, &grid, DEFAULT_THRESHOLD).unwrap();
        let (coarse, fine) = rec.richardson.unwrap();
        assert!(rec.blow_up && coarse.is_finite() && fine.is_finite());
        assert_eq!(rec.t_est, fine);
        assert_eq!(rec.converged, (coarse - fine).abs() <= CONVERGENCE_BAND * fine, "dx {dx}");
    }
}

#[test]
fn censored_runs_report_infinite_lifespan() {
    let params = ScaleInvariantParams::new(2.0, 0.0).unwrap();
    let data = CauchyProfile::bump_pair(BumpFamily::Smooth, 1.0, 1e-3).unwrap();
    let grid = GridSpec::covering(1.0 / 20.0, 0.5, 1.0, 5.0).unwrap();
    let rec = detect_lifespan_refined(&params, &data, 2.0, &grid, DEFAULT_THRESHOLD).unwrap();
    assert!(rec.is_censored() && rec.t_est.is_infinite() && rec.converged);
}

#[test]
fn detection_time_insensitive_to_threshold() {
    let params = ScaleInvariantParams::new(2.0, 0.0).unwrap();
    let data = CauchyProfile::bump_pair(BumpFamily::Smooth, 1.0, 0.5).unwrap();
    let grid = GridSpec::covering(1.0 / 40.0, 0.5, 1.0, 60.0).unwrap();
    let hi = detect_lifespan(&params, &data, 1.5, &grid, 1e8).unwrap();
    let lo = detect_lifespan(&params, &data, 1.5, &grid, 1e6).unwrap();
    assert!(hi.blow_up && lo.blow_up);
    assert!(hi.t_est >= lo.t_est && hi.t_est - lo.t_est <= 4.0 * grid.dt(), "{} vs {}", hi.t_est, lo.t_est);
}

#[test]
fn decoupled_system_matches_single_runs() {
    let (c1, c2) = (ScaleInvariantParams::new(2.0, 0.0).unwrap(), ScaleInvariantParams::new(3.0, 0.5).unwrap());
    let sys = SystemParams::new(c1, c2, 1.5, 2.0).unwrap();
    let du = CauchyProfile::bump_pair(BumpFamily::Smooth, 1.0, 1.0).unwrap();
    let dv = CauchyProfile::bump_pair(BumpFamily::Smooth, 1.0, 0.1).unwrap();
    let grid = GridSpec::covering(1.0 / 40.0, 0.5, 1.0, 60.0).unwrap();
    let joint = detect_lifespan_system(&sys, &du, &dv, &grid, DEFAULT_THRESHOLD, Coupling::SelfOnly).unwrap();
    let u = detect_lifespan(&c1, &du, 1.5, &grid, DEFAULT_THRESHOLD).unwrap();
    let v = detect_lifespan(&c2, &dv, 2.0, &grid, DEFAULT_THRESHOLD).unwrap();
    assert!(joint.blow_up);
    assert!((joint.t_est - u.t_est.min(v.t_est)).abs() <= grid.dt(), "{} vs {} {}", joint.t_est, u.t_est, v.t_est);
}

#[test]
fn zero_data_never_blows_up() {
    let params = ScaleInvariantParams::new(2.0, 0.0).unwrap();
    let data = CauchyProfile::bump_pair(BumpFamily::Smooth, 1.0, 0.0).unwrap();
    let grid = GridSpec::covering(1.0 / 20.0, 0.5, 1.0, 30.0).unwrap();
    let rec = detect_lifespan(&params, &data, 2.0, &grid, DEFAULT_THRESHOLD).unwrap();
    assert!(!rec.blow_up && rec.t_est.is_infinite());
}
