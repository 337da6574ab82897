use proptest::prelude::*;
use terrace_core::fronts::*;
use terrace_core::solver::{integrate, SolverConfig, Trajectory};
use terrace_core::{Grid, ModelParams, StatePair};

fn ramp_state() -> StatePair {
    let g = Grid::new(0.0, 10.0, 101).unwrap();
    let u: Vec<f64> = g.nodes().iter().map(|x| 1.0 - x / 10.0).collect();
    StatePair::new(g, 0.0, u, vec![0.0; 101]).unwrap()
}

#[test]
fn level_position_examples() {
    let s = ramp_state();
    assert!((level_position(&s, Field::U, 0.5).unwrap() - 5.0).abs() < 1e-12);
    let ones = StatePair::constant(s.grid, 1.0, 1.0);
    assert_eq!(level_position(&ones, Field::U, 0.5), None);
    assert_eq!(level_position(&s, Field::V, 0.5), None);
}

#[test]
fn fit_speed_on_exact_line() {
    let times: Vec<f64> = (0..=40).map(|i| i as f64).collect();
    let xs = times.iter().map(|t| 2.0 * t + 5.0).collect();
    let rep = fit_speed(&FrontTrack::from_samples(0.5, times, xs), 0.5).unwrap();
    assert!((rep.fitted_speed - 2.0).abs() < 1e-12);
    assert!((rep.intercept - 5.0).abs() < 1e-10);
    assert!(rep.rms_residual < 1e-10);
    assert!(rep.fit_window.0 < rep.fit_window.1);
    let with = rep.with_prediction(2.5);
    assert!((with.relative_error.unwrap() + 0.2).abs() < 1e-12);
}

#[test]
fn fit_speed_sees_through_logarithmic_drift() {
    let times: Vec<f64> = (1..=200).map(|i| i as f64).collect();
    let xs = times.iter().map(|t| 2.2 * t - 1.5 * t.ln()).collect();
    let rep = fit_speed(&FrontTrack::from_samples(0.5, times, xs), 0.5).unwrap();
    assert!((2.17..=2.20).contains(&rep.fitted_speed), "{}", rep.fitted_speed);
}

#[test]
fn fit_speed_rejects_bad_tracks() {
    let rev = FrontTrack::from_samples(0.5, (0..20).rev().map(f64::from).collect(), vec![0.0; 20]);
    assert!(matches!(fit_speed(&rev, 0.5), Err(FrontError::NonMonotoneTimes(_))));
    let short = FrontTrack::from_samples(0.5, (0..5).map(f64::from).collect(), vec![0.0; 5]);
    assert!(matches!(fit_speed(&short, 1.0), Err(FrontError::TooFewSamples { .. })));
    let ok = FrontTrack::from_samples(0.5, (0..20).map(f64::from).collect(), vec![0.0; 20]);
    assert!(fit_speed(&ok, 0.0).is_err());
}

#[test]
fn plateau_of_a_constant_state_is_the_right_half() {
    let g = Grid::new(-10.0, 10.0, 201).unwrap();
    let s = StatePair::constant(g, 1.0, 0.0);
    let (lo, hi) = plateau_extent(&s, (1.0, 0.0), 0.1).unwrap();
    assert_eq!((lo, hi), (0.0, 10.0));
    assert_eq!(plateau_extent(&s, (0.0, 1.0), 0.1), None);
}

fn constant_trajectory(t: f64, u: f64, v: f64) -> Trajectory {
    let p = ModelParams::new(1.0, 9.0, 0.5, 1.1).unwrap();
    let g = Grid::with_spacing(0.0, 400.0, 0.5).unwrap();
    let cfg = SolverConfig::auto(g, &p, t, t);
    let s = StatePair::constant(g, u, v);
    integrate(&s, &p, &cfg, &mut []).unwrap()
}

#[test]
fn wedge_check_examples() {
    let traj = constant_trajectory(10.0, 0.0, 1.0);
    assert!(wedge_check(&traj, 2.0, 6.0, 0.5, 0.05).unwrap());
    assert!(!wedge_check(&traj, 2.0, 6.0, 0.5, 0.0).unwrap());
    assert!(matches!(
        wedge_check(&traj, 2.0, 1.0, 0.5, 0.05),
        Err(FrontError::EmptyWedge { .. })
    ));
}

#[test]
fn tracks_csv_has_blank_cells_for_absent_fronts() {
    let u = FrontTrack { level: 0.5, times: vec![0.0, 1.0], positions: vec![Some(1.5), None] };
    let v = FrontTrack { level: 0.5, times: vec![0.0, 1.0], positions: vec![Some(2.5), Some(3.0)] };
    let mut buf = Vec::new();
    write_tracks_csv(&u, &v, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x_front_u,x_front_v");
    assert!(lines[2].contains(",,"));
}

proptest! {
    #[test]
    fn level_position_is_translation_covariant(
        vals in prop::collection::vec(0.0f64..=1.0, 30),
        k in 0usize..20,
        level in 0.05f64..0.95,
    ) {
        let n = 80;
        let g = Grid::new(0.0, 7.9, n).unwrap();
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        a[10..40].copy_from_slice(&vals);
        b[10 + k..40 + k].copy_from_slice(&vals);
        let sa = StatePair::new(g, 0.0, a, vec![0.0; n]).unwrap();
        let sb = StatePair::new(g, 0.0, b, vec![0.0; n]).unwrap();
        match (level_position(&sa, Field::U, level), level_position(&sb, Field::U, level)) {
            (Some(xa), Some(xb)) => prop_assert!((xb - xa - k as f64 * g.dx()).abs() < 1e-9),
            (None, None) => {}
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn lower_levels_sit_further_right_on_decreasing_fields(
        mut vals in prop::collection::vec(0.0f64..=1.0, 50),
        l1 in 0.05f64..0.5,
        l2 in 0.5f64..0.95,
    ) {
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        vals[0] = 1.0;
        *vals.last_mut().unwrap() = 0.0;
        let g = Grid::new(0.0, 4.9, 50).unwrap();
        let s = StatePair::new(g, 0.0, vals, vec![0.0; 50]).unwrap();
        let x1 = level_position(&s, Field::U, l1).unwrap();
        let x2 = level_position(&s, Field::U, l2).unwrap();
        prop_assert!(x1 >= x2);
    }

    #[test]
    fn exact_linear_tracks_are_fit_exactly(c in -5.0f64..5.0, b in -50.0f64..50.0) {
        let times: Vec<f64> = (0..30).map(|i| 0.5 * i as f64).collect();
        let xs = times.iter().map(|t| c * t + b).collect();
        let rep = fit_speed(&FrontTrack::from_samples(0.5, times, xs), 1.0).unwrap();
        prop_assert!((rep.fitted_speed - c).abs() < 1e-12);
        prop_assert!(rep.rms_residual < 1e-10);
    }
}
