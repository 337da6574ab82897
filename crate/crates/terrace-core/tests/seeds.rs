use proptest::prelude::*;
use terrace_core::fronts::{fit_speed, level_position, Field, FrontTrack};
use terrace_core::seeds::*;
use terrace_core::solver::{integrate, Boundary, EscapeMonitor, SolverConfig};
use terrace_core::speeds::{big_lambda, lambda_v};
use terrace_core::{Grid, ModelParams, StatePair};

fn p_star() -> ModelParams {
    ModelParams::new(1.0, 1.21, 0.5, 1.1).unwrap()
}

#[test]
fn bump_peaks_at_its_center_with_exact_support() {
    let g = Grid::with_spacing(-20.0, 20.0, 0.1).unwrap();
    let b = bump(&g, 0.0, 5.0, 1.0).unwrap();
    let (i, m) = b.iter().enumerate().fold((0, 0.0), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    assert_eq!(m, 1.0);
    assert!(g.x(i).abs() < 1e-12);
    assert!(b.iter().sum::<f64>() > 0.0);
    assert!(g.nodes().iter().zip(&b).all(|(x, v)| x.abs() < 5.0 || *v == 0.0));
    assert!(bump(&g, 0.0, 5.0, 1.5).is_err());
    assert!(matches!(bump(&g, 18.0, 5.0, 1.0), Err(SeedError::SupportOutsideGrid { .. })));
}

#[test]
fn heaviside_like_is_monotone_and_one_on_the_left_quarter() {
    let g = Grid::with_spacing(-40.0, 40.0, 0.1).unwrap();
    let h = heaviside_like(&g, 0.0).unwrap();
    assert!(h.windows(2).all(|w| w[1] <= w[0]));
    assert!(g.nodes().iter().zip(&h).all(|(x, v)| *x > -20.0 || *v == 1.0));
    assert!(g.nodes().iter().zip(&h).all(|(x, v)| *x < 0.0 || *v == 0.0));
    assert!(heaviside_like(&g, 50.0).is_err());
}

#[test]
fn heaviside_left_plateau_is_stable_under_dirichlet_closure() {
    let p = p_star();
    let g = Grid::with_spacing(-30.0, 140.0, 0.1).unwrap();
    let u0 = heaviside_like(&g, 0.0).unwrap();
    let s = StatePair::new(g, 0.0, u0, vec![0.0; g.n()]).unwrap();
    let mut cfg = SolverConfig::auto(g, &p, 50.0, 1.0);
    cfg.left_bc = Boundary::Dirichlet { u: 1.0, v: 0.0 };
    let traj = integrate(&s, &p, &cfg, &mut []).unwrap();
    let last = traj.last();
    assert!(g.nodes().iter().zip(&last.u).all(|(x, u)| *x > 0.0 || (u - 1.0).abs() < 1e-9));
}

#[test]
fn exp_tail_examples() {
    let g = Grid::with_spacing(-10.0, 10.0, 0.1).unwrap();
    let rate = 0.5;
    let e = exp_tail(&g, rate, 1.0).unwrap();
    assert!(g.nodes().iter().zip(&e).all(|(x, v)| *x > 1.0 || *v == 1.0));
    let i = g.nodes().iter().position(|x| (x - 3.0).abs() < 1e-9).unwrap();
    assert!((e[i] - (-1.0f64).exp()).abs() < 1e-14);
    assert!(weighted_sup(&g, &e, rate) <= (rate * 1.0).exp() * (1.0 + 1e-12));
    assert!(exp_tail(&g, 0.0, 0.0).is_err());
}

#[test]
fn exp_tail_v_front_moves_at_its_speed() {
    let p = p_star();
    let c1 = 3.0;
    let t_end = 120.0;
    let g = Grid::with_spacing(-20.0, 1.3 * c1 * t_end, 0.1).unwrap();
    let v0 = exp_tail(&g, lambda_v(c1, p.r(), p.d()).unwrap(), 0.0).unwrap();
    let s = StatePair::new(g, 0.0, vec![0.0; g.n()], v0).unwrap();
    let cfg = SolverConfig::auto(g, &p, t_end, 1.0);
    let traj = integrate(&s, &p, &cfg, &mut [&mut EscapeMonitor::default()]).unwrap();
    let rep = fit_speed(&FrontTrack::from_trajectory(&traj, Field::V, 0.5), 0.5).unwrap();
    assert!((rep.fitted_speed - c1).abs() / c1 < 0.02, "{}", rep.fitted_speed);
}

#[test]
fn terrace_pair_has_the_prescribed_decays() {
    let p = p_star();
    let g = Grid::with_spacing(-20.0, 60.0, 0.1).unwrap();
    let (u0, v0) = terrace_pair(&g, &p, 3.0, 1.8, 2.0 * 0.5f64.sqrt()).unwrap();
    let lu = big_lambda(1.8, 3.0, p.a(), 0.0).unwrap();
    let lv = lambda_v(3.0, p.r(), p.d()).unwrap();
    assert!((lu - 0.5845046567).abs() < 1e-9 && (lv - 0.4801960973).abs() < 1e-9);
    let (i, j) = (400, 500);
    let rate = |f: &[f64]| (f[i] / f[j]).ln() / (g.x(j) - g.x(i));
    assert!((rate(&u0) - lu).abs() < 1e-10);
    assert!((rate(&v0) - lv).abs() < 1e-10);
    assert!(g.nodes().iter().zip(&u0).all(|(x, u)| *u <= (-lu * x).exp().min(1.0)));
    assert!(matches!(
        terrace_pair(&g, &p, 2.3, 1.5, 2.0 * 0.5f64.sqrt()),
        Err(SeedError::NotAdmissible { .. })
    ));
}

#[test]
fn llw_background_front_moves_at_llw_speed() {
    let p = p_star();
    let t_end = 200.0;
    let c_llw = 2.0 * 0.5f64.sqrt();
    let g = Grid::with_spacing(0.0, 1.3 * c_llw * t_end, 0.1).unwrap();
    let (u0, v0) = llw_background(&g).unwrap();
    assert!(v0.iter().all(|&v| v == 1.0));
    assert!(*u0.last().unwrap() == 0.0 && u0.iter().any(|&u| u == 1.0));
    let s = StatePair::new(g, 0.0, u0, v0).unwrap();
    let traj = integrate(&s, &p, &SolverConfig::auto(g, &p, t_end, 1.0), &mut []).unwrap();
    let rep = fit_speed(&FrontTrack::from_trajectory(&traj, Field::U, 0.5), 0.5).unwrap();
    assert!((rep.fitted_speed - c_llw).abs() / c_llw < 0.02, "{}", rep.fitted_speed);
    assert!(level_position(traj.last(), Field::U, 0.5).is_some());
}

#[test]
fn sandwich_predicate_orders_competitively() {
    let g = Grid::new(0.0, 1.0, 3).unwrap();
    let mid = StatePair::constant(g, 0.5, 0.5);
    let sub = StatePair::constant(g, 0.2, 0.8);
    let sup = StatePair::constant(g, 0.9, 0.1);
    assert!(sandwiched_by(&mid, &sub, &sup, 0.0).unwrap());
    assert!(!sandwiched_by(&mid, &sup, &sub, 0.0).unwrap());
}

#[test]
fn seed_specs_round_trip_through_json() {
    let spec = PairSpec::Separate {
        u: SeedSpec::HeavisideLike { edge: 0.0 },
        v: SeedSpec::ExpTailAtSpeed { speed: 2.3, anchor: 5.0 },
    };
    let text = serde_json::to_string(&spec).unwrap();
    assert_eq!(serde_json::from_str::<PairSpec>(&text).unwrap(), spec);
}

proptest! {
    #[test]
    fn seeds_stay_in_the_unit_interval(
        center in -5.0f64..5.0,
        hw in 0.5f64..8.0,
        amp in 0.01f64..=1.0,
        rate in 0.01f64..3.0,
        anchor in -10.0f64..10.0,
    ) {
        let g = Grid::with_spacing(-20.0, 20.0, 0.1).unwrap();
        let b = bump(&g, center, hw, amp).unwrap();
        prop_assert!(b.iter().all(|&v| (0.0..=amp).contains(&v)));
        prop_assert!(g.nodes().iter().zip(&b).all(|(x, v)| (x - center).abs() < hw || *v == 0.0));
        let e = exp_tail(&g, rate, anchor).unwrap();
        prop_assert!(e.iter().all(|&v| v > 0.0 && v <= 1.0));
        prop_assert!(weighted_sup(&g, &e, rate) <= (rate * anchor).exp() * (1.0 + 1e-12));
    }
}
