use proptest::prelude::*;
use terrace_core::fronts::{fit_speed, Field, FrontTrack};
use terrace_core::seeds;
use terrace_core::solver::*;
use terrace_core::{Grid, ModelParams, StatePair};

fn p_star() -> ModelParams {
    ModelParams::new(1.0, 1.21, 0.5, 1.1).unwrap()
}

#[test]
fn cfl_limit_examples() {
    let g = Grid::with_spacing(0.0, 10.0, 0.1).unwrap();
    let p4 = ModelParams::new(4.0, 0.5, 0.5, 1.1).unwrap();
    let p1 = ModelParams::new(1.0, 0.5, 0.5, 1.1).unwrap();
    assert!((cfl_limit(&g, &p1) - 0.005).abs() < 1e-15);
    assert!((cfl_limit(&g, &p4) - 0.00125).abs() < 1e-15);
    let reaction_bound: f64 = 1.0 / (4.0 * 1.21 * 2.1);
    assert!((reaction_bound - 0.0983).abs() < 1e-3);
    assert!(cfl_limit(&g, &p_star()) < reaction_bound);
}

fn cfg_for(g: Grid, p: &ModelParams, t_end: f64, every: f64) -> SolverConfig {
    SolverConfig::auto(g, p, t_end, every)
}

#[test]
fn equilibria_are_fixed_by_a_step() {
    let p = p_star();
    let g = Grid::with_spacing(-5.0, 5.0, 0.1).unwrap();
    let cfg = cfg_for(g, &p, 1.0, 1.0);
    for (u, v) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)] {
        let s = StatePair::constant(g, u, v);
        let n = step(&s, &p, &cfg).unwrap();
        assert_eq!(n.u, s.u);
        assert_eq!(n.v, s.v);
    }
}

#[test]
fn homogeneous_step_is_an_euler_step_of_the_ode() {
    let p = p_star();
    let g = Grid::with_spacing(-5.0, 5.0, 0.1).unwrap();
    let cfg = cfg_for(g, &p, 1.0, 1.0);
    let s = StatePair::constant(g, 0.5, 0.5);
    let n = step(&s, &p, &cfg).unwrap();
    let dt = cfg.dt;
    let eu = 0.5 + dt * 0.5 * (1.0 - 0.5 - 0.5 * 0.5);
    let ev = 0.5 + dt * 1.21 * 0.5 * (1.0 - 0.5 - 1.1 * 0.5);
    assert!(n.u.iter().all(|&u| (u - eu).abs() < 1e-14));
    assert!(n.v.iter().all(|&v| (v - ev).abs() < 1e-14));
    assert!((n.t - dt).abs() < 1e-15);
}

#[test]
fn oversized_dt_is_rejected() {
    let p = p_star();
    let g = Grid::with_spacing(-5.0, 5.0, 0.1).unwrap();
    let mut cfg = cfg_for(g, &p, 1.0, 1.0);
    cfg.dt = 2.0 * cfl_limit(&g, &p);
    let s = StatePair::constant(g, 0.5, 0.5);
    assert!(matches!(step(&s, &p, &cfg), Err(SolverError::CflViolation { .. })));
    assert!(matches!(integrate(&s, &p, &cfg, &mut []), Err(SolverError::CflViolation { .. })));
}

#[test]
fn zero_horizon_returns_initial_state() {
    let p = p_star();
    let g = Grid::with_spacing(-5.0, 5.0, 0.1).unwrap();
    let s = StatePair::constant(g, 0.3, 0.6);
    let traj = integrate(&s, &p, &cfg_for(g, &p, 0.0, 1.0), &mut []).unwrap();
    assert_eq!(traj.snapshots.len(), 1);
    assert_eq!(traj.snapshots[0], s);
}

#[test]
fn homogeneous_state_converges_to_u_equilibrium() {
    let p = p_star();
    let g = Grid::new(0.0, 1.0, 5).unwrap();
    let s = StatePair::constant(g, 0.25 * (1.0 - p.a()), 1.0);
    let traj = integrate(&s, &p, &cfg_for(g, &p, 80.0, 1.0), &mut []).unwrap();
    let last = traj.last();
    assert!((last.t - 80.0).abs() < 1e-9);
    assert!(last.u.iter().all(|&u| u > 0.9));
    assert!(last.v.iter().all(|&v| v < 0.1));
    assert!(traj.snapshots.windows(2).all(|w| w[1].t > w[0].t));
}

#[test]
fn lone_v_spreads_at_kpp_speed() {
    let p = p_star();
    let t_end = 150.0;
    let g = Grid::with_spacing(-20.0, 1.3 * 2.2 * t_end, 0.1).unwrap();
    let v0 = seeds::bump(&g, 0.0, 5.0, 1.0).unwrap();
    let s = StatePair::new(g, 0.0, vec![0.0; g.n()], v0).unwrap();
    let traj = integrate(&s, &p, &cfg_for(g, &p, t_end, 1.0), &mut [&mut EscapeMonitor::default()]).unwrap();
    let rep = fit_speed(&FrontTrack::from_trajectory(&traj, Field::V, 0.5), 0.5).unwrap();
    assert!((rep.fitted_speed - 2.2).abs() / 2.2 < 0.02, "{}", rep.fitted_speed);
}

#[test]
fn escape_is_reported() {
    let p = p_star();
    let g = Grid::with_spacing(-10.0, 20.0, 0.1).unwrap();
    let v0 = seeds::bump(&g, 0.0, 5.0, 1.0).unwrap();
    let s = StatePair::new(g, 0.0, vec![0.0; g.n()], v0).unwrap();
    // The monitor only sees snapshots, so the cadence must resolve the 10·dx margin.
    let r = integrate(&s, &p, &cfg_for(g, &p, 30.0, 0.1), &mut [&mut EscapeMonitor::default()]);
    assert!(matches!(r, Err(SolverError::DomainEscape { field: "v", .. })));
}

#[test]
fn runs_are_bitwise_reproducible() {
    let p = p_star();
    let g = Grid::with_spacing(-30.0, 30.0, 0.1).unwrap();
    let u0 = seeds::heaviside_like(&g, 0.0).unwrap();
    let v0 = seeds::bump(&g, 10.0, 5.0, 1.0).unwrap();
    let s = StatePair::new(g, 0.0, u0, v0).unwrap();
    let cfg = cfg_for(g, &p, 5.0, 1.0);
    let a = integrate(&s, &p, &cfg, &mut []).unwrap();
    let b = integrate(&s, &p, &cfg, &mut []).unwrap();
    assert_eq!(a.snapshots, b.snapshots);
}

fn comparison_pair(g: Grid) -> (StatePair, StatePair) {
    let u0 = seeds::heaviside_like(&g, -5.0).unwrap();
    let v0 = seeds::bump(&g, 10.0, 6.0, 1.0).unwrap();
    let bump = seeds::bump(&g, 0.0, 4.0, 1.0).unwrap();
    let u1: Vec<f64> = u0.iter().zip(&bump).map(|(u, b)| (u + 0.1 * b).min(1.0)).collect();
    let v1: Vec<f64> = v0.iter().map(|v| 0.9 * v).collect();
    (
        StatePair::new(g, 0.0, u0, v0).unwrap(),
        StatePair::new(g, 0.0, u1, v1).unwrap(),
    )
}

#[test]
fn comparison_monitor_examples() {
    let p = p_star();
    let g = Grid::with_spacing(-30.0, 60.0, 0.2).unwrap();
    let cfg = cfg_for(g, &p, 50.0, 1.0);
    let (sub, sup) = comparison_pair(g);
    let t_sub = integrate(&sub, &p, &cfg, &mut []).unwrap();
    let t_sup = integrate(&sup, &p, &cfg, &mut []).unwrap();
    assert!(comparison_monitor(&t_sub, &t_sub).unwrap());
    assert!(comparison_monitor(&t_sub, &t_sup).unwrap());
    assert!(!comparison_monitor(&t_sup, &t_sub).unwrap());
}

#[test]
fn space_time_csv_has_one_row_per_node_and_snapshot() {
    let p = p_star();
    let g = Grid::new(0.0, 1.0, 5).unwrap();
    let s = StatePair::constant(g, 0.5, 0.5);
    let traj = integrate(&s, &p, &cfg_for(g, &p, 2.0, 1.0), &mut []).unwrap();
    let mut buf = Vec::new();
    write_space_time_csv(&traj, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x,u,v");
    assert_eq!(lines.len(), 1 + 5 * traj.snapshots.len());
    let u: f64 = lines[1].split(',').nth(2).unwrap().parse().unwrap();
    assert_eq!(u, 0.5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn invariant_region_is_preserved(
        u in prop::collection::vec(0.0f64..=1.0, 60),
        v in prop::collection::vec(0.0f64..=1.0, 60),
        frac in 0.05f64..=0.75,
        d in 0.2f64..4.0,
        r in 0.1f64..9.0,
    ) {
        let p = ModelParams::new(d, r, 0.5, 1.1).unwrap();
        let g = Grid::new(0.0, 6.0, 60).unwrap();
        let s = StatePair::new(g, 0.0, u, v).unwrap();
        let dt = frac * cfl_limit(&g, &p);
        let cfg = SolverConfig { dt, ..SolverConfig::auto(g, &p, 200.0 * dt, 20.0 * dt) };
        let traj = integrate(&s, &p, &cfg, &mut []).unwrap();
        for snap in &traj.snapshots {
            prop_assert!(snap.range_violation(1e-12).is_none());
        }
    }
}
