//! Acceptance criteria A1–A11, run in order with one PASS/FAIL line each.
//!
//! Expected values come from closed forms evaluated here, independently of the speed
//! module. Tolerances are the constants below.

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use std::cell::Cell;
use std::io::Write;
use std::path::PathBuf;
use terrace_core::barriers::{assemble, certify_residuals, AuxConstants, BarrierSpeeds, Lattice, Which, MARGIN_CELLS};
use terrace_core::fronts::{fit_speed, wedge_check, Field, FrontTrack};
use terrace_core::model::competitive_leq_tol;
use terrace_core::seeds::bump;
use terrace_core::solver::{comparison_monitor, integrate, SolverConfig, Trajectory};
use terrace_core::speeds;
use terrace_core::waves::{solve_profile, solve_profile_from, uniqueness_condition, InitialGuess};
use terrace_core::{Grid, ModelParams, StatePair};
use terrace_lab::run::{simulate, Run};
use terrace_lab::Scenario;

const SPEED_TOL: f64 = 0.03;
const LLW_MARGIN: f64 = 1.10;
const NONEXISTENCE_FACTOR: f64 = 0.97;
const EXTINCTION_SUP: f64 = 0.01;
const A1_SECONDS: f64 = 60.0;
const A2_SECONDS: f64 = 90.0;
const A3_SECONDS: f64 = 60.0;
const CERT_SLACK: f64 = 1e-8;
const IDENTITY_TOL: f64 = 1e-12;
const ORDER_TOL: f64 = 1e-9;
const ORDER_CASES: u32 = 20;
const PHI_DECAY_TOL: f64 = 0.02;
const PSI_DECAY_TOL: f64 = 0.05;
const RESOLVE_TOL: f64 = 1e-6;
const QUADRATIC_TOL: f64 = 1e-12;
const TEMPORAL_RATIO: (f64, f64) = (2.0, 0.10);
const SPATIAL_RATIO: (f64, f64) = (4.0, 0.20);
const RANGE_TOL: f64 = 1e-12;

// Independent oracles.

fn f_oracle(c: f64, a: f64) -> f64 {
    c - (c * c - 4.0 * (1.0 - a)).sqrt() + 2.0 * a.sqrt()
}

/// `f` is decreasing on `[2√(1-a), ∞)`; bisection for `f(c) = y`.
fn f_inverse_oracle(y: f64, a: f64) -> f64 {
    let (mut lo, mut hi) = (2.0 * (1.0 - a).sqrt(), 100.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f_oracle(mid, a) > y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn smaller_root(a2: f64, a1: f64, a0: f64) -> f64 {
    (a1 - (a1 * a1 - 4.0 * a2 * a0).sqrt()) / (2.0 * a2)
}

fn p_star() -> ModelParams {
    ModelParams::new(1.0, 1.21, 0.5, 1.1).unwrap()
}

fn scenario(name: &str) -> Scenario {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "scenarios", &format!("{name}.json")].iter().collect();
    Scenario::load(&path).unwrap()
}

type Outcome = (bool, String);

struct Suite {
    max_excess: Cell<f64>,
    case3: std::cell::RefCell<Option<Run>>,
}

impl Suite {
    fn track(&self, traj: &Trajectory) {
        self.max_excess.set(self.max_excess.get().max(traj.max_range_excess()));
    }

    fn run(&self, name: &str) -> Run {
        let r = simulate(&scenario(name), None).unwrap();
        self.track(&r.trajectory);
        r
    }
}

fn fitted(r: &Run, field: Field, window: f64) -> f64 {
    fit_speed(&FrontTrack::from_trajectory(&r.trajectory, field, 0.5), window)
        .unwrap()
        .fitted_speed
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y) / y
}

fn a1(s: &Suite) -> Outcome {
    let r = s.run("trichotomy_case2");
    let p = p_star();
    let cv = 2.0 * (p.r() * p.d()).sqrt();
    let cu = f_inverse_oracle(cv, p.a());
    let llw = 2.0 * (1.0 - p.a()).sqrt();
    let (fv, fu) = (fitted(&r, Field::V, 0.5), fitted(&r, Field::U, 0.5));
    let t = r.summary.wall_clock_s;
    let pass = rel(fv, cv).abs() <= SPEED_TOL
        && rel(fu, cu).abs() <= SPEED_TOL
        && fu >= LLW_MARGIN * llw
        && t < A1_SECONDS;
    (
        pass,
        format!("v {fv:.4} vs {cv:.4} ({:+.2}%), u {fu:.4} vs {cu:.4} ({:+.2}%), u/c_LLW {:.3}, {t:.1} s", 100.0 * rel(fv, cv), 100.0 * rel(fu, cu), fu / llw),
    )
}

fn a2(s: &Suite) -> Outcome {
    let r = s.run("trichotomy_case3");
    let p = r.summary.params;
    let cv = 2.0 * (p.r() * p.d()).sqrt();
    let cu = 2.0 * (1.0 - p.a()).sqrt();
    // Linear determinacy by the LLW inequality, checked directly.
    let llw = p.d() <= 2.0 && (p.a() * p.b() - 1.0) / (1.0 - p.a()) <= (2.0 - p.d()) / p.r();
    let (fv, fu) = (fitted(&r, Field::V, 0.5), fitted(&r, Field::U, 0.25));
    let t = r.summary.wall_clock_s;
    let pass = llw && rel(fv, cv).abs() <= SPEED_TOL && rel(fu, cu).abs() <= SPEED_TOL && t < A2_SECONDS;
    let out = (
        pass,
        format!("v {fv:.4} vs {cv:.4} ({:+.2}%), u {fu:.4} vs {cu:.4} ({:+.2}%), LLW condition {llw}, {t:.1} s", 100.0 * rel(fv, cv), 100.0 * rel(fu, cu)),
    );
    *s.case3.borrow_mut() = Some(r);
    out
}

fn a3(s: &Suite) -> Outcome {
    let r = s.run("trichotomy_case1");
    let last = r.trajectory.last();
    let sup_v = last.v.iter().copied().fold(0.0, f64::max);
    let fu = fitted(&r, Field::U, 0.5);
    let t = r.summary.wall_clock_s;
    let pass = sup_v < EXTINCTION_SUP && rel(fu, 2.0).abs() <= SPEED_TOL && t < A3_SECONDS;
    (
        pass,
        format!("sup v(T={}) {sup_v:.2e}, u {fu:.4} vs 2 ({:+.2}%), {t:.1} s", last.t, 100.0 * rel(fu, 2.0)),
    )
}

fn a4(s: &Suite) -> Outcome {
    let guard = s.case3.borrow();
    let r = guard.as_ref().expect("A2 runs first");
    let ok = wedge_check(&r.trajectory, 2.0, 6.0, 0.5, 0.05).unwrap();
    (ok, format!("wedge (2, 6), eps_geom 0.5, eps_val 0.05 at T = {}", r.trajectory.last().t))
}

fn a5(s: &Suite) -> Outcome {
    let r = s.run("terrace");
    let (fv, fu) = (fitted(&r, Field::V, 0.5), fitted(&r, Field::U, 0.5));
    let pass = rel(fv, 3.0).abs() <= SPEED_TOL && rel(fu, 1.8).abs() <= SPEED_TOL;
    (
        pass,
        format!("v {fv:.4} vs 3 ({:+.2}%), u {fu:.4} vs 1.8 ({:+.2}%) at T = {}", 100.0 * rel(fv, 3.0), 100.0 * rel(fu, 1.8), r.trajectory.last().t),
    )
}

fn a6(s: &Suite) -> Outcome {
    let r = s.run("nonexistence");
    let p = p_star();
    let bound = NONEXISTENCE_FACTOR * f_inverse_oracle(2.3, p.a());
    let fu = fitted(&r, Field::U, 0.5);
    (fu >= bound, format!("u {fu:.4} ≥ {bound:.4}; conjectured limit {:.4}", f_inverse_oracle(2.3, p.a())))
}

fn a7(_: &Suite) -> Outcome {
    let p = p_star();
    let lattice = Lattice { nt: 200, nx: 400, t_end: 40.0 };
    let cases = [
        (Which::TerraceSuper, BarrierSpeeds::new(3.0, 1.8)),
        (Which::TerraceSub, BarrierSpeeds::new(3.0, 1.8)),
        (Which::CompactSuper, BarrierSpeeds::new(2.2, 1.8)),
        (Which::NonexistenceSub, BarrierSpeeds::new(2.3, 1.5)),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (which, sp) in cases {
        let asm = assemble(which, &p, sp, 0.02, &AuxConstants::default()).unwrap();
        let rep = certify_residuals(&asm, &lattice, MARGIN_CELLS).unwrap();
        let worst = rep
            .pieces
            .iter()
            .flat_map(|m| [m.worst_u, m.worst_v])
            .fold(f64::INFINITY, f64::min);
        let ident = rep.identities.iter().map(|i| i.max_residual).fold(0.0, f64::max);
        let ok = rep.nt >= 200
            && rep.nx >= 400
            && rep.t_cert >= 40.0
            && rep.slack <= CERT_SLACK
            && rep.wrong_sign == 0
            && rep.identities.iter().all(|i| i.max_residual < IDENTITY_TOL);
        pass &= ok;
        parts.push(format!("{} {} wrong-sign/{} (worst {worst:.1e}, identity {ident:.1e})", which.name(), rep.wrong_sign, rep.samples));
    }
    (pass, parts.join("; "))
}

fn a8(s: &Suite) -> Outcome {
    let p = p_star();
    let g = Grid::with_spacing(-140.0, 140.0, 0.2).unwrap();
    let cfg = SolverConfig::auto(g, &p, 50.0, 1.0);
    let strategy = (
        (-20.0..20.0f64, 1.0..8.0f64, 0.05..1.0f64),
        (-20.0..20.0f64, 1.0..8.0f64, 0.0..1.0f64),
        (-20.0..20.0f64, 1.0..8.0f64, 0.05..1.0f64),
        0.0..1.0f64,
    );
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: ORDER_CASES,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let mut held = 0;
    for _ in 0..ORDER_CASES {
        let ((cu, wu, au), (ce, we, ae), (cv, wv, av), shrink) =
            strategy.new_tree(&mut runner).unwrap().current();
        let u_lo = bump(&g, cu, wu, au).unwrap();
        let extra = bump(&g, ce, we, ae).unwrap();
        let u_hi: Vec<f64> = u_lo.iter().zip(&extra).map(|(a, b)| (a + b).min(1.0)).collect();
        let v_hi = bump(&g, cv, wv, av).unwrap();
        let v_lo: Vec<f64> = v_hi.iter().map(|x| shrink * x).collect();
        let sub = StatePair::new(g, 0.0, u_lo, v_hi).unwrap();
        let sup = StatePair::new(g, 0.0, u_hi, v_lo).unwrap();
        assert!(competitive_leq_tol(&sub, &sup, 0.0).unwrap());
        let t1 = integrate(&sub, &p, &cfg, &mut []).unwrap();
        let t2 = integrate(&sup, &p, &cfg, &mut []).unwrap();
        s.track(&t1);
        s.track(&t2);
        if comparison_monitor(&t1, &t2).unwrap() {
            held += 1;
        }
    }
    (
        held == ORDER_CASES,
        format!("{held}/{ORDER_CASES} ordered pairs stay ordered at every snapshot to T = 50 (tol {ORDER_TOL:e})"),
    )
}

fn a9(_: &Suite) -> Outcome {
    let p = p_star();
    let c = 1.8;
    let w = solve_profile(c, &p, 0.0, 300.0, 6001).unwrap();
    let lam = smaller_root(1.0, c, 1.0 - p.a());
    let q = p.r() * (p.b() - 1.0);
    let lam_minus = ((c * c + 4.0 * p.d() * q).sqrt() - c) / (2.0 * p.d());
    let other = solve_profile_from(c, &p, 0.0, 300.0, 6001, InitialGuess { width: 15.0, shift: 20.0 }).unwrap();
    let dist = w.sup_distance(&other).unwrap();
    let (ep, em) = (rel(w.measured_decay_plus, lam), rel(w.measured_decay_minus, lam_minus));
    let pass = w.phi_monotone
        && w.psi_monotone
        && ep.abs() <= PHI_DECAY_TOL
        && em.abs() <= PSI_DECAY_TOL
        && uniqueness_condition(&p)
        && dist < RESOLVE_TOL;
    (
        pass,
        format!(
            "monotone ({}, {}), φ decay {:.6} vs {lam:.6} ({:+.2}%), ψ decay {:.6} vs {lam_minus:.6} ({:+.2}%), re-solve {dist:.1e}",
            w.phi_monotone, w.psi_monotone, w.measured_decay_plus, 100.0 * ep, w.measured_decay_minus, 100.0 * em
        ),
    )
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

fn a10(_: &Suite) -> Outcome {
    let p = p_star();
    let (a, r, d) = (p.a(), p.r(), p.d());
    let mut worst: f64 = 0.0;
    for c in log_grid(2.0 * (1.0 - a).sqrt() * (1.0 + 1e-9), 20.0, 50) {
        let l = speeds::lambda_u(c, a, 0.0).unwrap();
        worst = worst.max((l * l - c * l + 1.0 - a).abs());
    }
    for c in log_grid(2.0 * (r * d).sqrt() * (1.0 + 1e-9), 20.0, 50) {
        let l = speeds::lambda_v(c, r, d).unwrap();
        worst = worst.max((d * l * l - c * l + r).abs());
    }
    for c in log_grid(1.45, 3.0, 50) {
        let ct = 1.05 * f_oracle(c, a).max(c);
        let big = speeds::big_lambda(c, ct, a, 0.0).unwrap();
        let lam = smaller_root(1.0, c, 1.0 - a);
        worst = worst.max((big * big - ct * big + lam * (ct - c) + 1.0).abs());
    }
    // Images of a log grid over the domain of f, so the branch point c = 2√(1-a) is included.
    let mut worst_inv: f64 = 0.0;
    for c in log_grid(2.0 * (1.0 - a).sqrt(), 40.0, 50) {
        let y = f_oracle(c, a);
        worst_inv = worst_inv.max((speeds::f_of(speeds::f_inverse(y, a).unwrap(), a).unwrap() - y).abs());
    }
    let mut pairs = 0;
    let mut estimate_ok = true;
    for c2 in log_grid(1.45, 3.0, 12) {
        for c1 in log_grid(2.25, 8.0, 12) {
            if !(c1 > f_oracle(c2, a) && c1 > c2) {
                continue;
            }
            pairs += 1;
            let lam = smaller_root(1.0, c2, 1.0 - a);
            let big = smaller_root(1.0, c1, lam * (c1 - c2) + 1.0);
            estimate_ok &= (big * big + 1.0) / big < c1 && speeds::estimate_speed_w_holds(c2, c1, a).unwrap();
        }
    }
    let pass = worst < QUADRATIC_TOL && worst_inv < QUADRATIC_TOL && estimate_ok && pairs > 0;
    (
        pass,
        format!("quadratic residual {worst:.1e}, f∘f⁻¹ {worst_inv:.1e}, speed-w estimate on {pairs} admissible pairs: {estimate_ok}"),
    )
}

fn rk4(p: &ModelParams, mut y: (f64, f64), t: f64, n: usize) -> (f64, f64) {
    let h = t / n as f64;
    let rhs = |(u, v): (f64, f64)| (u * (1.0 - u - p.a() * v), p.r() * v * (1.0 - v - p.b() * u));
    for _ in 0..n {
        let k1 = rhs(y);
        let k2 = rhs((y.0 + 0.5 * h * k1.0, y.1 + 0.5 * h * k1.1));
        let k3 = rhs((y.0 + 0.5 * h * k2.0, y.1 + 0.5 * h * k2.1));
        let k4 = rhs((y.0 + h * k3.0, y.1 + h * k3.1));
        y.0 += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        y.1 += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
    }
    y
}

fn with_dt(g: Grid, p: &ModelParams, t_end: f64, dt: f64) -> SolverConfig {
    SolverConfig {
        dt,
        ..SolverConfig::auto(g, p, t_end, t_end)
    }
}

fn a11(s: &Suite) -> Outcome {
    let p = p_star();
    let y0 = (0.3, 0.6);
    let t_end = 2.0;
    let exact = rk4(&p, y0, t_end, 20_000);
    let g = Grid::new(0.0, 1.0, 3).unwrap();
    let err = |dt: f64| {
        let s0 = StatePair::constant(g, y0.0, y0.1);
        let traj = integrate(&s0, &p, &with_dt(g, &p, t_end, dt), &mut []).unwrap();
        s.track(&traj);
        let last = traj.last();
        (last.u[1] - exact.0).abs().max((last.v[1] - exact.1).abs())
    };
    let temporal = err(0.02) / err(0.01);

    let dxs = [0.2, 0.1, 0.05];
    let fine = Grid::with_spacing(-40.0, 40.0, dxs[2]).unwrap();
    let dt = t_end / (t_end / (0.75 * terrace_core::solver::cfl_limit(&fine, &p))).ceil();
    let runs: Vec<StatePair> = dxs
        .iter()
        .map(|&dx| {
            let g = Grid::with_spacing(-40.0, 40.0, dx).unwrap();
            let u: Vec<f64> = g.nodes().iter().map(|&x| 0.5 * (1.0 - (x / 4.0).tanh())).collect();
            let v: Vec<f64> = g.nodes().iter().map(|&x| 0.5 * (1.0 + (x / 4.0).tanh())).collect();
            let s0 = StatePair::new(g, 0.0, u, v).unwrap();
            let traj = integrate(&s0, &p, &with_dt(g, &p, t_end, dt), &mut []).unwrap();
            s.track(&traj);
            traj.last().clone()
        })
        .collect();
    let n0 = runs[0].grid.n();
    let d1 = (0..n0)
        .map(|i| (runs[0].u[i] - runs[1].u[2 * i]).abs().max((runs[0].v[i] - runs[1].v[2 * i]).abs()))
        .fold(0.0, f64::max);
    let d2 = (0..n0)
        .map(|i| (runs[1].u[2 * i] - runs[2].u[4 * i]).abs().max((runs[1].v[2 * i] - runs[2].v[4 * i]).abs()))
        .fold(0.0, f64::max);
    let spatial = d1 / d2;
    let excess = s.max_excess.get();
    let in_band = |x: f64, (target, tol): (f64, f64)| (x - target).abs() <= tol * target;
    let pass = in_band(temporal, TEMPORAL_RATIO) && in_band(spatial, SPATIAL_RATIO) && excess <= RANGE_TOL;
    (
        pass,
        format!("temporal ratio {temporal:.3}, spatial ratio {spatial:.3}, worst invariant-region excess over the suite {excess:.1e}"),
    )
}

#[test]
fn acceptance_criteria() {
    let suite = Suite {
        max_excess: Cell::new(0.0),
        case3: std::cell::RefCell::new(None),
    };
    let criteria: [(&str, fn(&Suite) -> Outcome); 11] = [
        ("A1", a1),
        ("A2", a2),
        ("A3", a3),
        ("A4", a4),
        ("A5", a5),
        ("A6", a6),
        ("A7", a7),
        ("A8", a8),
        ("A9", a9),
        ("A10", a10),
        ("A11", a11),
    ];
    let mut failed = Vec::new();
    // Written to the process stdout directly so the lines survive test output capture.
    let mut out = std::io::stdout();
    writeln!(out).unwrap();
    for (id, check) in criteria {
        let (pass, detail) = check(&suite);
        writeln!(out, "{id} {} {detail}", if pass { "PASS" } else { "FAIL" }).unwrap();
        out.flush().unwrap();
        if !pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
