use super::blocks::{self, Block, BlockKind, Profile};
use super::{
    BarrierAssembly, BarrierError, Component, Interface, Line, Order, PieceBody, Probe,
    PropertyCheck, Rule, Which,
};
use crate::fronts::Field;
use crate::model::ModelParams;
use crate::numerics::{linear_fit, Tabulated};
use crate::speeds::{self, SpeedError};
use crate::waves;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

type Result<T> = std::result::Result<T, BarrierError>;

/// Speeds of an assembly. Terrace: `(c1, c2)`. Compact: `c2` (the fast speed is `2√(rd)`).
/// Nonexistence: `(c1, c2)` plus the intermediate `c`, `c̃`, defaulted when absent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierSpeeds {
    pub c1: f64,
    pub c2: f64,
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default)]
    pub c_tilde: Option<f64>,
}

impl BarrierSpeeds {
    pub fn new(c1: f64, c2: f64) -> Self {
        BarrierSpeeds {
            c1,
            c2,
            c: None,
            c_tilde: None,
        }
    }
}

/// Free constants of the constructions; `None` selects the documented default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AuxConstants {
    /// `κ = κ̃` of the `θ` junction (default `δ`), or `κ` of the nonexistence sub (default `δ/4`).
    pub kappa: Option<f64>,
    /// `ζ` of the nonexistence sub (default `max(L, χ⁻¹(δ/2)) + 1`).
    pub zeta: Option<f64>,
    /// Amplitude `C` of `v̄` in the terrace sub.
    pub sub_amplitude: f64,
    /// `c_LLW^δ`; computed by linear determinacy when absent.
    pub c_llw_delta: Option<f64>,
    pub wave_truncation: f64,
    pub wave_mesh: usize,
    /// Time range over which frozen translations are validated.
    pub horizon: f64,
    /// `max ω` target above `1-2δ` in the compact assembly.
    pub omega_headroom: f64,
}

impl Default for AuxConstants {
    fn default() -> Self {
        AuxConstants {
            kappa: None,
            zeta: None,
            sub_amplitude: 0.02,
            c_llw_delta: None,
            wave_truncation: 300.0,
            wave_mesh: 6001,
            horizon: 50.0,
            omega_headroom: 1e-4,
        }
    }
}

/// Relative reduction of the `α` kinetics in the nonexistence sub.
pub const ALPHA_SLACK: f64 = 1e-3;

fn hyp(e: SpeedError) -> BarrierError {
    match e {
        SpeedError::DeltaTooLarge(m) | SpeedError::DomainError(m) | SpeedError::BoundaryCase(m) => {
            BarrierError::HypothesisViolated(m)
        }
    }
}

fn violated<T>(msg: String) -> Result<T> {
    Err(BarrierError::HypothesisViolated(msg))
}

fn horizon_times(h: f64) -> Vec<f64> {
    (0..=100).map(|i| h * i as f64 / 100.0).collect()
}

pub fn assemble(
    which: Which,
    p: &ModelParams,
    sp: BarrierSpeeds,
    delta: f64,
    aux: &AuxConstants,
) -> Result<BarrierAssembly> {
    if !(delta > 0.0 && delta < 0.5) {
        return violated(format!("δ = {delta} outside (0, 1/2)"));
    }
    match which {
        Which::TerraceSuper => terrace_super(p, sp, delta, aux),
        Which::TerraceSub => terrace_sub(p, sp, delta, aux),
        Which::CompactSuper => compact_super(p, sp, delta, aux),
        Which::NonexistenceSub => nonexistence_sub(p, sp, delta, aux),
    }
}

/// Largest `δ` in `{0.1, 0.05, 0.02, 0.01}` for which both terrace assemblies build.
pub fn delta_star(p: &ModelParams, sp: BarrierSpeeds, aux: &AuxConstants) -> Option<f64> {
    [0.1, 0.05, 0.02, 0.01].into_iter().find(|&d| {
        assemble(Which::TerraceSuper, p, sp, d, aux).is_ok()
            && assemble(Which::TerraceSub, p, sp, d, aux).is_ok()
    })
}

/// Terrace constructions need an interior pair. `c_LLW` falls back to its lower bound
/// `2√(1-a)` when it is not linearly determined.
fn require_interior(p: &ModelParams, sp: BarrierSpeeds) -> Result<()> {
    let c_llw = speeds::linear_determinacy(p)
        .c_llw_if_determined
        .unwrap_or(2.0 * (1.0 - p.a()).sqrt());
    match speeds::admissible(sp.c1, sp.c2, p, c_llw) {
        Ok(speeds::Admissibility::Interior) => Ok(()),
        Ok(class) => Err(BarrierError::NotAdmissible(format!(
            "(c1, c2) = ({}, {}) is {class:?}",
            sp.c1, sp.c2
        ))),
        Err(e) => Err(BarrierError::NotAdmissible(e.to_string())),
    }
}

fn c_llw_delta(p: &ModelParams, delta: f64, aux: &AuxConstants) -> Result<f64> {
    match aux.c_llw_delta {
        Some(c) => Ok(c),
        None => speeds::c_llw_delta_if_determined(p, delta)
            .map_err(hyp)?
            .ok_or_else(|| {
                BarrierError::HypothesisViolated(
                    "c_LLW^δ is not linearly determined; supply it explicitly".into(),
                )
            }),
    }
}

fn tab_block(kind: BlockKind, tab: &Arc<Tabulated>) -> Block {
    Block::new(
        kind,
        Profile::Tab {
            tab: tab.clone(),
            slope: 0.0,
            kinks: Vec::new(),
        },
    )
}

/// The part shared by both super-solutions: `min(1, φ) | w̄` and `max(0, θ) | ψ`.
struct LeftPart {
    zeta1: f64,
    xi1: f64,
    theta: Block,
    psi: Block,
    u: Component,
    /// `sup_t (x₂(t) - c̃t)` over the horizon.
    x2_rel_max: f64,
    x2: Vec<(f64, f64)>,
    constants: BTreeMap<String, f64>,
    properties: Vec<PropertyCheck>,
}

fn left_part(p: &ModelParams, delta: f64, c: f64, ct: f64, aux: &AuxConstants) -> Result<LeftPart> {
    let (a, b) = (p.a(), p.b());
    let wave = waves::solve_profile(c, p, delta, aux.wave_truncation, aux.wave_mesh)?;
    let (phi, psi) = wave.tabulate(0.7);
    let (phi, psi) = (Arc::new(phi), Arc::new(psi));
    let mut props = vec![PropertyCheck::new(
        "wave_monotone",
        wave.phi_monotone && wave.psi_monotone,
        format!("φ decreasing {}, ψ increasing {}", wave.phi_monotone, wave.psi_monotone),
    )];
    let lam_minus = wave.measured_decay_minus;
    let kappa = aux.kappa.unwrap_or(delta);
    if !(kappa > 0.0 && kappa < 1.0) {
        return violated(format!("κ = {kappa} outside (0, 1)"));
    }

    // ξ*: leftmost trusted run where ψ ≤ κ and ψ'/ψ stays within κ/2 of λ⁻∞.
    let (lo_tr, hi_tr) = psi.trusted();
    let band = ((1.0 - 0.5 * kappa) * lam_minus, (1.0 + 0.5 * kappa) * lam_minus);
    let ok = |x: f64| {
        let j = psi.eval(x);
        j.f > 0.0 && j.f <= kappa && (band.0..=band.1).contains(&(j.d1 / j.f))
    };
    let left_rate = psi.tail_rates().0;
    if !(band.0..=band.1).contains(&left_rate) || !ok(lo_tr) {
        return violated(format!(
            "ψ'/ψ at the left trusted edge ({left_rate}) is not within κ/2 of the measured λ⁻∞ = {lam_minus}"
        ));
    }
    let mut xi_star = lo_tr;
    for (x, _) in psi.nodes().filter(|&(x, _)| x >= lo_tr && x <= hi_tr) {
        if !ok(x) {
            break;
        }
        xi_star = x;
    }
    let phi_front = phi
        .crossing(1.0)
        .ok_or_else(|| BarrierError::HypothesisViolated("φ never crosses 1".into()))?;
    xi_star = xi_star.min(phi_front - 1.0);

    let th = blocks::theta(p, delta, c, (1.0 - kappa) * lam_minus, psi.eval(xi_star).f)?;
    let zeta1 = th.xi1 - xi_star;
    let theta = Block::new(
        BlockKind::Theta,
        Profile::Theta {
            amp: th.amp,
            lp: th.lp,
            lm: th.lm,
        },
    )
    .moving(c, 0.0);
    let psi_block = tab_block(BlockKind::Psi, &psi).moving(c, zeta1);
    let phi_block = tab_block(BlockKind::Phi, &phi).moving(c, zeta1);

    // ξ₂*: beyond it φ ≤ δ/b and φ'/φ + Λ_δ > 0, so φ - w̄ is increasing there.
    let big = speeds::big_lambda(c, ct, a, delta).map_err(hyp)?;
    let (_, phi_hi) = phi.trusted();
    let good = |x: f64| {
        let j = phi.eval(x);
        j.f > 0.0 && j.f <= delta / b && j.d1 / j.f + big > 0.0
    };
    if !(phi.tail_rates().1 + big > 0.0) || !good(phi_hi) {
        return violated(format!("φ decays faster than Λ_δ = {big} at the right trusted edge"));
    }
    let mut xi2_star = phi_hi;
    let nodes: Vec<f64> = phi.nodes().map(|(x, _)| x).filter(|&x| x <= phi_hi).collect();
    for &x in nodes.iter().rev() {
        if x <= phi_front || !good(x) {
            break;
        }
        xi2_star = x;
    }
    let xi_c = xi2_star + 1.0;
    let s_w = xi_c + zeta1 + phi.eval(xi_c).f.ln() / big;
    let wbar = blocks::wbar(a, delta, c, ct, s_w)?;
    let below = nodes
        .iter()
        .filter(|&&x| x >= phi_front && x < xi_c - 1e-9)
        .all(|&x| phi.eval(x).f < wbar.value(0.0, x + zeta1));
    props.push(PropertyCheck::new(
        "x2_unique_at_t0",
        below,
        "φ < w̄ between the cap and x₂ at t = 0".into(),
    ));

    let u = Component {
        order: Order::Min,
        pieces: vec![
            PieceBody::Single(Block::constant(1.0)),
            PieceBody::Single(phi_block),
            PieceBody::Single(wbar),
        ],
        interfaces: vec![
            Interface {
                id: "u_cap".into(),
                rule: Rule::Moving(Line::new(c, zeta1 + phi_front)),
            },
            Interface {
                id: "x2".into(),
                rule: Rule::Root {
                    lo: Line::new(c, zeta1 + xi2_star),
                    hi: Line::new(ct, zeta1 + xi_c + 80.0),
                },
            },
        ],
    };
    let mut x2 = Vec::new();
    for t in horizon_times(aux.horizon) {
        x2.push((t, u.positions(t)?[1]));
    }
    let x2_rel_max = x2.iter().map(|&(t, x)| x - ct * t).fold(f64::NEG_INFINITY, f64::max);
    let (ts, xs): (Vec<f64>, Vec<f64>) = x2.iter().copied().unzip();
    let slope = linear_fit(&ts, &xs).map_or(f64::NAN, |f| f.0);
    // φ - w̄ = 0 balances two exponentials, so x₂ eventually outruns c̃ when λ_φ < Λ_δ.
    let lam_phi = -phi.tail_rates().1;
    let x2_limit = (big * ct - lam_phi * c) / (big - lam_phi);

    let mut k = BTreeMap::new();
    for (name, v) in [
        ("lambda_minus_measured", lam_minus),
        ("lambda_minus_formula", speeds::lambda_minus_inf_delta(c, p, delta)),
        ("kappa", kappa),
        ("xi_star", xi_star),
        ("xi1", th.xi1),
        ("theta_amplitude", th.amp),
        ("lambda_theta_plus", th.lp),
        ("lambda_theta_minus", th.lm),
        ("zeta1", zeta1),
        ("xi2_star", xi2_star),
        ("wbar_shift", s_w),
        ("big_lambda_delta", big),
        ("x2_slope", slope),
        ("x2_asymptotic_speed", x2_limit),
        ("lambda_phi", lam_phi),
        ("wave_residual", wave.residual),
    ] {
        k.insert(name.to_string(), v);
    }
    Ok(LeftPart {
        zeta1,
        xi1: th.xi1,
        theta,
        psi: psi_block,
        u,
        x2_rel_max,
        x2,
        constants: k,
        properties: props,
    })
}

/// Checks `ξ₁ + ct < x₂(t) < x₃(t) < right(t)` at the horizon times.
fn ordering_check(
    left: &LeftPart,
    v: &Component,
    c: f64,
    right: impl Fn(f64) -> f64,
    horizon: f64,
) -> Result<PropertyCheck> {
    let mut holds = true;
    let mut worst = f64::INFINITY;
    for &(t, x2) in &left.x2 {
        let pv = v.positions(t)?;
        let chain = [left.xi1 + c * t, x2, pv[1], right(t)];
        for w in chain.windows(2) {
            worst = worst.min(w[1] - w[0]);
            holds &= w[0] < w[1];
        }
    }
    Ok(PropertyCheck::new(
        "interface_order",
        holds,
        format!("smallest gap in ξ₁+ct < x₂ < x₃ < right end over [0, {horizon}]: {worst}"),
    ))
}

fn terrace_super(
    p: &ModelParams,
    sp: BarrierSpeeds,
    delta: f64,
    aux: &AuxConstants,
) -> Result<BarrierAssembly> {
    require_interior(p, sp)?;
    let (d, r) = (p.d(), p.r());
    let (c1, c2) = (sp.c1, sp.c2);
    let cl = c_llw_delta(p, delta, aux)?;
    let c = speeds::perturbed_speeds_terrace(c2, c1, p.a(), delta, cl).map_err(hyp)?;
    let ct = c1;
    let left = left_part(p, delta, c, ct, aux)?;
    let zeta1 = left.zeta1;

    let pi = blocks::pi_front(p, delta, ct)?;
    let h_star = blocks::h_star(&pi, p, delta, ct)?;
    let h = 0.5 * h_star;
    let m = (ct / (r * h)).sqrt();
    let pih = blocks::pi_h(&pi, h);
    let (xi_max, pi_max) = blocks::max_on(&pih, -m, 0.0, 4000);
    let zeta3 = left.x2_rel_max + 5.0 + m - zeta1;
    let pih_block = Block::new(BlockKind::PiH, pih.clone()).moving(ct, zeta1 + zeta3);

    let big = left.constants["big_lambda_delta"];
    let s = (ct * ct - 4.0 * r * d).sqrt();
    let eta = 0.5 * (s / d).min(big);
    let lv = speeds::lambda_v(ct, r, d).map_err(hyp)?;
    let s_w = left.constants["wbar_shift"];
    let mut big_b = 0.0;
    let mut state = None;
    for _ in 0..200 {
        let (k, xi_b, prof) = blocks::beta(p, ct, big_b, eta)?;
        let arg = blocks::two_exp_argmax(lv, eta, k, xi_b);
        let level = 0.9 * prof.jet(arg).f;
        let xi4 = blocks::scan_root(|x| pih.jet(x).f - level, xi_max.max(0.0), m, 4000, true)
            .ok_or_else(|| {
                BarrierError::HypothesisViolated(format!("π_h never falls to 0.9 max β = {level}"))
            })?;
        let flank = blocks::scan_root(|x| prof.jet(x).f - level, 0.0, arg, 2000, false)
            .ok_or_else(|| BarrierError::NoConvergence("β flank".into()))?;
        let zeta4 = xi4 - flank;
        let w0 = (-big * (zeta1 + zeta3 + zeta4 - s_w)).exp();
        let next = 2.0 * w0 * (big * xi_b).exp();
        let done = (next - big_b).abs() <= 1e-13 * next.abs().max(1e-300);
        state = Some((k, xi_b, prof, xi4, zeta4, w0, next));
        big_b = next;
        if done {
            break;
        }
    }
    let (k_beta, xi_beta, beta_prof, xi4, zeta4, w0, _) = state.expect("at least one iteration");
    let (k_chk, xi_chk, _) = blocks::beta(p, ct, big_b, eta)?;
    if !((k_chk - k_beta).abs() <= 1e-10 * k_beta) {
        return Err(BarrierError::NoConvergence("B fixed point".into()));
    }
    if !(xi4 > 0.0 && xi4 < m) {
        return violated(format!("ξ₄ = {xi4} outside (0, M = {m})"));
    }
    let beta_block = Block::new(BlockKind::Beta, beta_prof).moving(ct, zeta1 + zeta3 + zeta4);

    let v = Component {
        order: Order::Max,
        pieces: vec![
            PieceBody::Single(left.theta.clone()),
            PieceBody::Single(left.psi.clone()),
            PieceBody::Single(pih_block),
            PieceBody::Single(beta_block),
        ],
        interfaces: vec![
            Interface {
                id: "xi1".into(),
                rule: Rule::Moving(Line::new(c, left.xi1)),
            },
            Interface {
                id: "x3_large".into(),
                rule: Rule::Root {
                    lo: Line::new(ct, zeta1 + zeta3 - m),
                    hi: Line::new(ct, zeta1 + zeta3 + xi_max),
                },
            },
            Interface {
                id: "xi4".into(),
                rule: Rule::Moving(Line::new(ct, zeta1 + zeta3 + xi4)),
            },
        ],
    };
    let mut props = left.properties.clone();
    props.push(ordering_check(&left, &v, c, |t| zeta1 + zeta3 + xi4 + ct * t, aux.horizon)?);
    props.push(PropertyCheck::new("xi4_positive", xi4 > 0.0, format!("ξ₄ = {xi4}")));
    props.push(PropertyCheck::new(
        "beta_bound",
        w0 * (big * xi_chk).exp() <= big_b,
        format!("B = {big_b:e} ≥ W₀ e^{{Λ_δ ξ_β}} = {:e}", w0 * (big * xi_chk).exp()),
    ));
    props.push(PropertyCheck::new(
        "pi_h_max",
        pi_max >= 1.0 - 2.0 * delta,
        format!("max π_h on [−M, 0] = {pi_max}"),
    ));

    let mut k = left.constants.clone();
    for (name, val) in [
        ("h_star", h_star),
        ("h", h),
        ("pi_h_window", m),
        ("pi_h_argmax", xi_max),
        ("pi_h_max", pi_max),
        ("zeta3", zeta3),
        ("eta_beta", eta),
        ("big_b", big_b),
        ("k_beta", k_beta),
        ("xi_beta", xi_beta),
        ("xi4", xi4),
        ("zeta4", zeta4),
        ("c_llw_delta", cl),
        ("pi_residual", pi.residual),
    ] {
        k.insert(name.to_string(), val);
    }
    Ok(BarrierAssembly {
        which: Which::TerraceSuper,
        params: *p,
        delta,
        speeds: speed_map(&[("c1", c1), ("c2", c2), ("c2_delta", c), ("c_tilde", ct)]),
        constants: k,
        u: left.u,
        v,
        probes: Vec::new(),
        window: (Line::new(c, left.xi1 - 30.0), Line::new(ct, zeta1 + zeta3 + xi4 + 40.0)),
        properties: props,
    })
}

fn compact_super(
    p: &ModelParams,
    sp: BarrierSpeeds,
    delta: f64,
    aux: &AuxConstants,
) -> Result<BarrierAssembly> {
    let cl = c_llw_delta(p, delta, aux)?;
    let (c1d, c2d) = speeds::perturbed_speeds_compact(sp.c2, p, delta, cl).map_err(hyp)?;
    let (c, ct) = (c2d, c1d);
    let left = left_part(p, delta, c, ct, aux)?;
    let zeta1 = left.zeta1;

    let (r_omega, r_delta) = blocks::min_radius_omega(p, delta)?;
    let radius = blocks::omega_radius_for(p, delta, 1.0 - 2.0 * delta + aux.omega_headroom, r_omega)?;
    let om = blocks::omega(p, delta, radius)?;
    let zeta3 = left.x2_rel_max + 5.0 + radius - zeta1;
    let om_block = Block::new(BlockKind::Omega, om.profile()).moving(ct, zeta1 + zeta3);

    let v = Component {
        order: Order::Max,
        pieces: vec![
            PieceBody::Single(left.theta.clone()),
            PieceBody::Single(left.psi.clone()),
            PieceBody::Single(om_block.clone()),
        ],
        interfaces: vec![
            Interface {
                id: "xi1".into(),
                rule: Rule::Moving(Line::new(c, left.xi1)),
            },
            Interface {
                id: "x3_small".into(),
                rule: Rule::Root {
                    lo: Line::new(ct, zeta1 + zeta3 - radius),
                    hi: Line::new(ct, zeta1 + zeta3 + om.argmax),
                },
            },
        ],
    };
    let mut props = left.properties.clone();
    props.push(ordering_check(&left, &v, c, |t| zeta1 + zeta3 + radius + ct * t, aux.horizon)?);
    let edge = zeta1 + zeta3 + radius;
    let compact = (0..=2000).all(|i| {
        let x = edge + 0.025 * i as f64;
        om_block.value(0.0, x) == 0.0
    });
    props.push(PropertyCheck::new(
        "v_initial_compact_support",
        compact,
        format!("v̲(0,·) vanishes outside [0, {edge}]"),
    ));
    props.push(PropertyCheck::new(
        "omega_below_one_minus_delta",
        om.max < 1.0 - delta,
        format!("max ω = {} at R = {radius}", om.max),
    ));

    let mut k = left.constants.clone();
    for (name, val) in [
        ("r_omega", r_omega),
        ("r_delta", r_delta),
        ("radius", radius),
        ("omega_max", om.max),
        ("omega_argmax", om.argmax),
        ("omega_drift", blocks::omega_drift(p, delta)),
        ("zeta3", zeta3),
        ("c_llw_delta", cl),
    ] {
        k.insert(name.to_string(), val);
    }
    Ok(BarrierAssembly {
        which: Which::CompactSuper,
        params: *p,
        delta,
        speeds: speed_map(&[("c2", sp.c2), ("c1_delta", c1d), ("c2_delta", c2d)]),
        constants: k,
        u: left.u,
        v,
        probes: Vec::new(),
        window: (Line::new(c, left.xi1 - 30.0), Line::new(ct, edge + 20.0)),
        properties: props,
    })
}

fn terrace_sub(
    p: &ModelParams,
    sp: BarrierSpeeds,
    delta: f64,
    aux: &AuxConstants,
) -> Result<BarrierAssembly> {
    let (a, r, d) = (p.a(), p.r(), p.d());
    require_interior(p, sp)?;
    let (c, ct) = (sp.c2, sp.c1);
    let big = speeds::big_lambda(c, ct, a, 0.0).map_err(hyp)?;
    let sigma = speeds::lambda_v(ct, r, d).map_err(hyp)?;
    let s = ct - 2.0 * big;
    let eta = 0.5 * s.min(sigma);
    if !(eta < big) {
        return violated(format!("η_w = {eta} must be below Λ = {big}"));
    }
    let amp_c = aux.sub_amplitude;
    let mut amp_a = 0.0;
    let mut wu = blocks::wunder(a, c, ct, amp_a, eta)?;
    for _ in 0..500 {
        let next = 2.0 * amp_c * (sigma * wu.x_w).exp();
        if !(next < 1e8) {
            return violated(format!("A = 2C e^{{λ_v x_w}} has no fixed point for C = {amp_c}"));
        }
        let done = (next - amp_a).abs() <= 1e-13 * next;
        amp_a = next;
        wu = blocks::wunder(a, c, ct, amp_a, eta)?;
        if done {
            break;
        }
    }
    if !((2.0 * amp_c * (sigma * wu.x_w).exp() - amp_a).abs() <= 1e-10 * amp_a) {
        return violated(format!("A = 2C e^{{λ_v x_w}} has no fixed point for C = {amp_c}"));
    }

    let k_chi = 0.5 * (1.0 - a);
    let chi = blocks::chi(c, k_chi)?;
    let zeta0 = chi.inverse(0.5 * wu.max)?;
    let chi_block = Block::new(BlockKind::Chi, chi.profile()).moving(c, -zeta0);
    let u = Component::single(Order::Max, PieceBody::Max(vec![chi_block, wu.block.clone()]));
    let vexp = Block::new(BlockKind::Exponential, Profile::Exp { rate: sigma })
        .moving(ct, 0.0)
        .scaled(amp_c);
    let v = Component {
        order: Order::Min,
        pieces: vec![PieceBody::Single(Block::constant(1.0)), PieceBody::Single(vexp)],
        interfaces: vec![Interface {
            id: "v_cap".into(),
            rule: Rule::Moving(Line::new(ct, amp_c.ln() / sigma)),
        }],
    };
    let probe = Probe {
        id: "x0".into(),
        field: Field::U,
        piece: 0,
        left: 0,
        right: 1,
        lo: Line::new(ct, 0.0),
        hi: Line::new(ct, wu.big_x_w),
    };
    let mut asm = BarrierAssembly {
        which: Which::TerraceSub,
        params: *p,
        delta,
        speeds: speed_map(&[("c1", ct), ("c2", c)]),
        constants: BTreeMap::new(),
        u,
        v,
        probes: vec![probe],
        window: (Line::new(c, -zeta0 - 30.0), Line::new(ct, wu.big_x_w + 60.0)),
        properties: Vec::new(),
    };
    let last = last_present(&asm, 0, aux.horizon);
    asm.properties.push(PropertyCheck::new(
        "x0_exists",
        last.is_some(),
        match last {
            Some(t) => format!("χ and w̲ cross in (c̃t, X_w + c̃t) up to t ≈ {t}; u̲ = max(χ, w̲) after"),
            None => "χ dominates w̲ from t = 0".into(),
        },
    ));
    for (name, val) in [
        ("big_lambda", big),
        ("lambda_v_c1", sigma),
        ("eta_w", eta),
        ("sub_amplitude_c", amp_c),
        ("amplitude_a", amp_a),
        ("k_w", wu.k_w),
        ("x_w", wu.x_w),
        ("big_x_w", wu.big_x_w),
        ("wunder_max", wu.max),
        ("zeta0", zeta0),
        ("chi_tail_rate", -chi.tab.tail_rates().1),
        ("x0_last_present", last.unwrap_or(f64::NAN)),
    ] {
        asm.constants.insert(name.to_string(), val);
    }
    Ok(asm)
}

/// Last horizon time at which probe `i` exists.
fn last_present(asm: &BarrierAssembly, i: usize, horizon: f64) -> Option<f64> {
    let pr = &asm.probes[i];
    horizon_times(horizon)
        .into_iter()
        .filter(|&t| asm.probe_at(pr, t).is_some())
        .last()
}

fn nonexistence_sub(
    p: &ModelParams,
    sp: BarrierSpeeds,
    delta: f64,
    aux: &AuxConstants,
) -> Result<BarrierAssembly> {
    let (a, r, d) = (p.a(), p.r(), p.d());
    let (c1, c2) = (sp.c1, sp.c2);
    if !(c1 > p.kpp_v_speed()) {
        return violated(format!("c1 = {c1} must exceed 2√(rd)"));
    }
    let f_inv = speeds::f_inverse(c1, a).map_err(hyp)?;
    if !(c2 < f_inv) {
        return violated(format!("c2 = {c2} must be below f⁻¹(c1) = {f_inv}"));
    }
    let c = sp.c.unwrap_or(c2 + 0.28 * (f_inv - c2));
    let fc = speeds::f_of(c, a).map_err(hyp)?;
    let ct = sp.c_tilde.unwrap_or(c1 + 0.25 * (fc - c1));
    if !(c2 < c && c < f_inv && c1 < ct && ct < fc) {
        return violated(format!("need c2 < c < f⁻¹(c1) and c1 < c̃ < f(c); got c = {c}, c̃ = {ct}"));
    }
    let lam = speeds::lambda_u(c, a, 0.0).map_err(hyp)?;
    let delta_max = 0.25 * (-ct * ct + 4.0 * (lam * (ct - c) + 1.0));
    if !(delta < delta_max) {
        return violated(format!("δ = {delta} must be below ¼(−c̃²+4(λ(c)(c̃−c)+1)) = {delta_max}"));
    }

    let k_chi = 0.5 * (1.0 - a);
    // α solves the slightly weaker kinetics so its residual has a sign beyond interpolation error.
    let k_alpha = (1.0 - a) * (1.0 - ALPHA_SLACK);
    let length = blocks::length_alpha_k(k_alpha, k_chi)?;
    let al = blocks::alpha_k(k_alpha, length)?;
    let chi = blocks::chi(c, k_chi)?;
    let kappa = aux.kappa.unwrap_or(0.25 * delta);
    if !(kappa > 0.0 && kappa < k_chi.min(0.5 * delta)) {
        return violated(format!("κ = {kappa} outside (0, min((1−a)/2, δ/2))"));
    }
    let alpha_prof = al.profile();
    let x00 = blocks::scan_root(|x| alpha_prof.jet(x).f - kappa, al.argmax, length, 4000, true)
        .ok_or_else(|| BarrierError::NoConvergence("α = κ on the decreasing side".into()))?;
    let zeta0 = x00 - chi.inverse(kappa)?;
    let zeta = aux
        .zeta
        .unwrap_or(length.max(chi.inverse(0.5 * delta)?) + 1.0);
    let chi_zeta = chi.tab.eval(zeta).f;
    if !(zeta > length && chi_zeta <= 0.5 * delta) {
        return violated(format!("ζ = {zeta} needs ζ > L = {length} and χ(ζ) ≤ δ/2"));
    }
    let zb = blocks::z_block(a, delta, c, ct, zeta0 + zeta)?;
    let z_scale = chi_zeta / zb.max;
    let z_block = zb.block.clone().scaled(z_scale);
    let chi_block = Block::new(BlockKind::Chi, chi.profile()).moving(c, zeta0);
    let alpha_block = Block::new(BlockKind::Alpha, alpha_prof);

    let sigma = speeds::lambda_v(ct, r, d).map_err(hyp)?;
    let y = (delta / (2.0 * a)).ln() / sigma + zeta0 + zeta;
    let vexp = Block::new(BlockKind::Exponential, Profile::Exp { rate: sigma }).moving(ct, y);
    let v = Component {
        order: Order::Min,
        pieces: vec![PieceBody::Single(Block::constant(1.0)), PieceBody::Single(vexp.clone())],
        interfaces: vec![Interface {
            id: "v_cap".into(),
            rule: Rule::Moving(Line::new(ct, y)),
        }],
    };
    let u = Component {
        order: Order::Max,
        pieces: vec![
            PieceBody::Single(alpha_block),
            PieceBody::Max(vec![chi_block.clone(), z_block.clone()]),
        ],
        interfaces: vec![Interface {
            id: "x0_ne".into(),
            rule: Rule::Root {
                lo: Line::new(0.0, al.argmax),
                hi: Line::new(0.0, length),
            },
        }],
    };
    let z_end = zeta0 + zeta + 2.0 * zb.r_z;
    let probe = Probe {
        id: "x1_ne".into(),
        field: Field::U,
        piece: 1,
        left: 0,
        right: 1,
        lo: Line::new(ct, zeta0 + zeta),
        hi: Line::new(ct, zeta0 + zeta + zb.x_z),
    };
    let mut asm = BarrierAssembly {
        which: Which::NonexistenceSub,
        params: *p,
        delta,
        speeds: speed_map(&[("c1", c1), ("c2", c2), ("c", c), ("c_tilde", ct)]),
        constants: BTreeMap::new(),
        u,
        v,
        probes: vec![probe],
        window: (Line::new(0.0, -10.0), Line::new(ct, z_end + 40.0)),
        properties: Vec::new(),
    };

    let last = last_present(&asm, 0, aux.horizon);
    asm.properties.push(PropertyCheck::new(
        "x1_exists",
        last.is_some(),
        match last {
            Some(t) => format!("χ and z cross up to t ≈ {t}; u̲ = max(χ, z) right of x₀ after"),
            None => "χ dominates z from t = 0".into(),
        },
    ));
    let tail = (0..=400).map(|i| z_end + 0.1 * i as f64).all(|x| {
        asm.u.eval(0.0, x).map_or(false, |s| s.f == 0.0)
    });
    asm.properties.push(PropertyCheck::new(
        "u_initial_compact_support",
        tail,
        format!(
            "u̲(0,·) vanishes beyond {z_end}: {tail}; the χ piece decays at rate {} < λ(c) = {lam}",
            -chi.tab.tail_rates().1
        ),
    ));
    let v_small = vexp.value(0.0, zeta0 + zeta) <= delta / (2.0 * a) * (1.0 + 1e-12);
    asm.properties.push(PropertyCheck::new(
        "v_bound_on_z_support",
        v_small,
        format!("v̄ ≤ δ/(2a) = {} for x ≥ ζ₀ + ζ + c̃t", delta / (2.0 * a)),
    ));
    let spread = level_speed(&asm, 0.5 * k_chi, length, aux.horizon.min(40.0))?;
    asm.properties.push(PropertyCheck::new(
        "sub_spreading",
        spread >= 0.97 * c,
        format!("(1−a)/4 level of u̲ on [L, ∞) moves at {spread} vs c = {c}"),
    ));
    for (name, val) in [
        ("lambda_c", lam),
        ("alpha_length", length),
        ("alpha_argmax", al.argmax),
        ("alpha_max", al.max),
        ("kappa", kappa),
        ("x0_at_t0", x00),
        ("zeta0", zeta0),
        ("zeta", zeta),
        ("r_z", zb.r_z),
        ("x_z", zb.x_z),
        ("z_scale", z_scale),
        ("v_shift_y", y),
        ("chi_tail_rate", -chi.tab.tail_rates().1),
        ("x1_last_present", last.unwrap_or(f64::NAN)),
        ("level_speed", spread),
    ] {
        asm.constants.insert(name.to_string(), val);
    }
    Ok(asm)
}

/// Fitted speed of the rightmost `level` crossing of `u̲` on `[x_min, ∞)`.
fn level_speed(asm: &BarrierAssembly, level: f64, x_min: f64, t_end: f64) -> Result<f64> {
    let mut ts = Vec::new();
    let mut xs = Vec::new();
    for i in 0..=40 {
        let t = t_end * i as f64 / 40.0;
        let pos = asm.u.positions(t)?;
        let g = |x: f64| asm.u.eval_at(&pos, t, x).0.f - level;
        let hi = asm.window.1.at(t);
        let mut last = None;
        let n = 4000;
        let h = (hi - x_min) / n as f64;
        for j in 0..n {
            let (xa, xb) = (x_min + j as f64 * h, x_min + (j + 1) as f64 * h);
            if g(xa) > 0.0 && g(xb) <= 0.0 {
                last = crate::numerics::bisect(&g, xa, xb, 1e-10).ok();
            }
        }
        if let Some(x) = last {
            ts.push(t);
            xs.push(x);
        }
    }
    Ok(linear_fit(&ts, &xs).map_or(f64::NAN, |f| f.0))
}

fn speed_map(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}
