//! Building blocks of the barrier assemblies.
//!
//! A block is `scale · e^{-decay t} · P(x - speed t - shift)` for a one-dimensional profile `P`
//! that is either closed-form or a tabulated ODE solution.

use super::BarrierError;
use crate::model::ModelParams;
use crate::numerics::{bisect, brent, Jet, Tabulated};
use crate::scalar::{self, ScalarError};
use crate::speeds;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

type Result<T> = std::result::Result<T, BarrierError>;

/// Half-length of the truncated line for `χ` and `π`.
pub const FRONT_TRUNCATION: f64 = 150.0;
/// Nodes on that line (spacing 0.1).
pub const FRONT_MESH: usize = 3001;
/// Mesh spacing for the Dirichlet bumps `ω` and `α`.
pub const BUMP_SPACING: f64 = 0.05;
/// Fraction of the truncated line on which tabulated fronts are trusted.
pub const FRONT_TRUST: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    Chi,
    Pi,
    PiH,
    Omega,
    Alpha,
    Theta,
    Beta,
    Wbar,
    Wunder,
    Z,
    Eigenpair,
    Phi,
    Psi,
    Constant,
    Exponential,
}

impl BlockKind {
    pub fn label(self) -> &'static str {
        match self {
            BlockKind::Chi => "chi",
            BlockKind::Pi => "pi",
            BlockKind::PiH => "pi_h",
            BlockKind::Omega => "omega",
            BlockKind::Alpha => "alpha",
            BlockKind::Theta => "theta",
            BlockKind::Beta => "beta",
            BlockKind::Wbar => "wbar",
            BlockKind::Wunder => "wunder",
            BlockKind::Z => "z",
            BlockKind::Eigenpair => "eigenpair",
            BlockKind::Phi => "phi",
            BlockKind::Psi => "psi",
            BlockKind::Constant => "constant",
            BlockKind::Exponential => "exponential",
        }
    }
}

/// One-dimensional profile in the block's own frame.
#[derive(Debug, Clone)]
pub enum Profile {
    Const(f64),
    /// `e^{-rate ξ}`.
    Exp { rate: f64 },
    /// Tabulated solution plus `slope · ξ`; `kinks` are the support edges of bumps.
    Tab {
        tab: Arc<Tabulated>,
        slope: f64,
        kinks: Vec<f64>,
    },
    /// `max(0, amp (e^{lp ξ} - e^{lm ξ}))`, zero at `ξ = 0`.
    Theta { amp: f64, lp: f64, lm: f64 },
    /// `max(0, e^{-rate (ξ+shift)} - k e^{-(rate+eta)(ξ+shift)})` with `shift = ln k / eta`.
    TwoExp { rate: f64, eta: f64, k: f64, shift: f64 },
    /// `e^{-rate ξ} sin(π ξ / (2 half_width))` on `[0, 2 half_width]`, zero elsewhere.
    Sine { rate: f64, half_width: f64 },
    /// `cos(k ξ)` on `|k ξ| ≤ π/2`, zero elsewhere.
    Cosine { k: f64 },
}

impl Profile {
    pub fn jet(&self, xi: f64) -> Jet {
        match self {
            Profile::Const(c) => Jet::constant(*c),
            Profile::Exp { rate } => {
                let e = (-rate * xi).exp();
                Jet {
                    f: e,
                    d1: -rate * e,
                    d2: rate * rate * e,
                }
            }
            Profile::Tab { tab, slope, .. } => {
                let j = tab.eval(xi);
                Jet {
                    f: j.f + slope * xi,
                    d1: j.d1 + slope,
                    d2: j.d2,
                }
            }
            Profile::Theta { amp, lp, lm } => {
                if xi <= 0.0 {
                    return Jet::default();
                }
                let (ep, em) = ((lp * xi).exp(), (lm * xi).exp());
                Jet {
                    f: amp * (ep - em),
                    d1: amp * (lp * ep - lm * em),
                    d2: amp * (lp * lp * ep - lm * lm * em),
                }
            }
            Profile::TwoExp {
                rate,
                eta,
                k,
                shift,
            } => {
                if xi <= 0.0 {
                    return Jet::default();
                }
                let y = xi + shift;
                let q = rate + eta;
                let (e1, e2) = ((-rate * y).exp(), k * (-q * y).exp());
                Jet {
                    f: e1 - e2,
                    d1: -rate * e1 + q * e2,
                    d2: rate * rate * e1 - q * q * e2,
                }
            }
            Profile::Sine { rate, half_width } => {
                if xi <= 0.0 || xi >= 2.0 * half_width {
                    return Jet::default();
                }
                let w = PI / (2.0 * half_width);
                let e = (-rate * xi).exp();
                let (s, c) = (w * xi).sin_cos();
                Jet {
                    f: e * s,
                    d1: e * (w * c - rate * s),
                    d2: e * ((rate * rate - w * w) * s - 2.0 * rate * w * c),
                }
            }
            Profile::Cosine { k } => {
                if (k * xi).abs() >= 0.5 * PI {
                    return Jet::default();
                }
                let (s, c) = (k * xi).sin_cos();
                Jet {
                    f: c,
                    d1: -k * s,
                    d2: -k * k * c,
                }
            }
        }
    }

    /// Points where the profile is only Lipschitz.
    pub fn kinks(&self) -> Vec<f64> {
        match self {
            Profile::Tab { kinks, .. } => kinks.clone(),
            Profile::Theta { .. } | Profile::TwoExp { .. } => vec![0.0],
            Profile::Sine { half_width, .. } => vec![0.0, 2.0 * half_width],
            Profile::Cosine { k } => vec![-0.5 * PI / k, 0.5 * PI / k],
            Profile::Const(_) | Profile::Exp { .. } => Vec::new(),
        }
    }
}

/// Value and derivatives of a block at a space–time point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Sample {
    pub f: f64,
    pub t: f64,
    pub x: f64,
    pub xx: f64,
}

#[derive(Debug, Clone)]
pub struct Block {
    pub kind: BlockKind,
    pub profile: Profile,
    pub speed: f64,
    pub shift: f64,
    pub scale: f64,
    pub decay: f64,
}

impl Block {
    pub fn new(kind: BlockKind, profile: Profile) -> Self {
        Block {
            kind,
            profile,
            speed: 0.0,
            shift: 0.0,
            scale: 1.0,
            decay: 0.0,
        }
    }

    pub fn constant(c: f64) -> Self {
        Block::new(BlockKind::Constant, Profile::Const(c))
    }

    pub fn moving(mut self, speed: f64, shift: f64) -> Self {
        self.speed = speed;
        self.shift = shift;
        self
    }

    pub fn scaled(mut self, s: f64) -> Self {
        self.scale = s;
        self
    }

    pub fn decaying(mut self, rate: f64) -> Self {
        self.decay = rate;
        self
    }

    pub fn frame(&self, t: f64, x: f64) -> f64 {
        x - self.speed * t - self.shift
    }

    pub fn value(&self, t: f64, x: f64) -> f64 {
        self.eval(t, x).f
    }

    pub fn eval(&self, t: f64, x: f64) -> Sample {
        let j = self.profile.jet(self.frame(t, x));
        let amp = self.scale * (-self.decay * t).exp();
        let (f, fx, fxx) = (amp * j.f, amp * j.d1, amp * j.d2);
        Sample {
            f,
            t: -self.decay * f - self.speed * fx,
            x: fx,
            xx: fxx,
        }
    }

    /// Kink positions at time `t`.
    pub fn kinks(&self, t: f64) -> Vec<f64> {
        let base = self.speed * t + self.shift;
        self.profile.kinks().into_iter().map(|k| k + base).collect()
    }
}

fn domain<T>(msg: String) -> Result<T> {
    Err(BarrierError::Domain(msg))
}

/// A tabulated scalar front together with the quantities assemblies need.
#[derive(Debug, Clone)]
pub struct Front {
    pub tab: Arc<Tabulated>,
    pub residual: f64,
}

impl Front {
    pub fn profile(&self) -> Profile {
        Profile::Tab {
            tab: self.tab.clone(),
            slope: 0.0,
            kinks: Vec::new(),
        }
    }

    /// Abscissa where the decreasing front equals `level`.
    pub fn inverse(&self, level: f64) -> Result<f64> {
        self.tab
            .crossing(level)
            .ok_or_else(|| BarrierError::Domain(format!("front never reaches {level}")))
    }
}

fn front(diff: f64, c: f64, left: f64, g: scalar::Kinetics<'_>) -> Result<Front> {
    let p = scalar::solve_front(diff, c, g, left, 0.5 * left, FRONT_TRUNCATION, FRONT_MESH)?;
    let tab = scalar::tabulate_front(&p, FRONT_TRUST, left, 0.0);
    Ok(Front {
        tab: Arc::new(tab),
        residual: p.residual,
    })
}

/// `χ_c`: `-χ'' - c χ' = χ(k - χ)` from `k` to 0 with `χ(0) = k/2`.
pub fn chi(c: f64, k: f64) -> Result<Front> {
    if !(k > 0.0) || c < 2.0 * k.sqrt() {
        return domain(format!("chi: need c ≥ 2√k, got c = {c}, k = {k}"));
    }
    front(1.0, c, k, &move |w| (w * (k - w), k - 2.0 * w))
}

/// `π`: `-d π'' - c π' = r π(1 - δ - π)` from `1-δ` to 0 with `π(0) = (1-δ)/2`.
pub fn pi_front(p: &ModelParams, delta: f64, c: f64) -> Result<Front> {
    let (d, r) = (p.d(), p.r());
    let k = 1.0 - delta;
    if c < 2.0 * (r * k * d).sqrt() {
        return domain(format!("pi: c = {c} below 2√(r(1−δ)d)"));
    }
    front(d, c, k, &move |w| (r * w * (k - w), r * (k - 2.0 * w)))
}

/// `π_h(ξ) = π(ξ) + h ξ`.
pub fn pi_h(pi: &Front, h: f64) -> Profile {
    Profile::Tab {
        tab: pi.tab.clone(),
        slope: h,
        kinks: Vec::new(),
    }
}

/// Largest `h` for which `max_{[-M,0]} π_h ≥ 1-2δ` and the maximum is interior, `M = √(c/(rh))`.
pub fn h_star(pi: &Front, p: &ModelParams, delta: f64, c: f64) -> Result<f64> {
    let ok = |h: f64| -> bool {
        let m = (c / (p.r() * h)).sqrt();
        let (_, top) = max_on(&pi_h(pi, h), -m, 0.0, 4000);
        let ends = (pi_h(pi, h).jet(0.0).f).max(pi_h(pi, h).jet(-m).f);
        top >= 1.0 - 2.0 * delta && top > ends
    };
    let (mut lo, mut hi) = (1e-8_f64, 1.0_f64);
    if !ok(lo) || ok(hi) {
        return Err(BarrierError::HypothesisViolated(
            "no admissible slope h for π_h".into(),
        ));
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo < 1.0 + 1e-10 {
            break;
        }
    }
    Ok(lo)
}

/// `(argmax, max)` over `[lo, hi]` by a uniform scan refined with golden-section search.
pub fn max_on(prof: &Profile, lo: f64, hi: f64, steps: usize) -> (f64, f64) {
    let h = (hi - lo) / steps as f64;
    let mut best = (lo, prof.jet(lo).f);
    for i in 1..=steps {
        let x = lo + i as f64 * h;
        let v = prof.jet(x).f;
        if v > best.1 {
            best = (x, v);
        }
    }
    let (mut a, mut b) = ((best.0 - h).max(lo), (best.0 + h).min(hi));
    let g = 0.5 * (5.0_f64.sqrt() - 1.0);
    for _ in 0..100 {
        let (x1, x2) = (b - g * (b - a), a + g * (b - a));
        if prof.jet(x1).f > prof.jet(x2).f {
            b = x2;
        } else {
            a = x1;
        }
    }
    let x = 0.5 * (a + b);
    let v = prof.jet(x).f;
    if v > best.1 {
        (x, v)
    } else {
        best
    }
}

/// Drift of the `ω` equation, `2√(r(1-δ)d) - δ`.
pub fn omega_drift(p: &ModelParams, delta: f64) -> f64 {
    2.0 * (p.r() * (1.0 - delta) * p.d()).sqrt() - delta
}

/// A compactly supported bump with its nodal maximum.
#[derive(Debug, Clone)]
pub struct Bump {
    pub tab: Arc<Tabulated>,
    pub lo: f64,
    pub hi: f64,
    pub argmax: f64,
    pub max: f64,
    pub residual: f64,
}

impl Bump {
    pub fn profile(&self) -> Profile {
        Profile::Tab {
            tab: self.tab.clone(),
            slope: 0.0,
            kinks: vec![self.lo, self.hi],
        }
    }
}

fn bump_from(p: scalar::ScalarProfile, offset: f64) -> Bump {
    let n = p.values.len();
    let shifted = scalar::ScalarProfile {
        x0: p.x0 + offset,
        ..p
    };
    let (argmax, max) = shifted.max();
    let tab = scalar::tabulate_bump(&shifted);
    let argmax = refine_max(&tab, argmax, shifted.h).unwrap_or(argmax);
    Bump {
        tab: Arc::new(tab),
        lo: shifted.x0,
        hi: shifted.x(n - 1),
        argmax,
        max,
        residual: shifted.residual,
    }
}

fn refine_max(tab: &Tabulated, x: f64, h: f64) -> Option<f64> {
    brent(|y| tab.eval(y).d1, x - h, x + h, 1e-12).ok()
}

/// `ω_{δ,R}`: `-d ω'' - c_ω ω' = r ω(1-δ-ω)` on `(-R, R)`, zero outside.
pub fn omega(p: &ModelParams, delta: f64, radius: f64) -> Result<Bump> {
    let (d, r) = (p.d(), p.r());
    let k = 1.0 - delta;
    let sol = scalar::solve_dirichlet(
        d,
        omega_drift(p, delta),
        &move |w| (r * w * (k - w), r * (k - 2.0 * w)),
        radius,
        BUMP_SPACING,
        k,
    )?;
    Ok(bump_from(sol, 0.0))
}

/// `α_l`: `-α'' = α(1-a-α)` on `(0, l)`, zero outside.
pub fn alpha(a: f64, length: f64) -> Result<Bump> {
    alpha_k(1.0 - a, length)
}

/// `-α'' = α(k-α)` on `(0, l)`, zero outside.
pub fn alpha_k(k: f64, length: f64) -> Result<Bump> {
    let sol = scalar::solve_dirichlet(
        1.0,
        0.0,
        &move |w| (w * (k - w), k - 2.0 * w),
        0.5 * length,
        BUMP_SPACING,
        k,
    )?;
    Ok(bump_from(sol, 0.5 * length))
}

/// Maximum of a Dirichlet bump, zero when only the trivial solution exists.
fn bump_max(solve: impl Fn(f64) -> Result<Bump>, size: f64) -> Result<f64> {
    match solve(size) {
        Ok(b) => Ok(b.max),
        Err(BarrierError::Scalar(ScalarError::Trivial { .. })) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// Smallest size above `lo` whose bump reaches `level`.
fn size_for_level(solve: impl Fn(f64) -> Result<Bump>, lo: f64, level: f64) -> Result<f64> {
    let mut hi = 2.0 * lo;
    while bump_max(&solve, hi)? < level {
        hi *= 2.0;
        if hi > 1e4 * lo {
            return Err(BarrierError::NoConvergence(format!("no bump reaches {level}")));
        }
    }
    let mut lo = lo;
    while hi - lo > 1e-6 * hi {
        let mid = 0.5 * (lo + hi);
        if bump_max(&solve, mid)? >= level {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `(R_omega, R_delta)`: the existence threshold of `ω_{δ,R}` and the smallest `R` with
/// `max ω ≥ 1-2δ`.
pub fn min_radius_omega(p: &ModelParams, delta: f64) -> Result<(f64, f64)> {
    let r_omega = omega_threshold(p, delta)?;
    let r_delta = omega_radius_for(p, delta, 1.0 - 2.0 * delta, r_omega)?;
    Ok((r_omega, r_delta))
}

fn omega_threshold(p: &ModelParams, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("min_radius_omega: δ = {delta} outside (0, 1)"));
    }
    let q = p.r() * (1.0 - delta);
    Ok(scalar::critical_half_width(p.d(), omega_drift(p, delta), q, 0.01, 1e4)?)
}

/// Smallest radius above the threshold with `max ω ≥ level`.
pub fn omega_radius_for(p: &ModelParams, delta: f64, level: f64, r_omega: f64) -> Result<f64> {
    size_for_level(|r| omega(p, delta, r), 1.01 * r_omega, level)
}

/// Existence threshold `π/√(1-a)` of `α_l`, located on the linearization.
pub fn min_length_alpha(a: f64) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return domain(format!("min_length_alpha: a = {a} outside (0, 1)"));
    }
    Ok(2.0 * scalar::critical_half_width(1.0, 0.0, 1.0 - a, 0.005, 1e3)?)
}

/// Smallest `l` with `max α_l ≥ (1-a)/2`.
pub fn length_alpha_half(a: f64) -> Result<f64> {
    length_alpha_k(1.0 - a, 0.5 * (1.0 - a))
}

/// Smallest `l` with `max α ≥ level` for the kinetics `α(k-α)`.
pub fn length_alpha_k(k: f64, level: f64) -> Result<f64> {
    if !(k > 0.0 && k <= 1.0) {
        return domain(format!("length_alpha_k: k = {k} outside (0, 1]"));
    }
    let l_alpha = 2.0 * scalar::critical_half_width(1.0, 0.0, k, 0.005, 1e3)?;
    size_for_level(|l| alpha_k(k, l), 1.01 * l_alpha, level)
}

/// `θ` with rates `(±√(c²+4rd(b-1+δ)) - c)/(2d)` and amplitude fixed by `θ(ξ₁) = target`.
pub struct ThetaParams {
    pub lp: f64,
    pub lm: f64,
    pub xi1: f64,
    pub amp: f64,
}

pub fn theta_rates(p: &ModelParams, delta: f64, c: f64) -> (f64, f64) {
    let q = p.r() * (p.b() - 1.0 + delta);
    let s = (c * c + 4.0 * p.d() * q).sqrt();
    ((s - c) / (2.0 * p.d()), (-s - c) / (2.0 * p.d()))
}

/// `ξ₁` solves `θ'/θ = slope`; the amplitude then matches `θ(ξ₁) = target`.
pub fn theta(p: &ModelParams, delta: f64, c: f64, slope: f64, target: f64) -> Result<ThetaParams> {
    let (lp, lm) = theta_rates(p, delta, c);
    if !(slope > lp) {
        return Err(BarrierError::HypothesisViolated(format!(
            "(1−κ̃)λ⁻∞ = {slope} must exceed λθ⁺ = {lp}"
        )));
    }
    let gap = lp - lm;
    let xi1 = (1.0 + gap / (slope - lp)).ln() / gap;
    let amp = target / ((lp * xi1).exp() - (lm * xi1).exp());
    Ok(ThetaParams { lp, lm, xi1, amp })
}

/// `β_{c,B,η}` constants `(K_β, ξ_β)` and its profile.
pub fn beta(p: &ModelParams, c: f64, big_b: f64, eta: f64) -> Result<(f64, f64, Profile)> {
    let (d, r) = (p.d(), p.r());
    let lv = speeds::lambda_v(c, r, d)?;
    let s = (c * c - 4.0 * r * d).sqrt();
    if !(eta > 0.0 && eta < lv.min(s / d)) {
        return domain(format!("beta: η = {eta} outside (0, min(λ_v, √(c²−4rd)/d))"));
    }
    let k = r * (1.0 + p.b() * big_b) / (eta * (s - d * eta));
    let xi_b = k.ln() / eta;
    let prof = Profile::TwoExp {
        rate: lv,
        eta,
        k,
        shift: xi_b,
    };
    Ok((k, xi_b, prof))
}

/// Maximizer of a `TwoExp` profile, in its own frame.
pub fn two_exp_argmax(rate: f64, eta: f64, k: f64, shift: f64) -> f64 {
    (k * (rate + eta) / rate).ln() / eta - shift
}

/// `w̄_{δ,c,c̃}(t,x) = e^{-λ_δ(c)(c̃-c)t} e^{-Λ_δ(c,c̃)(x - c̃t - shift)}`.
pub fn wbar(a: f64, delta: f64, c: f64, ct: f64, shift: f64) -> Result<Block> {
    let l = speeds::lambda_u(c, a, delta)?;
    let big = speeds::big_lambda(c, ct, a, delta)?;
    Ok(Block::new(BlockKind::Wbar, Profile::Exp { rate: big })
        .moving(ct, shift)
        .decaying(l * (ct - c)))
}

/// `w̲` constants and block.
#[derive(Debug, Clone)]
pub struct WUnder {
    pub block: Block,
    pub eta: f64,
    pub k_w: f64,
    pub x_w: f64,
    pub big_x_w: f64,
    pub max: f64,
}

pub fn wunder(a: f64, c: f64, ct: f64, amp_a: f64, eta: f64) -> Result<WUnder> {
    let l = speeds::lambda_u(c, a, 0.0)?;
    let big = speeds::big_lambda(c, ct, a, 0.0)?;
    let s = ct - 2.0 * big;
    if !(eta > 0.0 && eta < big.min(s)) {
        return domain(format!("wunder: η = {eta} outside (0, min(Λ, √(c̃²−4(λ(c̃−c)+1))))"));
    }
    let k_w = ((1.0 + a * amp_a) / (eta * (s - eta))).max(1.0);
    let x_w = k_w.ln() / eta;
    let prof = Profile::TwoExp {
        rate: big,
        eta,
        k: k_w,
        shift: x_w,
    };
    let big_x_w = two_exp_argmax(big, eta, k_w, x_w);
    let max = prof.jet(big_x_w).f;
    Ok(WUnder {
        block: Block::new(BlockKind::Wunder, prof).moving(ct, 0.0).decaying(l * (ct - c)),
        eta,
        k_w,
        x_w,
        big_x_w,
        max,
    })
}

/// `z` constants: `R_z = π/√(-c̃² + 4(λ(c)(c̃-c) + 1 - δ))` and the maximizer `X_z`.
#[derive(Debug, Clone)]
pub struct ZBlock {
    pub block: Block,
    pub r_z: f64,
    pub x_z: f64,
    pub max: f64,
}

/// Unscaled `z(t,x) = e^{-λ(c)(c̃-c)t} e^{-c̃ξ/2} sin(πξ/(2R_z))`, `ξ = x - c̃t - shift`.
pub fn z_block(a: f64, delta: f64, c: f64, ct: f64, shift: f64) -> Result<ZBlock> {
    let l = speeds::lambda_u(c, a, 0.0)?;
    let q = -ct * ct + 4.0 * (l * (ct - c) + 1.0 - delta);
    if !(q > 0.0) || !(ct > c) {
        return domain(format!("z: −c̃² + 4(λ(c)(c̃−c)+1−δ) = {q} must be positive"));
    }
    let r_z = PI / q.sqrt();
    let w = PI / (2.0 * r_z);
    let x_z = (w / (0.5 * ct)).atan() / w;
    let prof = Profile::Sine {
        rate: 0.5 * ct,
        half_width: r_z,
    };
    let max = prof.jet(x_z).f;
    Ok(ZBlock {
        block: Block::new(BlockKind::Z, prof).moving(ct, shift).decaying(l * (ct - c)),
        r_z,
        x_z,
        max,
    })
}

/// Dirichlet principal eigenpair of `-d ψ'' = λ ψ` on `(-4R, 4R)`.
pub fn eigenpair(d: f64, radius: f64) -> (f64, Block) {
    let k = PI / (8.0 * radius);
    (
        d * k * k,
        Block::new(BlockKind::Eigenpair, Profile::Cosine { k }),
    )
}

/// Leftmost root of `g` in `[lo, hi]` where `g` changes sign in the requested direction.
pub fn scan_root(
    g: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    steps: usize,
    falling: bool,
) -> Option<f64> {
    let h = (hi - lo) / steps as f64;
    let mut ga = g(lo);
    for i in 0..steps {
        let xb = lo + (i + 1) as f64 * h;
        let gb = g(xb);
        let hit = if falling {
            ga > 0.0 && gb <= 0.0
        } else {
            ga < 0.0 && gb >= 0.0
        };
        if hit {
            let xa = xb - h;
            if gb == 0.0 {
                return Some(xb);
            }
            return brent(&g, xa, xb, 1e-12).or_else(|_| bisect(&g, xa, xb, 1e-12)).ok();
        }
        ga = gb;
    }
    None
}
