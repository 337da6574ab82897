//! Closed-form speed and decay calculus.
//!
//! Every root is taken in closed form with the minus branch of the quadratic formula, except
//! [`perturbed_speeds_compact`], which solves an implicit equation by bisection.

use crate::model::ModelParams;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpeedError {
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("boundary case: {0}")]
    BoundaryCase(String),
    #[error("delta too large: {0}")]
    DeltaTooLarge(String),
}

type Result<T> = std::result::Result<T, SpeedError>;

/// Relative tolerance under which two speeds are considered equal.
pub const BOUNDARY_TOL: f64 = 1e-9;

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= BOUNDARY_TOL * x.abs().max(y.abs()).max(1.0)
}

fn domain<T>(msg: String) -> Result<T> {
    Err(SpeedError::DomainError(msg))
}

/// Square root of a discriminant that may be a rounding error below zero.
fn sqrt_disc(disc: f64, scale: f64) -> Option<f64> {
    if disc >= 0.0 {
        Some(disc.sqrt())
    } else if disc > -1e-12 * scale.max(1.0) {
        Some(0.0)
    } else {
        None
    }
}

/// `f(c) = c - sqrt(c^2 - 4(1-a)) + 2 sqrt(a)`, defined for `c ≥ 2 sqrt(1-a)`.
pub fn f_of(c: f64, a: f64) -> Result<f64> {
    f_delta_raw(c, a)
}

/// Inverse of [`f_of`] on `(2 sqrt(a), 2(sqrt(1-a) + sqrt(a))]`.
pub fn f_inverse(ct: f64, a: f64) -> Result<f64> {
    let sa = a.sqrt();
    let hi = 2.0 * ((1.0 - a).sqrt() + sa);
    if !(ct > 2.0 * sa) || ct > hi * (1.0 + 1e-15) {
        return domain(format!("f_inverse({ct}) outside (2√a, 2(√(1−a)+√a)] = ({}, {hi}]", 2.0 * sa));
    }
    // Solving ct - 2√a = c - √(c²-4(1-a)) for c.
    let s = ct - 2.0 * sa;
    Ok((s * s + 4.0 * (1.0 - a)) / (2.0 * s))
}

/// `a_δ = (1-2δ) a / (1+δ)`.
pub fn a_delta(a: f64, delta: f64) -> f64 {
    (1.0 - 2.0 * delta) * a / (1.0 + delta)
}

fn check_delta(delta: f64, closed_half: bool) -> Result<()> {
    let ok = delta >= 0.0 && (delta < 0.5 || (closed_half && delta == 0.5));
    if ok {
        Ok(())
    } else {
        domain(format!("delta = {delta} outside [0, 1/2)"))
    }
}

/// Smaller root of `λ² - cλ + (1-a_δ) = 0`.
pub fn lambda_u(c: f64, a: f64, delta: f64) -> Result<f64> {
    check_delta(delta, true)?;
    let k = 1.0 - a_delta(a, delta);
    match sqrt_disc(c * c - 4.0 * k, c * c) {
        Some(s) if c > 0.0 => Ok(smaller_root(c, s, k)),
        _ => domain(format!("lambda_u: c = {c} below 2√(1−a_δ) = {}", 2.0 * k.sqrt())),
    }
}

/// Smaller root of `x² - c x + p = 0` given `s = sqrt(c² - 4p)`, computed without cancellation.
fn smaller_root(c: f64, s: f64, p: f64) -> f64 {
    let big = 0.5 * (c + s);
    if big > 0.0 {
        p / big
    } else {
        0.5 * (c - s)
    }
}

/// Inverse of [`lambda_u`]: `l + (1-a_δ)/l`.
pub fn lambda_u_inverse(l: f64, a: f64, delta: f64) -> Result<f64> {
    check_delta(delta, true)?;
    let k = 1.0 - a_delta(a, delta);
    if !(l > 0.0) || l > k.sqrt() * (1.0 + 1e-15) {
        return domain(format!("lambda_u_inverse: l = {l} outside (0, √(1−a_δ)]"));
    }
    Ok(l + k / l)
}

/// Smaller root of `d λ² - c λ + r = 0`.
pub fn lambda_v(c: f64, r: f64, d: f64) -> Result<f64> {
    match sqrt_disc(c * c - 4.0 * r * d, c * c) {
        Some(s) if c > 0.0 && r > 0.0 && d > 0.0 => Ok(2.0 * r / (c + s)),
        _ => domain(format!("lambda_v: c = {c} below 2√(rd) = {}", 2.0 * (r * d).sqrt())),
    }
}

/// `f_δ(c) = c - sqrt(c² - 4(1-a_δ)) + 2 sqrt(a_δ)`.
pub fn f_delta(c: f64, a: f64, delta: f64) -> Result<f64> {
    check_delta(delta, false)?;
    f_delta_raw(c, a_delta(a, delta))
}

fn f_delta_raw(c: f64, ad: f64) -> Result<f64> {
    let k = 1.0 - ad;
    match sqrt_disc(c * c - 4.0 * k, c * c) {
        Some(s) if c > 0.0 => Ok(c - s + 2.0 * ad.sqrt()),
        _ => domain(format!("f: c = {c} below 2√(1−a) = {}", 2.0 * k.sqrt())),
    }
}

/// Smaller root of `Λ² - c̃ Λ + λ_δ(c)(c̃ - c) + 1 = 0`, for `c̃ ≥ max(c, f_δ(c))`.
pub fn big_lambda(c: f64, ct: f64, a: f64, delta: f64) -> Result<f64> {
    let l = lambda_u(c, a, delta)?;
    let fd = f_delta(c, a, delta)?;
    let tol = 1e-12 * ct.abs().max(1.0);
    if ct < c - tol || ct < fd - tol {
        return domain(format!(
            "big_lambda: c̃ = {ct} below max(c, f_δ(c)) = {}",
            c.max(fd)
        ));
    }
    let p = l * (ct - c) + 1.0;
    match sqrt_disc(ct * ct - 4.0 * p, ct * ct) {
        Some(s) => Ok(smaller_root(ct, s, p)),
        None => domain(format!("big_lambda: negative discriminant at ({c}, {ct})")),
    }
}

/// Accelerated speed `f⁻¹(2 sqrt(rd))` in the closed form `√(rd) - √a + (1-a)/(√(rd) - √a)`.
pub fn c_acc(r: f64, d: f64, a: f64) -> Result<f64> {
    let s = (r * d).sqrt();
    let sa = a.sqrt();
    // Same range as f_inverse at ct = 2√(rd).
    f_inverse(2.0 * s, a)?;
    Ok(s - sa + (1.0 - a) / (s - sa))
}

/// Decay rate of `ψ` at `-∞`: `(sqrt(c² + 4rd(b-1)) - c) / (2d)`.
pub fn lambda_minus_inf(c: f64, p: &ModelParams) -> f64 {
    let q = p.r() * (p.b() - 1.0);
    // Rationalized to avoid cancellation for large c.
    2.0 * q / ((c * c + 4.0 * p.d() * q).sqrt() + c)
}

/// Decay rate of `ψ` at `-∞` for the δ-system, `(sqrt(c² + 4rd(b-1+(b+2)δ)) - c) / (2d)`.
pub fn lambda_minus_inf_delta(c: f64, p: &ModelParams, delta: f64) -> f64 {
    let q = p.r() * (p.b() - 1.0 + (p.b() + 2.0) * delta);
    2.0 * q / ((c * c + 4.0 * p.d() * q).sqrt() + c)
}

/// The five tail rates of the profile equations at speed `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailRates {
    pub lambda1_minus: f64,
    pub lambda2_minus: f64,
    pub lambda1_plus: f64,
    pub lambda2_plus: f64,
    pub lambda3_plus: f64,
}

pub fn tail_rates(c: f64, p: &ModelParams) -> Result<TailRates> {
    let (d, r, a) = (p.d(), p.r(), p.a());
    let disc = c * c - 4.0 * (1.0 - a);
    let s = match sqrt_disc(disc, c * c) {
        Some(s) if c > 0.0 => s,
        _ => return domain(format!("tail_rates: c = {c} below 2√(1−a)")),
    };
    Ok(TailRates {
        lambda1_minus: 2.0 / ((c * c + 4.0).sqrt() + c),
        lambda2_minus: lambda_minus_inf(c, p),
        lambda1_plus: (c + (c * c + 4.0 * r * d).sqrt()) / (2.0 * d),
        lambda2_plus: 0.5 * (c + s),
        lambda3_plus: smaller_root(c, s, 1.0 - a),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    MinusInf,
    PlusInf,
}

/// Branches of the tail classification; `Minus*` at `-∞`, `Plus*` at `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecayCase {
    #[serde(rename = "1a")]
    Minus1a,
    #[serde(rename = "1b")]
    Minus1b,
    #[serde(rename = "1c")]
    Minus1c,
    #[serde(rename = "2a-i")]
    Plus2aI,
    #[serde(rename = "2a-ii")]
    Plus2aII,
    #[serde(rename = "2a-iii")]
    Plus2aIII,
    #[serde(rename = "2a-iv")]
    Plus2aIV,
    #[serde(rename = "2a-v")]
    Plus2aV,
    #[serde(rename = "2b-i")]
    Plus2bI,
    #[serde(rename = "2b-ii")]
    Plus2bII,
    #[serde(rename = "2b-iii")]
    Plus2bIII,
}

impl DecayCase {
    pub fn label(&self) -> &'static str {
        match self {
            DecayCase::Minus1a => "1a",
            DecayCase::Minus1b => "1b",
            DecayCase::Minus1c => "1c",
            DecayCase::Plus2aI => "2a-i",
            DecayCase::Plus2aII => "2a-ii",
            DecayCase::Plus2aIII => "2a-iii",
            DecayCase::Plus2aIV => "2a-iv",
            DecayCase::Plus2aV => "2a-v",
            DecayCase::Plus2bI => "2b-i",
            DecayCase::Plus2bII => "2b-ii",
            DecayCase::Plus2bIII => "2b-iii",
        }
    }
}

/// One side of the tail classification.
///
/// `phi_rate` and `psi_rate` are the predicted exponential rates at which `φ` and `ψ` approach
/// their limits on that side. `phi_rate` is `None` at `+∞` when `c` equals `c_LLW`, where the
/// slow-decay selection is not guaranteed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayClass {
    pub side: Side,
    pub case_label: DecayCase,
    pub rates: Vec<(String, f64)>,
    pub phi_rate: Option<f64>,
    pub psi_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayClassification {
    pub minus: DecayClass,
    pub plus: DecayClass,
}

/// Branch selection of the tail classification for a profile of speed `c ≥ c_llw`.
pub fn decay_classify(c: f64, p: &ModelParams, c_llw: f64) -> Result<DecayClassification> {
    if c < c_llw * (1.0 - BOUNDARY_TOL) {
        return domain(format!("decay_classify: c = {c} below c_LLW = {c_llw}"));
    }
    let t = tail_rates(c, p)?;
    let (l1m, l2m) = (t.lambda1_minus, t.lambda2_minus);
    let (minus_case, phi_minus) = if close(l1m, l2m) {
        (DecayCase::Minus1c, l2m)
    } else if l2m > l1m {
        (DecayCase::Minus1a, l1m)
    } else {
        (DecayCase::Minus1b, l2m)
    };
    let minus = DecayClass {
        side: Side::MinusInf,
        case_label: minus_case,
        rates: vec![("lambda1_minus".into(), l1m), ("lambda2_minus".into(), l2m)],
        phi_rate: Some(phi_minus),
        psi_rate: l2m,
    };

    let (l1, l2, l3) = (t.lambda1_plus, t.lambda2_plus, t.lambda3_plus);
    let critical = close(c, 2.0 * (1.0 - p.a()).sqrt());
    let (plus_case, psi_plus) = if critical {
        if close(l1, l2) {
            (DecayCase::Plus2bII, l1)
        } else if l1 < l2 {
            (DecayCase::Plus2bI, l1)
        } else {
            (DecayCase::Plus2bIII, l2)
        }
    } else if close(l1, l3) {
        (DecayCase::Plus2aII, l1)
    } else if l1 < l3 {
        (DecayCase::Plus2aI, l1)
    } else if close(l1, l2) {
        (DecayCase::Plus2aIV, l3)
    } else if l1 < l2 {
        (DecayCase::Plus2aIII, l3)
    } else {
        (DecayCase::Plus2aV, l3)
    };
    let slow = c > c_llw * (1.0 + BOUNDARY_TOL);
    let phi_plus = if critical {
        Some(l2)
    } else if slow {
        Some(l3)
    } else {
        None
    };
    let plus = DecayClass {
        side: Side::PlusInf,
        case_label: plus_case,
        rates: vec![
            ("lambda1_plus".into(), l1),
            ("lambda2_plus".into(), l2),
            ("lambda3_plus".into(), l3),
        ],
        phi_rate: phi_plus,
        psi_rate: psi_plus,
    };
    Ok(DecayClassification { minus, plus })
}

/// Outcome of the two sufficient conditions for linear determinacy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearDeterminacy {
    pub llw_condition: bool,
    pub huang_condition: bool,
    pub c_llw_if_determined: Option<f64>,
}

pub fn linear_determinacy(p: &ModelParams) -> LinearDeterminacy {
    let (d, r, a, b) = (p.d(), p.r(), p.a(), p.b());
    let llw = d <= 2.0 && (a * b - 1.0) / (1.0 - a) <= (2.0 - d) / r;
    let second = if d == 1.0 {
        f64::NEG_INFINITY
    } else {
        (d - 2.0) / (2.0 * (d - 1.0).abs())
    };
    let huang = ((2.0 - d) * (1.0 - a) + r) / (r * b) >= a.max(second);
    let c = if llw || huang {
        Some(2.0 * (1.0 - a).sqrt())
    } else {
        None
    };
    LinearDeterminacy {
        llw_condition: llw,
        huang_condition: huang,
        c_llw_if_determined: c,
    }
}

/// Parameters of the rescaled system equivalent to the δ-kinetics `F_δ`.
pub fn rescaled_params(p: &ModelParams, delta: f64) -> Result<ModelParams> {
    check_delta(delta, false)?;
    ModelParams::new(
        p.d(),
        (1.0 - 2.0 * delta) * p.r() / (1.0 + delta),
        a_delta(p.a(), delta),
        (1.0 + delta) * p.b() / (1.0 - 2.0 * delta),
    )
    .map_err(|e| SpeedError::DomainError(e.to_string()))
}

/// `c_LLW^δ = sqrt(1+δ) · 2 sqrt(1-a_δ)` when the rescaled system is linearly determined.
pub fn c_llw_delta_if_determined(p: &ModelParams, delta: f64) -> Result<Option<f64>> {
    let q = rescaled_params(p, delta)?;
    Ok(linear_determinacy(&q)
        .c_llw_if_determined
        .map(|c| (1.0 + delta).sqrt() * c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrichotomyCase {
    Extinction,
    Accelerated,
    Llw,
}

/// Predicted spreading speeds; `c1_star` is the `v` front, `c2_star` the `u` front.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedPrediction {
    pub case_id: TrichotomyCase,
    pub c1_star: f64,
    pub c2_star: f64,
    pub c_llw_used: f64,
    pub linearly_determined: bool,
}

pub fn predict_trichotomy(p: &ModelParams, c_llw: f64) -> Result<SpeedPrediction> {
    let a = p.a();
    let lo = 2.0 * (1.0 - a).sqrt();
    if c_llw < lo * (1.0 - BOUNDARY_TOL) || c_llw > 2.0 * (1.0 + BOUNDARY_TOL) {
        return domain(format!("c_llw = {c_llw} outside [2√(1−a), 2] = [{lo}, 2]"));
    }
    let cv = p.kpp_v_speed();
    let f_llw = f_of(c_llw.max(lo), a)?;
    let linearly_determined = {
        let ld = linear_determinacy(p);
        ld.llw_condition || ld.huang_condition
    };
    if close(cv, 2.0) {
        return Err(SpeedError::BoundaryCase(format!("2√(rd) = {cv} equals 2")));
    }
    if close(cv, f_llw) {
        return Err(SpeedError::BoundaryCase(format!(
            "2√(rd) = {cv} equals f(c_LLW) = {f_llw}"
        )));
    }
    let (case_id, c2_star) = if cv < 2.0 {
        (TrichotomyCase::Extinction, 2.0)
    } else if cv < f_llw {
        (TrichotomyCase::Accelerated, c_acc(p.r(), p.d(), a)?)
    } else {
        (TrichotomyCase::Llw, c_llw)
    };
    Ok(SpeedPrediction {
        case_id,
        c1_star: cv,
        c2_star,
        c_llw_used: c_llw,
        linearly_determined,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Admissibility {
    Interior,
    LowerBoundViolated,
    Boundary,
}

/// Classifies the speed pair `(c1, c2)` (`v` front, `u` front).
pub fn admissible(c1: f64, c2: f64, p: &ModelParams, c_llw: f64) -> Result<Admissibility> {
    let cv = p.kpp_v_speed();
    if c1 < cv * (1.0 - BOUNDARY_TOL) {
        return domain(format!("c1 = {c1} below 2√(rd) = {cv}"));
    }
    if c2 < c_llw * (1.0 - BOUNDARY_TOL) {
        return domain(format!("c2 = {c2} below c_LLW = {c_llw}"));
    }
    let f2 = f_of(c2.max(2.0 * (1.0 - p.a()).sqrt()), p.a())?;
    let strict_gt = |x: f64, y: f64| x > y && !close(x, y);
    if strict_gt(c1, cv) && strict_gt(c2, c_llw) && strict_gt(c1, c2) && strict_gt(c1, f2) {
        Ok(Admissibility::Interior)
    } else if strict_gt(c1, c2) && strict_gt(f2, c1) {
        Ok(Admissibility::LowerBoundViolated)
    } else {
        Ok(Admissibility::Boundary)
    }
}

/// The inequality `(Λ(c2,c1)² + 1)/Λ(c2,c1) < c1` used to order the `u` tail behind the `v` front.
pub fn estimate_speed_w_holds(c2: f64, c1: f64, a: f64) -> Result<bool> {
    let l = big_lambda(c2, c1, a, 0.0)?;
    Ok((l * l + 1.0) / l < c1)
}

/// `c_2^δ = (λ_δ⁻¹ ∘ λ)(c2)` with the checks that make the terrace construction well posed.
pub fn perturbed_speeds_terrace(
    c2: f64,
    c1: f64,
    a: f64,
    delta: f64,
    c_llw_delta: f64,
) -> Result<f64> {
    check_delta(delta, false)?;
    let l = lambda_u(c2, a, 0.0)?;
    if delta == 0.0 {
        return Ok(c2);
    }
    let ad = a_delta(a, delta);
    let too_large = |what: &str| Err(SpeedError::DeltaTooLarge(format!("{what} fails at δ = {delta}")));
    if !(l < (1.0 - ad).sqrt()) {
        return too_large("λ(c2) < √(1−a_δ)");
    }
    let c2d = lambda_u_inverse(l, a, delta)?;
    if !(4.0 * (l * (c1 - c2d) + 1.0) < c1 * c1) {
        return too_large("4(λ_δ(c2^δ)(c1−c2^δ)+1) < c1²");
    }
    if !(c_llw_delta < c2d) {
        return too_large("c_LLW^δ < c2^δ");
    }
    if !(c2 < c2d && c2d < c1) {
        return too_large("c2 < c2^δ < c1");
    }
    let fd = f_delta(c2d, a, delta)?;
    if !(-4.0 * ad.sqrt() < c1 - fd) {
        return too_large("−4√a_δ < c1 − f_δ(c2^δ)");
    }
    if !(fd < f_of(c2, a)? && f_of(c2, a)? < c1) {
        return too_large("f_δ(c2^δ) < f(c2) < c1");
    }
    let ld = big_lambda(c2d, c1, a, delta)?;
    if !(ld < big_lambda(c2, c1, a, 0.0)?) {
        return too_large("Λ_δ(c2^δ, c1) < Λ(c2, c1)");
    }
    Ok(c2d)
}

/// Perturbed speed pair of the compactly supported construction.
///
/// `c1_delta = 2 sqrt(r(1-2δ)d) - δ`, and `c2_delta` solves `Λ_δ(·, c1_delta) = Λ(c2, 2 sqrt(rd))`
/// by bisection on the interval where `Λ_δ(·, c1_delta)` is defined and decreasing.
pub fn perturbed_speeds_compact(
    c2: f64,
    p: &ModelParams,
    delta: f64,
    c_llw_delta: f64,
) -> Result<(f64, f64)> {
    check_delta(delta, false)?;
    let a = p.a();
    let cv = p.kpp_v_speed();
    let lo_c2 = f_inverse(cv, a)?;
    if !(c2 > lo_c2 && c2 < 2.0) {
        return domain(format!("c2 = {c2} outside (f⁻¹(2√(rd)), 2) = ({lo_c2}, 2)"));
    }
    let target = big_lambda(c2, cv, a, 0.0)?;
    let c1d = 2.0 * (p.r() * (1.0 - 2.0 * delta) * p.d()).sqrt() - delta;
    if delta == 0.0 {
        return Ok((c1d, c2));
    }
    let ad = a_delta(a, delta);
    let too_large = |what: String| Err(SpeedError::DeltaTooLarge(format!("{what} at δ = {delta}")));
    // Λ_δ(·, c1d) is defined on [c_lo, c1d] where f_δ(c_lo) = c1d, decreasing from c1d/2.
    let c_min = 2.0 * (1.0 - ad).sqrt();
    if !(c1d > c_min) {
        return too_large(format!("c1^δ = {c1d} > 2√(1−a_δ)"));
    }
    let c_lo = if f_delta_raw(c_min, ad)? <= c1d {
        c_min
    } else {
        // f_δ is decreasing; invert it on [c_min, c1d].
        let s = c1d - 2.0 * ad.sqrt();
        (s * s + 4.0 * (1.0 - ad)) / (2.0 * s)
    };
    let g = |c: f64| big_lambda(c, c1d, a, delta).map(|l| l - target);
    let (g_lo, g_hi) = (g(c_lo)?, g(c1d)?);
    if !(g_lo >= 0.0 && g_hi < 0.0) {
        return too_large(format!(
            "Λ(c2, 2√(rd)) = {target} outside the range ({}, {}] of Λ_δ(·, c1^δ)",
            g_hi + target,
            g_lo + target
        ));
    }
    let (mut lo, mut hi) = (c_lo, c1d);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid)? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    let c2d = 0.5 * (lo + hi);
    if !(c2 < c2d && c2d < c1d && c1d < cv) {
        return too_large(format!("ordering c2 < c2^δ < c1^δ < 2√(rd) with c2^δ = {c2d}"));
    }
    if !(c_llw_delta < c2d) {
        return too_large(format!("c_LLW^δ = {c_llw_delta} < c2^δ = {c2d}"));
    }
    Ok((c1d, c2d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smaller_root_matches_naive_formula() {
        let (c, p) = (3.0_f64, 1.4_f64);
        let s = (c * c - 4.0 * p).sqrt();
        assert!((smaller_root(c, s, p) - 0.5 * (c - s)).abs() < 1e-15);
    }

    #[test]
    fn tiny_negative_discriminant_is_a_double_root() {
        assert_eq!(sqrt_disc(-1e-16, 4.0), Some(0.0));
        assert_eq!(sqrt_disc(-1e-3, 4.0), None);
    }
}
