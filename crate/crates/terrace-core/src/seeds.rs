//! Initial-data generators. Every field lies in `[0, 1]` and its support or decay claim holds
//! node-exactly.

use crate::model::{competitive_leq_tol, Grid, ModelError, ModelParams, StatePair};
use crate::speeds::{self, Admissibility, SpeedError};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Width of the cosine taper on bump and step edges.
pub const TAPER: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeedError {
    #[error("support [{lo}, {hi}] is not inside the grid [{x_min}, {x_max}]")]
    SupportOutsideGrid {
        lo: f64,
        hi: f64,
        x_min: f64,
        x_max: f64,
    },
    #[error("speed pair (c1 = {c1}, c2 = {c2}) is not interior-admissible: {status:?}")]
    NotAdmissible {
        c1: f64,
        c2: f64,
        status: Admissibility,
    },
    #[error("invalid seed parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Speed(#[from] SpeedError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn check_support(g: &Grid, lo: f64, hi: f64) -> Result<(), SeedError> {
    if lo < g.x_min() || hi > g.x_max() {
        return Err(SeedError::SupportOutsideGrid {
            lo,
            hi,
            x_min: g.x_min(),
            x_max: g.x_max(),
        });
    }
    Ok(())
}

/// `amplitude (1 + cos(π (x-center)/halfwidth))/2` on `|x-center| < halfwidth`, zero elsewhere.
pub fn bump(g: &Grid, center: f64, halfwidth: f64, amplitude: f64) -> Result<Vec<f64>, SeedError> {
    if !(amplitude > 0.0 && amplitude <= 1.0) {
        return Err(SeedError::InvalidParameter(format!("amplitude {amplitude} outside (0, 1]")));
    }
    if !(halfwidth > 0.0) {
        return Err(SeedError::InvalidParameter(format!("halfwidth {halfwidth} must be positive")));
    }
    check_support(g, center - halfwidth, center + halfwidth)?;
    Ok(g.nodes()
        .iter()
        .map(|&x| {
            let z = (x - center) / halfwidth;
            if z.abs() < 1.0 {
                amplitude * 0.5 * (1.0 + (PI * z).cos())
            } else {
                0.0
            }
        })
        .collect())
}

/// 1 for `x ≤ edge - 1`, cosine drop, exactly 0 for `x ≥ edge`.
pub fn heaviside_like(g: &Grid, edge: f64) -> Result<Vec<f64>, SeedError> {
    check_support(g, edge, edge)?;
    Ok(g.nodes()
        .iter()
        .map(|&x| {
            if x <= edge - TAPER {
                1.0
            } else if x >= edge {
                0.0
            } else {
                0.5 * (1.0 + (PI * (x - edge + TAPER) / TAPER).cos())
            }
        })
        .collect())
}

/// `min(1, e^{-rate (x - anchor)})`.
pub fn exp_tail(g: &Grid, rate: f64, anchor: f64) -> Result<Vec<f64>, SeedError> {
    if !(rate > 0.0) {
        return Err(SeedError::InvalidParameter(format!("rate {rate} must be positive")));
    }
    Ok(g.nodes().iter().map(|&x| (-rate * (x - anchor)).exp().min(1.0)).collect())
}

/// `sup_x f(x) e^{rate x}` over the grid.
pub fn weighted_sup(g: &Grid, f: &[f64], rate: f64) -> f64 {
    f.iter()
        .zip(g.nodes())
        .map(|(&y, x)| y * (rate * x).exp())
        .fold(0.0, f64::max)
}

/// `u0 = min(1, e^{-Λ(c2,c1) x})`, `v0 = min(1, e^{-λ_v(c1) (x - x_v)})` with `x_v = 0`.
pub fn terrace_pair(
    g: &Grid,
    p: &ModelParams,
    c1: f64,
    c2: f64,
    c_llw: f64,
) -> Result<(Vec<f64>, Vec<f64>), SeedError> {
    let status = speeds::admissible(c1, c2, p, c_llw)?;
    if status != Admissibility::Interior {
        return Err(SeedError::NotAdmissible { c1, c2, status });
    }
    let lam_u = speeds::big_lambda(c2, c1, p.a(), 0.0)?;
    let lam_v = speeds::lambda_v(c1, p.r(), p.d())?;
    let u0 = g.nodes().iter().map(|&x| (-lam_u * x).exp().min(1.0)).collect();
    let v0 = exp_tail(g, lam_v, 0.0)?;
    Ok((u0, v0))
}

/// Unit bump of half-width 5 near the left end for `u`, `v ≡ 1`.
pub fn llw_background(g: &Grid) -> Result<(Vec<f64>, Vec<f64>), SeedError> {
    let hw = 5.0;
    let center = g.x_min() + hw + TAPER;
    let u0 = bump(g, center, hw, 1.0)?;
    Ok((u0, vec![1.0; g.n()]))
}

/// Serializable description of one seed component or pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeedSpec {
    Bump {
        center: f64,
        halfwidth: f64,
        amplitude: f64,
    },
    HeavisideLike {
        edge: f64,
    },
    ExpTail {
        rate: f64,
        anchor: f64,
    },
    /// `rate` given as `λ_v(speed)` instead of a number.
    ExpTailAtSpeed {
        speed: f64,
        anchor: f64,
    },
    /// `u0 = min(1, e^{-λ(speed) x})`, the KPP-type tail of the slower front.
    ExpTailLambdaU {
        speed: f64,
    },
    Zero,
    One,
}

impl SeedSpec {
    pub fn realize(&self, g: &Grid, p: &ModelParams) -> Result<Vec<f64>, SeedError> {
        match *self {
            SeedSpec::Bump {
                center,
                halfwidth,
                amplitude,
            } => bump(g, center, halfwidth, amplitude),
            SeedSpec::HeavisideLike { edge } => heaviside_like(g, edge),
            SeedSpec::ExpTail { rate, anchor } => exp_tail(g, rate, anchor),
            SeedSpec::ExpTailAtSpeed { speed, anchor } => {
                exp_tail(g, speeds::lambda_v(speed, p.r(), p.d())?, anchor)
            }
            SeedSpec::ExpTailLambdaU { speed } => {
                exp_tail(g, speeds::lambda_u(speed, p.a(), 0.0)?, 0.0)
            }
            SeedSpec::Zero => Ok(vec![0.0; g.n()]),
            SeedSpec::One => Ok(vec![1.0; g.n()]),
        }
    }
}

/// Seed for both components; `TerracePair` and `LlwBackground` produce the pair jointly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairSpec {
    Separate { u: SeedSpec, v: SeedSpec },
    TerracePair { c1: f64, c2: f64, c_llw: f64 },
    LlwBackground,
}

impl PairSpec {
    pub fn realize(&self, g: &Grid, p: &ModelParams) -> Result<StatePair, SeedError> {
        let (u, v) = match self {
            PairSpec::Separate { u, v } => (u.realize(g, p)?, v.realize(g, p)?),
            PairSpec::TerracePair { c1, c2, c_llw } => terrace_pair(g, p, *c1, *c2, *c_llw)?,
            PairSpec::LlwBackground => llw_background(g)?,
        };
        Ok(StatePair::new(*g, 0.0, u, v)?)
    }
}

/// `sub ⪯ (u0, v0) ⪯ sup` node-wise within `tol`.
pub fn sandwiched_by(
    s: &StatePair,
    sub: &StatePair,
    sup: &StatePair,
    tol: f64,
) -> Result<bool, ModelError> {
    Ok(competitive_leq_tol(sub, s, tol)? && competitive_leq_tol(s, sup, tol)?)
}
