//! Parameters, kinetics, grids and the competitive order.
//!
//! The system is
//!
//! ```text
//! u_t - u_xx   = u (1 - u - a v)
//! v_t - d v_xx = r v (1 - v - b u)
//! ```
//!
//! in the monostable regime `d > 0`, `r > 0`, `0 < a < 1`, `b > 1`.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Which coordinate of [`ModelParams`] failed validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamField {
    D,
    R,
    A,
    B,
}

impl fmt::Display for ParamField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParamField::D => "d",
            ParamField::R => "r",
            ParamField::A => "a",
            ParamField::B => "b",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("parameter {field} = {value} is outside the monostable regime")]
    OutOfRegime { field: ParamField, value: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
}

/// The quadruple `(d, r, a, b)`; immutable once validated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    d: f64,
    r: f64,
    a: f64,
    b: f64,
}

#[derive(Deserialize)]
struct RawParams {
    d: f64,
    r: f64,
    a: f64,
    b: f64,
}

impl<'de> Deserialize<'de> for ModelParams {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = RawParams::deserialize(de)?;
        ModelParams::new(raw.d, raw.r, raw.a, raw.b).map_err(serde::de::Error::custom)
    }
}

impl ModelParams {
    pub fn new(d: f64, r: f64, a: f64, b: f64) -> Result<Self, ModelError> {
        validate_params(ModelParams { d, r, a, b })
    }

    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }

    /// KPP speed of `u` invading empty space.
    pub fn kpp_u_speed(&self) -> f64 {
        2.0
    }

    /// KPP speed of `v` invading empty space, `2 sqrt(r d)`.
    pub fn kpp_v_speed(&self) -> f64 {
        2.0 * (self.r * self.d).sqrt()
    }
}

/// Checks the monostable ranges; the first failing field is reported.
pub fn validate_params(p: ModelParams) -> Result<ModelParams, ModelError> {
    let checks = [
        (ParamField::D, p.d, p.d > 0.0 && p.d.is_finite()),
        (ParamField::R, p.r, p.r > 0.0 && p.r.is_finite()),
        (ParamField::A, p.a, p.a > 0.0 && p.a < 1.0),
        (ParamField::B, p.b, p.b > 1.0 && p.b.is_finite()),
    ];
    for (field, value, ok) in checks {
        if !ok {
            return Err(ModelError::OutOfRegime { field, value });
        }
    }
    Ok(p)
}

/// `F_δ(u, v) = (u(1+δ-u-av), r v(1-2δ-v-bu))`; `δ = 0` is the true kinetics.
#[inline]
pub fn reaction(p: &ModelParams, u: f64, v: f64, delta: f64) -> (f64, f64) {
    (
        u * (1.0 + delta - u - p.a * v),
        p.r * v * (1.0 - 2.0 * delta - v - p.b * u),
    )
}

/// Uniform grid; node `i` sits at `x_min + i dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self, ModelError> {
        if n < 3 {
            return Err(ModelError::InvalidGrid(format!("n = {n} < 3")));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(ModelError::InvalidGrid(format!(
                "need finite x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        Ok(Grid { x_min, x_max, n })
    }

    /// Grid covering `[x_min, x_max]` with spacing as close to `dx` as an integer node count allows.
    pub fn with_spacing(x_min: f64, x_max: f64, dx: f64) -> Result<Self, ModelError> {
        if !(dx > 0.0) {
            return Err(ModelError::InvalidGrid(format!("dx = {dx} must be positive")));
        }
        let cells = ((x_max - x_min) / dx).round().max(2.0) as usize;
        Grid::new(x_min, x_min + cells as f64 * dx, cells + 1)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n - 1) as f64
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.n).map(|i| self.x_min + i as f64 * dx).collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_min && x <= self.x_max
    }
}

/// Discrete `(u, v)` at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatePair {
    pub grid: Grid,
    pub t: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

/// Slack allowed on the invariant region `[0, 1]^2`.
pub const RANGE_SLACK: f64 = 1e-12;

impl StatePair {
    /// Builds a state and checks lengths and the invariant region.
    pub fn new(grid: Grid, t: f64, u: Vec<f64>, v: Vec<f64>) -> Result<Self, ModelError> {
        let s = StatePair { grid, t, u, v };
        s.check_shape()?;
        if let Some((i, name, val)) = s.range_violation(RANGE_SLACK) {
            return Err(ModelError::InvalidState(format!(
                "{name}[{i}] = {val} outside [0, 1]"
            )));
        }
        Ok(s)
    }

    /// Builds a state checking only lengths; barrier evaluations may leave `[0, 1]`.
    pub fn from_fields(grid: Grid, t: f64, u: Vec<f64>, v: Vec<f64>) -> Result<Self, ModelError> {
        let s = StatePair { grid, t, u, v };
        s.check_shape()?;
        Ok(s)
    }

    pub fn constant(grid: Grid, u: f64, v: f64) -> Self {
        StatePair {
            grid,
            t: 0.0,
            u: vec![u; grid.n()],
            v: vec![v; grid.n()],
        }
    }

    fn check_shape(&self) -> Result<(), ModelError> {
        let n = self.grid.n();
        if self.u.len() != n || self.v.len() != n {
            return Err(ModelError::GridMismatch(format!(
                "fields have lengths ({}, {}), grid has {n} nodes",
                self.u.len(),
                self.v.len()
            )));
        }
        if !(self.t >= 0.0) {
            return Err(ModelError::InvalidState(format!("t = {} < 0", self.t)));
        }
        Ok(())
    }

    /// First node outside `[-slack, 1 + slack]`, if any.
    pub fn range_violation(&self, slack: f64) -> Option<(usize, &'static str, f64)> {
        let bad = |x: f64| !(x >= -slack && x <= 1.0 + slack);
        for (i, &x) in self.u.iter().enumerate() {
            if bad(x) {
                return Some((i, "u", x));
            }
        }
        for (i, &x) in self.v.iter().enumerate() {
            if bad(x) {
                return Some((i, "v", x));
            }
        }
        None
    }

    /// Largest excursion outside `[0, 1]` over both fields (0 when inside).
    pub fn range_excess(&self) -> f64 {
        self.u
            .iter()
            .chain(self.v.iter())
            .map(|&x| (-x).max(x - 1.0).max(0.0))
            .fold(0.0, f64::max)
    }
}

/// `s1 ⪯ s2` iff `u1 ≤ u2` and `v1 ≥ v2` at every node.
pub fn competitive_leq(s1: &StatePair, s2: &StatePair) -> Result<bool, ModelError> {
    competitive_leq_tol(s1, s2, 0.0)
}

/// [`competitive_leq`] with an absolute slack `tol` on every comparison.
pub fn competitive_leq_tol(s1: &StatePair, s2: &StatePair, tol: f64) -> Result<bool, ModelError> {
    if s1.grid != s2.grid {
        return Err(ModelError::GridMismatch("states live on different grids".into()));
    }
    if (s1.t - s2.t).abs() > 1e-9 * (1.0 + s1.t.abs()) {
        return Err(ModelError::GridMismatch(format!(
            "states at different times {} and {}",
            s1.t, s2.t
        )));
    }
    let u_ok = s1.u.iter().zip(&s2.u).all(|(a, b)| *a <= *b + tol);
    let v_ok = s1.v.iter().zip(&s2.v).all(|(a, b)| *a + tol >= *b);
    Ok(u_ok && v_ok)
}
