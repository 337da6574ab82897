//! Explicit finite-difference integrator on a truncated line.
//!
//! Forward Euler in time, second-order central differences in space. For
//! `dt ≤ STABLE_FRACTION · cfl_limit` every step maps `[0,1]²` into itself, so no clamping is
//! ever applied.

use crate::exec;
use crate::model::{reaction, Grid, ModelError, ModelParams, StatePair};
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error("dt = {dt} exceeds the CFL limit {limit}")]
    CflViolation { dt: f64, limit: f64 },
    #[error("{field}-front at x = {x} is within {margin} of the boundary at t = {t}")]
    DomainEscape {
        t: f64,
        field: &'static str,
        x: f64,
        margin: f64,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Boundary {
    NeumannZero,
    Dirichlet { u: f64, v: f64 },
}

/// Fraction of [`cfl_limit`] used by [`SolverConfig::auto`]; below it the scheme is
/// invariant-region preserving.
pub const STABLE_FRACTION: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub grid: Grid,
    pub dt: f64,
    pub t_end: f64,
    pub left_bc: Boundary,
    pub right_bc: Boundary,
    pub snapshot_every: f64,
    #[serde(default)]
    pub delta: f64,
}

/// `min(dx²/(2 max(1,d)), 1/(4 max(1, r(b+1))))`.
pub fn cfl_limit(g: &Grid, p: &ModelParams) -> f64 {
    let dx = g.dx();
    let diff = dx * dx / (2.0 * p.d().max(1.0));
    let reac = 1.0 / (4.0 * (p.r() * (p.b() + 1.0)).max(1.0));
    diff.min(reac)
}

impl SolverConfig {
    /// Neumann closure on both sides, `dt` the largest divisor of `snapshot_every` within
    /// `STABLE_FRACTION · cfl_limit`.
    pub fn auto(grid: Grid, p: &ModelParams, t_end: f64, snapshot_every: f64) -> Self {
        let target = STABLE_FRACTION * cfl_limit(&grid, p);
        let m = (snapshot_every / target).ceil().max(1.0);
        SolverConfig {
            grid,
            dt: snapshot_every / m,
            t_end,
            left_bc: Boundary::NeumannZero,
            right_bc: Boundary::NeumannZero,
            snapshot_every,
            delta: 0.0,
        }
    }

    /// Same cadence with `dt` no larger than `max_dt`.
    pub fn with_max_dt(mut self, max_dt: f64) -> Self {
        if self.dt > max_dt {
            let m = (self.snapshot_every / max_dt).ceil();
            self.dt = self.snapshot_every / m;
        }
        self
    }

    pub fn steps_per_snapshot(&self) -> usize {
        (self.snapshot_every / self.dt).round() as usize
    }

    pub fn validate(&self, p: &ModelParams) -> Result<(), SolverError> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(SolverError::InvalidConfig(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(SolverError::InvalidConfig(format!("t_end = {} must be ≥ 0", self.t_end)));
        }
        if !(self.snapshot_every > 0.0) {
            return Err(SolverError::InvalidConfig("snapshot_every must be positive".into()));
        }
        let m = (self.snapshot_every / self.dt).round();
        if m < 1.0 || (m * self.dt - self.snapshot_every).abs() > 1e-12 * self.snapshot_every.max(1.0)
        {
            return Err(SolverError::InvalidConfig(format!(
                "snapshot_every = {} is not an integer multiple of dt = {}",
                self.snapshot_every, self.dt
            )));
        }
        if !(self.delta >= 0.0 && self.delta < 0.5) {
            return Err(SolverError::InvalidConfig(format!("delta = {} outside [0, 1/2)", self.delta)));
        }
        for bc in [self.left_bc, self.right_bc] {
            if let Boundary::Dirichlet { u, v } = bc {
                if !(0.0..=1.0).contains(&u) || !(0.0..=1.0).contains(&v) {
                    return Err(SolverError::InvalidConfig(format!(
                        "Dirichlet values ({u}, {v}) outside [0, 1]"
                    )));
                }
            }
        }
        let limit = cfl_limit(&self.grid, p);
        if self.dt > limit * (1.0 + 1e-12) {
            return Err(SolverError::CflViolation { dt: self.dt, limit });
        }
        Ok(())
    }
}

/// Writes one explicit step from `(u, v)` into `(un, vn)`.
fn step_kernel(
    u: &[f64],
    v: &[f64],
    un: &mut [f64],
    vn: &mut [f64],
    p: &ModelParams,
    cfg: &SolverConfig,
) {
    let n = u.len();
    let dx = cfg.grid.dx();
    let (dt, delta) = (cfg.dt, cfg.delta);
    let lam_u = dt / (dx * dx);
    let lam_v = p.d() * lam_u;
    exec::for_each_chunk_pair(un, vn, |off, uc, vc| {
        for (k, (uo, vo)) in uc.iter_mut().zip(vc.iter_mut()).enumerate() {
            let i = off + k;
            let (il, ir) = match i {
                0 => (1, 1),
                _ if i == n - 1 => (n - 2, n - 2),
                _ => (i - 1, i + 1),
            };
            let (ui, vi) = (u[i], v[i]);
            let (fu, fv) = reaction(p, ui, vi, delta);
            *uo = ui + lam_u * (u[il] - 2.0 * ui + u[ir]) + dt * fu;
            *vo = vi + lam_v * (v[il] - 2.0 * vi + v[ir]) + dt * fv;
        }
    });
    if let Boundary::Dirichlet { u: bu, v: bv } = cfg.left_bc {
        un[0] = bu;
        vn[0] = bv;
    }
    if let Boundary::Dirichlet { u: bu, v: bv } = cfg.right_bc {
        un[n - 1] = bu;
        vn[n - 1] = bv;
    }
}

/// One forward-Euler step.
pub fn step(s: &StatePair, p: &ModelParams, cfg: &SolverConfig) -> Result<StatePair, SolverError> {
    if s.grid != cfg.grid {
        return Err(ModelError::GridMismatch("state and config grids differ".into()).into());
    }
    let limit = cfl_limit(&cfg.grid, p);
    if cfg.dt > limit * (1.0 + 1e-12) {
        return Err(SolverError::CflViolation { dt: cfg.dt, limit });
    }
    let n = s.grid.n();
    let mut un = vec![0.0; n];
    let mut vn = vec![0.0; n];
    step_kernel(&s.u, &s.v, &mut un, &mut vn, p, cfg);
    Ok(StatePair {
        grid: s.grid,
        t: s.t + cfg.dt,
        u: un,
        v: vn,
    })
}

/// Observer invoked at every snapshot; an error aborts the integration.
pub trait Monitor {
    fn observe(&mut self, s: &StatePair) -> Result<(), SolverError>;
}

impl<F: FnMut(&StatePair) -> Result<(), SolverError>> Monitor for F {
    fn observe(&mut self, s: &StatePair) -> Result<(), SolverError> {
        self(s)
    }
}

/// Flags fronts that come within `margin_cells · dx` of either end of the grid.
#[derive(Debug, Clone)]
pub struct EscapeMonitor {
    pub level: f64,
    pub margin_cells: f64,
}

impl Default for EscapeMonitor {
    fn default() -> Self {
        EscapeMonitor {
            level: 0.5,
            margin_cells: 10.0,
        }
    }
}

impl Monitor for EscapeMonitor {
    fn observe(&mut self, s: &StatePair) -> Result<(), SolverError> {
        let g = s.grid;
        let margin = self.margin_cells * g.dx();
        for (field, data) in [("u", &s.u), ("v", &s.v)] {
            if let Some(x) = crate::fronts::rightmost_crossing(&g, data, self.level) {
                if x > g.x_max() - margin || x < g.x_min() + margin {
                    return Err(SolverError::DomainEscape {
                        t: s.t,
                        field,
                        x,
                        margin,
                    });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub snapshots: Vec<StatePair>,
    pub config: SolverConfig,
    pub params: ModelParams,
}

impl Trajectory {
    pub fn last(&self) -> &StatePair {
        self.snapshots.last().expect("trajectory has at least the initial snapshot")
    }

    /// Largest excursion outside `[0, 1+δ]` for `u` and `[0, 1]` for `v` over all snapshots.
    pub fn max_range_excess(&self) -> f64 {
        let top_u = 1.0 + self.config.delta;
        self.snapshots
            .iter()
            .flat_map(|s| {
                let eu = s.u.iter().map(move |&x| (-x).max(x - top_u));
                let ev = s.v.iter().map(|&x| (-x).max(x - 1.0));
                eu.chain(ev)
            })
            .fold(0.0, f64::max)
    }
}

/// Integrates to `t_end`, snapshotting every `snapshot_every` and at `t_end`.
pub fn integrate(
    s0: &StatePair,
    p: &ModelParams,
    cfg: &SolverConfig,
    monitors: &mut [&mut dyn Monitor],
) -> Result<Trajectory, SolverError> {
    cfg.validate(p)?;
    if s0.grid != cfg.grid {
        return Err(ModelError::GridMismatch("initial state and config grids differ".into()).into());
    }
    let t0 = s0.t;
    let mut cur = s0.clone();
    for m in monitors.iter_mut() {
        m.observe(&cur)?;
    }
    let mut snapshots = vec![cur.clone()];
    let total = ((cfg.t_end / cfg.dt) - 1e-9).ceil().max(0.0) as usize;
    let every = cfg.steps_per_snapshot().max(1);
    let n = cfg.grid.n();
    let mut un = vec![0.0; n];
    let mut vn = vec![0.0; n];
    for k in 1..=total {
        step_kernel(&cur.u, &cur.v, &mut un, &mut vn, p, cfg);
        std::mem::swap(&mut cur.u, &mut un);
        std::mem::swap(&mut cur.v, &mut vn);
        // Multiplying the step count avoids accumulating rounding in t.
        cur.t = t0 + k as f64 * cfg.dt;
        if k % every == 0 || k == total {
            for m in monitors.iter_mut() {
                m.observe(&cur)?;
            }
            snapshots.push(cur.clone());
        }
    }
    Ok(Trajectory {
        snapshots,
        config: *cfg,
        params: *p,
    })
}

/// `true` iff `sub ⪯ sup` (within `1e-9`) at every common snapshot.
pub fn comparison_monitor(sub: &Trajectory, sup: &Trajectory) -> Result<bool, ModelError> {
    if sub.config.grid != sup.config.grid {
        return Err(ModelError::GridMismatch("trajectories on different grids".into()));
    }
    let mut j = 0;
    for s in &sub.snapshots {
        while j < sup.snapshots.len() && sup.snapshots[j].t < s.t - 1e-9 {
            j += 1;
        }
        if j == sup.snapshots.len() {
            break;
        }
        let o = &sup.snapshots[j];
        if (o.t - s.t).abs() <= 1e-9 * (1.0 + s.t.abs())
            && !crate::model::competitive_leq_tol(s, o, 1e-9)?
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Space–time dump `t,x,u,v`, one row per node per snapshot, 17 significant digits.
pub fn write_space_time_csv<W: Write>(traj: &Trajectory, mut w: W) -> Result<(), SolverError> {
    writeln!(w, "t,x,u,v")?;
    for s in &traj.snapshots {
        for i in 0..s.grid.n() {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                s.t,
                s.grid.x(i),
                s.u[i],
                s.v[i]
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_dt_divides_cadence() {
        let p = ModelParams::new(1.0, 1.21, 0.5, 1.1).unwrap();
        let g = Grid::with_spacing(0.0, 10.0, 0.1).unwrap();
        let cfg = SolverConfig::auto(g, &p, 1.0, 0.5);
        cfg.validate(&p).unwrap();
        assert!(cfg.dt <= STABLE_FRACTION * cfl_limit(&g, &p));
    }
}
