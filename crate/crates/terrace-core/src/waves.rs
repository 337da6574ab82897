//! Traveling waves `(φ, ψ)(x - ct)` of the δ-perturbed system, connecting `(1+δ, 0)` at `-∞` to
//! `(0, 1-2δ)` at `+∞` with `ψ(0) = (1-2δ)/2`.
//!
//! Profiles are computed by fourth-order collocation on `[-L, L]` and damped Newton. Unknowns are
//! interleaved (`φ_i` at `2i`, `ψ_i` at `2i+1`). The phase condition at `ξ = 0` replaces the
//! right boundary condition on `φ`, so the φ-tail is selected by the equation itself.

use crate::fronts::{fit_speed, Field, FrontTrack, SpeedReport};
use crate::model::{Grid, ModelParams, StatePair};
use crate::numerics::{
    collocation_stencil, damped_newton, linear_fit, BandedMatrix, NewtonSystem, NumericsError,
    Tabulated,
};
use crate::seeds;
use crate::solver::{integrate, EscapeMonitor, SolverConfig, SolverError};
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, thiserror::Error)]
pub enum WaveError {
    #[error("Newton stalled after {iterations} iterations with residual {residual:e}")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("speed {c} is below the linear spreading bound {c_min}")]
    SubcriticalSpeed { c: f64, c_min: f64 },
    #[error("fit band [{lo}, {hi}] is too narrow or too close to the truncation edges")]
    BandTooNarrow { lo: f64, hi: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Front(#[from] crate::fronts::FrontError),
    #[error(transparent)]
    Seed(#[from] seeds::SeedError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecaySide {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveProfile {
    pub c: f64,
    pub delta: f64,
    pub truncation: f64,
    pub xi: Vec<f64>,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    pub normalization: String,
    pub measured_decay_plus: f64,
    pub measured_decay_minus: f64,
    pub phi_monotone: bool,
    pub psi_monotone: bool,
    pub residual: f64,
    pub iterations: usize,
}

/// Slack on the monotonicity flags.
pub const MONOTONE_SLACK: f64 = 1e-8;

/// Initial guess: `tanh` ramps of the given width centred at `shift`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialGuess {
    pub width: f64,
    pub shift: f64,
}

impl Default for InitialGuess {
    fn default() -> Self {
        InitialGuess {
            width: 5.0,
            shift: 0.0,
        }
    }
}

/// Linear lower bound `2 sqrt(1 + δ - a(1-2δ))` on wave speeds of the δ-system.
pub fn linear_speed_bound(p: &ModelParams, delta: f64) -> f64 {
    2.0 * (1.0 + delta - p.a() * (1.0 - 2.0 * delta)).sqrt()
}

/// `d ≤ 2 + r/(1-a)`.
pub fn uniqueness_condition(p: &ModelParams) -> bool {
    p.d() <= 2.0 + p.r() / (1.0 - p.a())
}

struct WaveSystem {
    c: f64,
    d: f64,
    r: f64,
    a: f64,
    b: f64,
    delta: f64,
    n: usize,
    h: f64,
    i0: usize,
}

impl WaveSystem {
    /// Row of equation `k` (0: φ, 1: ψ) at node `j`; the phase row follows node `i0`.
    fn row(&self, j: usize, k: usize) -> usize {
        if j <= self.i0 {
            2 * j + k
        } else {
            2 * j + k + 1
        }
    }

    fn phase_row(&self) -> usize {
        2 * self.i0 + 2
    }
}

impl NewtonSystem for WaveSystem {
    fn len(&self) -> usize {
        2 * self.n
    }

    fn residual(&self, y: &[f64]) -> Vec<f64> {
        let (n, dl) = (self.n, self.delta);
        let mut out = vec![0.0; 2 * n];
        out[0] = y[0] - (1.0 + dl);
        out[1] = y[1];
        out[self.row(n - 1, 0)] = y[2 * (n - 1) + 1] - (1.0 - 2.0 * dl);
        out[self.phase_row()] = y[2 * self.i0 + 1] - 0.5 * (1.0 - 2.0 * dl);
        for j in 1..n - 1 {
            let (s, m, d1, d2) = collocation_stencil(j, n, self.h);
            let (mut p1, mut p2, mut q1, mut q2) = (0.0, 0.0, 0.0, 0.0);
            for k in 0..m {
                let (pk, qk) = (y[2 * (s + k)], y[2 * (s + k) + 1]);
                p1 += d1[k] * pk;
                p2 += d2[k] * pk;
                q1 += d1[k] * qk;
                q2 += d2[k] * qk;
            }
            let (ph, ps) = (y[2 * j], y[2 * j + 1]);
            out[self.row(j, 0)] = -p2 - self.c * p1 - ph * (1.0 + dl - ph - self.a * ps);
            out[self.row(j, 1)] =
                -self.d * q2 - self.c * q1 - self.r * ps * (1.0 - 2.0 * dl - ps - self.b * ph);
        }
        out
    }

    fn jacobian(&self, y: &[f64]) -> BandedMatrix {
        let (n, dl) = (self.n, self.delta);
        let mut jm = BandedMatrix::zeros(2 * n, 6, 6);
        jm.add(0, 0, 1.0);
        jm.add(1, 1, 1.0);
        jm.add(self.row(n - 1, 0), 2 * (n - 1) + 1, 1.0);
        jm.add(self.phase_row(), 2 * self.i0 + 1, 1.0);
        for j in 1..n - 1 {
            let (rp, rq) = (self.row(j, 0), self.row(j, 1));
            let (s, m, d1, d2) = collocation_stencil(j, n, self.h);
            for k in 0..m {
                let col = 2 * (s + k);
                jm.add(rp, col, -d2[k] - self.c * d1[k]);
                jm.add(rq, col + 1, -self.d * d2[k] - self.c * d1[k]);
            }
            let (ph, ps) = (y[2 * j], y[2 * j + 1]);
            jm.add(rp, 2 * j, -(1.0 + dl - 2.0 * ph - self.a * ps));
            jm.add(rp, 2 * j + 1, self.a * ph);
            jm.add(rq, 2 * j, self.r * self.b * ps);
            jm.add(rq, 2 * j + 1, -self.r * (1.0 - 2.0 * dl - 2.0 * ps - self.b * ph));
        }
        jm
    }
}

/// [`solve_profile_from`] with the default `tanh` guess.
pub fn solve_profile(
    c: f64,
    p: &ModelParams,
    delta: f64,
    truncation: f64,
    mesh: usize,
) -> Result<WaveProfile, WaveError> {
    solve_profile_from(c, p, delta, truncation, mesh, InitialGuess::default())
}

/// Solves the profile on `[-truncation, truncation]` with `mesh` nodes (rounded up to odd so
/// that `ξ = 0` is a node).
pub fn solve_profile_from(
    c: f64,
    p: &ModelParams,
    delta: f64,
    truncation: f64,
    mesh: usize,
    guess: InitialGuess,
) -> Result<WaveProfile, WaveError> {
    let c_min = linear_speed_bound(p, delta);
    if c < c_min {
        return Err(WaveError::SubcriticalSpeed { c, c_min });
    }
    if !(truncation > 0.0) || mesh < 21 || !(0.0..0.5).contains(&delta) {
        return Err(WaveError::Invalid(format!(
            "truncation {truncation}, mesh {mesh}, delta {delta}"
        )));
    }
    let n = mesh | 1;
    let h = 2.0 * truncation / (n - 1) as f64;
    let sys = WaveSystem {
        c,
        d: p.d(),
        r: p.r(),
        a: p.a(),
        b: p.b(),
        delta,
        n,
        h,
        i0: (n - 1) / 2,
    };
    let xi: Vec<f64> = (0..n).map(|i| -truncation + i as f64 * h).collect();
    let mut y0 = vec![0.0; 2 * n];
    for (i, &x) in xi.iter().enumerate() {
        let s = ((x - guess.shift) / guess.width).tanh();
        y0[2 * i] = (1.0 + delta) * 0.5 * (1.0 - s);
        y0[2 * i + 1] = (1.0 - 2.0 * delta) * 0.5 * (1.0 + s);
    }
    let rep = damped_newton(&sys, y0, 1e-10, 60)?;
    if !rep.converged {
        return Err(WaveError::NoConvergence {
            iterations: rep.iterations,
            residual: rep.residual,
        });
    }
    let phi: Vec<f64> = rep.y.iter().step_by(2).copied().collect();
    let psi: Vec<f64> = rep.y.iter().skip(1).step_by(2).copied().collect();
    let phi_monotone = phi.windows(2).all(|w| w[1] <= w[0] + MONOTONE_SLACK);
    let psi_monotone = psi.windows(2).all(|w| w[1] + MONOTONE_SLACK >= w[0]);
    let mut w = WaveProfile {
        c,
        delta,
        truncation,
        xi,
        phi,
        psi,
        normalization: "psi(0) = (1-2*delta)/2".into(),
        measured_decay_plus: f64::NAN,
        measured_decay_minus: f64::NAN,
        phi_monotone,
        psi_monotone,
        residual: rep.residual,
        iterations: rep.iterations,
    };
    let l = truncation;
    w.measured_decay_plus = measure_decay(&w, DecaySide::Plus, (0.2 * l, 0.6 * l))?;
    w.measured_decay_minus = measure_decay(&w, DecaySide::Minus, (-0.8 * l, -0.3 * l))?;
    Ok(w)
}

/// Log-linear fit of `φ` (plus side) or `ψ` (minus side) over `band`; returns a positive rate.
pub fn measure_decay(w: &WaveProfile, side: DecaySide, band: (f64, f64)) -> Result<f64, WaveError> {
    let l = w.truncation;
    let (lo, hi) = band;
    if !(hi > lo) || lo < -0.9 * l || hi > 0.9 * l || hi - lo < 0.01 * l {
        return Err(WaveError::BandTooNarrow { lo, hi });
    }
    let field = match side {
        DecaySide::Plus => &w.phi,
        DecaySide::Minus => &w.psi,
    };
    let (xs, ys): (Vec<f64>, Vec<f64>) = w
        .xi
        .iter()
        .zip(field)
        .filter(|(&x, &f)| x >= lo && x <= hi && f > 0.0)
        .map(|(&x, &f)| (x, f.ln()))
        .unzip();
    if xs.len() < 3 {
        return Err(WaveError::BandTooNarrow { lo, hi });
    }
    let (slope, _, _) = linear_fit(&xs, &ys).ok_or(WaveError::BandTooNarrow { lo, hi })?;
    Ok(match side {
        DecaySide::Plus => -slope,
        DecaySide::Minus => slope,
    })
}

impl WaveProfile {
    pub fn spacing(&self) -> f64 {
        self.xi[1] - self.xi[0]
    }

    /// `(φ, ψ)` as tabulated functions trusted on `[-trust·L, trust·L]`.
    pub fn tabulate(&self, trust: f64) -> (Tabulated, Tabulated) {
        let n = self.xi.len();
        let half = (n - 1) / 2;
        let k = ((trust * half as f64) as usize).min(half - 2);
        let (lo, hi) = (half - k, half + k);
        let x0 = self.xi[0];
        let h = self.spacing();
        let phi = Tabulated::new(x0, h, self.phi.clone(), lo, hi, 1.0 + self.delta, 0.0);
        let psi = Tabulated::new(x0, h, self.psi.clone(), lo, hi, 0.0, 1.0 - 2.0 * self.delta);
        (phi, psi)
    }

    /// Sup-norm distance to `other` on common nodes; both must share the mesh.
    pub fn sup_distance(&self, other: &WaveProfile) -> Option<f64> {
        if self.xi.len() != other.xi.len() {
            return None;
        }
        let dp = self.phi.iter().zip(&other.phi).map(|(a, b)| (a - b).abs());
        let dq = self.psi.iter().zip(&other.psi).map(|(a, b)| (a - b).abs());
        Some(dp.chain(dq).fold(0.0, f64::max))
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "xi,phi,psi")?;
        for i in 0..self.xi.len() {
            writeln!(w, "{:.16e},{:.16e},{:.16e}", self.xi[i], self.phi[i], self.psi[i])?;
        }
        Ok(())
    }
}

/// Solver configuration for [`estimate_c_llw`]: domain `[0, 2.2 t_end + 40]`.
pub fn llw_config(p: &ModelParams, delta: f64, t_end: f64, dx: f64) -> Result<SolverConfig, WaveError> {
    let grid = Grid::with_spacing(0.0, 2.2 * t_end + 40.0, dx).map_err(SolverError::from)?;
    let mut cfg = SolverConfig::auto(grid, p, t_end, 0.5);
    cfg.delta = delta;
    Ok(cfg)
}

/// Front speed of `u` invading `v ≡ 1` from a compact bump, fitted over the last half.
pub fn estimate_c_llw(p: &ModelParams, delta: f64, cfg: &SolverConfig) -> Result<SpeedReport, WaveError> {
    let mut cfg = *cfg;
    cfg.delta = delta;
    let (u0, v0) = seeds::llw_background(&cfg.grid)?;
    let s0 = StatePair::new(cfg.grid, 0.0, u0, v0).map_err(SolverError::from)?;
    let mut esc = EscapeMonitor::default();
    esc.level = 0.5 * (1.0 + delta);
    let traj = integrate(&s0, p, &cfg, &mut [&mut esc])?;
    let track = FrontTrack::from_trajectory(&traj, Field::U, 0.5 * (1.0 + delta));
    Ok(fit_speed(&track, 0.5)?)
}
