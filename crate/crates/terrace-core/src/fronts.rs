//! Level-set tracking, speed fitting, plateau detection and the wedge check.

use crate::model::{Grid, StatePair};
use crate::numerics::linear_fit;
use crate::solver::Trajectory;
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FrontError {
    #[error("need at least {needed} samples in the fit window, found {found}")]
    TooFewSamples { needed: usize, found: usize },
    #[error("times are not strictly increasing at index {0}")]
    NonMonotoneTimes(usize),
    #[error("wedge [{lo}, {hi}] is empty at t = {t}")]
    EmptyWedge { lo: f64, hi: f64, t: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    U,
    V,
}

/// Minimum samples required by [`fit_speed`].
pub const MIN_FIT_SAMPLES: usize = 10;

/// Rightmost crossing of `level`, linearly interpolated between nodes.
pub fn rightmost_crossing(g: &Grid, f: &[f64], level: f64) -> Option<f64> {
    let n = f.len();
    for i in (0..n - 1).rev() {
        let (a, b) = (f[i] - level, f[i + 1] - level);
        if a == 0.0 && b != 0.0 {
            return Some(g.x(i));
        }
        if (a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0) {
            let x0 = g.x(i);
            return Some(x0 + g.dx() * a / (a - b));
        }
    }
    None
}

pub fn level_position(s: &StatePair, which: Field, level: f64) -> Option<f64> {
    let f = match which {
        Field::U => &s.u,
        Field::V => &s.v,
    };
    rightmost_crossing(&s.grid, f, level)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontTrack {
    pub level: f64,
    pub times: Vec<f64>,
    pub positions: Vec<Option<f64>>,
}

impl FrontTrack {
    pub fn from_trajectory(traj: &Trajectory, which: Field, level: f64) -> Self {
        FrontTrack {
            level,
            times: traj.snapshots.iter().map(|s| s.t).collect(),
            positions: traj.snapshots.iter().map(|s| level_position(s, which, level)).collect(),
        }
    }

    /// Track with every position attained.
    pub fn from_samples(level: f64, times: Vec<f64>, positions: Vec<f64>) -> Self {
        FrontTrack {
            level,
            times,
            positions: positions.into_iter().map(Some).collect(),
        }
    }
}

/// Writes `t,x_front_u,x_front_v`; absent fronts are empty cells.
pub fn write_tracks_csv<W: Write>(u: &FrontTrack, v: &FrontTrack, mut w: W) -> std::io::Result<()> {
    writeln!(w, "t,x_front_u,x_front_v")?;
    let cell = |p: Option<f64>| p.map(|x| format!("{x:.16e}")).unwrap_or_default();
    for (i, t) in u.times.iter().enumerate() {
        let pv = v.positions.get(i).copied().flatten();
        writeln!(w, "{t:.16e},{},{}", cell(u.positions[i]), cell(pv))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedReport {
    pub fitted_speed: f64,
    pub intercept: f64,
    pub fit_window: (f64, f64),
    pub rms_residual: f64,
    pub predicted: Option<f64>,
    pub relative_error: Option<f64>,
}

impl SpeedReport {
    pub fn with_prediction(mut self, c: f64) -> Self {
        self.predicted = Some(c);
        self.relative_error = Some((self.fitted_speed - c) / c);
        self
    }
}

/// Least-squares speed over the last `window_fraction` of the time range.
pub fn fit_speed(track: &FrontTrack, window_fraction: f64) -> Result<SpeedReport, FrontError> {
    if !(window_fraction > 0.0 && window_fraction <= 1.0) {
        return Err(FrontError::InvalidArgument(format!(
            "window_fraction = {window_fraction} outside (0, 1]"
        )));
    }
    if let Some(i) = track.times.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(FrontError::NonMonotoneTimes(i + 1));
    }
    let (Some(&t_first), Some(&t_last)) = (track.times.first(), track.times.last()) else {
        return Err(FrontError::TooFewSamples {
            needed: MIN_FIT_SAMPLES,
            found: 0,
        });
    };
    let t0 = t_last - window_fraction * (t_last - t_first);
    let (ts, xs): (Vec<f64>, Vec<f64>) = track
        .times
        .iter()
        .zip(&track.positions)
        .filter_map(|(&t, &x)| x.filter(|_| t >= t0 - 1e-12).map(|x| (t, x)))
        .unzip();
    if ts.len() < MIN_FIT_SAMPLES {
        return Err(FrontError::TooFewSamples {
            needed: MIN_FIT_SAMPLES,
            found: ts.len(),
        });
    }
    let (slope, intercept, rms) = linear_fit(&ts, &xs).ok_or(FrontError::TooFewSamples {
        needed: MIN_FIT_SAMPLES,
        found: ts.len(),
    })?;
    Ok(SpeedReport {
        fitted_speed: slope,
        intercept,
        fit_window: (ts[0], *ts.last().unwrap()),
        rms_residual: rms,
        predicted: None,
        relative_error: None,
    })
}

/// Maximal `[0, X]` on which `|u-u*| + |v-v*| < eps`; `None` if it fails at the first node `x ≥ 0`.
pub fn plateau_extent(s: &StatePair, target: (f64, f64), eps: f64) -> Option<(f64, f64)> {
    let g = s.grid;
    let ok = |i: usize| (s.u[i] - target.0).abs() + (s.v[i] - target.1).abs() < eps;
    let start = (0..g.n()).find(|&i| g.x(i) >= 0.0)?;
    if !ok(start) {
        return None;
    }
    let mut last = start;
    while last + 1 < g.n() && ok(last + 1) {
        last += 1;
    }
    Some((0.0_f64.max(g.x_min()), g.x(last)))
}

/// Largest sub-interval where `|u-u*| + |v-v*| < eps`, as `(x_left, x_right)`.
pub fn longest_plateau(s: &StatePair, target: (f64, f64), eps: f64) -> Option<(f64, f64)> {
    let g = s.grid;
    let mut best: Option<(usize, usize)> = None;
    let mut run: Option<usize> = None;
    for i in 0..=g.n() {
        let ok = i < g.n() && (s.u[i] - target.0).abs() + (s.v[i] - target.1).abs() < eps;
        match (ok, run) {
            (true, None) => run = Some(i),
            (false, Some(j)) => {
                if best.map_or(true, |(a, b)| i - 1 - j > b - a) {
                    best = Some((j, i - 1));
                }
                run = None;
            }
            _ => {}
        }
    }
    best.map(|(a, b)| (g.x(a), g.x(b)))
}

/// At the final snapshot: `sup |u| + |v-1| < eps_val` over `[(c_lo+eps_geom)t, (c_hi-eps_geom)t]`.
pub fn wedge_check(
    traj: &Trajectory,
    c_lo: f64,
    c_hi: f64,
    eps_geom: f64,
    eps_val: f64,
) -> Result<bool, FrontError> {
    let s = traj.last();
    let t = s.t;
    let lo = (c_lo + eps_geom) * t;
    let hi = (c_hi - eps_geom) * t;
    let g = s.grid;
    let idx: Vec<usize> = (0..g.n()).filter(|&i| g.x(i) >= lo && g.x(i) <= hi).collect();
    if !(c_lo < c_hi) || idx.is_empty() {
        return Err(FrontError::EmptyWedge { lo, hi, t });
    }
    let sup = idx
        .iter()
        .map(|&i| s.u[i].abs() + (s.v[i] - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(sup < eps_val)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_crossing_is_interpolated() {
        let g = Grid::new(0.0, 10.0, 11).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|x| 1.0 - x / 10.0).collect();
        let x = rightmost_crossing(&g, &f, 0.5).unwrap();
        assert!((x - 5.0).abs() < 1e-12);
        let flat = vec![1.0; 11];
        assert!(rightmost_crossing(&g, &flat, 0.5).is_none());
    }

    #[test]
    fn longest_plateau_picks_widest_run() {
        let g = Grid::new(0.0, 9.0, 10).unwrap();
        let u = vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0];
        let s = StatePair::new(g, 0.0, u, vec![1.0; 10]).unwrap();
        assert_eq!(longest_plateau(&s, (0.0, 1.0), 0.1), Some((3.0, 5.0)));
    }
}
