//! Scalar profile problems: KPP-type fronts, Dirichlet bumps and principal eigenvalues of
//! `-D w'' - c w' - q w` on a symmetric interval.

use crate::numerics::{
    bisect, collocation_stencil, damped_newton, BandedMatrix, NewtonSystem, NumericsError,
    Tabulated,
};
use serde::{Deserialize, Serialize};

/// Kinetics `g(w)` and `g'(w)`.
pub type Kinetics<'a> = &'a (dyn Fn(f64) -> (f64, f64) + Sync);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScalarError {
    #[error("Newton stalled after {iterations} iterations with residual {residual:e}")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("only the trivial solution was found (max {max:e})")]
    Trivial { max: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Nodal solution on the uniform mesh `x0 + i h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarProfile {
    pub x0: f64,
    pub h: f64,
    pub values: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

impl ScalarProfile {
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.h
    }

    pub fn max(&self) -> (f64, f64) {
        let (i, m) = self
            .values
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
        (self.x(i), m)
    }
}

/// `-D w'' - c w' - g(w) = 0` on `[-L, L]`, `w(-L) = left`, `w(0) = mid`, right end free.
struct FrontProblem<'a> {
    diff: f64,
    c: f64,
    g: Kinetics<'a>,
    left: f64,
    mid: f64,
    n: usize,
    h: f64,
    i0: usize,
}

impl FrontProblem<'_> {
    /// Row of the interior equation at node `j`; the phase row sits right after node `i0`.
    fn row(&self, j: usize) -> usize {
        if j <= self.i0 {
            j
        } else {
            j + 1
        }
    }
}

impl NewtonSystem for FrontProblem<'_> {
    fn len(&self) -> usize {
        self.n
    }

    fn residual(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        out[0] = y[0] - self.left;
        out[self.i0 + 1] = y[self.i0] - self.mid;
        for j in 1..self.n - 1 {
            let (s, m, d1, d2) = collocation_stencil(j, self.n, self.h);
            let (mut w1, mut w2) = (0.0, 0.0);
            for k in 0..m {
                w1 += d1[k] * y[s + k];
                w2 += d2[k] * y[s + k];
            }
            out[self.row(j)] = -self.diff * w2 - self.c * w1 - (self.g)(y[j]).0;
        }
        out
    }

    fn jacobian(&self, y: &[f64]) -> BandedMatrix {
        let mut jm = BandedMatrix::zeros(self.n, 3, 3);
        jm.add(0, 0, 1.0);
        jm.add(self.i0 + 1, self.i0, 1.0);
        for j in 1..self.n - 1 {
            let r = self.row(j);
            let (s, m, d1, d2) = collocation_stencil(j, self.n, self.h);
            for k in 0..m {
                jm.add(r, s + k, -self.diff * d2[k] - self.c * d1[k]);
            }
            jm.add(r, j, -(self.g)(y[j]).1);
        }
        jm
    }
}

/// Decreasing front from `left` to 0 with `w(0) = mid`, on `[-L, L]` with `mesh` nodes.
///
/// The right end carries no boundary condition, so the discrete tail follows the decay the
/// equation selects.
pub fn solve_front(
    diff: f64,
    c: f64,
    g: Kinetics<'_>,
    left: f64,
    mid: f64,
    truncation: f64,
    mesh: usize,
) -> Result<ScalarProfile, ScalarError> {
    let n = mesh | 1;
    if n < 9 || !(truncation > 0.0) {
        return Err(ScalarError::Invalid(format!("mesh {mesh}, truncation {truncation}")));
    }
    let h = 2.0 * truncation / (n - 1) as f64;
    let prob = FrontProblem {
        diff,
        c,
        g,
        left,
        mid,
        n,
        h,
        i0: (n - 1) / 2,
    };
    let width = (truncation / 20.0).max(2.0);
    let y0: Vec<f64> = (0..n)
        .map(|i| {
            let x = -truncation + i as f64 * h;
            left * 0.5 * (1.0 - (x / width).tanh())
        })
        .collect();
    let rep = damped_newton(&prob, y0, 1e-10, 60)?;
    if !rep.converged {
        return Err(ScalarError::NoConvergence {
            iterations: rep.iterations,
            residual: rep.residual,
        });
    }
    Ok(ScalarProfile {
        x0: -truncation,
        h,
        values: rep.y,
        residual: rep.residual,
        iterations: rep.iterations,
    })
}

/// `-D w'' - c w' - g(w) = 0` on `(-R, R)`, `w(±R) = 0`; unknowns are the interior nodes.
struct DirichletProblem<'a> {
    diff: f64,
    c: f64,
    g: Kinetics<'a>,
    n: usize,
    h: f64,
}

impl DirichletProblem<'_> {
    fn full(&self, y: &[f64]) -> Vec<f64> {
        let mut w = Vec::with_capacity(self.n);
        w.push(0.0);
        w.extend_from_slice(y);
        w.push(0.0);
        w
    }
}

impl NewtonSystem for DirichletProblem<'_> {
    fn len(&self) -> usize {
        self.n - 2
    }

    fn residual(&self, y: &[f64]) -> Vec<f64> {
        let w = self.full(y);
        (1..self.n - 1)
            .map(|j| {
                let (s, m, d1, d2) = collocation_stencil(j, self.n, self.h);
                let (mut w1, mut w2) = (0.0, 0.0);
                for k in 0..m {
                    w1 += d1[k] * w[s + k];
                    w2 += d2[k] * w[s + k];
                }
                -self.diff * w2 - self.c * w1 - (self.g)(w[j]).0
            })
            .collect()
    }

    fn jacobian(&self, y: &[f64]) -> BandedMatrix {
        let m_int = self.n - 2;
        let mut jm = BandedMatrix::zeros(m_int, 2, 2);
        for j in 1..self.n - 1 {
            let (s, m, d1, d2) = collocation_stencil(j, self.n, self.h);
            for k in 0..m {
                let col = s + k;
                if col >= 1 && col <= m_int {
                    jm.add(j - 1, col - 1, -self.diff * d2[k] - self.c * d1[k]);
                }
            }
            jm.add(j - 1, j - 1, -(self.g)(y[j - 1]).1);
        }
        jm
    }
}

/// Positive solution on `[-R, R]` vanishing at `±R`, started from `amplitude · cos(π x / 2R)`.
///
/// Returns [`ScalarError::Trivial`] when Newton lands on `w ≡ 0`.
pub fn solve_dirichlet(
    diff: f64,
    c: f64,
    g: Kinetics<'_>,
    half_width: f64,
    spacing: f64,
    amplitude: f64,
) -> Result<ScalarProfile, ScalarError> {
    let cells = ((2.0 * half_width / spacing).ceil() as usize).max(8);
    let n = cells + 1;
    let h = 2.0 * half_width / cells as f64;
    let prob = DirichletProblem { diff, c, g, n, h };
    let y0: Vec<f64> = (1..n - 1)
        .map(|i| {
            let x = -half_width + i as f64 * h;
            amplitude * (std::f64::consts::FRAC_PI_2 * x / half_width).cos()
        })
        .collect();
    let rep = damped_newton(&prob, y0, 1e-11, 80)?;
    if !rep.converged {
        return Err(ScalarError::NoConvergence {
            iterations: rep.iterations,
            residual: rep.residual,
        });
    }
    let values = prob.full(&rep.y);
    let max = values.iter().cloned().fold(0.0, f64::max);
    if max < 1e-6 || values.iter().any(|&v| v < -1e-9) {
        return Err(ScalarError::Trivial { max });
    }
    Ok(ScalarProfile {
        x0: -half_width,
        h,
        values,
        residual: rep.residual,
        iterations: rep.iterations,
    })
}

/// Smallest eigenvalue of the Dirichlet discretization of `-D w'' - c w' - q w` on `(-R, R)`.
///
/// The drift is removed by the similarity `w = e^{-c x / 2D} z`, leaving a symmetric
/// tridiagonal matrix whose lowest eigenvalue is found by Sturm-sequence bisection.
pub fn principal_eigenvalue(diff: f64, c: f64, q: f64, half_width: f64, spacing: f64) -> f64 {
    let cells = ((2.0 * half_width / spacing).ceil() as usize).max(8);
    let m = cells - 1;
    let h = 2.0 * half_width / cells as f64;
    let up = diff / (h * h) + c / (2.0 * h);
    let lo = diff / (h * h) - c / (2.0 * h);
    let diag = 2.0 * diff / (h * h) - q;
    // Off-diagonal of the symmetrized matrix; lo·up > 0 whenever the mesh resolves the drift.
    let off2 = (up * lo).max(0.0);
    let count_below = |mu: f64| -> usize {
        let mut cnt = 0;
        let mut dprev = 1.0;
        for k in 0..m {
            let mut dk = diag - mu - if k > 0 { off2 / dprev } else { 0.0 };
            if dk == 0.0 {
                dk = -1e-300;
            }
            if dk < 0.0 {
                cnt += 1;
            }
            dprev = dk;
        }
        cnt
    };
    let radius = 2.0 * off2.sqrt();
    let (mut a, mut b) = (diag - radius - 1.0, diag + radius + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if count_below(mid) >= 1 {
            b = mid;
        } else {
            a = mid;
        }
        if b - a < 1e-14 * (1.0 + a.abs()) {
            break;
        }
    }
    0.5 * (a + b)
}

/// Smallest half-width with a nonpositive principal eigenvalue, by bisection.
pub fn critical_half_width(
    diff: f64,
    c: f64,
    q: f64,
    spacing: f64,
    r_max: f64,
) -> Result<f64, ScalarError> {
    let f = |r: f64| principal_eigenvalue(diff, c, q, r, spacing.min(r / 8.0));
    let lo = 1e-3_f64.max(spacing);
    Ok(bisect(f, lo, r_max, 1e-10)?)
}

/// Tabulates a front trusted on `[-trust·L, trust·L]`.
pub fn tabulate_front(p: &ScalarProfile, trust: f64, lim_left: f64, lim_right: f64) -> Tabulated {
    let n = p.values.len();
    let half = (n - 1) / 2;
    let k = ((trust * half as f64) as usize).min(half - 2);
    Tabulated::new(p.x0, p.h, p.values.clone(), half - k, half + k, lim_left, lim_right)
}

/// Tabulates a compactly supported bump; the tails are identically zero.
pub fn tabulate_bump(p: &ScalarProfile) -> Tabulated {
    let n = p.values.len();
    Tabulated::new(p.x0, p.h, p.values.clone(), 0, n - 1, 0.0, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_eigenvalue_matches_cosine_mode() {
        let r = 3.0;
        let mu = principal_eigenvalue(1.0, 0.0, 0.0, r, 0.01);
        let exact = (std::f64::consts::PI / (2.0 * r)).powi(2);
        assert!((mu - exact).abs() / exact < 1e-4);
    }

    #[test]
    fn drift_shifts_eigenvalue_by_c2_over_4d() {
        let (d, c, r) = (2.0, 1.0, 4.0);
        let mu = principal_eigenvalue(d, c, 0.0, r, 0.01);
        let exact = d * (std::f64::consts::PI / (2.0 * r)).powi(2) + c * c / (4.0 * d);
        assert!((mu - exact).abs() / exact < 1e-4);
    }
}
