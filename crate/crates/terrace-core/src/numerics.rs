//! Small numerical kernels shared by the wave and barrier code: banded LU, scalar roots,
//! least-squares lines and tabulated profiles with quintic Hermite interpolation.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("singular matrix at pivot {0}")]
    Singular(usize),
    #[error("no sign change on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Square banded matrix with `kl` sub- and `ku` super-diagonals.
///
/// Row `i` stores columns `i - kl ..= i + kl + ku`; the extra `kl` columns hold pivoting fill-in.
#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    w: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let w = 2 * kl + ku + 1;
        BandedMatrix {
            n,
            kl,
            ku,
            w,
            data: vec![0.0; n * w],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let off = j as isize - i as isize + self.kl as isize;
        if off < 0 || off as usize >= self.w || j >= self.n {
            None
        } else {
            Some(i * self.w + off as usize)
        }
    }

    /// Adds `v` to entry `(i, j)`; panics if `(i, j)` lies outside the declared band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let in_band = j + self.kl >= i && j <= i + self.ku;
        assert!(in_band, "entry ({i}, {j}) outside band kl={} ku={}", self.kl, self.ku);
        let s = self.slot(i, j).expect("band slot");
        self.data[s] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |s| self.data[s])
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku + self.kl).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Solves `A x = b` by Gaussian elimination with partial pivoting; consumes the matrix.
    pub fn solve(mut self, b: &[f64]) -> Result<Vec<f64>, NumericsError> {
        let n = self.n;
        if b.len() != n {
            return Err(NumericsError::Dimension(format!("rhs {} vs n {n}", b.len())));
        }
        let mut x = b.to_vec();
        let span = self.kl + self.ku;
        for k in 0..n {
            let last_row = (k + self.kl).min(n - 1);
            let last_col = (k + span).min(n - 1);
            let mut p = k;
            let mut best = self.get(k, k).abs();
            for i in k + 1..=last_row {
                let v = self.get(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(NumericsError::Singular(k));
            }
            if p != k {
                for j in k..=last_col {
                    let (sk, sp) = (self.slot(k, j).unwrap(), self.slot(p, j).unwrap());
                    self.data.swap(sk, sp);
                }
                x.swap(k, p);
            }
            let piv = self.get(k, k);
            for i in k + 1..=last_row {
                let si = self.slot(i, k).unwrap();
                let m = self.data[si] / piv;
                if m == 0.0 {
                    continue;
                }
                self.data[si] = 0.0;
                for j in k + 1..=last_col {
                    let akj = self.data[self.slot(k, j).unwrap()];
                    if akj != 0.0 {
                        let sij = self.slot(i, j).unwrap();
                        self.data[sij] -= m * akj;
                    }
                }
                x[i] -= m * x[k];
            }
        }
        for k in (0..n).rev() {
            let last_col = (k + span).min(n - 1);
            let mut s = x[k];
            for j in k + 1..=last_col {
                s -= self.get(k, j) * x[j];
            }
            x[k] = s / self.get(k, k);
        }
        Ok(x)
    }
}

/// Bisection for a sign change of `f` on `[lo, hi]`, to absolute tolerance `tol`.
pub fn bisect<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64, NumericsError> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(NumericsError::NoBracket { lo, hi });
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Brent's method on a bracketing interval.
pub fn brent<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64, NumericsError> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(NumericsError::NoBracket { lo, hi });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let rr = fb / fc;
                p = s * (2.0 * xm * qq * (qq - rr) - (b - a) * (rr - 1.0));
                q = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Ok(b)
}

/// Least-squares line `y = slope x + intercept`; returns `(slope, intercept, rms residual)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<(f64, f64, f64)> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (xi, yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| {
            let r = yi - (slope * xi + intercept);
            r * r
        })
        .sum();
    Some((slope, intercept, (ss / nf).sqrt()))
}

/// Value and first two derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub f: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub fn constant(f: f64) -> Self {
        Jet { f, d1: 0.0, d2: 0.0 }
    }
    pub fn scale(self, s: f64) -> Self {
        Jet {
            f: s * self.f,
            d1: s * self.d1,
            d2: s * self.d2,
        }
    }
}

/// First and second derivatives of nodal data: fourth-order central stencils in the interior,
/// second-order next to the ends.
pub fn nodal_derivatives(f: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
    let n = f.len();
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    if n < 3 {
        return (d1, d2);
    }
    for i in 0..n {
        if i >= 2 && i + 2 < n {
            d1[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
            d2[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2])
                / (12.0 * h * h);
        } else if i >= 1 && i + 1 < n {
            d1[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
            d2[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) / (h * h);
        } else if i == 0 {
            d1[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
            d2[0] = (f[0] - 2.0 * f[1] + f[2]) / (h * h);
        } else {
            d1[i] = (3.0 * f[i] - 4.0 * f[i - 1] + f[i - 2]) / (2.0 * h);
            d2[i] = (f[i] - 2.0 * f[i - 1] + f[i - 2]) / (h * h);
        }
    }
    (d1, d2)
}

/// Exponential continuation `lim + (f_e - lim) e^{k (x - x_e)}` beyond a trusted edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tail {
    pub edge: f64,
    pub value: f64,
    pub limit: f64,
    pub rate: f64,
}

impl Tail {
    fn eval(&self, x: f64) -> Jet {
        let dev = self.value - self.limit;
        let e = dev * (self.rate * (x - self.edge)).exp();
        Jet {
            f: self.limit + e,
            d1: self.rate * e,
            d2: self.rate * self.rate * e,
        }
    }
}

/// Profile on a uniform grid with nodal `(f, f', f'')`, evaluated by quintic Hermite
/// interpolation inside `[tail_left.edge, tail_right.edge]` and by [`Tail`] outside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tabulated {
    x0: f64,
    h: f64,
    f: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
    tail_left: Tail,
    tail_right: Tail,
}

impl Tabulated {
    /// Builds from nodal values, trusting nodes `[i_lo, i_hi]`.
    ///
    /// The tails continue towards `lim_left` / `lim_right` at the logarithmic slope found at the
    /// trusted edges.
    pub fn new(
        x0: f64,
        h: f64,
        f: Vec<f64>,
        i_lo: usize,
        i_hi: usize,
        lim_left: f64,
        lim_right: f64,
    ) -> Self {
        let (d1, d2) = nodal_derivatives(&f, h);
        let mk = |i: usize, lim: f64| {
            let dev = f[i] - lim;
            let rate = if dev != 0.0 { d1[i] / dev } else { 0.0 };
            Tail {
                edge: x0 + i as f64 * h,
                value: f[i],
                limit: lim,
                rate,
            }
        };
        let tail_left = mk(i_lo, lim_left);
        let tail_right = mk(i_hi, lim_right);
        Tabulated {
            x0,
            h,
            f,
            d1,
            d2,
            tail_left,
            tail_right,
        }
    }

    pub fn trusted(&self) -> (f64, f64) {
        (self.tail_left.edge, self.tail_right.edge)
    }

    pub fn tail_rates(&self) -> (f64, f64) {
        (self.tail_left.rate, self.tail_right.rate)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.f
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.x0 + i as f64 * self.h, v))
    }

    pub fn eval(&self, x: f64) -> Jet {
        if x <= self.tail_left.edge {
            return self.tail_left.eval(x);
        }
        if x >= self.tail_right.edge {
            return self.tail_right.eval(x);
        }
        let s = (x - self.x0) / self.h;
        let i = (s.floor() as usize).min(self.f.len() - 2);
        let t = s - i as f64;
        let h = self.h;
        let (f0, f1) = (self.f[i], self.f[i + 1]);
        let (c0, c1, c2) = (f0, h * self.d1[i], 0.5 * h * h * self.d2[i]);
        let big_f = f1 - c0 - c1 - c2;
        let big_g = h * self.d1[i + 1] - c1 - 2.0 * c2;
        let big_h = h * h * self.d2[i + 1] - 2.0 * c2;
        let c3 = 10.0 * big_f - 4.0 * big_g + 0.5 * big_h;
        let c4 = -15.0 * big_f + 7.0 * big_g - big_h;
        let c5 = 6.0 * big_f - 3.0 * big_g + 0.5 * big_h;
        let p = c0 + t * (c1 + t * (c2 + t * (c3 + t * (c4 + t * c5))));
        let dp = c1 + t * (2.0 * c2 + t * (3.0 * c3 + t * (4.0 * c4 + t * 5.0 * c5)));
        let ddp = 2.0 * c2 + t * (6.0 * c3 + t * (12.0 * c4 + t * 20.0 * c5));
        Jet {
            f: p,
            d1: dp / h,
            d2: ddp / (h * h),
        }
    }

    /// Smallest trusted node abscissa where the tabulated values cross `level`, refined by
    /// bisection on the interpolant.
    pub fn crossing(&self, level: f64) -> Option<f64> {
        let (lo, hi) = self.trusted();
        let n = self.f.len();
        for i in 0..n - 1 {
            let (xa, xb) = (self.x0 + i as f64 * self.h, self.x0 + (i + 1) as f64 * self.h);
            if xa < lo || xb > hi {
                continue;
            }
            let (ga, gb) = (self.f[i] - level, self.f[i + 1] - level);
            if ga == 0.0 {
                return Some(xa);
            }
            if ga.signum() != gb.signum() {
                return bisect(|x| self.eval(x).f - level, xa, xb, 1e-14).ok();
            }
        }
        None
    }
}

/// Finite-difference weights at node `i` of `n` (`1 ≤ i ≤ n-2`): fourth order where the
/// five-point stencil fits, second order next to the ends.
///
/// Returns the first stencil node, the number of nodes, and the `d/dx`, `d²/dx²` weights.
pub fn collocation_stencil(i: usize, n: usize, h: f64) -> (usize, usize, [f64; 5], [f64; 5]) {
    debug_assert!(i >= 1 && i + 1 < n);
    if i >= 2 && i + 2 < n {
        let a = 1.0 / (12.0 * h);
        let b = 1.0 / (12.0 * h * h);
        (
            i - 2,
            5,
            [a, -8.0 * a, 0.0, 8.0 * a, -a],
            [-b, 16.0 * b, -30.0 * b, 16.0 * b, -b],
        )
    } else {
        let a = 1.0 / (2.0 * h);
        let b = 1.0 / (h * h);
        (i - 1, 3, [-a, 0.0, a, 0.0, 0.0], [b, -2.0 * b, b, 0.0, 0.0])
    }
}

/// Nonlinear system with a banded Jacobian.
pub trait NewtonSystem {
    fn len(&self) -> usize;
    fn residual(&self, y: &[f64]) -> Vec<f64>;
    fn jacobian(&self, y: &[f64]) -> BandedMatrix;
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonReport {
    pub y: Vec<f64>,
    /// Sup-norm of the residual at `y`.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Newton iteration with step halving until the sup-norm of the residual decreases.
pub fn damped_newton<S: NewtonSystem + ?Sized>(
    sys: &S,
    y0: Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<NewtonReport, NumericsError> {
    let mut y = y0;
    let mut res = sys.residual(&y);
    let mut norm = sup_norm(&res);
    for it in 0..max_iter {
        if norm < tol {
            return Ok(NewtonReport {
                y,
                residual: norm,
                iterations: it,
                converged: true,
            });
        }
        let rhs: Vec<f64> = res.iter().map(|r| -r).collect();
        let step = sys.jacobian(&y).solve(&rhs)?;
        let mut alpha = 1.0;
        loop {
            let trial: Vec<f64> = y.iter().zip(&step).map(|(a, s)| a + alpha * s).collect();
            let tres = sys.residual(&trial);
            let tnorm = sup_norm(&tres);
            if tnorm < norm || alpha < 1.0 / 1024.0 {
                y = trial;
                res = tres;
                norm = tnorm;
                break;
            }
            alpha *= 0.5;
        }
    }
    Ok(NewtonReport {
        converged: norm < tol,
        y,
        residual: norm,
        iterations: max_iter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_reproduces_quintics() {
        let h = 0.5;
        let poly = |x: f64| 1.0 + x - 0.3 * x * x + 0.1 * x.powi(3) - 0.02 * x.powi(5);
        let xs: Vec<f64> = (0..21).map(|i| -5.0 + i as f64 * h).collect();
        let mut tab = Tabulated::new(-5.0, h, xs.iter().map(|&x| poly(x)).collect(), 0, 20, 0.0, 0.0);
        // Replace finite-difference derivatives with exact ones to isolate the interpolant.
        tab.d1 = xs
            .iter()
            .map(|&x| 1.0 - 0.6 * x + 0.3 * x * x - 0.1 * x.powi(4))
            .collect();
        tab.d2 = xs.iter().map(|&x| -0.6 + 0.6 * x - 0.4 * x.powi(3)).collect();
        for &x in &[-4.3, -1.1, 0.27, 3.9] {
            let j = tab.eval(x);
            assert!((j.f - poly(x)).abs() < 1e-12);
            assert!((j.d2 - (-0.6 + 0.6 * x - 0.4 * x.powi(3))).abs() < 1e-10);
        }
    }

    #[test]
    fn brent_finds_cubic_root() {
        let r = brent(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-13);
    }
}
