//! Sequential vs data-parallel throughput of the two hot loops: the explicit stencil update
//! and the per-sample residual evaluation used by barrier certification.
//!
//! Without the `parallel` feature both variants run in order, which makes the comparison a
//! measure of dispatch overhead only.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use terrace_core::exec;
use terrace_core::model::reaction;
use terrace_core::ModelParams;

fn p_star() -> ModelParams {
    ModelParams::new(1.0, 1.21, 0.5, 1.1).unwrap()
}

/// One explicit step with Neumann ends, written once so both backends share it.
fn kernel<'a>(
    u: &'a [f64],
    v: &'a [f64],
    p: &ModelParams,
    lam: f64,
    dt: f64,
) -> impl Fn(usize, &mut [f64], &mut [f64]) + Sync + Send + 'a {
    let n = u.len();
    let p = *p;
    move |off, uc, vc| {
        for (k, (uo, vo)) in uc.iter_mut().zip(vc.iter_mut()).enumerate() {
            let i = off + k;
            let il = if i == 0 { 1 } else { i - 1 };
            let ir = if i == n - 1 { n - 2 } else { i + 1 };
            let (fu, fv) = reaction(&p, u[i], v[i], 0.0);
            *uo = u[i] + lam * (u[il] - 2.0 * u[i] + u[ir]) + dt * fu;
            *vo = v[i] + p.d() * lam * (v[il] - 2.0 * v[i] + v[ir]) + dt * fv;
        }
    }
}

fn stencil(c: &mut Criterion) {
    let p = p_star();
    let mut group = c.benchmark_group("stencil_step");
    for n in [1 << 14, 1 << 17, 1 << 20] {
        let u: Vec<f64> = (0..n).map(|i| 0.5 * (1.0 + ((i as f64) * 1e-3).cos())).collect();
        let v: Vec<f64> = u.iter().map(|x| 1.0 - x).collect();
        let mut un = vec![0.0; n];
        let mut vn = vec![0.0; n];
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, _| {
            b.iter(|| {
                exec::sequential::for_each_chunk_pair(&mut un, &mut vn, kernel(&u, &v, &p, 0.3, 0.003));
                black_box(un[n / 2])
            })
        });
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, _| {
            b.iter(|| {
                exec::for_each_chunk_pair(&mut un, &mut vn, kernel(&u, &v, &p, 0.3, 0.003));
                black_box(un[n / 2])
            })
        });
    }
    group.finish();
}

/// Residual-like work per lattice row: many transcendental evaluations per sample.
fn row_work(t: &f64) -> f64 {
    let mut acc = 0.0;
    for j in 0..400 {
        let x = j as f64 * 0.25 - 50.0;
        let e = (-0.584 * (x - 3.0 * t)).exp();
        acc += (e.min(1.0) * (1.0 - e.min(1.0))).abs().sqrt();
    }
    acc
}

fn certification_rows(c: &mut Criterion) {
    let times: Vec<f64> = (0..200).map(|i| 0.2 * i as f64).collect();
    let mut group = c.benchmark_group("certification_rows");
    group.bench_function("sequential", |b| b.iter(|| black_box(exec::sequential::map(&times, row_work))));
    group.bench_function("parallel", |b| b.iter(|| black_box(exec::map(&times, row_work))));
    group.finish();
}

criterion_group!(benches, stencil, certification_rows);
criterion_main!(benches);
