//! Data-parallel primitives with a sequential fallback.
//!
//! With the `parallel` feature the helpers dispatch to rayon; without it they run the same
//! closures in order. Results never depend on the backend. The `sequential` module is always
//! compiled so both paths can be compared in one binary.

/// Nodes per work item in the stencil kernels.
pub const CHUNK: usize = 2048;

/// In-order versions of the helpers, available in every build.
pub mod sequential {
    use super::CHUNK;

    pub fn for_each_chunk_pair<F>(u: &mut [f64], v: &mut [f64], f: F)
    where
        F: Fn(usize, &mut [f64], &mut [f64]),
    {
        for (k, (uc, vc)) in u.chunks_mut(CHUNK).zip(v.chunks_mut(CHUNK)).enumerate() {
            f(k * CHUNK, uc, vc);
        }
    }

    pub fn map<T, R, F: Fn(&T) -> R>(items: &[T], f: F) -> Vec<R> {
        items.iter().map(f).collect()
    }

    pub fn map_range<R, F: Fn(usize) -> R>(n: usize, f: F) -> Vec<R> {
        (0..n).map(f).collect()
    }
}

/// Calls `f(offset, u_chunk, v_chunk)` over aligned chunks of two output buffers.
pub fn for_each_chunk_pair<F>(u: &mut [f64], v: &mut [f64], f: F)
where
    F: Fn(usize, &mut [f64], &mut [f64]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        u.par_chunks_mut(CHUNK)
            .zip(v.par_chunks_mut(CHUNK))
            .enumerate()
            .for_each(|(k, (uc, vc))| f(k * CHUNK, uc, vc));
    }
    #[cfg(not(feature = "parallel"))]
    sequential::for_each_chunk_pair(u, v, f);
}

/// Order-preserving map.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        sequential::map(items, f)
    }
}

/// Order-preserving map over `0..n`.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        sequential::map_range(n, f)
    }
}

/// Whether this build dispatches to rayon.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
