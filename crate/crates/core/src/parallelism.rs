//! Data-parallel map over independent work items.
//!
//! Diagnostics evaluate each sequence index independently, so traces are
//! embarrassingly parallel. With the `parallel` feature (on by default)
//! [`map_collect`] fans out over a rayon pool; without it the call degrades to
//! a plain sequential map. Results are collected in input order either way, so
//! output is deterministic and independent of thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, preserving order. Parallel when the `parallel`
/// feature is enabled.
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sequential reference implementation of [`map_collect`], kept available in
/// every build for benchmarking against the parallel path.
pub fn map_collect_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
