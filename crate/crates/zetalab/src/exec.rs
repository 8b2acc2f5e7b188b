//! Ordered map helpers backing the data-parallel scans.
//!
//! Every scan maps an index range to per-item results and collects them in
//! input order, so the parallel and sequential paths produce bit-identical
//! output; thread count only affects wall time.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..len`, parallel when the `parallel` feature is enabled.
pub(crate) fn map_indexed<U, F>(len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Sequential twin of [`map_indexed`], kept available under every feature
/// combination for benches and determinism tests.
pub(crate) fn map_indexed_seq<U, F>(len: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..len).map(f).collect()
}
