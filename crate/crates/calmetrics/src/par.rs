//! Thin data-parallel helpers. With the `parallel` feature (default) these
//! fan out over rayon; without it they fall back to plain sequential loops.
//! Results are always collected in index order, so output never depends on
//! scheduling.

use std::cmp::Ordering;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) fn map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

pub(crate) fn sort_unstable_by<T, F>(v: &mut [T], cmp: F)
where
    T: Send,
    F: Fn(&T, &T) -> Ordering + Sync,
{
    #[cfg(feature = "parallel")]
    {
        v.par_sort_unstable_by(cmp);
    }
    #[cfg(not(feature = "parallel"))]
    {
        v.sort_unstable_by(cmp);
    }
}
