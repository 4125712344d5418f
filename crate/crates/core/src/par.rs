//! Data-parallel map helper. With the `parallel` feature (the default) work
//! is spread over the rayon pool; without it the same API degrades to a plain
//! sequential loop. Output order always matches input order, so callers can
//! reduce deterministically regardless of the execution mode.

#[cfg(feature = "parallel")]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Sequential twin of [`map_collect`], available under every feature set.
/// The bench suite uses it as the baseline when timing the parallel path.
pub fn map_collect_seq<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}
