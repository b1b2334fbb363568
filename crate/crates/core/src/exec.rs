//! Execution policy for the data-parallel loops (partition enumeration,
//! parameter scans, sampling suites).
//!
//! With the `parallel` feature disabled every policy runs sequentially, so
//! results never depend on the feature set.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when work will actually be spread over the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f` over `items`, preserving input order in the output.
pub fn map_slice<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Maps `f` over an index range, preserving order.
pub fn map_range<R, F>(exec: Execution, range: Range<u64>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range.into_par_iter().map(f).collect();
    }
    let _ = exec;
    range.map(f).collect()
}

/// Folds an index range with an associative, commutative `combine`.
pub fn reduce_range<R, F, C>(exec: Execution, range: Range<u64>, identity: R, f: F, combine: C) -> R
where
    R: Send + Sync + Clone,
    F: Fn(u64) -> R + Sync + Send,
    C: Fn(R, R) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range
            .into_par_iter()
            .map(f)
            .reduce(|| identity.clone(), &combine);
    }
    let _ = exec;
    range.map(f).fold(identity, combine)
}
