//! Order-preserving map over independent work items.
//!
//! With the `parallel` feature the map runs on the rayon pool when asked to;
//! without it every request degrades to a plain sequential iterator. Output
//! order always matches input order, so reports stay byte-identical whichever
//! path ran.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a batch of independent computations should be executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    #[default]
    Sequential,
    Parallel,
}

impl Parallelism {
    pub fn from_flag(parallel: bool) -> Self {
        if parallel {
            Parallelism::Parallel
        } else {
            Parallelism::Sequential
        }
    }

    /// True when work will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map_ordered<T, R, F>(items: Vec<T>, mode: Parallelism, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if mode == Parallelism::Parallel {
            return items.into_par_iter().map(f).collect();
        }
    }
    let _ = mode;
    items.into_iter().map(f).collect()
}

/// Index of the first item (in input order) for which `f` returns `Some`,
/// together with that value.
pub fn find_first<T, R, F>(items: Vec<T>, mode: Parallelism, f: F) -> Option<(usize, R)>
where
    T: Send,
    R: Send,
    F: Fn(T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if mode == Parallelism::Parallel {
            return items
                .into_par_iter()
                .enumerate()
                .filter_map(|(i, x)| f(x).map(|r| (i, r)))
                .min_by_key(|(i, _)| *i);
        }
    }
    let _ = mode;
    items
        .into_iter()
        .enumerate()
        .find_map(|(i, x)| f(x).map(|r| (i, r)))
}
