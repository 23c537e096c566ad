//! Data-parallel execution of independent trials.
//!
//! Batch operations in this crate (parameter sweeps, randomized property
//! suites) are embarrassingly parallel: every trial is a pure function of its
//! inputs. With the `parallel` feature enabled (the default) they run on the
//! rayon thread pool; without it, the same code runs sequentially. Results
//! are collected in input order either way, so output is deterministic and
//! independent of scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Execution strategy for a batch of independent trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    /// Use the rayon pool when compiled in, a sequential loop otherwise.
    #[default]
    Parallel,
    /// Always run in the calling thread.
    Sequential,
}

/// Maps `f` over `items`, in parallel when `mode` and the feature allow it.
///
/// Output order matches input order.
pub fn map<T, U, F>(mode: ExecMode, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    match mode {
        ExecMode::Sequential => items.into_iter().map(f).collect(),
        ExecMode::Parallel => par_map(items, f),
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let squares = |m| map(m, (0u64..100).collect(), |x| x * x);
        let expect: Vec<u64> = (0..100).map(|x| x * x).collect();
        assert_eq!(squares(ExecMode::Parallel), expect);
        assert_eq!(squares(ExecMode::Sequential), expect);
    }
}
