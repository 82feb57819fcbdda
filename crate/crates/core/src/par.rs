//! Index-keyed map used by scans and grid searches.
//!
//! With the `parallel` feature (on by default) work is spread over the
//! rayon pool; otherwise everything runs on the calling thread. Results
//! are always returned in index order, so output never depends on the
//! schedule.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Evaluates `f(0), f(1), …, f(n - 1)` and collects them in order.
pub fn map_indexed<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel => (0..n).map(f).collect(),
    }
}

/// Like [`map_indexed`] over a slice of inputs.
pub fn map_slice<I, T, F>(items: &[I], exec: Execution, f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    map_indexed(items.len(), exec, |i| f(&items[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_agree_and_keep_order() {
        let seq = map_indexed(1000, Execution::Sequential, |i| (i as f64).sin());
        let par = map_indexed(1000, Execution::Parallel, |i| (i as f64).sin());
        assert_eq!(seq, par);
        assert_eq!(
            map_slice(&[3, 1, 2], Execution::Parallel, |x| x * 2),
            vec![6, 2, 4]
        );
    }
}
