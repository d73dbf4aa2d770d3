//! Data-parallel batch evaluation.
//!
//! Every batch entry point takes an [`Execution`] so the same call site can
//! run on the rayon pool or on the calling thread. Without the `parallel`
//! feature, [`Execution::Parallel`] quietly runs sequentially.

use crate::iso::Algorithm;
use crate::tree::Tree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether work will actually be spread across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// `(0..count).map(f)`, collected in index order whatever the scheduling.
pub fn map_indexed<R, F>(exec: Execution, count: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..count).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..count).map(f).collect()
}

/// `items.iter().map(f)`, collected in input order.
pub fn map_slice<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_indexed(exec, items.len(), |i| f(&items[i]))
}

/// Runs `f` with at most `threads` workers (`None` keeps the global pool).
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(threads) = threads {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
        {
            return pool.install(f);
        }
    }
    let _ = threads;
    f()
}

/// Decides every pair with `algo`.
pub fn decide_all(exec: Execution, algo: Algorithm, pairs: &[(Tree, Tree)]) -> Vec<bool> {
    map_slice(exec, pairs, |(a, b)| algo.decide(a, b))
}
