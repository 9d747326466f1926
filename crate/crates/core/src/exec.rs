//! Runtime choice between single-threaded and worker-pool execution.
//!
//! With the `parallel` feature disabled, `Execution::Parallel` still runs the
//! exact same schedule (column sharding, level batches) on the calling
//! thread, so results never depend on the build configuration.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[default]
    Sequential,
    Parallel {
        workers: usize,
    },
}

impl Execution {
    pub fn parallel(workers: usize) -> Self {
        Execution::Parallel {
            workers: workers.max(1),
        }
    }

    pub fn workers(&self) -> usize {
        match *self {
            Execution::Sequential => 1,
            Execution::Parallel { workers } => workers.max(1),
        }
    }

    pub fn is_parallel(&self) -> bool {
        matches!(self, Execution::Parallel { .. })
    }

    /// Runs `f` inside a pool sized for this execution mode.
    pub(crate) fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match *self {
            Execution::Sequential => f(),
            Execution::Parallel { workers } => pool::install(workers.max(1), f),
        }
    }
}

/// Whether this build actually spreads work across threads.
pub const fn threads_available() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(feature = "parallel")]
mod pool {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};

    use rayon::{ThreadPool, ThreadPoolBuilder};

    fn get(workers: usize) -> Arc<ThreadPool> {
        static POOLS: OnceLock<Mutex<HashMap<usize, Arc<ThreadPool>>>> = OnceLock::new();
        let mut pools = POOLS.get_or_init(Default::default).lock().unwrap();
        pools
            .entry(workers)
            .or_insert_with(|| {
                Arc::new(
                    ThreadPoolBuilder::new()
                        .num_threads(workers)
                        .thread_name(move |i| format!("dhl-{workers}-{i}"))
                        .build()
                        .expect("failed to start worker pool"),
                )
            })
            .clone()
    }

    pub(super) fn install<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
        get(workers).install(f)
    }
}

#[cfg(not(feature = "parallel"))]
mod pool {
    pub(super) fn install<R: Send>(_workers: usize, f: impl FnOnce() -> R + Send) -> R {
        f()
    }
}

/// `rayon::join` when enabled and requested, otherwise `a` then `b`.
pub(crate) fn join<A, B, RA, RB>(parallel: bool, a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return rayon::join(a, b);
    }
    let _ = parallel;
    (a(), b())
}

/// Maps `f` over `items` into a vector, in parallel when enabled and
/// requested. Output order always matches input order.
pub(crate) fn map_collect<T, R, F>(parallel: bool, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = parallel;
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worker_counts() {
        assert_eq!(Execution::Sequential.workers(), 1);
        assert_eq!(Execution::parallel(0).workers(), 1);
        assert_eq!(Execution::parallel(8).workers(), 8);
    }

    #[test]
    fn map_collect_keeps_order() {
        let xs: Vec<u32> = (0..1000).collect();
        let seq = map_collect(false, &xs, |x| x * 3);
        let par = Execution::parallel(4).install(|| map_collect(true, &xs, |x| x * 3));
        assert_eq!(seq, par);
    }

    #[test]
    fn join_returns_both() {
        assert_eq!(join(true, || 1, || "b"), (1, "b"));
        assert_eq!(join(false, || 1, || "b"), (1, "b"));
    }
}
