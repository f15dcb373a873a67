//! Injection points for parallelism and wall-clock time.

use alloc::vec::Vec;

/// Runs independent indexed tasks and returns their results in index order.
///
/// Implementations may evaluate tasks concurrently, but the returned vector
/// must always be ordered by task index so reductions stay deterministic.
pub trait Executor: Sync {
    fn map<T, F>(&self, count: usize, task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Evaluates tasks one after the other on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T, F>(&self, count: usize, task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..count).map(task).collect()
    }
}

/// Monotonic elapsed time since the start of a planning call, in seconds.
pub trait Clock {
    fn elapsed(&self) -> f64;
}

/// A clock that never advances; timeouts never fire.
#[derive(Debug, Clone, Copy, Default)]
pub struct FrozenClock;

impl Clock for FrozenClock {
    fn elapsed(&self) -> f64 {
        0.0
    }
}

impl<C: Clock + ?Sized> Clock for &C {
    fn elapsed(&self) -> f64 {
        (**self).elapsed()
    }
}
