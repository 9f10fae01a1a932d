//! Execution policy. With the `parallel` feature, sweeps fan out over a
//! rayon pool; without it every path runs on the calling thread. Results
//! never depend on the policy.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Default cap on the number of colorings a single sweep may enumerate.
pub const DEFAULT_BUDGET_BELL: u128 = 1_000_000;

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub exec: Exec,
    pub budget_bell: u128,
    /// Skip colorings that are not least in their `Aut(C)` orbit.
    pub prune_aut: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            exec: Exec::default(),
            budget_bell: DEFAULT_BUDGET_BELL,
            prune_aut: true,
        }
    }
}

impl SearchOptions {
    pub fn sequential() -> Self {
        SearchOptions {
            exec: Exec::Sequential,
            ..Self::default()
        }
    }
}

/// Runs `f` on a pool of `threads` workers, or on the global pool.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            return pool.install(f);
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    f()
}

/// `items.map(f)` with results in input order.
pub(crate) fn map_ordered<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel {
        use rayon::prelude::*;
        return items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = exec;
    items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_kept() {
        let xs: Vec<u32> = (0..1000).collect();
        let seq = map_ordered(Exec::Sequential, &xs, |i, x| i as u32 * x);
        let par = with_threads(Some(4), || map_ordered(Exec::Parallel, &xs, |i, x| i as u32 * x));
        assert_eq!(seq, par);
    }
}
