//! Execution strategy for the data-parallel inner loops.
//!
//! Every parallel site in this crate is an indexed map into a fresh output
//! buffer: element `i` is produced by exactly one closure invocation reading
//! shared state, so the result is bit-identical whether it runs on one thread
//! or many. Reductions (order-parameter sums, Frobenius norms) are always
//! sequential for the same reason.
//!
//! With the `parallel` feature (default) the maps go through rayon and can be
//! switched off at runtime with [`set_parallel`]; without the feature the
//! crate compiles rayon-free and the maps are plain iterators.

use std::sync::atomic::{AtomicBool, Ordering};

static PARALLEL_ENABLED: AtomicBool = AtomicBool::new(true);

/// Runtime switch for the rayon code paths. No-op in sequential builds.
pub fn set_parallel(enabled: bool) {
    PARALLEL_ENABLED.store(enabled, Ordering::Relaxed);
}

/// True when a parallel build has parallelism enabled.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel") && PARALLEL_ENABLED.load(Ordering::Relaxed)
}

/// Caps the rayon thread pool. `0` keeps the default (one thread per core),
/// `1` disables parallel dispatch entirely. Must be called before the pool is
/// first used; later calls with `n > 1` have no effect on an existing pool.
pub fn configure_threads(n: usize) {
    match n {
        0 => {}
        1 => set_parallel(false),
        #[cfg(feature = "parallel")]
        n => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        #[cfg(not(feature = "parallel"))]
        _ => {}
    }
}

/// Below this many units the per-call rayon overhead outweighs the work of a
/// typical drift/attention row, so small ensembles stay sequential.
#[cfg(feature = "parallel")]
const PAR_MIN_UNITS: usize = 64;

/// Indexed map over per-unit work (drift rows, attention rows, neighborhoods).
pub(crate) fn map_units<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if n >= PAR_MIN_UNITS && PARALLEL_ENABLED.load(Ordering::Relaxed) {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// Indexed map over coarse independent jobs (trajectories, gradient probes).
/// Parallel at any count because each job is substantial.
pub(crate) fn map_tasks<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if PARALLEL_ENABLED.load(Ordering::Relaxed) {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}
