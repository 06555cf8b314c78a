//! Execution strategy for the enumeration-heavy kernels.
//!
//! The big loops (Γ enumeration, intersection filtering, place scans) are
//! phrased as order-preserving maps over an index space.  With the
//! `parallel` feature (on by default) they run on rayon; without the
//! feature — or when the caller pins `jobs` to 1 — a plain sequential loop
//! runs instead.  Both paths produce identical results in identical order,
//! so everything downstream stays deterministic.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Worker-count request carried from the CLI down to the kernels.
/// `None` means "library default" (rayon's global pool when compiled in).
pub type Jobs = Option<usize>;

/// Map `f` over `0..n`, preserving index order in the output.
pub fn map_indexed<U, F>(n: usize, jobs: Jobs, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        match jobs {
            Some(1) => map_sequential(n, f),
            Some(k) => rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .expect("worker pool construction failed")
                .install(|| (0..n).into_par_iter().map(f).collect()),
            None => (0..n).into_par_iter().map(f).collect(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        map_sequential(n, f)
    }
}

/// The always-available fallback path.
pub fn map_sequential<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

/// Name of the compiled strategy, for reports.
pub fn strategy() -> &'static str {
    if cfg!(feature = "parallel") {
        "parallel"
    } else {
        "sequential"
    }
}
