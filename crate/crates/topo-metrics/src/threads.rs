//! Worker-pool sizing via the `TOPO_METRICS_THREADS` environment variable.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const THREADS_ENV: &str = "TOPO_METRICS_THREADS";

/// Parse `TOPO_METRICS_THREADS`; `None` means "use all available cores".
pub fn configured_threads() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(v) if v >= 1 => Ok(Some(v)),
            _ => Err(Error::Config(format!(
                "{THREADS_ENV} must be a positive integer, got {raw:?}"
            ))),
        },
        Err(_) => Ok(None),
    }
}

/// Shared worker pool. An invalid environment value falls back to the
/// default here; the CLI validates it up front and reports the error.
pub fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let threads = configured_threads().ok().flatten().unwrap_or(0);
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("failed to build worker pool")
    })
}
