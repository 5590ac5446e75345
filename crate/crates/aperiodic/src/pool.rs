use aperiodic_core::ParallelMap;
use rayon::prelude::*;

use crate::error::CliError;

/// A rayon pool behind the core crate's [`ParallelMap`]. Results come back in
/// index order whatever the thread count.
pub struct Pool {
    pool: rayon::ThreadPool,
}

impl Pool {
    /// `None` uses one worker per core.
    pub fn new(threads: Option<usize>) -> Result<Self, CliError> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            b = b.num_threads(n);
        }
        let pool = b.build().map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
        Ok(Pool { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl ParallelMap for Pool {
    fn map_indexed<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..len).into_par_iter().map(f).collect())
    }
}
