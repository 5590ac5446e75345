//! Order-preserving map over an index range.
//!
//! Sweeps in this crate are pure per index, so a caller can plug in any
//! executor (a thread pool in the CLI, [`Sequential`] here). Output order is
//! always index order.

use alloc::vec::Vec;

pub trait ParallelMap: Sync {
    fn map_indexed<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs every index on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl ParallelMap for Sequential {
    fn map_indexed<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..len).map(f).collect()
    }
}
