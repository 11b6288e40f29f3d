//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`ExecMode::Parallel`] runs on
//! the rayon global pool; without it every mode runs sequentially. Outputs
//! keep input order either way, so results never depend on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

impl ExecMode {
    /// `Parallel` when compiled with rayon support, otherwise `Sequential`.
    pub fn effective(self) -> Self {
        if cfg!(feature = "parallel") {
            self
        } else {
            ExecMode::Sequential
        }
    }
}

pub fn map<T, U, F>(mode: ExecMode, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match mode.effective() {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Like [`map`], stopping at the first error in input order.
pub fn try_map<T, U, E, F>(mode: ExecMode, items: &[T], f: F) -> Result<Vec<U>, E>
where
    T: Sync,
    U: Send,
    E: Send,
    F: Fn(&T) -> Result<U, E> + Sync + Send,
{
    map(mode, items, f).into_iter().collect()
}
