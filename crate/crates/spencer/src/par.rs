//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the helpers dispatch to rayon unless the
//! process-wide switch has been turned off. Results are always produced in
//! input order, so the two modes give identical output.

use std::sync::atomic::{AtomicBool, Ordering};

static ENABLED: AtomicBool = AtomicBool::new(true);

/// Turns rayon dispatch on or off for the whole process.
pub fn set_parallel(on: bool) {
    ENABLED.store(on, Ordering::SeqCst);
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel") && ENABLED.load(Ordering::SeqCst)
}

/// Applies `f` to every element; goes parallel once `items.len() >= min_len`.
pub fn for_each_mut<T, F>(items: &mut [T], min_len: usize, f: F)
where
    T: Send,
    F: Fn(&mut T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel_enabled() && items.len() >= min_len {
            use rayon::prelude::*;
            items.par_iter_mut().for_each(f);
            return;
        }
    }
    let _ = min_len;
    items.iter_mut().for_each(f);
}

/// Order-preserving map.
pub fn map<T, U, F>(items: &[T], min_len: usize, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel_enabled() && items.len() >= min_len {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
    }
    let _ = min_len;
    items.iter().map(f).collect()
}
