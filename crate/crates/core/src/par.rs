//! Thin dispatch layer between rayon and plain iterators.
//!
//! Every helper preserves sequential semantics exactly: "first" always means
//! first in slice order, and mapped results keep their input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// First `Some` produced by `f`, in slice order.
pub(crate) fn find_map_first<T, U, F>(items: &[T], parallel: bool, f: F) -> Option<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Option<U> + Sync,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return items.par_iter().find_map_first(&f);
    }
    let _ = parallel;
    items.iter().find_map(f)
}

/// Maps `f` over `0..count`, preserving index order in the output.
pub(crate) fn map_indexed<U, F>(count: u64, parallel: bool, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(u64) -> U + Sync,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..count).into_par_iter().map(&f).collect();
    }
    let _ = parallel;
    (0..count).map(f).collect()
}
