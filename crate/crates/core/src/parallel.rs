//! Order-preserving parallel map over scoped threads.

use std::thread;

/// `items.map(f)` split into contiguous chunks, one per thread. Output order
/// matches input order, so results do not depend on `threads`.
pub(crate) fn par_map<T, U, F>(items: &[T], threads: usize, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    let threads = threads.max(1).min(items.len().max(1));
    if threads == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    let f = &f;
    thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| s.spawn(move || c.iter().map(f).collect::<Vec<U>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

/// Available hardware threads, at least 1.
pub(crate) fn default_threads() -> usize {
    thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_independent_of_threads() {
        let xs: Vec<u64> = (0..1000).collect();
        let one = par_map(&xs, 1, |x| x * x);
        for t in [2, 3, 7, 64, 5000] {
            assert_eq!(par_map(&xs, t, |x| x * x), one);
        }
        assert!(par_map(&[] as &[u64], 4, |x| *x).is_empty());
    }
}
