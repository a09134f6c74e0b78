//! Data-parallel helpers with a sequential fallback.
//!
//! All heavy inner loops (Galerkin assembly, seed ensembles, node scans) go
//! through these functions. With the default `parallel` feature they run on
//! rayon; without it they are plain loops. Both paths produce identical
//! results: outputs are collected in index order and reductions are performed
//! over fixed chunk boundaries, so floating-point round-off does not depend on
//! the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Map `f` over a slice, collecting results in order.
#[cfg(feature = "parallel")]
pub fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Map `f` over a slice, collecting results in order.
#[cfg(not(feature = "parallel"))]
pub fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Number of fixed accumulation chunks used by deterministic reductions.
///
/// Constant on purpose: partial sums are formed per chunk and then added in
/// chunk order, so results are bit-identical for any thread count.
pub const REDUCE_CHUNKS: usize = 16;

/// Split `0..n` into [`REDUCE_CHUNKS`] contiguous ranges.
pub fn chunk_ranges(n: usize) -> Vec<(usize, usize)> {
    let chunks = REDUCE_CHUNKS.min(n.max(1));
    let base = n / chunks;
    let rem = n % chunks;
    let mut out = Vec::with_capacity(chunks);
    let mut start = 0;
    for c in 0..chunks {
        let len = base + usize::from(c < rem);
        out.push((start, start + len));
        start += len;
    }
    out
}

/// Deterministic chunked sum-reduction over `0..n`.
///
/// `item` produces a partial accumulation for one contiguous range; `merge`
/// folds partials together in fixed chunk order.
pub fn chunked_reduce<U, F, M>(n: usize, item: F, merge: M) -> Option<U>
where
    U: Send,
    F: Fn(usize, usize) -> U + Sync + Send,
    M: Fn(U, U) -> U,
{
    let ranges = chunk_ranges(n);
    let partials = map_slice(&ranges, |&(lo, hi)| item(lo, hi));
    partials.into_iter().reduce(merge)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_cover_range() {
        for n in [0usize, 1, 5, 16, 17, 1000] {
            let ranges = chunk_ranges(n);
            let total: usize = ranges.iter().map(|(a, b)| b - a).sum();
            assert_eq!(total, n);
            for w in ranges.windows(2) {
                assert_eq!(w[0].1, w[1].0);
            }
        }
    }

    #[test]
    fn chunked_sum_matches_sequential() {
        let n = 1234;
        let seq: f64 = (0..n).map(|i| (i as f64).sqrt()).sum();
        let par = chunked_reduce(
            n,
            |lo, hi| (lo..hi).map(|i| (i as f64).sqrt()).sum::<f64>(),
            |a, b| a + b,
        )
        .unwrap();
        assert!((seq - par).abs() < 1e-9);
    }
}
