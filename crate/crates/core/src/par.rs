//! Row-parallel helpers. With the `parallel` feature off every helper runs the
//! same closure sequentially, in the same per-row order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Buffers smaller than this are filled on the calling thread; spawning for
/// the tiny patches of the naive engine costs more than it saves.
#[cfg(feature = "parallel")]
const MIN_PARALLEL_LEN: usize = 1 << 13;

/// Calls `f(row_index, row)` for every `width`-long row of `buf`.
pub(crate) fn for_each_row<F>(buf: &mut [f64], width: usize, f: F)
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    debug_assert!(width > 0 && buf.len().is_multiple_of(width));
    #[cfg(feature = "parallel")]
    if buf.len() >= MIN_PARALLEL_LEN {
        buf.par_chunks_mut(width).enumerate().for_each(|(y, row)| f(y, row));
        return;
    }
    buf.chunks_mut(width).enumerate().for_each(|(y, row)| f(y, row));
}
