//! Deterministic data-parallel helpers.
//!
//! Reductions are split into fixed-size chunks whose partial sums are combined in
//! index order, so results are bit-identical for any thread count (including the
//! sequential build without the `parallel` feature).

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub const CHUNK: usize = 2048;

/// Sum `f(i)` for `i in 0..len` with a thread-count independent summation order.
pub fn sum<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let chunks = len.div_ceil(CHUNK);
    let partial = |c: usize| {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(len);
        let mut acc = 0.0;
        for i in lo..hi {
            acc += f(i);
        }
        acc
    };
    #[cfg(feature = "parallel")]
    let partials: Vec<f64> = (0..chunks).into_par_iter().map(partial).collect();
    #[cfg(not(feature = "parallel"))]
    let partials: Vec<f64> = (0..chunks).map(partial).collect();
    partials.iter().sum()
}

/// Maximum of `f(i)` over `0..len`; `0.0` for an empty range.
pub fn max<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).reduce(|| 0.0, f64::max)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).fold(0.0, f64::max)
    }
}

/// Fill `out` in blocks of `width` values: `fill(block_index, block)`.
pub fn for_each_block<F>(out: &mut [f64], width: usize, fill: F)
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    out.par_chunks_mut(width)
        .enumerate()
        .for_each(|(i, block)| fill(i, block));
    #[cfg(not(feature = "parallel"))]
    out.chunks_mut(width)
        .enumerate()
        .for_each(|(i, block)| fill(i, block));
}

/// Fill `a` and `b` in matching blocks of `wa` and `wb` values,
/// returning `fill(block_index, a_block, b_block)` per block in order.
pub fn zip_blocks<T, F>(a: &mut [f64], wa: usize, b: &mut [f64], wb: usize, fill: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut [f64], &mut [f64]) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        a.par_chunks_mut(wa)
            .zip(b.par_chunks_mut(wb))
            .enumerate()
            .map(|(i, (x, y))| fill(i, x, y))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        a.chunks_mut(wa)
            .zip(b.chunks_mut(wb))
            .enumerate()
            .map(|(i, (x, y))| fill(i, x, y))
            .collect()
    }
}

/// Map `0..len` to a vector, preserving order.
pub fn map<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Install a global pool capped by `RELAXLAB_THREADS`, if set. Safe to call twice.
pub fn init_from_env() {
    #[cfg(feature = "parallel")]
    if let Some(n) = std::env::var("RELAXLAB_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_is_chunk_ordered() {
        let len = 3 * CHUNK + 17;
        let seq: f64 = {
            let mut partials = Vec::new();
            for c in 0..len.div_ceil(CHUNK) {
                let mut acc = 0.0;
                for i in c * CHUNK..((c + 1) * CHUNK).min(len) {
                    acc += 1.0 / (1.0 + i as f64);
                }
                partials.push(acc);
            }
            partials.iter().sum()
        };
        let par = sum(len, |i| 1.0 / (1.0 + i as f64));
        assert_eq!(seq.to_bits(), par.to_bits());
    }

    #[test]
    fn max_of_empty_is_zero() {
        assert_eq!(max(0, |_| 1.0), 0.0);
        assert_eq!(max(5, |i| i as f64), 4.0);
    }
}
