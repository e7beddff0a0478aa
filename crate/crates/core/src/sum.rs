//! Deterministic reductions.

use rayon::prelude::*;

/// Block length used by every parallel reduction. Fixed so that the result
/// never depends on the number of worker threads.
pub const BLOCK: usize = 256;

/// Pairwise (cascade) summation.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 16 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Sums `f(i)` for `i` in `0..len` in parallel over fixed blocks; block
/// partial sums are combined pairwise in block order.
pub fn par_sum<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let blocks: Vec<f64> = (0..len.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(len);
            let vals: Vec<f64> = (lo..hi).map(&f).collect();
            pairwise_sum(&vals)
        })
        .collect();
    pairwise_sum(&blocks)
}

/// Vector-valued variant of [`par_sum`]: `f(i, acc)` adds the contribution of
/// item `i` into `acc` (length `width`).
pub fn par_sum_vec<F>(len: usize, width: usize, f: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    let blocks: Vec<Vec<f64>> = (0..len.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut acc = vec![0.0; width];
            for i in b * BLOCK..((b + 1) * BLOCK).min(len) {
                f(i, &mut acc);
            }
            acc
        })
        .collect();
    combine(blocks, width)
}

fn combine(mut blocks: Vec<Vec<f64>>, width: usize) -> Vec<f64> {
    if blocks.is_empty() {
        return vec![0.0; width];
    }
    while blocks.len() > 1 {
        let mut next = Vec::with_capacity(blocks.len().div_ceil(2));
        let mut it = blocks.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
            }
            next.push(a);
        }
        blocks = next;
    }
    blocks.pop().unwrap()
}
