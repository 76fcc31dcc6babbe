//! Execution policy and deterministic reductions.
//!
//! Every floating-point reduction is split into fixed chunks that are summed
//! sequentially with compensation, and the chunk sums are combined in index order.
//! The sequential and parallel paths therefore produce bit-identical results.

use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How data-parallel loops are executed. Without the `parallel` feature,
/// [`Exec::Parallel`] runs sequentially.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Chunk length used for index-range reductions.
pub(crate) const CHUNK: u64 = 1 << 12;

/// Neumaier-compensated sum of complex numbers.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

#[inline]
fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, &mut self.re_c, z.re);
        neumaier(&mut self.im, &mut self.im_c, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}

impl FromIterator<Complex64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for z in iter {
            s.add(z);
        }
        s
    }
}

/// Maps `f` over `0..n`, preserving order.
pub(crate) fn map_indexed<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Sums `chunk(start, end)` over fixed chunks of `0..len`.
pub(crate) fn chunked_complex_sum<F>(exec: Exec, len: u64, chunk: F) -> Complex64
where
    F: Fn(u64, u64) -> Complex64 + Sync + Send,
{
    let nchunks = len.div_ceil(CHUNK) as usize;
    let parts = map_indexed(exec, nchunks, |c| {
        let start = c as u64 * CHUNK;
        chunk(start, (start + CHUNK).min(len))
    });
    parts.into_iter().collect::<CompensatedSum>().value()
}

/// Exact integer reduction over fixed chunks of `0..len`, stopping at the first error.
pub(crate) fn chunked_count<F, E>(exec: Exec, len: u64, chunk: F) -> Result<u64, E>
where
    F: Fn(u64, u64) -> Result<u64, E> + Sync + Send,
    E: Send,
{
    let nchunks = len.div_ceil(CHUNK) as usize;
    map_indexed(exec, nchunks, |c| {
        let start = c as u64 * CHUNK;
        chunk(start, (start + CHUNK).min(len))
    })
    .into_iter()
    .sum()
}
