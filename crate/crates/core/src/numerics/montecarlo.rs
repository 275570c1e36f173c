use num_complex::Complex;

use super::SeededSampler;
use crate::Real;

/// A planar region that can be sampled uniformly with respect to area.
pub trait Region<T: Real> {
    fn sample_uniform(&self, sampler: &mut SeededSampler) -> Complex<T>;
}

/// Fraction of `n` uniform samples from `region` satisfying `predicate`.
///
/// Deterministic for a given sampler state; predicate errors abort the
/// estimate and propagate.
pub fn mc_region_fraction<T, R, E, P>(
    mut predicate: P,
    region: &R,
    n: usize,
    sampler: &mut SeededSampler,
) -> Result<T, E>
where
    T: Real,
    R: Region<T> + ?Sized,
    P: FnMut(Complex<T>) -> Result<bool, E>,
{
    assert!(n >= 1, "need at least one sample");
    let mut hits = 0usize;
    for _ in 0..n {
        if predicate(region.sample_uniform(sampler))? {
            hits += 1;
        }
    }
    Ok(T::from_usize_lossy(hits) / T::from_usize_lossy(n))
}
