//! Trial loops with a rayon-backed parallel path and a sequential fallback.
//!
//! Results are always returned in trial order, so output does not depend on
//! scheduling.

/// Runs `f(0..n)` sequentially.
pub fn map_trials_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Runs `f(0..n)` on the rayon pool.
#[cfg(feature = "parallel")]
pub fn map_trials_par<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Parallel when the `parallel` feature is enabled, sequential otherwise.
pub fn map_trials<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_trials_par(n, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_trials_seq(n, f)
    }
}

/// Seed for trial `i` of a run seeded with `seed`.
pub fn trial_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64).rotate_left(17) ^ 0x5851_F42D
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_stable() {
        let a = map_trials(100, |i| i * i);
        let b = map_trials_seq(100, |i| i * i);
        assert_eq!(a, b);
    }
}
