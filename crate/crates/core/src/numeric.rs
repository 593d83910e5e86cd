//! Small numerical utilities: deterministic reductions, quadrature,
//! special-function helpers.

use num_traits::Zero;

use crate::real::Real;

/// Leaf size below which pairwise summation falls back to sequential.
const PAIRWISE_LEAF: usize = 32;

/// sin(x)/x with the removable singularity filled by its series.
pub fn sinc<T: Real>(x: T) -> T {
    if x.abs() < T::of(1e-7) {
        T::one() - x * x / T::of(6.0)
    } else {
        x.sin() / x
    }
}

/// Pairwise (cascade) summation over a slice.
///
/// Fixed association order makes the result independent of how callers
/// parallelize around it, and the error grows like O(log n) instead of
/// O(n) for sequential accumulation.
pub fn pairwise_sum<A>(xs: &[A]) -> A
where
    A: Copy + Zero + std::ops::Add<Output = A>,
{
    if xs.len() <= PAIRWISE_LEAF {
        return xs.iter().fold(A::zero(), |acc, &x| acc + x);
    }
    let (lo, hi) = xs.split_at(xs.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

/// Pairwise summation of `f(i)` for `i` in `0..n` without materializing
/// the terms.
pub fn pairwise_sum_by<A, F>(n: usize, f: F) -> A
where
    A: Copy + Zero + std::ops::Add<Output = A>,
    F: Fn(usize) -> A,
{
    fn go<A, F>(lo: usize, hi: usize, f: &F) -> A
    where
        A: Copy + Zero + std::ops::Add<Output = A>,
        F: Fn(usize) -> A,
    {
        if hi - lo <= PAIRWISE_LEAF {
            let mut acc = A::zero();
            for i in lo..hi {
                acc = acc + f(i);
            }
            return acc;
        }
        let mid = lo + (hi - lo) / 2;
        go(lo, mid, f) + go(mid, hi, f)
    }
    go(0, n, &f)
}

/// Trapezoidal quadrature of uniformly sampled values.
pub fn trapezoid<T: Real>(values: &[T], step: T) -> T {
    if values.len() < 2 {
        return T::zero();
    }
    let ends = (values[0] + values[values.len() - 1]) * T::of(0.5);
    (pairwise_sum(values) - ends) * step
}

/// Trapezoidal quadrature of `f(i)` over `n` uniform samples.
pub fn trapezoid_by<T: Real, F: Fn(usize) -> T>(n: usize, step: T, f: F) -> T {
    if n < 2 {
        return T::zero();
    }
    let ends = (f(0) + f(n - 1)) * T::of(0.5);
    (pairwise_sum_by(n, f) - ends) * step
}

/// Table of ln k! for k = 0..=n, built with compensated summation so the
/// accumulated rounding stays near machine epsilon even for n ~ 1e5.
pub fn ln_factorial_table<T: Real>(n: usize) -> Vec<T> {
    let mut table = Vec::with_capacity(n + 1);
    table.push(T::zero());
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for k in 1..=n {
        let y = (k as f64).ln() - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
        table.push(T::of(sum));
    }
    table
}
