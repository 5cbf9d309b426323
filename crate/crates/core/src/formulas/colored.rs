//! Counts of colored factorizations of the long cycle.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{binomial, factorial_signed};
use crate::partition::{compositions, Composition};

fn checked_term(n: usize, len_a: usize, len_b: i64) -> BigInt {
    let n_i = n as i64;
    let den = n_i - len_a as i64 - len_b + 1;
    match (factorial_signed(n_i - len_a as i64), factorial_signed(n_i - len_b), factorial_signed(den)) {
        (Some(a), Some(b), Some(c)) => BigInt::from(n) * a * b / c,
        _ => BigInt::zero(),
    }
}

/// `#B_{γ,δ} = n (n-ℓ)! (n-ℓ')! / (n-ℓ-ℓ'+1)!`, zero when the denominator
/// argument is negative. Depends on `γ, δ` only through their lengths.
pub fn count_b(n: usize, len_gamma: usize, len_delta: usize) -> BigInt {
    checked_term(n, len_gamma, len_delta as i64)
}

/// `#T^α_γ(r)` for `γ` of length `ℓ`, `α` of size `m` and length `k`:
/// `n (n-ℓ)! (n-k-r)! / (n-k-ℓ-r+1)! · binom(n+k-1, n-m-r)`.
pub fn count_t(n: usize, len_gamma: usize, m: usize, k: usize, r: usize) -> BigInt {
    let colored = checked_term(n, len_gamma, (k + r) as i64);
    if colored.is_zero() {
        return colored;
    }
    colored * marked_composition_count(n, m, k, r)
}

/// Number of `α`-marked compositions of size `n` and length `k + r`:
/// `binom(n+k-1, n-m-r)`.
pub fn marked_composition_count(n: usize, m: usize, k: usize, r: usize) -> BigInt {
    binomial((n + k) as i64 - 1, n as i64 - m as i64 - r as i64)
}

/// The same count by direct summation over compositions `δ ⊨ n` of length
/// `k + r` of `∏_{i ≤ k} binom(δ_i, α_i)`.
pub fn marked_composition_direct_sum(n: usize, alpha: &Composition, r: usize) -> BigInt {
    compositions(n, alpha.len() + r)
        .iter()
        .map(|delta| {
            alpha
                .parts()
                .iter()
                .zip(delta.parts())
                .fold(BigInt::one(), |acc, (&a, &d)| acc * binomial(d as i64, a as i64))
        })
        .sum()
}
