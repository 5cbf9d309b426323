//! Adding fixed points to `π`: separation for `λ' = λ ∪ 1^r` from hook-shaped
//! separation counts for `λ`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{binomial, expect_nonnegative_integer, factorial, multinomial, rat, Rational};
use crate::error::{invalid, Error, Result};
use crate::partition::{Composition, Partition};

use super::gtable::{count_s, sep_prob};
use super::{Method, SepResult};

fn check(lambda: &Partition, r: usize, alpha: &Composition) -> Result<()> {
    if lambda.is_empty() {
        return invalid("lambda must be nonempty");
    }
    if lambda.parts().contains(&1) {
        return invalid(format!("lambda = {lambda} has a part equal to 1"));
    }
    if alpha.is_empty() {
        return invalid("alpha must have at least one part");
    }
    if alpha.size() > lambda.size() + r {
        return invalid(format!("alpha has size {} > n + r = {}", alpha.size(), lambda.size() + r));
    }
    Ok(())
}

/// `(n+p)/n binom(n+m+r-p, n+m) + (m-p)/n binom(n+m+r-p-1, n+m)`.
fn lift_weight(n: usize, m: usize, r: usize, p: usize) -> Rational {
    let (ni, mi, ri, pi) = (n as i64, m as i64, r as i64, p as i64);
    Rational::new(BigInt::from(ni + pi) * binomial(ni + mi + ri - pi, ni + mi), BigInt::from(ni))
        + Rational::new(BigInt::from(mi - pi) * binomial(ni + mi + ri - pi - 1, ni + mi), BigInt::from(ni))
}

/// The `p` values that contribute: `0 ≤ p ≤ m - k` with a hook of size
/// `m - p` that still fits in `[n]`.
fn contributing(n: usize, m: usize, k: usize) -> impl Iterator<Item = usize> {
    (0..=m - k).filter(move |p| m - p <= n)
}

/// `#S^α_{λ'}` with `λ' = λ ∪ 1^r`, where every part of `λ` is at least 2.
pub fn lift_fixed_points(lambda: &Partition, r: usize, alpha: &Composition) -> Result<BigInt> {
    check(lambda, r, alpha)?;
    let (n, m, k) = (lambda.size(), alpha.size(), alpha.len());
    let mut acc = Rational::zero();
    for p in contributing(n, m, k) {
        let hook = Composition::hook(m - p, k)?;
        let inner = count_s(lambda, &hook)?;
        acc += lift_weight(n, m, r, p) * rat(binomial((m - k) as i64, p as i64) * inner);
    }
    expect_nonnegative_integer(&acc, &format!("lifted count for lambda={lambda}, r={r}, alpha={alpha}"))
}

/// The separation probability for `λ'`, evaluated from the separation
/// probabilities for `λ`. Cross-checked against the count form.
pub fn lift_fixed_points_probability(lambda: &Partition, r: usize, alpha: &Composition) -> Result<SepResult> {
    let count = lift_fixed_points(lambda, r, alpha)?;
    let (n, m, k) = (lambda.size(), alpha.size(), alpha.len());
    let lifted = lambda.with_fixed_points(r);
    let total = multinomial(n + r, alpha.parts()) * lifted.class_size();
    let from_count = Rational::new(count.clone(), total);

    let mut sum = Rational::zero();
    for p in contributing(n, m, k) {
        let hook = Composition::hook(m - p, k)?;
        let inner = sep_prob(lambda, &hook)?.probability;
        let den = factorial(n + p - m) * factorial(m - k - p + 1);
        sum += lift_weight(n, m, r, p) * rat(binomial((m - k) as i64, p as i64)) / rat(den) * inner;
    }
    let scale = Rational::new(
        factorial(n),
        multinomial(n + r, alpha.parts()) * binomial((n + r) as i64, r as i64),
    );
    let probability = scale * sum;
    if probability != from_count {
        return Err(Error::Invariant(format!(
            "lifted probability {probability} disagrees with count form {from_count} for lambda={lambda}, r={r}, alpha={alpha}"
        )));
    }
    Ok(SepResult::new(Some(count), probability, Method::FixedPointLift))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::partition::{all_compositions, partitions};

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn comp(v: &[usize]) -> Composition {
        Composition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(lift_fixed_points(&part(&[2]), 1, &comp(&[1, 1])).unwrap(), int(12));
        assert_eq!(lift_fixed_points(&part(&[2, 2]), 0, &comp(&[1, 1])).unwrap(), int(20));
        assert_eq!(
            lift_fixed_points(&part(&[3]), 2, &comp(&[1, 1])).unwrap(),
            count_s(&part(&[3, 1, 1]), &comp(&[1, 1])).unwrap()
        );
    }

    #[test]
    fn rejects_fixed_points_in_lambda() {
        assert!(lift_fixed_points(&part(&[2, 1]), 1, &comp(&[1])).is_err());
        assert!(lift_fixed_points(&part(&[2]), 0, &comp(&[2, 1])).is_err());
    }

    #[test]
    fn agrees_with_generating_function() {
        for n in 2..=6 {
            for lambda in partitions(n).into_iter().filter(|l| !l.parts().contains(&1)) {
                for r in 0..=3 {
                    let lifted = lambda.with_fixed_points(r);
                    for m in 1..=n + r {
                        for alpha in all_compositions(m) {
                            let res = lift_fixed_points_probability(&lambda, r, &alpha).unwrap();
                            assert_eq!(
                                res.count.unwrap(),
                                count_s(&lifted, &alpha).unwrap(),
                                "lambda={lambda} r={r} alpha={alpha}"
                            );
                        }
                    }
                }
            }
        }
    }
}
