//! Separation for `π` with a prescribed number of cycles, and for two `n`-cycles.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{binomial, binomial_general, expect_nonnegative_integer, factorial, multinomial, rat, sign, stirling_unsigned, Rational};
use crate::error::{invalid, Error, Result};
use crate::partition::Composition;

use super::{Method, SepResult};

fn check(n: usize, alpha: &Composition) -> Result<()> {
    if alpha.is_empty() {
        return invalid("alpha must have at least one part");
    }
    if alpha.size() > n {
        return invalid(format!("alpha has size {} > n = {n}", alpha.size()));
    }
    Ok(())
}

/// `Σ_r binom(1-k, r) binom(n+k-1, n-m-r) c(n-k-r+1, p) / (n-k-r+1)!`.
fn p_cycle_sum(n: usize, p: usize, m: usize, k: usize) -> Rational {
    let mut acc = Rational::zero();
    for r in 0..=n - m {
        let Some(top) = (n + 1).checked_sub(k + r) else { break };
        let term = binomial_general(1 - k as i64, r)
            * rat(binomial((n + k - 1) as i64, (n - m - r) as i64) * stirling_unsigned(top, p))
            / rat(factorial(top));
        acc += term;
    }
    acc
}

/// `N^α(n, p)`: the number of pairs `(π, A)` with `π` having `p` cycles and
/// `π∘ω` `A`-separated, evaluated as `n!` times the sum over `r`.
pub fn p_cycles_count(n: usize, p: usize, alpha: &Composition) -> Result<BigInt> {
    check(n, alpha)?;
    if p == 0 || p > n {
        return invalid(format!("need 1 <= p <= n, got p = {p}, n = {n}"));
    }
    let value = rat(factorial(n)) * p_cycle_sum(n, p, alpha.size(), alpha.len());
    expect_nonnegative_integer(&value, &format!("N(n={n}, p={p}) for alpha={alpha}"))
}

/// Separation probability when `π` is uniform among permutations with `p`
/// cycles. Probability and count are evaluated independently and must agree.
pub fn sep_prob_p_cycles(n: usize, p: usize, alpha: &Composition) -> Result<SepResult> {
    let count = p_cycles_count(n, p, alpha)?;
    let (m, k) = (alpha.size(), alpha.len());
    let total = multinomial(n, alpha.parts()) * stirling_unsigned(n, p);
    if k == 1 {
        return Ok(SepResult::new(Some(total), Rational::one(), Method::SingleBlock));
    }
    let probability = rat(factorial(n - m) * alpha.factorial_product()) / rat(stirling_unsigned(n, p))
        * p_cycle_sum(n, p, m, k);
    if Rational::new(count.clone(), total) != probability {
        return Err(Error::Invariant(format!(
            "p-cycle count and probability forms disagree at n={n}, p={p}, alpha={alpha}"
        )));
    }
    Ok(SepResult::new(Some(count), probability, Method::CycleCount))
}

/// Separation probability for the product of two uniform `n`-cycles, by the
/// closed form with `m - k + 2` terms.
pub fn sep_prob_ncycle(n: usize, alpha: &Composition) -> Result<SepResult> {
    check(n, alpha)?;
    let (m, k) = (alpha.size(), alpha.len());
    let ni = n as i64;
    let mi = m as i64;
    let ki = k as i64;
    let total = multinomial(n, alpha.parts()) * factorial(n - 1);
    if k == 1 {
        return Ok(SepResult::new(Some(total), Rational::one(), Method::SingleBlock));
    }
    let mut bracket = Rational::new(
        sign(ni - mi) * binomial(ni - 1, ki - 2),
        binomial(ni + mi, mi - ki),
    );
    for r in 0..=(m - k) as i64 {
        bracket += Rational::new(
            sign(r) * binomial(mi - ki, r) * binomial(ni + r + 1, mi),
            binomial(ni + ki + r, r),
        );
    }
    let probability = rat(factorial(n - m) * alpha.factorial_product())
        / rat(BigInt::from(n + k) * factorial(n - 1))
        * bracket;
    let count = expect_nonnegative_integer(&(&probability * rat(total)), &format!("n-cycle count for n={n}, alpha={alpha}"))?;
    Ok(SepResult::new(Some(count), probability, Method::TwoLongCycles))
}

/// The two-branch value for `α = 1^k`: `1/k!`, plus
/// `2 / ((k-2)! (n-k+1)(n+k))` when `n - k` is even.
pub fn ncycle_singletons(n: usize, k: usize) -> Result<Rational> {
    if k < 2 || k > n {
        return invalid(format!("need 2 <= k <= n, got k = {k}, n = {n}"));
    }
    let base = Rational::new(BigInt::one(), factorial(k));
    if (n - k) % 2 == 1 {
        return Ok(base);
    }
    Ok(base + Rational::new(BigInt::from(2), factorial(k - 2) * BigInt::from((n - k + 1) * (n + k))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ratio};
    use crate::formulas::gtable::{count_s_all, sep_prob};
    use crate::partition::{all_compositions, Partition};

    fn comp(v: &[usize]) -> Composition {
        Composition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn p_cycle_examples() {
        assert_eq!(sep_prob_p_cycles(3, 2, &comp(&[1, 1])).unwrap().probability, ratio(2, 3));
        assert_eq!(sep_prob_p_cycles(3, 1, &comp(&[1, 1])).unwrap().probability, ratio(1, 2));
        assert_eq!(p_cycles_count(3, 2, &comp(&[1, 1])).unwrap(), int(12));
    }

    #[test]
    fn ncycle_examples() {
        assert_eq!(sep_prob_ncycle(3, &comp(&[1, 1])).unwrap().probability, ratio(1, 2));
        assert_eq!(sep_prob_ncycle(4, &comp(&[1, 1])).unwrap().probability, ratio(11, 18));
        assert_eq!(sep_prob_ncycle(6, &comp(&[1, 1, 1])).unwrap().probability, ratio(1, 6));
        assert_eq!(sep_prob_ncycle(5, &comp(&[1, 1, 1])).unwrap().probability, ratio(1, 4));
        assert_eq!(ncycle_singletons(4, 2).unwrap(), ratio(11, 18));
    }

    #[test]
    fn single_block_formula_paths_give_one() {
        for n in 1..=8 {
            for m in 1..=n {
                for p in 1..=n {
                    let value = rat(factorial(n - m) * factorial(m)) / rat(stirling_unsigned(n, p))
                        * p_cycle_sum(n, p, m, 1);
                    assert_eq!(value, rat(1), "n={n} p={p} m={m}");
                }
            }
        }
    }

    #[test]
    fn long_cycle_forms_agree() {
        for n in 2..=9 {
            let lambda = Partition::new(vec![n]).unwrap();
            for m in 1..=n {
                for alpha in all_compositions(m) {
                    let a = sep_prob(&lambda, &alpha).unwrap().probability;
                    let b = sep_prob_ncycle(n, &alpha).unwrap().probability;
                    let c = sep_prob_p_cycles(n, 1, &alpha).unwrap().probability;
                    assert_eq!(a, b, "n={n} alpha={alpha}");
                    assert_eq!(a, c, "n={n} alpha={alpha}");
                    if alpha.parts().iter().all(|&x| x == 1) && alpha.len() >= 2 {
                        assert_eq!(b, ncycle_singletons(n, alpha.len()).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn aggregation_over_lambda() {
        for n in 1..=8 {
            for m in 1..=n {
                for alpha in all_compositions(m) {
                    let all = count_s_all(n, &alpha).unwrap();
                    for p in 1..=n {
                        let sum: BigInt = all.iter().filter(|(l, _)| l.len() == p).map(|(_, c)| c).sum();
                        assert_eq!(sum, p_cycles_count(n, p, &alpha).unwrap(), "n={n} p={p} alpha={alpha}");
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(sep_prob_p_cycles(3, 0, &comp(&[1])).is_err());
        assert!(sep_prob_p_cycles(3, 4, &comp(&[1])).is_err());
        assert!(sep_prob_ncycle(2, &comp(&[2, 1])).is_err());
        assert!(ncycle_singletons(3, 1).is_err());
    }
}
