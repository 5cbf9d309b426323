//! Products of a fixed-point-free involution with the long cycle, and the
//! vertex generating function of one-face maps.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{
    binomial, binomial_general, expect_nonnegative_integer, factorial, factorial_signed, multinomial,
    odd_double_factorial, pow2, rat, Rational,
};
use crate::error::{invalid, Result};
use crate::partition::Composition;

use super::binom_poly::BinomTPoly;
use super::{Method, SepResult};

fn check(half: usize, alpha: &Composition) -> Result<()> {
    if half == 0 {
        return invalid("need N >= 1");
    }
    if alpha.size() > 2 * half {
        return invalid(format!("alpha has size {} > 2N = {}", alpha.size(), 2 * half));
    }
    Ok(())
}

/// `2^{k+r-N} (2N-k-r)! / (N-k-r+1)!`, or `None` when the denominator
/// argument is negative.
fn involution_weight(half: usize, k: usize, r: usize) -> Option<Rational> {
    let den = factorial_signed(half as i64 - (k + r) as i64 + 1)?;
    let num = factorial(2 * half - k - r);
    Some(pow2((k + r) as i64 - half as i64) * Rational::new(num, den))
}

/// `H^α_N(t + k)` in the `binom(t, r)` basis, `r ≤ min(2N - m, N - k + 1)`.
pub fn h_poly(half: usize, alpha: &Composition) -> Result<BinomTPoly> {
    check(half, alpha)?;
    let (m, k) = (alpha.size(), alpha.len());
    let mut out = BinomTPoly::new();
    for r in 0..=2 * half - m {
        let Some(weight) = involution_weight(half, k, r) else { break };
        let marks = binomial((2 * half + k) as i64 - 1, (2 * half - m - r) as i64);
        out.add_term(r, rat(BigInt::from(half) * marks) * weight);
    }
    Ok(out)
}

/// `H^α_N(t)` itself, undoing the shift by `k`.
pub fn h_poly_unshifted(half: usize, alpha: &Composition) -> Result<BinomTPoly> {
    Ok(h_poly(half, alpha)?.shift(-(alpha.len() as i64)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionResult {
    /// `H^α_N(1) / (multinomial(2N; α, 2N-m) · (2N-1)!!)`.
    pub result: SepResult,
    /// The alternative closed form evaluated literally. It is smaller than
    /// the pair-count value by a factor `(2N - m)!`.
    pub printed: Rational,
    pub warning: Option<String>,
}

fn printed_form(half: usize, alpha: &Composition) -> Rational {
    let (m, k) = (alpha.size(), alpha.len());
    let n = 2 * half;
    let mut sum = Rational::zero();
    for r in 0..=n - m {
        let Some(weight) = involution_weight(half, k, r) else { break };
        sum += binomial_general(1 - k as i64, r)
            * rat(binomial((n + k) as i64 - 1, (n - m - r) as i64))
            * weight
            / rat(2);
    }
    rat(alpha.factorial_product()) / rat(factorial(n - 1) * odd_double_factorial(half)) * sum
}

pub fn sep_prob_involution(half: usize, alpha: &Composition) -> Result<InvolutionResult> {
    check(half, alpha)?;
    if alpha.is_empty() {
        return invalid("alpha must have at least one part");
    }
    let n = 2 * half;
    let total = multinomial(n, alpha.parts()) * odd_double_factorial(half);
    let result = if alpha.len() == 1 {
        SepResult::new(Some(total), Rational::one(), Method::SingleBlock)
    } else {
        let value = h_poly(half, alpha)?.eval(1 - alpha.len() as i64);
        let count = expect_nonnegative_integer(&value, &format!("H(1) for N={half}, alpha={alpha}"))?;
        let probability = Rational::new(count.clone(), total);
        SepResult::new(Some(count), probability, Method::Involution)
    };
    let printed = printed_form(half, alpha);
    let warning = (printed != result.probability).then(|| {
        format!(
            "alternative closed form gives {printed}, which differs from the pair-count value by a factor of (2N-m)! = {}",
            factorial(n - alpha.size())
        )
    });
    Ok(InvolutionResult { result, printed, warning })
}

/// `#M_γ`: pairs `(π, c)` with `π` a fixed-point-free involution of `[2N]`
/// and `c` a cycle coloring of `π∘ω` with `γ_i` elements of color `i`.
/// Depends on `γ` only through its length `ℓ`.
pub fn count_m(half: usize, len: usize) -> Result<BigInt> {
    if half == 0 || len == 0 {
        return invalid(format!("need N, l >= 1, got N = {half}, l = {len}"));
    }
    if len > half + 1 {
        return Ok(BigInt::zero());
    }
    let value = rat(BigInt::from(half) * factorial(2 * half - len))
        / rat(factorial(half + 1 - len))
        * pow2(len as i64 - half as i64);
    expect_nonnegative_integer(&value, &format!("#M for N={half}, l={len}"))
}

/// The vertex polynomial `Σ_{r=1}^{N+1} N 2^{r-N} (2N-r)!/(N-r+1)! binom(2N-1, 2N-r) binom(t, r)`.
pub fn hz_poly(half: usize) -> Result<BinomTPoly> {
    if half == 0 {
        return invalid("need N >= 1");
    }
    let mut out = BinomTPoly::new();
    for r in 1..=half + 1 {
        let c = rat(BigInt::from(half) * factorial(2 * half - r) * binomial(2 * half as i64 - 1, (2 * half - r) as i64))
            / rat(factorial(half + 1 - r))
            * pow2(r as i64 - half as i64);
        out.add_term(r, c);
    }
    Ok(out)
}
