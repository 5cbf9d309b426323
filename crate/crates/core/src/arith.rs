//! Exact integer and rational helpers.
//!
//! Everything here is arbitrary precision. Counts are [`BigInt`], probabilities
//! and matrix entries are [`Rational`] (always kept in lowest terms with a
//! positive denominator by `num-rational`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: impl Into<BigInt>) -> BigInt {
    n.into()
}

pub fn rat(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Factorial of a possibly negative argument; callers treat `None` as a
/// vanishing term.
pub fn factorial_signed(n: i64) -> Option<BigInt> {
    usize::try_from(n).ok().map(factorial)
}

/// `binom(n, k)` for integers; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `x(x-1)...(x-r+1) / r!` for any integer `x`, including negative ones.
pub fn binomial_general(x: i64, r: usize) -> Rational {
    let mut num = BigInt::one();
    for i in 0..r as i64 {
        num *= x - i;
    }
    Rational::new(num, factorial(r))
}

/// `n! / (parts[0]! ... parts[k-1]! (n - sum)!)`; zero when the parts overflow `n`.
pub fn multinomial(n: usize, parts: &[usize]) -> BigInt {
    let used: usize = parts.iter().sum();
    if used > n {
        return BigInt::zero();
    }
    let mut den = factorial(n - used);
    for &p in parts {
        den *= factorial(p);
    }
    factorial(n) / den
}

/// `(2n - 1)!! = 1 * 3 * ... * (2n - 1)`, the number of fixed-point-free
/// involutions of a `2n`-set.
pub fn odd_double_factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * (2 * i - 1))
}

/// `2^e` for a signed exponent.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        rat(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

pub fn sign(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Signless Stirling number of the first kind: the coefficient of `x^p` in
/// the rising factorial `x(x+1)...(x+n-1)`.
pub fn stirling_unsigned(n: usize, p: usize) -> BigInt {
    if p > n {
        return BigInt::zero();
    }
    stirling_row(n).swap_remove(p)
}

/// Row `n` of the signless Stirling triangle, indices `0..=n`.
pub fn stirling_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for m in 0..n {
        // multiply by (x + m)
        let mut next = vec![BigInt::zero(); row.len() + 1];
        for (i, c) in row.iter().enumerate() {
            next[i + 1] += c;
            next[i] += c * m;
        }
        row = next;
    }
    row
}

/// Converts a rational known to be integral; errors otherwise.
pub fn expect_integer(value: &Rational, what: &str) -> Result<BigInt> {
    if value.is_integer() {
        Ok(value.to_integer())
    } else {
        Err(Error::Invariant(format!("{what} = {value} is not an integer")))
    }
}

pub fn expect_nonnegative_integer(value: &Rational, what: &str) -> Result<BigInt> {
    let v = expect_integer(value, what)?;
    if v.is_negative() {
        return Err(Error::Invariant(format!("{what} = {v} is negative")));
    }
    Ok(v)
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(rat),
    }
}

/// Decimal rendering rounded to `digits` significant digits. Display only.
pub fn format_decimal(value: &Rational, digits: usize) -> String {
    let approx = value.to_f64().unwrap_or(f64::NAN);
    let rounded: f64 = format!("{approx:.prec$e}", prec = digits.saturating_sub(1))
        .parse()
        .unwrap_or(approx);
    format!("{rounded}")
}
