//! Two auxiliary identities used when simplifying the cycle-count sums.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{binomial, factorial, rat, sign, stirling_unsigned, Rational};
use crate::poly::Poly;

fn one_plus_x() -> Poly {
    Poly::new(vec![Rational::one(), Rational::one()])
}

/// Checks, as polynomials in `x`,
/// `Σ_i binom(a,i) x^i / (i+b+1)` against the right-hand side with
/// `(-x)^{-(i+1)}` terms, after multiplying both sides by `(a+1)(-x)^{b+1}`.
pub fn verify_change_summation(a: usize, b: usize) -> bool {
    let minus_x = Poly::monomial(-Rational::one(), 1);

    let lhs_series = (0..=a)
        .map(|i| Poly::monomial(Rational::new(binomial(a as i64, i as i64), BigInt::from(i + b + 1)), i))
        .fold(Poly::zero(), |acc, p| &acc + &p);
    let lhs = (&lhs_series * &minus_x.pow(b + 1)).scale(&rat(a + 1));

    let mut rhs = Poly::constant(Rational::new(BigInt::one(), binomial((a + b + 1) as i64, b as i64)));
    for i in 0..=b {
        let c = Rational::new(binomial(b as i64, i as i64), binomial((a + i + 1) as i64, i as i64));
        let term = &one_plus_x().pow(a + i + 1) * &minus_x.pow(b - i);
        rhs = &rhs - &term.scale(&c);
    }
    lhs == rhs
}

/// `Σ_{q=0}^a binom(a,q) (-1)^{q+1-p} c(q+1,p)/(q+1)! = c(a+1,p)/(a+1)!`.
pub fn verify_simplify_p(a: usize, p: usize) -> bool {
    let lhs = (0..=a)
        .map(|q| {
            Rational::new(
                binomial(a as i64, q as i64) * sign(q as i64 + 1 - p as i64) * stirling_unsigned(q + 1, p),
                factorial(q + 1),
            )
        })
        .fold(Rational::zero(), |acc, x| acc + x);
    lhs == Rational::new(stirling_unsigned(a + 1, p), factorial(a + 1))
}
