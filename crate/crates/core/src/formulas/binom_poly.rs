use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::arith::{binomial_general, factorial, format_rational, rat, Rational};
use crate::poly::Poly;

/// A polynomial in `t` written as `Σ_r c_r · binom(t, r)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BinomTPoly {
    coeffs: BTreeMap<usize, Rational>,
}

impl BinomTPoly {
    pub fn new() -> Self {
        BinomTPoly::default()
    }

    pub fn add_term(&mut self, r: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(r).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&r);
        }
    }

    pub fn coeff(&self, r: usize) -> Rational {
        self.coeffs.get(&r).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero `(r, c_r)` pairs in increasing `r`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(r, c)| (*r, c))
    }

    pub fn max_r(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, t: i64) -> Rational {
        self.terms().map(|(r, c)| c * binomial_general(t, r)).fold(Rational::zero(), |a, b| a + b)
    }

    pub fn to_monomial(&self) -> Poly {
        self.terms()
            .map(|(r, c)| Poly::falling_binomial(r).scale(c))
            .fold(Poly::zero(), |acc, p| &acc + &p)
    }

    /// Inverse of [`BinomTPoly::to_monomial`]: peel off the top degree, whose
    /// coefficient in `binom(t, d)` is `d!` times the leading coefficient.
    pub fn from_monomial(p: &Poly) -> Self {
        let mut rest = p.clone();
        let mut out = BinomTPoly::new();
        while let Some(d) = rest.degree() {
            let c = rest.coeff(d) * rat(factorial(d));
            rest = &rest - &Poly::falling_binomial(d).scale(&c);
            out.add_term(d, c);
        }
        out
    }

    /// The polynomial `t ↦ P(t + s)` in the same basis, using
    /// `binom(t + s, r) = Σ_j binom(s, r - j) binom(t, j)`.
    pub fn shift(&self, s: i64) -> Self {
        let mut out = BinomTPoly::new();
        for (r, c) in self.terms() {
            for j in 0..=r {
                out.add_term(j, c * binomial_general(s, r - j));
            }
        }
        out
    }

    /// True when every coefficient is a nonnegative integer.
    pub fn has_nonnegative_integer_coeffs(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer() && *c >= Rational::zero())
    }
}

impl fmt::Display for BinomTPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> =
            self.terms().map(|(r, c)| format!("{}*binom(t,{r})", format_rational(c))).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use proptest::prelude::*;

    #[test]
    fn monomial_conversion() {
        // t^2 = binom(t,1) + 2 binom(t,2)
        let t2 = Poly::monomial(rat(1), 2);
        let b = BinomTPoly::from_monomial(&t2);
        assert_eq!(b.coeff(1), rat(1));
        assert_eq!(b.coeff(2), rat(2));
        assert_eq!(b.coeff(0), rat(0));
        assert_eq!(b.to_monomial(), t2);
        assert_eq!(b.to_string(), "1*binom(t,1) + 2*binom(t,2)");
    }

    #[test]
    fn shift_matches_evaluation() {
        let mut b = BinomTPoly::new();
        b.add_term(0, rat(3));
        b.add_term(2, ratio(1, 2));
        b.add_term(3, rat(-4));
        for s in -3..4 {
            let shifted = b.shift(s);
            for t in -5..6 {
                assert_eq!(shifted.eval(t), b.eval(t + s));
            }
        }
        assert_eq!(b.shift(2).shift(-2), b);
    }

    proptest! {
        #[test]
        fn monomial_round_trip(coeffs in proptest::collection::vec(-9i64..9, 0..7)) {
            let p = Poly::new(coeffs.into_iter().map(rat).collect());
            let b = BinomTPoly::from_monomial(&p);
            prop_assert_eq!(b.to_monomial(), p.clone());
            for t in -3..4i64 {
                prop_assert_eq!(b.eval(t), p.eval(&rat(t)));
            }
        }
    }
}
