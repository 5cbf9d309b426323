use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{binomial_general, expect_nonnegative_integer, factorial_signed, multinomial, rat, Rational};
use crate::error::{invalid, Result};
use crate::partition::{partitions, Composition, Partition};
use crate::symfunc::{coeff_p, transition_matrices, Basis, SymFuncVector};

use super::colored::marked_composition_count;
use super::{Method, SepResult};

/// Coefficients of `G^α_n(x, t + k)` over `m_λ(x) · binom(t, r)`. Only
/// nonzero entries are stored; they depend on `α` through `(m, k)` alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GTable {
    n: usize,
    m: usize,
    k: usize,
    entries: BTreeMap<(Partition, usize), Rational>,
}

impl GTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, lambda: &Partition, r: usize) -> Rational {
        self.entries.get(&(lambda.clone(), r)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero `((λ, r), coefficient)` entries, ordered by `λ` then `r`.
    pub fn entries(&self) -> impl Iterator<Item = (&Partition, usize, &Rational)> {
        self.entries.iter().map(|((lambda, r), c)| (lambda, *r, c))
    }

    /// The `m`-basis function `G^α_n(x, t + k)` at an integer `t`.
    pub fn specialize(&self, t: i64) -> SymFuncVector {
        let mut out = SymFuncVector::new(self.n, Basis::Monomial);
        let weights: Vec<Rational> = (0..=self.n).map(|r| binomial_general(t, r)).collect();
        for ((lambda, r), c) in &self.entries {
            out.add_term(lambda, &(c * &weights[*r])).expect("table partitions have degree n");
        }
        out
    }

    /// `G^α_n(x, 1)`, the generating function of `#S^α_λ` over `p_λ`.
    pub fn at_one(&self) -> SymFuncVector {
        self.specialize(1 - self.k as i64)
    }
}

pub fn g_table(n: usize, m: usize, k: usize) -> Result<GTable> {
    if m > n {
        return invalid(format!("need m <= n, got m = {m}, n = {n}"));
    }
    if k > m || (k == 0) != (m == 0) {
        return invalid(format!("need 1 <= k <= m (or k = m = 0), got m = {m}, k = {k}"));
    }
    let mut entries = BTreeMap::new();
    let ni = n as i64;
    for r in 0..=n - m {
        let marks = marked_composition_count(n, m, k, r);
        if marks.is_zero() {
            continue;
        }
        let free = ni - (k + r) as i64;
        let Some(free_fact) = factorial_signed(free) else { continue };
        for lambda in partitions(n) {
            let len = lambda.len() as i64;
            let (Some(a), Some(den)) = (factorial_signed(ni - len), factorial_signed(free - len + 1)) else {
                continue;
            };
            let c = BigInt::from(n) * a * &free_fact / den * &marks;
            entries.insert((lambda, r), rat(c));
        }
    }
    Ok(GTable { n, m, k, entries })
}

pub fn g_table_for(n: usize, alpha: &Composition) -> Result<GTable> {
    g_table(n, alpha.size(), alpha.len())
}

fn check_sep_args(lambda: &Partition, alpha: &Composition) -> Result<()> {
    if lambda.is_empty() {
        return invalid("lambda must be a nonempty partition");
    }
    if alpha.is_empty() {
        return invalid("alpha must have at least one part");
    }
    if alpha.size() > lambda.size() {
        return invalid(format!("alpha has size {} > n = {}", alpha.size(), lambda.size()));
    }
    Ok(())
}

/// `#S^α_λ`: pairs `(π ∈ C_λ, A)` with `π∘ω` `A`-separated, as `[p_λ] G^α_n(x, 1)`.
pub fn count_s(lambda: &Partition, alpha: &Composition) -> Result<BigInt> {
    check_sep_args(lambda, alpha)?;
    let table = g_table_for(lambda.size(), alpha)?;
    let value = coeff_p(&table.at_one(), lambda)?;
    expect_nonnegative_integer(&value, &format!("#S for lambda={lambda}, alpha={alpha}"))
}

/// `#S^α_λ` for every `λ ⊢ n` at once, in the index order of the transition
/// matrices. Cheaper than repeated [`count_s`] calls when tabulating.
pub fn count_s_all(n: usize, alpha: &Composition) -> Result<Vec<(Partition, BigInt)>> {
    if alpha.is_empty() || alpha.size() > n || n == 0 {
        return invalid(format!("need 1 <= k and m <= n, got alpha={alpha}, n={n}"));
    }
    let p_vector = g_table_for(n, alpha)?.at_one().convert();
    transition_matrices(n)
        .m_to_p
        .index()
        .iter()
        .map(|lambda| {
            let v = expect_nonnegative_integer(&p_vector.coeff(lambda), &format!("#S for lambda={lambda}"))?;
            Ok((lambda.clone(), v))
        })
        .collect()
}

/// Number of pairs `(π, A)` with `π ∈ C_λ` and `A` of shape `α`.
pub fn pair_count(lambda: &Partition, alpha: &Composition) -> BigInt {
    multinomial(lambda.size(), alpha.parts()) * lambda.class_size()
}

/// `σ^α_λ = #S^α_λ / (multinomial(n; α, n-m) · #C_λ)`.
pub fn sep_prob(lambda: &Partition, alpha: &Composition) -> Result<SepResult> {
    check_sep_args(lambda, alpha)?;
    let total = pair_count(lambda, alpha);
    if alpha.len() == 1 {
        return Ok(SepResult::new(Some(total.clone()), Rational::from_integer(1.into()), Method::SingleBlock));
    }
    let count = count_s(lambda, alpha)?;
    let probability = Rational::new(count.clone(), total);
    Ok(SepResult::new(Some(count), probability, Method::GeneratingFunction))
}
