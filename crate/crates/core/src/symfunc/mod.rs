//! Coefficient tables for symmetric functions in the monomial (`m_λ`) and
//! power-sum (`p_λ`) bases, and the exact transition matrices between them.

mod disk_cache;
mod transition;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{binomial, factorial, pow2, rat, sign, stirling_unsigned, Rational};
use crate::error::{invalid, Error, Result};
use crate::partition::{partitions_with_length, Partition};

pub use disk_cache::{cache_file_name, load_cached, store_cached, transition_matrices_with_disk};
pub use transition::{transition_matrices, Direction, TransitionMatrix, TransitionPair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Monomial,
    PowerSum,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Monomial => write!(f, "m"),
            Basis::PowerSum => write!(f, "p"),
        }
    }
}

/// A homogeneous symmetric function of degree `n`, as a sparse table of
/// coefficients in one basis. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymFuncVector {
    degree: usize,
    basis: Basis,
    coeffs: BTreeMap<Partition, Rational>,
}

impl SymFuncVector {
    pub fn new(degree: usize, basis: Basis) -> Self {
        SymFuncVector { degree, basis, coeffs: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// Adds `c` to the coefficient of the basis element indexed by `lambda`.
    pub fn add_term(&mut self, lambda: &Partition, c: &Rational) -> Result<()> {
        if lambda.size() != self.degree {
            return Err(Error::SizeMismatch { expected: self.degree, actual: lambda.size() });
        }
        if c.is_zero() {
            return Ok(());
        }
        let entry = self.coeffs.entry(lambda.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(lambda);
        }
        Ok(())
    }

    pub fn coeff(&self, lambda: &Partition) -> Rational {
        self.coeffs.get(lambda).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Re-expresses the function in the other basis.
    pub fn convert(&self) -> SymFuncVector {
        let pair = transition_matrices(self.degree);
        let (matrix, target) = match self.basis {
            Basis::Monomial => (&pair.m_to_p, Basis::PowerSum),
            Basis::PowerSum => (&pair.p_to_m, Basis::Monomial),
        };
        let mut out = SymFuncVector::new(self.degree, target);
        for (mu, c) in &self.coeffs {
            for (lambda, entry) in matrix.column(mu) {
                out.add_term(lambda, &(c * entry)).expect("same degree");
            }
        }
        out
    }
}

/// `p_λ` expanded in the monomial basis. The coefficients are nonnegative
/// integers, built by multiplying in one power sum `p_k` at a time.
pub fn expand_p_in_m(lambda: &Partition) -> SymFuncVector {
    let mut current: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
    current.insert(Vec::new(), BigInt::one());
    for &k in lambda.parts() {
        let mut next: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
        for (nu, c) in &current {
            for target in merge_targets(nu, k) {
                let mult = merge_multiplicity(&target, nu, k);
                *next.entry(target).or_insert_with(BigInt::zero) += c * mult;
            }
        }
        current = next;
    }
    let mut out = SymFuncVector::new(lambda.size(), Basis::Monomial);
    for (parts, c) in current {
        let mu = Partition::new(parts).expect("merge keeps parts sorted");
        out.add_term(&mu, &rat(c)).expect("degree preserved");
    }
    out
}

/// Sorted exponent vectors reachable from `nu` by adding `k` to one entry
/// (an existing part or a new one).
fn merge_targets(nu: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut push = |mut v: Vec<usize>| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        if !out.contains(&v) {
            out.push(v);
        }
    };
    for i in 0..nu.len() {
        if i > 0 && nu[i] == nu[i - 1] {
            continue;
        }
        let mut v = nu.to_vec();
        v[i] += k;
        push(v);
    }
    let mut v = nu.to_vec();
    v.push(k);
    push(v);
    out
}

/// `[m_target](m_nu · p_k)`: the number of positions `j` with
/// `target - k e_j` a rearrangement of `nu`.
fn merge_multiplicity(target: &[usize], nu: &[usize], k: usize) -> usize {
    (0..target.len())
        .filter(|&j| target[j] >= k)
        .filter(|&j| {
            let mut v = target.to_vec();
            v[j] -= k;
            v.retain(|&x| x > 0);
            v.sort_unstable_by(|a, b| b.cmp(a));
            v == nu
        })
        .count()
}

/// `[p_λ] f` for `f` given in the monomial basis.
pub fn coeff_p(vec: &SymFuncVector, lambda: &Partition) -> Result<Rational> {
    if vec.basis != Basis::Monomial {
        return invalid("coeff_p expects a monomial-basis vector");
    }
    if vec.degree != lambda.size() {
        return Err(Error::SizeMismatch { expected: vec.degree, actual: lambda.size() });
    }
    let pair = transition_matrices(vec.degree);
    let row = pair.m_to_p.position(lambda).expect("partition of the right degree");
    Ok(vec
        .iter()
        .map(|(mu, c)| c * pair.m_to_p.entry_at(row, pair.m_to_p.position(mu).expect("indexed")))
        .fold(Rational::zero(), |acc, x| acc + x))
}

/// An identity evaluated two ways; constructing one that disagrees is an
/// invariant violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub computed: Rational,
    pub closed_form: Rational,
}

impl IdentityCheck {
    fn confirm(computed: Rational, closed_form: Rational, what: String) -> Result<Self> {
        if computed != closed_form {
            return Err(Error::Invariant(format!("{what}: matrices give {computed}, closed form {closed_form}")));
        }
        Ok(IdentityCheck { computed, closed_form })
    }
}

/// `[p_{2^N}] Σ_{λ ⊢ 2N, ℓ(λ) = N+s} m_λ`, checked against
/// `(-1)^s / (2^s s! (N-s)!)`.
pub fn lemma_involution_coeff(half: usize, s: usize) -> Result<IdentityCheck> {
    if s > half {
        return invalid(format!("need s <= N, got s = {s}, N = {half}"));
    }
    let n = 2 * half;
    let pair = transition_matrices(n);
    let twos = Partition::new(vec![2; half]).expect("valid");
    let computed = partitions_with_length(n, half + s)
        .iter()
        .map(|lambda| pair.m_to_p.get(&twos, lambda))
        .fold(Rational::zero(), |acc, x| acc + x);
    let closed = rat(sign(s as i64)) * pow2(-(s as i64))
        / rat(factorial(s) * factorial(half - s));
    IdentityCheck::confirm(computed, closed, format!("involution lemma N={half} s={s}"))
}

/// `Σ_{μ ⊢ n, ℓ(μ)=p} [p_μ] Σ_{λ ⊢ n, ℓ(λ)=ℓ} m_λ`, checked against
/// `binom(n-1, ℓ-1) (-1)^{ℓ-p} c(ℓ, p) / ℓ!`.
pub fn coeff_sum_over_length(n: usize, p: usize, len: usize) -> Result<IdentityCheck> {
    if p == 0 || len == 0 || p > n || len > n {
        return invalid(format!("need 1 <= p, l <= n; got n={n}, p={p}, l={len}"));
    }
    let pair = transition_matrices(n);
    let lambdas = partitions_with_length(n, len);
    let mut computed = Rational::zero();
    for mu in partitions_with_length(n, p) {
        for lambda in &lambdas {
            computed += pair.m_to_p.get(&mu, lambda);
        }
    }
    let closed = rat(binomial(n as i64 - 1, len as i64 - 1) * sign(len as i64 - p as i64) * stirling_unsigned(len, p))
        / rat(factorial(len));
    IdentityCheck::confirm(computed, closed, format!("length-sum lemma n={n} p={p} l={len}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use crate::partition::partitions;
    use proptest::prelude::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Independent count of `[x^λ] p_μ`: functions from the parts of `μ` to
    /// the positions of `λ` whose fibres sum to the right values.
    fn brute_force_r(lambda: &Partition, mu: &Partition) -> usize {
        let slots = lambda.len();
        let parts = mu.parts();
        let total = slots.pow(parts.len() as u32);
        (0..total)
            .filter(|&code| {
                let mut sums = vec![0; slots];
                let mut c = code;
                for &part in parts {
                    sums[c % slots] += part;
                    c /= slots;
                }
                sums == lambda.parts()
            })
            .count()
    }

    #[test]
    fn p_to_m_examples() {
        let v = expand_p_in_m(&p(&[2]));
        assert_eq!(v.iter().collect::<Vec<_>>(), vec![(&p(&[2]), &rat(1))]);
        let v = expand_p_in_m(&p(&[1, 1]));
        assert_eq!(v.coeff(&p(&[2])), rat(1));
        assert_eq!(v.coeff(&p(&[1, 1])), rat(2));
        assert_eq!(v.len(), 2);
        let v = expand_p_in_m(&p(&[2, 1]));
        assert_eq!(v.coeff(&p(&[3])), rat(1));
        assert_eq!(v.coeff(&p(&[2, 1])), rat(1));
        assert_eq!(v.len(), 2);
    }

    #[test]
    fn p_to_m_matches_function_count() {
        for n in 1..=7 {
            for mu in partitions(n) {
                let v = expand_p_in_m(&mu);
                for lambda in partitions(n) {
                    assert_eq!(v.coeff(&lambda), rat(brute_force_r(&lambda, &mu) as i64), "[m_{lambda}]p_{mu}");
                }
            }
        }
    }

    #[test]
    fn coeff_p_examples() {
        let mut v = SymFuncVector::new(2, Basis::Monomial);
        v.add_term(&p(&[2]), &rat(1)).unwrap();
        assert_eq!(coeff_p(&v, &p(&[2])).unwrap(), rat(1));

        let mut v = SymFuncVector::new(2, Basis::Monomial);
        v.add_term(&p(&[1, 1]), &rat(1)).unwrap();
        assert_eq!(coeff_p(&v, &p(&[2])).unwrap(), ratio(-1, 2));

        // 4 m_2 + 4 m_11 (+ 2 t m_2 at t = 0)
        let mut v = SymFuncVector::new(2, Basis::Monomial);
        v.add_term(&p(&[2]), &rat(4)).unwrap();
        v.add_term(&p(&[1, 1]), &rat(4)).unwrap();
        assert_eq!(coeff_p(&v, &p(&[2])).unwrap(), rat(2));

        assert!(matches!(coeff_p(&v, &p(&[3])), Err(Error::SizeMismatch { .. })));
        let q = v.convert();
        assert!(coeff_p(&q, &p(&[2])).is_err());
    }

    #[test]
    fn add_term_cancels_and_checks_degree() {
        let mut v = SymFuncVector::new(3, Basis::Monomial);
        v.add_term(&p(&[2, 1]), &rat(2)).unwrap();
        v.add_term(&p(&[2, 1]), &rat(-2)).unwrap();
        assert!(v.is_empty());
        assert!(v.add_term(&p(&[2]), &rat(1)).is_err());
    }

    #[test]
    fn m_to_p_is_dominance_triangular() {
        for n in 1..=8 {
            let pair = transition_matrices(n);
            for lambda in partitions(n) {
                for mu in partitions(n) {
                    if !lambda.dominates(&mu) {
                        assert!(pair.m_to_p.get(&lambda, &mu).is_zero(), "[p_{lambda}]m_{mu}");
                        assert!(pair.p_to_m.get(&lambda, &mu).is_zero(), "[m_{lambda}]p_{mu}");
                    }
                }
            }
        }
    }

    #[test]
    fn involution_lemma() {
        assert_eq!(lemma_involution_coeff(1, 0).unwrap().computed, rat(1));
        assert_eq!(lemma_involution_coeff(1, 1).unwrap().computed, ratio(-1, 2));
        assert_eq!(lemma_involution_coeff(2, 1).unwrap().computed, ratio(-1, 2));
        for half in 1..=5 {
            for s in 0..=half {
                lemma_involution_coeff(half, s).unwrap();
            }
        }
        assert!(lemma_involution_coeff(2, 3).is_err());
    }

    #[test]
    fn length_sum_lemma() {
        assert_eq!(coeff_sum_over_length(2, 1, 1).unwrap().computed, rat(1));
        assert_eq!(coeff_sum_over_length(2, 1, 2).unwrap().computed, ratio(-1, 2));
        assert_eq!(coeff_sum_over_length(3, 3, 3).unwrap().computed, ratio(1, 6));
        for n in 1..=8 {
            for p in 1..=n {
                for l in 1..=n {
                    coeff_sum_over_length(n, p, l).unwrap();
                }
            }
        }
        assert!(coeff_sum_over_length(3, 0, 1).is_err());
        assert!(coeff_sum_over_length(3, 1, 4).is_err());
    }

    fn m_vector() -> impl Strategy<Value = SymFuncVector> {
        (1usize..=8).prop_flat_map(|n| {
            let count = partitions(n).len();
            proptest::collection::vec(-20i64..20, count).prop_map(move |coeffs| {
                let mut v = SymFuncVector::new(n, Basis::Monomial);
                for (lambda, c) in partitions(n).iter().zip(coeffs) {
                    v.add_term(lambda, &rat(c)).unwrap();
                }
                v
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn basis_round_trip(v in m_vector()) {
            let p_form = v.convert();
            prop_assert_eq!(p_form.basis(), Basis::PowerSum);
            let back = p_form.convert();
            prop_assert_eq!(back, v);
        }
    }
}
