//! Strong separation and connection coefficients.
//!
//! A tuple `A` is weakly separated by `σ` exactly when splitting every block
//! `A_i` along the cycles of `σ` yields a strongly separated tuple. Grouping
//! by the shapes of those splits gives
//!
//! ```text
//! σ^α_λ = Σ_{β ⪯ α} R_{α,β} · strong_prob^β_λ
//! ```
//!
//! where `β` runs over compositions obtained by replacing each `α_i` with a
//! partition of `α_i` (its segment, listed weakly decreasing) and
//! `R_{α,β} = ∏_i α_i! / (∏_j β_j! ∏_s mult_s!)` counts the set partitions of
//! each block with the given segment shape.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{expect_nonnegative_integer, factorial, rat, Rational};
use crate::error::{invalid, Error, Result};
use crate::formulas::sep_prob;
use crate::partition::{all_compositions, partitions, Composition, Partition};

/// Number of ways to split a block of size `α_i` into sub-blocks of sizes
/// `segment`, for each `i`, multiplied together.
pub fn refinement_coefficient(alpha: &Composition, segments: &[Partition]) -> Result<BigInt> {
    if segments.len() != alpha.len() {
        return invalid(format!("{} segments for a composition with {} parts", segments.len(), alpha.len()));
    }
    let mut total = BigInt::one();
    for (&a, seg) in alpha.parts().iter().zip(segments) {
        if seg.size() != a {
            return invalid(format!("segment {seg} does not partition {a}"));
        }
        let mut den = BigInt::one();
        for &b in seg.parts() {
            den *= factorial(b);
        }
        for (_, mult) in seg.multiplicities() {
            den *= factorial(mult);
        }
        total *= factorial(a) / den;
    }
    Ok(total)
}

/// The segmented refinements `β ⪯ α` with their coefficients `R_{α,β}`.
/// Distinct segmentations give distinct `β`, since the prefix sums of `β`
/// recover the cut points.
pub fn refinements(alpha: &Composition) -> Result<BTreeMap<Composition, BigInt>> {
    let mut out = BTreeMap::new();
    let mut chosen: Vec<Partition> = Vec::with_capacity(alpha.len());
    refine_rec(alpha, &mut chosen, &mut out)?;
    Ok(out)
}

fn refine_rec(alpha: &Composition, chosen: &mut Vec<Partition>, out: &mut BTreeMap<Composition, BigInt>) -> Result<()> {
    if chosen.len() == alpha.len() {
        let parts: Vec<usize> = chosen.iter().flat_map(|p| p.parts().iter().copied()).collect();
        let beta = Composition::new(parts)?;
        let r = refinement_coefficient(alpha, chosen)?;
        out.insert(beta, r);
        return Ok(());
    }
    for seg in partitions(alpha.parts()[chosen.len()]) {
        chosen.push(seg);
        refine_rec(alpha, chosen, out)?;
        chosen.pop();
    }
    Ok(())
}

/// `R_{α,β}` over all compositions of `m`, indexed by decreasing length and
/// then lexicographically, so that every row has its nonzero entries at or
/// after the diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementMatrix {
    m: usize,
    index: Vec<Composition>,
    rows: BTreeMap<Composition, BTreeMap<Composition, BigInt>>,
}

impl RefinementMatrix {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return invalid("need m >= 1");
        }
        let mut index = all_compositions(m);
        index.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let mut rows = BTreeMap::new();
        for alpha in &index {
            rows.insert(alpha.clone(), refinements(alpha)?);
        }
        Ok(RefinementMatrix { m, index, rows })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn index(&self) -> &[Composition] {
        &self.index
    }

    pub fn get(&self, alpha: &Composition, beta: &Composition) -> BigInt {
        self.rows.get(alpha).and_then(|row| row.get(beta)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn row(&self, alpha: &Composition) -> Option<&BTreeMap<Composition, BigInt>> {
        self.rows.get(alpha)
    }

    /// Diagonal entries are one and every other entry of a row sits in a
    /// strictly longer column.
    pub fn is_unitriangular(&self) -> bool {
        self.rows.iter().all(|(alpha, row)| {
            row.get(alpha).is_some_and(|d| d.is_one())
                && row.keys().all(|beta| beta == alpha || beta.len() > alpha.len())
        })
    }

    /// Solves `R x = rhs` by substitution, longest compositions first.
    pub fn solve(&self, rhs: &BTreeMap<Composition, Rational>) -> Result<BTreeMap<Composition, Rational>> {
        let mut x: BTreeMap<Composition, Rational> = BTreeMap::new();
        for alpha in &self.index {
            let b = rhs
                .get(alpha)
                .ok_or_else(|| Error::InvalidInput(format!("right-hand side missing {alpha}")))?;
            let row = &self.rows[alpha];
            let mut acc = b.clone();
            for (beta, r) in row {
                if beta != alpha {
                    let known = x.get(beta).ok_or_else(|| {
                        Error::Invariant(format!("refinement {beta} of {alpha} not solved before it"))
                    })?;
                    acc -= rat(r.clone()) * known;
                }
            }
            x.insert(alpha.clone(), acc);
        }
        Ok(x)
    }

    pub fn apply(&self, x: &BTreeMap<Composition, Rational>) -> BTreeMap<Composition, Rational> {
        self.rows
            .iter()
            .map(|(alpha, row)| {
                let v = row
                    .iter()
                    .map(|(beta, r)| rat(r.clone()) * x.get(beta).cloned().unwrap_or_else(Rational::zero))
                    .fold(Rational::zero(), |a, b| a + b);
                (alpha.clone(), v)
            })
            .collect()
    }
}

/// Weak separation probabilities `σ^α_λ` for every composition `α` of `m`.
pub fn weak_sep_probs(lambda: &Partition, m: usize) -> Result<BTreeMap<Composition, Rational>> {
    all_compositions(m)
        .into_iter()
        .map(|alpha| Ok((alpha.clone(), sep_prob(lambda, &alpha)?.probability)))
        .collect()
}

/// Strong separation probabilities `strong_prob^β_λ` for every composition
/// `β` of `m`.
pub fn strong_sep_probs(lambda: &Partition, m: usize) -> Result<BTreeMap<Composition, Rational>> {
    if m == 0 || m > lambda.size() {
        return invalid(format!("need 1 <= m <= n, got m = {m}, n = {}", lambda.size()));
    }
    let matrix = RefinementMatrix::new(m)?;
    let strong = matrix.solve(&weak_sep_probs(lambda, m)?)?;
    for (beta, p) in &strong {
        if *p < Rational::zero() || *p > Rational::one() {
            return Err(Error::Invariant(format!("strong probability {p} for {beta} outside [0, 1]")));
        }
    }
    Ok(strong)
}

/// `K^α_{λ,(n)}`: the number of ways to write a fixed permutation of cycle
/// type `α` as `ω ∘ ρ` with `ω ∈ C_λ` and `ρ` an `n`-cycle. Obtained as
/// `strong_prob^α_λ (n-1)! #C_λ / ∏ (α_i - 1)!`.
pub fn connection_coefficient(lambda: &Partition, alpha: &Composition) -> Result<BigInt> {
    let n = lambda.size();
    if alpha.size() != n || n == 0 {
        return invalid(format!("need |alpha| = |lambda| >= 1; got {alpha}, {lambda}"));
    }
    let strong = strong_sep_probs(lambda, n)?;
    let p = &strong[alpha];
    let mut den = BigInt::one();
    for &a in alpha.parts() {
        den *= factorial(a - 1);
    }
    let k = p * rat(factorial(n - 1) * lambda.class_size()) / rat(den);
    expect_nonnegative_integer(&k, &format!("connection coefficient for lambda={lambda}, alpha={alpha}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ratio};
    use crate::formulas::pair_count;
    use crate::oracle::{Oracle, OracleBudget};

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn comp(v: &[usize]) -> Composition {
        Composition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn coefficients() {
        assert_eq!(refinement_coefficient(&comp(&[2, 1]), &[part(&[2]), part(&[1])]).unwrap(), int(1));
        assert_eq!(refinement_coefficient(&comp(&[2, 1]), &[part(&[1, 1]), part(&[1])]).unwrap(), int(1));
        assert_eq!(refinement_coefficient(&comp(&[4]), &[part(&[2, 2])]).unwrap(), int(3));
        assert_eq!(refinement_coefficient(&comp(&[4]), &[part(&[3, 1])]).unwrap(), int(4));
        assert!(refinement_coefficient(&comp(&[2, 1]), &[part(&[2])]).is_err());
        assert!(refinement_coefficient(&comp(&[2, 1]), &[part(&[1]), part(&[1])]).is_err());
    }

    #[test]
    fn set_partition_counts_sum_to_bell_numbers() {
        let bell = [1u32, 1, 2, 5, 15, 52, 203, 877];
        for a in 1..=7 {
            let total: BigInt = refinements(&comp(&[a])).unwrap().values().sum();
            assert_eq!(total, BigInt::from(bell[a]));
        }
    }

    #[test]
    fn matrix_shape() {
        for m in 1..=7 {
            let r = RefinementMatrix::new(m).unwrap();
            assert!(r.is_unitriangular(), "m={m}");
            assert_eq!(r.index().len(), 1 << (m - 1));
        }
    }

    #[test]
    fn examples() {
        let s = strong_sep_probs(&part(&[3]), 3).unwrap();
        assert_eq!(s[&comp(&[1, 1, 1])], ratio(1, 2));
        let s = strong_sep_probs(&part(&[2, 1]), 2).unwrap();
        assert_eq!(s[&comp(&[2])], ratio(1, 3));
        assert_eq!(s[&comp(&[1, 1])], sep_prob(&part(&[2, 1]), &comp(&[1, 1])).unwrap().probability);

        assert_eq!(connection_coefficient(&part(&[3]), &comp(&[1, 1, 1])).unwrap(), int(2));
        assert_eq!(connection_coefficient(&part(&[3]), &comp(&[2, 1])).unwrap(), int(0));
        assert_eq!(connection_coefficient(&part(&[2, 1]), &comp(&[3])).unwrap(), int(0));
    }

    #[test]
    fn round_trip() {
        for n in 1..=7 {
            for lambda in partitions(n) {
                for m in 1..=n {
                    let matrix = RefinementMatrix::new(m).unwrap();
                    let weak = weak_sep_probs(&lambda, m).unwrap();
                    let strong = strong_sep_probs(&lambda, m).unwrap();
                    assert_eq!(matrix.apply(&strong), weak, "lambda={lambda} m={m}");
                }
            }
        }
    }

    #[test]
    fn agrees_with_oracles() {
        let oracle = Oracle::new(OracleBudget::default(), None).unwrap();
        for n in 1..=5 {
            for lambda in partitions(n) {
                for m in 1..=n {
                    for (beta, p) in strong_sep_probs(&lambda, m).unwrap() {
                        let count = oracle.strong_count(&lambda, &beta).unwrap();
                        assert_eq!(p, Rational::new(count, pair_count(&lambda, &beta)), "lambda={lambda} beta={beta}");
                    }
                }
                for alpha in all_compositions(n) {
                    let k = connection_coefficient(&lambda, &alpha).unwrap();
                    assert_eq!(k, oracle.connection_coeff(&lambda, &alpha).unwrap());
                    assert_eq!(k, connection_coefficient(&lambda, &alpha.sorted().as_composition()).unwrap());
                }
            }
        }
    }
}
