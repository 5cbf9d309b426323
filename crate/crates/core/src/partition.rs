//! Integer partitions and compositions.
//!
//! Enumeration orders are fixed so that every table and oracle split is
//! reproducible:
//!
//! * partitions of `n` come in *reverse* lexicographic order, `(n)` first and
//!   `(1^n)` last, which is a linear extension of dominance order from the top;
//! * compositions come in lexicographic order of their part arrays.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::factorial;
use crate::error::{invalid, Error, Result};

/// Weakly decreasing sequence of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return invalid("partition parts must be positive");
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return invalid(format!("partition parts must be weakly decreasing: {parts:?}"));
        }
        Ok(Partition(parts))
    }

    /// Sorts the parts into decreasing order first.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Result<Self> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of parts equal to `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.0.iter().filter(|&&p| p == i).count()
    }

    /// `(value, multiplicity)` pairs in decreasing order of value.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((v, c)) if *v == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `z_λ = ∏ i^{n_i} n_i!`.
    pub fn z(&self) -> BigInt {
        self.multiplicities()
            .into_iter()
            .fold(BigInt::one(), |acc, (v, c)| acc * BigInt::from(v).pow(c as u32) * factorial(c))
    }

    /// Returns `(z_λ, n!/z_λ)`, the second entry being the size of the
    /// conjugacy class of cycle type `λ`.
    pub fn z_and_class_size(&self) -> (BigInt, BigInt) {
        let z = self.z();
        let class = factorial(self.size()) / &z;
        (z, class)
    }

    pub fn class_size(&self) -> BigInt {
        self.z_and_class_size().1
    }

    /// `self ⊵ other` in dominance order (equal sizes assumed).
    pub fn dominates(&self, other: &Partition) -> bool {
        let mut a = 0;
        let mut b = 0;
        let len = self.len().max(other.len());
        for i in 0..len {
            a += self.0.get(i).copied().unwrap_or(0);
            b += other.0.get(i).copied().unwrap_or(0);
            if a < b {
                return false;
            }
        }
        true
    }

    /// Appends `r` parts equal to one.
    pub fn with_fixed_points(&self, r: usize) -> Partition {
        let mut parts = self.0.clone();
        parts.extend(std::iter::repeat_n(1, r));
        Partition(parts)
    }

    pub fn as_composition(&self) -> Composition {
        Composition(self.0.clone())
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

/// Ordered sequence of positive parts. The empty composition stands for "no
/// marked blocks".
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return invalid("composition parts must be positive");
        }
        Ok(Composition(parts))
    }

    pub fn empty() -> Self {
        Composition(Vec::new())
    }

    /// `1^k`.
    pub fn ones(k: usize) -> Self {
        Composition(vec![1; k])
    }

    /// `(head, 1^{k-1})` where `head = m - k + 1`; the canonical representative
    /// of size `m` and length `k`.
    pub fn hook(m: usize, k: usize) -> Result<Self> {
        if k == 0 || k > m {
            return invalid(format!("no composition of {m} with {k} parts"));
        }
        let mut parts = vec![m - k + 1];
        parts.extend(std::iter::repeat_n(1, k - 1));
        Ok(Composition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `∏ α_i!`.
    pub fn factorial_product(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, &a| acc * factorial(a))
    }

    pub fn sorted(&self) -> Partition {
        let mut parts = self.0.clone();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// Prefix sums excluding zero, ending with the size.
    pub fn cut_points(&self) -> Vec<usize> {
        self.0
            .iter()
            .scan(0, |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    }
}

impl TryFrom<Vec<usize>> for Composition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Composition::new(parts)
    }
}

impl From<Composition> for Vec<usize> {
    fn from(c: Composition) -> Self {
        c.0
    }
}

fn write_parts(f: &mut fmt::Formatter<'_>, parts: &[usize]) -> fmt::Result {
    let text: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
    write!(f, "{}", text.join(","))
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(f, &self.0)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(f, &self.0)
    }
}

/// Parses `"3,2,2"`; an empty string (or `"-"`) is the empty sequence.
pub fn parse_parts(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() || s == "-" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("bad part {t:?} in {s:?}")))
        })
        .collect()
}

impl FromStr for Composition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Composition::new(parse_parts(s)?)
    }
}

impl FromStr for Partition {
    type Err = Error;
    /// Accepts parts in any order and sorts them.
    fn from_str(s: &str) -> Result<Self> {
        Partition::from_unsorted(parse_parts(s)?)
    }
}

/// All partitions of `n` in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    partitions_rec(n, n, &mut current, &mut out);
    out
}

fn partitions_rec(rest: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition(current.clone()));
        return;
    }
    for part in (1..=max.min(rest)).rev() {
        current.push(part);
        partitions_rec(rest - part, part, current, out);
        current.pop();
    }
}

pub fn partitions_with_length(n: usize, len: usize) -> Vec<Partition> {
    partitions(n).into_iter().filter(|p| p.len() == len).collect()
}

/// Compositions of `m` into exactly `k` parts, lexicographic.
pub fn compositions(m: usize, k: usize) -> Vec<Composition> {
    let mut out = Vec::new();
    if k == 0 {
        if m == 0 {
            out.push(Composition::empty());
        }
        return out;
    }
    if k > m {
        return out;
    }
    let mut current = Vec::with_capacity(k);
    compositions_rec(m, k, &mut current, &mut out);
    out
}

fn compositions_rec(rest: usize, slots: usize, current: &mut Vec<usize>, out: &mut Vec<Composition>) {
    if slots == 1 {
        current.push(rest);
        out.push(Composition(current.clone()));
        current.pop();
        return;
    }
    for part in 1..=rest - (slots - 1) {
        current.push(part);
        compositions_rec(rest - part, slots - 1, current, out);
        current.pop();
    }
}

/// Every composition of `m`, lexicographic.
pub fn all_compositions(m: usize) -> Vec<Composition> {
    let mut out: Vec<Composition> = (0..=m).flat_map(|k| compositions(m, k)).collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=10).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert_eq!(partitions(16).len(), 231);
    }

    #[test]
    fn partitions_are_reverse_lex() {
        let ps = partitions(4);
        let expected: Vec<Partition> =
            vec![p(&[4]), p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])];
        assert_eq!(ps, expected);
        for n in 1..9 {
            let ps = partitions(n);
            assert!(ps.windows(2).all(|w| w[0] > w[1]));
        }
    }

    #[test]
    fn reverse_lex_extends_dominance() {
        for n in 1..9 {
            let ps = partitions(n);
            for (i, a) in ps.iter().enumerate() {
                for b in &ps[i + 1..] {
                    assert!(!b.dominates(a) || a == b, "{b} dominates earlier {a}");
                }
            }
        }
    }

    #[test]
    fn z_and_class_size_examples() {
        assert_eq!(p(&[3]).z_and_class_size(), (int(3), int(2)));
        assert_eq!(p(&[2, 2]).z_and_class_size(), (int(8), int(3)));
        for n in 1..8 {
            let ones = p(&vec![1; n]);
            assert_eq!(ones.z_and_class_size(), (factorial(n), int(1)));
        }
    }

    #[test]
    fn class_sizes_sum_to_factorial() {
        for n in 1..10 {
            let total: BigInt = partitions(n).iter().map(Partition::class_size).sum();
            assert_eq!(total, factorial(n));
        }
    }

    #[test]
    fn composition_counts() {
        for m in 1..9 {
            let total: usize = (1..=m).map(|k| compositions(m, k).len()).sum();
            assert_eq!(total, 1 << (m - 1));
            for k in 1..=m {
                let cs = compositions(m, k);
                assert!(cs.windows(2).all(|w| w[0] < w[1]));
                assert_eq!(int(cs.len()), crate::arith::binomial(m as i64 - 1, k as i64 - 1));
            }
        }
        assert_eq!(compositions(0, 0), vec![Composition::empty()]);
        assert!(compositions(2, 3).is_empty());
        assert_eq!(all_compositions(3).len(), 4);
    }

    #[test]
    fn validation() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!(Composition::new(vec![1, 0]).is_err());
        assert_eq!("1,3,2".parse::<Partition>().unwrap(), p(&[3, 2, 1]));
        assert_eq!("1,3".parse::<Composition>().unwrap().parts(), &[1, 3]);
        assert!("1,x".parse::<Composition>().is_err());
        assert_eq!("".parse::<Composition>().unwrap(), Composition::empty());
    }

    #[test]
    fn hook_and_cut_points() {
        assert_eq!(Composition::hook(5, 3).unwrap().parts(), &[3, 1, 1]);
        assert!(Composition::hook(2, 3).is_err());
        assert_eq!(Composition::new(vec![2, 1, 3]).unwrap().cut_points(), vec![2, 3, 6]);
    }

    #[test]
    fn serde_rejects_bad_partition() {
        let ok: Partition = serde_json::from_str("[3,1]").unwrap();
        assert_eq!(ok, p(&[3, 1]));
        assert!(serde_json::from_str::<Partition>("[1,3]").is_err());
    }
}
