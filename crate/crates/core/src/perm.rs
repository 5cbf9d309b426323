//! Permutations of `[n]`, tuples of disjoint blocks, and the separation
//! predicates evaluated on them.
//!
//! Elements are stored 0-based; every textual form (cycle notation, block
//! listings) is 1-based.

use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::partition::{Composition, Partition};

/// A bijection of `{0, ..., n-1}` stored by its images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return invalid(format!("not a permutation: {images:?}"));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// The long cycle `1 -> 2 -> ... -> n -> 1`.
    pub fn long_cycle(n: usize) -> Self {
        Permutation { images: (0..n).map(|i| (i + 1) % n.max(1)).collect() }
    }

    /// Builds a permutation from 1-based cycles; unlisted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n || touched[x - 1] {
                    return invalid(format!("bad cycle element {x} for n = {n}"));
                }
                touched[x - 1] = true;
                images[x - 1] = cycle[(i + 1) % cycle.len()] - 1;
            }
        }
        Permutation::new(images)
    }

    /// The permutation with cycles `(1 .. a_1)(a_1+1 .. a_1+a_2)...` on
    /// consecutive blocks.
    pub fn block_cycles(parts: &[usize]) -> Self {
        let n: usize = parts.iter().sum();
        let mut images = vec![0; n];
        let mut start = 0;
        for &len in parts {
            for i in 0..len {
                images[start + i] = start + (i + 1) % len;
            }
            start += len;
        }
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// Canonical cycles: sorted by minimum element, each starting at its minimum.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    /// `labels[x]` is the index of the canonical cycle containing `x`.
    pub fn cycle_labels(&self) -> (Vec<usize>, usize) {
        let n = self.len();
        let mut labels = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if labels[start] != usize::MAX {
                continue;
            }
            let mut x = start;
            while labels[x] == usize::MAX {
                labels[x] = count;
                x = self.images[x];
            }
            count += 1;
        }
        (labels, count)
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_labels().1
    }

    pub fn cycle_type(&self) -> Partition {
        let lengths = self.cycles().iter().map(Vec::len).collect();
        Partition::from_unsorted(lengths).expect("cycle lengths are positive")
    }

    /// Lexicographic successor of the image array, or `None` at the last one.
    pub fn next_lex(&self) -> Option<Permutation> {
        let mut a = self.images.clone();
        let n = a.len();
        if n < 2 {
            return None;
        }
        let mut i = n - 1;
        while i > 0 && a[i - 1] >= a[i] {
            i -= 1;
        }
        if i == 0 {
            return None;
        }
        let mut j = n - 1;
        while a[j] <= a[i - 1] {
            j -= 1;
        }
        a.swap(i - 1, j);
        a[i..].reverse();
        Some(Permutation { images: a })
    }

    /// The permutation of lexicographic rank `rank` among all of `S_n`.
    pub fn unrank(n: usize, mut rank: u64) -> Result<Permutation> {
        let mut fact = vec![1u64; n + 1];
        for i in 1..=n {
            fact[i] = fact[i - 1]
                .checked_mul(i as u64)
                .ok_or_else(|| Error::InvalidInput(format!("n = {n} too large to rank")))?;
        }
        if rank >= fact[n] {
            return invalid(format!("rank {rank} out of range for n = {n}"));
        }
        let mut pool: Vec<usize> = (0..n).collect();
        let mut images = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let idx = (rank / fact[i]) as usize;
            rank %= fact[i];
            images.push(pool.remove(idx));
        }
        Ok(Permutation { images })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in self.cycles() {
            let text: Vec<String> = cycle.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", text.join(" "))?;
        }
        Ok(())
    }
}

/// `σ = π ∘ ρ`, i.e. `σ(x) = π(ρ(x))`; the right factor acts first.
pub fn compose(pi: &Permutation, rho: &Permutation) -> Result<Permutation> {
    if pi.len() != rho.len() {
        return Err(Error::SizeMismatch { expected: pi.len(), actual: rho.len() });
    }
    Ok(Permutation { images: rho.images.iter().map(|&x| pi.images[x]).collect() })
}

/// Iterator over `S_n` in lexicographic order of image arrays, starting at a
/// given rank so work can be split deterministically.
pub struct PermutationsFrom {
    next: Option<Permutation>,
    remaining: u64,
}

impl Iterator for PermutationsFrom {
    type Item = Permutation;
    fn next(&mut self) -> Option<Permutation> {
        if self.remaining == 0 {
            return None;
        }
        let current = self.next.take()?;
        self.remaining -= 1;
        self.next = current.next_lex();
        Some(current)
    }
}

/// `count` permutations of `[n]` starting at lexicographic rank `start`.
pub fn permutations_range(n: usize, start: u64, count: u64) -> Result<PermutationsFrom> {
    Ok(PermutationsFrom { next: Some(Permutation::unrank(n, start)?), remaining: count })
}

pub fn all_permutations(n: usize) -> impl Iterator<Item = Permutation> {
    let mut next = Some(Permutation::identity(n));
    std::iter::from_fn(move || {
        let current = next.take()?;
        next = current.next_lex();
        Some(current)
    })
}

/// The conjugacy class `C_λ`, lexicographic.
pub fn enumerate_class(lambda: &Partition) -> impl Iterator<Item = Permutation> + '_ {
    all_permutations(lambda.size()).filter(move |p| &p.cycle_type() == lambda)
}

/// Fixed-point-free involutions of `[2N]`, lexicographic.
pub fn fixed_point_free_involutions(half: usize) -> Vec<Permutation> {
    let n = 2 * half;
    let mut out = Vec::new();
    let mut images = vec![usize::MAX; n];
    involutions_rec(&mut images, &mut out);
    out.sort();
    debug_assert!(out.iter().all(|p| p.len() == n));
    out
}

fn involutions_rec(images: &mut Vec<usize>, out: &mut Vec<Permutation>) {
    let Some(first) = images.iter().position(|&x| x == usize::MAX) else {
        out.push(Permutation { images: images.clone() });
        return;
    };
    for partner in first + 1..images.len() {
        if images[partner] == usize::MAX {
            images[first] = partner;
            images[partner] = first;
            involutions_rec(images, out);
            images[first] = usize::MAX;
            images[partner] = usize::MAX;
        }
    }
}

/// A tuple `(A_1, ..., A_k)` of pairwise disjoint nonempty subsets of `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsetTuple {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SubsetTuple {
    /// Blocks are 0-based element lists.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for block in &blocks {
            if block.is_empty() {
                return invalid("blocks must be nonempty");
            }
            for &x in block {
                if x >= n || seen[x] {
                    return invalid(format!("block element {} repeated or outside [{n}]", x + 1));
                }
                seen[x] = true;
            }
        }
        let blocks = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        Ok(SubsetTuple { n, blocks })
    }

    /// 1-based convenience constructor.
    pub fn from_one_based(n: usize, blocks: &[&[usize]]) -> Result<Self> {
        let mut converted = Vec::new();
        for block in blocks {
            let mut b = Vec::new();
            for &x in *block {
                if x == 0 {
                    return invalid("elements are 1-based");
                }
                b.push(x - 1);
            }
            converted.push(b);
        }
        SubsetTuple::new(n, converted)
    }

    /// Decodes a label array (`0` = unmarked, `i` = block `i`).
    pub fn from_labels(labels: &[usize], k: usize) -> Self {
        let mut blocks = vec![Vec::new(); k];
        for (x, &l) in labels.iter().enumerate() {
            if l > 0 {
                blocks[l - 1].push(x);
            }
        }
        SubsetTuple { n: labels.len(), blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn shape(&self) -> Composition {
        Composition::new(self.blocks.iter().map(Vec::len).collect()).expect("blocks are nonempty")
    }

    /// Block index (0-based) per element, `None` for unmarked elements.
    fn owners(&self) -> Vec<Option<usize>> {
        let mut owner = vec![None; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                owner[x] = Some(b);
            }
        }
        owner
    }

    fn check_size(&self, sigma: &Permutation) -> Result<()> {
        if sigma.len() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, actual: sigma.len() });
        }
        Ok(())
    }
}

/// True iff no cycle of `sigma` meets two different blocks of `blocks`.
pub fn is_separated(sigma: &Permutation, blocks: &SubsetTuple) -> Result<bool> {
    blocks.check_size(sigma)?;
    let owners = blocks.owners();
    Ok(sigma.cycles().iter().all(|cycle| {
        let mut seen = None;
        cycle.iter().filter_map(|&x| owners[x]).all(|b| *seen.get_or_insert(b) == b)
    }))
}

/// True iff every block lies inside a single cycle and distinct blocks lie in
/// distinct cycles.
pub fn is_strongly_separated(sigma: &Permutation, blocks: &SubsetTuple) -> Result<bool> {
    blocks.check_size(sigma)?;
    let (labels, _) = sigma.cycle_labels();
    let mut used = Vec::with_capacity(blocks.blocks.len());
    for block in &blocks.blocks {
        let c = labels[block[0]];
        if block.iter().any(|&x| labels[x] != c) || used.contains(&c) {
            return Ok(false);
        }
        used.push(c);
    }
    Ok(true)
}

/// Number of cycles of `sigma` containing no marked element.
pub fn unmarked_cycle_count(sigma: &Permutation, blocks: &SubsetTuple) -> Result<usize> {
    blocks.check_size(sigma)?;
    let owners = blocks.owners();
    Ok(sigma.cycles().iter().filter(|cycle| cycle.iter().all(|&x| owners[x].is_none())).count())
}

/// Visits every label array of `𝒜^α_n` in lexicographic order. Label `0`
/// means unmarked, label `i` puts the element in block `i`.
pub fn for_each_subset_labels(n: usize, alpha: &Composition, mut visit: impl FnMut(&[usize])) {
    let mut capacity: Vec<usize> = alpha.parts().to_vec();
    let unmarked = n.checked_sub(alpha.size());
    let Some(unmarked) = unmarked else { return };
    let mut labels = vec![0; n];
    labels_rec(0, unmarked, &mut capacity, &mut labels, &mut visit);
}

fn labels_rec(
    pos: usize,
    unmarked: usize,
    capacity: &mut [usize],
    labels: &mut [usize],
    visit: &mut impl FnMut(&[usize]),
) {
    if pos == labels.len() {
        visit(labels);
        return;
    }
    if unmarked > 0 {
        labels[pos] = 0;
        labels_rec(pos + 1, unmarked - 1, capacity, labels, visit);
    }
    for b in 0..capacity.len() {
        if capacity[b] > 0 {
            capacity[b] -= 1;
            labels[pos] = b + 1;
            labels_rec(pos + 1, unmarked, capacity, labels, visit);
            capacity[b] += 1;
        }
    }
    labels[pos] = 0;
}

/// Every tuple of `𝒜^α_n`, in lexicographic order of label arrays.
pub fn enumerate_subset_tuples(n: usize, alpha: &Composition) -> Vec<SubsetTuple> {
    let mut out = Vec::new();
    for_each_subset_labels(n, alpha, |labels| out.push(SubsetTuple::from_labels(labels, alpha.len())));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, multinomial};
    use crate::partition::partitions;
    use proptest::prelude::*;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    fn tuple(n: usize, blocks: &[&[usize]]) -> SubsetTuple {
        SubsetTuple::from_one_based(n, blocks).unwrap()
    }

    #[test]
    fn compose_examples() {
        let omega = Permutation::long_cycle(3);
        let sigma = compose(&cyc(3, &[&[1, 2]]), &omega).unwrap();
        assert_eq!(sigma, cyc(3, &[&[2, 3]]));
        assert_eq!(sigma.to_string(), "(1)(2 3)");
        assert_eq!(compose(&Permutation::identity(3), &omega).unwrap(), omega);
        let sigma = compose(&cyc(3, &[&[1, 3, 2]]), &omega).unwrap();
        assert_eq!(sigma, Permutation::identity(3));
        assert!(matches!(
            compose(&Permutation::identity(2), &omega),
            Err(Error::SizeMismatch { expected: 2, actual: 3 })
        ));
    }

    #[test]
    fn separation_examples() {
        let s = cyc(3, &[&[2, 3]]);
        assert!(is_separated(&s, &tuple(3, &[&[1], &[2]])).unwrap());
        let s = cyc(3, &[&[1, 2, 3]]);
        assert!(!is_separated(&s, &tuple(3, &[&[1], &[2]])).unwrap());
        assert!(is_separated(&s, &tuple(3, &[&[1, 3]])).unwrap());
    }

    #[test]
    fn unmarked_cycle_examples() {
        let s = cyc(4, &[&[2, 4]]);
        assert_eq!(unmarked_cycle_count(&s, &tuple(4, &[&[1], &[2]])).unwrap(), 1);
        let id = Permutation::identity(3);
        assert_eq!(unmarked_cycle_count(&id, &tuple(3, &[&[1], &[2], &[3]])).unwrap(), 0);
        assert_eq!(unmarked_cycle_count(&id, &tuple(3, &[&[1]])).unwrap(), 2);
    }

    #[test]
    fn strong_separation_examples() {
        let s = cyc(3, &[&[2, 3]]);
        assert!(is_strongly_separated(&s, &tuple(3, &[&[2, 3]])).unwrap());
        assert!(!is_strongly_separated(&s, &tuple(3, &[&[1, 2]])).unwrap());
        assert!(!is_strongly_separated(&s, &tuple(3, &[&[2], &[3]])).unwrap());
        assert!(is_strongly_separated(&s, &tuple(3, &[&[1], &[3]])).unwrap());
    }

    #[test]
    fn class_enumeration_matches_class_size() {
        for n in 1..=7 {
            for lambda in partitions(n) {
                let count = enumerate_class(&lambda).count();
                assert_eq!(int(count), lambda.class_size(), "class {lambda}");
            }
        }
        let lambda = Partition::new(vec![2, 2]).unwrap();
        assert_eq!(enumerate_class(&lambda).count(), 3);
    }

    #[test]
    fn canonical_cycles() {
        let p = cyc(5, &[&[4, 2], &[5, 3, 1]]);
        assert_eq!(p.cycles(), vec![vec![0, 4, 2], vec![1, 3]]);
        assert_eq!(p.to_string(), "(1 5 3)(2 4)");
        assert_eq!(p.cycle_type().parts(), &[3, 2]);
    }

    #[test]
    fn ranks_and_ranges() {
        let all: Vec<Permutation> = all_permutations(4).collect();
        assert_eq!(all.len(), 24);
        for (i, p) in all.iter().enumerate() {
            assert_eq!(&Permutation::unrank(4, i as u64).unwrap(), p);
        }
        let tail: Vec<Permutation> = permutations_range(4, 20, 10).unwrap().collect();
        assert_eq!(tail, all[20..].to_vec());
        assert!(Permutation::unrank(3, 6).is_err());
    }

    #[test]
    fn subset_tuple_enumeration() {
        let alpha = Composition::new(vec![1, 1]).unwrap();
        assert_eq!(enumerate_subset_tuples(3, &alpha).len(), 6);
        for n in 0..7 {
            for m in 0..=n {
                for alpha in crate::partition::all_compositions(m) {
                    let tuples = enumerate_subset_tuples(n, &alpha);
                    assert_eq!(int(tuples.len()), multinomial(n, alpha.parts()));
                    let mut dedup = tuples.clone();
                    dedup.dedup();
                    assert_eq!(dedup.len(), tuples.len());
                    assert!(tuples.iter().all(|t| t.shape() == alpha));
                }
            }
        }
        assert!(enumerate_subset_tuples(2, &Composition::new(vec![3]).unwrap()).is_empty());
    }

    #[test]
    fn involutions() {
        assert_eq!(fixed_point_free_involutions(1).len(), 1);
        assert_eq!(fixed_point_free_involutions(3).len(), 15);
        let invs = fixed_point_free_involutions(4);
        assert_eq!(invs.len(), 105);
        assert!(invs.iter().all(|p| p.cycle_type().parts() == [2, 2, 2, 2]));
    }

    #[test]
    fn validation() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::from_cycles(3, &[&[1, 4]]).is_err());
        assert!(SubsetTuple::from_one_based(3, &[&[1], &[1]]).is_err());
        assert!(SubsetTuple::from_one_based(3, &[&[]]).is_err());
        let bad = is_separated(&Permutation::identity(2), &tuple(3, &[&[1]]));
        assert!(bad.is_err());
    }

    fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::new(v).unwrap())
    }

    fn perm_triple() -> impl Strategy<Value = (Permutation, Permutation, Permutation)> {
        (1usize..=8).prop_flat_map(|n| (perm_strategy(n), perm_strategy(n), perm_strategy(n)))
    }

    fn perm_and_blocks() -> impl Strategy<Value = (Permutation, Vec<usize>)> {
        (1usize..=8).prop_flat_map(|n| (perm_strategy(n), proptest::collection::vec(0usize..4, n)))
    }

    proptest! {
        #[test]
        fn composition_is_associative((a, b, c) in perm_triple()) {
            let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
            let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            let id = Permutation::identity(a.len());
            prop_assert_eq!(compose(&id, &a).unwrap(), a.clone());
            prop_assert_eq!(compose(&a, &id).unwrap(), a.clone());
            prop_assert_eq!(compose(&a, &a.inverse()).unwrap(), id);
        }

        #[test]
        fn separation_ignores_block_order((sigma, labels) in perm_and_blocks()) {
            let k = labels.iter().copied().max().unwrap_or(0);
            let used: Vec<usize> = (1..=k).filter(|b| labels.contains(b)).collect();
            let relabel: Vec<usize> = labels
                .iter()
                .map(|&l| if l == 0 { 0 } else { used.iter().position(|&u| u == l).unwrap() + 1 })
                .collect();
            let tuple = SubsetTuple::from_labels(&relabel, used.len());
            let mut reversed_blocks: Vec<Vec<usize>> = tuple.blocks().to_vec();
            reversed_blocks.reverse();
            let reversed = SubsetTuple::new(sigma.len(), reversed_blocks).unwrap();
            prop_assert_eq!(is_separated(&sigma, &tuple).unwrap(), is_separated(&sigma, &reversed).unwrap());

            let unmarked = unmarked_cycle_count(&sigma, &tuple).unwrap();
            let owners = tuple.owners();
            let meeting = sigma.cycles().iter().filter(|c| c.iter().any(|&x| owners[x].is_some())).count();
            prop_assert_eq!(unmarked + meeting, sigma.cycle_count());
        }
    }
}
