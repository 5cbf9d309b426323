use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::partition::{partitions, Partition};

use super::expand_p_in_m;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Entry `(λ, μ)` is `[m_λ] p_μ`.
    PowerToMonomial,
    /// Entry `(λ, μ)` is `[p_λ] m_μ`.
    MonomialToPower,
}

/// Dense square matrix indexed by the partitions of `degree` in reverse
/// lexicographic order. Column `μ` holds the expansion of the `μ`-th source
/// basis element.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix {
    degree: usize,
    direction: Direction,
    index: Vec<Partition>,
    position: HashMap<Partition, usize>,
    entries: Vec<Vec<Rational>>,
}

impl TransitionMatrix {
    pub(crate) fn from_entries(
        degree: usize,
        direction: Direction,
        index: Vec<Partition>,
        entries: Vec<Vec<Rational>>,
    ) -> Self {
        let position = index.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        TransitionMatrix { degree, direction, index, position, entries }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn index(&self) -> &[Partition] {
        &self.index
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn position(&self, lambda: &Partition) -> Option<usize> {
        self.position.get(lambda).copied()
    }

    pub fn entry_at(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row][col]
    }

    /// Entry `(λ, μ)`; panics if either partition has the wrong degree.
    pub fn get(&self, lambda: &Partition, mu: &Partition) -> &Rational {
        let i = self.position(lambda).expect("row partition of matrix degree");
        let j = self.position(mu).expect("column partition of matrix degree");
        &self.entries[i][j]
    }

    /// Nonzero entries of column `μ`.
    pub fn column<'a>(&'a self, mu: &Partition) -> impl Iterator<Item = (&'a Partition, &'a Rational)> + 'a {
        let j = self.position(mu).expect("column partition of matrix degree");
        self.index
            .iter()
            .zip(self.entries.iter())
            .map(move |(lambda, row)| (lambda, &row[j]))
            .filter(|(_, c)| !c.is_zero())
    }

    pub fn multiply(&self, other: &TransitionMatrix) -> Vec<Vec<Rational>> {
        let d = self.dim();
        let mut out = vec![vec![Rational::zero(); d]; d];
        for i in 0..d {
            for l in 0..d {
                let a = &self.entries[i][l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = &other.entries[l][j];
                    if !b.is_zero() {
                        out[i][j] += a * b;
                    }
                }
            }
        }
        out
    }
}

/// The inverse pair `R = (p → m)` and `S = R^{-1} = (m → p)` for one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionPair {
    pub p_to_m: TransitionMatrix,
    pub m_to_p: TransitionMatrix,
}

impl TransitionPair {
    pub fn compute(n: usize) -> Result<Self> {
        let p_to_m = power_to_monomial(n);
        let inverse = invert_upper_triangular(&p_to_m.entries)?;
        let m_to_p =
            TransitionMatrix::from_entries(n, Direction::MonomialToPower, p_to_m.index.clone(), inverse);
        Ok(TransitionPair { p_to_m, m_to_p })
    }

    /// `R · S == I`.
    pub fn is_inverse_pair(&self) -> bool {
        let product = self.p_to_m.multiply(&self.m_to_p);
        product.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
    }
}

pub(crate) fn power_to_monomial(n: usize) -> TransitionMatrix {
    let index = partitions(n);
    let d = index.len();
    let mut entries = vec![vec![Rational::zero(); d]; d];
    for (j, mu) in index.iter().enumerate() {
        let expansion = expand_p_in_m(mu);
        for (lambda, c) in expansion.iter() {
            let i = index.iter().position(|p| p == lambda).expect("same degree");
            entries[i][j] = c.clone();
        }
    }
    TransitionMatrix::from_entries(n, Direction::PowerToMonomial, index, entries)
}

/// Back substitution, column by column. Partitions are indexed so that a
/// partition precedes everything it dominates, which makes `R` upper
/// triangular with the nonzero diagonal `∏ n_i(λ)!`.
fn invert_upper_triangular(r: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let d = r.len();
    for i in 0..d {
        if r[i][i].is_zero() {
            return Err(Error::Invariant(format!("zero diagonal entry at {i}")));
        }
        if (0..i).any(|j| !r[i][j].is_zero()) {
            return Err(Error::Invariant(format!("p->m matrix not triangular in row {i}")));
        }
    }
    let mut s = vec![vec![Rational::zero(); d]; d];
    for j in 0..d {
        s[j][j] = r[j][j].recip();
        for i in (0..j).rev() {
            let mut acc = Rational::zero();
            for l in i + 1..=j {
                if !r[i][l].is_zero() && !s[l][j].is_zero() {
                    acc += &r[i][l] * &s[l][j];
                }
            }
            s[i][j] = -acc / &r[i][i];
        }
    }
    Ok(s)
}

type Cache = Mutex<HashMap<usize, Arc<TransitionPair>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn cached(n: usize) -> Option<Arc<TransitionPair>> {
    cache().lock().expect("transition cache poisoned").get(&n).cloned()
}

pub(crate) fn insert_cached(n: usize, pair: TransitionPair) -> Arc<TransitionPair> {
    let mut guard = cache().lock().expect("transition cache poisoned");
    guard.entry(n).or_insert_with(|| Arc::new(pair)).clone()
}

/// The transition pair for degree `n`, computed once per process. Racing
/// first calls may both compute; the first insertion wins and the values
/// are identical anyway.
pub fn transition_matrices(n: usize) -> Arc<TransitionPair> {
    if let Some(pair) = cached(n) {
        return pair;
    }
    let pair = TransitionPair::compute(n).expect("p->m matrix is unitriangular up to scaling");
    insert_cached(n, pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    #[test]
    fn small_degrees() {
        let one = transition_matrices(1);
        assert_eq!(one.p_to_m.get(&Partition::new(vec![1]).unwrap(), &Partition::new(vec![1]).unwrap()), &rat(1));
        assert_eq!(one.m_to_p.dim(), 1);

        let two = transition_matrices(2);
        let p2 = Partition::new(vec![2]).unwrap();
        let p11 = Partition::new(vec![1, 1]).unwrap();
        // R = [[1, 1], [0, 2]] with rows/cols ((2), (1,1)); column (1,1) is p_1^2 = m_2 + 2 m_11.
        assert_eq!(two.p_to_m.get(&p2, &p2), &rat(1));
        assert_eq!(two.p_to_m.get(&p2, &p11), &rat(1));
        assert_eq!(two.p_to_m.get(&p11, &p2), &rat(0));
        assert_eq!(two.p_to_m.get(&p11, &p11), &rat(2));
        assert_eq!(two.m_to_p.get(&p2, &p11), &ratio(-1, 2));
        assert_eq!(two.m_to_p.get(&p11, &p11), &ratio(1, 2));
    }

    #[test]
    fn inverse_pairs() {
        for n in 1..=8 {
            let pair = transition_matrices(n);
            assert!(pair.is_inverse_pair(), "degree {n}");
            assert_eq!(pair.p_to_m.direction(), Direction::PowerToMonomial);
            assert_eq!(pair.m_to_p.direction(), Direction::MonomialToPower);
        }
    }

    #[test]
    fn p_to_m_entries_are_nonnegative_integers() {
        for n in 1..=9 {
            let pair = transition_matrices(n);
            for i in 0..pair.p_to_m.dim() {
                for j in 0..pair.p_to_m.dim() {
                    let x = pair.p_to_m.entry_at(i, j);
                    assert!(x.is_integer() && *x >= rat(0));
                }
            }
        }
    }

    #[test]
    fn cache_returns_same_instance() {
        let a = transition_matrices(5);
        let b = transition_matrices(5);
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn concurrent_first_calls_agree() {
        let handles: Vec<_> = (0..4).map(|_| std::thread::spawn(|| transition_matrices(10))).collect();
        let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for r in &results[1..] {
            assert_eq!(**r, *results[0]);
        }
    }
}
