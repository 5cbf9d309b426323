//! Exhaustive enumerators used as ground truth for the closed forms.
//!
//! Every count here is obtained by walking the objects themselves. Two
//! reductions keep desk-scale instances fast without changing what is
//! counted:
//!
//! * The number of tuples `A` for which `σ` is separated (and the histogram
//!   of unmarked cycle counts over them) depends on `σ` only through its
//!   cycle type, since relabeling by a conjugating permutation maps tuples
//!   to tuples. The tuples are enumerated once per cycle type of `σ`.
//! * The permutations `π` are enumerated once per `n`, tabulating the pair
//!   (cycle type of `π`, cycle type of `π∘ω`).
//!
//! [`Oracle::count_s_naive`] skips both reductions and exists to test them.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::arith::Rational;
use crate::error::{invalid, Error, Result};
use crate::formulas::{pair_count, Method, SepResult};
use crate::partition::{Composition, Partition};
use crate::perm::{compose, fixed_point_free_involutions, for_each_subset_labels, permutations_range, Permutation};
use crate::poly::Poly;

/// Limits on oracle work. Exceeding any of them aborts the computation with
/// [`Error::BudgetExceeded`]; a count is never truncated.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleBudget {
    /// Largest `n` for separation, strong separation and connection counts.
    pub max_n: usize,
    /// Largest `n` for the colored counts `#T` and `#B`.
    pub max_n_colored: usize,
    /// Largest `N` for fixed-point-free involutions of `[2N]`.
    pub max_half: usize,
    /// Cap on visited objects (permutations, tuples, colorings) per call.
    pub max_objects: Option<u64>,
    pub max_seconds: Option<f64>,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_n: 8, max_n_colored: 6, max_half: 5, max_objects: None, max_seconds: None }
    }
}

/// Which side `ω` sits on in the product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// `σ = π ∘ ω`
    PermFirst,
    /// `σ = ω ∘ π`
    CycleFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Separation {
    Weak,
    Strong,
}

/// Shared budget state for one public call.
struct Meter<'a> {
    budget: &'a OracleBudget,
    deadline: Option<Instant>,
    visited: AtomicU64,
    aborted: AtomicBool,
}

impl<'a> Meter<'a> {
    fn new(budget: &'a OracleBudget) -> Self {
        let deadline = budget.max_seconds.map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0)));
        Meter { budget, deadline, visited: AtomicU64::new(0), aborted: AtomicBool::new(false) }
    }

    fn add(&self, n: u64) -> Result<()> {
        if self.aborted.load(Ordering::Relaxed) {
            return Err(Error::BudgetExceeded("aborted".into()));
        }
        let total = self.visited.fetch_add(n, Ordering::Relaxed) + n;
        if let Some(cap) = self.budget.max_objects {
            if total > cap {
                self.aborted.store(true, Ordering::Relaxed);
                return Err(Error::BudgetExceeded(format!("more than {cap} objects")));
            }
        }
        if let Some(deadline) = self.deadline {
            if Instant::now() > deadline {
                self.aborted.store(true, Ordering::Relaxed);
                return Err(Error::BudgetExceeded("time limit reached".into()));
            }
        }
        Ok(())
    }
}

/// Batches meter updates from a hot loop.
struct Ticker<'m, 'a> {
    meter: &'m Meter<'a>,
    pending: u64,
}

impl<'m, 'a> Ticker<'m, 'a> {
    const BATCH: u64 = 4096;

    fn new(meter: &'m Meter<'a>) -> Self {
        Ticker { meter, pending: 0 }
    }

    fn tick(&mut self) -> Result<()> {
        self.pending += 1;
        if self.pending >= Self::BATCH {
            self.flush()?;
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        let n = std::mem::take(&mut self.pending);
        self.meter.add(n)
    }
}

/// Cycle types of `π` and `π∘ω` over `π ∈ S_n`, with multiplicities.
type TypePairs = BTreeMap<(Partition, Partition), u64>;

type HistogramKey = (Separation, Partition, Vec<usize>);

pub struct Oracle {
    budget: OracleBudget,
    pool: rayon::ThreadPool,
    pairs: Mutex<HashMap<usize, Arc<TypePairs>>>,
    involution_types: Mutex<HashMap<usize, Arc<BTreeMap<Partition, u64>>>>,
    histograms: Mutex<HashMap<HistogramKey, Arc<Vec<u64>>>>,
}

impl Oracle {
    /// `threads = None` uses rayon's default worker count.
    pub fn new(budget: OracleBudget, threads: Option<usize>) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.unwrap_or(0))
            .build()
            .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
        Ok(Oracle {
            budget,
            pool,
            pairs: Mutex::new(HashMap::new()),
            involution_types: Mutex::new(HashMap::new()),
            histograms: Mutex::new(HashMap::new()),
        })
    }

    pub fn budget(&self) -> &OracleBudget {
        &self.budget
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    fn check_n(&self, n: usize, cap: usize, what: &str) -> Result<()> {
        if n > cap {
            return Err(Error::BudgetExceeded(format!("{what} oracle limited to n <= {cap}, got n = {n}")));
        }
        Ok(())
    }

    fn type_pairs(&self, n: usize, meter: &Meter) -> Result<Arc<TypePairs>> {
        if let Some(t) = self.pairs.lock().expect("oracle cache poisoned").get(&n) {
            return Ok(t.clone());
        }
        let total: u64 = (1..=n as u64).product();
        const CHUNK: u64 = 720;
        let omega = Permutation::long_cycle(n);
        let starts: Vec<u64> = (0..total).step_by(CHUNK as usize).collect();
        let table = self.pool.install(|| {
            starts
                .par_iter()
                .map(|&start| -> Result<TypePairs> {
                    let mut local = TypePairs::new();
                    let count = CHUNK.min(total - start);
                    for pi in permutations_range(n, start, count)? {
                        let sigma = compose(&pi, &omega)?;
                        *local.entry((pi.cycle_type(), sigma.cycle_type())).or_insert(0) += 1;
                    }
                    meter.add(count)?;
                    Ok(local)
                })
                .try_reduce(TypePairs::new, |mut a, b| {
                    for (k, v) in b {
                        *a.entry(k).or_insert(0) += v;
                    }
                    Ok(a)
                })
        })?;
        let table = Arc::new(table);
        self.pairs.lock().expect("oracle cache poisoned").insert(n, table.clone());
        Ok(table)
    }

    fn involution_types(&self, half: usize, meter: &Meter) -> Result<Arc<BTreeMap<Partition, u64>>> {
        if let Some(t) = self.involution_types.lock().expect("oracle cache poisoned").get(&half) {
            return Ok(t.clone());
        }
        let omega = Permutation::long_cycle(2 * half);
        let mut table = BTreeMap::new();
        let involutions = fixed_point_free_involutions(half);
        meter.add(involutions.len() as u64)?;
        for pi in involutions {
            *table.entry(compose(&pi, &omega)?.cycle_type()).or_insert(0u64) += 1;
        }
        let table = Arc::new(table);
        self.involution_types.lock().expect("oracle cache poisoned").insert(half, table.clone());
        Ok(table)
    }

    /// Histogram, indexed by unmarked cycle count, of the tuples `A` of shape
    /// `α` for which a permutation of cycle type `μ` is (weakly or strongly)
    /// `A`-separated.
    fn histogram(&self, kind: Separation, mu: &Partition, alpha: &Composition, meter: &Meter) -> Result<Arc<Vec<u64>>> {
        let key = (kind, mu.clone(), alpha.parts().to_vec());
        if let Some(h) = self.histograms.lock().expect("oracle cache poisoned").get(&key) {
            return Ok(h.clone());
        }
        let sigma = Permutation::block_cycles(mu.parts());
        let (cycle_of, cycles) = sigma.cycle_labels();
        let mut search = TupleSearch::new(&cycle_of, cycles, alpha, kind, meter);
        search.visit(0)?;
        search.ticker.flush()?;
        let h = Arc::new(search.hist);
        self.histograms.lock().expect("oracle cache poisoned").insert(key, h.clone());
        Ok(h)
    }

    fn histograms_for(
        &self,
        kind: Separation,
        types: &[Partition],
        alpha: &Composition,
        meter: &Meter,
    ) -> Result<BTreeMap<Partition, Arc<Vec<u64>>>> {
        self.pool.install(|| {
            types
                .par_iter()
                .map(|mu| Ok((mu.clone(), self.histogram(kind, mu, alpha, meter)?)))
                .collect()
        })
    }

    fn check_sep(&self, lambda: &Partition, alpha: &Composition) -> Result<()> {
        if lambda.is_empty() || alpha.is_empty() {
            return invalid("need a nonempty lambda and alpha");
        }
        if alpha.size() > lambda.size() {
            return invalid(format!("alpha has size {} > n = {}", alpha.size(), lambda.size()));
        }
        self.check_n(lambda.size(), self.budget.max_n, "separation")
    }

    fn separated_total(&self, kind: Separation, lambda: &Partition, alpha: &Composition) -> Result<BigInt> {
        self.check_sep(lambda, alpha)?;
        let meter = Meter::new(&self.budget);
        let pairs = self.type_pairs(lambda.size(), &meter)?;
        let relevant: Vec<(Partition, u64)> = pairs
            .iter()
            .filter(|((pi_type, _), _)| pi_type == lambda)
            .map(|((_, sigma_type), c)| (sigma_type.clone(), *c))
            .collect();
        let types: Vec<Partition> = relevant.iter().map(|(t, _)| t.clone()).collect();
        let hists = self.histograms_for(kind, &types, alpha, &meter)?;
        Ok(relevant
            .iter()
            .map(|(t, c)| BigInt::from(*c) * BigInt::from(hists[t].iter().sum::<u64>()))
            .sum())
    }

    /// `#S^α_λ`: pairs `(π ∈ C_λ, A)` with `π∘ω` `A`-separated.
    pub fn count_s(&self, lambda: &Partition, alpha: &Composition) -> Result<BigInt> {
        self.separated_total(Separation::Weak, lambda, alpha)
    }

    /// Pairs `(π ∈ C_λ, A)` with `π∘ω` strongly `A`-separated: each block
    /// inside one cycle, different blocks in different cycles.
    pub fn strong_count(&self, lambda: &Partition, alpha: &Composition) -> Result<BigInt> {
        self.separated_total(Separation::Strong, lambda, alpha)
    }

    pub fn sep_prob(&self, lambda: &Partition, alpha: &Composition) -> Result<SepResult> {
        let count = self.count_s(lambda, alpha)?;
        let probability = Rational::new(count.clone(), pair_count(lambda, alpha));
        Ok(SepResult::new(Some(count), probability, Method::Oracle))
    }

    /// `#S^α_λ` by checking every pair `(π, A)` separately, with either
    /// product convention.
    pub fn count_s_naive(&self, lambda: &Partition, alpha: &Composition, convention: Convention) -> Result<BigInt> {
        self.check_sep(lambda, alpha)?;
        let n = lambda.size();
        let meter = Meter::new(&self.budget);
        let omega = Permutation::long_cycle(n);
        let total: u64 = (1..=n as u64).product();
        let starts: Vec<u64> = (0..total).step_by(120).collect();
        let count = self.pool.install(|| {
            starts
                .par_iter()
                .map(|&start| -> Result<u64> {
                    let mut ticker = Ticker::new(&meter);
                    let mut separated = 0u64;
                    for pi in permutations_range(n, start, 120.min(total - start))? {
                        ticker.tick()?;
                        if &pi.cycle_type() != lambda {
                            continue;
                        }
                        let sigma = match convention {
                            Convention::PermFirst => compose(&pi, &omega)?,
                            Convention::CycleFirst => compose(&omega, &pi)?,
                        };
                        let (cycle_of, cycles) = sigma.cycle_labels();
                        let mut owner = vec![0usize; cycles];
                        for_each_subset_labels(n, alpha, |labels| {
                            owner.iter_mut().for_each(|o| *o = 0);
                            let ok = labels.iter().zip(&cycle_of).all(|(&label, &c)| {
                                if label == 0 {
                                    return true;
                                }
                                if owner[c] == 0 {
                                    owner[c] = label;
                                }
                                owner[c] == label
                            });
                            separated += ok as u64;
                        });
                    }
                    ticker.flush()?;
                    Ok(separated)
                })
                .try_reduce(|| 0, |a, b| Ok(a + b))
        })?;
        Ok(BigInt::from(count))
    }

    /// `#T^α_γ(r)`: quadruples `(π, A, c_1, c_2)` with `π ∈ S_n`, `c_1` a
    /// cycle coloring of `π` with `γ_i` elements of color `i`, and `c_2` a
    /// cycle coloring of `π∘ω` onto `[k+r]` that gives `A_i` color `i`.
    pub fn count_t(&self, gamma: &Composition, alpha: &Composition, r: usize) -> Result<BigInt> {
        let n = gamma.size();
        if gamma.is_empty() || alpha.is_empty() || alpha.size() > n {
            return invalid(format!("need nonempty gamma, alpha with |alpha| <= |gamma|; got {gamma}, {alpha}"));
        }
        self.check_n(n, self.budget.max_n_colored, "colored")?;
        let meter = Meter::new(&self.budget);
        let pairs = self.type_pairs(n, &meter)?;
        let k = alpha.len();
        let sigma_types: Vec<Partition> = distinct(pairs.keys().map(|(_, s)| s.clone()));
        let hists = self.histograms_for(Separation::Weak, &sigma_types, alpha, &meter)?;
        let mut ticker = Ticker::new(&meter);
        let mut surjections = HashMap::new();
        let mut weights: HashMap<Partition, u128> = HashMap::new();
        for mu in &sigma_types {
            let mut w = 0u128;
            for (uc, &count) in hists[mu].iter().enumerate() {
                if count > 0 {
                    let f = *surjections.entry(uc).or_insert_with(|| covering_colorings(uc, k, r));
                    w += count as u128 * f as u128;
                }
            }
            weights.insert(mu.clone(), w);
        }
        let mut colorings = HashMap::new();
        let mut total = BigInt::from(0);
        for ((pi_type, sigma_type), &mult) in pairs.iter() {
            let c1 = match colorings.get(pi_type) {
                Some(&c) => c,
                None => {
                    let c = count_colorings(pi_type, gamma, &mut ticker)?;
                    colorings.insert(pi_type.clone(), c);
                    c
                }
            };
            total += BigInt::from(mult) * BigInt::from(c1) * BigInt::from(weights[sigma_type]);
        }
        ticker.flush()?;
        Ok(total)
    }

    /// `#B_{γ,δ}`: triples `(π, c_1, c_2)` with `c_1` a cycle coloring of `π`
    /// of profile `γ` and `c_2` one of `π∘ω` of profile `δ`.
    pub fn count_b(&self, gamma: &Composition, delta: &Composition) -> Result<BigInt> {
        let n = gamma.size();
        if gamma.is_empty() || delta.size() != n {
            return invalid(format!("need nonempty gamma, delta of equal size; got {gamma}, {delta}"));
        }
        self.check_n(n, self.budget.max_n_colored, "colored")?;
        let meter = Meter::new(&self.budget);
        let pairs = self.type_pairs(n, &meter)?;
        let mut ticker = Ticker::new(&meter);
        let mut by_gamma = HashMap::new();
        let mut by_delta = HashMap::new();
        let mut total = BigInt::from(0);
        for ((pi_type, sigma_type), &mult) in pairs.iter() {
            if !by_gamma.contains_key(pi_type) {
                by_gamma.insert(pi_type.clone(), count_colorings(pi_type, gamma, &mut ticker)?);
            }
            if !by_delta.contains_key(sigma_type) {
                by_delta.insert(sigma_type.clone(), count_colorings(sigma_type, delta, &mut ticker)?);
            }
            total += BigInt::from(mult) * BigInt::from(by_gamma[pi_type]) * BigInt::from(by_delta[sigma_type]);
        }
        ticker.flush()?;
        Ok(total)
    }

    /// `H^α_N(t) = Σ t^{uc(π, A)}` over fixed-point-free involutions `π` of
    /// `[2N]` and tuples `A` with `π∘ω` `A`-separated, as a polynomial in `t`.
    pub fn h_poly(&self, half: usize, alpha: &Composition) -> Result<Poly> {
        if half == 0 || alpha.size() > 2 * half {
            return invalid(format!("need N >= 1 and |alpha| <= 2N; got N = {half}, alpha = {alpha}"));
        }
        self.check_n(half, self.budget.max_half, "involution")?;
        let meter = Meter::new(&self.budget);
        let types = self.involution_types(half, &meter)?;
        let keys: Vec<Partition> = types.keys().cloned().collect();
        let hists = self.histograms_for(Separation::Weak, &keys, alpha, &meter)?;
        let mut coeffs = vec![BigInt::from(0); 2 * half + 1];
        for (mu, &mult) in types.iter() {
            for (uc, &c) in hists[mu].iter().enumerate() {
                coeffs[uc] += BigInt::from(mult) * BigInt::from(c);
            }
        }
        Ok(Poly::new(coeffs.into_iter().map(Rational::from_integer).collect()))
    }

    /// `#M_γ`: pairs `(π, c)` with `π` a fixed-point-free involution of
    /// `[2N]` and `c` a cycle coloring of `π∘ω` with profile `γ`.
    pub fn count_m(&self, half: usize, gamma: &Composition) -> Result<BigInt> {
        if half == 0 || gamma.size() != 2 * half {
            return invalid(format!("need |gamma| = 2N; got N = {half}, gamma = {gamma}"));
        }
        self.check_n(half, self.budget.max_half, "involution")?;
        let meter = Meter::new(&self.budget);
        let types = self.involution_types(half, &meter)?;
        let mut ticker = Ticker::new(&meter);
        let mut total = BigInt::from(0);
        for (mu, &mult) in types.iter() {
            total += BigInt::from(mult) * BigInt::from(count_colorings(mu, gamma, &mut ticker)?);
        }
        ticker.flush()?;
        Ok(total)
    }

    /// Pairs `(ω ∈ C_λ, ρ)` with `ρ` an `n`-cycle and `ω ∘ ρ = φ`, for `φ`
    /// the block permutation of cycle type `α`.
    pub fn connection_coeff(&self, lambda: &Partition, alpha: &Composition) -> Result<BigInt> {
        if alpha.size() != lambda.size() {
            return invalid(format!("need |alpha| = |lambda|; got {alpha}, {lambda}"));
        }
        self.connection_coeff_for(lambda, &Permutation::block_cycles(alpha.parts()))
    }

    /// As [`Oracle::connection_coeff`] with an explicit target `φ`.
    pub fn connection_coeff_for(&self, lambda: &Partition, phi: &Permutation) -> Result<BigInt> {
        let n = lambda.size();
        if phi.len() != n || n == 0 {
            return invalid(format!("target permutation has size {}, lambda has size {n}", phi.len()));
        }
        self.check_n(n, self.budget.max_n, "connection")?;
        let meter = Meter::new(&self.budget);
        let total: u64 = (1..=n as u64).product();
        let starts: Vec<u64> = (0..total).step_by(720).collect();
        let count = self.pool.install(|| {
            starts
                .par_iter()
                .map(|&start| -> Result<u64> {
                    let count = 720.min(total - start);
                    let mut hits = 0u64;
                    for omega in permutations_range(n, start, count)? {
                        if &omega.cycle_type() != lambda {
                            continue;
                        }
                        let rho = compose(&omega.inverse(), phi)?;
                        hits += (rho.cycle_count() == 1) as u64;
                    }
                    meter.add(count)?;
                    Ok(hits)
                })
                .try_reduce(|| 0, |a, b| Ok(a + b))
        })?;
        Ok(BigInt::from(count))
    }
}

fn distinct(items: impl Iterator<Item = Partition>) -> Vec<Partition> {
    let mut v: Vec<Partition> = items.collect();
    v.sort();
    v.dedup();
    v
}

/// Depth-first walk over label arrays (0 = unmarked, `i` = block `i`),
/// pruning as soon as a cycle meets two blocks.
struct TupleSearch<'m, 'a> {
    cycle_of: &'m [usize],
    kind: Separation,
    remaining: Vec<usize>,
    owner: Vec<usize>,
    block_cycle: Vec<usize>,
    hist: Vec<u64>,
    ticker: Ticker<'m, 'a>,
}

const UNSET: usize = usize::MAX;

impl<'m, 'a> TupleSearch<'m, 'a> {
    fn new(cycle_of: &'m [usize], cycles: usize, alpha: &Composition, kind: Separation, meter: &'m Meter<'a>) -> Self {
        let n = cycle_of.len();
        let mut remaining = vec![n - alpha.size()];
        remaining.extend_from_slice(alpha.parts());
        TupleSearch {
            cycle_of,
            kind,
            remaining,
            owner: vec![0; cycles],
            block_cycle: vec![UNSET; alpha.len() + 1],
            hist: vec![0; cycles + 1],
            ticker: Ticker::new(meter),
        }
    }

    fn visit(&mut self, x: usize) -> Result<()> {
        if x == self.cycle_of.len() {
            let uc = self.owner.iter().filter(|&&o| o == 0).count();
            self.hist[uc] += 1;
            return self.ticker.tick();
        }
        let c = self.cycle_of[x];
        if self.remaining[0] > 0 {
            self.remaining[0] -= 1;
            self.visit(x + 1)?;
            self.remaining[0] += 1;
        }
        for i in 1..self.remaining.len() {
            if self.remaining[i] == 0 || (self.owner[c] != 0 && self.owner[c] != i) {
                continue;
            }
            if self.kind == Separation::Strong && self.block_cycle[i] != UNSET && self.block_cycle[i] != c {
                continue;
            }
            let (prev_owner, prev_cycle) = (self.owner[c], self.block_cycle[i]);
            self.remaining[i] -= 1;
            self.owner[c] = i;
            self.block_cycle[i] = c;
            self.visit(x + 1)?;
            self.remaining[i] += 1;
            self.owner[c] = prev_owner;
            self.block_cycle[i] = prev_cycle;
        }
        Ok(())
    }
}

/// Cycle colorings of a permutation of cycle type `mu` with `gamma_i`
/// elements of color `i`, by assigning colors cycle by cycle.
fn count_colorings(mu: &Partition, gamma: &Composition, ticker: &mut Ticker) -> Result<u64> {
    fn rec(cycles: &[usize], room: &mut [usize], ticker: &mut Ticker) -> Result<u64> {
        let Some((&len, rest)) = cycles.split_first() else {
            ticker.tick()?;
            return Ok(room.iter().all(|&r| r == 0) as u64);
        };
        let mut total = 0;
        for color in 0..room.len() {
            if room[color] >= len {
                room[color] -= len;
                total += rec(rest, room, ticker)?;
                room[color] += len;
            }
        }
        Ok(total)
    }
    if mu.size() != gamma.size() {
        return Ok(0);
    }
    let mut room = gamma.parts().to_vec();
    rec(mu.parts(), &mut room, ticker)
}

/// Maps from `uc` unmarked cycles to `[k + r]` hitting every color in
/// `k+1 ..= k+r`, by listing all `(k+r)^uc` maps.
fn covering_colorings(uc: usize, k: usize, r: usize) -> u64 {
    let colors = k + r;
    let maps = (colors as u64).pow(uc as u32);
    (0..maps)
        .filter(|&code| {
            let mut hit = vec![false; r];
            let mut rest = code;
            for _ in 0..uc {
                let color = (rest % colors as u64) as usize;
                rest /= colors as u64;
                if color >= k {
                    hit[color - k] = true;
                }
            }
            hit.iter().all(|&h| h)
        })
        .count() as u64
}
