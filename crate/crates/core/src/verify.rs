//! Cross-checks between the closed forms and the oracles.
//!
//! Each `check_*` function walks a family of instances and returns one
//! [`CheckLine`]. A formula error other than a budget overrun counts as a
//! mismatch; budget overruns abort the whole run. Output never depends on
//! timing or thread count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{factorial, multinomial, odd_double_factorial, rat, ratio, stirling_unsigned, Rational};
use crate::error::{Error, Result};
use crate::formulas::{
    count_b, count_m, count_s, count_s_all, count_t, g_table, h_poly, h_poly_unshifted, hz_poly, lift_fixed_points,
    lift_fixed_points_probability, marked_composition_count, marked_composition_direct_sum, ncycle_singletons,
    p_cycles_count, pair_count, sep_prob, sep_prob_involution, sep_prob_ncycle, sep_prob_p_cycles,
    verify_change_summation, verify_simplify_p,
};
use crate::oracle::Oracle;
use crate::partition::{all_compositions, compositions, partitions, Composition, Partition};
use crate::strong::{connection_coefficient, strong_sep_probs, weak_sep_probs, RefinementMatrix};
use crate::symfunc::{coeff_sum_over_length, lemma_involution_coeff};

const MAX_REPORTED: usize = 5;

/// Outcome of one family of checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub name: String,
    pub cases: u64,
    pub mismatches: u64,
    pub examples: Vec<String>,
}

impl CheckLine {
    fn new(name: impl Into<String>) -> Self {
        CheckLine { name: name.into(), cases: 0, mismatches: 0, examples: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.mismatches += 1;
            if self.examples.len() < MAX_REPORTED {
                self.examples.push(describe());
            }
        }
    }

    fn expect_eq<T: PartialEq + fmt::Display>(&mut self, what: impl fmt::Display, got: T, want: T) {
        let ok = got == want;
        self.record(ok, || format!("{what}: {got} != {want}"));
    }

    /// Turns a non-budget error into a recorded mismatch.
    fn absorb<T>(&mut self, what: impl fmt::Display, value: Result<T>) -> Result<Option<T>> {
        match value {
            Ok(v) => Ok(Some(v)),
            Err(e @ Error::BudgetExceeded(_)) => Err(e),
            Err(e) => {
                self.record(false, || format!("{what}: {e}"));
                Ok(None)
            }
        }
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({} cases", self.name, self.cases)?;
        if self.mismatches > 0 {
            write!(f, ", {} mismatches", self.mismatches)?;
        }
        write!(f, ")")?;
        for e in &self.examples {
            write!(f, "\n    {e}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub lines: Vec<CheckLine>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(CheckLine::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        let failed = self.lines.iter().filter(|l| !l.passed()).count();
        write!(f, "{} checks, {} failed", self.lines.len(), failed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Symmetry,
    Formulas,
    Maps,
    Strong,
    Lemmas,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "symmetry" => Suite::Symmetry,
            "formulas" => Suite::Formulas,
            "maps" => Suite::Maps,
            "strong" => Suite::Strong,
            "lemmas" => Suite::Lemmas,
            _ => return Err(Error::InvalidInput(format!("unknown suite {s:?}"))),
        })
    }
}

fn ones(k: usize) -> Composition {
    Composition::ones(k)
}

/// Two uniform `n`-cycles with singleton blocks: the closed form against the
/// two-branch formula for `lo ≤ n ≤ hi`, `2 ≤ k ≤ min(n, max_k)`, and
/// against the oracle for `n ≤ oracle_n`.
pub fn check_ncycle(lo: usize, hi: usize, max_k: usize, oracle_n: usize, oracle: &Oracle) -> Result<CheckLine> {
    let mut line = CheckLine::new("two n-cycles, singleton blocks");
    for n in lo..=hi {
        for k in 2..=n.min(max_k) {
            let what = format!("n={n} k={k}");
            let Some(closed) = line.absorb(&what, sep_prob_ncycle(n, &ones(k)))? else { continue };
            let Some(branch) = line.absorb(&what, ncycle_singletons(n, k))? else { continue };
            line.expect_eq(&what, closed.probability.clone(), branch);
            if n <= oracle_n {
                let lambda = Partition::new(vec![n])?;
                let o = oracle.sep_prob(&lambda, &ones(k))?;
                line.expect_eq(format!("{what} oracle"), closed.probability, o.probability);
            }
        }
    }
    Ok(line)
}

/// `#S^α_λ` by oracle is the same for all `α` of equal size and length, and
/// equals the generating-function value.
pub fn check_symmetry(max_n: usize, oracle: &Oracle) -> Result<CheckLine> {
    let mut line = CheckLine::new("symmetry in alpha, oracle and formula");
    for n in 1..=max_n {
        let lambdas = partitions(n);
        for m in 1..=n {
            for k in 1..=m {
                let family = compositions(m, k);
                for lambda in &lambdas {
                    let mut reference: Option<BigInt> = None;
                    for alpha in &family {
                        let what = format!("lambda={lambda} alpha={alpha}");
                        let o = oracle.count_s(lambda, alpha)?;
                        let reference = reference.get_or_insert_with(|| o.clone());
                        line.expect_eq(format!("{what} vs first of its family"), o.clone(), reference.clone());
                        if let Some(f) = line.absorb(&what, count_s(lambda, alpha))? {
                            line.expect_eq(&what, o, f);
                        }
                    }
                }
            }
        }
    }
    Ok(line)
}

/// `#T^α_γ(r)` by oracle against the closed form, all `γ ⊢ n`, `α`, `r ≤ n - m`.
pub fn check_colored_t(max_n: usize, oracle: &Oracle) -> Result<CheckLine> {
    let mut line = CheckLine::new("colored separated factorizations T");
    for n in 1..=max_n {
        for gamma in partitions(n) {
            let gamma_c = gamma.as_composition();
            for m in 1..=n {
                for alpha in all_compositions(m) {
                    for r in 0..=n - m {
                        let o = oracle.count_t(&gamma_c, &alpha, r)?;
                        let f = count_t(n, gamma.len(), m, alpha.len(), r);
                        line.expect_eq(format!("gamma={gamma} alpha={alpha} r={r}"), o, f);
                    }
                }
            }
        }
    }
    Ok(line)
}

/// `#B_{γ,δ}` by oracle against the closed form for all composition pairs.
pub fn check_colored_b(max_n: usize, oracle: &Oracle) -> Result<CheckLine> {
    let mut line = CheckLine::new("colored factorizations B");
    for n in 1..=max_n {
        let comps = all_compositions(n);
        for gamma in &comps {
            for delta in &comps {
                let o = oracle.count_b(gamma, delta)?;
                line.expect_eq(format!("gamma={gamma} delta={delta}"), o, count_b(n, gamma.len(), delta.len()));
            }
        }
    }
    Ok(line)
}

/// Permutations with `p` cycles: the probability formula against the
/// summed oracle counts over `λ` of length `p`.
pub fn check_p_cycles(max_n: usize, oracle: &Oracle) -> Result<CheckLine> {
    let mut line = CheckLine::new("p cycles, formula against summed oracle counts");
    for n in 1..=max_n {
        let lambdas = partitions(n);
        for m in 1..=n {
            for alpha in all_compositions(m) {
                for p in 1..=n {
                    let what = format!("n={n} p={p} alpha={alpha}");
                    let Some(f) = line.absorb(&what, sep_prob_p_cycles(n, p, &alpha))? else { continue };
                    let mut total = BigInt::zero();
                    for lambda in lambdas.iter().filter(|l| l.len() == p) {
                        total += oracle.count_s(lambda, &alpha)?;
                    }
                    let denom = multinomial(n, alpha.parts()) * stirling_unsigned(n, p);
                    line.expect_eq(&what, f.probability, Rational::new(total, denom));
                }
            }
        }
    }
    Ok(line)
}

/// Formula-only consistency: the long-cycle forms agree, the counts summed
/// over `λ` of length `p` match the cycle-count formula, `#S` values are
/// probabilities, and the table ignores `α` beyond `(m, k)`.
pub fn check_consistency(max_n: usize) -> Result<CheckLine> {
    let mut line = CheckLine::new("closed forms mutually consistent");
    for n in 1..=max_n {
        let long = Partition::new(vec![n])?;
        for m in 1..=n {
            let mut by_shape: BTreeMap<usize, Vec<(Partition, BigInt)>> = BTreeMap::new();
            for alpha in all_compositions(m) {
                let what = format!("n={n} alpha={alpha}");
                let Some(all) = line.absorb(&what, count_s_all(n, &alpha))? else { continue };
                if let Some(prev) = by_shape.get(&alpha.len()) {
                    line.record(prev == &all, || format!("{what}: table depends on more than (m, k)"));
                } else {
                    by_shape.insert(alpha.len(), all.clone());
                }
                for (lambda, c) in &all {
                    let p = Rational::new(c.clone(), pair_count(lambda, &alpha));
                    line.record(p >= Rational::zero() && p <= Rational::one(), || format!("{what} lambda={lambda}: {p}"));
                }
                for p in 1..=n {
                    let sum: BigInt = all.iter().filter(|(l, _)| l.len() == p).map(|(_, c)| c).sum();
                    if let Some(f) = line.absorb(&what, p_cycles_count(n, p, &alpha))? {
                        line.expect_eq(format!("{what} p={p} aggregate"), sum, f);
                    }
                }
                let via_table = line.absorb(&what, sep_prob(&long, &alpha))?;
                let via_ncycle = line.absorb(&what, sep_prob_ncycle(n, &alpha))?;
                let via_p = line.absorb(&what, sep_prob_p_cycles(n, 1, &alpha))?;
                if let (Some(a), Some(b), Some(c)) = (via_table, via_ncycle, via_p) {
                    line.expect_eq(format!("{what} long cycle vs closed form"), a.probability.clone(), b.probability);
                    line.expect_eq(format!("{what} long cycle vs p=1"), a.probability, c.probability);
                }
            }
        }
    }
    Ok(line)
}

/// Involutions: the vertex polynomial, its value at `t = 1`, and the
/// probability against the oracle; the alternative closed form differs by
/// exactly `(2N - m)!`.
pub fn check_involutions(max_half: usize, oracle: &Oracle) -> Result<CheckLine> {
    let mut line = CheckLine::new("fixed-point-free involutions");
    for half in 1..=max_half {
        for m in 0..=2 * half {
            for alpha in all_compositions(m) {
                let what = format!("N={half} alpha={alpha}");
                let o = oracle.h_poly(half, &alpha)?;
                let Some(h) = line.absorb(&what, h_poly_unshifted(half, &alpha))? else { continue };
                line.expect_eq(format!("{what} polynomial"), h.to_monomial(), o.clone());
                if alpha.is_empty() {
                    continue;
                }
                let pairs = o.eval(&Rational::one());
                line.expect_eq(format!("{what} H(1)"), h.eval(1), pairs.clone());
                if let Some(shifted) = line.absorb(&what, h_poly(half, &alpha))? {
                    line.expect_eq(format!("{what} shifted at 1-k"), shifted.eval(1 - alpha.len() as i64), pairs.clone());
                }
                let Some(res) = line.absorb(&what, sep_prob_involution(half, &alpha))? else { continue };
                let total = rat(multinomial(2 * half, alpha.parts()) * odd_double_factorial(half));
                line.expect_eq(format!("{what} probability"), res.result.probability.clone(), pairs / total);
                line.expect_eq(
                    format!("{what} alternative form ratio"),
                    res.printed * rat(factorial(2 * half - m)),
                    res.result.probability,
                );
            }
        }
    }
    if max_half >= 2 {
        let alpha = ones(2);
        if let Some(res) = line.absorb("N=2 alpha=1,1", sep_prob_involution(2, &alpha))? {
            line.expect_eq("N=2 alpha=1,1 value", res.result.probability, ratio(5, 9));
            line.expect_eq("N=2 alpha=1,1 alternative form", res.printed, ratio(5, 18));
        }
    }
    Ok(line)
}

/// One-face maps counted by vertices: closed form against the oracle.
pub fn check_harer_zagier(max_half: usize, oracle: &Oracle) -> Result<CheckLine> {
    let mut line = CheckLine::new("one-face maps by vertices");
    for half in 1..=max_half {
        let o = oracle.h_poly(half, &Composition::empty())?;
        if let Some(h) = line.absorb(format!("N={half}"), hz_poly(half))? {
            line.record(h.has_nonnegative_integer_coeffs(), || format!("N={half}: coefficients {h}"));
            line.expect_eq(format!("N={half}"), h.to_monomial(), o);
        }
    }
    Ok(line)
}

/// `#M_γ` by oracle against the closed form, all compositions `γ` of `2N`.
pub fn check_refined_maps(max_half: usize, oracle: &Oracle) -> Result<CheckLine> {
    let mut line = CheckLine::new("colored one-face maps M");
    for half in 1..=max_half {
        for gamma in all_compositions(2 * half) {
            let what = format!("N={half} gamma={gamma}");
            let o = oracle.count_m(half, &gamma)?;
            if let Some(f) = line.absorb(&what, count_m(half, gamma.len()))? {
                line.expect_eq(&what, o, f);
            }
        }
    }
    Ok(line)
}

/// Adding `r ≤ max_r` fixed points to `λ` with parts at least 2 and
/// `|λ| ≤ max_n`: the lift formula against the generating function, and
/// against the oracle when `n + r ≤ oracle_n`.
pub fn check_lift(max_n: usize, max_r: usize, oracle_n: usize, oracle: &Oracle) -> Result<CheckLine> {
    let mut line = CheckLine::new("adding fixed points");
    for n in 2..=max_n {
        for lambda in partitions(n).into_iter().filter(|l| !l.parts().contains(&1)) {
            for r in 0..=max_r {
                let lifted = lambda.with_fixed_points(r);
                for m in 1..=n + r {
                    for alpha in all_compositions(m) {
                        let what = format!("lambda={lambda} r={r} alpha={alpha}");
                        let Some(lift) = line.absorb(&what, lift_fixed_points(&lambda, r, &alpha))? else { continue };
                        if let Some(direct) = line.absorb(&what, count_s(&lifted, &alpha))? {
                            line.expect_eq(&what, lift.clone(), direct);
                        }
                        line.absorb(format!("{what} probability form"), lift_fixed_points_probability(&lambda, r, &alpha))?;
                        if n + r <= oracle_n {
                            line.expect_eq(format!("{what} oracle"), lift, oracle.count_s(&lifted, &alpha)?);
                        }
                    }
                }
            }
        }
    }
    Ok(line)
}

/// Strong separation and connection coefficients against their oracles,
/// the refinement round trip, and invariance of `K` under reordering `α`.
pub fn check_strong(max_n: usize, oracle: &Oracle) -> Result<CheckLine> {
    let mut line = CheckLine::new("strong separation and connection coefficients");
    for n in 1..=max_n {
        for lambda in partitions(n) {
            for m in 1..=n {
                let what = format!("lambda={lambda} m={m}");
                let Some(strong) = line.absorb(&what, strong_sep_probs(&lambda, m))? else { continue };
                let matrix = RefinementMatrix::new(m)?;
                if let Some(weak) = line.absorb(&what, weak_sep_probs(&lambda, m))? {
                    line.record(matrix.apply(&strong) == weak, || format!("{what}: round trip"));
                }
                for (beta, p) in &strong {
                    let count = oracle.strong_count(&lambda, beta)?;
                    let o = Rational::new(count, pair_count(&lambda, beta));
                    line.expect_eq(format!("lambda={lambda} beta={beta}"), p.clone(), o);
                }
            }
            for alpha in all_compositions(n) {
                let what = format!("K lambda={lambda} alpha={alpha}");
                let Some(k) = line.absorb(&what, connection_coefficient(&lambda, &alpha))? else { continue };
                line.expect_eq(&what, k.clone(), oracle.connection_coeff(&lambda, &alpha)?);
                let sorted = alpha.sorted().as_composition();
                if let Some(k2) = line.absorb(&what, connection_coefficient(&lambda, &sorted))? {
                    line.expect_eq(format!("{what} reordered"), k, k2);
                }
            }
        }
    }
    Ok(line)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LemmaBounds {
    pub involution_half: usize,
    pub length_n: usize,
    pub simplify_a: usize,
    pub change_ab: usize,
    pub marked_n: usize,
}

/// The auxiliary identities, each as an exact equality.
pub fn check_lemmas(bounds: LemmaBounds) -> Result<CheckLine> {
    let mut line = CheckLine::new("auxiliary identities");
    for half in 1..=bounds.involution_half {
        for s in 0..=half {
            line.absorb(format!("involution coefficient N={half} s={s}"), lemma_involution_coeff(half, s))?;
            line.cases += 1;
        }
    }
    for n in 1..=bounds.length_n {
        for p in 1..=n {
            for len in 1..=n {
                line.absorb(format!("length sum n={n} p={p} l={len}"), coeff_sum_over_length(n, p, len))?;
                line.cases += 1;
            }
        }
    }
    for a in 0..=bounds.simplify_a {
        for p in 0..=a + 1 {
            line.record(verify_simplify_p(a, p), || format!("stirling sum a={a} p={p}"));
        }
    }
    for a in 0..=bounds.change_ab {
        for b in 0..=bounds.change_ab {
            line.record(verify_change_summation(a, b), || format!("polynomial identity a={a} b={b}"));
        }
    }
    for n in 1..=bounds.marked_n {
        for m in 0..=n {
            for alpha in all_compositions(m) {
                for r in 0..=n - m {
                    line.expect_eq(
                        format!("marked compositions n={n} alpha={alpha} r={r}"),
                        marked_composition_direct_sum(n, &alpha, r),
                        marked_composition_count(n, m, alpha.len(), r),
                    );
                }
            }
        }
    }
    for n in 1..=bounds.marked_n {
        for m in 0..=n {
            for k in (if m == 0 { 0 } else { 1 })..=m {
                let what = format!("table n={n} m={m} k={k}");
                if let Some(t) = line.absorb(&what, g_table(n, m, k))? {
                    let ok = t.entries().all(|(lambda, r, c)| r <= n - m && lambda.len() + k + r <= n + 1 && c.is_integer());
                    line.record(ok, || format!("{what}: entry outside support"));
                }
            }
        }
    }
    Ok(line)
}

/// Runs a suite with every bound derived from `max_n`. Oracle checks are
/// limited to what the oracle budget admits.
pub fn run_suite(suite: Suite, max_n: usize, oracle: &Oracle) -> Result<VerifyReport> {
    let budget = oracle.budget().clone();
    let sep_n = max_n.min(budget.max_n);
    let colored_n = max_n.min(budget.max_n_colored);
    let half = (max_n / 2).min(budget.max_half);
    let want = |s: Suite| suite == Suite::All || suite == s;
    let mut report = VerifyReport::default();
    if want(Suite::Symmetry) {
        report.lines.push(check_symmetry(sep_n, oracle)?);
    }
    if want(Suite::Formulas) {
        report.lines.push(check_ncycle(2, max_n, 5, sep_n, oracle)?);
        report.lines.push(check_consistency(max_n)?);
        report.lines.push(check_colored_t(colored_n, oracle)?);
        report.lines.push(check_colored_b(colored_n, oracle)?);
        report.lines.push(check_p_cycles(sep_n, oracle)?);
        report.lines.push(check_lift(max_n, 3, sep_n, oracle)?);
    }
    if want(Suite::Maps) {
        report.lines.push(check_involutions(half, oracle)?);
        report.lines.push(check_harer_zagier(half, oracle)?);
        report.lines.push(check_refined_maps(half, oracle)?);
    }
    if want(Suite::Strong) {
        report.lines.push(check_strong(sep_n, oracle)?);
    }
    if want(Suite::Lemmas) {
        report.lines.push(check_lemmas(LemmaBounds {
            involution_half: (max_n / 2).max(1),
            length_n: max_n,
            simplify_a: 2 * max_n,
            change_ab: 2 * max_n,
            marked_n: max_n,
        })?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::OracleBudget;

    #[test]
    fn small_suite_passes() {
        let oracle = Oracle::new(OracleBudget::default(), Some(2)).unwrap();
        let report = run_suite(Suite::All, 4, &oracle).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.lines.len(), 12);
        assert!(report.to_string().ends_with("12 checks, 0 failed"));
    }

    #[test]
    fn mismatches_are_reported() {
        let mut line = CheckLine::new("demo");
        line.expect_eq("one", 1, 1);
        line.expect_eq("two", 2, 3);
        assert!(!line.passed());
        assert_eq!(line.to_string(), "FAIL demo (2 cases, 1 mismatches)\n    two: 2 != 3");
    }

    #[test]
    fn suites_parse() {
        assert_eq!("maps".parse::<Suite>().unwrap(), Suite::Maps);
        assert!("everything".parse::<Suite>().is_err());
    }
}
