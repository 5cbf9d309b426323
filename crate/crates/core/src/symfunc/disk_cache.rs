//! Optional on-disk cache for the `m → p` matrices.
//!
//! Text format, one file per degree:
//!
//! ```text
//! sepprob-transition v1
//! degree 4
//! entries 11
//! S 4 4 1
//! S 3,1 4 -1
//! ...
//! end
//! ```
//!
//! Each `S` line is a nonzero entry `[p_λ] m_μ` as `S <λ> <μ> <p/q>`. The
//! `p → m` side is recomputed on load. Any file that fails to parse or
//! validate is ignored and rewritten.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::arith::{format_rational, parse_rational, Rational};
use crate::partition::Partition;

use super::transition::{cached, insert_cached, power_to_monomial, Direction, TransitionMatrix, TransitionPair};

const MAGIC: &str = "sepprob-transition v1";

pub fn cache_file_name(n: usize) -> String {
    format!("transition-v1-n{n}.txt")
}

fn cache_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(cache_file_name(n))
}

pub fn store_cached(dir: &Path, pair: &TransitionPair) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let m_to_p = &pair.m_to_p;
    let mut lines = Vec::new();
    for (i, lambda) in m_to_p.index().iter().enumerate() {
        for (j, mu) in m_to_p.index().iter().enumerate() {
            let x = m_to_p.entry_at(i, j);
            if !x.is_zero() {
                lines.push(format!("S {lambda} {mu} {}", format_rational(x)));
            }
        }
    }
    let final_path = cache_path(dir, m_to_p.degree());
    let tmp = final_path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        writeln!(f, "{MAGIC}")?;
        writeln!(f, "degree {}", m_to_p.degree())?;
        writeln!(f, "entries {}", lines.len())?;
        for line in &lines {
            writeln!(f, "{line}")?;
        }
        writeln!(f, "end")?;
    }
    fs::rename(tmp, final_path)
}

/// Reads the cached pair for degree `n`, or `None` when the file is missing
/// or does not validate.
pub fn load_cached(dir: &Path, n: usize) -> Option<TransitionPair> {
    let text = fs::read_to_string(cache_path(dir, n)).ok()?;
    let mut lines = text.lines();
    if lines.next()? != MAGIC {
        return None;
    }
    let degree: usize = lines.next()?.strip_prefix("degree ")?.parse().ok()?;
    if degree != n {
        return None;
    }
    let expected: usize = lines.next()?.strip_prefix("entries ")?.parse().ok()?;

    let p_to_m = power_to_monomial(n);
    let index = p_to_m.index().to_vec();
    let d = index.len();
    let mut entries = vec![vec![Rational::zero(); d]; d];
    let mut seen = 0;
    let mut ended = false;
    for line in lines {
        if line == "end" {
            ended = true;
            break;
        }
        let mut fields = line.split(' ');
        if fields.next()? != "S" {
            return None;
        }
        let lambda: Partition = fields.next()?.parse().ok()?;
        let mu: Partition = fields.next()?.parse().ok()?;
        let value = parse_rational(fields.next()?)?;
        if fields.next().is_some() {
            return None;
        }
        let i = p_to_m.position(&lambda)?;
        let j = p_to_m.position(&mu)?;
        entries[i][j] = value;
        seen += 1;
    }
    if !ended || seen != expected {
        return None;
    }
    // Cheap consistency check: the diagonal of S must invert the diagonal of R.
    let diagonal_ok = (0..d).all(|i| (p_to_m.entry_at(i, i) * &entries[i][i]).is_one());
    if !diagonal_ok {
        return None;
    }
    let m_to_p = TransitionMatrix::from_entries(n, Direction::MonomialToPower, index, entries);
    Some(TransitionPair { p_to_m, m_to_p })
}

/// Like [`super::transition_matrices`], but consults and refreshes an on-disk
/// cache in `dir`. Write failures are ignored.
pub fn transition_matrices_with_disk(n: usize, dir: Option<&Path>) -> Arc<TransitionPair> {
    if let Some(pair) = cached(n) {
        return pair;
    }
    match dir {
        Some(dir) => insert_cached(n, load_or_rebuild(dir, n)),
        None => super::transition_matrices(n),
    }
}

fn load_or_rebuild(dir: &Path, n: usize) -> TransitionPair {
    if let Some(pair) = load_cached(dir, n) {
        return pair;
    }
    let pair = TransitionPair::compute(n).expect("p->m matrix is triangular");
    let _ = store_cached(dir, &pair);
    pair
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        for n in 1..=7 {
            let pair = TransitionPair::compute(n).unwrap();
            store_cached(dir.path(), &pair).unwrap();
            let loaded = load_cached(dir.path(), n).expect("valid cache file");
            assert_eq!(loaded, pair);
        }
    }

    #[test]
    fn corrupted_files_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let pair = TransitionPair::compute(5).unwrap();
        store_cached(dir.path(), &pair).unwrap();
        let path = dir.path().join(cache_file_name(5));
        let text = fs::read_to_string(&path).unwrap();

        let truncated: String = text.lines().take(6).map(|l| format!("{l}\n")).collect();
        fs::write(&path, truncated).unwrap();
        assert!(load_cached(dir.path(), 5).is_none());

        fs::write(&path, text.replace("S 5 5 1", "S 5 5 2")).unwrap();
        assert!(load_cached(dir.path(), 5).is_none());

        fs::write(&path, "garbage").unwrap();
        assert!(load_cached(dir.path(), 5).is_none());
        assert!(load_cached(dir.path(), 6).is_none());

        // A bad file is rebuilt and rewritten.
        assert_eq!(load_or_rebuild(dir.path(), 5), pair);
        assert_eq!(load_cached(dir.path(), 5), Some(pair));
    }
}
