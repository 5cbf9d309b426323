//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::{Command, ExitCode};

use sepprob::oracle::{Oracle, OracleBudget};
use sepprob::verify::{self, CheckLine, LemmaBounds};
use sepprob::Result;

fn report(id: u32, title: &str, outcome: Result<CheckLine>) -> bool {
    match outcome {
        Ok(line) => {
            let status = if line.passed() { "PASS" } else { "FAIL" };
            println!("{status} criterion {id:>2}: {title} ({} cases, {} mismatches)", line.cases, line.mismatches);
            for e in &line.examples {
                println!("    {e}");
            }
            line.passed()
        }
        Err(e) => {
            println!("FAIL criterion {id:>2}: {title} ({e})");
            false
        }
    }
}

fn verify_output(threads: usize) -> std::io::Result<(i32, Vec<u8>)> {
    let out = Command::new(env!("CARGO_BIN_EXE_sepprob"))
        .args(["verify", "--suite", "all", "--max-n", "6", "--threads", &threads.to_string()])
        .output()?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn determinism() -> bool {
    let title = "verify --suite all --max-n 6 is byte-identical at 1 and 8 threads";
    match (verify_output(1), verify_output(8)) {
        (Ok((c1, o1)), Ok((c8, o8))) => {
            let ok = c1 == 0 && c8 == 0 && o1 == o8 && !o1.is_empty();
            let status = if ok { "PASS" } else { "FAIL" };
            println!("{status} criterion 12: {title} (exit {c1}/{c8}, {} bytes)", o1.len());
            ok
        }
        (a, b) => {
            println!("FAIL criterion 12: {title} ({:?} / {:?})", a.err(), b.err());
            false
        }
    }
}

fn main() -> ExitCode {
    let oracle = Oracle::new(OracleBudget::default(), None).expect("oracle");
    let o = &oracle;
    let results = [
        report(1, "two n-cycles, 4 <= n <= 9, k <= 5; oracle for n <= 7", verify::check_ncycle(4, 9, 5, 7, o)),
        report(2, "symmetry in alpha for n <= 7", verify::check_symmetry(7, o)),
        report(3, "colored separated factorizations for n <= 5", verify::check_colored_t(5, o)),
        report(4, "colored factorizations for n <= 6", verify::check_colored_b(6, o)),
        report(5, "p cycles for n <= 7", verify::check_p_cycles(7, o)),
        report(6, "involutions for N <= 4", verify::check_involutions(4, o)),
        report(7, "adding r <= 3 fixed points, n <= 6; oracle for n + r <= 8", verify::check_lift(6, 3, 8, o)),
        report(8, "one-face maps by vertices for N <= 5", verify::check_harer_zagier(5, o)),
        report(9, "colored one-face maps for N <= 4", verify::check_refined_maps(4, o)),
        report(
            10,
            "auxiliary identities",
            verify::check_lemmas(LemmaBounds {
                involution_half: 5,
                length_n: 8,
                simplify_a: 12,
                change_ab: 12,
                marked_n: 8,
            }),
        ),
        report(11, "strong separation and connection coefficients for n <= 6", verify::check_strong(6, o)),
        determinism(),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("{} criteria, {failed} failed", results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
