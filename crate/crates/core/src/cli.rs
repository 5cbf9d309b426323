//! Command-line front end. [`run`] parses arguments, writes records to the
//! given sinks and returns the process exit code.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{format_decimal, format_rational, Rational};
use crate::error::{Error, Result};
use crate::formulas::{
    count_s_all, g_table, hz_poly, lift_fixed_points_probability, pair_count, sep_prob, sep_prob_involution,
    sep_prob_ncycle, sep_prob_p_cycles, Method, SepResult,
};
use crate::oracle::{Oracle, OracleBudget};
use crate::partition::{all_compositions, parse_parts, partitions, Composition, Partition};
use crate::strong::{connection_coefficient, strong_sep_probs};
use crate::symfunc::transition_matrices_with_disk;
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Directory for the transition-matrix cache, if set.
pub const CACHE_DIR_ENV: &str = "SEPPROB_CACHE_DIR";

const FLOAT_DIGITS: usize = 15;

#[derive(Parser, Debug)]
#[command(name = "sepprob", version, about = "Exact separation probabilities for products of random permutations")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Add a decimal approximation of each probability (display only).
    #[arg(long, global = true)]
    float: bool,
    /// Worker threads for the enumerators (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest n the separation enumerators accept.
    #[arg(long, global = true, default_value_t = 8)]
    oracle_max_n: usize,
    /// Stop any enumeration after this many visited objects.
    #[arg(long, global = true)]
    max_objects: Option<u64>,
    /// Stop any enumeration after this many seconds.
    #[arg(long, global = true)]
    max_seconds: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodChoice {
    Formula,
    Oracle,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlphaSet {
    /// Every composition of every m ≤ n.
    All,
    /// Weakly decreasing compositions only.
    Partitions,
    /// The compositions given with --list.
    List,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Separation probability for a cycle type and block sizes.
    SepProb {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value_t = MethodChoice::Formula)]
        method: MethodChoice,
    },
    /// Two uniform n-cycles.
    Ncycle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: String,
    },
    /// Uniform permutations with p cycles.
    Pcycles {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        alpha: String,
    },
    /// Fixed-point-free involutions of [2N].
    Involution {
        #[arg(long = "N")]
        half: usize,
        #[arg(long)]
        alpha: String,
    },
    /// Append r fixed points to a cycle type with no fixed points.
    Lift {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        alpha: String,
    },
    /// Strong separation probabilities for every composition of m.
    Strong {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        m: usize,
    },
    /// Factorizations of a permutation of type alpha as (type lambda) ∘ (n-cycle).
    Connection {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        alpha: String,
    },
    /// Coefficients of the generating-function table for (n, m, k).
    Gtable {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
    /// One-face maps with N edges counted by vertices.
    Hz {
        #[arg(long = "N")]
        half: usize,
    },
    /// Cross-check the closed forms against the enumerators.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 7)]
        max_n: usize,
    },
    /// Separation probabilities for every cycle type of size n.
    Table {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = AlphaSet::All)]
        alphas: AlphaSet,
        /// Semicolon-separated compositions, e.g. "1,1;2,1".
        #[arg(long)]
        list: Option<String>,
    },
}

/// One emitted value. Every subcommand uses this shape.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub operation: String,
    pub lambda: Option<String>,
    pub alpha: Option<String>,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub params: BTreeMap<String, String>,
    pub count: Option<String>,
    pub probability: Option<String>,
    pub probability_float: Option<String>,
    pub value: Option<String>,
    pub method: Option<String>,
    pub warnings: Vec<String>,
}

impl OutputRecord {
    fn new(operation: &str) -> Self {
        OutputRecord { operation: operation.to_string(), ..Default::default() }
    }

    fn lambda(mut self, lambda: &Partition) -> Self {
        self.lambda = Some(lambda.to_string());
        self
    }

    fn alpha(mut self, alpha: &Composition) -> Self {
        self.alpha = Some(alpha.to_string());
        self.m = Some(alpha.size());
        self.k = Some(alpha.len());
        self
    }

    fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    fn count(mut self, count: &BigInt) -> Self {
        self.count = Some(count.to_string());
        self
    }

    fn probability(mut self, p: &Rational) -> Self {
        self.probability = Some(format_rational(p));
        self
    }

    fn method(mut self, method: impl ToString) -> Self {
        self.method = Some(method.to_string());
        self
    }

    fn result(self, r: &SepResult) -> Self {
        let out = self.probability(&r.probability).method(r.method);
        match &r.count {
            Some(c) => out.count(c),
            None => out,
        }
    }
}

struct Output {
    records: Vec<OutputRecord>,
    /// Free text shown before the records in text mode.
    text: Vec<String>,
    exit: i32,
}

impl Output {
    fn records(records: Vec<OutputRecord>) -> Self {
        Output { records, text: Vec::new(), exit: EXIT_OK }
    }
}

fn parse_partition(s: &str, notes: &mut Vec<String>) -> Result<Partition> {
    let parts = parse_parts(s)?;
    let lambda = Partition::from_unsorted(parts.clone())?;
    if lambda.parts() != parts.as_slice() {
        notes.push(format!("lambda {s} sorted to {lambda}"));
    }
    Ok(lambda)
}

fn parse_composition(s: &str) -> Result<Composition> {
    s.parse()
}

fn budget(g: &GlobalArgs) -> OracleBudget {
    OracleBudget { max_n: g.oracle_max_n, max_objects: g.max_objects, max_seconds: g.max_seconds, ..Default::default() }
}

fn warm_cache(degrees: impl IntoIterator<Item = usize>) {
    let Some(dir) = std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from) else { return };
    if std::fs::create_dir_all(&dir).is_err() {
        return;
    }
    for n in degrees {
        if n > 0 {
            transition_matrices_with_disk(n, Some(&dir));
        }
    }
}

fn with_notes(mut records: Vec<OutputRecord>, notes: &[String]) -> Vec<OutputRecord> {
    for r in &mut records {
        r.warnings.splice(0..0, notes.iter().cloned());
    }
    records
}

fn execute(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    let mut notes = Vec::new();
    let out = match &cli.command {
        Command::SepProb { lambda, alpha, method } => {
            let lambda = parse_partition(lambda, &mut notes)?;
            let alpha = parse_composition(alpha)?;
            let base = || OutputRecord::new("sep-prob").lambda(&lambda).alpha(&alpha);
            let mut records = Vec::new();
            let mut exit = EXIT_OK;
            let formula = if *method != MethodChoice::Oracle {
                warm_cache([lambda.size()]);
                let r = sep_prob(&lambda, &alpha)?;
                records.push(base().result(&r));
                Some(r)
            } else {
                None
            };
            if *method != MethodChoice::Formula {
                let oracle = Oracle::new(budget(g), g.threads)?;
                let r = oracle.sep_prob(&lambda, &alpha)?;
                let mut rec = base().result(&r);
                if let Some(f) = &formula {
                    if f.probability != r.probability {
                        rec.warnings.push(format!("formula gives {}", format_rational(&f.probability)));
                        exit = EXIT_MISMATCH;
                    }
                }
                records.push(rec);
            }
            Output { exit, ..Output::records(records) }
        }
        Command::Ncycle { n, alpha } => {
            let alpha = parse_composition(alpha)?;
            let r = sep_prob_ncycle(*n, &alpha)?;
            let lambda = Partition::new(vec![*n])?;
            Output::records(vec![OutputRecord::new("ncycle").lambda(&lambda).alpha(&alpha).param("n", n).result(&r)])
        }
        Command::Pcycles { n, p, alpha } => {
            let alpha = parse_composition(alpha)?;
            let r = sep_prob_p_cycles(*n, *p, &alpha)?;
            Output::records(vec![OutputRecord::new("pcycles").alpha(&alpha).param("n", n).param("p", p).result(&r)])
        }
        Command::Involution { half, alpha } => {
            let alpha = parse_composition(alpha)?;
            let res = sep_prob_involution(*half, &alpha)?;
            let lambda = Partition::new(vec![2; *half])?;
            let mut rec = OutputRecord::new("involution")
                .lambda(&lambda)
                .alpha(&alpha)
                .param("N", half)
                .param("alternative_form", format_rational(&res.printed))
                .result(&res.result);
            rec.warnings.extend(res.warning.clone());
            Output::records(vec![rec])
        }
        Command::Lift { lambda, r, alpha } => {
            let lambda = parse_partition(lambda, &mut notes)?;
            let alpha = parse_composition(alpha)?;
            warm_cache([lambda.size() + r]);
            let res = lift_fixed_points_probability(&lambda, *r, &alpha)?;
            let lifted = lambda.with_fixed_points(*r);
            Output::records(vec![OutputRecord::new("lift")
                .lambda(&lambda)
                .alpha(&alpha)
                .param("r", r)
                .param("lifted", &lifted)
                .result(&res)])
        }
        Command::Strong { lambda, m } => {
            let lambda = parse_partition(lambda, &mut notes)?;
            warm_cache([lambda.size()]);
            let table = strong_sep_probs(&lambda, *m)?;
            let records = table
                .iter()
                .map(|(beta, p)| {
                    let count = p * Rational::from(pair_count(&lambda, beta));
                    let rec = OutputRecord::new("strong").lambda(&lambda).alpha(beta).probability(p);
                    let rec = if count.is_integer() { rec.count(&count.to_integer()) } else { rec };
                    rec.method(Method::Refinement)
                })
                .collect();
            Output::records(records)
        }
        Command::Connection { lambda, alpha } => {
            let lambda = parse_partition(lambda, &mut notes)?;
            let alpha = parse_composition(alpha)?;
            warm_cache([lambda.size()]);
            let k = connection_coefficient(&lambda, &alpha)?;
            Output::records(vec![OutputRecord::new("connection")
                .lambda(&lambda)
                .alpha(&alpha)
                .count(&k)
                .method(Method::Refinement)])
        }
        Command::Gtable { n, m, k } => {
            let table = g_table(*n, *m, *k)?;
            let records = table
                .entries()
                .map(|(lambda, r, c)| {
                    let mut rec = OutputRecord::new("gtable").lambda(lambda).param("n", n).param("r", r);
                    rec.m = Some(*m);
                    rec.k = Some(*k);
                    rec.value = Some(format_rational(c));
                    rec
                })
                .collect();
            Output::records(records)
        }
        Command::Hz { half } => {
            let poly = hz_poly(*half)?;
            let mono = poly.to_monomial();
            let mut records = Vec::new();
            for (r, c) in poly.terms() {
                let mut rec = OutputRecord::new("hz").param("N", half).param("basis", "binomial").param("r", r);
                rec.value = Some(format_rational(c));
                records.push(rec);
            }
            for (d, c) in mono.coeffs().iter().enumerate().filter(|(_, c)| !num_traits::Zero::is_zero(*c)) {
                let mut rec = OutputRecord::new("hz").param("N", half).param("basis", "monomial").param("degree", d);
                rec.value = Some(format_rational(c));
                records.push(rec);
            }
            let text = vec![format!("binomial basis: {poly}"), format!("monomial basis: {}", format_poly(&mono))];
            Output { records, text, exit: EXIT_OK }
        }
        Command::Verify { suite, max_n } => {
            warm_cache(1..=*max_n + 3);
            let oracle = Oracle::new(budget(g), g.threads)?;
            let report = run_suite(*suite, *max_n, &oracle)?;
            let exit = if report.passed() { EXIT_OK } else { EXIT_MISMATCH };
            let records = report
                .lines
                .iter()
                .map(|l| {
                    let mut rec = OutputRecord::new("verify")
                        .param("check", &l.name)
                        .param("cases", l.cases)
                        .param("mismatches", l.mismatches);
                    rec.value = Some(if l.passed() { "pass" } else { "fail" }.to_string());
                    rec.warnings = l.examples.clone();
                    rec
                })
                .collect();
            Output { records, text: vec![report.to_string()], exit }
        }
        Command::Table { n, alphas, list } => {
            warm_cache([*n]);
            let alphas: Vec<Composition> = match alphas {
                AlphaSet::All => (1..=*n).flat_map(all_compositions).collect(),
                AlphaSet::Partitions => (1..=*n).flat_map(partitions).map(|p| p.as_composition()).collect(),
                AlphaSet::List => {
                    let list = list.as_deref().ok_or_else(|| Error::InvalidInput("--alphas list needs --list".into()))?;
                    list.split(';').map(parse_composition).collect::<Result<_>>()?
                }
            };
            let mut records = Vec::new();
            for alpha in &alphas {
                if alpha.size() > *n || alpha.is_empty() {
                    return Err(Error::InvalidInput(format!("alpha {alpha} does not fit n = {n}")));
                }
                let method = if alpha.len() == 1 { Method::SingleBlock } else { Method::GeneratingFunction };
                for (lambda, count) in count_s_all(*n, alpha)? {
                    let p = Rational::new(count.clone(), pair_count(&lambda, alpha));
                    records.push(OutputRecord::new("table").lambda(&lambda).alpha(alpha).count(&count).probability(&p).method(method));
                }
            }
            Output::records(records)
        }
    };
    Ok(Output { records: with_notes(out.records, &notes), ..out })
}

fn format_poly(p: &crate::poly::Poly) -> String {
    let terms: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .map(|(d, c)| match d {
            0 => format_rational(c),
            1 => format!("{}*t", format_rational(c)),
            _ => format!("{}*t^{d}", format_rational(c)),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

fn add_floats(records: &mut [OutputRecord]) {
    for rec in records {
        if let Some(p) = rec.probability.as_deref().and_then(crate::arith::parse_rational) {
            rec.probability_float = Some(format_decimal(&p, FLOAT_DIGITS));
        }
    }
}

fn text_line(rec: &OutputRecord) -> String {
    let mut fields = vec![rec.operation.clone()];
    let named = |k: &str, v: &Option<String>| v.as_ref().map(|v| format!("{k}={v}"));
    fields.extend(named("lambda", &rec.lambda));
    fields.extend(named("alpha", &rec.alpha));
    fields.extend(rec.params.iter().map(|(k, v)| format!("{k}={v}")));
    fields.extend(named("count", &rec.count));
    fields.extend(named("probability", &rec.probability));
    fields.extend(named("approx", &rec.probability_float));
    fields.extend(named("value", &rec.value));
    fields.extend(named("method", &rec.method));
    let mut line = fields.join(" ");
    for w in &rec.warnings {
        line.push_str(&format!("\n  warning: {w}"));
    }
    line
}

fn emit(out: &mut dyn Write, format: Format, float: bool, output: &Output) -> std::io::Result<()> {
    match format {
        Format::Text => {
            if output.text.is_empty() {
                for rec in &output.records {
                    writeln!(out, "{}", text_line(rec))?;
                }
            } else {
                for line in &output.text {
                    writeln!(out, "{line}")?;
                }
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &output.records)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let mut header = vec!["lambda", "alpha", "m", "k", "count", "probability", "method"];
            if float {
                header.push("probability_float");
            }
            w.write_record(&header)?;
            let s = |v: &Option<String>| v.clone().unwrap_or_default();
            let u = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
            for rec in &output.records {
                let mut row =
                    vec![s(&rec.lambda), s(&rec.alpha), u(rec.m), u(rec.k), s(&rec.count), s(&rec.probability), s(&rec.method)];
                if float {
                    row.push(s(&rec.probability_float));
                }
                w.write_record(&row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::SizeMismatch { .. } => EXIT_USAGE,
        Error::BudgetExceeded(_) => EXIT_BUDGET,
        Error::Invariant(_) => EXIT_MISMATCH,
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let columnar = matches!(cli.command, Command::Gtable { .. } | Command::Hz { .. } | Command::Verify { .. });
    if cli.global.format == Format::Csv && columnar {
        let _ = writeln!(err, "error: csv output is only available for separation records; use --format json");
        return EXIT_USAGE;
    }
    match execute(&cli) {
        Ok(mut output) => {
            if cli.global.float {
                add_floats(&mut output.records);
            }
            if let Err(e) = emit(out, cli.global.format, cli.global.float, &output) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_MISMATCH.max(output.exit);
            }
            output.exit
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("sepprob").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn json(args: &[&str]) -> Vec<OutputRecord> {
        let mut v = args.to_vec();
        v.extend(["--format", "json"]);
        let (code, out, err) = call(&v);
        assert_eq!(code, 0, "{err}");
        serde_json::from_str(&out).unwrap()
    }

    #[test]
    fn both_methods_agree() {
        let recs = json(&["sep-prob", "--lambda", "2,2", "--alpha", "1,1", "--method", "both"]);
        assert_eq!(recs.len(), 2);
        assert!(recs.iter().all(|r| r.probability.as_deref() == Some("5/9")));
        assert_eq!(recs[1].method.as_deref(), Some("oracle"));
    }

    #[test]
    fn examples() {
        let r = json(&["ncycle", "--n", "4", "--alpha", "1,1"]);
        assert_eq!(r[0].probability.as_deref(), Some("11/18"));
        let r = json(&["connection", "--lambda", "3", "--alpha", "1,1,1"]);
        assert_eq!(r[0].count.as_deref(), Some("2"));
        let r = json(&["involution", "--N", "2", "--alpha", "1,1"]);
        assert_eq!(r[0].probability.as_deref(), Some("5/9"));
        assert_eq!(r[0].params["alternative_form"], "5/18");
        assert_eq!(r[0].warnings.len(), 1);
    }

    #[test]
    fn unsorted_lambda_gets_a_note() {
        let r = json(&["sep-prob", "--lambda", "1,2", "--alpha", "1,1"]);
        assert_eq!(r[0].lambda.as_deref(), Some("2,1"));
        assert_eq!(r[0].warnings.len(), 1);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["sep-prob", "--lambda", "2,x", "--alpha", "1"]).0, EXIT_USAGE);
        assert_eq!(call(&["sep-prob", "--lambda", "2", "--alpha", "1,1,1"]).0, EXIT_USAGE);
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(call(&["sep-prob", "--lambda", "9", "--alpha", "1,1", "--method", "oracle"]).0, EXIT_BUDGET);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
        assert_eq!(call(&["hz", "--N", "2", "--format", "csv"]).0, EXIT_USAGE);
    }

    #[test]
    fn csv_and_json_carry_the_same_values() {
        let recs = json(&["table", "--n", "4", "--alphas", "partitions"]);
        let (code, out, _) = call(&["table", "--n", "4", "--alphas", "partitions", "--format", "csv"]);
        assert_eq!(code, 0);
        let mut reader = csv::Reader::from_reader(out.as_bytes());
        let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), recs.len());
        for (row, rec) in rows.iter().zip(&recs) {
            assert_eq!(&row[0], rec.lambda.as_deref().unwrap());
            assert_eq!(&row[1], rec.alpha.as_deref().unwrap());
            assert_eq!(&row[4], rec.count.as_deref().unwrap());
            assert_eq!(&row[5], rec.probability.as_deref().unwrap());
            assert_eq!(&row[6], rec.method.as_deref().unwrap());
        }
    }

    #[test]
    fn float_is_display_only() {
        let r = json(&["ncycle", "--n", "4", "--alpha", "1,1", "--float"]);
        assert_eq!(r[0].probability.as_deref(), Some("11/18"));
        assert_eq!(r[0].probability_float.as_deref(), Some("0.611111111111111"));
    }
}
