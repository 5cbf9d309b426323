//! Closed-form counts and probabilities, evaluated in exact arithmetic.

mod binom_poly;
mod colored;
mod cycles;
mod fixed_points;
mod gtable;
mod identities;
mod involution;

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::Rational;

pub use binom_poly::BinomTPoly;
pub use colored::{count_b, count_t, marked_composition_count, marked_composition_direct_sum};
pub use cycles::{ncycle_singletons, p_cycles_count, sep_prob_ncycle, sep_prob_p_cycles};
pub use fixed_points::{lift_fixed_points, lift_fixed_points_probability};
pub use gtable::{count_s, count_s_all, g_table, g_table_for, pair_count, sep_prob, GTable};
pub use identities::{verify_change_summation, verify_simplify_p};
pub use involution::{count_m, h_poly, h_poly_unshifted, hz_poly, sep_prob_involution, InvolutionResult};

/// Which route produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// One block is always separated; no formula evaluated.
    SingleBlock,
    GeneratingFunction,
    CycleCount,
    TwoLongCycles,
    Involution,
    FixedPointLift,
    Refinement,
    Oracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::SingleBlock => "single-block",
            Method::GeneratingFunction => "generating-function",
            Method::CycleCount => "cycle-count",
            Method::TwoLongCycles => "two-long-cycles",
            Method::Involution => "involution",
            Method::FixedPointLift => "fixed-point-lift",
            Method::Refinement => "refinement",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A separation count (when defined) with its probability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SepResult {
    pub count: Option<BigInt>,
    pub probability: Rational,
    pub method: Method,
}

impl SepResult {
    pub fn new(count: Option<BigInt>, probability: Rational, method: Method) -> Self {
        SepResult { count, probability, method }
    }
}
