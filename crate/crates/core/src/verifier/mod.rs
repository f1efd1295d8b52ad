//! Machine checks for whole-scheme runs and for the algebraic facts the
//! construction rests on. Every check returns a report; nothing here panics
//! on a failing instance.

mod claims;
mod end_to_end;
mod lemmas;

pub use claims::{verify_claims, ClaimsReport};
pub use end_to_end::{
    simulate, verify_end_to_end, MemoryCheck, Simulation, UserDecode, VerificationReport,
};
pub use lemmas::{
    verify_lemma1, verify_lemma3, verify_odd_t_obstruction, verify_remark3, Lemma1Report,
    Lemma3Report, ObstructionReport, Remark3Report, Remark3Strategy,
};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(id: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            pass,
            detail: detail.into(),
        }
    }
}

pub(crate) fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("empty q1 range: q+1 = {lo} exceeds K-t-1 = {hi}")]
    EmptyRange { lo: u32, hi: u32 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// How demands are assigned to users.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Demands {
    /// User k requests file k (wrapping if N < K).
    Distinct,
    /// Everybody requests file 1.
    Uniform,
    List(Vec<u32>),
}

impl Demands {
    pub fn resolve(&self, k: u32, n: u32) -> Vec<u32> {
        match self {
            Demands::Distinct => (0..k).map(|u| u % n.max(1) + 1).collect(),
            Demands::Uniform => vec![1; k as usize],
            Demands::List(v) => v.clone(),
        }
    }
}

impl FromStr for Demands {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "distinct" => Ok(Demands::Distinct),
            "uniform" => Ok(Demands::Uniform),
            _ => s
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<u32>()
                        .map_err(|_| format!("bad demand entry {x:?}"))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Demands::List),
        }
    }
}

impl fmt::Display for Demands {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Demands::Distinct => f.write_str("distinct"),
            Demands::Uniform => f.write_str("uniform"),
            Demands::List(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}
