use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::Serialize;

use super::{all_pass, Check, VerifyError};
use crate::analysis::{alpha_k, rho, rho_hypergeometric};
use crate::combinatorics::{lcm_u64, Rational, TypeVector};
use crate::json::{big_int, big_int_vec};
use crate::scheme::{
    count_vectors, derive_types, fs_vector_lcm, local_fs, FsVectors, SystemParams,
    TransmitterSelection, UserGrouping,
};

#[derive(Debug, Clone, Serialize)]
pub struct RatioPoint {
    pub q: u32,
    pub ratio: Rational,
    pub hypergeometric: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma1Report {
    pub t: u32,
    pub points: Vec<RatioPoint>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Strict decrease of the ratio in q, and its hypergeometric form.
pub fn verify_lemma1(
    t: u32,
    qs: std::ops::RangeInclusive<u32>,
) -> Result<Lemma1Report, VerifyError> {
    if t < 2 || !t.is_multiple_of(2) || *qs.start() < t + 1 {
        return Err(VerifyError::InvalidParams(format!(
            "need even t >= 2 and q >= t+1 (t = {t}, q from {})",
            qs.start()
        )));
    }
    let r = t / 2;
    let points: Vec<RatioPoint> = qs
        .map(|q| RatioPoint {
            q,
            ratio: rho(q, r),
            hypergeometric: rho_hypergeometric(q, r),
        })
        .collect();
    let mut checks = Vec::new();
    let bad = points.windows(2).find(|w| w[1].ratio >= w[0].ratio);
    checks.push(Check::new(
        "lemma1.decreasing",
        bad.is_none(),
        match bad {
            Some(w) => format!(
                "rho({}) = {} >= rho({}) = {}",
                w[1].q, w[1].ratio, w[0].q, w[0].ratio
            ),
            None => format!("{} consecutive pairs", points.len().saturating_sub(1)),
        },
    ));
    let mism = points.iter().find(|p| p.ratio != p.hypergeometric);
    checks.push(Check::new(
        "lemma1.hypergeometric",
        mism.is_none(),
        match mism {
            Some(p) => format!("q = {}: {} vs {}", p.q, p.ratio, p.hypergeometric),
            None => "formula equals E[h(J_q)] at every q".into(),
        },
    ));
    let pass = all_pass(&checks);
    Ok(Lemma1Report {
        t,
        points,
        checks,
        pass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupingRow {
    pub q1: u32,
    #[serde(rename = "F", serialize_with = "big_int")]
    pub f: BigInt,
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma3Report {
    #[serde(rename = "K")]
    pub k: u32,
    pub t: u32,
    pub table: Vec<GroupingRow>,
    pub argmin: u32,
    pub strict: bool,
    pub pass: bool,
}

/// Scans two-group layouts `(q1, K-q1)` with the fixed global FS vector of
/// the odd-K construction and checks the balanced layout is the strict
/// minimum.
pub fn verify_lemma3(q: u32, r: u32) -> Result<Lemma3Report, VerifyError> {
    let (k, t) = (2 * q + 1, 2 * r);
    if r == 0 || q < t {
        return Err(VerifyError::InvalidParams(format!(
            "need r >= 1, q >= t (q = {q}, t = {t})"
        )));
    }
    let (lo, hi) = (q + 1, k - t - 1);
    if lo > hi {
        return Err(VerifyError::EmptyRange { lo, hi });
    }
    let params =
        SystemParams::new(k, t, k, 1).map_err(|e| VerifyError::InvalidParams(e.to_string()))?;
    let alpha: Vec<BigInt> = (1..=t + 1).map(|j| BigInt::from(alpha_k(j, r))).collect();
    let mut table = Vec::new();
    for q1 in lo..=hi {
        let g = UserGrouping::new(vec![q1, k - q1]).expect("q1 >= K-q1");
        let types =
            derive_types(&params, &g).map_err(|e| VerifyError::InvalidParams(e.to_string()))?;
        let counts = count_vectors(&types, &g);
        let f = alpha
            .iter()
            .zip(&counts.f)
            .map(|(a, c)| a * BigInt::from(c.clone()))
            .sum();
        table.push(GroupingRow { q1, f });
    }
    let min = table
        .iter()
        .map(|row| &row.f)
        .min()
        .expect("non-empty")
        .clone();
    let winners: Vec<u32> = table
        .iter()
        .filter(|row| row.f == min)
        .map(|row| row.q1)
        .collect();
    let argmin = winners[0];
    let strict = winners.len() == 1;
    Ok(Lemma3Report {
        k,
        t,
        pass: strict && argmin == q + 1,
        table,
        argmin,
        strict,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Remark3Strategy {
    /// 1-based transmitting components of `s_2` and `s_3`.
    pub s2: Vec<usize>,
    pub s3: Vec<usize>,
    pub alpha: Vec<u64>,
    #[serde(serialize_with = "big_int")]
    pub residual: BigInt,
    /// Whether a delivery with equal per-transmitter message counts exists.
    pub realizable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Remark3Report {
    pub q: u32,
    #[serde(rename = "Delta", serialize_with = "big_int_vec")]
    pub delta: Vec<BigInt>,
    pub strategies: Vec<Remark3Strategy>,
    /// Distinct FS vectors with zero residual.
    pub satisfying: Vec<Vec<u64>>,
    pub pass: bool,
}

/// Exhausts the single-coupled-group selections at t = 2 on `(q+1, q)`.
/// `s_1` and `s_4` have one non-empty component each, so only `s_2` and
/// `s_3` vary.
pub fn verify_remark3(q: u32) -> Result<Remark3Report, VerifyError> {
    if q < 3 {
        return Err(VerifyError::InvalidParams(format!(
            "q >= 3 required (q = {q})"
        )));
    }
    let k = 2 * q + 1;
    let params =
        SystemParams::new(k, 2, k, 1).map_err(|e| VerifyError::InvalidParams(e.to_string()))?;
    let g = UserGrouping::new(vec![q + 1, q]).expect("valid");
    let types = derive_types(&params, &g).expect("q >= 2");
    let counts = count_vectors(&types, &g);
    let delta = counts.delta1().expect("two groups").to_vec();
    let choices: [Vec<usize>; 3] = [vec![0], vec![1], vec![0, 1]];
    let mut strategies = Vec::new();
    for s2 in &choices {
        for s3 in &choices {
            let plan = TransmitterSelection::new(vec![vec![1], s2.clone(), s3.clone(), vec![0]]);
            let alpha = fs_vector_lcm(&plan, &types, &g).expect("selections are valid");
            let realizable = FsVectors::derive(std::slice::from_ref(&plan), &types, &g).is_ok();
            let residual: BigInt = alpha
                .iter()
                .zip(&delta)
                .map(|(&a, d)| BigInt::from(a) * d)
                .sum();
            strategies.push(Remark3Strategy {
                s2: s2.iter().map(|c| c + 1).collect(),
                s3: s3.iter().map(|c| c + 1).collect(),
                alpha,
                residual,
                realizable,
            });
        }
    }
    let satisfying: Vec<Vec<u64>> = strategies
        .iter()
        .filter(|s| s.residual == BigInt::from(0))
        .map(|s| s.alpha.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let pass = satisfying == vec![vec![2, 2, 2]];
    Ok(Remark3Report {
        q,
        delta,
        strategies,
        satisfying,
        pass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionReport {
    pub r: u32,
    pub t: u32,
    pub pivot_type: TypeVector,
    /// Local factors for the pivot type from `s_{r+1}` (first group
    /// transmits) and `s_{r+2}` (second group transmits).
    pub factors: [u64; 2],
    pub lcm: u64,
    pub exceeds_t: bool,
    pub obstruction_expected: bool,
    pub pass: bool,
}

/// Hill-shaped selection at odd `t = 2r+1`: the two pivot group types hand
/// the middle subfile type the factors r and r+1. For r >= 2 their LCM
/// exceeds t; r = 1 is the boundary where it does not.
pub fn verify_odd_t_obstruction(r: u32) -> Result<ObstructionReport, VerifyError> {
    if r == 0 {
        return Err(VerifyError::InvalidParams("r >= 1 required".into()));
    }
    let (ru, t) = (r as usize, 2 * r + 1);
    let pivot = TypeVector::new(vec![ru, ru + 1]);
    let factor = |dagger: &[usize], s: Vec<usize>| -> Result<u64, VerifyError> {
        local_fs(dagger, &TypeVector::new(s))
            .map_err(|e| VerifyError::InvalidParams(e.to_string()))?
            .into_iter()
            .find(|f| f.involved == pivot)
            .map(|f| f.factor)
            .ok_or_else(|| VerifyError::InvalidParams("pivot type not involved".into()))
    };
    let a = factor(&[0], vec![ru, ru + 2])?;
    let b = factor(&[1], vec![ru + 1, ru + 1])?;
    let lcm = lcm_u64(a, b);
    let exceeds_t = lcm > t as u64;
    let obstruction_expected = r >= 2;
    Ok(ObstructionReport {
        r,
        t,
        pivot_type: pivot,
        factors: [a, b],
        lcm,
        exceeds_t,
        obstruction_expected,
        pass: exceeds_t == obstruction_expected && a == r as u64 && b == r as u64 + 1,
    })
}
