use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{all_pass, Check, VerifyError};
use crate::json::big_int_vec;
use crate::scheme::{
    count_vectors, derive_types, solve_packet_ratio, two_group_spec, FsVectors, SystemParams,
    UserGrouping,
};

#[derive(Debug, Clone, Serialize)]
pub struct ClaimsReport {
    pub t: u32,
    pub q: u32,
    #[serde(rename = "Delta", serialize_with = "big_int_vec")]
    pub delta: Vec<BigInt>,
    /// Pairwise sums `Delta(k) + Delta(t+2-k)` for k <= r, then `Delta(r+1)`.
    #[serde(serialize_with = "big_int_vec")]
    pub delta_pairs: Vec<BigInt>,
    /// Indices k (1-based) with k, k+1 both in the positive-denominator set
    /// and k <= r-1.
    pub monotone_window: Vec<u32>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub pass: bool,
}

fn a_k(t: i64, k: i64) -> i64 {
    (k - 1) * (k - 2) + (t - k) * (t - k + 1)
}

fn b_k(t: i64, k: i64) -> i64 {
    t - (t - 2 * (k - 1)).pow(2)
}

fn beta(t: i64, k: i64) -> i64 {
    2 * t * (t - 1) * (2 * k - (t + 1))
}

/// `[floor((t - sqrt t)/2) + 2 : ceil((t + sqrt t)/2)]` evaluated exactly.
fn positive_denominator_set(t: i64) -> (i64, i64) {
    let s = t.sqrt();
    if s * s == t {
        ((t - s) / 2 + 2, (t + s + 1) / 2)
    } else {
        // sqrt t lies strictly between s and s+1
        ((t - s - 1) / 2 + 2, (t + s) / 2 + 1)
    }
}

fn show(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Sign facts behind the positivity of the packet-size ratio on the odd-K
/// layout `(q+1, q)` with even `t = 2r`.
pub fn verify_claims(t: u32, q: u32) -> Result<ClaimsReport, VerifyError> {
    if t < 2 || !t.is_multiple_of(2) || q < t {
        return Err(VerifyError::InvalidParams(format!(
            "need even t >= 2 and q >= t (t = {t}, q = {q})"
        )));
    }
    let r = t / 2;
    let k_users = 2 * q + 1;
    let params = SystemParams::new(k_users, t, k_users, 1)
        .map_err(|e| VerifyError::InvalidParams(e.to_string()))?;
    let grouping = UserGrouping::new(vec![q + 1, q]).expect("valid sizes");
    let spec = two_group_spec(params, grouping.clone())
        .map_err(|e| VerifyError::InvalidParams(e.to_string()))?;
    let types = derive_types(&params, &grouping).expect("q >= t");
    let counts = count_vectors(&types, &grouping);
    let delta = counts.delta1().expect("two groups").to_vec();
    let idx = |k: u32| &delta[k as usize - 1];

    let mut checks = Vec::new();
    let mut notes = Vec::new();

    // Claim 1: first r+1 entries positive, last r negative
    let c1 =
        (1..=r + 1).all(|k| idx(k).is_positive()) && (r + 2..=t + 1).all(|k| idx(k).is_negative());
    checks.push(Check::new(
        "claim1",
        c1,
        format!("Delta = {}", show(&delta)),
    ));

    // Claim 2
    let sum: BigInt = delta.iter().sum();
    checks.push(Check::new("claim2", sum.is_zero(), format!("sum = {sum}")));

    // Lemma 2 signs and gamma
    let fs = FsVectors::derive(&spec.plans, &types, &grouping);
    match fs {
        Ok(fs) => {
            let dot = |a: &[u64]| -> BigInt {
                a.iter()
                    .zip(&delta)
                    .map(|(&x, d)| BigInt::from(x) * d)
                    .sum()
            };
            let n1 = dot(&fs.intermediate[0]);
            let n2 = dot(&fs.intermediate[1]);
            checks.push(Check::new(
                "lemma2.alpha1",
                n1.is_negative(),
                format!("alpha1.Delta = {n1}"),
            ));
            checks.push(Check::new(
                "lemma2.alpha2",
                n2.is_positive(),
                format!("alpha2.Delta = {n2}"),
            ));
            match solve_packet_ratio(&fs, &counts) {
                Ok(g) => checks.push(Check::new(
                    "lemma2.gamma",
                    g[1].is_positive(),
                    format!("gamma = {}", g[1]),
                )),
                Err(e) => checks.push(Check::new("lemma2.gamma", false, e.to_string())),
            }
        }
        Err(e) => checks.push(Check::new("lemma2.fs", false, e.to_string())),
    }

    // Claim 3 on the pairwise sums
    let mut dp: Vec<BigInt> = (1..=r).map(|k| idx(k) + idx(t + 2 - k)).collect();
    dp.push(idx(r + 1).clone());
    let d = |k: u32| &dp[k as usize - 1];
    checks.push(Check::new(
        "claim3.1",
        d(1).is_negative() && d(r + 1).is_positive(),
        format!("delta(1) = {}, delta(r+1) = {}", d(1), d(r + 1)),
    ));
    let lead = dp.iter().take_while(|x| x.is_negative()).count() as u32;
    let tail_ok = dp[lead as usize..].iter().all(|x| !x.is_negative());
    if r >= 2 {
        // some k' in [2:r] with a negative prefix means delta(2) < 0
        checks.push(Check::new(
            "claim3.2",
            lead >= 2,
            format!("negative prefix length {lead}"),
        ));
        let g_ok = (2..=r as i64).all(|k| {
            let g = (t as i64 - 2 * (k - 1)).pow(2) - t as i64;
            g < 0 || d(k as u32).is_negative()
        });
        checks.push(Check::new(
            "claim3.2.sufficient",
            g_ok,
            "g(k) >= 0 implies delta(k) < 0 on [2:r]",
        ));
        let p3 = (2..r).all(|k| !d(k + 1).is_negative() || d(k).is_negative());
        checks.push(Check::new(
            "claim3.3",
            p3,
            "delta(k+1) < 0 implies delta(k) < 0 on [2:r-1]",
        ));
        checks.push(Check::new(
            "claim3.4",
            (2..=r).contains(&lead) && tail_ok,
            format!("k'' = {lead}"),
        ));
    } else {
        notes.push(
            "r = 1: the prefix property needs r >= 2; only property 1 and the \
             single-sign-change form with k'' = 1 are checked"
                .into(),
        );
        checks.push(Check::new(
            "claim3.4",
            lead == 1 && tail_ok,
            format!("k'' = {lead} (degenerate)"),
        ));
    }
    // the scanned change point must agree with the analytic bound
    let mut phi_ok = true;
    for k in 2..=r as i64 {
        let (a, b) = (a_k(t as i64, k), b_k(t as i64, k));
        if b > 0 && (q as i64) * b < a && !d(k as u32).is_negative() {
            phi_ok = false;
        }
    }
    checks.push(Check::new(
        "claim3.phi_bound",
        phi_ok,
        "q < phi_t(k) implies delta(k) < 0 wherever B_k > 0",
    ));
    let changes = dp
        .windows(2)
        .filter(|w| w[0].is_negative() != w[1].is_negative())
        .count();
    checks.push(Check::new(
        "claim3.single_sign_change",
        changes == 1,
        format!("delta = {}", show(&dp)),
    ));

    // Claim 4
    let ti = t as i64;
    let (lo, hi) = positive_denominator_set(ti);
    let set_ok = (lo..=hi).all(|k| b_k(ti, k) > 0) && b_k(ti, lo - 1) <= 0 && b_k(ti, hi + 1) <= 0;
    checks.push(Check::new(
        "claim4.positive_set",
        set_ok,
        format!("B_k > 0 exactly on [{lo}:{hi}]"),
    ));
    let beta_ok = (2..=r as i64).all(|k| {
        let direct = a_k(ti, k + 1) * b_k(ti, k) - a_k(ti, k) * b_k(ti, k + 1);
        direct == beta(ti, k) && direct < 0
    });
    checks.push(Check::new(
        "claim4.beta",
        beta_ok,
        "A_{k+1}B_k - A_kB_{k+1} = 2t(t-1)(2k-(t+1)) < 0 on [2:r]",
    ));
    let window: Vec<u32> = (2..r as i64)
        .filter(|&k| k >= lo && k < hi)
        .map(|k| k as u32)
        .collect();
    // phi(k+1) < phi(k)  <=>  A_{k+1}B_k < A_kB_{k+1} when both B are positive
    let mono = window.iter().all(|&k| {
        let k = k as i64;
        a_k(ti, k + 1) * b_k(ti, k) < a_k(ti, k) * b_k(ti, k + 1)
    });
    if window.is_empty() {
        notes.push(format!("monotonicity window is empty for t = {t}"));
    }
    checks.push(Check::new(
        "claim4.monotone",
        mono,
        format!("window {window:?}"),
    ));

    let pass = all_pass(&checks);
    Ok(ClaimsReport {
        t,
        q,
        delta,
        delta_pairs: dp,
        monotone_window: window,
        checks,
        notes,
        pass,
    })
}
