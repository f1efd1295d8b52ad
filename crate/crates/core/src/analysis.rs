//! Closed-form subpacketization, ratio and asymptote formulas, plus the
//! parameter sweep behind the ratio-vs-q curves.

use std::io::Write;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use thiserror::Error;

use crate::combinatorics::{binom, hypergeo_pmf, Rational};
use crate::json::big_uint;
use crate::scheme::{preset, Blueprint, Preset, SchemeError, SystemParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("even t required for theorem1 sweep; use --preset odd_t3")]
    OddT(u32),
    #[error("t must be at least 2, got {0}")]
    TooSmallT(u32),
    #[error("empty q range {lo}:{hi} for t = {t}")]
    EmptyRange { t: u32, lo: u32, hi: u32 },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// Global FS factor of `v_k` in the odd-K construction (k is 1-based).
pub fn alpha_k(k: u32, r: u32) -> u32 {
    if k <= r {
        2 * (k - 1)
    } else {
        2 * r
    }
}

/// Number of `t`-subsets with `k-1` users in the group of size `q+1`.
pub fn f_k(q: u32, r: u32, k: u32) -> BigUint {
    let t = 2 * r as i64;
    binom(q as u64 + 1, k as i64 - 1) * binom(q as u64, t - k as i64 + 1)
}

/// Packets per file of the odd-K construction, `K = 2q+1`, `t = 2r`.
pub fn f_pt(q: u32, r: u32) -> BigUint {
    (1..=2 * r + 1)
        .map(|k| BigUint::from(alpha_k(k, r)) * f_k(q, r, k))
        .sum()
}

pub fn f_jcm(k: u32, t: u32) -> BigUint {
    binom(k as u64, t as i64) * BigUint::from(t)
}

/// `F_PT / F_JCM` at `K = 2q+1`.
pub fn rho(q: u32, r: u32) -> Rational {
    Rational::new(
        BigInt::from(f_pt(q, r)),
        BigInt::from(f_jcm(2 * q + 1, 2 * r)),
    )
}

/// The same ratio as an expectation over the hypergeometric count of
/// first-group users in a uniformly random `t`-subset.
pub fn rho_hypergeometric(q: u32, r: u32) -> Rational {
    let t = 2 * r;
    (0..=t as i64)
        .map(|j| {
            let h = if (j as u32) < r {
                Rational::new(2 * j, t)
            } else {
                Rational::one()
            };
            &h * &hypergeo_pmf(q as u64, t as u64, j).expect("q >= t")
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Asymptote {
    pub exact: Rational,
    /// `1 - 1/sqrt(2 pi t)`, for display only.
    pub stirling: f64,
}

/// Limit of the ratio as q grows: `1 - C(t,r)/2^(t+1)`.
pub fn asymptotic_ratio(t: u32) -> Asymptote {
    let r = t / 2;
    let frac = Rational::new(
        BigInt::from(binom(t as u64, r as i64)),
        BigInt::from(2u8).pow(t + 1),
    );
    Asymptote {
        exact: &Rational::one() - &frac,
        stirling: 1.0 - (1.0 / (2.0 * std::f64::consts::PI * t as f64)).sqrt(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRecord {
    #[serde(rename = "K")]
    pub k: u32,
    pub t: u32,
    pub q: u32,
    pub r: u32,
    #[serde(rename = "F_PT", serialize_with = "big_uint")]
    pub f_pt: BigUint,
    #[serde(rename = "F_JCM", serialize_with = "big_uint")]
    pub f_jcm: BigUint,
    pub ratio: Rational,
    pub asymptote: Rational,
    pub gamma: Rational,
}

impl RatioRecord {
    /// Builds the record from the derived blueprint; the closed form is
    /// not consulted here so the two can be compared.
    pub fn compute(t: u32, q: u32) -> Result<Self, AnalysisError> {
        check_t(t)?;
        let k = 2 * q + 1;
        let bp = Blueprint::derive(preset(Preset::Theorem1, SystemParams::new(k, t, k, 1)?)?)?;
        Ok(RatioRecord {
            k,
            t,
            q,
            r: t / 2,
            f_pt: bp.sizing.packets_per_file.clone(),
            f_jcm: bp.jcm_packets_per_file.clone(),
            ratio: bp.subpacketization_ratio.clone(),
            asymptote: asymptotic_ratio(t).exact,
            gamma: bp.gamma()[1].clone(),
        })
    }
}

fn check_t(t: u32) -> Result<(), AnalysisError> {
    if !t.is_multiple_of(2) {
        return Err(AnalysisError::OddT(t));
    }
    if t < 2 {
        return Err(AnalysisError::TooSmallT(t));
    }
    Ok(())
}

/// Inclusive q range for one t; `None` bounds default to `t+1` and `t+50`.
#[derive(Debug, Clone, Copy, Default)]
pub struct QRange {
    pub lo: Option<u32>,
    pub hi: Option<u32>,
}

impl QRange {
    pub fn bounds(&self, t: u32) -> (u32, u32) {
        (self.lo.unwrap_or(t + 1), self.hi.unwrap_or(t + 50))
    }
}

/// Records sorted by (t, q).
pub fn sweep(ts: &[u32], range: QRange) -> Result<Vec<RatioRecord>, AnalysisError> {
    let mut ts = ts.to_vec();
    ts.sort_unstable();
    ts.dedup();
    let mut out = Vec::new();
    for t in ts {
        check_t(t)?;
        let (lo, hi) = range.bounds(t);
        let lo = lo.max(t + 1);
        if lo > hi {
            return Err(AnalysisError::EmptyRange { t, lo, hi });
        }
        for q in lo..=hi {
            out.push(RatioRecord::compute(t, q)?);
        }
    }
    Ok(out)
}

/// `%.12g`-style rendering.
pub fn format_float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..12).contains(&exp) {
        let s = format!("{x:.11e}");
        let (m, e) = s.split_once('e').expect("exponent");
        return format!("{}e{}", trim_zeros(m), e);
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const CSV_HEADER: [&str; 11] = [
    "K",
    "t",
    "q",
    "r",
    "F_PT",
    "F_JCM",
    "ratio_exact",
    "ratio_float",
    "asymptote_exact",
    "asymptote_float",
    "gamma",
];

pub fn write_csv(records: &[RatioRecord], out: impl Write) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.k.to_string(),
            r.t.to_string(),
            r.q.to_string(),
            r.r.to_string(),
            r.f_pt.to_string(),
            r.f_jcm.to_string(),
            r.ratio.to_string(),
            format_float(r.ratio.to_f64()),
            r.asymptote.to_string(),
            format_float(r.asymptote.to_f64()),
            r.gamma.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_json(records: &[RatioRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn f_pt_values() {
        let t2: Vec<u32> = (3..=8).map(|q| f_pt(q, 1).try_into().unwrap()).collect();
        assert_eq!(t2, vec![36, 60, 90, 126, 168, 216]);
        let t4: Vec<u32> = (5..=10).map(|q| f_pt(q, 2).try_into().unwrap()).collect();
        assert_eq!(t4, vec![1180, 2520, 4760, 8232, 13320, 20460]);
        // 3(K^2-1)/4 at t = 2
        for q in 3..30u32 {
            let k = 2 * q + 1;
            assert_eq!(f_pt(q, 1), BigUint::from(3 * (k * k - 1) / 4));
        }
    }

    #[test]
    fn f_jcm_values() {
        assert_eq!(f_jcm(7, 2), BigUint::from(42u32));
        assert_eq!(f_jcm(11, 4), BigUint::from(1320u32));
        assert_eq!(f_jcm(5, 2), BigUint::from(20u32));
    }

    #[test]
    fn asymptotes() {
        assert_eq!(asymptotic_ratio(2).exact, r(3, 4));
        assert_eq!(asymptotic_ratio(4).exact, r(13, 16));
        assert_eq!(asymptotic_ratio(8).exact, r(221, 256));
        assert!((asymptotic_ratio(8).stirling - 0.859).abs() < 0.01);
    }

    #[test]
    fn hypergeometric_agrees() {
        assert_eq!(rho_hypergeometric(3, 1), r(6, 7));
        for r_ in 1..=3 {
            for q in 2 * r_ + 1..2 * r_ + 16 {
                assert_eq!(rho(q, r_), rho_hypergeometric(q, r_));
            }
        }
    }

    #[test]
    fn sweep_small() {
        let recs = sweep(
            &[2],
            QRange {
                lo: None,
                hi: Some(6),
            },
        )
        .unwrap();
        let ratios: Vec<_> = recs.iter().map(|x| x.ratio.clone()).collect();
        assert_eq!(ratios, vec![r(6, 7), r(5, 6), r(9, 11), r(21, 26)]);
        assert_eq!(recs[0].gamma, r(5, 1));
        let t4 = sweep(
            &[4],
            QRange {
                lo: Some(5),
                hi: Some(5),
            },
        )
        .unwrap();
        assert_eq!(t4[0].ratio, r(59, 66));
        assert_eq!(t4[0].f_pt, BigUint::from(1180u32));
    }

    #[test]
    fn sweep_sorted_and_matches_closed_form() {
        let recs = sweep(
            &[4, 2],
            QRange {
                lo: None,
                hi: Some(12),
            },
        )
        .unwrap();
        assert!(recs.windows(2).all(|w| (w[0].t, w[0].q) < (w[1].t, w[1].q)));
        for x in &recs {
            assert_eq!(x.f_pt, f_pt(x.q, x.r));
            assert!(x.ratio > x.asymptote);
        }
    }

    #[test]
    fn sweep_errors() {
        assert_eq!(
            sweep(&[3], QRange::default()).unwrap_err().to_string(),
            "even t required for theorem1 sweep; use --preset odd_t3"
        );
        assert!(matches!(
            sweep(
                &[2],
                QRange {
                    lo: None,
                    hi: Some(2)
                }
            ),
            Err(AnalysisError::EmptyRange { .. })
        ));
    }

    #[test]
    fn floats_twelve_digits() {
        assert_eq!(format_float(6.0 / 7.0), "0.857142857143");
        assert_eq!(format_float(0.75), "0.75");
        assert_eq!(format_float(5.0), "5");
        assert_eq!(format_float(123.456), "123.456");
    }

    #[test]
    fn csv_shape() {
        let recs = sweep(
            &[2],
            QRange {
                lo: None,
                hi: Some(4),
            },
        )
        .unwrap();
        let mut buf = Vec::new();
        write_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER.join(","));
        assert_eq!(lines[1], "7,2,3,1,36,42,6/7,0.857142857143,3/4,0.75,5/1");
        assert_eq!(lines.len(), 3);
    }
}
