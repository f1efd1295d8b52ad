//! The symmetric baseline scheme (every t-subset's subfile split into t
//! equal packets, every member transmits), run through the general engine
//! as the single-group special case.

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::combinatorics::Rational;
use crate::json::big_uint;
use crate::scheme::{preset, Blueprint, Preset, SchemeError, SchemeSpec, SystemParams};
use crate::verifier::{simulate, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JcmSpec {
    #[serde(rename = "K")]
    pub k: u32,
    pub t: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub unit: u32,
}

impl JcmSpec {
    pub fn new(k: u32, t: u32, n: u32, unit: u32) -> Result<Self, SchemeError> {
        SystemParams::new(k, t, n, unit)?;
        Ok(JcmSpec { k, t, n, unit })
    }

    pub fn scheme(&self) -> SchemeSpec {
        let p = SystemParams::new(self.k, self.t, self.n, self.unit).expect("checked in new");
        preset(Preset::Jcm, p).expect("any valid params")
    }
}

pub fn jcm_construct(spec: &JcmSpec) -> Result<Blueprint, SchemeError> {
    Blueprint::derive(spec.scheme())
}

#[derive(Debug, Error)]
pub enum CompareError {
    #[error("schemes differ in (K, t): ({0}, {1}) vs ({2}, {3})")]
    Mismatch(u32, u32, u32, u32),
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    #[serde(rename = "K")]
    pub k: u32,
    pub t: u32,
    pub preset: Option<String>,
    #[serde(rename = "F_PT", serialize_with = "opt")]
    pub f_pt: Option<BigUint>,
    #[serde(rename = "F_JCM", serialize_with = "opt")]
    pub f_jcm: Option<BigUint>,
    pub rate_pt: Option<Rational>,
    pub rate_jcm: Option<Rational>,
    pub pt_pass: bool,
    pub jcm_pass: bool,
    pub same_rate: bool,
    pub smaller_f: bool,
    pub pass: bool,
    #[serde(skip)]
    pub reports: (VerificationReport, VerificationReport),
}

fn opt<S: serde::Serializer>(x: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => big_uint(v, s),
        None => s.serialize_none(),
    }
}

/// Simulates both schemes on the same demands and seed.
pub fn compare(
    pt: SchemeSpec,
    jcm: &JcmSpec,
    demands: &[u32],
    seed: u64,
) -> Result<Comparison, CompareError> {
    let p = pt.params;
    if (p.k, p.t) != (jcm.k, jcm.t) {
        return Err(CompareError::Mismatch(p.k, p.t, jcm.k, jcm.t));
    }
    let preset = pt.preset.clone();
    let a = simulate(pt, demands, seed).report;
    let b = simulate(jcm.scheme(), demands, seed).report;
    let same_rate = a.rate.is_some() && a.rate == b.rate;
    let smaller_f = match (&a.packets_per_file, &b.packets_per_file) {
        (Some(x), Some(y)) => x < y,
        _ => false,
    };
    Ok(Comparison {
        k: p.k,
        t: p.t,
        preset,
        f_pt: a.packets_per_file.clone(),
        f_jcm: b.packets_per_file.clone(),
        rate_pt: a.rate.clone(),
        rate_jcm: b.rate.clone(),
        pt_pass: a.pass,
        jcm_pass: b.pass,
        same_rate,
        smaller_f,
        pass: a.pass && b.pass && same_rate && smaller_f,
        reports: (a, b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::combinations;

    /// Packets per file counted straight from the definition: every
    /// t-subset of users, t packets each.
    fn direct_count(k: u32, t: u32) -> usize {
        let users: Vec<u32> = (1..=k).collect();
        combinations(&users, t as usize).len() * t as usize
    }

    #[test]
    fn construct_counts() {
        for (k, t, f) in [(5, 2, 20u32), (7, 2, 42), (4, 3, 12)] {
            let bp = jcm_construct(&JcmSpec::new(k, t, k, 1).unwrap()).unwrap();
            assert_eq!(bp.sizing.packets_per_file, BigUint::from(f));
            assert_eq!(direct_count(k, t), f as usize);
            assert_eq!(bp.fs.aggregate, vec![t as u64]);
            assert!(bp.sizing.ell.iter().all(|l| *l == BigUint::from(1u32)));
        }
    }

    #[test]
    fn direct_oracle_matches_engine() {
        for k in 2..=9 {
            for t in 1..k {
                let bp = jcm_construct(&JcmSpec::new(k, t, k, 1).unwrap()).unwrap();
                assert_eq!(
                    bp.sizing.packets_per_file,
                    BigUint::from(direct_count(k, t))
                );
            }
        }
    }

    #[test]
    fn small_rates() {
        let s = JcmSpec::new(4, 3, 4, 1).unwrap();
        let r = simulate(s.scheme(), &[1, 2, 3, 4], 0).report;
        assert!(r.pass);
        assert_eq!(r.rate, Some(Rational::new(1, 3)));
    }

    #[test]
    fn compare_example() {
        let pt = preset(Preset::Theorem1, SystemParams::new(7, 2, 7, 1).unwrap()).unwrap();
        let c = compare(
            pt,
            &JcmSpec::new(7, 2, 7, 1).unwrap(),
            &[1, 2, 3, 4, 5, 6, 7],
            0,
        )
        .unwrap();
        assert!(c.pass);
        assert_eq!(c.f_pt, Some(BigUint::from(36u32)));
        assert_eq!(c.f_jcm, Some(BigUint::from(42u32)));
        assert_eq!(c.rate_pt, Some(Rational::new(5, 2)));
        let pt = preset(Preset::Theorem1, SystemParams::new(7, 2, 7, 1).unwrap()).unwrap();
        assert!(compare(pt, &JcmSpec::new(7, 3, 7, 1).unwrap(), &[1; 7], 0).is_err());
    }

    #[test]
    fn invalid_spec() {
        assert!(JcmSpec::new(3, 3, 3, 1).is_err());
    }
}
