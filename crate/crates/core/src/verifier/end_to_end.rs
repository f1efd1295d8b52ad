use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use super::{all_pass, Check};
use crate::combinatorics::Rational;
use crate::exchange::{
    check_demands, decode, fill_caches, generate_delivery, split_files, Cache, ChaChaOracle,
    CodedMessage,
};
use crate::json::big_uint;
use crate::scheme::{Blueprint, SchemeSpec};

#[derive(Debug, Clone, Serialize)]
pub struct UserDecode {
    pub user: u32,
    pub file: u32,
    pub pass: bool,
    pub decoded_packets: usize,
    pub messages_used: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MemoryCheck {
    pub user: u32,
    pub bytes: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub preset: Option<String>,
    #[serde(rename = "K")]
    pub k: u32,
    pub t: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub unit: u32,
    pub seed: u64,
    pub demands: Vec<u32>,
    pub gamma: Vec<Rational>,
    #[serde(rename = "L", serialize_with = "opt_big_uint")]
    pub l: Option<BigUint>,
    #[serde(serialize_with = "opt_big_uint")]
    pub packets_per_file: Option<BigUint>,
    #[serde(serialize_with = "opt_big_uint")]
    pub jcm_packets_per_file: Option<BigUint>,
    pub messages: usize,
    pub transmitted_units: Option<Rational>,
    pub rate: Option<Rational>,
    pub expected_rate: Rational,
    pub rate_ok: bool,
    /// Cache target in bytes, `t N L unit / K`.
    pub memory_target: Option<Rational>,
    pub memory: Vec<MemoryCheck>,
    pub memory_ok: bool,
    pub dof_ok: bool,
    pub decode: Vec<UserDecode>,
    pub decode_ok: bool,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub first_failure: Option<String>,
}

fn opt_big_uint<S: serde::Serializer>(x: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => big_uint(v, s),
        None => s.serialize_none(),
    }
}

impl VerificationReport {
    fn empty(spec: &SchemeSpec, demands: &[u32], seed: u64) -> Self {
        let p = &spec.params;
        VerificationReport {
            preset: spec.preset.clone(),
            k: p.k,
            t: p.t,
            n: p.n,
            unit: p.unit,
            seed,
            demands: demands.to_vec(),
            gamma: Vec::new(),
            l: None,
            packets_per_file: None,
            jcm_packets_per_file: None,
            messages: 0,
            transmitted_units: None,
            rate: None,
            expected_rate: Rational::new(p.k - p.t, p.t),
            rate_ok: false,
            memory_target: None,
            memory: Vec::new(),
            memory_ok: false,
            dof_ok: false,
            decode: Vec::new(),
            decode_ok: false,
            checks: Vec::new(),
            pass: false,
            first_failure: None,
        }
    }

    fn push(&mut self, c: Check) {
        if !c.pass && self.first_failure.is_none() {
            self.first_failure = Some(format!("{}: {}", c.id, c.detail));
        }
        self.checks.push(c);
    }

    fn finish(mut self) -> Self {
        self.pass = !self.checks.is_empty() && all_pass(&self.checks);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub struct Simulation {
    pub report: VerificationReport,
    pub blueprint: Option<Blueprint>,
    pub messages: Vec<CodedMessage>,
}

/// Receivers of a message must number `t`, and each must miss exactly the
/// constituent meant for it.
fn dof_violation(m: &CodedMessage, caches: &[Cache], t: usize) -> Option<String> {
    if m.receivers.len() != t {
        return Some(format!("{} receivers, expected {t}", m.receivers.len()));
    }
    for (i, &y) in m.receivers.iter().enumerate() {
        let cache = &caches[y as usize - 1];
        for (j, id) in m.constituents.iter().enumerate() {
            if (i == j) == cache.contains(id) {
                let what = if i == j { "already caches" } else { "lacks" };
                return Some(format!("receiver {y} {what} {id}"));
            }
        }
    }
    None
}

/// Splits, places, delivers and decodes on real bytes. File contents come
/// from a ChaCha stream keyed by `seed`; the same seed keys the delivery
/// bijections.
pub fn simulate(spec: SchemeSpec, demands: &[u32], seed: u64) -> Simulation {
    let mut rep = VerificationReport::empty(&spec, demands, seed);
    let fail = |mut rep: VerificationReport, id: &str, detail: String| {
        rep.push(Check::new(id, false, detail));
        Simulation {
            report: rep.finish(),
            blueprint: None,
            messages: Vec::new(),
        }
    };

    let bp = match Blueprint::derive(spec) {
        Ok(b) => b,
        Err(e) => return fail(rep, "derive", e.to_string()),
    };
    rep.gamma = bp.gamma().to_vec();
    rep.l = Some(bp.sizing.l.clone());
    rep.packets_per_file = Some(bp.sizing.packets_per_file.clone());
    rep.jcm_packets_per_file = Some(bp.jcm_packets_per_file.clone());
    rep.push(Check::new(
        "derive",
        true,
        format!(
            "gamma = {:?}",
            bp.gamma().iter().map(|g| g.to_string()).collect::<Vec<_>>()
        ),
    ));
    if let Err(e) = check_demands(&bp, demands) {
        return fail(rep, "demands", e.to_string());
    }
    let store = match split_files(&bp, &ChaChaOracle { key: seed }) {
        Ok(s) => s,
        Err(e) => return fail(rep, "split", e.to_string()),
    };
    let p = bp.spec.params;
    let file_bytes = BigInt::from(bp.sizing.l.clone()) * BigInt::from(p.unit);

    // memory: K * cached == t * N * L * unit
    let caches = fill_caches(&bp, &store);
    let target = Rational::new(&file_bytes * BigInt::from(p.t) * BigInt::from(p.n), p.k);
    rep.memory = caches
        .iter()
        .map(|c| MemoryCheck {
            user: c.user,
            bytes: c.total_bytes(),
            pass: Rational::from_integer(c.total_bytes() as i64) == target,
        })
        .collect();
    rep.memory_ok = rep.memory.iter().all(|m| m.pass);
    let bad_mem = rep.memory.iter().find(|m| !m.pass).map(|m| {
        format!(
            "user {} caches {} bytes, target {}",
            m.user, m.bytes, target
        )
    });
    rep.memory_target = Some(target.clone());
    rep.push(Check::new(
        "memory",
        rep.memory_ok,
        bad_mem.unwrap_or_else(|| format!("every user caches {target} bytes")),
    ));

    let messages = match generate_delivery(&bp, &caches, demands, seed) {
        Ok(m) => m,
        Err(e) => {
            let mut s = fail(rep, "delivery", e.to_string());
            s.blueprint = Some(bp);
            return s;
        }
    };
    rep.messages = messages.len();

    let bad_dof = messages.iter().enumerate().find_map(|(i, m)| {
        dof_violation(m, &caches, p.t as usize).map(|e| format!("message {i}: {e}"))
    });
    rep.dof_ok = bad_dof.is_none();
    rep.push(Check::new(
        "dof",
        rep.dof_ok,
        bad_dof.unwrap_or_else(|| {
            format!(
                "all {} messages serve t = {} receivers",
                messages.len(),
                p.t
            )
        }),
    ));

    for c in &caches {
        let want = demands[c.user as usize - 1];
        let d = match decode(&store.layout, c, &messages, demands) {
            Ok(d) if d.bytes == store.file(want) => UserDecode {
                user: c.user,
                file: want,
                pass: true,
                decoded_packets: d.decoded_total(),
                messages_used: d.messages_used,
                error: None,
            },
            Ok(d) => UserDecode {
                user: c.user,
                file: want,
                pass: false,
                decoded_packets: d.decoded_total(),
                messages_used: d.messages_used,
                error: Some("decoded bytes differ from the file".into()),
            },
            Err(e) => UserDecode {
                user: c.user,
                file: want,
                pass: false,
                decoded_packets: 0,
                messages_used: 0,
                error: Some(e.to_string()),
            },
        };
        rep.decode.push(d);
    }
    rep.decode_ok = rep.decode.iter().all(|d| d.pass);
    let bad_dec = rep
        .decode
        .iter()
        .find(|d| !d.pass)
        .map(|d| format!("user {}: {}", d.user, d.error.as_deref().unwrap_or("")));
    rep.push(Check::new(
        "decode",
        rep.decode_ok,
        bad_dec.unwrap_or_else(|| format!("all {} users recover their file", p.k)),
    ));

    let sent: usize = messages.iter().map(|m| m.payload.len()).sum();
    let rate = Rational::new(sent as i64, file_bytes.clone());
    rep.transmitted_units = Some(Rational::new(sent as i64, p.unit));
    rep.rate_ok = rate == rep.expected_rate;
    rep.push(Check::new(
        "rate",
        rep.rate_ok,
        format!("rate {rate}, expected {}", rep.expected_rate),
    ));
    rep.rate = Some(rate);

    Simulation {
        report: rep.finish(),
        blueprint: Some(bp),
        messages,
    }
}

pub fn verify_end_to_end(spec: SchemeSpec, demands: &[u32], seed: u64) -> VerificationReport {
    simulate(spec, demands, seed).report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{preset, Preset, SystemParams, TransmitterSelection};

    fn spec(p: Preset, k: u32, t: u32) -> SchemeSpec {
        preset(p, SystemParams::new(k, t, k, 1).unwrap()).unwrap()
    }

    fn distinct(k: u32) -> Vec<u32> {
        (1..=k).collect()
    }

    #[test]
    fn k7_t2_passes() {
        let r = verify_end_to_end(spec(Preset::Theorem1, 7, 2), &distinct(7), 0);
        assert!(r.pass, "{:?}", r.first_failure);
        assert_eq!(r.rate, Some(Rational::new(5, 2)));
        assert_eq!(r.packets_per_file, Some(BigUint::from(36u32)));
        assert_eq!(r.transmitted_units, Some(Rational::new(210, 1)));
        assert_eq!(r.messages, 90);
    }

    #[test]
    fn odd_t3_and_jcm_pass() {
        let r = verify_end_to_end(spec(Preset::OddT3, 9, 3), &distinct(9), 1);
        assert!(r.pass, "{:?}", r.first_failure);
        assert_eq!(r.rate, Some(Rational::new(2, 1)));
        let r = verify_end_to_end(spec(Preset::Jcm, 5, 2), &distinct(5), 0);
        assert!(r.pass);
        assert_eq!(r.rate, Some(Rational::new(3, 2)));
        assert_eq!(r.packets_per_file, Some(BigUint::from(20u32)));
    }

    #[test]
    fn repeated_demands() {
        let r = verify_end_to_end(spec(Preset::Theorem1, 7, 2), &[2; 7], 3);
        assert!(r.pass);
    }

    #[test]
    fn failures_are_reported_not_raised() {
        // bad demand vector
        let r = verify_end_to_end(spec(Preset::Theorem1, 7, 2), &[1, 2], 0);
        assert!(!r.pass);
        assert!(r.first_failure.unwrap().starts_with("demands"));
        // a selection whose memory constraint is degenerate
        let mut s = spec(Preset::Theorem1, 7, 2);
        s.plans[1] = s.plans[0].clone();
        let r = verify_end_to_end(s, &distinct(7), 0);
        assert!(!r.pass);
        assert!(r.first_failure.unwrap().starts_with("derive"));
        // an incompatible selection
        let mut s = spec(Preset::Theorem1, 7, 2);
        s.plans[0] = TransmitterSelection::new(vec![vec![1], vec![0, 1], vec![0], vec![0]]);
        let r = verify_end_to_end(s, &distinct(7), 0);
        assert!(!r.pass);
        assert!(r
            .first_failure
            .unwrap()
            .contains("messages per transmitter"));
    }

    #[test]
    fn report_serializes() {
        let r = verify_end_to_end(spec(Preset::Theorem1, 7, 2), &distinct(7), 0);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["rate"], "5/2");
        assert_eq!(v["L"], 84);
        assert_eq!(v["pass"], true);
        assert_eq!(v["decode"].as_array().unwrap().len(), 7);
    }
}
