use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use super::{
    count_vectors, derive_types, integer_packet_sizes, solve_packet_ratio, CountVectors, FsVectors,
    PacketSizing, SchemeError, SchemeSpec, Types,
};
use crate::combinatorics::{binom, Rational};
use crate::json::big_uint;

/// A scheme with all of its static algebra derived and checked.
#[derive(Debug, Clone, Serialize)]
pub struct Blueprint {
    pub spec: SchemeSpec,
    pub types: Types,
    pub fs: FsVectors,
    pub counts: CountVectors,
    pub sizing: PacketSizing,
    /// Per-user cache in units per file; equal for every user.
    #[serde(serialize_with = "big_uint")]
    pub cache_units_per_file: BigUint,
    #[serde(serialize_with = "big_uint")]
    pub jcm_packets_per_file: BigUint,
    pub subpacketization_ratio: Rational,
}

impl Blueprint {
    pub fn derive(spec: SchemeSpec) -> Result<Self, SchemeError> {
        let types = derive_types(&spec.params, &spec.grouping)?;
        let fs = FsVectors::derive(&spec.plans, &types, &spec.grouping)?;
        let counts = count_vectors(&types, &spec.grouping);
        let gamma = solve_packet_ratio(&fs, &counts)?;
        let sizing = integer_packet_sizes(&gamma, &fs, &counts, spec.params.unit);
        let (k, t) = (spec.params.k as u64, spec.params.t as u64);
        let cache_units_per_file = &sizing.l * BigUint::from(t) / BigUint::from(k);
        let jcm_packets_per_file = binom(k, t as i64) * BigUint::from(t);
        let subpacketization_ratio = Rational::new(
            BigInt::from(sizing.packets_per_file.clone()),
            BigInt::from(jcm_packets_per_file.clone()),
        );
        Ok(Blueprint {
            spec,
            types,
            fs,
            counts,
            sizing,
            cache_units_per_file,
            jcm_packets_per_file,
            subpacketization_ratio,
        })
    }

    pub fn k(&self) -> u32 {
        self.spec.params.k
    }

    pub fn t(&self) -> u32 {
        self.spec.params.t
    }

    pub fn gamma(&self) -> &[Rational] {
        &self.sizing.gamma
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("blueprint serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{preset, Preset, SystemParams};

    fn bp(p: Preset, k: u32, t: u32) -> Blueprint {
        Blueprint::derive(preset(p, SystemParams::new(k, t, k, 1).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn k7_t2_document() {
        let b = bp(Preset::Theorem1, 7, 2);
        assert_eq!(b.gamma()[1], Rational::from_integer(5));
        assert_eq!(b.sizing.l, BigUint::from(84u32));
        assert_eq!(b.cache_units_per_file, BigUint::from(24u32));
        assert_eq!(b.jcm_packets_per_file, BigUint::from(42u32));
        assert_eq!(b.subpacketization_ratio, Rational::new(6, 7));
        let v: serde_json::Value = serde_json::from_str(&b.to_json()).unwrap();
        assert_eq!(v["fs"]["aggregate"], serde_json::json!([0, 2, 2]));
        assert_eq!(v["sizing"]["gamma"], serde_json::json!(["1/1", "5/1"]));
        assert_eq!(v["spec"]["params"]["K"], 7);
        assert_eq!(
            v["spec"]["plans"][0],
            serde_json::json!([[2], [1], [1], [1]])
        );
        assert_eq!(v["counts"]["Delta"], serde_json::json!([[2, 1, -3]]));
    }

    #[test]
    fn t3_document() {
        let b = bp(Preset::OddT3, 9, 3);
        assert_eq!(b.gamma()[1], Rational::new(7, 4));
        assert_eq!(b.sizing.packets_per_file, BigUint::from(240u32));
        assert_eq!(b.jcm_packets_per_file, BigUint::from(252u32));
        assert_eq!(b.subpacketization_ratio, Rational::new(20, 21));
        assert_eq!(b.cache_units_per_file, BigUint::from(420u32));
    }

    #[test]
    fn even_k_instances() {
        let cases = [
            (12, 2, (5, 1)),
            (14, 2, (6, 1)),
            (10, 2, (4, 1)),
            (20, 4, (17, 3)),
            (18, 4, (5, 1)),
            (24, 6, (133, 25)),
        ];
        for (k, t, (n, d)) in cases {
            let b = bp(Preset::EvenK, k, t);
            assert_eq!(b.gamma()[1], Rational::new(n, d), "K={k} t={t}");
        }
    }

    #[test]
    fn jcm_document() {
        let b = bp(Preset::Jcm, 5, 2);
        assert_eq!(b.fs.aggregate, vec![2]);
        assert_eq!(b.sizing.packets_per_file, BigUint::from(20u32));
        assert_eq!(b.sizing.l, BigUint::from(20u32));
        assert_eq!(b.subpacketization_ratio, Rational::one());
    }
}
