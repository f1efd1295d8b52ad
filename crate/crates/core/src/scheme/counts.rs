use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::Serialize;

use super::{Types, UserGrouping};
use crate::combinatorics::binom;
use crate::json::{big_int_vecs, big_uint_vec, big_uint_vecs};

/// Subfile counts per type, per-user cached counts per group, and the cache
/// differences between consecutive groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountVectors {
    #[serde(rename = "F", serialize_with = "big_uint_vec")]
    pub f: Vec<BigUint>,
    #[serde(rename = "F_groups", serialize_with = "big_uint_vecs")]
    pub per_group: Vec<Vec<BigUint>>,
    #[serde(rename = "Delta", serialize_with = "big_int_vecs")]
    pub delta: Vec<Vec<BigInt>>,
}

impl CountVectors {
    /// The single difference vector of a two-group layout.
    pub fn delta1(&self) -> Option<&[BigInt]> {
        self.delta.first().map(|d| d.as_slice())
    }
}

pub fn count_vectors(types: &Types, grouping: &UserGrouping) -> CountVectors {
    let sizes = grouping.sizes();
    let f: Vec<BigUint> = types
        .subfile
        .iter()
        .map(|v| {
            sizes
                .iter()
                .zip(&v.0)
                .fold(BigUint::one(), |acc, (&q, &c)| {
                    acc * binom(q as u64, c as i64)
                })
        })
        .collect();
    // a fixed user of group i caches the subfiles whose support contains it
    let per_group: Vec<Vec<BigUint>> = (0..sizes.len())
        .map(|i| {
            types
                .subfile
                .iter()
                .map(|v| {
                    sizes
                        .iter()
                        .zip(&v.0)
                        .enumerate()
                        .fold(BigUint::one(), |acc, (j, (&q, &c))| {
                            if j == i {
                                acc * binom(q as u64 - 1, c as i64 - 1)
                            } else {
                                acc * binom(q as u64, c as i64)
                            }
                        })
                })
                .collect()
        })
        .collect();
    let delta = per_group
        .windows(2)
        .map(|w| {
            w[1].iter()
                .zip(&w[0])
                .map(|(b, a)| BigInt::from(b.clone()) - BigInt::from(a.clone()))
                .collect()
        })
        .collect();
    CountVectors {
        f,
        per_group,
        delta,
    }
}
