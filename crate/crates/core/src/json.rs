//! Serde helpers: big integers go out as JSON numbers when they fit in 64
//! bits and as decimal strings otherwise.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::ser::SerializeSeq;
use serde::Serializer;

pub fn big_uint<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match x.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.collect_str(x),
    }
}

pub fn big_int<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.collect_str(x),
    }
}

struct U<'a>(&'a BigUint);

impl serde::Serialize for U<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        big_uint(self.0, s)
    }
}

struct I<'a>(&'a BigInt);

impl serde::Serialize for I<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        big_int(self.0, s)
    }
}

pub fn big_uint_vec<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(U))
}

pub fn big_int_vec<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(I))
}

pub fn big_uint_vecs<S: Serializer>(v: &[Vec<BigUint>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for row in v {
        seq.serialize_element(&row.iter().map(U).collect::<Vec<_>>())?;
    }
    seq.end()
}

pub fn big_int_vecs<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for row in v {
        seq.serialize_element(&row.iter().map(I).collect::<Vec<_>>())?;
    }
    seq.end()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(serde::Serialize)]
    struct W {
        #[serde(serialize_with = "big_uint")]
        small: BigUint,
        #[serde(serialize_with = "big_uint")]
        large: BigUint,
        #[serde(serialize_with = "big_int_vec")]
        signed: Vec<BigInt>,
    }

    #[test]
    fn numbers_or_strings() {
        let w = W {
            small: BigUint::from(84u32),
            large: BigUint::from(u64::MAX) * 10u32,
            signed: vec![BigInt::from(-3), BigInt::from(2)],
        };
        assert_eq!(
            serde_json::to_string(&w).unwrap(),
            r#"{"small":84,"large":"184467440737095516150","signed":[-3,2]}"#
        );
    }
}
