//! Exact integer/rational arithmetic and subset enumeration by type.
//!
//! Everything here is a pure function. Binomials are arbitrary precision,
//! rationals are always kept in canonical form (positive denominator,
//! coprime parts).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::users::UserSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    #[error("type component {index} is {wanted} but group {index} has only {available} users")]
    ComponentTooLarge {
        index: usize,
        wanted: usize,
        available: usize,
    },
    #[error("type vector has {got} components, grouping has {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("j = {j} is outside the support [0:{t}]")]
    OutOfSupport { j: i64, t: u64 },
    #[error("hypergeometric parameters require 1 <= t <= q (got q = {q}, t = {t})")]
    InvalidParameters { q: u64, t: u64 },
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}

// ============================================================================
// Rational
// ============================================================================

/// Exact rational number in canonical form.
///
/// Displays and serializes as `"p/q"`, always with an explicit denominator
/// (so `5` is written `"5/1"`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Self {
        let d: BigInt = denominator.into();
        assert!(!d.is_zero(), "zero denominator");
        Rational(BigRational::new(numerator.into(), d))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Exact division. Panics on a zero divisor.
    pub fn checked_div(&self, other: &Rational) -> Option<Rational> {
        if other.is_zero() {
            None
        } else {
            Some(Rational(&self.0 / &other.0))
        }
    }

    pub fn recip(&self) -> Option<Rational> {
        Rational::one().checked_div(self)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = CombinatoricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CombinatoricsError::ParseRational(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::new(n, d))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($tr::$method(self.0, rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational($tr::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

// ============================================================================
// Integers
// ============================================================================

/// Binomial coefficient C(n, k); zero outside `0 <= k <= n`.
pub fn binom(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Binomial with a possibly negative top argument treated as zero.
pub fn binom_i(n: i64, k: i64) -> BigInt {
    if n < 0 {
        return BigInt::zero();
    }
    BigInt::from(binom(n as u64, k))
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Inner product of two integer vectors of equal length.
pub fn dot(a: &[i64], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| BigInt::from(*x) * y).sum()
}

pub fn ordering_sign(x: &BigInt) -> Ordering {
    x.cmp(&BigInt::zero())
}

// ============================================================================
// Types and subsets
// ============================================================================

/// Ordered component sizes of a subset projected onto the user groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TypeVector(pub Vec<usize>);

impl TypeVector {
    pub fn new(entries: Vec<usize>) -> Self {
        TypeVector(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i]
    }

    /// The type left after removing one user of component `i`.
    pub fn minus_one(&self, i: usize) -> Option<TypeVector> {
        if self.0[i] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Some(TypeVector(v))
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// All `k`-subsets of `users` (sorted ascending) in lexicographic order.
pub fn combinations(users: &[u32], k: usize) -> Vec<Vec<u32>> {
    let n = users.len();
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| users[i]).collect());
        // advance the rightmost index that still has room
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        let i = i - 1;
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Every subset of `[K]` whose projection onto the groups has the given
/// component sizes, in lexicographic order of its sorted user list.
pub fn enumerate_subsets_by_type(
    groups: &[Vec<u32>],
    ty: &TypeVector,
) -> Result<Vec<UserSet>, CombinatoricsError> {
    if ty.len() != groups.len() {
        return Err(CombinatoricsError::LengthMismatch {
            expected: groups.len(),
            got: ty.len(),
        });
    }
    for (i, (g, &want)) in groups.iter().zip(&ty.0).enumerate() {
        if want > g.len() {
            return Err(CombinatoricsError::ComponentTooLarge {
                index: i,
                wanted: want,
                available: g.len(),
            });
        }
    }
    // cartesian product of per-group combinations; groups occupy increasing
    // id ranges, so product order is lexicographic on the merged list
    let mut acc = vec![UserSet::empty()];
    for (g, &want) in groups.iter().zip(&ty.0) {
        let parts = combinations(g, want);
        let mut next = Vec::with_capacity(acc.len() * parts.len());
        for base in &acc {
            for part in &parts {
                let mut s = *base;
                for &u in part {
                    s.insert(u);
                }
                next.push(s);
            }
        }
        acc = next;
    }
    acc.sort();
    Ok(acc)
}

/// Pr(J = j) for J ~ Hypergeo(population 2q+1, successes q+1, draws t).
pub fn hypergeo_pmf(q: u64, t: u64, j: i64) -> Result<Rational, CombinatoricsError> {
    if t == 0 || t > q {
        return Err(CombinatoricsError::InvalidParameters { q, t });
    }
    if j < 0 || j as u64 > t {
        return Err(CombinatoricsError::OutOfSupport { j, t });
    }
    let num = binom(q + 1, j) * binom(q, t as i64 - j);
    let den = binom(2 * q + 1, t as i64);
    Ok(Rational::new(BigInt::from(num), BigInt::from(den)))
}
