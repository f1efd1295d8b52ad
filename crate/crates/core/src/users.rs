use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest supported user id. Sets are single-word bitmasks.
pub const MAX_USERS: u32 = 63;

/// A set of users `1..=63`, ordered lexicographically by sorted member list.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct UserSet(u64);

impl UserSet {
    pub fn empty() -> Self {
        UserSet(0)
    }

    pub fn from_users(users: &[u32]) -> Self {
        let mut s = UserSet(0);
        for &u in users {
            s.insert(u);
        }
        s
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn insert(&mut self, u: u32) {
        assert!((1..=MAX_USERS).contains(&u), "user id {u} out of range");
        self.0 |= 1 << u;
    }

    pub fn contains(self, u: u32) -> bool {
        u <= MAX_USERS && self.0 & (1 << u) != 0
    }

    pub fn without(self, u: u32) -> UserSet {
        UserSet(self.0 & !(1u64 << u))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let u = bits.trailing_zeros();
                bits &= bits - 1;
                Some(u)
            }
        })
    }

    pub fn to_vec(self) -> Vec<u32> {
        self.iter().collect()
    }

    /// Number of members inside the id range `lo..=hi`.
    pub fn count_in(self, lo: u32, hi: u32) -> usize {
        if lo > hi {
            return 0;
        }
        let mask = (u64::MAX >> (63 - hi)) & (u64::MAX << lo);
        (self.0 & mask).count_ones() as usize
    }
}

impl Ord for UserSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        // shared prefix ends at the lowest differing id x; whoever holds x
        // comes first unless the other list has simply run out
        let x = diff.trailing_zeros();
        let above = if x == 63 { 0 } else { u64::MAX << (x + 1) };
        let (holder_is_self, other_bits) = if self.0 & (1 << x) != 0 {
            (true, other.0)
        } else {
            (false, self.0)
        };
        let other_continues = other_bits & above != 0;
        match (holder_is_self, other_continues) {
            (true, true) => Ordering::Less,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Greater,
            (false, false) => Ordering::Less,
        }
    }
}

impl PartialOrd for UserSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for UserSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, u) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{u}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for UserSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for UserSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for UserSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(deserializer)?;
        if let Some(&u) = v.iter().find(|&&u| u == 0 || u > MAX_USERS) {
            return Err(serde::de::Error::custom(format!(
                "user id {u} out of range"
            )));
        }
        Ok(UserSet::from_users(&v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_ops() {
        let s = UserSet::from_users(&[3, 1, 7]);
        assert_eq!(s.to_vec(), vec![1, 3, 7]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(3) && !s.contains(2));
        assert_eq!(s.without(3).to_vec(), vec![1, 7]);
        assert_eq!(s.count_in(1, 4), 2);
        assert_eq!(s.count_in(5, 7), 1);
        assert_eq!(s.to_string(), "{1,3,7}");
    }

    #[test]
    fn serde_roundtrip() {
        let s = UserSet::from_users(&[2, 5]);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, "[2,5]");
        assert_eq!(serde_json::from_str::<UserSet>(&j).unwrap(), s);
        assert!(serde_json::from_str::<UserSet>("[0]").is_err());
    }

    proptest! {
        #[test]
        fn order_matches_sorted_lists(a in prop::collection::btree_set(1u32..=63, 0..8),
                                      b in prop::collection::btree_set(1u32..=63, 0..8)) {
            let va: Vec<u32> = a.iter().copied().collect();
            let vb: Vec<u32> = b.iter().copied().collect();
            let sa = UserSet::from_users(&va);
            let sb = UserSet::from_users(&vb);
            prop_assert_eq!(sa.cmp(&sb), va.cmp(&vb));
        }
    }
}
