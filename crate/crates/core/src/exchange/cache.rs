use std::collections::HashMap;

use num_bigint::BigUint;

use super::{ExchangeError, PacketId, PacketStore};
use crate::scheme::Blueprint;

#[derive(Debug, Clone)]
pub struct Cache {
    pub user: u32,
    contents: HashMap<PacketId, Vec<u8>>,
}

impl Cache {
    pub fn get(&self, id: &PacketId) -> Option<&[u8]> {
        self.contents.get(id).map(|v| v.as_slice())
    }

    pub fn contains(&self, id: &PacketId) -> bool {
        self.contents.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.contents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contents.is_empty()
    }

    pub fn total_bytes(&self) -> usize {
        self.contents.values().map(|v| v.len()).sum()
    }
}

/// Every user stores all packets whose support contains it.
pub fn fill_caches(bp: &Blueprint, store: &PacketStore) -> Vec<Cache> {
    (1..=bp.spec.params.k)
        .map(|u| {
            let mut contents = HashMap::new();
            for slot in store.layout.slots.iter().filter(|s| s.support.contains(u)) {
                for n in 1..=store.num_files() {
                    let id = store.layout.id(n, slot);
                    contents.insert(id, store.packet(&id).expect("slot exists").to_vec());
                }
            }
            Cache { user: u, contents }
        })
        .collect()
}

/// Target cache size `(t/K) N L unit` in bytes.
pub fn cache_target_bytes(bp: &Blueprint) -> BigUint {
    let p = &bp.spec.params;
    &bp.sizing.l * BigUint::from(p.t) * BigUint::from(p.n) * BigUint::from(p.unit)
        / BigUint::from(p.k)
}

/// Fills the caches and checks the memory identity for every user.
pub fn build_caches(bp: &Blueprint, store: &PacketStore) -> Result<Vec<Cache>, ExchangeError> {
    let caches = fill_caches(bp, store);
    let p = &bp.spec.params;
    // compare K * cached against t N L unit to avoid dividing
    let scaled_target =
        &bp.sizing.l * BigUint::from(p.t) * BigUint::from(p.n) * BigUint::from(p.unit);
    let bad: Vec<(u32, usize)> = caches
        .iter()
        .filter(|c| BigUint::from(c.total_bytes()) * BigUint::from(p.k) != scaled_target)
        .map(|c| (c.user, c.total_bytes()))
        .collect();
    if !bad.is_empty() {
        return Err(ExchangeError::MemoryMismatch {
            target: format!("{}/{}", scaled_target, p.k),
            per_user: bad,
        });
    }
    Ok(caches)
}
