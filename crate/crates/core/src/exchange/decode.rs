use std::collections::{BTreeMap, HashMap};

use super::{Cache, CodedMessage, ExchangeError, PacketId, PacketLayout};

#[derive(Debug, Clone)]
pub struct DecodedFile {
    pub user: u32,
    pub file: u32,
    pub bytes: Vec<u8>,
    /// Decoded (not cached) packets per (subfile type, coupled group), 0-based
    /// type index and 1-based group.
    pub decoded_counts: BTreeMap<(usize, u32), usize>,
    /// Messages this user listened to.
    pub messages_used: usize,
}

impl DecodedFile {
    pub fn decoded_total(&self) -> usize {
        self.decoded_counts.values().sum()
    }
}

/// Recovers the demanded file of `cache.user` from its cache and the
/// messages it can hear.
pub fn decode(
    layout: &PacketLayout,
    cache: &Cache,
    messages: &[CodedMessage],
    demands: &[u32],
) -> Result<DecodedFile, ExchangeError> {
    let user = cache.user;
    let file = *demands
        .get(user as usize - 1)
        .ok_or(ExchangeError::DemandLength {
            expected: user as usize,
            got: demands.len(),
        })?;
    let mut decoded: HashMap<PacketId, Vec<u8>> = HashMap::new();
    let mut used = 0;
    for (mi, msg) in messages.iter().enumerate() {
        if msg.transmitter == user || !msg.group.contains(user) {
            continue;
        }
        used += 1;
        let mut missing = Vec::new();
        let mut acc = msg.payload.clone();
        for id in &msg.constituents {
            match cache.get(id) {
                Some(b) => acc.iter_mut().zip(b).for_each(|(a, x)| *a ^= x),
                None => missing.push(*id),
            }
        }
        if missing.len() != 1 {
            return Err(ExchangeError::UndecodableMessage {
                user,
                message: mi,
                uncached: missing.len(),
            });
        }
        let id = missing[0];
        if decoded.insert(id, acc).is_some() {
            return Err(ExchangeError::DuplicateDelivery { user, packet: id });
        }
    }

    let mut bytes = Vec::with_capacity(layout.file_len);
    let mut counts = BTreeMap::new();
    for slot in &layout.slots {
        let id = layout.id(file, slot);
        if let Some(b) = cache.get(&id) {
            bytes.extend_from_slice(b);
        } else if let Some(b) = decoded.remove(&id) {
            bytes.extend_from_slice(&b);
            *counts.entry((slot.subfile_type, slot.group)).or_insert(0) += 1;
        } else {
            return Err(ExchangeError::MissingPacket { user, packet: id });
        }
    }
    // anything left over was delivered but is not part of the demanded file
    if let Some((&id, _)) = decoded.iter().min_by_key(|(id, _)| **id) {
        return Err(ExchangeError::UnexpectedPacket { user, packet: id });
    }
    Ok(DecodedFile {
        user,
        file,
        bytes,
        decoded_counts: counts,
        messages_used: used,
    })
}
