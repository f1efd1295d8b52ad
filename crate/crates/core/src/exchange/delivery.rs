use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{Cache, ExchangeError, PacketId};
use crate::combinatorics::combinations;
use crate::scheme::Blueprint;
use crate::users::UserSet;

/// One XOR multicast. `constituents[i]` is intended for `receivers[i]`.
#[derive(Debug, Clone)]
pub struct CodedMessage {
    pub round: u32,
    pub group: UserSet,
    pub transmitter: u32,
    pub slot: u32,
    pub receivers: Vec<u32>,
    pub constituents: Vec<PacketId>,
    pub payload: Vec<u8>,
}

#[derive(Serialize)]
struct Constituent {
    receiver: u32,
    file: u32,
    support: UserSet,
    group: u32,
    index: u32,
}

#[derive(Serialize)]
struct TranscriptRecord<'a> {
    round: u32,
    #[serde(rename = "S")]
    group: &'a UserSet,
    transmitter: u32,
    slot: u32,
    constituents: Vec<Constituent>,
    payload_len: usize,
    payload_sha256: String,
}

impl CodedMessage {
    pub fn transcript_line(&self) -> String {
        let rec = TranscriptRecord {
            round: self.round,
            group: &self.group,
            transmitter: self.transmitter,
            slot: self.slot,
            constituents: self
                .receivers
                .iter()
                .zip(&self.constituents)
                .map(|(&receiver, id)| Constituent {
                    receiver,
                    file: id.file,
                    support: id.support,
                    group: id.group,
                    index: id.index,
                })
                .collect(),
            payload_len: self.payload.len(),
            payload_sha256: hex::encode(Sha256::digest(&self.payload)),
        };
        serde_json::to_string(&rec).expect("record serializes")
    }
}

pub fn write_transcript(
    messages: &[CodedMessage],
    out: &mut dyn std::io::Write,
) -> std::io::Result<()> {
    for m in messages {
        writeln!(out, "{}", m.transcript_line())?;
    }
    Ok(())
}

/// Receiver, its (transmitter, slot) pairs, and the packet index of each.
type Assignment = (u32, Vec<(u32, u32)>, Vec<u32>);

/// Random bijection from a receiver's (transmitter, slot) pairs onto packet
/// indices `1..=pairs.len()`, keyed on (seed, S, round, receiver).
fn bijection(seed: u64, s: UserSet, round: u32, receiver: u32, n: usize) -> Vec<u32> {
    let mut h = Sha256::new();
    h.update(b"bijection");
    h.update(seed.to_le_bytes());
    h.update(s.bits().to_le_bytes());
    h.update(round.to_le_bytes());
    h.update(receiver.to_le_bytes());
    let key: [u8; 32] = h.finalize().into();
    let mut perm: Vec<u32> = (1..=n as u32).collect();
    perm.shuffle(&mut ChaCha8Rng::from_seed(key));
    perm
}

pub fn check_demands(bp: &Blueprint, demands: &[u32]) -> Result<(), ExchangeError> {
    let p = &bp.spec.params;
    if demands.len() != p.k as usize {
        return Err(ExchangeError::DemandLength {
            expected: p.k as usize,
            got: demands.len(),
        });
    }
    if let Some((u, &d)) = demands.iter().enumerate().find(|(_, &d)| d == 0 || d > p.n) {
        return Err(ExchangeError::DemandOutOfRange {
            user: u as u32 + 1,
            file: d,
            files: p.n,
        });
    }
    Ok(())
}

/// Emits every round in order; within a round, multicast groups in
/// lexicographic order, transmitters ascending, then message slots.
pub fn generate_delivery(
    bp: &Blueprint,
    caches: &[Cache],
    demands: &[u32],
    seed: u64,
) -> Result<Vec<CodedMessage>, ExchangeError> {
    check_demands(bp, demands)?;
    let p = &bp.spec.params;
    let all: Vec<u32> = (1..=p.k).collect();
    let groups = combinations(&all, p.t as usize + 1);
    let mut out = Vec::new();
    for (g, plan) in bp.spec.plans.iter().enumerate() {
        let round = g as u32 + 1;
        let alpha = &bp.fs.intermediate[g];
        for users in &groups {
            let s = UserSet::from_users(users);
            let ty = bp.spec.grouping.type_of(s);
            let j = bp.types.group_index(&ty).expect("group type exists");
            let m = bp.fs.multipliers[g][j] as u32;
            if m == 0 {
                continue;
            }
            let dagger = &plan.daggers[j];
            let transmitters: Vec<u32> = users
                .iter()
                .copied()
                .filter(|&u| dagger.contains(&bp.spec.grouping.group_of(u).unwrap()))
                .collect();
            // per receiver: ordered (transmitter, slot) pairs and their indices
            let mut assign: Vec<Assignment> = Vec::new();
            for &y in users {
                let v = bp
                    .types
                    .subfile_index(&bp.spec.grouping.type_of(s.without(y)))
                    .unwrap();
                let pairs: Vec<(u32, u32)> = transmitters
                    .iter()
                    .filter(|&&x| x != y)
                    .flat_map(|&x| (1..=m).map(move |sl| (x, sl)))
                    .collect();
                if pairs.len() as u64 != alpha[v] {
                    return Err(ExchangeError::Inconsistent(format!(
                        "user {y} in {s} observes {} transmissions for {} packets",
                        pairs.len(),
                        alpha[v]
                    )));
                }
                let perm = bijection(seed, s, round, y, pairs.len());
                assign.push((y, pairs, perm));
            }
            for &x in &transmitters {
                let cache = &caches[x as usize - 1];
                for sl in 1..=m {
                    let mut receivers = Vec::with_capacity(users.len() - 1);
                    let mut constituents = Vec::with_capacity(users.len() - 1);
                    let mut payload: Option<Vec<u8>> = None;
                    for (y, pairs, perm) in &assign {
                        if *y == x {
                            continue;
                        }
                        let pos = pairs.iter().position(|&pr| pr == (x, sl)).unwrap();
                        let id = PacketId {
                            file: demands[*y as usize - 1],
                            support: s.without(*y),
                            group: round,
                            index: perm[pos],
                        };
                        let bytes =
                            cache
                                .get(&id)
                                .ok_or(ExchangeError::TransmitterMissingPacket {
                                    user: x,
                                    packet: id,
                                })?;
                        match payload.as_mut() {
                            None => payload = Some(bytes.to_vec()),
                            Some(acc) => acc.iter_mut().zip(bytes).for_each(|(a, b)| *a ^= b),
                        }
                        receivers.push(*y);
                        constituents.push(id);
                    }
                    out.push(CodedMessage {
                        round,
                        group: s,
                        transmitter: x,
                        slot: sl,
                        receivers,
                        constituents,
                        payload: payload.unwrap_or_default(),
                    });
                }
            }
        }
    }
    Ok(out)
}
