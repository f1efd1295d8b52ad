use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;
use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::ExchangeError;
use crate::combinatorics::enumerate_subsets_by_type;
use crate::scheme::Blueprint;
use crate::users::{UserSet, MAX_USERS};

/// `W_{file, support}^{(group), index}`; file, group and index are 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PacketId {
    pub file: u32,
    pub support: UserSet,
    pub group: u32,
    pub index: u32,
}

impl fmt::Debug for PacketId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "W[{}]{}^({}),{}",
            self.file, self.support, self.group, self.index
        )
    }
}

impl fmt::Display for PacketId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One packet slot of a file, independent of which file it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub subfile_type: usize,
    pub support: UserSet,
    pub group: u32,
    pub index: u32,
    pub offset: usize,
    pub len: usize,
}

/// Canonical packet order shared by every file: subfile type, support
/// (lexicographic), coupled group, index.
#[derive(Debug, Clone)]
pub struct PacketLayout {
    pub slots: Vec<Slot>,
    pub file_len: usize,
    lookup: HashMap<(UserSet, u32, u32), usize>,
}

impl PacketLayout {
    pub fn build(bp: &Blueprint) -> Result<Self, ExchangeError> {
        if bp.spec.params.k > MAX_USERS {
            return Err(ExchangeError::TooManyUsers(bp.spec.params.k));
        }
        let unit = bp.spec.params.unit as usize;
        let ell: Vec<usize> = bp
            .sizing
            .ell
            .iter()
            .map(|e| e.to_usize().map(|x| x * unit))
            .collect::<Option<_>>()
            .ok_or(ExchangeError::TooLarge)?;
        let groups = bp.spec.grouping.groups();
        let mut slots = Vec::new();
        let mut offset = 0usize;
        for (k, v) in bp.types.subfile.iter().enumerate() {
            if bp.fs.aggregate[k] == 0 {
                continue;
            }
            let supports = enumerate_subsets_by_type(&groups, v)?;
            for support in supports {
                for (g, alpha) in bp.fs.intermediate.iter().enumerate() {
                    for j in 1..=alpha[k] as u32 {
                        slots.push(Slot {
                            subfile_type: k,
                            support,
                            group: g as u32 + 1,
                            index: j,
                            offset,
                            len: ell[g],
                        });
                        offset = offset.checked_add(ell[g]).ok_or(ExchangeError::TooLarge)?;
                    }
                }
            }
        }
        let lookup = slots
            .iter()
            .enumerate()
            .map(|(i, s)| ((s.support, s.group, s.index), i))
            .collect();
        Ok(PacketLayout {
            slots,
            file_len: offset,
            lookup,
        })
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slot(&self, support: UserSet, group: u32, index: u32) -> Option<&Slot> {
        self.lookup
            .get(&(support, group, index))
            .map(|&i| &self.slots[i])
    }

    pub fn id(&self, file: u32, slot: &Slot) -> PacketId {
        PacketId {
            file,
            support: slot.support,
            group: slot.group,
            index: slot.index,
        }
    }
}

/// Deterministic source of file contents.
pub trait FileOracle {
    fn fill(&self, file: u32, buf: &mut [u8]);
}

/// Keyed ChaCha8 stream per file.
#[derive(Debug, Clone, Copy)]
pub struct ChaChaOracle {
    pub key: u64,
}

impl FileOracle for ChaChaOracle {
    fn fill(&self, file: u32, buf: &mut [u8]) {
        let mut h = Sha256::new();
        h.update(b"file");
        h.update(self.key.to_le_bytes());
        h.update(file.to_le_bytes());
        let seed: [u8; 32] = h.finalize().into();
        ChaCha8Rng::from_seed(seed).fill_bytes(buf);
    }
}

/// All files, each split into packets according to the shared layout.
#[derive(Debug, Clone)]
pub struct PacketStore {
    pub layout: PacketLayout,
    files: Vec<Vec<u8>>,
}

impl PacketStore {
    pub fn num_files(&self) -> u32 {
        self.files.len() as u32
    }

    pub fn file(&self, n: u32) -> &[u8] {
        &self.files[n as usize - 1]
    }

    pub fn packet(&self, id: &PacketId) -> Option<&[u8]> {
        let slot = self.layout.slot(id.support, id.group, id.index)?;
        let f = self.files.get((id.file as usize).checked_sub(1)?)?;
        Some(&f[slot.offset..slot.offset + slot.len])
    }

    pub fn packets_per_file(&self) -> usize {
        self.layout.len()
    }
}

pub fn split_files(bp: &Blueprint, oracle: &dyn FileOracle) -> Result<PacketStore, ExchangeError> {
    let layout = PacketLayout::build(bp)?;
    let expected = bp
        .sizing
        .l
        .to_usize()
        .and_then(|l| l.checked_mul(bp.spec.params.unit as usize))
        .ok_or(ExchangeError::TooLarge)?;
    debug_assert_eq!(expected, layout.file_len);
    let files = (1..=bp.spec.params.n)
        .map(|n| {
            let mut buf = vec![0u8; layout.file_len];
            oracle.fill(n, &mut buf);
            buf
        })
        .collect();
    Ok(PacketStore { layout, files })
}
