//! Runs a blueprint on bytes: packet splitting, placement, XOR delivery and
//! per-user decoding.

mod cache;
mod decode;
mod delivery;
mod store;

pub use cache::{build_caches, cache_target_bytes, fill_caches, Cache};
pub use decode::{decode, DecodedFile};
pub use delivery::{check_demands, generate_delivery, write_transcript, CodedMessage};
pub use store::{split_files, ChaChaOracle, FileOracle, PacketId, PacketLayout, PacketStore, Slot};

use thiserror::Error;

use crate::combinatorics::CombinatoricsError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExchangeError {
    #[error("simulation supports at most 63 users, got {0}")]
    TooManyUsers(u32),
    #[error("file length does not fit in memory")]
    TooLarge,
    #[error("demand vector has {got} entries, expected {expected}")]
    DemandLength { expected: usize, got: usize },
    #[error("user {user} demands file {file}, only {files} files exist")]
    DemandOutOfRange { user: u32, file: u32, files: u32 },
    #[error("cache sizes differ from the target {target} bytes: {per_user:?}")]
    MemoryMismatch {
        target: String,
        per_user: Vec<(u32, usize)>,
    },
    #[error("transmitter {user} does not cache {packet}")]
    TransmitterMissingPacket { user: u32, packet: PacketId },
    #[error("inconsistent delivery plan: {0}")]
    Inconsistent(String),
    #[error("user {user} cannot decode message {message}: {uncached} uncached constituents")]
    UndecodableMessage {
        user: u32,
        message: usize,
        uncached: usize,
    },
    #[error("user {user} never receives {packet}")]
    MissingPacket { user: u32, packet: PacketId },
    #[error("user {user} receives {packet} twice")]
    DuplicateDelivery { user: u32, packet: PacketId },
    #[error("user {user} decodes {packet}, which is not part of its demand")]
    UnexpectedPacket { user: u32, packet: PacketId },
    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
}
