//! Static algebra of a packet-type scheme: types, FS vectors, count vectors,
//! packet-size ratios and integer packet sizes.

mod blueprint;
mod counts;
mod fs;
mod preset;
mod sizing;
mod types;

pub use blueprint::Blueprint;
pub use counts::{count_vectors, CountVectors};
pub use fs::{
    aggregate_fs, fs_vector_lcm, intermediate_fs, local_fs, FsVectors, IntermediateFs, LocalFactor,
};
pub use preset::{preset, two_group_spec, Preset};
pub use sizing::{integer_packet_sizes, mc_residual, solve_packet_ratio, PacketSizing};
pub use types::{derive_types, instance_count, Types};

use serde::Serialize;
use thiserror::Error;

use crate::combinatorics::CombinatoricsError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported grouping: {0}")]
    UnsupportedGrouping(String),
    #[error("group type {group_type} has an empty transmitter set")]
    EmptySelection { group_type: usize },
    #[error("group type {group_type}: {reason}")]
    InvalidSelection { group_type: usize, reason: String },
    #[error("coupled group {coupled_group}, group type {group_type}: {reason}")]
    IncompatibleLocals {
        coupled_group: usize,
        group_type: usize,
        reason: String,
    },
    #[error("vector length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("degenerate memory-constraint system: {0}")]
    DegenerateSystem(String),
    #[error("packet size ratio {index} is {value}, must be positive")]
    InvalidRatio { index: usize, value: String },
    #[error("{preset}: {constraint}")]
    PresetConstraintViolated {
        preset: &'static str,
        constraint: String,
    },
    #[error("{coupled} coupled groups cannot cover {distinct} distinct group sizes")]
    TooFewCoupledGroups { coupled: usize, distinct: usize },
    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
}

/// System-level parameters. `q` and `r` are derived, not stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemParams {
    pub k: u32,
    pub t: u32,
    pub n: u32,
    pub unit: u32,
}

impl SystemParams {
    pub fn new(k: u32, t: u32, n: u32, unit: u32) -> Result<Self, SchemeError> {
        let bad = |m: String| Err(SchemeError::InvalidParams(m));
        if t < 1 {
            return bad("t must be at least 1".into());
        }
        if k < t + 1 {
            return bad(format!("K must be at least t+1 = {}", t + 1));
        }
        if n < k {
            return bad(format!("N must be at least K = {k}"));
        }
        if unit == 0 {
            return bad("unit must be positive".into());
        }
        Ok(SystemParams { k, t, n, unit })
    }

    /// `(K-1)/2` for odd K, `K/2` for even K.
    pub fn q(&self) -> u32 {
        self.k / 2
    }

    pub fn r(&self) -> u32 {
        self.t / 2
    }
}

impl Serialize for SystemParams {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("SystemParams", 6)?;
        st.serialize_field("K", &self.k)?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("N", &self.n)?;
        st.serialize_field("unit", &self.unit)?;
        st.serialize_field("q", &self.q())?;
        st.serialize_field("r", &self.r())?;
        st.end()
    }
}

/// Ordered group sizes; group `i` holds consecutive user ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct UserGrouping {
    sizes: Vec<u32>,
}

impl UserGrouping {
    pub fn new(sizes: Vec<u32>) -> Result<Self, SchemeError> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(SchemeError::UnsupportedGrouping(
                "group sizes must be positive".into(),
            ));
        }
        if sizes.windows(2).any(|w| w[0] < w[1]) {
            return Err(SchemeError::UnsupportedGrouping(
                "group sizes must be non-increasing".into(),
            ));
        }
        Ok(UserGrouping { sizes })
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn num_groups(&self) -> usize {
        self.sizes.len()
    }

    pub fn total(&self) -> u32 {
        self.sizes.iter().sum()
    }

    /// Number of distinct group sizes (unique sets).
    pub fn distinct_sizes(&self) -> usize {
        let mut s = self.sizes.clone();
        s.dedup();
        s.len()
    }

    /// Inclusive user-id range of group `i`.
    pub fn range(&self, i: usize) -> (u32, u32) {
        let lo = 1 + self.sizes[..i].iter().sum::<u32>();
        (lo, lo + self.sizes[i] - 1)
    }

    pub fn members(&self, i: usize) -> Vec<u32> {
        let (lo, hi) = self.range(i);
        (lo..=hi).collect()
    }

    pub fn groups(&self) -> Vec<Vec<u32>> {
        (0..self.sizes.len()).map(|i| self.members(i)).collect()
    }

    pub fn group_of(&self, user: u32) -> Option<usize> {
        (0..self.sizes.len()).find(|&i| {
            let (lo, hi) = self.range(i);
            (lo..=hi).contains(&user)
        })
    }

    pub fn type_of(&self, set: crate::users::UserSet) -> crate::combinatorics::TypeVector {
        crate::combinatorics::TypeVector(
            (0..self.sizes.len())
                .map(|i| {
                    let (lo, hi) = self.range(i);
                    set.count_in(lo, hi)
                })
                .collect(),
        )
    }
}

/// Dagger sets for one coupled group, indexed by multicast-group type.
/// Component indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransmitterSelection {
    pub daggers: Vec<Vec<usize>>,
}

impl TransmitterSelection {
    pub fn new(daggers: Vec<Vec<usize>>) -> Self {
        let daggers = daggers
            .into_iter()
            .map(|mut d| {
                d.sort_unstable();
                d.dedup();
                d
            })
            .collect();
        TransmitterSelection { daggers }
    }
}

impl Serialize for TransmitterSelection {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        // one-based component labels on the wire
        serializer.collect_seq(
            self.daggers
                .iter()
                .map(|d| d.iter().map(|i| i + 1).collect::<Vec<_>>()),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeSpec {
    pub preset: Option<String>,
    pub params: SystemParams,
    pub grouping: UserGrouping,
    pub plans: Vec<TransmitterSelection>,
}

impl SchemeSpec {
    pub fn new(
        params: SystemParams,
        grouping: UserGrouping,
        plans: Vec<TransmitterSelection>,
    ) -> Result<Self, SchemeError> {
        if grouping.total() != params.k {
            return Err(SchemeError::UnsupportedGrouping(format!(
                "group sizes sum to {}, K is {}",
                grouping.total(),
                params.k
            )));
        }
        if plans.len() < grouping.distinct_sizes() {
            return Err(SchemeError::TooFewCoupledGroups {
                coupled: plans.len(),
                distinct: grouping.distinct_sizes(),
            });
        }
        Ok(SchemeSpec {
            preset: None,
            params,
            grouping,
            plans,
        })
    }

    pub fn coupled_groups(&self) -> usize {
        self.plans.len()
    }
}
