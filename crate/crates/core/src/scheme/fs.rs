use num_traits::Zero;
use serde::Serialize;

use super::types::instance_count;
use super::{SchemeError, TransmitterSelection, Types, UserGrouping};
use crate::combinatorics::{lcm_u64, TypeVector};

/// Packets of `involved` that a receiver in `component` needs from one
/// multicast group: the number of transmitters it can observe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFactor {
    pub component: usize,
    pub involved: TypeVector,
    pub factor: u64,
}

pub fn local_fs(dagger: &[usize], s: &TypeVector) -> Result<Vec<LocalFactor>, SchemeError> {
    if dagger.is_empty() {
        return Err(SchemeError::EmptySelection { group_type: 0 });
    }
    for &i in dagger {
        if i >= s.len() || s.get(i) == 0 {
            return Err(SchemeError::InvalidSelection {
                group_type: 0,
                reason: format!("component {} is empty in {s}", i + 1),
            });
        }
    }
    let tot: usize = dagger.iter().map(|&i| s.get(i)).sum();
    Ok((0..s.len())
        .filter(|&i| s.get(i) > 0)
        .map(|i| LocalFactor {
            component: i,
            involved: s.minus_one(i).expect("non-empty component"),
            factor: if dagger.contains(&i) { tot - 1 } else { tot } as u64,
        })
        .collect())
}

/// FS vector of one coupled group together with the number of messages each
/// transmitter sends per multicast group of each type (0 = silent).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntermediateFs {
    pub alpha: Vec<u64>,
    pub multipliers: Vec<u64>,
}

fn with_type(e: SchemeError, j: usize) -> SchemeError {
    match e {
        SchemeError::EmptySelection { .. } => SchemeError::EmptySelection { group_type: j + 1 },
        SchemeError::InvalidSelection { reason, .. } => SchemeError::InvalidSelection {
            group_type: j + 1,
            reason,
        },
        other => other,
    }
}

type Locals = Vec<(bool, Vec<LocalFactor>)>;

fn lcm_vector(
    plan: &TransmitterSelection,
    types: &Types,
    grouping: &UserGrouping,
) -> Result<(Vec<u64>, Locals), SchemeError> {
    if plan.daggers.len() != types.group.len() {
        return Err(SchemeError::LengthMismatch {
            expected: types.group.len(),
            got: plan.daggers.len(),
        });
    }
    let mut contributions: Vec<Vec<u64>> = vec![Vec::new(); types.subfile.len()];
    let mut locals = Vec::with_capacity(types.group.len());
    for (j, s) in types.group.iter().enumerate() {
        let present = !instance_count(grouping, s).is_zero();
        let l = local_fs(&plan.daggers[j], s).map_err(|e| with_type(e, j))?;
        if present {
            for f in &l {
                let idx = types
                    .subfile_index(&f.involved)
                    .expect("involved type exists");
                contributions[idx].push(f.factor);
            }
        }
        locals.push((present, l));
    }
    let alpha = contributions
        .iter()
        .map(|c| {
            if c.is_empty() || c.contains(&0) {
                0
            } else {
                c.iter().copied().fold(1, lcm_u64)
            }
        })
        .collect();
    Ok((alpha, locals))
}

/// Vector LCM over the local factors of the group types that actually occur.
/// A zero factor excludes the subfile type. Does not check that a delivery
/// realizing the vector exists; see [`intermediate_fs`].
pub fn fs_vector_lcm(
    plan: &TransmitterSelection,
    types: &Types,
    grouping: &UserGrouping,
) -> Result<Vec<u64>, SchemeError> {
    lcm_vector(plan, types, grouping).map(|(a, _)| a)
}

/// [`fs_vector_lcm`] plus the per-group-type message multipliers. Fails with
/// `IncompatibleLocals` when the receivers of one group type would need
/// different numbers of messages per transmitter.
pub fn intermediate_fs(
    plan: &TransmitterSelection,
    types: &Types,
    grouping: &UserGrouping,
    coupled_group: usize,
) -> Result<IntermediateFs, SchemeError> {
    let (alpha, locals) = lcm_vector(plan, types, grouping)?;
    let mut multipliers = Vec::with_capacity(types.group.len());
    for (j, (present, l)) in locals.iter().enumerate() {
        if !present {
            multipliers.push(0);
            continue;
        }
        let mut seen: Option<u64> = None;
        for f in l.iter().filter(|f| f.factor > 0) {
            let a = alpha[types.subfile_index(&f.involved).unwrap()];
            let m = a / f.factor;
            match seen {
                None => seen = Some(m),
                Some(prev) if prev == m => {}
                Some(prev) => {
                    return Err(SchemeError::IncompatibleLocals {
                        coupled_group: coupled_group + 1,
                        group_type: j + 1,
                        reason: format!(
                            "receivers need {prev} and {m} messages per transmitter in {}",
                            types.group[j]
                        ),
                    })
                }
            }
        }
        multipliers.push(seen.unwrap_or(0));
    }
    Ok(IntermediateFs { alpha, multipliers })
}

pub fn aggregate_fs(intermediate: &[Vec<u64>]) -> Result<Vec<u64>, SchemeError> {
    let Some(first) = intermediate.first() else {
        return Ok(Vec::new());
    };
    let mut out = vec![0u64; first.len()];
    for a in intermediate {
        if a.len() != out.len() {
            return Err(SchemeError::LengthMismatch {
                expected: out.len(),
                got: a.len(),
            });
        }
        for (o, x) in out.iter_mut().zip(a) {
            *o += x;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FsVectors {
    pub intermediate: Vec<Vec<u64>>,
    pub aggregate: Vec<u64>,
    pub multipliers: Vec<Vec<u64>>,
}

impl FsVectors {
    pub fn derive(
        plans: &[TransmitterSelection],
        types: &Types,
        grouping: &UserGrouping,
    ) -> Result<Self, SchemeError> {
        let per: Vec<IntermediateFs> = plans
            .iter()
            .enumerate()
            .map(|(g, p)| intermediate_fs(p, types, grouping, g))
            .collect::<Result<_, _>>()?;
        let intermediate: Vec<Vec<u64>> = per.iter().map(|x| x.alpha.clone()).collect();
        let aggregate = aggregate_fs(&intermediate)?;
        Ok(FsVectors {
            intermediate,
            aggregate,
            multipliers: per.into_iter().map(|x| x.multipliers).collect(),
        })
    }
}
