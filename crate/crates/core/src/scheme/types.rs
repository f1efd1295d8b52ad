use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use super::{SchemeError, SystemParams, UserGrouping};
use crate::combinatorics::{binom, TypeVector};

/// Subfile types `v_k`, multicast-group types `s_k`, and for each group type
/// the subfile types it involves (one per non-empty component).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Types {
    pub subfile: Vec<TypeVector>,
    pub group: Vec<TypeVector>,
    pub involved: Vec<Vec<usize>>,
}

impl Types {
    pub fn subfile_index(&self, v: &TypeVector) -> Option<usize> {
        self.subfile.iter().position(|x| x == v)
    }

    pub fn group_index(&self, s: &TypeVector) -> Option<usize> {
        self.group.iter().position(|x| x == s)
    }
}

/// Number of concrete subsets of a given type.
pub fn instance_count(grouping: &UserGrouping, ty: &TypeVector) -> BigUint {
    grouping
        .sizes()
        .iter()
        .zip(&ty.0)
        .fold(BigUint::one(), |acc, (&q, &c)| {
            acc * binom(q as u64, c as i64)
        })
}

pub fn derive_types(params: &SystemParams, grouping: &UserGrouping) -> Result<Types, SchemeError> {
    let t = params.t as usize;
    if grouping.total() != params.k {
        return Err(SchemeError::UnsupportedGrouping(format!(
            "group sizes sum to {}, K is {}",
            grouping.total(),
            params.k
        )));
    }
    let (subfile, group) = match grouping.sizes() {
        [_] => (vec![TypeVector(vec![t])], vec![TypeVector(vec![t + 1])]),
        [q1, q2] => {
            if (*q2 as usize) < t {
                return Err(SchemeError::UnsupportedGrouping(format!(
                    "both groups need at least t = {t} users, got ({q1},{q2})"
                )));
            }
            let v = (1..=t + 1)
                .map(|k| TypeVector(vec![k - 1, t + 1 - k]))
                .collect();
            let s = (1..=t + 2)
                .map(|k| TypeVector(vec![k - 1, t + 2 - k]))
                .collect();
            (v, s)
        }
        sizes => {
            return Err(SchemeError::UnsupportedGrouping(format!(
                "{} groups requested, at most 2 are supported",
                sizes.len()
            )))
        }
    };
    let involved = group
        .iter()
        .map(|s: &TypeVector| {
            (0..s.len())
                .filter_map(|i| s.minus_one(i))
                .map(|v| {
                    subfile
                        .iter()
                        .position(|x| *x == v)
                        .expect("involved type exists")
                })
                .collect()
        })
        .collect();
    Ok(Types {
        subfile,
        group,
        involved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(v: &[usize]) -> TypeVector {
        TypeVector(v.to_vec())
    }

    #[test]
    fn example_layout() {
        let p = SystemParams::new(7, 2, 7, 1).unwrap();
        let g = UserGrouping::new(vec![4, 3]).unwrap();
        let ty = derive_types(&p, &g).unwrap();
        assert_eq!(ty.subfile, vec![tv(&[0, 2]), tv(&[1, 1]), tv(&[2, 0])]);
        assert_eq!(
            ty.group,
            vec![tv(&[0, 3]), tv(&[1, 2]), tv(&[2, 1]), tv(&[3, 0])]
        );
        assert_eq!(ty.involved, vec![vec![0], vec![0, 1], vec![1, 2], vec![2]]);
    }

    #[test]
    fn single_group() {
        let p = SystemParams::new(7, 2, 7, 1).unwrap();
        let g = UserGrouping::new(vec![7]).unwrap();
        let ty = derive_types(&p, &g).unwrap();
        assert_eq!(ty.subfile, vec![tv(&[2])]);
        assert_eq!(ty.group, vec![tv(&[3])]);
        assert_eq!(ty.involved, vec![vec![0]]);
    }

    #[test]
    fn larger_instance() {
        let p = SystemParams::new(11, 4, 11, 1).unwrap();
        let g = UserGrouping::new(vec![6, 5]).unwrap();
        let ty = derive_types(&p, &g).unwrap();
        assert_eq!(ty.subfile.len(), 5);
        assert_eq!(ty.group.len(), 6);
        let total: BigUint = ty.subfile.iter().map(|v| instance_count(&g, v)).sum();
        assert_eq!(total, BigUint::from(330u32));
    }

    #[test]
    fn rejects_unsupported() {
        let p = SystemParams::new(9, 2, 9, 1).unwrap();
        let three = UserGrouping::new(vec![3, 3, 3]).unwrap();
        assert!(matches!(
            derive_types(&p, &three),
            Err(SchemeError::UnsupportedGrouping(_))
        ));
        let p = SystemParams::new(7, 4, 7, 1).unwrap();
        let small = UserGrouping::new(vec![4, 3]).unwrap();
        assert!(derive_types(&p, &small).is_err());
    }
}
