use std::fmt;
use std::str::FromStr;

use super::{SchemeError, SchemeSpec, SystemParams, TransmitterSelection, UserGrouping};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Theorem1,
    OddT3,
    EvenK,
    Jcm,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Theorem1 => "theorem1",
            Preset::OddT3 => "odd_t3",
            Preset::EvenK => "even_K",
            Preset::Jcm => "jcm",
        }
    }

    pub const ALL: [Preset; 4] = [Preset::Theorem1, Preset::OddT3, Preset::EvenK, Preset::Jcm];
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                format!("unknown preset {s:?} (expected theorem1, odd_t3, even_K or jcm)")
            })
    }
}

/// Ascending staircase: first group transmits everywhere except `s_1`.
fn ascending_plan(t: usize) -> TransmitterSelection {
    let mut d = vec![vec![1]];
    d.extend((2..=t + 2).map(|_| vec![0]));
    TransmitterSelection::new(d)
}

/// Hill: first group transmits up to the pivot `s_{r+1}`, second group after.
fn hill_plan(t: usize, pivot: usize) -> TransmitterSelection {
    let mut d = vec![vec![1]];
    for k in 2..=t + 1 {
        d.push(if k <= pivot { vec![0] } else { vec![1] });
    }
    d.push(vec![0]);
    TransmitterSelection::new(d)
}

/// Two-group plans with a caller-chosen layout, same selections as the
/// odd-K construction. Used for grouping overrides.
pub fn two_group_spec(
    params: SystemParams,
    grouping: UserGrouping,
) -> Result<SchemeSpec, SchemeError> {
    let t = params.t as usize;
    SchemeSpec::new(
        params,
        grouping,
        vec![ascending_plan(t), hill_plan(t, t / 2 + 1)],
    )
}

fn violated(p: Preset, c: impl Into<String>) -> SchemeError {
    SchemeError::PresetConstraintViolated {
        preset: p.name(),
        constraint: c.into(),
    }
}

pub fn preset(p: Preset, params: SystemParams) -> Result<SchemeSpec, SchemeError> {
    let (k, t) = (params.k, params.t);
    let q = params.q();
    let mut spec = match p {
        Preset::Theorem1 => {
            if k % 2 == 0 {
                return Err(violated(p, "K must be odd"));
            }
            if t % 2 != 0 {
                return Err(violated(p, "t must be even"));
            }
            if q < t + 1 {
                return Err(violated(p, format!("q >= t+1 required (q = {q}, t = {t})")));
            }
            let g = UserGrouping::new(vec![q + 1, q])?;
            two_group_spec(params, g)?
        }
        Preset::OddT3 => {
            if t != 3 {
                return Err(violated(p, "t must equal 3"));
            }
            if k % 2 == 0 {
                return Err(violated(p, "K must be odd"));
            }
            if q < 4 {
                return Err(violated(p, format!("q >= 4 required (q = {q})")));
            }
            let g = UserGrouping::new(vec![q + 1, q])?;
            two_group_spec(params, g)?
        }
        Preset::EvenK => {
            if k % 2 != 0 {
                return Err(violated(p, "K must be even"));
            }
            if t % 2 != 0 {
                return Err(violated(p, "t must be even"));
            }
            if q < t + 1 {
                return Err(violated(
                    p,
                    format!("q >= 2r+1 required (q = {q}, t = {t})"),
                ));
            }
            let g = UserGrouping::new(vec![q + 1, q - 1])?;
            two_group_spec(params, g)?
        }
        Preset::Jcm => {
            let g = UserGrouping::new(vec![k])?;
            SchemeSpec::new(params, g, vec![TransmitterSelection::new(vec![vec![0]])])?
        }
    };
    spec.preset = Some(p.name().to_string());
    Ok(spec)
}
