use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{CountVectors, FsVectors, SchemeError};
use crate::combinatorics::Rational;
use crate::json::{big_uint, big_uint_vec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PacketSizing {
    pub gamma: Vec<Rational>,
    /// Packet size per coupled group, in units.
    #[serde(serialize_with = "big_uint_vec")]
    pub ell: Vec<BigUint>,
    /// File length in units.
    #[serde(rename = "L", serialize_with = "big_uint")]
    pub l: BigUint,
    /// Packets per file, `alpha_global . F`.
    #[serde(serialize_with = "big_uint")]
    pub packets_per_file: BigUint,
    pub unit: u32,
}

fn alpha_dot(alpha: &[u64], v: &[BigInt]) -> BigInt {
    alpha.iter().zip(v).map(|(&a, x)| BigInt::from(a) * x).sum()
}

fn alpha_dot_u(alpha: &[u64], v: &[BigUint]) -> BigUint {
    alpha
        .iter()
        .zip(v)
        .map(|(&a, x)| BigUint::from(a) * x)
        .sum()
}

/// `alpha^(g) . Delta_i` for every difference vector `i` and coupled group `g`.
pub fn mc_coefficients(fs: &FsVectors, counts: &CountVectors) -> Vec<Vec<BigInt>> {
    counts
        .delta
        .iter()
        .map(|d| fs.intermediate.iter().map(|a| alpha_dot(a, d)).collect())
        .collect()
}

/// Residual of every memory-constraint equation under the given ratios.
pub fn mc_residual(gamma: &[Rational], fs: &FsVectors, counts: &CountVectors) -> Vec<Rational> {
    mc_coefficients(fs, counts)
        .into_iter()
        .map(|row| {
            row.into_iter()
                .zip(gamma)
                .map(|(c, g)| &Rational::from_integer(c) * g)
                .sum()
        })
        .collect()
}

/// Solves the memory constraint for `gamma` with `gamma_1 = 1`.
pub fn solve_packet_ratio(
    fs: &FsVectors,
    counts: &CountVectors,
) -> Result<Vec<Rational>, SchemeError> {
    let g = fs.intermediate.len();
    if g == 0 {
        return Err(SchemeError::DegenerateSystem("no coupled groups".into()));
    }
    let coeffs = mc_coefficients(fs, counts);
    let unknowns = g - 1;
    // augmented rows [a_2 .. a_G | -a_1]
    let mut rows: Vec<Vec<Rational>> = coeffs
        .iter()
        .map(|r| {
            let mut row: Vec<Rational> =
                r[1..].iter().cloned().map(Rational::from_integer).collect();
            row.push(Rational::from_integer(-r[0].clone()));
            row
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..unknowns {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip().expect("nonzero pivot");
        rows[rank] = rows[rank].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                let pivot_row = rows[rank].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r[unknowns].is_zero()) {
        return Err(SchemeError::DegenerateSystem(
            "memory constraint is inconsistent".into(),
        ));
    }
    if rank < unknowns {
        return Err(SchemeError::DegenerateSystem(format!(
            "rank {rank} is below the {unknowns} unknown ratios"
        )));
    }
    let mut gamma = vec![Rational::one()];
    for (i, _) in pivot_cols.iter().enumerate() {
        gamma.push(rows[i][unknowns].clone());
    }
    if let Some((i, bad)) = gamma.iter().enumerate().find(|(_, x)| !x.is_positive()) {
        return Err(SchemeError::InvalidRatio {
            index: i + 1,
            value: bad.to_string(),
        });
    }
    Ok(gamma)
}

/// Smallest positive integers with the exact ratios `gamma`, and the file
/// length they induce.
pub fn integer_packet_sizes(
    gamma: &[Rational],
    fs: &FsVectors,
    counts: &CountVectors,
    unit: u32,
) -> PacketSizing {
    let den = gamma
        .iter()
        .fold(BigInt::one(), |acc, g| acc.lcm(g.denominator()));
    let scaled: Vec<BigInt> = gamma
        .iter()
        .map(|g| g.numerator() * (&den / g.denominator()))
        .collect();
    let common = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let ell: Vec<BigUint> = scaled
        .iter()
        .map(|x| (x / &common).abs().to_biguint().expect("positive"))
        .collect();
    let l = fs
        .intermediate
        .iter()
        .zip(&ell)
        .map(|(a, e)| alpha_dot_u(a, &counts.f) * e)
        .sum();
    PacketSizing {
        gamma: gamma.to_vec(),
        ell,
        l,
        packets_per_file: alpha_dot_u(&fs.aggregate, &counts.f),
        unit,
    }
}
