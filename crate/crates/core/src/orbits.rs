//! Orbit sizes of points of the simplex boundary under `S_n`.
//!
//! A point is described only by the multiset of sizes of its blocks of equal
//! barycentric coordinates; its orbit has `n! / prod(a_i!)` elements and its
//! stabilizer is the Young subgroup `prod S_{a_i}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numtheory::multinomial;

/// Block sizes of a point, non-increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionType {
    blocks: Vec<u64>,
}

impl PartitionType {
    pub fn new(mut blocks: Vec<u64>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::domain("partition blocks must be positive and nonempty"));
        }
        blocks.sort_unstable_by(|a, b| b.cmp(a));
        Ok(PartitionType { blocks })
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn total(&self) -> u64 {
        self.blocks.iter().sum()
    }

    /// At least two blocks; single-block points are the center and are never
    /// part of an orbit table.
    pub fn is_proper(&self) -> bool {
        self.blocks.len() >= 2
    }
}

impl fmt::Display for PartitionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str(")")
    }
}

/// Partitions of `n` in reverse lexicographic order, starting from `(n)`.
#[derive(Debug, Clone)]
pub struct Partitions {
    current: Option<Vec<u64>>,
}

impl Iterator for Partitions {
    type Item = PartitionType;

    fn next(&mut self) -> Option<PartitionType> {
        let out = self.current.take()?;
        self.current = successor(&out);
        Some(PartitionType { blocks: out })
    }
}

fn successor(p: &[u64]) -> Option<Vec<u64>> {
    // rightmost part larger than one
    let idx = p.iter().rposition(|&x| x > 1)?;
    let value = p[idx] - 1;
    let mut next = p[..idx].to_vec();
    next.push(value);
    let mut rest = p[idx..].iter().sum::<u64>() - value;
    while rest > 0 {
        let take = value.min(rest);
        next.push(take);
        rest -= take;
    }
    Some(next)
}

pub fn partitions(n: u64) -> Partitions {
    Partitions {
        current: (n >= 1).then(|| vec![n]),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitInfo {
    pub partition: PartitionType,
    pub orbit_size: BigInt,
    pub stabilizer_order: BigInt,
}

pub fn orbit_size(n: u64, partition: &PartitionType) -> Result<BigInt> {
    multinomial(n, partition.blocks())
}

pub fn orbit_info(n: u64, partition: &PartitionType) -> Result<OrbitInfo> {
    let orbit_size = orbit_size(n, partition)?;
    let stabilizer_order = partition
        .blocks()
        .iter()
        .map(|&a| (1..=a).fold(BigInt::one(), |acc, i| acc * i))
        .product();
    Ok(OrbitInfo {
        partition: partition.clone(),
        orbit_size,
        stabilizer_order,
    })
}

/// One row of [`orbit_divisibility_table`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitResidue {
    pub partition: PartitionType,
    pub orbit_size: BigInt,
    pub residue: u64,
}

fn check_modulus(p: u64) -> Result<()> {
    if crate::numtheory::is_prime(p) {
        Ok(())
    } else {
        Err(Error::domain(format!("{p} is not a prime")))
    }
}

/// Orbit size modulo `p` for every partition of `n` with at least two blocks.
pub fn orbit_divisibility_table(n: u64, p: u64) -> Result<Vec<OrbitResidue>> {
    if n < 2 {
        return Err(Error::domain(format!("orbit tables need n >= 2, got {n}")));
    }
    check_modulus(p)?;
    let modulus = BigInt::from(p);
    partitions(n)
        .filter(PartitionType::is_proper)
        .map(|partition| {
            let orbit_size = orbit_size(n, &partition)?;
            let residue = orbit_size
                .mod_floor(&modulus)
                .to_u64()
                .expect("residue below a u64 modulus");
            Ok(OrbitResidue {
                partition,
                orbit_size,
                residue,
            })
        })
        .collect()
}

/// Proper orbit types whose size is not divisible by `p`.
pub fn exceptional_orbits(n: u64, p: u64) -> Result<Vec<PartitionType>> {
    Ok(orbit_divisibility_table(n, p)?
        .into_iter()
        .filter(|row| row.residue != 0)
        .map(|row| row.partition)
        .collect())
}

/// Number of proper orbit types, i.e. `p(n) - 1`.
pub fn proper_partition_count(n: u64) -> usize {
    partitions(n).filter(PartitionType::is_proper).count()
}

/// `true` when `orbit_size` is divisible by `C(n, a_1)` for the first block.
pub fn first_binomial_divides(n: u64, partition: &PartitionType) -> Result<bool> {
    let size = orbit_size(n, partition)?;
    let first = crate::numtheory::binomial(n, partition.blocks()[0] as i64);
    Ok(!first.is_zero() && (size % first).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(blocks: &[u64]) -> PartitionType {
        PartitionType::new(blocks.to_vec()).unwrap()
    }

    fn factorial(n: u64) -> BigInt {
        (1..=n).fold(BigInt::one(), |acc, i| acc * i)
    }

    /// Recursive enumeration used as an independent count.
    fn brute_partitions(n: u64, max: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            brute_partitions(n - part, part, prefix, out);
            prefix.pop();
        }
    }

    #[test]
    fn partitions_of_four() {
        let got: Vec<_> = partitions(4).collect();
        assert_eq!(
            got,
            vec![pt(&[4]), pt(&[3, 1]), pt(&[2, 2]), pt(&[2, 1, 1]), pt(&[1, 1, 1, 1])]
        );
        assert_eq!(partitions(1).collect::<Vec<_>>(), vec![pt(&[1])]);
        assert_eq!(partitions(0).count(), 0);
    }

    #[test]
    fn partitions_match_recursive_enumeration() {
        for n in 1..=20u64 {
            let mut expected = Vec::new();
            brute_partitions(n, n, &mut Vec::new(), &mut expected);
            let got: Vec<Vec<u64>> = partitions(n).map(|p| p.blocks().to_vec()).collect();
            assert_eq!(got, expected, "n={n}");
        }
        let mut six = Vec::new();
        brute_partitions(6, 6, &mut Vec::new(), &mut six);
        assert_eq!(six.len(), 11);
        assert_eq!(partitions(6).count(), 11);
    }

    #[test]
    fn orbit_size_examples() {
        assert_eq!(orbit_size(6, &pt(&[3, 3])).unwrap(), BigInt::from(20));
        assert_eq!(orbit_size(7, &pt(&[7])).unwrap(), BigInt::from(1));
        assert_eq!(orbit_size(6, &pt(&[2, 2, 2])).unwrap(), BigInt::from(90));
        assert_eq!(
            orbit_size(6, &pt(&[2, 2, 2])).unwrap(),
            factorial(6) / factorial(2).pow(3)
        );
        assert!(matches!(orbit_size(6, &pt(&[3, 2])), Err(Error::Domain(_))));
    }

    #[test]
    fn orbit_stabilizer_product_is_factorial() {
        for n in 1..=25u64 {
            let nf = factorial(n);
            for p in partitions(n) {
                let info = orbit_info(n, &p).unwrap();
                assert_eq!(&info.orbit_size * &info.stabilizer_order, nf, "{p}");
            }
        }
    }

    #[test]
    fn divisibility_table_examples() {
        let t9 = orbit_divisibility_table(9, 3).unwrap();
        assert_eq!(t9.len(), 29);
        assert!(t9.iter().all(|r| r.residue == 0));

        let t6 = orbit_divisibility_table(6, 3).unwrap();
        for row in &t6 {
            if row.partition == pt(&[3, 3]) {
                assert_eq!(row.residue, 2);
                assert_eq!(row.orbit_size, BigInt::from(20));
            } else {
                assert_eq!(row.residue, 0, "{}", row.partition);
            }
        }

        let t4 = orbit_divisibility_table(4, 2).unwrap();
        let sizes: Vec<_> = t4.iter().map(|r| r.orbit_size.clone()).collect();
        assert_eq!(sizes, [4, 6, 12, 24].map(BigInt::from).to_vec());
        assert!(t4.iter().all(|r| r.residue == 0));

        assert!(orbit_divisibility_table(6, 4).is_err());
        assert!(orbit_divisibility_table(1, 3).is_err());
    }

    #[test]
    fn exceptional_orbit_examples() {
        assert_eq!(exceptional_orbits(6, 3).unwrap(), vec![pt(&[3, 3])]);
        assert!(exceptional_orbits(9, 3).unwrap().is_empty());
        assert_eq!(exceptional_orbits(10, 5).unwrap(), vec![pt(&[5, 5])]);
        assert_eq!(orbit_size(10, &pt(&[5, 5])).unwrap(), BigInt::from(252));
    }

    #[test]
    fn prime_powers_have_no_exceptional_orbits() {
        for (p, k) in [(2u64, 1u32), (2, 2), (2, 3), (2, 4), (2, 5), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2)]
            .into_iter()
            .chain([7u64, 11, 13, 17, 19, 23, 29, 31].map(|p| (p, 1)))
        {
            let n = p.pow(k);
            assert!(exceptional_orbits(n, p).unwrap().is_empty(), "n={n}");
        }
    }

    #[test]
    fn twice_prime_powers_have_one_exceptional_orbit() {
        for (p, k) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
            let half = p.pow(k);
            let n = 2 * half;
            let ex = exceptional_orbits(n, p).unwrap();
            assert_eq!(ex, vec![pt(&[half, half])], "n={n}");
            let size = orbit_size(n, &ex[0]).unwrap();
            assert_eq!(size % p, BigInt::from(2));
        }
    }

    #[test]
    fn multinomials_divisible_by_first_binomial() {
        for n in 1..=20u64 {
            for p in partitions(n).filter(PartitionType::is_proper) {
                assert!(first_binomial_divides(n, &p).unwrap(), "{p}");
            }
        }
    }

    #[test]
    fn display_partition() {
        assert_eq!(pt(&[1, 3, 2]).to_string(), "(3,2,1)");
    }
}
