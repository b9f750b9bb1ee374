//! Second homology of Seifert bundles over symplectic orbifolds.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::DivisorError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotropyDatum {
    pub m: u64,
    pub g: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertInput {
    #[serde(rename = "b2X")]
    pub b2x: u64,
    pub data: Vec<IsotropyDatum>,
    /// `adjacency[i][j]` when `D_i` and `D_j` intersect. Absent means all
    /// isotropy surfaces are disjoint.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjacency: Option<Vec<Vec<bool>>>,
}

impl SeifertInput {
    pub fn validate(&self) -> Result<(), DivisorError> {
        if self.b2x == 0 {
            return Err(DivisorError::InvalidInput("b2X must be positive".into()));
        }
        if let Some(d) = self.data.iter().find(|d| d.m == 0) {
            return Err(DivisorError::InvalidInput(format!("multiplicity {} is not positive", d.m)));
        }
        let Some(adj) = &self.adjacency else {
            return Ok(());
        };
        let n = self.data.len();
        if adj.len() != n || adj.iter().any(|r| r.len() != n) {
            return Err(DivisorError::DimensionMismatch {
                expected: n,
                found: adj.iter().map(Vec::len).find(|&l| l != n).unwrap_or(adj.len()),
            });
        }
        for i in 0..n {
            for j in i + 1..n {
                if adj[i][j] != adj[j][i] {
                    return Err(DivisorError::InvalidInput(format!(
                        "adjacency is not symmetric at ({i}, {j})"
                    )));
                }
                if adj[i][j] && self.data[i].m.gcd(&self.data[j].m) != 1 {
                    return Err(DivisorError::GcdViolation { i, j });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorsionBlock {
    pub prime: u64,
    pub exponent: u32,
    pub order: u64,
    pub multiplicity: u64,
}

/// `Z^rank ⊕ ⊕ Z_{p^e}^mult`, blocks sorted by `(p, e)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroupDescriptor {
    pub rank: u64,
    pub torsion: Vec<TorsionBlock>,
}

impl AbelianGroupDescriptor {
    pub fn free(rank: u64) -> Self {
        Self {
            rank,
            torsion: Vec::new(),
        }
    }

    /// Adds `Z_n^mult`, split into prime-power factors.
    pub fn add_cyclic(&mut self, n: u64, mult: u64) {
        if n <= 1 || mult == 0 {
            return;
        }
        let mut map: BTreeMap<(u64, u32), u64> = self
            .torsion
            .iter()
            .map(|b| ((b.prime, b.exponent), b.multiplicity))
            .collect();
        for (p, e) in factorize(n) {
            *map.entry((p, e)).or_insert(0) += mult;
        }
        self.torsion = map
            .into_iter()
            .map(|((prime, exponent), multiplicity)| TorsionBlock {
                prime,
                exponent,
                order: prime.pow(exponent),
                multiplicity,
            })
            .collect();
    }

    /// Number of cyclic prime-power factors.
    pub fn torsion_rank(&self) -> u64 {
        self.torsion.iter().map(|b| b.multiplicity).sum()
    }

    pub fn torsion_order(&self) -> BigUint {
        self.torsion
            .iter()
            .map(|b| BigUint::from(b.order).pow(b.multiplicity as u32))
            .product()
    }

    pub fn multiplicity_of(&self, order: u64) -> u64 {
        self.torsion
            .iter()
            .filter(|b| b.order == order)
            .map(|b| b.multiplicity)
            .sum()
    }
}

impl fmt::Display for AbelianGroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(format!("Z^{}", self.rank));
        }
        for b in &self.torsion {
            parts.push(format!("Z_{}^{}", b.order, b.multiplicity));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Prime factorization by trial division, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// `H_2(M) = Z^{b2X - 1} ⊕ ⊕_i Z_{m_i}^{2 g_i}`.
pub fn seifert_h2(input: &SeifertInput) -> Result<AbelianGroupDescriptor, DivisorError> {
    input.validate()?;
    let mut g = AbelianGroupDescriptor::free(input.b2x - 1);
    for d in &input.data {
        g.add_cyclic(d.m, 2 * d.g);
    }
    Ok(g)
}

/// Isotropy data of the prime-table construction: for each `(n, m)` three
/// disjoint surfaces of genera `9n^2+1, 9m^2+1, 10` with multiplicities
/// `p, p^2, p^3`. Surfaces from different tuples are taken to intersect.
pub fn theorem11_input(
    n_max: u32,
    primes: &BTreeMap<(u32, u32), u64>,
) -> Result<SeifertInput, DivisorError> {
    if n_max == 0 {
        return Err(DivisorError::InvalidInput("N must be positive".into()));
    }
    let mut seen = BTreeSet::new();
    let mut data = Vec::new();
    for n in 1..=n_max {
        for m in 1..=n_max {
            let p = *primes.get(&(n, m)).ok_or_else(|| {
                DivisorError::PrimeConstraintViolated(format!("no prime given for (n, m) = ({n}, {m})"))
            })?;
            let floor = u64::from(3.max(n).max(m));
            if !is_prime(p) || p <= floor {
                return Err(DivisorError::PrimeConstraintViolated(format!(
                    "p_{n}{m} = {p} must be a prime greater than {floor}"
                )));
            }
            if !seen.insert(p) {
                return Err(DivisorError::PrimeConstraintViolated(format!("prime {p} used twice")));
            }
            let (n, m) = (u64::from(n), u64::from(m));
            let cube = p
                .checked_pow(3)
                .ok_or_else(|| DivisorError::PrimeConstraintViolated(format!("{p}^3 overflows")))?;
            data.push(IsotropyDatum { m: p, g: 9 * n * n + 1 });
            data.push(IsotropyDatum { m: p * p, g: 9 * m * m + 1 });
            data.push(IsotropyDatum { m: cube, g: 10 });
        }
    }
    for key in primes.keys() {
        if key.0 == 0 || key.1 == 0 || key.0 > n_max || key.1 > n_max {
            return Err(DivisorError::PrimeConstraintViolated(format!(
                "index ({}, {}) outside 1..={n_max}",
                key.0, key.1
            )));
        }
    }
    let len = data.len();
    let adjacency = (0..len)
        .map(|i| (0..len).map(|j| i / 3 != j / 3).collect())
        .collect();
    Ok(SeifertInput {
        b2x: 3,
        data,
        adjacency: Some(adjacency),
    })
}

pub fn theorem11_group(
    n_max: u32,
    primes: &BTreeMap<(u32, u32), u64>,
) -> Result<AbelianGroupDescriptor, DivisorError> {
    seifert_h2(&theorem11_input(n_max, primes)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_small() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(125), vec![(5, 3)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert!(is_prime(5) && !is_prime(25) && !is_prime(1));
    }

    #[test]
    fn theorem11_n1() {
        let primes = BTreeMap::from([((1, 1), 5)]);
        let g = theorem11_group(1, &primes).unwrap();
        assert_eq!(g.to_string(), "Z^2 + Z_5^20 + Z_25^20 + Z_125^20");
        assert_eq!(g.torsion_rank(), 60);
    }

    #[test]
    fn theorem11_rejects_small_or_repeated_primes() {
        let small = BTreeMap::from([((1, 1), 3)]);
        assert!(matches!(theorem11_group(1, &small), Err(DivisorError::PrimeConstraintViolated(_))));
        let repeated = BTreeMap::from([((1, 1), 5), ((1, 2), 5), ((2, 1), 7), ((2, 2), 11)]);
        assert!(theorem11_group(2, &repeated).is_err());
        let composite = BTreeMap::from([((1, 1), 9)]);
        assert!(theorem11_group(1, &composite).is_err());
    }

    #[test]
    fn seifert_trivial_and_gcd() {
        let empty = SeifertInput { b2x: 4, data: vec![], adjacency: None };
        assert_eq!(seifert_h2(&empty).unwrap().to_string(), "Z^3");
        let one = SeifertInput { b2x: 1, data: vec![], adjacency: None };
        assert_eq!(seifert_h2(&one).unwrap().to_string(), "0");
        let bad = SeifertInput {
            b2x: 3,
            data: vec![IsotropyDatum { m: 2, g: 1 }, IsotropyDatum { m: 2, g: 0 }],
            adjacency: Some(vec![vec![false, true], vec![true, false]]),
        };
        assert_eq!(seifert_h2(&bad), Err(DivisorError::GcdViolation { i: 0, j: 1 }));
    }

    #[test]
    fn composite_multiplicity_splits() {
        let input = SeifertInput {
            b2x: 2,
            data: vec![IsotropyDatum { m: 12, g: 1 }],
            adjacency: None,
        };
        let g = seifert_h2(&input).unwrap();
        assert_eq!(g.to_string(), "Z^1 + Z_4^2 + Z_3^2");
        assert_eq!(g.torsion_order(), BigUint::from(144u32));
    }
}
