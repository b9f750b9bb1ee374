//! Lattices for the divisor constructions: the torus/sphere pair and the
//! chain configuration carrying the divisor `A`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{DivisorError, IntersectionLattice, SymplecticDivisor};

/// `T^2 = 0`, `D^2 = -2`, `T·D = 3`, `K·T = K·D = 0`.
pub fn torus_sphere() -> IntersectionLattice {
    IntersectionLattice::new(
        vec!["T".into(), "D".into()],
        vec![vec![0, 3], vec![3, -2]],
        vec![0, 0],
        vec![Some(1), Some(0)],
    )
    .expect("torus/sphere lattice is consistent")
}

/// `T_1 = 2T + 3D`.
pub fn t1_divisor() -> SymplecticDivisor {
    SymplecticDivisor {
        terms: vec![(0, 2), (1, 3)],
    }
}

pub const CHAIN_LENGTH: usize = 8;

/// Labels `F, E1, C1..C8, C1'..C8'`.
pub fn chain_labels() -> Vec<String> {
    let mut labels = vec!["F".to_string(), "E1".to_string()];
    labels.extend((1..=CHAIN_LENGTH).map(|i| format!("C{i}")));
    labels.extend((1..=CHAIN_LENGTH).map(|i| format!("C{i}'")));
    labels
}

/// Single transverse intersections: `E1` meets `F`, `C1`, `C1'`, and
/// consecutive curves of each chain meet.
pub fn chain_adjacency() -> Vec<(usize, usize)> {
    let c = |i: usize| 1 + i;
    let cp = |i: usize| 1 + CHAIN_LENGTH + i;
    let mut edges = vec![(1, 0), (1, c(1)), (1, cp(1))];
    for i in 1..CHAIN_LENGTH {
        edges.push((c(i), c(i + 1)));
        edges.push((cp(i), cp(i + 1)));
    }
    edges
}

/// `A = 2F + 9E1 + Σ (9 - i)(C_i + C_i')`.
pub fn chain_coefficients() -> Vec<i64> {
    let mut a = vec![2, 9];
    a.extend((1..=CHAIN_LENGTH as i64).map(|i| 9 - i));
    a.extend((1..=CHAIN_LENGTH as i64).map(|i| 9 - i));
    a
}

/// Solves for the unknown self-intersections `x_j` (indices `unknown`) from
/// `A·C_j = 0` for every `j` in `orthogonal`, with the off-diagonal pairing
/// given by `adjacency` and the remaining diagonal entries by `known`.
pub fn solve_self_intersections(
    n: usize,
    adjacency: &[(usize, usize)],
    coeffs: &[i64],
    known: &BTreeMap<usize, i64>,
    orthogonal: &[usize],
) -> Result<BTreeMap<usize, BigRational>, DivisorError> {
    let unknown: Vec<usize> = (0..n).filter(|i| !known.contains_key(i)).collect();
    let col = |j: usize| unknown.iter().position(|&u| u == j);
    let q = |x: i64| BigRational::from_integer(BigInt::from(x));
    let mut off = vec![vec![0i64; n]; n];
    for &(i, j) in adjacency {
        off[i][j] += 1;
        off[j][i] += 1;
    }
    // rows: a_j x_j (if unknown) = -(Σ_{i≠j} a_i Q_ij + a_j Q_jj if known)
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for &j in orthogonal {
        let mut row = vec![BigRational::zero(); unknown.len() + 1];
        let mut rhs: i64 = -(0..n).map(|i| coeffs[i] * off[i][j]).sum::<i64>();
        match col(j) {
            Some(c) => row[c] = q(coeffs[j]),
            None => rhs -= coeffs[j] * known[&j],
        }
        row[unknown.len()] = q(rhs);
        rows.push(row);
    }
    let m = unknown.len();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for c in 0..m {
        let Some(p) = (pivot_row..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, p);
        let inv = BigRational::one() / rows[pivot_row][c].clone();
        for v in rows[pivot_row].iter_mut() {
            *v *= inv.clone();
        }
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                for k in 0..=m {
                    let v = rows[pivot_row][k].clone() * f.clone();
                    rows[r][k] -= v;
                }
            }
        }
        pivots.push(c);
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|r| !r[m].is_zero()) {
        return Err(DivisorError::InvalidInput("orthogonality constraints are inconsistent".into()));
    }
    if pivots.len() < m {
        return Err(DivisorError::InvalidInput("self-intersections are underdetermined".into()));
    }
    Ok(pivots
        .iter()
        .enumerate()
        .map(|(r, &c)| (unknown[c], rows[r][m].clone()))
        .collect())
}

/// The chain lattice with solved self-intersections, `K = 0`, `F` of genus
/// one and all other curves spheres. `f_square` is the free parameter `F^2`.
pub fn chain_lattice(f_square: i64) -> Result<(IntersectionLattice, SymplecticDivisor), DivisorError> {
    let labels = chain_labels();
    let n = labels.len();
    let adjacency = chain_adjacency();
    let coeffs = chain_coefficients();
    let known = BTreeMap::from([(0, f_square)]);
    let orthogonal: Vec<usize> = (1..n).collect();
    let solved = solve_self_intersections(n, &adjacency, &coeffs, &known, &orthogonal)?;
    let mut q = vec![vec![0i64; n]; n];
    for &(i, j) in &adjacency {
        q[i][j] += 1;
        q[j][i] += 1;
    }
    q[0][0] = f_square;
    for (i, v) in solved {
        if !v.is_integer() {
            return Err(DivisorError::NonIntegral(0));
        }
        q[i][i] = i64::try_from(v.to_integer()).map_err(|_| DivisorError::Overflow)?;
    }
    let mut genera = vec![Some(0); n];
    genera[0] = Some(1);
    let lat = IntersectionLattice::new(labels, q, vec![0; n], genera)?;
    let a = SymplecticDivisor {
        terms: coeffs.into_iter().enumerate().collect(),
    };
    Ok((lat, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_self_intersections_are_minus_two() {
        let (lat, a) = chain_lattice(0).unwrap();
        for i in 1..lat.rank() {
            assert_eq!(lat.q[i][i], -2, "{}", lat.labels[i]);
        }
        let class = a.class(lat.rank()).unwrap();
        assert_eq!(lat.pair(&class, &lat.basis(0)).unwrap(), 9);
        assert_eq!(lat.pair(&class, &class).unwrap(), 18);
        assert_eq!(lat.adjunction_genus(&class).unwrap(), 10);
    }

    #[test]
    fn inconsistent_constraints_are_reported() {
        let known = BTreeMap::from([(0, 0), (1, 5)]);
        let r = solve_self_intersections(2, &[(0, 1)], &[1, 1], &known, &[1]);
        assert!(r.is_err());
    }
}
