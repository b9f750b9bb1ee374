//! Intersection lattices with a canonical class: pairings, signature,
//! adjunction genus, blow-ups and divisor realizability.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::DivisorError;

/// Symmetric integer pairing `Q` on a basis of curves, with `K` stored as
/// the covector `K_i = K · e_i` and an optional genus per basis curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionLattice {
    pub labels: Vec<String>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<i64>>,
    #[serde(rename = "K")]
    pub k: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub genera: Vec<Option<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub b_plus: usize,
    pub b_minus: usize,
    pub b_zero: usize,
}

/// A class with an optional claimed genus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveClass {
    pub vector: Vec<i64>,
    #[serde(default)]
    pub genus: Option<u64>,
}

/// `Σ a_i C_i` over basis curves, as `(index, a_i)` terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymplecticDivisor {
    pub terms: Vec<(usize, i64)>,
}

impl SymplecticDivisor {
    /// Resolves a `label -> coefficient` map against the lattice.
    pub fn from_labels(
        lat: &IntersectionLattice,
        coeffs: &BTreeMap<String, i64>,
    ) -> Result<Self, DivisorError> {
        let terms = coeffs
            .iter()
            .map(|(name, &a)| {
                lat.index_of(name)
                    .map(|i| (i, a))
                    .ok_or_else(|| DivisorError::UnknownLabel(name.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { terms })
    }

    pub fn class(&self, rank: usize) -> Result<Vec<i64>, DivisorError> {
        let mut v = vec![0i64; rank];
        for &(i, a) in &self.terms {
            let slot = v.get_mut(i).ok_or(DivisorError::DimensionMismatch {
                expected: rank,
                found: i + 1,
            })?;
            *slot += a;
        }
        Ok(v)
    }
}

impl IntersectionLattice {
    pub fn new(
        labels: Vec<String>,
        q: Vec<Vec<i64>>,
        k: Vec<i64>,
        genera: Vec<Option<u64>>,
    ) -> Result<Self, DivisorError> {
        let lat = Self {
            labels,
            q,
            k,
            genera,
        };
        lat.validate()?;
        Ok(lat)
    }

    pub fn validate(&self) -> Result<(), DivisorError> {
        let r = self.rank();
        let mismatch = |found| DivisorError::DimensionMismatch { expected: r, found };
        if self.labels.len() != r {
            return Err(mismatch(self.labels.len()));
        }
        if self.k.len() != r {
            return Err(mismatch(self.k.len()));
        }
        if !self.genera.is_empty() && self.genera.len() != r {
            return Err(mismatch(self.genera.len()));
        }
        for row in &self.q {
            if row.len() != r {
                return Err(mismatch(row.len()));
            }
        }
        for i in 0..r {
            for j in 0..i {
                if self.q[i][j] != self.q[j][i] {
                    return Err(DivisorError::NotSymmetric { i, j });
                }
            }
        }
        for i in 0..r {
            if let Some(g) = self.stored_genus(i) {
                let e = self.basis(i);
                let computed = self.adjunction_genus(&e)?;
                if computed != g {
                    return Err(DivisorError::AdjunctionBroken {
                        label: self.labels[i].clone(),
                        stored: g,
                        computed: Some(computed),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.q.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn basis(&self, i: usize) -> Vec<i64> {
        let mut e = vec![0; self.rank()];
        e[i] = 1;
        e
    }

    pub fn stored_genus(&self, i: usize) -> Option<u64> {
        self.genera.get(i).copied().flatten()
    }

    fn check_dim(&self, v: &[i64]) -> Result<(), DivisorError> {
        if v.len() != self.rank() {
            return Err(DivisorError::DimensionMismatch {
                expected: self.rank(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `xᵀ Q y`.
    pub fn pair(&self, x: &[i64], y: &[i64]) -> Result<i64, DivisorError> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let mut acc: i128 = 0;
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                acc += i128::from(*xi) * i128::from(self.q[i][j]) * i128::from(*yj);
            }
        }
        i64::try_from(acc).map_err(|_| DivisorError::Overflow)
    }

    pub fn canonical_pairing(&self, x: &[i64]) -> Result<i64, DivisorError> {
        self.check_dim(x)?;
        let acc: i128 = x
            .iter()
            .zip(&self.k)
            .map(|(a, b)| i128::from(*a) * i128::from(*b))
            .sum();
        i64::try_from(acc).map_err(|_| DivisorError::Overflow)
    }

    /// `g = (K·c + c^2 + 2)/2`.
    pub fn adjunction_genus(&self, c: &[i64]) -> Result<u64, DivisorError> {
        let twice = i128::from(self.canonical_pairing(c)?) + i128::from(self.pair(c, c)?) + 2;
        if twice % 2 != 0 {
            return Err(DivisorError::NonIntegral(twice));
        }
        if twice < 0 {
            return Err(DivisorError::NegativeGenus(twice / 2));
        }
        u64::try_from(twice / 2).map_err(|_| DivisorError::Overflow)
    }

    /// A claimed genus agrees with the adjunction formula.
    pub fn check_curve(&self, c: &CurveClass) -> Result<u64, DivisorError> {
        let g = self.adjunction_genus(&c.vector)?;
        match c.genus {
            Some(claimed) if claimed != g => Err(DivisorError::AdjunctionBroken {
                label: "curve".into(),
                stored: claimed,
                computed: Some(g),
            }),
            _ => Ok(g),
        }
    }

    /// Inertia indices of `Q`, by exact congruence diagonalization.
    pub fn signature(&self) -> Signature {
        let n = self.rank();
        let mut a: Vec<Vec<BigRational>> = self
            .q
            .iter()
            .map(|row| row.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
            .collect();
        let mut diag = Vec::with_capacity(n);
        let mut size = n;
        while size > 0 {
            let last = size - 1;
            // bring a nonzero diagonal entry to the end of the active block
            let pivot = (0..size).find(|&i| !a[i][i].is_zero());
            match pivot {
                Some(p) => swap_sym(&mut a, p, last),
                None => {
                    let off = (0..size)
                        .flat_map(|i| (0..size).map(move |j| (i, j)))
                        .find(|&(i, j)| i != j && !a[i][j].is_zero());
                    match off {
                        None => {
                            diag.extend(std::iter::repeat_n(BigRational::zero(), size));
                            break;
                        }
                        Some((i, j)) => {
                            // e_i + e_j has square 2 a_ij != 0
                            add_sym(&mut a, i, j, BigRational::from_integer(1.into()));
                            swap_sym(&mut a, i, last);
                        }
                    }
                }
            }
            let d = a[last][last].clone();
            for i in 0..last {
                if !a[i][last].is_zero() {
                    let f = -(a[i][last].clone() / d.clone());
                    add_sym(&mut a, i, last, f);
                }
            }
            diag.push(d);
            size -= 1;
        }
        Signature {
            b_plus: diag.iter().filter(|d| d.is_positive()).count(),
            b_minus: diag.iter().filter(|d| d.is_negative()).count(),
            b_zero: diag.iter().filter(|d| d.is_zero()).count(),
        }
    }

    /// Blows up a point lying on the listed curves with the given
    /// multiplicities. The new basis is the proper transforms
    /// `C_i - m_i E` followed by `E`.
    pub fn blow_up(&self, through: &[(usize, u64)]) -> Result<Self, DivisorError> {
        let r = self.rank();
        let mut m = vec![0i64; r];
        for &(i, mult) in through {
            let slot = m.get_mut(i).ok_or(DivisorError::DimensionMismatch {
                expected: r,
                found: i + 1,
            })?;
            *slot = i64::try_from(mult).map_err(|_| DivisorError::Overflow)?;
        }
        let mut q = vec![vec![0i64; r + 1]; r + 1];
        for i in 0..r {
            for j in 0..r {
                q[i][j] = self.q[i][j] - m[i] * m[j];
            }
            q[i][r] = m[i];
            q[r][i] = m[i];
        }
        q[r][r] = -1;
        let mut k: Vec<i64> = self.k.iter().zip(&m).map(|(a, b)| a + b).collect();
        k.push(-1);
        let mut labels = self.labels.clone();
        let mut name = "E".to_string();
        let mut n = 1;
        while labels.contains(&name) {
            n += 1;
            name = format!("E{n}");
        }
        labels.push(name);
        let mut genera = self.genera.clone();
        if !genera.is_empty() {
            genera.push(Some(0));
        }
        let out = Self {
            labels,
            q,
            k,
            genera,
        };
        for i in 0..r {
            if let Some(g) = self.stored_genus(i) {
                let computed = out.adjunction_genus(&out.basis(i)).ok();
                if computed != Some(g) {
                    return Err(DivisorError::AdjunctionBroken {
                        label: self.labels[i].clone(),
                        stored: g,
                        computed,
                    });
                }
            }
        }
        Ok(out)
    }

    pub fn realizability(&self, d: &SymplecticDivisor) -> Result<RealizabilityReport, DivisorError> {
        let class = d.class(self.rank())?;
        let mut reasons = Vec::new();
        for &(i, a) in &d.terms {
            if a <= 0 {
                reasons.push(format!("coefficient of {} is {a}, not positive", self.labels[i]));
            }
        }
        let effective = reasons.is_empty() && !d.terms.is_empty();
        if d.terms.is_empty() {
            reasons.push("empty divisor".into());
        }
        let mut pairings = Vec::with_capacity(self.rank());
        let mut disjoint_from = Vec::new();
        for i in 0..self.rank() {
            let p = self.pair(&class, &self.basis(i))?;
            if p < 0 {
                reasons.push(format!("D·{} = {p} < 0", self.labels[i]));
            }
            if p == 0 {
                disjoint_from.push(self.labels[i].clone());
            }
            pairings.push((self.labels[i].clone(), p));
        }
        let realizable = effective && pairings.iter().all(|(_, p)| *p >= 0);
        Ok(RealizabilityReport {
            effective,
            realizable,
            self_intersection: self.pair(&class, &class)?,
            genus: self.adjunction_genus(&class).ok(),
            pairings,
            disjoint_from,
            reasons,
        })
    }
}

fn swap_sym(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Congruence by `e_i -> e_i + f e_j`: row and column operation.
fn add_sym(a: &mut [Vec<BigRational>], i: usize, j: usize, f: BigRational) {
    let n = a.len();
    for c in 0..n {
        let v = a[j][c].clone() * f.clone();
        a[i][c] += v;
    }
    for row in a.iter_mut().take(n) {
        let v = row[j].clone() * f.clone();
        row[i] += v;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizabilityReport {
    pub effective: bool,
    pub realizable: bool,
    pub self_intersection: i64,
    pub genus: Option<u64>,
    /// `D · C_j` for every basis curve.
    pub pairings: Vec<(String, i64)>,
    pub disjoint_from: Vec<String>,
    pub reasons: Vec<String>,
}

/// `C^2 = k > 0`, genus `g`, multiple `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultipleCurveQuery {
    pub k: i64,
    pub g: i64,
    pub n: i64,
}

/// `(C_n^2, g(C_n)) = (n^2 k, n g - n + 1 + k n(n-1)/2)`.
pub fn multiple_curve_invariants(q: &MultipleCurveQuery) -> Result<(i64, i64), DivisorError> {
    if q.k <= 0 || q.n < 1 || q.g < 0 {
        return Err(DivisorError::InvalidQuery(format!(
            "need k > 0, n >= 1, g >= 0; got k = {}, n = {}, g = {}",
            q.k, q.n, q.g
        )));
    }
    let (k, g, n) = (i128::from(q.k), i128::from(q.g), i128::from(q.n));
    let square = n * n * k;
    let genus = n * g - n + 1 + k * n * (n - 1) / 2;
    Ok((
        i64::try_from(square).map_err(|_| DivisorError::Overflow)?,
        i64::try_from(genus).map_err(|_| DivisorError::Overflow)?,
    ))
}

/// Genus after resolving `nodes` nodes of a configuration of `components`
/// curves that becomes connected: `Σ g_i + nodes - components + 1`.
pub fn resolution_genus(genera: &[u64], nodes: u64, components: u64) -> Result<u64, DivisorError> {
    if components == 0 || components as usize != genera.len() {
        return Err(DivisorError::InvalidQuery(format!(
            "{components} components but {} genera",
            genera.len()
        )));
    }
    if nodes + 1 < components {
        return Err(DivisorError::Disconnected { nodes, components });
    }
    Ok(genera.iter().sum::<u64>() + nodes + 1 - components)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn td() -> IntersectionLattice {
        IntersectionLattice::new(
            vec!["T".into(), "D".into()],
            vec![vec![0, 3], vec![3, -2]],
            vec![0, 0],
            vec![Some(1), Some(0)],
        )
        .unwrap()
    }

    #[test]
    fn pairing_examples() {
        let lat = td();
        assert_eq!(lat.pair(&[1, 0], &[0, 1]).unwrap(), 3);
        assert_eq!(lat.pair(&[2, 3], &[0, 1]).unwrap(), 0);
        assert_eq!(lat.pair(&[2, 3], &[0, 0]).unwrap(), 0);
        assert!(matches!(lat.pair(&[1], &[1, 0]), Err(DivisorError::DimensionMismatch { .. })));
    }

    #[test]
    fn signature_examples() {
        let id = IntersectionLattice::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vec![0; 3],
            vec![],
        )
        .unwrap();
        assert_eq!(id.signature(), Signature { b_plus: 3, b_minus: 0, b_zero: 0 });
        assert_eq!(td().signature(), Signature { b_plus: 1, b_minus: 1, b_zero: 0 });
        let zero = IntersectionLattice::new(
            vec!["a".into(), "b".into()],
            vec![vec![0, 0], vec![0, 0]],
            vec![0; 2],
            vec![],
        )
        .unwrap();
        assert_eq!(zero.signature(), Signature { b_plus: 0, b_minus: 0, b_zero: 2 });
        let hyperbolic = IntersectionLattice::new(
            vec!["a".into(), "b".into()],
            vec![vec![0, 1], vec![1, 0]],
            vec![0; 2],
            vec![],
        )
        .unwrap();
        assert_eq!(hyperbolic.signature(), Signature { b_plus: 1, b_minus: 1, b_zero: 0 });
    }

    #[test]
    fn adjunction_examples() {
        let lat = td();
        assert_eq!(lat.adjunction_genus(&[1, 0]).unwrap(), 1);
        assert_eq!(lat.adjunction_genus(&[0, 1]).unwrap(), 0);
        assert_eq!(lat.pair(&[2, 3], &[2, 3]).unwrap(), 18);
        assert_eq!(lat.adjunction_genus(&[2, 3]).unwrap(), 10);
        assert!(matches!(lat.adjunction_genus(&[0, 2]), Err(DivisorError::NegativeGenus(_))));
        let odd = IntersectionLattice::new(vec!["h".into()], vec![vec![1]], vec![0], vec![]).unwrap();
        assert!(matches!(odd.adjunction_genus(&[1]), Err(DivisorError::NonIntegral(3))));
    }

    #[test]
    fn realizability_of_t1() {
        let lat = td();
        let rep = lat.realizability(&SymplecticDivisor { terms: vec![(0, 2), (1, 3)] }).unwrap();
        assert!(rep.realizable);
        assert_eq!(rep.disjoint_from, vec!["D".to_string()]);
        assert_eq!(rep.genus, Some(10));
        let bad = lat.realizability(&SymplecticDivisor { terms: vec![(0, 2), (1, 0)] }).unwrap();
        assert!(!bad.realizable && !bad.reasons.is_empty());
    }

    #[test]
    fn blow_up_examples() {
        let lat = td();
        let off = lat.blow_up(&[]).unwrap();
        assert_eq!(off.rank(), 3);
        assert_eq!(off.q[2], vec![0, 0, -1]);
        assert_eq!(off.q[0][..2], lat.q[0][..]);
        let on_t = lat.blow_up(&[(0, 1)]).unwrap();
        assert_eq!(on_t.q[0][0], -1);
        assert_eq!(on_t.k[0], 1);
        assert_eq!(on_t.adjunction_genus(&on_t.basis(0)).unwrap(), 1);
        assert_eq!(on_t.signature().b_minus, lat.signature().b_minus + 1);
        assert!(matches!(lat.blow_up(&[(0, 2)]), Err(DivisorError::AdjunctionBroken { .. })));
    }

    #[test]
    fn multiple_curves_and_resolution() {
        assert_eq!(multiple_curve_invariants(&MultipleCurveQuery { k: 18, g: 10, n: 3 }).unwrap(), (162, 82));
        assert_eq!(multiple_curve_invariants(&MultipleCurveQuery { k: 5, g: 2, n: 1 }).unwrap(), (5, 2));
        assert!(multiple_curve_invariants(&MultipleCurveQuery { k: 0, g: 2, n: 1 }).is_err());
        assert_eq!(resolution_genus(&[2, 3], 1, 2).unwrap(), 5);
        assert_eq!(resolution_genus(&[4], 0, 1).unwrap(), 4);
        assert!(matches!(resolution_genus(&[1, 1, 1], 1, 3), Err(DivisorError::Disconnected { .. })));
    }

    #[test]
    fn lattice_rejects_asymmetric_q() {
        let r = IntersectionLattice::new(
            vec!["a".into(), "b".into()],
            vec![vec![0, 1], vec![2, 0]],
            vec![0; 2],
            vec![],
        );
        assert!(matches!(r, Err(DivisorError::NotSymmetric { .. })));
    }
}
