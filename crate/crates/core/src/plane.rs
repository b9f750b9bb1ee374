//! Linear planes in `(C^2, w0)` with `w0 = (i/2)(dz^dz̄ + dw^dw̄)`.
//!
//! Planes are graphs `w = a z + b z̄` (over `z`) or `z = α w + β w̄` (over `w`).
//! Every predicate here is a sign test on a closed-form polynomial margin, so
//! the module is generic over the real field: `BigRational` gives exact
//! answers, `f64` gives margins for the caller to threshold.
//!
//! Real coordinates are ordered `(x1, y1, x2, y2)` with `z = x1 + i y1`,
//! `w = x2 + i y2`, in which `w0 = dx1^dy1 + dx2^dy2`.

use std::fmt::Debug;

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Real scalar field usable by the predicates.
pub trait Scalar: Clone + Num + Signed + PartialOrd + Debug {}

impl<T> Scalar for T where T: Clone + Num + Signed + PartialOrd + Debug {}

/// Complex coefficient with components in `T`.
pub type ComplexScalar<T> = Complex<T>;

/// Exact rational scalar.
pub type Exact = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlaneError {
    #[error("plane is not transverse to the reference plane: |a|^2 - |b|^2 = 0, no graph over w exists")]
    NonTransverse,
    #[error("basis vectors are linearly dependent")]
    DegenerateBasis,
}

/// Converts a float to the exact rational with the same binary value.
pub fn exact(x: f64) -> Exact {
    BigRational::from_float(x).expect("finite float")
}

/// Exact complex number from float parts.
pub fn exact_complex(z: Complex64) -> Complex<Exact> {
    Complex::new(exact(z.re), exact(z.im))
}

fn norm_sqr<T: Scalar>(z: &Complex<T>) -> T {
    z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()
}

fn conj<T: Scalar>(z: &Complex<T>) -> Complex<T> {
    Complex::new(z.re.clone(), -z.im.clone())
}

/// The plane `{w = a z + b z̄}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphOverZ<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
}

/// The plane `{z = α w + β w̄}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphOverW<T> {
    pub alpha: Complex<T>,
    pub beta: Complex<T>,
}

impl<T: Scalar> GraphOverZ<T> {
    pub fn new(a: Complex<T>, b: Complex<T>) -> Self {
        Self { a, b }
    }

    /// `|a|^2 - |b|^2`.
    pub fn holomorphic_excess(&self) -> T {
        norm_sqr(&self.a) - norm_sqr(&self.b)
    }

    /// Graph-oriented basis: images of `z = 1` and `z = i`.
    pub fn basis(&self) -> PlaneBasis<T> {
        let u = self.a.clone() + self.b.clone();
        let d = self.a.clone() - self.b.clone();
        PlaneBasis::new(
            [T::one(), T::zero(), u.re, u.im],
            [T::zero(), T::one(), -d.im, d.re],
        )
    }
}

impl<T: Scalar> GraphOverW<T> {
    pub fn new(alpha: Complex<T>, beta: Complex<T>) -> Self {
        Self { alpha, beta }
    }

    /// Graph-oriented basis: images of `w = 1` and `w = i`.
    pub fn basis(&self) -> PlaneBasis<T> {
        let u = self.alpha.clone() + self.beta.clone();
        let d = self.alpha.clone() - self.beta.clone();
        PlaneBasis::new(
            [u.re, u.im, T::one(), T::zero()],
            [-d.im, d.re, T::zero(), T::one()],
        )
    }
}

impl GraphOverZ<f64> {
    pub fn to_exact(&self) -> GraphOverZ<Exact> {
        GraphOverZ::new(exact_complex(self.a), exact_complex(self.b))
    }
}

/// The three margins whose signs decide a [`Classification`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Margins<T> {
    pub symplectic: T,
    pub transverse: T,
    pub positive: T,
}

/// Symplecticity, transversality and positivity of a plane against a
/// reference plane.
///
/// `symplectic` and `transverse` test their margin against zero, `positive`
/// tests its margin for strict positivity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification<T> {
    pub symplectic: bool,
    pub transverse_to_reference: bool,
    pub positive: bool,
    pub margins: Margins<T>,
}

impl<T: Scalar> Classification<T> {
    fn from_margins(margins: Margins<T>) -> Self {
        Self {
            symplectic: !margins.symplectic.is_zero(),
            transverse_to_reference: !margins.transverse.is_zero(),
            positive: margins.positive > T::zero(),
            margins,
        }
    }

    /// Flags only, for comparing classifications computed by different routes.
    pub fn flags(&self) -> (bool, bool, bool) {
        (self.symplectic, self.transverse_to_reference, self.positive)
    }
}

/// Classifies `{w = a z + b z̄}` against `S0 = {w = 0}`.
pub fn classify_z_graph<T: Scalar>(g: &GraphOverZ<T>) -> Classification<T> {
    let d = g.holomorphic_excess();
    let s = d.clone() + T::one();
    let p = d.clone() * s.clone();
    Classification::from_margins(Margins {
        symplectic: s,
        transverse: d,
        positive: p,
    })
}

/// Positivity of the intersection with `{w = 0}` when both planes carry their
/// orientation as graphs over `z`.
pub fn graph_oriented_positive<T: Scalar>(g: &GraphOverZ<T>) -> bool {
    g.holomorphic_excess() > T::zero()
}

/// `|a1 - a2|^2 - |b1 - b2|^2`.
pub fn pair_margin<T: Scalar>(g1: &GraphOverZ<T>, g2: &GraphOverZ<T>) -> T {
    let da = g1.a.clone() - g2.a.clone();
    let db = g1.b.clone() - g2.b.clone();
    norm_sqr(&da) - norm_sqr(&db)
}

/// Two graphs over `z`, graph-oriented, meet transversely and positively.
pub fn pair_positive<T: Scalar>(g1: &GraphOverZ<T>, g2: &GraphOverZ<T>) -> bool {
    pair_margin(g1, g2) > T::zero()
}

/// Classifies `{z = α w + β w̄}` against `S0 = {w = 0}`.
pub fn classify_w_graph<T: Scalar>(g: &GraphOverW<T>) -> Classification<T> {
    let s = norm_sqr(&g.alpha) - norm_sqr(&g.beta) + T::one();
    Classification::from_margins(Margins {
        symplectic: s.clone(),
        transverse: T::one(),
        positive: s,
    })
}

/// Rewrites a transverse graph over `z` as a graph over `w`.
pub fn convert_graph<T: Scalar>(g: &GraphOverZ<T>) -> Result<GraphOverW<T>, PlaneError> {
    let d = g.holomorphic_excess();
    if d.is_zero() {
        return Err(PlaneError::NonTransverse);
    }
    let alpha = conj(&g.a).unscale(d.clone());
    let beta = (-g.b.clone()).unscale(d);
    Ok(GraphOverW::new(alpha, beta))
}

/// Inverse of [`convert_graph`]; the formula is symmetric in the roles of
/// `z` and `w`.
pub fn convert_w_graph<T: Scalar>(g: &GraphOverW<T>) -> Result<GraphOverZ<T>, PlaneError> {
    let swapped = GraphOverZ::new(g.alpha.clone(), g.beta.clone());
    let back = convert_graph(&swapped)?;
    Ok(GraphOverZ::new(back.alpha, back.beta))
}

/// `S0 = {z = 0}`, `S1`, `S2` are symplectic and pairwise transverse and
/// positive.
pub fn triple_positive<T: Scalar>(g1: &GraphOverZ<T>, g2: &GraphOverZ<T>) -> bool {
    let first = norm_sqr(&g1.a) - norm_sqr(&g1.b) + T::one();
    let second = norm_sqr(&g2.a) - norm_sqr(&g2.b) + T::one();
    first > T::zero() && second > T::zero() && pair_positive(g1, g2)
}

/// Two vectors in real 4-space spanning a plane, in coordinates
/// `(x1, y1, x2, y2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneBasis<T> {
    pub u: [T; 4],
    pub v: [T; 4],
}

impl<T: Scalar> PlaneBasis<T> {
    pub fn new(u: [T; 4], v: [T; 4]) -> Self {
        Self { u, v }
    }

    /// Standard basis of `{w = 0}`.
    pub fn horizontal() -> Self {
        Self::new(
            [T::one(), T::zero(), T::zero(), T::zero()],
            [T::zero(), T::one(), T::zero(), T::zero()],
        )
    }

    /// Standard basis of `{z = 0}`.
    pub fn vertical() -> Self {
        Self::new(
            [T::zero(), T::zero(), T::one(), T::zero()],
            [T::zero(), T::zero(), T::zero(), T::one()],
        )
    }

    fn is_degenerate(&self) -> bool {
        (0..4).all(|i| {
            (i + 1..4).all(|j| {
                (self.u[i].clone() * self.v[j].clone() - self.u[j].clone() * self.v[i].clone())
                    .is_zero()
            })
        })
    }

    /// `w0(u, v)`.
    pub fn symplectic_area(&self) -> T {
        omega0(&self.u, &self.v)
    }
}

/// `w0(u, v) = dx1^dy1 + dx2^dy2` evaluated on a pair of vectors.
pub fn omega0<T: Scalar>(u: &[T; 4], v: &[T; 4]) -> T {
    u[0].clone() * v[1].clone() - u[1].clone() * v[0].clone() + u[2].clone() * v[3].clone()
        - u[3].clone() * v[2].clone()
}

fn det3<T: Scalar>(m: [[T; 3]; 3]) -> T {
    let [r0, r1, r2] = m;
    r0[0].clone() * (r1[1].clone() * r2[2].clone() - r1[2].clone() * r2[1].clone())
        - r0[1].clone() * (r1[0].clone() * r2[2].clone() - r1[2].clone() * r2[0].clone())
        + r0[2].clone() * (r1[0].clone() * r2[1].clone() - r1[1].clone() * r2[0].clone())
}

/// Determinant of the 4x4 matrix with the given columns.
pub fn det4<T: Scalar>(cols: [&[T; 4]; 4]) -> T {
    let mut total = T::zero();
    for (k, col) in cols.iter().enumerate() {
        // expand along the first row
        let minor_cols: Vec<&[T; 4]> = cols
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, c)| *c)
            .collect();
        let m = [
            [minor_cols[0][1].clone(), minor_cols[1][1].clone(), minor_cols[2][1].clone()],
            [minor_cols[0][2].clone(), minor_cols[1][2].clone(), minor_cols[2][2].clone()],
            [minor_cols[0][3].clone(), minor_cols[1][3].clone(), minor_cols[2][3].clone()],
        ];
        let term = col[0].clone() * det3(m);
        if k % 2 == 0 {
            total = total + term;
        } else {
            total = total - term;
        }
    }
    total
}

/// Classification of the plane spanned by `b1` against the plane spanned by
/// `b0`, evaluated directly from `w0` and `w0^2` on the given bases.
///
/// Margins: `symplectic = w0(b0) * w0(b1)`; `transverse` is the determinant
/// of the joint basis `(b0, b1)` (a positive multiple of `w0^2(b0, b1)`) in the
/// orientations supplied; `positive` is that determinant re-signed so both
/// bases carry their symplectic orientation.
pub fn oracle_classify<T: Scalar>(
    b0: &PlaneBasis<T>,
    b1: &PlaneBasis<T>,
) -> Result<Classification<T>, PlaneError> {
    if b0.is_degenerate() || b1.is_degenerate() {
        return Err(PlaneError::DegenerateBasis);
    }
    let s0 = b0.symplectic_area();
    let s1 = b1.symplectic_area();
    let det = det4([&b0.u, &b0.v, &b1.u, &b1.v]);
    let positive = s0.signum() * s1.signum() * det.clone();
    Ok(Classification::from_margins(Margins {
        symplectic: s0 * s1,
        transverse: det,
        positive,
    }))
}

/// A 2x2 complex matrix acting on `(z, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitaryMove {
    pub m: [[Complex64; 2]; 2],
}

impl UnitaryMove {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            m: [[one, zero], [zero, one]],
        }
    }

    /// `(z, w) -> (w, z)`.
    pub fn swap() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            m: [[zero, one], [one, zero]],
        }
    }

    pub fn apply(&self, p: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.m[0][0] * p[0] + self.m[0][1] * p[1],
            self.m[1][0] * p[0] + self.m[1][1] * p[1],
        ]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self {
            m: [
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ],
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let a = &self.m;
        let b = &other.m;
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { m }
    }

    pub fn determinant(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Max entry deviation of `A* A` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().compose(self);
        let id = Self::identity();
        (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| (p.m[i][j] - id.m[i][j]).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_special_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol && (self.determinant() - 1.0).norm() <= tol
    }

    /// Slope of the image of the complex line `{w = slope * z}`, or `None`
    /// when the image is the vertical line `{z = 0}`.
    pub fn image_slope(&self, slope: Complex64) -> Option<Complex64> {
        let [z, w] = self.apply([Complex64::new(1.0, 0.0), slope]);
        if z == Complex64::new(0.0, 0.0) {
            None
        } else {
            Some(w / z)
        }
    }
}

/// The move `(1/sqrt(1 + |α0|^2)) [[1, -ᾱ0], [α0, 1]]`, which lies in SU(2)
/// and carries `{w = 0}` onto `{w = α0 z}`.
pub fn normalize_slope(alpha0: Complex64) -> UnitaryMove {
    let s = (1.0 + alpha0.norm_sqr()).sqrt().recip();
    let one = Complex64::new(s, 0.0);
    UnitaryMove {
        m: [[one, -alpha0.conj() * s], [alpha0 * s, one]],
    }
}
