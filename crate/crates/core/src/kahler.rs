//! The Kähler form of a Hermitian line bundle over a disc, in coordinates.
//!
//! On a trivialized chart with base coordinate `z`, fiber coordinate `w` and
//! fiber metric `h(z) |w|^2`, the form is
//! `π*ω_S + (i/2) ∂∂̄ (h |w|^2)`. Everything here works in the real frame
//! `(x1, y1, x2, y2)` with `z = x1 + i y1`, `w = x2 + i y2`.

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chart::CutoffProfile;
use crate::plane::UnitaryMove;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KahlerError {
    #[error("point with |z| = {0} lies outside the chart")]
    OutOfChart(f64),
    #[error("fiber metric is not positive at |z| = {0}")]
    NonPositiveMetric(f64),
    #[error("transition move is not compatible: deviation {0:e}")]
    NotCompatible(f64),
}

/// Fiber metric coefficient as a function of `s = |z|^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FiberMetric {
    /// `h = c`.
    Const { c: f64 },
    /// `h = exp(k |z|^2)`.
    ExpNorm2 { k: f64 },
    /// `h = Σ c_i |z|^(2i)`.
    Poly { coeffs: Vec<f64> },
}

impl FiberMetric {
    /// `(h, h', h'')` as functions of `s`.
    fn radial(&self, s: f64) -> (f64, f64, f64) {
        match self {
            FiberMetric::Const { c } => (*c, 0.0, 0.0),
            FiberMetric::ExpNorm2 { k } => {
                let h = (k * s).exp();
                (h, k * h, k * k * h)
            }
            FiberMetric::Poly { coeffs } => {
                let (mut h, mut d1, mut d2) = (0.0, 0.0, 0.0);
                for c in coeffs.iter().rev() {
                    h = h * s + c;
                }
                for (i, c) in coeffs.iter().enumerate().skip(1).rev() {
                    d1 = d1 * s + c * i as f64;
                }
                for (i, c) in coeffs.iter().enumerate().skip(2).rev() {
                    d2 = d2 * s + c * (i * (i - 1)) as f64;
                }
                (h, d1, d2)
            }
        }
    }
}

/// Derivatives of `h` used by the form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricJet {
    pub h: f64,
    pub dz: Complex64,
    pub dzbar: Complex64,
    pub dzdzbar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricChart {
    pub h: FiberMetric,
    pub radius: f64,
    /// Base form `σ(|z|^2) (i/2) dz∧dz̄`, `σ` given by polynomial
    /// coefficients in `|z|^2`; empty means flat.
    #[serde(default)]
    pub base: Vec<f64>,
    /// Use central differences with this step instead of the closed-form
    /// derivatives of `h`.
    #[serde(default)]
    pub fd_step: Option<f64>,
}

impl MetricChart {
    pub fn new(h: FiberMetric, radius: f64) -> Self {
        Self {
            h,
            radius,
            base: Vec::new(),
            fd_step: None,
        }
    }

    pub fn sigma(&self, z: Complex64) -> f64 {
        if self.base.is_empty() {
            return 1.0;
        }
        let s = z.norm_sqr();
        self.base.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    pub fn h(&self, z: Complex64) -> f64 {
        self.h.radial(z.norm_sqr()).0
    }

    pub fn jet(&self, z: Complex64) -> MetricJet {
        match self.fd_step {
            None => {
                let s = z.norm_sqr();
                let (h, d1, d2) = self.h.radial(s);
                MetricJet {
                    h,
                    dz: z.conj() * d1,
                    dzbar: z * d1,
                    dzdzbar: d1 + s * d2,
                }
            }
            Some(step) => {
                let i = Complex64::i();
                let f = |u: Complex64| self.h(u);
                let h0 = f(z);
                let dx = (f(z + step) - f(z - step)) / (2.0 * step);
                let dy = (f(z + i * step) - f(z - i * step)) / (2.0 * step);
                let dxx = (f(z + step) - 2.0 * h0 + f(z - step)) / (step * step);
                let dyy = (f(z + i * step) - 2.0 * h0 + f(z - i * step)) / (step * step);
                MetricJet {
                    h: h0,
                    dz: Complex64::new(dx, -dy) / 2.0,
                    dzbar: Complex64::new(dx, dy) / 2.0,
                    dzdzbar: (dxx + dyy) / 4.0,
                }
            }
        }
    }
}

/// Coefficients of a 2-form in the frame
/// `dz∧dz̄, dw∧dw̄, dz̄∧dw, dz∧dw̄, dz∧dw`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormCoefficients {
    pub z: Complex64,
    pub w: Complex64,
    pub zz: Complex64,
    pub ww: Complex64,
    pub zbar_w: Complex64,
    pub z_wbar: Complex64,
    pub z_w: Complex64,
}

fn covector(k: usize, v: &[f64; 4]) -> Complex64 {
    // dz, dz̄, dw, dw̄ applied to a real vector
    match k {
        0 => Complex64::new(v[0], v[1]),
        1 => Complex64::new(v[0], -v[1]),
        2 => Complex64::new(v[2], v[3]),
        _ => Complex64::new(v[2], -v[3]),
    }
}

impl FormCoefficients {
    /// `(1,1)`-type: no `dz∧dw` part.
    pub fn is_type_11(&self) -> bool {
        self.z_w == Complex64::new(0.0, 0.0)
    }

    /// Realness defect: the form equals its conjugate when the diagonal
    /// coefficients are imaginary and the mixed ones are conjugate.
    pub fn realness_defect(&self) -> f64 {
        self.zz
            .re
            .abs()
            .max(self.ww.re.abs())
            .max((self.zbar_w - self.z_wbar.conj()).norm())
    }

    /// Real antisymmetric matrix `Ω_ij = ω(e_i, e_j)`.
    pub fn real_matrix(&self) -> Matrix4<f64> {
        let terms = [
            (self.zz, 0, 1),
            (self.ww, 2, 3),
            (self.zbar_w, 1, 2),
            (self.z_wbar, 0, 3),
            (self.z_w, 0, 2),
        ];
        let mut m = Matrix4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                let mut ei = [0.0; 4];
                let mut ej = [0.0; 4];
                ei[i] = 1.0;
                ej[j] = 1.0;
                let mut v = Complex64::new(0.0, 0.0);
                for (c, a, b) in terms {
                    v += c * (covector(a, &ei) * covector(b, &ej) - covector(a, &ej) * covector(b, &ei));
                }
                m[(i, j)] = v.re;
            }
        }
        m
    }
}

/// The form at `(z, w)`:
/// `(i/2)(σ + |w|^2 ∂∂̄h) dz∧dz̄ + (i/2) h dw∧dw̄ - (i/2) w̄ ∂_z̄h dz̄∧dw
/// + (i/2) w ∂_z h dz∧dw̄`.
pub fn omega_l_local(m: &MetricChart, z: Complex64, w: Complex64) -> Result<FormCoefficients, KahlerError> {
    if z.norm() > m.radius {
        return Err(KahlerError::OutOfChart(z.norm()));
    }
    let j = m.jet(z);
    if !(j.h > 0.0) {
        return Err(KahlerError::NonPositiveMetric(z.norm()));
    }
    let half_i = Complex64::new(0.0, 0.5);
    Ok(FormCoefficients {
        z,
        w,
        zz: half_i * (m.sigma(z) + w.norm_sqr() * j.dzdzbar),
        ww: half_i * j.h,
        zbar_w: -half_i * w.conj() * j.dzbar,
        z_wbar: half_i * w * j.dz,
        z_w: Complex64::new(0.0, 0.0),
    })
}

/// The standard complex structure in the real frame.
pub fn j0() -> Matrix4<f64> {
    let mut j = Matrix4::zeros();
    j[(1, 0)] = 1.0;
    j[(0, 1)] = -1.0;
    j[(3, 2)] = 1.0;
    j[(2, 3)] = -1.0;
    j
}

/// Standard `ω0` in the real frame.
pub fn omega0_matrix() -> Matrix4<f64> {
    let mut o = Matrix4::zeros();
    o[(0, 1)] = 1.0;
    o[(1, 0)] = -1.0;
    o[(2, 3)] = 1.0;
    o[(3, 2)] = -1.0;
    o
}

/// Smallest eigenvalue of the symmetric part of `ω(·, J0 ·)`.
pub fn taming_eigenvalue(f: &FormCoefficients) -> f64 {
    let g = f.real_matrix() * j0();
    let sym = (g + g.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.min()
}

/// Sample points `(z, w)` with `|z| <= z_radius`, `|w| <= w_radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartGrid {
    pub z_radius: f64,
    pub w_radius: f64,
    /// Rings per factor.
    pub n: usize,
}

impl ChartGrid {
    fn disc(radius: f64, n: usize, phase: f64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0)];
        for i in 1..=n {
            let r = radius * i as f64 / n as f64;
            let k = 4 * i;
            for j in 0..k {
                out.push(Complex64::from_polar(r, phase + std::f64::consts::TAU * j as f64 / k as f64));
            }
        }
        out
    }

    pub fn points(&self) -> Vec<(Complex64, Complex64)> {
        let zs = Self::disc(self.z_radius, self.n, 0.1);
        let ws = Self::disc(self.w_radius, self.n, 0.37);
        zs.iter().flat_map(|&z| ws.iter().map(move |&w| (z, w))).collect()
    }
}

fn real_point(x: [f64; 4]) -> (Complex64, Complex64) {
    (Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3]))
}

/// The four components `(dω)_{ijk}`, `i < j < k`, by central differences of
/// the real matrix.
pub fn exterior_derivative(
    m: &MetricChart,
    z: Complex64,
    w: Complex64,
    fd_step: f64,
) -> Result<[f64; 4], KahlerError> {
    let base = [z.re, z.im, w.re, w.im];
    let mut partial = [Matrix4::zeros(); 4];
    for (d, slot) in partial.iter_mut().enumerate() {
        let mut plus = base;
        let mut minus = base;
        plus[d] += fd_step;
        minus[d] -= fd_step;
        let (zp, wp) = real_point(plus);
        let (zm, wm) = real_point(minus);
        let op = omega_l_local(m, zp, wp)?.real_matrix();
        let om = omega_l_local(m, zm, wm)?.real_matrix();
        *slot = (op - om) / (2.0 * fd_step);
    }
    let comp = |i: usize, j: usize, k: usize| {
        partial[i][(j, k)] - partial[j][(i, k)] + partial[k][(i, j)]
    };
    Ok([comp(0, 1, 2), comp(0, 1, 3), comp(0, 2, 3), comp(1, 2, 3)])
}

/// Max over the grid of the Euclidean norm of the numerical `dω`.
pub fn exterior_derivative_max(
    m: &MetricChart,
    grid: &ChartGrid,
    fd_step: f64,
) -> Result<f64, KahlerError> {
    // keep the difference stencil inside the chart
    let shrunk = ChartGrid {
        z_radius: grid.z_radius.min(m.radius - fd_step),
        ..*grid
    };
    shrunk
        .points()
        .par_iter()
        .map(|&(z, w)| {
            exterior_derivative(m, z, w, fd_step)
                .map(|d| d.iter().map(|x| x * x).sum::<f64>().sqrt())
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TamingRow {
    pub radius: f64,
    pub min_eigenvalue: f64,
    pub max_domega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TamingReport {
    pub rows: Vec<TamingRow>,
    /// Largest tested `|w|` up to which every row is positive.
    pub tamed_up_to: Option<f64>,
}

/// For each fiber radius, the smallest taming eigenvalue over sampled base
/// points and fiber phases, and the largest `|dω|` there.
pub fn taming_radius(
    m: &MetricChart,
    radii: &[f64],
    z_rings: usize,
    fd_step: f64,
) -> Result<TamingReport, KahlerError> {
    let zs = ChartGrid::disc(m.radius - fd_step, z_rings, 0.1);
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let phases = if r == 0.0 { 1 } else { 8 };
        let points: Vec<(Complex64, Complex64)> = zs
            .iter()
            .flat_map(|&z| {
                (0..phases).map(move |k| {
                    (z, Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / phases as f64))
                })
            })
            .collect();
        let (min_eigenvalue, max_domega) = points
            .par_iter()
            .map(|&(z, w)| {
                let f = omega_l_local(m, z, w)?;
                let d = exterior_derivative(m, z, w, fd_step)?;
                Ok((taming_eigenvalue(&f), d.iter().map(|x| x * x).sum::<f64>().sqrt()))
            })
            .try_reduce(
                || (f64::INFINITY, 0.0),
                |a, b| Ok((a.0.min(b.0), a.1.max(b.1))),
            )?;
        rows.push(TamingRow {
            radius: r,
            min_eigenvalue,
            max_domega,
        });
    }
    let mut sorted: Vec<&TamingRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.radius.total_cmp(&b.radius));
    let mut tamed_up_to = None;
    for row in sorted {
        if row.min_eigenvalue > 0.0 {
            tamed_up_to = Some(row.radius);
        } else {
            break;
        }
    }
    Ok(TamingReport { rows, tamed_up_to })
}

/// `ρ σ_S + (1 - ρ)` with a rise profile over `inner <= |z| <= outer`: the flat
/// coefficient inside `inner`, the given one outside `outer`.
pub fn flatten_surface_form<F>(
    sigma: F,
    profile: CutoffProfile,
    inner: f64,
    outer: f64,
) -> impl Fn(Complex64) -> f64
where
    F: Fn(Complex64) -> f64,
{
    move |z: Complex64| {
        let t = 1.0 + (z.norm() - inner) / (outer - inner);
        let rho = profile.value(t);
        if rho == 1.0 {
            sigma(z)
        } else if rho == 0.0 {
            1.0
        } else {
            rho * sigma(z) + (1.0 - rho)
        }
    }
}

/// Real 4x4 matrix of a complex-linear move.
pub fn real_matrix_of(mv: &UnitaryMove) -> Matrix4<f64> {
    let mut r = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let c = mv.m[i][j];
            r[(2 * i, 2 * j)] = c.re;
            r[(2 * i, 2 * j + 1)] = -c.im;
            r[(2 * i + 1, 2 * j)] = c.im;
            r[(2 * i + 1, 2 * j + 1)] = c.re;
        }
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GluingReport {
    /// Max entry of `Mᵀ Ω0 M - Ω0`.
    pub omega_defect: f64,
    /// Max entry of `M J0 - J0 M`.
    pub j_defect: f64,
    pub unitarity_defect: f64,
}

/// Checks that a transition move pulls back the flat `ω0` and `J0` to
/// themselves within `tol`.
pub fn gluing_compatibility(mv: &UnitaryMove, tol: f64) -> Result<GluingReport, KahlerError> {
    let m = real_matrix_of(mv);
    let o = omega0_matrix();
    let j = j0();
    let omega_defect = (m.transpose() * o * m - o).abs().max();
    let j_defect = (m * j - j * m).abs().max();
    let report = GluingReport {
        omega_defect,
        j_defect,
        unitarity_defect: mv.unitarity_defect(),
    };
    let worst = omega_defect.max(j_defect).max(report.unitarity_defect);
    if worst > tol {
        return Err(KahlerError::NotCompatible(worst));
    }
    Ok(report)
}

/// `R_k ∘ R_j^{-1}` for the moves sending `{v = 0}` to `{w = a z}`.
pub fn transition(a_j: Complex64, a_k: Complex64) -> UnitaryMove {
    let rj = crate::plane::normalize_slope(a_j);
    let rk = crate::plane::normalize_slope(a_k);
    rk.compose(&rj.adjoint())
}
