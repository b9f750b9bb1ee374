//! The perturbation stages: linearize, drop the anti-holomorphic part, shift
//! slopes, separate a multiple point into double points, and make each
//! double point orthogonal.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cutoff::{CutoffProfile, MAX_SLOPE};
use super::surface::{Arrangement, Cutoff, LocalGraphSurface, Perturbation};
use super::verify::{
    locate_intersections, surface_min_margin, verify_symplectic_grid, GridSpec, Region,
};
use super::ChartError;
use crate::plane::UnitaryMove;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const SAFETY: f64 = 0.9;
const MAX_HALVINGS: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrangementConstants {
    /// Largest residual bound.
    #[serde(rename = "C")]
    pub c: f64,
    /// Largest `|a_j|` or `|b_j|`.
    #[serde(rename = "M")]
    pub m: f64,
    /// `min{1, 1 + |a_j|^2 - |b_j|^2, |a_j - a_k| - |b_j - b_k|}`.
    pub eps0: f64,
}

/// `(C, M, eps0)` of an arrangement, computed from each surface's germ at the
/// origin so the values stay current after slope shifts.
pub fn arrangement_constants(arr: &Arrangement) -> Result<ArrangementConstants, ChartError> {
    arr.validate()?;
    let germs: Vec<_> = arr.surfaces.iter().map(|s| s.germ()).collect();
    let c = arr
        .surfaces
        .iter()
        .filter(|s| !s.residual.is_none())
        .map(|s| s.residual_bound)
        .fold(0.0, f64::max);
    let m = germs
        .iter()
        .map(|g| g.a.norm().max(g.b.norm()))
        .fold(0.0, f64::max);
    let mut eps0: f64 = 1.0;
    for (j, g) in germs.iter().enumerate() {
        eps0 = eps0.min(1.0 + g.a.norm_sqr() - g.b.norm_sqr());
        for h in &germs[j + 1..] {
            eps0 = eps0.min((g.a - h.a).norm() - (g.b - h.b).norm());
        }
    }
    Ok(ArrangementConstants { c, m, eps0 })
}

/// Largest `x > 0` with `f(x) < target`, for `f` increasing from `f(0) = 0`.
fn increasing_root(f: impl Fn(f64) -> f64, target: f64) -> f64 {
    let mut hi = 1.0;
    while f(hi) < target {
        hi *= 2.0;
        if hi > 1e300 {
            return hi;
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn margins_pass(surfaces: &[LocalGraphSurface], grid: &GridSpec) -> bool {
    surfaces
        .iter()
        .all(|s| surface_min_margin(s, grid) > grid.symplectic_margin_floor)
}

/// Cuts every residual off inside `|z| < λ` with a rise profile on `|z|/λ`.
///
/// The graph of each surface over `|z| <= 2λ` must fit in the chart ball:
/// `(2λ)^2 + (4Mλ + 4Cλ^2)^2 < r0^2`. On top of that `λ < eps0/(8C)` rules
/// out new intersections and `λ < eps0/(C(9 + 24M))` keeps the margin
/// positive.
pub fn linearize_step(
    arr: &Arrangement,
    grid: &GridSpec,
) -> Result<(Arrangement, f64), ChartError> {
    let k = arrangement_constants(arr)?;
    let fit = increasing_root(
        |l| {
            let w = 4.0 * k.m * l + 4.0 * k.c * l * l;
            4.0 * l * l + w * w
        },
        arr.r0 * arr.r0,
    );
    let mut lambda = fit;
    if k.c > 0.0 {
        lambda = lambda
            .min(k.eps0 / (8.0 * k.c))
            .min(k.eps0 / (k.c * (9.0 + 24.0 * k.m)));
    }
    lambda *= SAFETY;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(ChartError::ChartTooSmall(format!(
            "no positive linearization radius (fit {fit})"
        )));
    }
    for _ in 0..=MAX_HALVINGS {
        let mut out = arr.clone();
        for s in &mut out.surfaces {
            if !s.residual.is_none() {
                s.perturbations.push(Perturbation::ResidualCutoff {
                    cutoff: Cutoff::radial(CutoffProfile::RISE, lambda),
                });
            }
        }
        if margins_pass(&out.surfaces, grid) {
            return Ok((out, lambda));
        }
        lambda *= 0.5;
    }
    Err(ChartError::ChartTooSmall(
        "linearized surfaces fail the margin check at every tried radius".into(),
    ))
}

/// Radius about the origin on which every surface is exactly linear.
fn common_linear_radius(arr: &Arrangement) -> Result<f64, ChartError> {
    let mut r = arr.r0;
    for (j, s) in arr.surfaces.iter().enumerate() {
        let lr = s.linear_radius();
        if !(lr > 0.0) {
            return Err(ChartError::NotLinear(j));
        }
        r = r.min(lr);
    }
    Ok(r)
}

/// Multiplies each `b_j z̄` by `ρ(λ log|z| + μ)` with a rise profile, so every
/// surface is the complex line `w = a_j z` on `|z| <= exp((1 - μ)/λ)`.
///
/// `λ = 0.9 min(1, eps0/(6M^2))`, and `μ >= 2` places the outer radius
/// `exp((2 - μ)/λ)` at 0.9 times the largest radius where all surfaces are
/// linear and the graphs (with `|w| <= 2M|z|`) stay in the chart ball.
pub fn remove_antiholomorphic_step(
    arr: &Arrangement,
    grid: &GridSpec,
) -> Result<(Arrangement, f64, f64), ChartError> {
    let k = arrangement_constants(arr)?;
    let linear = common_linear_radius(arr)?;
    let outer = SAFETY * linear.min(arr.r0 / (1.0 + 4.0 * k.m * k.m).sqrt());
    let mut lambda = if k.m > 0.0 {
        SAFETY * (k.eps0 / (6.0 * k.m * k.m)).min(1.0)
    } else {
        SAFETY
    };
    if !(outer > 0.0) {
        return Err(ChartError::ChartTooSmall(
            "no room for the anti-holomorphic cutoff".into(),
        ));
    }
    for _ in 0..=MAX_HALVINGS {
        let mu = (2.0 - lambda * outer.ln()).max(2.0);
        let mut out = arr.clone();
        for s in &mut out.surfaces {
            if s.germ().b != ZERO {
                s.perturbations.push(Perturbation::AntiholomorphicCutoff {
                    cutoff: Cutoff::log(CutoffProfile::RISE, lambda, mu),
                });
            }
        }
        if margins_pass(&out.surfaces, grid) {
            return Ok((out, lambda, mu));
        }
        lambda *= 0.5;
    }
    Err(ChartError::ChartTooSmall(
        "anti-holomorphic cutoff fails the margin check at every tried λ".into(),
    ))
}

/// Replaces the slope `a_j` by `a_j + eps` on `|z| <= α0`, returning to `a_j`
/// for `|z| >= 2α0` through a fall profile. `α0` is chosen so the change sits
/// inside the linear zone of surface `j` and the chart ball.
pub fn shift_slope(arr: &Arrangement, j: usize, eps: Complex64) -> Result<Arrangement, ChartError> {
    let k = arrangement_constants(arr)?;
    if j >= arr.surfaces.len() {
        return Err(ChartError::InvalidArrangement(format!(
            "no surface with index {j}"
        )));
    }
    let bound = 0.5 * k.eps0;
    if eps.norm() > bound {
        return Err(ChartError::EpsTooLarge {
            eps: eps.norm(),
            bound,
        });
    }
    if eps == ZERO {
        return Ok(arr.clone());
    }
    let s = &arr.surfaces[j];
    let lr = s.linear_radius();
    if !(lr > 0.0) {
        return Err(ChartError::NotLinear(j));
    }
    let shifted = s.germ().a + eps;
    for (i, other) in arr.surfaces.iter().enumerate() {
        if i != j && other.germ().a == shifted {
            return Err(ChartError::SlopeCollision { j, k: i });
        }
    }
    let fit = arr.r0 / (1.0 + (2.0 * k.m + 1.0).powi(2)).sqrt();
    let alpha0 = 0.5 * SAFETY * lr.min(fit);
    let mut out = arr.clone();
    out.surfaces[j].perturbations.push(Perturbation::SlopeShift {
        eps,
        cutoff: Cutoff::radial(CutoffProfile::FALL, alpha0),
    });
    Ok(out)
}

/// Surfaces `w = α_i z`, `i = 0..=l`, all exactly linear over the ball of the
/// given radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexLikeModel {
    pub slopes: Vec<Complex64>,
    pub radius: f64,
}

impl ComplexLikeModel {
    pub fn surfaces(&self) -> Vec<LocalGraphSurface> {
        self.slopes
            .iter()
            .map(|&a| LocalGraphSurface::linear(a, ZERO, self.radius))
            .collect()
    }

    fn max_slope(&self) -> f64 {
        self.slopes.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Separation {
    /// The last surface, `w = α_l z + eps ρ(|z|/λ0)` with a fall profile.
    pub surface: LocalGraphSurface,
    pub eps: f64,
    pub lambda0: f64,
    /// `(i, z_il)` with `z_il = eps/(α_i - α_l)`.
    pub predicted: Vec<(usize, Complex64)>,
}

/// Pushes the last surface of a complex-like model off the origin by `eps`
/// inside `|z| <= λ0`. It then meets each other line once, at
/// `z_il = eps/(α_i - α_l)`, all inside `|z| < λ0` when
/// `eps < min|α_l - α_i| λ0`.
pub fn separate_multiple_point(
    model: &ComplexLikeModel,
    eps: f64,
    lambda0: f64,
) -> Result<Separation, ChartError> {
    let l = model.slopes.len().checked_sub(1).filter(|&l| l >= 1).ok_or_else(|| {
        ChartError::InvalidArrangement("need at least two slopes".into())
    })?;
    for i in 0..=l {
        for j in i + 1..=l {
            if model.slopes[i] == model.slopes[j] {
                return Err(ChartError::InvalidArrangement(format!(
                    "slopes {i} and {j} coincide"
                )));
            }
        }
    }
    if !(eps >= 0.0) || !(lambda0 > 0.0) {
        return Err(ChartError::InvalidArrangement(
            "eps must be non-negative and λ0 positive".into(),
        ));
    }
    let alpha_l = model.slopes[l];
    let gap = model.slopes[..l]
        .iter()
        .map(|a| (a - alpha_l).norm())
        .fold(f64::INFINITY, f64::min);
    let bound = gap * lambda0;
    if eps >= bound && eps > 0.0 {
        return Err(ChartError::EpsTooLarge { eps, bound });
    }
    let reach = 2.0 * model.max_slope() * lambda0 + eps;
    if 4.0 * lambda0 * lambda0 + reach * reach >= model.radius * model.radius {
        return Err(ChartError::ChartTooSmall(format!(
            "graph over |z| <= 2λ0 = {} leaves the ball of radius {}",
            2.0 * lambda0,
            model.radius
        )));
    }
    let mut surface = LocalGraphSurface::linear(alpha_l, ZERO, model.radius);
    if eps > 0.0 {
        surface.perturbations.push(Perturbation::ConstantShift {
            eps: Complex64::new(eps, 0.0),
            cutoff: Cutoff::radial(CutoffProfile::FALL, lambda0),
        });
    }
    let predicted = model.slopes[..l]
        .iter()
        .enumerate()
        .map(|(i, a)| (i, eps / (a - alpha_l)))
        .collect();
    Ok(Separation {
        surface,
        eps,
        lambda0,
        predicted,
    })
}

/// `λ = 0.9 min(1, 1/(6|a|^2))`, which makes `1 - 3|a|^2 λ(λ + 1)` positive.
pub fn orthogonalizing_lambda(a: Complex64) -> f64 {
    let a2 = a.norm_sqr();
    if a2 == 0.0 {
        SAFETY
    } else {
        SAFETY * (1.0 / (6.0 * a2)).min(1.0)
    }
}

/// Deforms `{w = a z}` into `w = a z ρ(λ log|z| + μ)` (rise profile) inside a
/// chart ball of the given radius, with [`orthogonalizing_lambda`]. Near the
/// origin the surface becomes `{w = 0}`, orthogonal to `{z = 0}`.
pub fn orthogonalize_double_point(
    a: Complex64,
    radius: f64,
    grid: &GridSpec,
) -> Result<LocalGraphSurface, ChartError> {
    let mut lambda = orthogonalizing_lambda(a);
    for _ in 0..=MAX_HALVINGS {
        let s = orthogonalize_with_lambda(a, lambda, radius)?;
        if margins_pass(std::slice::from_ref(&s), grid) {
            return Ok(s);
        }
        lambda *= 0.5;
    }
    Err(ChartError::ChartTooSmall(
        "orthogonalized surface fails the margin check".into(),
    ))
}

/// [`orthogonalize_double_point`] with a caller-chosen `λ`. The outer radius
/// `exp((2 - μ)/λ)` is 0.9 of the largest `|z|` whose graph point stays in
/// the ball.
pub fn orthogonalize_with_lambda(
    a: Complex64,
    lambda: f64,
    radius: f64,
) -> Result<LocalGraphSurface, ChartError> {
    if !(radius > 0.0) || !(lambda > 0.0) {
        return Err(ChartError::ChartTooSmall(format!(
            "radius {radius}, λ {lambda}"
        )));
    }
    let mut s = LocalGraphSurface::linear(a, ZERO, radius);
    if a == ZERO {
        return Ok(s);
    }
    let outer = SAFETY * radius / (1.0 + a.norm_sqr()).sqrt();
    let mu = (2.0 - lambda * outer.ln()).max(2.0);
    s.perturbations.push(Perturbation::LinearCutoff {
        cutoff: Cutoff::log(CutoffProfile::RISE, lambda, mu),
    });
    Ok(s)
}

/// An orthogonalized double point of the final configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoublePoint {
    /// `(kept, deformed)` surface indices; index 0 is the reference surface.
    pub surfaces: (usize, usize),
    pub point: [Complex64; 2],
    /// Unitary chart move `(z, w) - point -> (z'', w'')` taking the kept
    /// surface to `{z'' = 0}` and the deformed one to `{w'' = a z''}`.
    pub chart_move: UnitaryMove,
    pub local_slope: Complex64,
    /// The deformed surface in the local chart.
    pub local_surface: LocalGraphSurface,
    /// Worst deviation of sampled points from the local model equations.
    pub model_residual: f64,
    /// Grid symplectic margin of the deformed surface in its local chart.
    pub margin: f64,
    /// Smallest gap between the deformed piece and any third surface.
    pub isolation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NiceReport {
    pub constants: ArrangementConstants,
    pub lambda_linearize: f64,
    pub lambda_antiholomorphic: f64,
    pub mu: f64,
    /// Slope shifts applied between the two steps, as `(surface, eps)`.
    pub shifts: Vec<(usize, Complex64)>,
    /// Surfaces in the original chart after both steps.
    pub chart_surfaces: Vec<LocalGraphSurface>,
    /// The complex-like model in swapped coordinates, when separation ran.
    pub model: Option<ComplexLikeModel>,
    /// Model surfaces after separation, index 0 being the reference surface.
    pub model_surfaces: Vec<LocalGraphSurface>,
    pub separations: Vec<Separation>,
    pub double_points: Vec<DoublePoint>,
    /// Worst distance between a predicted and a located intersection.
    pub prediction_error: f64,
    /// True when no point is shared by three or more surfaces.
    pub only_double_points: bool,
    pub min_margin: f64,
}

fn chart_min_margin(surfaces: &[LocalGraphSurface], grid: &GridSpec) -> f64 {
    surfaces
        .iter()
        .map(|s| surface_min_margin(s, grid))
        .fold(f64::INFINITY, f64::min)
}

/// Slope shifts for surfaces whose slope at the origin is zero.
fn shift_zero_slopes(
    mut arr: Arrangement,
    grid: &GridSpec,
) -> Result<(Arrangement, Vec<(usize, Complex64)>), ChartError> {
    let mut shifts = Vec::new();
    for j in 0..arr.surfaces.len() {
        if arr.surfaces[j].germ().a != ZERO {
            continue;
        }
        let k = arrangement_constants(&arr)?;
        let others: Vec<Complex64> = arr.surfaces.iter().map(|s| s.germ().a).collect();
        let mut size = 0.25 * k.eps0;
        let mut done = false;
        for _ in 0..=MAX_HALVINGS {
            // pick the direction keeping the new slope farthest from the others
            let eps = (0..8)
                .map(|d| Complex64::from_polar(size, std::f64::consts::TAU * d as f64 / 8.0))
                .max_by(|x, y| {
                    let gap = |e: &Complex64| {
                        others
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != j)
                            .map(|(_, a)| (a - e).norm())
                            .fold(f64::INFINITY, f64::min)
                    };
                    gap(x).total_cmp(&gap(y))
                })
                .unwrap_or(Complex64::new(size, 0.0));
            let candidate = shift_slope(&arr, j, eps)?;
            if margins_pass(&candidate.surfaces[j..=j], grid) && candidate.validate().is_ok() {
                arr = candidate;
                shifts.push((j, eps));
                done = true;
                break;
            }
            size *= 0.5;
        }
        if !done {
            return Err(ChartError::NoAdmissibleEps {
                attempts: MAX_HALVINGS,
            });
        }
    }
    Ok((arr, shifts))
}

/// Where a surface of the model is exactly affine near `z`: distance from
/// `z` to the nearest cutoff transition annulus.
fn affine_reach(s: &LocalGraphSurface, z: Complex64) -> f64 {
    s.perturbations
        .iter()
        .map(|p| {
            let c = p.cutoff();
            let (inner, outer) = c.transition_radii();
            let d = (z - c.center()).norm();
            if d < inner {
                inner - d
            } else if d > outer {
                d - outer
            } else {
                0.0
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// Unitary move with determinant 1 taking the line of slope `beta` to
/// `{z = 0}`.
fn straighten(beta: Complex64) -> UnitaryMove {
    let s = (1.0 + beta.norm_sqr()).sqrt().recip();
    UnitaryMove {
        m: [
            [beta * s, Complex64::new(-s, 0.0)],
            [Complex64::new(s, 0.0), beta.conj() * s],
        ],
    }
}

fn orthogonalize_in_model(
    surfaces: &[LocalGraphSurface],
    kept: usize,
    deformed: usize,
    z: Complex64,
    others_points: &[Complex64],
    search_radius: f64,
    grid: &GridSpec,
) -> Result<DoublePoint, ChartError> {
    let sk = &surfaces[kept];
    let sd = &surfaces[deformed];
    let point = [z, sk.eval(z)];
    let beta = sk.jet(z).dz;
    let alpha = sd.jet(z).dz;
    let mv = straighten(beta);
    let local_slope = (Complex64::new(1.0, 0.0) + beta.conj() * alpha) / (beta - alpha);

    // z-radius around the point on which both surfaces are affine and no other
    // surface or double point comes close
    let mut reach = affine_reach(sk, z)
        .min(affine_reach(sd, z))
        .min(search_radius - z.norm());
    for q in others_points {
        reach = reach.min(0.5 * (q - z).norm());
    }
    let lipschitz = surfaces
        .iter()
        .map(|s| s.jet(z).dz.norm() + 2.0 * MAX_SLOPE)
        .fold(1.0, f64::max);
    for (i, s) in surfaces.iter().enumerate() {
        if i != kept && i != deformed {
            reach = reach.min(0.5 * (s.eval(z) - point[1]).norm() / (2.0 * lipschitz));
        }
    }
    if !(reach > 0.0) {
        return Err(ChartError::ChartTooSmall(format!(
            "no affine neighbourhood around the double point at {z}"
        )));
    }
    // a ball of radius `ball` about the point projects into the reach disc
    let ball = SAFETY * reach;
    let local = orthogonalize_double_point(local_slope, ball, grid)?;

    let inv = mv.adjoint();
    let to_model = |zz: Complex64, ww: Complex64| {
        let [u, v] = inv.apply([zz, ww]);
        [point[0] + u, point[1] + v]
    };
    let to_local = |q: [Complex64; 2]| mv.apply([q[0] - point[0], q[1] - point[1]]);

    let n = grid.resolution;
    let mut residual: f64 = 0.0;
    // kept surface lands on {z'' = 0}; the undeformed partner on {w'' = a z''}
    for k in 0..=n {
        let t = ball * (k as f64 / n as f64) / lipschitz;
        for d in 0..8 {
            let zq = z + Complex64::from_polar(t, std::f64::consts::TAU * d as f64 / 8.0);
            let qk = to_local([zq, sk.eval(zq)]);
            residual = residual.max(qk[0].norm());
            let qd = to_local([zq, sd.eval(zq)]);
            residual = residual.max((qd[1] - local_slope * qd[0]).norm());
        }
    }
    // inside the inner disc the deformed surface is {w'' = 0}
    let inner = local
        .perturbations
        .first()
        .map(|p| p.cutoff().transition_radii().0)
        .unwrap_or(ball);
    for zz in Region::disc(inner).samples(n.min(32)) {
        let q = to_model(zz, local.eval(zz));
        let back = to_local(q);
        residual = residual.max(back[1].norm() / inner.max(f64::MIN_POSITIVE));
    }

    // distance of the deformed piece from every third surface
    let mut isolation = f64::INFINITY;
    let outer = local
        .perturbations
        .first()
        .map(|p| p.cutoff().transition_radii().1)
        .unwrap_or(0.0);
    if outer > 0.0 {
        for zz in Region::disc(outer).samples(n.min(32)) {
            let q = to_model(zz, local.eval(zz));
            for (i, s) in surfaces.iter().enumerate() {
                if i != kept && i != deformed {
                    isolation = isolation.min((s.eval(q[0]) - q[1]).norm());
                }
            }
        }
    }

    let margin = surface_min_margin(&local, grid);
    Ok(DoublePoint {
        surfaces: (kept, deformed),
        point,
        chart_move: mv,
        local_slope,
        local_surface: local,
        model_residual: residual,
        margin,
        isolation,
    })
}

/// Makes every intersection of the arrangement (plus the reference surface
/// `{z = 0}`) a double point with an orthogonal local model.
///
/// Steps one and two run in the original chart, with zero slopes shifted in
/// between. A single surface is then orthogonalized at the origin directly.
/// Otherwise the coordinates are swapped, which turns the configuration into
/// the complex-like model `w = α_i z` with `α_0 = 0` and `α_j = 1/a_j`; the
/// surfaces `l, l-1, ..., 2` are pushed off the origin one at a time inside
/// shrinking balls, the resulting double points are located and checked
/// against their predicted positions, and each is orthogonalized in a local
/// unitary chart.
pub fn nice_pipeline(
    arr: &Arrangement,
    grid: &GridSpec,
) -> Result<(Vec<LocalGraphSurface>, NiceReport), ChartError> {
    let constants = arrangement_constants(arr)?;
    let (lin, lambda1) = linearize_step(arr, grid)?;
    let l = lin.surfaces.len();
    let (shifted, shifts) = if l >= 2 {
        shift_zero_slopes(lin, grid)?
    } else {
        (lin, Vec::new())
    };
    let (stepped, lambda2, mu) = remove_antiholomorphic_step(&shifted, grid)?;
    let inner = ((1.0 - mu) / lambda2).exp();
    let mut chart_surfaces = stepped.surfaces.clone();
    let mut min_margin = chart_min_margin(&chart_surfaces, grid);

    let mut report = NiceReport {
        constants,
        lambda_linearize: lambda1,
        lambda_antiholomorphic: lambda2,
        mu,
        shifts,
        chart_surfaces: Vec::new(),
        model: None,
        model_surfaces: Vec::new(),
        separations: Vec::new(),
        double_points: Vec::new(),
        prediction_error: 0.0,
        only_double_points: true,
        min_margin: 0.0,
    };

    if l == 1 {
        let a = chart_surfaces[0].germ().a;
        if a != ZERO {
            let local = orthogonalize_double_point(a, inner, grid)?;
            let margin = surface_min_margin(&local, grid);
            min_margin = min_margin.min(margin);
            let cutoff = local.perturbations[0].clone();
            chart_surfaces[0].perturbations.push(cutoff);
            let inner_disc = local.perturbations[0].cutoff().transition_radii().0;
            let residual = Region::disc(inner_disc)
                .samples(grid.resolution.min(32))
                .iter()
                .map(|&z| chart_surfaces[0].eval(z).norm() / inner_disc)
                .fold(0.0, f64::max);
            report.double_points.push(DoublePoint {
                surfaces: (0, 1),
                point: [ZERO, ZERO],
                chart_move: UnitaryMove::identity(),
                local_slope: a,
                local_surface: local,
                model_residual: residual,
                margin,
                isolation: f64::INFINITY,
            });
        } else {
            report.double_points.push(DoublePoint {
                surfaces: (0, 1),
                point: [ZERO, ZERO],
                chart_move: UnitaryMove::identity(),
                local_slope: a,
                local_surface: LocalGraphSurface::linear(ZERO, ZERO, inner),
                model_residual: 0.0,
                margin: 1.0,
                isolation: f64::INFINITY,
            });
        }
        report.chart_surfaces = chart_surfaces.clone();
        report.min_margin = min_margin;
        return Ok((chart_surfaces, report));
    }

    // swapped coordinates: {z = 0} -> {w' = 0}, {w = a_j z} -> {w' = z'/a_j}
    let mut slopes = vec![ZERO];
    slopes.extend(chart_surfaces.iter().map(|s| Complex64::new(1.0, 0.0) / s.germ().a));
    let model = ComplexLikeModel {
        slopes: slopes.clone(),
        radius: inner,
    };
    let max_slope = model.max_slope();
    let search_radius = inner / (1.0 + max_slope * max_slope).sqrt();
    let mut model_surfaces = model.surfaces();
    let mut ball = inner;
    for idx in (2..=l).rev() {
        let sub = ComplexLikeModel {
            slopes: slopes[..=idx].to_vec(),
            radius: ball,
        };
        let m = sub.max_slope();
        let lambda0 = SAFETY * ball / (2.0 * (1.0 + 4.0 * m * m).sqrt());
        let alpha = slopes[idx];
        let gap = slopes[..idx]
            .iter()
            .map(|a| (a - alpha).norm())
            .fold(f64::INFINITY, f64::min);
        // keep the shifted graph symplectic: 1 + |α|^2 - 2|α| eps ρ'/(2λ0) > 0
        let symplectic_cap = if alpha.norm() > 0.0 {
            (1.0 + alpha.norm_sqr()) * lambda0 / (MAX_SLOPE * alpha.norm())
        } else {
            f64::INFINITY
        };
        let mut eps = SAFETY * (gap * lambda0).min(symplectic_cap);
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let sep = separate_multiple_point(&sub, eps, lambda0)?;
            let mut s = sep.surface.clone();
            s.r0 = inner;
            if margins_pass(std::slice::from_ref(&s), grid) {
                accepted = Some((sep, s));
                break;
            }
            eps *= 0.5;
        }
        let (sep, s) = accepted.ok_or(ChartError::NoAdmissibleEps {
            attempts: MAX_HALVINGS,
        })?;
        model_surfaces[idx] = s;
        ball = SAFETY * sep.eps / (1.0 + alpha.norm_sqr()).sqrt();
        report.separations.push(sep);
    }

    // locate every pairwise intersection and compare with the predictions
    let region = Region::disc(search_radius);
    let mut found: Vec<(usize, usize, Complex64)> = Vec::new();
    for i in 0..=l {
        for j in i + 1..=l {
            let pts = locate_intersections(&model_surfaces[i], &model_surfaces[j], &region, grid)?;
            for p in &pts {
                if !(p.transverse && p.positive) {
                    report.only_double_points = false;
                }
            }
            if pts.len() != 1 {
                report.only_double_points = false;
            }
            for p in pts {
                found.push((i, j, p.z));
            }
        }
    }
    let scale = search_radius;
    for a in 0..found.len() {
        for b in a + 1..found.len() {
            if (found[a].2 - found[b].2).norm() <= 1e-9 * scale {
                let wa = model_surfaces[found[a].0].eval(found[a].2);
                let wb = model_surfaces[found[b].0].eval(found[b].2);
                if (wa - wb).norm() <= 1e-9 * scale {
                    report.only_double_points = false;
                }
            }
        }
    }
    let mut prediction_error: f64 = 0.0;
    for sep in &report.separations {
        let l_idx = sep.predicted.len();
        for &(i, zp) in &sep.predicted {
            let located = found
                .iter()
                .filter(|(a, b, _)| (*a, *b) == (i, l_idx))
                .map(|(_, _, z)| (z - zp).norm())
                .fold(f64::INFINITY, f64::min);
            prediction_error = prediction_error.max(located);
        }
    }
    report.prediction_error = prediction_error;

    for (n, &(i, j, z)) in found.iter().enumerate() {
        let others: Vec<Complex64> = found
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != n)
            .map(|(_, f)| f.2)
            .collect();
        let dp = orthogonalize_in_model(&model_surfaces, i, j, z, &others, search_radius, grid)?;
        min_margin = min_margin.min(dp.margin);
        report.double_points.push(dp);
    }
    for s in &model_surfaces {
        min_margin = min_margin.min(verify_symplectic_grid(s, &region, grid));
        for r in super::verify::surface_regions(s).iter().skip(1) {
            min_margin = min_margin.min(verify_symplectic_grid(s, r, grid));
        }
    }

    report.model = Some(model);
    report.model_surfaces = model_surfaces;
    report.chart_surfaces = chart_surfaces.clone();
    report.min_margin = min_margin;
    Ok((chart_surfaces, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::surface::{PolyTerm, Residual};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lin(a: Complex64, b: Complex64) -> LocalGraphSurface {
        LocalGraphSurface::linear(a, b, 1.0)
    }

    fn quad(a: Complex64, b: Complex64, k: Complex64) -> LocalGraphSurface {
        lin(a, b).with_residual(
            Residual::Poly {
                coeffs: vec![PolyTerm { p: 2, q: 0, c: k }],
            },
            1.0,
        )
    }

    #[test]
    fn constants_examples() {
        let k = arrangement_constants(&Arrangement::new(
            vec![
                quad(c(1.0, 0.0), ZERO, c(1.0, 0.0)),
                quad(c(-1.0, 0.0), ZERO, c(1.0, 0.0)),
            ],
            1.0,
        ))
        .unwrap();
        assert_eq!((k.c, k.m, k.eps0), (1.0, 1.0, 1.0));
        let k = arrangement_constants(&Arrangement::new(vec![lin(ZERO, ZERO)], 1.0)).unwrap();
        assert_eq!((k.c, k.m, k.eps0), (0.0, 0.0, 1.0));
        let k = arrangement_constants(&Arrangement::new(
            vec![lin(c(2.0, 0.0), ZERO), lin(ZERO, ZERO)],
            1.0,
        ))
        .unwrap();
        assert_eq!((k.m, k.eps0), (2.0, 1.0));
    }

    #[test]
    fn linear_input_is_left_alone() {
        let arr = Arrangement::new(vec![lin(c(1.0, 0.0), c(0.5, 0.0))], 1.0);
        let (out, lambda) = linearize_step(&arr, &GridSpec::default()).unwrap();
        assert_eq!(out, arr);
        assert!(lambda > 0.0);
        let arr = Arrangement::new(vec![lin(c(1.0, 0.0), ZERO), lin(c(-1.0, 0.0), ZERO)], 1.0);
        let (out, _, _) = remove_antiholomorphic_step(&arr, &GridSpec::default()).unwrap();
        assert_eq!(out, arr);
    }

    #[test]
    fn step_two_needs_linear_input() {
        let arr = Arrangement::new(vec![quad(c(1.0, 0.0), ZERO, c(0.5, 0.0))], 1.0);
        assert_eq!(
            remove_antiholomorphic_step(&arr, &GridSpec::default()),
            Err(ChartError::NotLinear(0))
        );
    }

    #[test]
    fn shift_slope_bounds() {
        let arr = Arrangement::new(vec![lin(ZERO, ZERO), lin(c(1.0, 0.0), ZERO)], 1.0);
        assert_eq!(shift_slope(&arr, 0, ZERO).unwrap(), arr);
        assert!(matches!(
            shift_slope(&arr, 0, c(1.0, 0.0)),
            Err(ChartError::EpsTooLarge { .. })
        ));
        let out = shift_slope(&arr, 0, c(0.25, 0.0)).unwrap();
        assert_eq!(out.surfaces[0].germ().a, c(0.25, 0.0));
        let far = c(0.9, 0.0);
        assert_eq!(out.surfaces[0].eval(far), arr.surfaces[0].eval(far));
    }

    #[test]
    fn separation_predicts_points() {
        let model = ComplexLikeModel {
            slopes: vec![ZERO, c(1.0, 0.0), c(2.0, 0.0)],
            radius: 2.0,
        };
        let sep = separate_multiple_point(&model, 0.1, 0.2).unwrap();
        assert_eq!(sep.predicted[0], (0, c(-0.05, 0.0)));
        assert_eq!(sep.predicted[1], (1, c(-0.1, 0.0)));
        assert!(matches!(
            separate_multiple_point(&model, 0.25, 0.2),
            Err(ChartError::EpsTooLarge { .. })
        ));
        let none = separate_multiple_point(&model, 0.0, 0.2).unwrap();
        assert!(none.surface.perturbations.is_empty());
        assert!(none.predicted.iter().all(|(_, z)| *z == ZERO));
    }

    #[test]
    fn orthogonalization_inner_and_outer_zones() {
        let grid = GridSpec::default();
        let s = orthogonalize_with_lambda(c(1.0, 0.0), 0.1, 1.0).unwrap();
        let (inner, outer) = s.perturbations[0].cutoff().transition_radii();
        let zi = Complex64::from_polar(0.5 * inner, 0.3);
        assert_eq!(s.eval(zi), ZERO);
        let zo = Complex64::from_polar(1.5 * outer, 0.3);
        assert_eq!(s.eval(zo), zo);
        assert!(surface_min_margin(&s, &grid) > 0.9);
        let flat = orthogonalize_double_point(ZERO, 1.0, &grid).unwrap();
        assert!(flat.perturbations.is_empty());
    }

    #[test]
    fn straightening_move_is_special_unitary() {
        let beta = c(0.3, -1.2);
        let mv = straighten(beta);
        assert!(mv.is_special_unitary(1e-12));
        let image = mv.apply([c(1.0, 0.0), beta]);
        assert!(image[0].norm() < 1e-15);
    }

    #[test]
    fn already_nice_pair_is_unchanged() {
        let arr = Arrangement::new(vec![lin(ZERO, ZERO)], 1.0);
        let (out, report) = nice_pipeline(&arr, &GridSpec::default()).unwrap();
        assert_eq!(out, arr.surfaces);
        assert_eq!(report.double_points.len(), 1);
    }
}
