//! Grid sweeps: symplectic margins, intersection loci, support locality.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::surface::LocalGraphSurface;
use super::ChartError;
use crate::plane::{self, GraphOverZ};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Samples per normalized unit length of a region (radially and
    /// angularly).
    pub resolution: usize,
    /// Residual `|w1 - w2|` accepted as a root by Newton refinement.
    pub refinement_tolerance: f64,
    /// A margin counts as positive only above this floor.
    pub symplectic_margin_floor: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            resolution: 64,
            refinement_tolerance: 1e-13,
            symplectic_margin_floor: 1e-12,
        }
    }
}

impl GridSpec {
    pub fn with_resolution(resolution: usize) -> Self {
        Self {
            resolution,
            ..Self::default()
        }
    }
}

/// Annulus `inner <= |z - center| <= outer`; `inner = 0` is a disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub center: Complex64,
    pub inner: f64,
    pub outer: f64,
}

impl Region {
    pub fn disc(radius: f64) -> Self {
        Self {
            center: Complex64::new(0.0, 0.0),
            inner: 0.0,
            outer: radius,
        }
    }

    pub fn annulus(inner: f64, outer: f64) -> Self {
        Self {
            center: Complex64::new(0.0, 0.0),
            inner,
            outer,
        }
    }

    /// Radii of the sample rings. Wide annuli are sampled geometrically so
    /// every scale gets the same density.
    fn radii(&self, n: usize) -> Vec<f64> {
        let n = n.max(2);
        if self.inner > 0.0 && self.outer / self.inner > 4.0 {
            let (a, b) = (self.inner.ln(), self.outer.ln());
            (0..=n)
                .map(|i| (a + (b - a) * i as f64 / n as f64).exp())
                .collect()
        } else if self.inner > 0.0 {
            (0..=n)
                .map(|i| self.inner + (self.outer - self.inner) * i as f64 / n as f64)
                .collect()
        } else {
            (1..=n).map(|i| self.outer * i as f64 / n as f64).collect()
        }
    }

    pub fn samples(&self, n: usize) -> Vec<Complex64> {
        let angular = (2 * n).max(8);
        let mut out = Vec::new();
        if self.inner == 0.0 {
            out.push(self.center);
        }
        for r in self.radii(n) {
            for k in 0..angular {
                let theta = std::f64::consts::TAU * (k as f64 + 0.5) / angular as f64;
                out.push(self.center + Complex64::from_polar(r, theta));
            }
        }
        out
    }
}

fn wirtinger_fd(s: &LocalGraphSurface, z: Complex64, h: f64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let dx = (s.eval(z + h) - s.eval(z - h)) / (2.0 * h);
    let dy = (s.eval(z + i * h) - s.eval(z - i * h)) / (2.0 * h);
    ((dx - i * dy) / 2.0, (dx + i * dy) / 2.0)
}

fn fd_step(region: &Region, z: Complex64, resolution: usize) -> f64 {
    let floor = if region.inner > 0.0 {
        region.inner
    } else {
        region.outer / resolution as f64
    };
    (z - region.center).norm().max(floor) / (4.0 * resolution as f64)
}

/// Minimum over the region of `1 + |∂_z w|^2 - |∂_z̄ w|^2`, derivatives by
/// central differences with a step proportional to `|z|`.
pub fn verify_symplectic_grid(s: &LocalGraphSurface, region: &Region, grid: &GridSpec) -> f64 {
    region
        .samples(grid.resolution)
        .par_iter()
        .map(|&z| {
            let (dz, dzb) = wirtinger_fd(s, z, fd_step(region, z, grid.resolution));
            1.0 + dz.norm_sqr() - dzb.norm_sqr()
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// The chart disc plus the transition annulus of every attached cutoff.
pub fn surface_regions(s: &LocalGraphSurface) -> Vec<Region> {
    let mut out = vec![Region::disc(s.r0)];
    for p in &s.perturbations {
        let c = p.cutoff();
        let (inner, outer) = c.transition_radii();
        out.push(Region {
            center: c.center(),
            inner: inner.max(f64::MIN_POSITIVE),
            outer,
        });
    }
    out
}

/// [`verify_symplectic_grid`] minimized over [`surface_regions`].
pub fn surface_min_margin(s: &LocalGraphSurface, grid: &GridSpec) -> f64 {
    surface_regions(s)
        .iter()
        .map(|r| verify_symplectic_grid(s, r, grid))
        .fold(f64::INFINITY, f64::min)
}

/// Number of sample points in the region where `a` and `b` evaluate to
/// different bit patterns.
pub fn bit_identical_outside(
    a: &LocalGraphSurface,
    b: &LocalGraphSurface,
    region: &Region,
    grid: &GridSpec,
) -> usize {
    region
        .samples(grid.resolution)
        .par_iter()
        .filter(|&&z| {
            let (u, v) = (a.eval(z), b.eval(z));
            u.re.to_bits() != v.re.to_bits() || u.im.to_bits() != v.im.to_bits()
        })
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntersectionPoint {
    pub z: Complex64,
    pub w: Complex64,
    /// `|Δa|^2 - |Δb|^2` of the finite-difference tangents.
    pub pair_margin: f64,
    pub transverse: bool,
    pub positive: bool,
}

fn newton(
    s1: &LocalGraphSurface,
    s2: &LocalGraphSurface,
    start: Complex64,
    tol: f64,
) -> Option<Complex64> {
    let mut z = start;
    let mut r = s1.eval(z) - s2.eval(z);
    for _ in 0..200 {
        if r.norm() <= tol {
            return Some(z);
        }
        let (j1, j2) = (s1.jet(z), s2.jet(z));
        let a = j1.dz - j2.dz;
        let b = j1.dzbar - j2.dzbar;
        let det = a.norm_sqr() - b.norm_sqr();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        // solve a δ + b δ̄ = -r
        let target = -r;
        let delta = (a.conj() * target - b * target.conj()) / det;
        let mut step = 1.0;
        loop {
            let trial = z + delta * step;
            let rt = s1.eval(trial) - s2.eval(trial);
            if rt.norm() < r.norm() || step < 1e-6 {
                z = trial;
                r = rt;
                break;
            }
            step *= 0.5;
        }
    }
    (r.norm() <= tol).then_some(z)
}

/// Intersections of two graphs over the region: scan `|w1 - w2|` for local
/// minima on a Cartesian grid, refine by damped Newton, deduplicate, and
/// classify each root from finite-difference tangents.
pub fn locate_intersections(
    s1: &LocalGraphSurface,
    s2: &LocalGraphSurface,
    region: &Region,
    grid: &GridSpec,
) -> Result<Vec<IntersectionPoint>, ChartError> {
    let n = grid.resolution as i64;
    let h = region.outer / n as f64;
    let at = |i: i64, j: i64| region.center + Complex64::new(i as f64 * h, j as f64 * h);
    let inside = |z: Complex64| {
        let d = (z - region.center).norm();
        d <= region.outer * (1.0 + 1e-12) && d >= region.inner
    };
    let gap = |z: Complex64| (s1.eval(z) - s2.eval(z)).norm();

    let candidates: Vec<Complex64> = (-n..=n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut found = Vec::new();
            for j in -n..=n {
                let z = at(i, j);
                if !inside(z) {
                    continue;
                }
                let g = gap(z);
                let mut is_min = true;
                'nb: for di in -1..=1 {
                    for dj in -1..=1 {
                        if (di, dj) == (0, 0) {
                            continue;
                        }
                        let zn = at(i + di, j + dj);
                        if inside(zn) && gap(zn) < g {
                            is_min = false;
                            break 'nb;
                        }
                    }
                }
                if is_min {
                    let j1 = s1.jet(z);
                    let j2 = s2.jet(z);
                    let lip = (j1.dz - j2.dz).norm() + (j1.dzbar - j2.dzbar).norm();
                    if g <= 2.0 * lip * h + grid.refinement_tolerance * region.outer {
                        found.push(z);
                    }
                }
            }
            found
        })
        .collect();

    let tol = grid.refinement_tolerance * region.outer.max(f64::MIN_POSITIVE);
    let mut roots: Vec<Complex64> = Vec::new();
    for c in candidates {
        let z = newton(s1, s2, c, tol).ok_or(ChartError::NonConvergent {
            re: c.re,
            im: c.im,
        })?;
        if !inside(z) {
            continue;
        }
        let merge = (h * 1e-3).max(1e3 * tol);
        if roots.iter().all(|r| (r - z).norm() > merge) {
            roots.push(z);
        }
    }
    roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())));

    Ok(roots
        .into_iter()
        .map(|z| {
            let step = (z - region.center).norm().max(h) * 1e-4;
            let (a1, b1) = wirtinger_fd(s1, z, step);
            let (a2, b2) = wirtinger_fd(s2, z, step);
            let (g1, g2) = (GraphOverZ::new(a1, b1), GraphOverZ::new(a2, b2));
            let m = plane::pair_margin(&g1, &g2);
            IntersectionPoint {
                z,
                w: s1.eval(z),
                pair_margin: m,
                transverse: m != 0.0,
                positive: plane::pair_positive(&g1, &g2),
            }
        })
        .collect())
}
