//! Smoothing a node `zw = 0` into `zw = ε ρ(r/λ0)`, and the collapsing map
//! from a neighbourhood of the node onto the two branches.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cutoff::CutoffProfile;
use super::verify::GridSpec;
use super::ChartError;

const MAX_HALVINGS: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeResolution {
    pub epsilon: Complex64,
    pub lambda0: f64,
}

/// `f_ε = zw - ε ρ(r/λ0)` with a fall profile and its Wirtinger derivatives
/// `(∂_z, ∂_z̄, ∂_w, ∂_w̄)`.
fn smoothing(eps: Complex64, lambda0: f64, z: Complex64, w: Complex64) -> (Complex64, [Complex64; 4]) {
    let rho = CutoffProfile::FALL;
    let r = (z.norm_sqr() + w.norm_sqr()).sqrt();
    let t = r / lambda0;
    let value = z * w - eps * rho.value(t);
    if r == 0.0 {
        return (value, [w, Complex64::new(0.0, 0.0), z, Complex64::new(0.0, 0.0)]);
    }
    let k = eps * rho.derivative(t) / (2.0 * r * lambda0);
    (
        value,
        [w - k * z.conj(), -k * z, z - k * w.conj(), -k * w],
    )
}

/// Smallest singular value of the real 2x4 differential and the margin
/// `|∂f| - |∂̄f|` at a point.
fn differential_checks(d: [Complex64; 4]) -> (f64, f64) {
    let [a, b, c, e] = d;
    let i = Complex64::i();
    // columns ∂/∂x1, ∂/∂y1, ∂/∂x2, ∂/∂y2 of the complex-valued f
    let cols = [a + b, i * (a - b), c + e, i * (c - e)];
    let (mut p, mut q, mut s) = (0.0, 0.0, 0.0);
    for col in cols {
        p += col.re * col.re;
        q += col.re * col.im;
        s += col.im * col.im;
    }
    // eigenvalues of [[p, q], [q, s]]
    let mean = 0.5 * (p + s);
    let disc = (0.25 * (p - s) * (p - s) + q * q).sqrt();
    let sigma_min = (mean - disc).max(0.0).sqrt();
    let holo = (a.norm_sqr() + c.norm_sqr()).sqrt();
    let anti = (b.norm_sqr() + e.norm_sqr()).sqrt();
    (sigma_min, holo - anti)
}

/// Solves `w = ε ρ(r(z, w)/λ0)/z` for the branch near `{w = 0}`.
fn branch_point(eps: Complex64, lambda0: f64, z: Complex64) -> Complex64 {
    let rho = CutoffProfile::FALL;
    let mut w = Complex64::new(0.0, 0.0);
    for _ in 0..200 {
        let r = (z.norm_sqr() + w.norm_sqr()).sqrt();
        let next = eps * rho.value(r / lambda0) / z;
        if (next - w).norm() <= 1e-17 * (1.0 + w.norm()) {
            return next;
        }
        w = next;
    }
    w
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeReport {
    pub epsilon_requested: Complex64,
    pub epsilon: Complex64,
    pub lambda0: f64,
    pub halvings: u32,
    /// Min over the zero set in the transition shell of the smallest
    /// singular value of `df_ε`.
    pub min_singular_value: f64,
    /// Min over the same set of `|∂f_ε| - |∂̄f_ε|`.
    pub min_margin: f64,
    /// Worst `|f_ε|` on sampled points of `{zw = ε}` inside `B(λ0)`.
    pub inner_residual: f64,
    /// Worst `|f_ε|` on sampled points of `{zw = 0}` outside `B(2λ0)`.
    pub outer_residual: f64,
    /// Sup over `B(2λ0)` of `|f_ε - zw|` plus the norm of its differential.
    pub c1_distance: f64,
    pub euler_before: i64,
    pub euler_after: i64,
    /// The two branches join through `{zw = ε}` inside `B(λ0)`.
    pub connected: bool,
}

struct ShellScan {
    sigma: f64,
    margin: f64,
}

fn scan_shell(eps: Complex64, lambda0: f64, n: usize) -> ShellScan {
    let angular = (2 * n).max(8);
    let (lo, hi) = (0.9 * lambda0, 2.05 * lambda0);
    (0..=n)
        .into_par_iter()
        .map(|i| {
            let radius = lo + (hi - lo) * i as f64 / n as f64;
            let mut sigma = f64::INFINITY;
            let mut margin = f64::INFINITY;
            for k in 0..angular {
                let u = Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / angular as f64);
                let v = branch_point(eps, lambda0, u);
                // the branch near {w = 0} and its mirror near {z = 0}
                for (z, w) in [(u, v), (v, u)] {
                    let (_, d) = smoothing(eps, lambda0, z, w);
                    let (s, m) = differential_checks(d);
                    sigma = sigma.min(s);
                    margin = margin.min(m);
                }
            }
            ShellScan { sigma, margin }
        })
        .reduce(
            || ShellScan {
                sigma: f64::INFINITY,
                margin: f64::INFINITY,
            },
            |a, b| ShellScan {
                sigma: a.sigma.min(b.sigma),
                margin: a.margin.min(b.margin),
            },
        )
}

/// C¹ distance of `f_ε` to `zw` over `B(2λ0)`, with the differential taken
/// by central differences of the evaluated difference.
fn c1_distance(eps: Complex64, lambda0: f64, n: usize) -> f64 {
    let diff = |z: Complex64, w: Complex64| smoothing(eps, lambda0, z, w).0 - z * w;
    let h = lambda0 * 1e-5;
    let i = Complex64::i();
    (0..=n)
        .into_par_iter()
        .map(|k| {
            let r = 2.0 * lambda0 * k as f64 / n as f64;
            let mut worst: f64 = 0.0;
            for j in 0..8 {
                let phi = std::f64::consts::FRAC_PI_2 * j as f64 / 7.0;
                let z = Complex64::from_polar(r * phi.cos(), 0.3 * j as f64);
                let w = Complex64::from_polar(r * phi.sin(), -0.7 * j as f64);
                let grad = [
                    (diff(z + h, w) - diff(z - h, w)) / (2.0 * h),
                    (diff(z + i * h, w) - diff(z - i * h, w)) / (2.0 * h),
                    (diff(z, w + h) - diff(z, w - h)) / (2.0 * h),
                    (diff(z, w + i * h) - diff(z, w - i * h)) / (2.0 * h),
                ];
                let dnorm = grad.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
                worst = worst.max(diff(z, w).norm() + dnorm);
            }
            worst
        })
        .reduce(|| 0.0, f64::max)
}

/// Resolves the node with the requested `ε`, halving it until the zero set in
/// the shell `λ0 <= r <= 2λ0` is smooth and symplectic on the grid.
pub fn resolve_node(res: &NodeResolution, grid: &GridSpec) -> Result<NodeReport, ChartError> {
    if !(res.lambda0 > 0.0) {
        return Err(ChartError::ChartTooSmall(format!("λ0 = {}", res.lambda0)));
    }
    let n = grid.resolution;
    let mut eps = res.epsilon;
    for halvings in 0..=MAX_HALVINGS {
        // {zw = ε} must close up inside B(λ0) for the annulus picture
        let fits = 2.0 * eps.norm() < res.lambda0 * res.lambda0;
        let scan = scan_shell(eps, res.lambda0, n);
        if fits
            && scan.sigma > grid.symplectic_margin_floor
            && scan.margin > grid.symplectic_margin_floor
        {
            let angular = (2 * n).max(8);
            let mut inner_residual: f64 = 0.0;
            let mut outer_residual: f64 = 0.0;
            let root = eps.norm().sqrt();
            for i in 0..=n {
                for k in 0..angular {
                    let theta = std::f64::consts::TAU * k as f64 / angular as f64;
                    // |z| from sqrt|ε| out to where {zw = ε} leaves B(λ0)
                    let rad = root + (0.999 * res.lambda0 - root) * i as f64 / n as f64;
                    let z = Complex64::from_polar(rad, theta);
                    let w = eps / z;
                    if z.norm_sqr() + w.norm_sqr() < res.lambda0 * res.lambda0 {
                        let f = smoothing(eps, res.lambda0, z, w).0;
                        inner_residual = inner_residual.max(f.norm());
                    }
                    let far = Complex64::from_polar(res.lambda0 * (2.0 + (i + 1) as f64 / n as f64), theta);
                    for (z, w) in [(far, Complex64::new(0.0, 0.0)), (Complex64::new(0.0, 0.0), far)] {
                        outer_residual = outer_residual.max(smoothing(eps, res.lambda0, z, w).0.norm());
                    }
                }
            }
            return Ok(NodeReport {
                epsilon_requested: res.epsilon,
                epsilon: eps,
                lambda0: res.lambda0,
                halvings,
                min_singular_value: scan.sigma,
                min_margin: scan.margin,
                inner_residual,
                outer_residual,
                c1_distance: c1_distance(eps, res.lambda0, n),
                euler_before: 2,
                // two discs joined at one node become one annulus
                euler_after: 0,
                connected: fits,
            });
        }
        eps *= 0.5;
    }
    Err(ChartError::NoAdmissibleEps {
        attempts: MAX_HALVINGS,
    })
}

/// [`c1_distance`] for a given `ε`, exposed for scaling checks.
pub fn smoothing_c1_distance(eps: Complex64, lambda0: f64, grid: &GridSpec) -> f64 {
    c1_distance(eps, lambda0, grid.resolution)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetractionChart {
    pub eta: f64,
}

/// The collapsing map near a node of `{w = 0} ∪ {z = 0}`:
///
/// - `|w| <= |z| <= 2η`: `((|z| - sqrt(|z||w|)) / (2η - sqrt(2η|w|)) z, 0)`
/// - `|z| <= |w| <= 2η`: `(0, (|w| - sqrt(|z||w|)) / (2η - sqrt(2η|z|)) w)`
/// - `|z| >= 2η`: `(z, 0)`; `|w| >= 2η`: `(0, w)`
///
/// Defined where `|zw| <= η^2`.
pub fn node_retraction(
    chart: &RetractionChart,
    z: Complex64,
    w: Complex64,
) -> Result<[Complex64; 2], ChartError> {
    let eta = chart.eta;
    let (a, b) = (z.norm(), w.norm());
    let zero = Complex64::new(0.0, 0.0);
    if !(eta > 0.0) || a * b > eta * eta || !(a.is_finite() && b.is_finite()) {
        return Err(ChartError::OutOfDomain { z_abs: a, w_abs: b });
    }
    let two_eta = 2.0 * eta;
    if a >= two_eta {
        return Ok([z, zero]);
    }
    if b >= two_eta {
        return Ok([zero, w]);
    }
    let g = (a * b).sqrt();
    if b <= a {
        let s = (a - g) / (two_eta - (two_eta * b).sqrt());
        Ok([z * s, zero])
    } else {
        let s = (b - g) / (two_eta - (two_eta * a).sqrt());
        Ok([zero, w * s])
    }
}

/// Largest jump of the retraction across `|z| = |w|`, `|z| = 2η` and
/// `|w| = 2η`, comparing the formulas on both sides at mesh points spaced
/// `step` apart.
pub fn retraction_seam_jump(chart: &RetractionChart, step: f64) -> f64 {
    let eta = chart.eta;
    let two_eta = 2.0 * eta;
    let zero = Complex64::new(0.0, 0.0);
    let first = |z: Complex64, w: Complex64| {
        let (a, b) = (z.norm(), w.norm());
        let s = (a - (a * b).sqrt()) / (two_eta - (two_eta * b).sqrt());
        [z * s, zero]
    };
    let second = |z: Complex64, w: Complex64| {
        let (a, b) = (z.norm(), w.norm());
        let s = (b - (a * b).sqrt()) / (two_eta - (two_eta * a).sqrt());
        [zero, w * s]
    };
    let dist = |p: [Complex64; 2], q: [Complex64; 2]| ((p[0] - q[0]).norm_sqr() + (p[1] - q[1]).norm_sqr()).sqrt();
    let n = (eta / step).ceil() as usize;
    let mut worst: f64 = 0.0;
    for i in 0..=n {
        let t = eta * i as f64 / n as f64;
        for k in 0..16 {
            let (th, ph) = (0.4 * k as f64, -1.1 * k as f64);
            // diagonal |z| = |w| = t (inside the domain since t <= η)
            let (z, w) = (Complex64::from_polar(t, th), Complex64::from_polar(t, ph));
            worst = worst.max(dist(first(z, w), second(z, w)));
            // |z| = 2η with |w| <= η/2 keeps |zw| <= η^2
            let (z, w) = (Complex64::from_polar(two_eta, th), Complex64::from_polar(0.5 * t, ph));
            worst = worst.max(dist(first(z, w), [z, zero]));
            worst = worst.max(dist(second(w, z), [zero, z]));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_collapses_to_node() {
        let chart = RetractionChart { eta: 0.5 };
        let p = node_retraction(&chart, c(0.3, 0.1), c(0.1, 0.3)).unwrap();
        assert!(p[0].norm() < 1e-15 && p[1].norm() < 1e-15);
    }

    #[test]
    fn outer_boundary_matches_projection() {
        let chart = RetractionChart { eta: 0.5 };
        let z = c(1.0, 0.0);
        assert_eq!(node_retraction(&chart, z, c(0.0, 0.0)).unwrap(), [z, c(0.0, 0.0)]);
        let inside = c(0.999_999_9, 0.0);
        let p = node_retraction(&chart, inside, c(0.0, 0.0)).unwrap();
        assert!((p[0] - inside).norm() < 1e-6);
    }

    #[test]
    fn image_lies_on_the_axes() {
        let chart = RetractionChart { eta: 0.25 };
        for k in 0..50 {
            let z = Complex64::from_polar(0.01 * k as f64, k as f64);
            let w = Complex64::from_polar(0.012 * (50 - k) as f64, -(k as f64));
            if let Ok(p) = node_retraction(&chart, z, w) {
                assert!(p[0] == c(0.0, 0.0) || p[1] == c(0.0, 0.0));
            }
        }
        assert!(matches!(
            node_retraction(&chart, c(1.0, 0.0), c(1.0, 0.0)),
            Err(ChartError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn seams_are_continuous() {
        assert!(retraction_seam_jump(&RetractionChart { eta: 0.5 }, 1e-3) < 1e-6);
    }

    #[test]
    fn analytic_differential_matches_differences() {
        let (eps, l0) = (c(1e-3, 2e-4), 0.2);
        let (z, w) = (c(0.25, 0.05), c(0.01, -0.02));
        let (_, d) = smoothing(eps, l0, z, w);
        let h = 1e-7;
        let f = |z, w| smoothing(eps, l0, z, w).0;
        let i = Complex64::i();
        let dx = (f(z + h, w) - f(z - h, w)) / (2.0 * h);
        let dy = (f(z + i * h, w) - f(z - i * h, w)) / (2.0 * h);
        assert!(((dx - i * dy) / 2.0 - d[0]).norm() < 1e-7);
        assert!(((dx + i * dy) / 2.0 - d[1]).norm() < 1e-7);
    }

    #[test]
    fn small_node_resolution_passes() {
        let grid = GridSpec::with_resolution(32);
        let rep = resolve_node(&NodeResolution { epsilon: c(1e-3, 0.0), lambda0: 0.25 }, &grid).unwrap();
        assert!(rep.min_singular_value > 0.0 && rep.min_margin > 0.0);
        assert!(rep.inner_residual < 1e-15);
        assert_eq!(rep.outer_residual, 0.0);
        assert_eq!(rep.euler_after, 0);
    }
}
