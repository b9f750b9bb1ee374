//! Surfaces given as graphs `w = f(z)` over a Darboux chart.
//!
//! A [`LocalGraphSurface`] is a linear part `a z + b z̄` plus a residual `R`,
//! together with the cutoff-modulated modifications the perturbation stages
//! attach to it. Evaluation returns the value and both Wirtinger derivatives
//! in closed form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cutoff::CutoffProfile;
use super::ChartError;
use crate::plane::{self, GraphOverZ};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Value and Wirtinger derivatives `∂_z f`, `∂_z̄ f` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: Complex64,
    pub dz: Complex64,
    pub dzbar: Complex64,
}

impl Jet {
    fn constant(value: Complex64) -> Self {
        Self {
            value,
            dz: ZERO,
            dzbar: ZERO,
        }
    }

    fn mul(self, other: Self) -> Self {
        Self {
            value: self.value * other.value,
            dz: self.dz * other.value + self.value * other.dz,
            dzbar: self.dzbar * other.value + self.value * other.dzbar,
        }
    }

    fn add(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            dz: self.dz + other.dz,
            dzbar: self.dzbar + other.dzbar,
        }
    }

    /// `1 + |∂_z w|^2 - |∂_z̄ w|^2`, positive exactly when the graph is
    /// symplectic at this point.
    pub fn symplectic_margin(&self) -> f64 {
        1.0 + self.dz.norm_sqr() - self.dzbar.norm_sqr()
    }

    /// Tangent plane as a linear graph.
    pub fn tangent(&self) -> GraphOverZ<f64> {
        GraphOverZ::new(self.dz, self.dzbar)
    }
}

/// One monomial `c z^p z̄^q` of a polynomial residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub p: u32,
    pub q: u32,
    pub c: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Residual {
    #[default]
    None,
    Poly { coeffs: Vec<PolyTerm> },
}

impl Residual {
    pub fn is_none(&self) -> bool {
        match self {
            Residual::None => true,
            Residual::Poly { coeffs } => coeffs.iter().all(|t| t.c == ZERO),
        }
    }

    pub fn jet(&self, z: Complex64) -> Jet {
        let Residual::Poly { coeffs } = self else {
            return Jet::constant(ZERO);
        };
        let zb = z.conj();
        let mut out = Jet::constant(ZERO);
        for t in coeffs {
            let zp = z.powu(t.p);
            let zq = zb.powu(t.q);
            out.value += t.c * zp * zq;
            if t.p > 0 {
                out.dz += t.c * f64::from(t.p) * z.powu(t.p - 1) * zq;
            }
            if t.q > 0 {
                out.dzbar += t.c * f64::from(t.q) * zp * zb.powu(t.q - 1);
            }
        }
        out
    }

    fn validate(&self) -> Result<(), ChartError> {
        if let Residual::Poly { coeffs } = self {
            if let Some(t) = coeffs.iter().find(|t| t.p + t.q < 2) {
                return Err(ChartError::InvalidResidual(format!(
                    "monomial z^{} z̄^{} has degree below 2",
                    t.p, t.q
                )));
            }
        }
        Ok(())
    }
}

/// What a cutoff is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "arg", rename_all = "lowercase")]
pub enum CutoffArg {
    /// `t = |z - center| / scale`.
    Radial {
        scale: f64,
        #[serde(default)]
        center: Complex64,
    },
    /// `t = λ log|z - center| + μ`.
    Log {
        lambda: f64,
        mu: f64,
        #[serde(default)]
        center: Complex64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    pub profile: CutoffProfile,
    #[serde(flatten)]
    pub arg: CutoffArg,
}

impl Cutoff {
    pub fn radial(profile: CutoffProfile, scale: f64) -> Self {
        Self {
            profile,
            arg: CutoffArg::Radial {
                scale,
                center: ZERO,
            },
        }
    }

    pub fn log(profile: CutoffProfile, lambda: f64, mu: f64) -> Self {
        Self {
            profile,
            arg: CutoffArg::Log {
                lambda,
                mu,
                center: ZERO,
            },
        }
    }

    /// Argument `t` and its `∂_z` derivative.
    fn argument(&self, z: Complex64) -> (f64, Complex64) {
        match self.arg {
            CutoffArg::Radial { scale, center } => {
                let u = z - center;
                let r = u.norm();
                if r == 0.0 {
                    (0.0, ZERO)
                } else {
                    (r / scale, u.conj() / (2.0 * r * scale))
                }
            }
            CutoffArg::Log { lambda, mu, center } => {
                let u = z - center;
                if u == ZERO {
                    (f64::NEG_INFINITY, ZERO)
                } else {
                    (lambda * u.norm().ln() + mu, lambda / (2.0 * u))
                }
            }
        }
    }

    pub fn value(&self, z: Complex64) -> f64 {
        self.profile.value(self.argument(z).0)
    }

    pub fn jet(&self, z: Complex64) -> Jet {
        let (t, dt) = self.argument(z);
        let slope = if t.is_finite() {
            self.profile.derivative(t)
        } else {
            0.0
        };
        let dz = dt * slope;
        Jet {
            value: Complex64::new(self.profile.value(t), 0.0),
            dz,
            // real-valued function
            dzbar: dz.conj(),
        }
    }

    /// Radii `(inner, outer)` of the annulus around the center where the
    /// cutoff is not locally constant.
    pub fn transition_radii(&self) -> (f64, f64) {
        match self.arg {
            CutoffArg::Radial { scale, .. } => (scale, 2.0 * scale),
            CutoffArg::Log { lambda, mu, .. } => {
                (((1.0 - mu) / lambda).exp(), ((2.0 - mu) / lambda).exp())
            }
        }
    }

    pub fn center(&self) -> Complex64 {
        match self.arg {
            CutoffArg::Radial { center, .. } | CutoffArg::Log { center, .. } => center,
        }
    }
}

/// A modification attached by a perturbation stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Perturbation {
    /// Multiplies the residual by the cutoff.
    ResidualCutoff { cutoff: Cutoff },
    /// Multiplies `b z̄` by the cutoff.
    AntiholomorphicCutoff { cutoff: Cutoff },
    /// Multiplies `a z` by the cutoff.
    LinearCutoff { cutoff: Cutoff },
    /// Adds `eps * cutoff * z`.
    SlopeShift {
        eps: Complex64,
        cutoff: Cutoff,
    },
    /// Adds `eps * cutoff`.
    ConstantShift {
        eps: Complex64,
        cutoff: Cutoff,
    },
}

impl Perturbation {
    pub fn cutoff(&self) -> &Cutoff {
        match self {
            Perturbation::ResidualCutoff { cutoff }
            | Perturbation::AntiholomorphicCutoff { cutoff }
            | Perturbation::LinearCutoff { cutoff }
            | Perturbation::SlopeShift { cutoff, .. }
            | Perturbation::ConstantShift { cutoff, .. } => cutoff,
        }
    }
}

/// `w = a z + b z̄ + R(z)` over the disc of radius `r0`, with `|R| <= C|z|^2`
/// and `|∂R| <= C|z|`, plus any attached perturbations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalGraphSurface {
    pub a: Complex64,
    pub b: Complex64,
    #[serde(default)]
    pub residual: Residual,
    #[serde(rename = "C", default)]
    pub residual_bound: f64,
    pub r0: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub perturbations: Vec<Perturbation>,
}

fn factor_jet<'a>(cutoffs: impl Iterator<Item = &'a Cutoff>, z: Complex64) -> Option<Jet> {
    cutoffs.fold(None, |acc: Option<Jet>, c| {
        let j = c.jet(z);
        Some(match acc {
            None => j,
            Some(prev) => prev.mul(j),
        })
    })
}

impl LocalGraphSurface {
    pub fn linear(a: Complex64, b: Complex64, r0: f64) -> Self {
        Self {
            a,
            b,
            residual: Residual::None,
            residual_bound: 0.0,
            r0,
            perturbations: Vec::new(),
        }
    }

    pub fn with_residual(mut self, residual: Residual, bound: f64) -> Self {
        self.residual = residual;
        self.residual_bound = bound;
        self
    }

    pub fn validate(&self) -> Result<(), ChartError> {
        self.residual.validate()?;
        if !(self.r0 > 0.0) || !self.r0.is_finite() {
            return Err(ChartError::InvalidArrangement(format!(
                "chart radius {} is not positive",
                self.r0
            )));
        }
        if self.residual_bound < 0.0 || !self.residual_bound.is_finite() {
            return Err(ChartError::InvalidResidual(format!(
                "residual bound {} is not a finite non-negative number",
                self.residual_bound
            )));
        }
        Ok(())
    }

    /// Tangent plane at the origin before any perturbation.
    pub fn linear_part(&self) -> GraphOverZ<f64> {
        GraphOverZ::new(self.a, self.b)
    }

    /// Linear part `(∂_z w, ∂_z̄ w)` of the perturbed surface in the limit
    /// `z -> 0`, read off from the cutoff values there.
    pub fn germ(&self) -> GraphOverZ<f64> {
        let origin = ZERO;
        let mut a = self.a;
        let mut b = self.b;
        for p in &self.perturbations {
            match p {
                Perturbation::LinearCutoff { cutoff } => a *= cutoff.value(origin),
                Perturbation::AntiholomorphicCutoff { cutoff } => b *= cutoff.value(origin),
                _ => {}
            }
        }
        for p in &self.perturbations {
            if let Perturbation::SlopeShift { eps, cutoff } = p {
                a += eps * cutoff.value(origin);
            }
        }
        GraphOverZ::new(a, b)
    }

    /// Radius of the disc about the origin on which the surface is exactly
    /// `w = a' z + b' z̄` with `(a', b')` its germ.
    pub fn linear_radius(&self) -> f64 {
        let mut r = self.r0;
        let residual_live = !self.residual.is_none();
        let mut residual_cut = false;
        for p in &self.perturbations {
            let c = p.cutoff();
            let (inner, _) = c.transition_radii();
            let reach = (inner - c.center().norm()).max(0.0);
            match p {
                Perturbation::ResidualCutoff { cutoff } => {
                    if cutoff.profile.kind == super::cutoff::CutoffKind::Rise {
                        residual_cut = true;
                        if residual_live {
                            r = r.min(reach);
                        }
                    }
                }
                Perturbation::ConstantShift { cutoff, .. } => {
                    if cutoff.value(ZERO) != 0.0 {
                        return 0.0;
                    }
                    r = r.min(reach);
                }
                _ => r = r.min(reach),
            }
        }
        if residual_live && !residual_cut {
            return 0.0;
        }
        r
    }

    fn cutoffs_of<'a>(
        &'a self,
        pick: fn(&Perturbation) -> bool,
    ) -> impl Iterator<Item = &'a Cutoff> + 'a {
        self.perturbations
            .iter()
            .filter(move |p| pick(p))
            .map(Perturbation::cutoff)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut w = self.a * z;
        for c in self.cutoffs_of(|p| matches!(p, Perturbation::LinearCutoff { .. })) {
            w *= c.value(z);
        }
        let mut anti = self.b * z.conj();
        for c in self.cutoffs_of(|p| matches!(p, Perturbation::AntiholomorphicCutoff { .. })) {
            anti *= c.value(z);
        }
        w += anti;
        if !matches!(self.residual, Residual::None) {
            let mut factor = None;
            for c in self.cutoffs_of(|p| matches!(p, Perturbation::ResidualCutoff { .. })) {
                factor = Some(factor.unwrap_or(1.0) * c.value(z));
            }
            match factor {
                Some(0.0) => {}
                Some(f) => w += self.residual.jet(z).value * f,
                None => w += self.residual.jet(z).value,
            }
        }
        for p in &self.perturbations {
            match p {
                Perturbation::SlopeShift { eps, cutoff } => {
                    let rho = cutoff.value(z);
                    if rho != 0.0 {
                        w += eps * rho * z;
                    }
                }
                Perturbation::ConstantShift { eps, cutoff } => {
                    let rho = cutoff.value(z);
                    if rho != 0.0 {
                        w += eps * rho;
                    }
                }
                _ => {}
            }
        }
        w
    }

    /// Value and closed-form Wirtinger derivatives.
    pub fn jet(&self, z: Complex64) -> Jet {
        let id = Jet {
            value: z,
            dz: Complex64::new(1.0, 0.0),
            dzbar: ZERO,
        };
        let conj = Jet {
            value: z.conj(),
            dz: ZERO,
            dzbar: Complex64::new(1.0, 0.0),
        };
        let scale = |j: Jet, c: Complex64| Jet {
            value: j.value * c,
            dz: j.dz * c,
            dzbar: j.dzbar * c,
        };
        let with = |term: Jet, f: Option<Jet>| match f {
            Some(f) => term.mul(f),
            None => term,
        };
        let lin = with(
            scale(id, self.a),
            factor_jet(
                self.cutoffs_of(|p| matches!(p, Perturbation::LinearCutoff { .. })),
                z,
            ),
        );
        let anti = with(
            scale(conj, self.b),
            factor_jet(
                self.cutoffs_of(|p| matches!(p, Perturbation::AntiholomorphicCutoff { .. })),
                z,
            ),
        );
        let res = with(
            self.residual.jet(z),
            factor_jet(
                self.cutoffs_of(|p| matches!(p, Perturbation::ResidualCutoff { .. })),
                z,
            ),
        );
        let mut out = lin.add(anti).add(res);
        for p in &self.perturbations {
            match p {
                Perturbation::SlopeShift { eps, cutoff } => {
                    out = out.add(scale(id.mul(cutoff.jet(z)), *eps));
                }
                Perturbation::ConstantShift { eps, cutoff } => {
                    out = out.add(scale(cutoff.jet(z), *eps));
                }
                _ => {}
            }
        }
        out
    }

    /// Largest radius at which any attached cutoff still varies, i.e. beyond
    /// which the surface agrees with its unperturbed form. Only meaningful
    /// for cutoffs centered at the origin.
    pub fn support_radius(&self) -> f64 {
        self.perturbations
            .iter()
            .map(|p| {
                let c = p.cutoff();
                c.center().norm() + c.transition_radii().1
            })
            .fold(0.0, f64::max)
    }

    /// Checks the certified residual bounds on a polar grid; returns the worst
    /// ratio `|R| / (C|z|^2)`, `|∂R| / (C|z|)` seen. A value above 1 refutes
    /// the certificate.
    pub fn audit_residual(&self, radial: usize, angular: usize) -> f64 {
        if self.residual.is_none() {
            return 0.0;
        }
        let c = self.residual_bound;
        let mut worst: f64 = 0.0;
        for i in 1..=radial {
            let r = self.r0 * i as f64 / radial as f64;
            for k in 0..angular {
                let theta = std::f64::consts::TAU * k as f64 / angular as f64;
                let z = Complex64::from_polar(r, theta);
                let j = self.residual.jet(z);
                let ratios = [
                    j.value.norm() / (c * r * r),
                    j.dz.norm() / (c * r),
                    j.dzbar.norm() / (c * r),
                ];
                for q in ratios {
                    worst = worst.max(if q.is_nan() { f64::INFINITY } else { q });
                }
            }
        }
        worst
    }
}

/// Surfaces `S_1..S_l` over a common chart, all through the origin, with the
/// reference surface `S_0 = {z = 0}` implicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Arrangement {
    pub surfaces: Vec<LocalGraphSurface>,
    pub r0: f64,
}

impl Arrangement {
    pub fn new(surfaces: Vec<LocalGraphSurface>, r0: f64) -> Self {
        Self { surfaces, r0 }
    }

    /// Checks the tangent data at the origin: every surface symplectic and
    /// positive against `S_0`, every pair transverse and positive.
    pub fn validate(&self) -> Result<(), ChartError> {
        if self.surfaces.is_empty() {
            return Err(ChartError::InvalidArrangement("no surfaces".into()));
        }
        if !(self.r0 > 0.0) {
            return Err(ChartError::InvalidArrangement(format!(
                "chart radius {} is not positive",
                self.r0
            )));
        }
        for (j, s) in self.surfaces.iter().enumerate() {
            s.validate()?;
            let margin = 1.0 + s.germ().holomorphic_excess();
            if !(margin > 0.0) {
                return Err(ChartError::InvalidArrangement(format!(
                    "surface {j}: 1 + |a|^2 - |b|^2 = {margin} is not positive"
                )));
            }
        }
        for j in 0..self.surfaces.len() {
            for k in j + 1..self.surfaces.len() {
                let m = plane::pair_margin(
                    &self.surfaces[j].germ(),
                    &self.surfaces[k].germ(),
                );
                if !(m > 0.0) {
                    return Err(ChartError::InvalidArrangement(format!(
                        "surfaces {j}, {k}: |a_j - a_k|^2 - |b_j - b_k|^2 = {m} is not positive"
                    )));
                }
            }
        }
        Ok(())
    }

}
