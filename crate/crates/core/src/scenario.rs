//! JSON scenarios: parse, dispatch to the owning module, report.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::chart::{Arrangement, GridSpec, NodeResolution};
use crate::divisor::{
    self, IntersectionLattice, MultipleCurveQuery, SeifertInput, SymplecticDivisor,
};
use crate::kahler::{self, ChartGrid, MetricChart};
use crate::plane::{
    classify_z_graph, convert_graph, exact, oracle_classify, pair_margin, triple_positive, Exact,
    GraphOverZ, PlaneBasis, Scalar,
};
use crate::report::{Check, Report};
use crate::suite::{self, SuiteName, SuiteOptions};

pub const SCHEMA: &str = "sympsurf/1";

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("schema error: {0}")]
    Schema(String),
}

impl ScenarioError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Planes,
    Perturb,
    Kahler,
    Divisor,
    Seifert,
    Suite,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Planes => "planes",
            Kind::Perturb => "perturb",
            Kind::Kahler => "kahler",
            Kind::Divisor => "divisor",
            Kind::Seifert => "seifert",
            Kind::Suite => "suite",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridOverrides {
    pub resolution: Option<usize>,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: String,
    pub kind: Kind,
    #[serde(default)]
    pub payload: Value,
    #[serde(default)]
    pub grid: GridOverrides,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Free-form provenance of the fixture; not interpreted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Command-line overrides; `None` defers to the scenario, then to defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub resolution: Option<usize>,
    pub tolerance: Option<f64>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let s: Scenario =
            serde_json::from_str(text).map_err(|e| ScenarioError::Schema(e.to_string()))?;
        if s.schema != SCHEMA {
            return Err(ScenarioError::Schema(format!(
                "schema {:?}, expected {SCHEMA:?}",
                s.schema
            )));
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        Self::parse(&text)
    }

    fn suite_options(&self, opts: &RunOptions) -> SuiteOptions {
        let d = SuiteOptions::default();
        SuiteOptions {
            seed: opts.seed.or(self.seed).unwrap_or(d.seed),
            resolution: opts.resolution.or(self.grid.resolution).unwrap_or(d.resolution),
            tolerance: opts.tolerance.or(self.grid.tolerance).unwrap_or(d.tolerance),
        }
    }
}

fn payload<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T, ScenarioError> {
    serde_json::from_value(v.clone()).map_err(|e| ScenarioError::Schema(format!("payload: {e}")))
}

/// A rational given as a JSON integer, a float (taken at its exact binary
/// value) or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalValue {
    Int(i64),
    Float(f64),
    Text(String),
}

impl RationalValue {
    pub fn to_exact(&self) -> Result<Exact, ScenarioError> {
        match self {
            RationalValue::Int(n) => Ok(BigRational::from_integer(BigInt::from(*n))),
            RationalValue::Float(x) if x.is_finite() => Ok(exact(*x)),
            RationalValue::Float(x) => Err(ScenarioError::Schema(format!("non-finite value {x}"))),
            RationalValue::Text(s) => {
                let bad = || ScenarioError::Schema(format!("bad rational {s:?}"));
                let (p, q) = s.split_once('/').unwrap_or((s.as_str(), "1"));
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                if q == BigInt::from(0) {
                    return Err(bad());
                }
                Ok(BigRational::new(p, q))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneSpec {
    pub a: [RationalValue; 2],
    pub b: [RationalValue; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaneMode {
    #[default]
    Exact,
    Float,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanesPayload {
    #[serde(default)]
    pub mode: PlaneMode,
    /// Graphs `w = a z + b z̄` meeting the reference `{z = 0}`.
    pub graphs: Vec<PlaneSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "pipeline", rename_all = "lowercase", deny_unknown_fields)]
pub enum PerturbPayload {
    Thm27 { arrangement: Arrangement },
    Nice { arrangement: Arrangement },
    Node { node: NodeResolution },
}

fn default_fd_step() -> f64 {
    1e-3
}

fn default_domega_bound() -> f64 {
    1e-6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KahlerPayload {
    pub chart: MetricChart,
    pub grid: ChartGrid,
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    #[serde(default = "default_domega_bound")]
    pub domega_bound: f64,
    /// Fiber radii for the taming scan; the zero section is always included.
    #[serde(default)]
    pub taming_radii: Vec<f64>,
    /// Slopes `(a_j, a_k)` of a transition move to check for compatibility.
    #[serde(default)]
    pub transition: Option<[Complex64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorFile {
    pub coeffs: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorExpect {
    pub self_intersection: Option<i64>,
    pub genus: Option<u64>,
    pub disjoint_from: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorPayload {
    pub lattice: IntersectionLattice,
    pub divisor: DivisorFile,
    /// Display name of the divisor.
    #[serde(default)]
    pub name: Option<String>,
    /// Blow-up applied before evaluating, as `(curve label, multiplicity)`.
    #[serde(default)]
    pub blow_up: Option<Vec<(String, u64)>>,
    #[serde(default)]
    pub multiples: Vec<MultipleCurveQuery>,
    #[serde(default)]
    pub expect: Option<DivisorExpect>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeEntry {
    pub n: u32,
    pub m: u32,
    pub p: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Theorem11Spec {
    #[serde(rename = "N")]
    pub n: u32,
    pub primes: Vec<PrimeEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SeifertSource {
    Input(SeifertInput),
    Theorem11(Theorem11Spec),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertPayload {
    #[serde(flatten)]
    pub source: SeifertSource,
    /// Canonical group string to compare against.
    #[serde(default)]
    pub expect: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuitePayload {
    pub name: String,
}

/// Runs a parsed scenario. Schema problems are errors; module failures are
/// failed checks in the returned report.
pub fn run(s: &Scenario, opts: &RunOptions) -> Result<Report, ScenarioError> {
    let so = s.suite_options(opts);
    let mut provenance = serde_json::json!({
        "kind": s.kind.as_str(),
        "payload": s.payload,
        "resolution": so.resolution,
        "tolerance": so.tolerance,
    });
    if let Some(seed) = opts.seed.or(s.seed) {
        provenance["seed"] = seed.into();
    }
    let grid = GridSpec::with_resolution(so.resolution);
    let mut report = Report::new(s.kind.as_str(), provenance);
    match s.kind {
        Kind::Planes => run_planes(&mut report, &payload(&s.payload)?),
        Kind::Perturb => run_perturb(&mut report, &payload(&s.payload)?, &grid, so.tolerance),
        Kind::Kahler => run_kahler(&mut report, &payload(&s.payload)?),
        Kind::Divisor => run_divisor(&mut report, &payload(&s.payload)?),
        Kind::Seifert => run_seifert(&mut report, &payload(&s.payload)?),
        Kind::Suite => {
            let p: SuitePayload = payload(&s.payload)?;
            let name: SuiteName = p.name.parse().map_err(ScenarioError::Schema)?;
            return Ok(suite::run_suite(name, &so));
        }
    }
    Ok(report)
}

pub fn run_path(path: &Path, opts: &RunOptions) -> Result<Report, ScenarioError> {
    run(&Scenario::load(path)?, opts)
}

fn plane_checks<T: Scalar + ToPrimitive>(report: &mut Report, graphs: &[GraphOverZ<T>]) {
    let vertical = PlaneBasis::<T>::vertical();
    let f = |x: &T| x.to_f64().unwrap_or(f64::NAN);
    for (i, g) in graphs.iter().enumerate() {
        let s = i + 1;
        let c = classify_z_graph(g);
        report.push(Check::above(format!("S{s} symplectic, positive on {{z = 0}}"), f(&c.margins.symplectic), 0.0));
        match oracle_classify(&vertical, &g.basis()) {
            Ok(o) => report.push(Check::flag(
                format!("S{s} oracle agrees"),
                o.positive == (c.margins.symplectic > T::zero()),
            )),
            Err(e) => report.push(Check::error(format!("S{s} oracle"), e)),
        }
        match convert_graph(g) {
            Ok(w) => report.line(format!(
                "S{s} over w: α = {:.16e} + {:.16e}i, β = {:.16e} + {:.16e}i",
                f(&w.alpha.re),
                f(&w.alpha.im),
                f(&w.beta.re),
                f(&w.beta.im)
            )),
            Err(e) => report.line(format!("S{s}: {e}")),
        }
    }
    for i in 0..graphs.len() {
        for j in i + 1..graphs.len() {
            let (gi, gj) = (&graphs[i], &graphs[j]);
            report.push(Check::above(
                format!("S{}·S{} transverse and positive", i + 1, j + 1),
                f(&pair_margin(gi, gj)),
                0.0,
            ));
            report.push(Check::flag(
                format!("S0, S{}, S{} pairwise positive", i + 1, j + 1),
                triple_positive(gi, gj),
            ));
        }
    }
}

fn run_planes(report: &mut Report, p: &PlanesPayload) {
    let exact_graphs: Result<Vec<GraphOverZ<Exact>>, ScenarioError> = p
        .graphs
        .iter()
        .map(|g| {
            let c = |v: &[RationalValue; 2]| Ok::<_, ScenarioError>(Complex::new(v[0].to_exact()?, v[1].to_exact()?));
            Ok(GraphOverZ::new(c(&g.a)?, c(&g.b)?))
        })
        .collect();
    let graphs = match exact_graphs {
        Ok(g) => g,
        Err(e) => return report.push(Check::error("planes", e)),
    };
    match p.mode {
        PlaneMode::Exact => plane_checks(report, &graphs),
        PlaneMode::Float => {
            let to_f = |z: &Complex<Exact>| Complex64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN));
            let floats: Vec<GraphOverZ<f64>> =
                graphs.iter().map(|g| GraphOverZ::new(to_f(&g.a), to_f(&g.b))).collect();
            plane_checks(report, &floats);
        }
    }
}

fn absorb<E: std::fmt::Display>(report: &mut Report, name: &str, r: Result<suite::Section, E>) {
    match r {
        Ok((checks, lines)) => {
            for l in lines {
                report.line(l);
            }
            report.extend(checks);
        }
        Err(e) => report.push(Check::error(name, e)),
    }
}

fn run_perturb(report: &mut Report, p: &PerturbPayload, grid: &GridSpec, tolerance: f64) {
    match p {
        PerturbPayload::Thm27 { arrangement } => {
            absorb(report, "steps one and two", suite::thm27_checks(arrangement, grid))
        }
        PerturbPayload::Nice { arrangement } => {
            absorb(report, "nice pipeline", suite::nice_checks(arrangement, grid, tolerance))
        }
        PerturbPayload::Node { node } => absorb(report, "node resolution", suite::node_checks(node, grid)),
    }
}

fn run_kahler(report: &mut Report, p: &KahlerPayload) {
    let body = || -> Result<suite::Section, kahler::KahlerError> {
        let mut checks = Vec::new();
        let mut lines = Vec::new();
        let d = kahler::exterior_derivative_max(&p.chart, &p.grid, p.fd_step)?;
        checks.push(Check::below("max |dω|", d, p.domega_bound));
        let mut radii = vec![0.0];
        radii.extend(p.taming_radii.iter().copied().filter(|&r| r > 0.0));
        let rep = kahler::taming_radius(&p.chart, &radii, p.grid.n, p.fd_step)?;
        checks.push(Check::above("taming at zero section", rep.rows[0].min_eigenvalue, 0.0));
        for row in &rep.rows {
            lines.push(format!(
                "|w| = {:.16e}: min taming eigenvalue {:.16e}, max |dω| {:.16e}",
                row.radius, row.min_eigenvalue, row.max_domega
            ));
        }
        lines.push(format!("tamed up to |w| = {:?}", rep.tamed_up_to));
        if let Some([a, b]) = p.transition {
            let g = kahler::gluing_compatibility(&kahler::transition(a, b), 1e-12)?;
            checks.push(Check::at_most("transition ω0 defect", g.omega_defect, 1e-12));
            checks.push(Check::at_most("transition J0 defect", g.j_defect, 1e-12));
        }
        Ok((checks, lines))
    };
    absorb(report, "kahler", body());
}

fn run_divisor(report: &mut Report, p: &DivisorPayload) {
    let body = || -> Result<suite::Section, divisor::DivisorError> {
        let mut checks = Vec::new();
        let mut lines = Vec::new();
        p.lattice.validate()?;
        let mut lat = p.lattice.clone();
        if let Some(through) = &p.blow_up {
            let idx = through
                .iter()
                .map(|(l, m)| {
                    lat.index_of(l)
                        .map(|i| (i, *m))
                        .ok_or_else(|| divisor::DivisorError::UnknownLabel(l.clone()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            lat = lat.blow_up(&idx)?;
        }
        let sig = lat.signature();
        lines.push(format!("signature (b+, b-, b0) = ({}, {}, {})", sig.b_plus, sig.b_minus, sig.b_zero));
        let d = SymplecticDivisor::from_labels(&lat, &p.divisor.coeffs)?;
        let rep = lat.realizability(&d)?;
        let name = p.name.as_deref().unwrap_or("D");
        lines.push(format!(
            "{name}² = {}, g = {}, disjoint from: {}",
            rep.self_intersection,
            rep.genus.map_or("-".into(), |g| g.to_string()),
            rep.disjoint_from.join(", ")
        ));
        for (label, v) in &rep.pairings {
            lines.push(format!("{name}·{label} = {v}"));
        }
        for r in &rep.reasons {
            lines.push(format!("not realizable: {r}"));
        }
        checks.push(Check::flag(format!("{name} realizable"), rep.realizable));
        if let Some(e) = &p.expect {
            if let Some(s) = e.self_intersection {
                checks.push(Check::equals(format!("{name}²"), rep.self_intersection as f64, s as f64));
            }
            if let Some(g) = e.genus {
                checks.push(Check::equals(
                    format!("g({name})"),
                    rep.genus.map_or(f64::NAN, |x| x as f64),
                    g as f64,
                ));
            }
            if let Some(dj) = &e.disjoint_from {
                checks.push(Check::flag(format!("{name} disjoint from {}", dj.join(", ")), &rep.disjoint_from == dj));
            }
        }
        for q in &p.multiples {
            let (sq, g) = divisor::multiple_curve_invariants(q)?;
            lines.push(format!("k = {}, g = {}, n = {}: C_n² = {sq}, g(C_n) = {g}", q.k, q.g, q.n));
        }
        Ok((checks, lines))
    };
    absorb(report, "divisor", body());
}

fn run_seifert(report: &mut Report, p: &SeifertPayload) {
    let (group, b2x) = match &p.source {
        SeifertSource::Input(input) => (divisor::seifert_h2(input), input.b2x),
        SeifertSource::Theorem11(t) => {
            let primes = t.primes.iter().map(|e| ((e.n, e.m), e.p)).collect();
            (divisor::theorem11_group(t.n, &primes), 3)
        }
    };
    match group {
        Ok(g) => {
            report.line(g.to_string());
            report.line(format!("torsion order {}", g.torsion_order()));
            report.push(Check::equals("rank = b2X - 1", g.rank as f64, (b2x - 1) as f64));
            if let Some(e) = &p.expect {
                report.push(Check::flag(format!("group equals {e}"), &g.to_string() == e));
            }
        }
        Err(e) => {
            report.line(e.to_string());
            report.push(Check::error("seifert", e));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_values() {
        let v: Vec<RationalValue> = serde_json::from_str(r#"[3, 0.5, "-7/4", "2"]"#).unwrap();
        let q: Vec<Exact> = v.iter().map(|x| x.to_exact().unwrap()).collect();
        assert_eq!(q[0], BigRational::from_integer(3.into()));
        assert_eq!(q[1], BigRational::new(1.into(), 2.into()));
        assert_eq!(q[2], BigRational::new((-7).into(), 4.into()));
        assert!(RationalValue::Text("1/0".into()).to_exact().is_err());
        assert!(RationalValue::Text("x".into()).to_exact().is_err());
    }

    #[test]
    fn rejects_wrong_schema_and_empty_text() {
        assert!(Scenario::parse("").is_err());
        assert!(Scenario::parse(r#"{"schema":"other","kind":"planes"}"#).is_err());
        assert!(Scenario::parse(r#"{"schema":"sympsurf/1","kind":"nope"}"#).is_err());
    }

    #[test]
    fn planes_scenario_runs() {
        let s = Scenario::parse(
            r#"{"schema":"sympsurf/1","kind":"planes","payload":{"graphs":[
                {"a":[1,0],"b":["1/2",0]},{"a":[-1,0],"b":[0,0]}]}}"#,
        )
        .unwrap();
        let r = run(&s, &RunOptions::default()).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn t1_divisor_scenario() {
        let s = Scenario::parse(
            r#"{"schema":"sympsurf/1","kind":"divisor","payload":{
                "lattice":{"labels":["T","D"],"Q":[[0,3],[3,-2]],"K":[0,0]},
                "divisor":{"coeffs":{"T":2,"D":3}},"name":"T1"}}"#,
        )
        .unwrap();
        let r = run(&s, &RunOptions::default()).unwrap();
        assert!(r.passed());
        assert!(r.summary.iter().any(|l| l == "T1² = 18, g = 10, disjoint from: D"));
    }

    #[test]
    fn seifert_gcd_violation_fails() {
        let s = Scenario::parse(
            r#"{"schema":"sympsurf/1","kind":"seifert","payload":{"input":{
                "b2X":3,"data":[{"m":2,"g":1},{"m":2,"g":0}],
                "adjacency":[[false,true],[true,false]]}}}"#,
        )
        .unwrap();
        let r = run(&s, &RunOptions::default()).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn unknown_suite_is_schema_error() {
        let s = Scenario::parse(r#"{"schema":"sympsurf/1","kind":"suite","payload":{"name":"x"}}"#).unwrap();
        assert!(run(&s, &RunOptions::default()).is_err());
    }
}
