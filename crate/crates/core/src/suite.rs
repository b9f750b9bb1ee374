//! Verification batteries run by `sympsurf suite`.
//!
//! Each section appends checks to a [`Report`]. Sweeps draw from a ChaCha8
//! stream seeded by the caller and reduce with order-independent operations,
//! so a fixed seed gives the same report on any thread count.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::chart::{
    arrangement_constants, linearize_step, locate_intersections, nice_pipeline,
    remove_antiholomorphic_step, resolve_node, smoothing_c1_distance, verify::surface_min_margin,
    Arrangement, ChartError, GridSpec, LocalGraphSurface, NodeResolution, PolyTerm, Region,
    Residual,
};
use crate::divisor::{self, fixtures, DivisorError, MultipleCurveQuery, SeifertInput};
use crate::kahler::{
    self, exterior_derivative_max, gluing_compatibility, taming_radius, ChartGrid, FiberMetric,
    MetricChart,
};
use crate::plane::{
    classify_w_graph, classify_z_graph, convert_graph, oracle_classify, pair_positive,
    triple_positive, Exact, GraphOverZ, PlaneBasis,
};
use crate::report::{Check, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteName {
    Lemmas,
    Pipelines,
    Kahler,
    Homology,
    All,
}

impl SuiteName {
    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Lemmas => "lemmas",
            SuiteName::Pipelines => "pipelines",
            SuiteName::Kahler => "kahler",
            SuiteName::Homology => "homology",
            SuiteName::All => "all",
        }
    }
}

impl FromStr for SuiteName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lemmas" => Ok(SuiteName::Lemmas),
            "pipelines" => Ok(SuiteName::Pipelines),
            "kahler" => Ok(SuiteName::Kahler),
            "homology" => Ok(SuiteName::Homology),
            "all" => Ok(SuiteName::All),
            other => Err(format!(
                "unknown suite {other:?}; expected lemmas, pipelines, kahler, homology or all"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub resolution: usize,
    /// Accepted distance between predicted and located intersections.
    pub tolerance: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            resolution: 256,
            tolerance: 1e-8,
        }
    }
}

pub const LEMMA_SAMPLES: usize = 100_000;
pub const CONVERSION_SAMPLES: usize = 10_000;
/// Margins below this are resampled in the float sweep.
pub const SWEEP_MARGIN: f64 = 1e-9;

pub fn run_suite(name: SuiteName, opts: &SuiteOptions) -> Report {
    let mut report = Report::new(
        "suite",
        json!({
            "suite": name.as_str(),
            "seed": opts.seed,
            "resolution": opts.resolution,
            "tolerance": opts.tolerance,
        }),
    );
    let grid = GridSpec::with_resolution(opts.resolution);
    let all = name == SuiteName::All;
    if all || name == SuiteName::Lemmas {
        lemma_sweep(&mut report, opts.seed, LEMMA_SAMPLES);
        conversion_identity(&mut report, opts.seed, CONVERSION_SAMPLES);
    }
    if all || name == SuiteName::Pipelines {
        let arr = triple_arrangement();
        section(&mut report, "steps one and two", thm27_checks(&arr, &grid));
        section(&mut report, "nice pipeline", nice_checks(&arr, &grid, opts.tolerance));
        section(&mut report, "node resolution", node_checks(&NODE_FIXTURE, &grid));
    }
    if all || name == SuiteName::Kahler {
        section(&mut report, "kahler model", kahler_checks());
    }
    if all || name == SuiteName::Homology {
        section(&mut report, "divisor arithmetic", divisor_checks());
        section(&mut report, "seifert homology", seifert_checks());
    }
    report
}

/// Checks plus summary lines of one section.
pub type Section = (Vec<Check>, Vec<String>);

fn section<E: std::fmt::Display>(report: &mut Report, name: &str, result: Result<Section, E>) {
    match result {
        Ok((checks, lines)) => {
            for l in lines {
                report.line(l);
            }
            report.extend(checks);
        }
        Err(e) => report.push(Check::error(name, e)),
    }
}

fn random_complex(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    Complex64::new(rng.random_range(-r..r), rng.random_range(-r..r))
}

/// A pair of graphs over `z` whose every margin clears [`SWEEP_MARGIN`].
pub fn sweep_samples(seed: u64, n: usize) -> Vec<(GraphOverZ<f64>, GraphOverZ<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let g1 = GraphOverZ::new(random_complex(&mut rng, 2.0), random_complex(&mut rng, 2.0));
        let g2 = GraphOverZ::new(random_complex(&mut rng, 2.0), random_complex(&mut rng, 2.0));
        let (d1, d2) = (g1.holomorphic_excess(), g2.holomorphic_excess());
        let pm = crate::plane::pair_margin(&g1, &g2);
        if [d1, d2, 1.0 + d1, 1.0 + d2, pm]
            .iter()
            .all(|m| m.abs() > SWEEP_MARGIN)
        {
            out.push((g1, g2));
        }
    }
    out
}

/// Agreement counts of the closed-form predicates with the determinant
/// oracle: `[z-graph, w-graph, pair, triple]`.
pub fn oracle_agreements(samples: &[(GraphOverZ<f64>, GraphOverZ<f64>)]) -> [usize; 4] {
    let horizontal = PlaneBasis::<f64>::horizontal();
    let vertical = PlaneBasis::<f64>::vertical();
    samples
        .par_iter()
        .map(|(g1, g2)| {
            let mut hits = [0usize; 4];
            let (b1, b2) = (g1.basis(), g2.basis());
            let oz = oracle_classify(&horizontal, &b1).expect("graph basis");
            hits[0] = usize::from(classify_z_graph(g1).flags() == oz.flags());
            if let Ok(wg) = convert_graph(g1) {
                let ow = oracle_classify(&horizontal, &wg.basis()).expect("graph basis");
                hits[1] = usize::from(classify_w_graph(&wg).flags() == ow.flags());
            }
            let o12 = oracle_classify(&b1, &b2).expect("graph bases");
            // graph orientations: the raw determinant decides
            hits[2] = usize::from(pair_positive(g1, g2) == (o12.margins.transverse > 0.0));
            let triple = oracle_classify(&vertical, &b1).expect("graph basis").positive
                && oracle_classify(&vertical, &b2).expect("graph basis").positive
                && o12.positive;
            hits[3] = usize::from(triple_positive(g1, g2) == triple);
            hits
        })
        .reduce(|| [0; 4], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]])
}

pub fn lemma_sweep(report: &mut Report, seed: u64, n: usize) {
    let samples = sweep_samples(seed, n);
    let hits = oracle_agreements(&samples);
    let names = [
        "classify_z_graph agrees with oracle",
        "classify_w_graph(convert_graph) agrees with oracle",
        "pair_positive agrees with oracle",
        "triple_positive agrees with oracle",
    ];
    for (name, h) in names.iter().zip(hits) {
        report.push(Check::equals(*name, h as f64, n as f64));
    }
    report.line(format!("{} oracle agreements of {} per predicate", hits.iter().min().unwrap_or(&0), n));
}

fn random_rational(rng: &mut ChaCha8Rng) -> Exact {
    BigRational::new(
        BigInt::from(rng.random_range(-40i64..=40)),
        BigInt::from(rng.random_range(1i64..=12)),
    )
}

/// Transverse exact graphs over `z`.
pub fn exact_samples(seed: u64, n: usize) -> Vec<GraphOverZ<Exact>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut c = || Complex::new(random_rational(&mut rng), random_rational(&mut rng));
        let g = GraphOverZ::new(c(), c());
        if !g.holomorphic_excess().is_zero() {
            out.push(g);
        }
    }
    out
}

/// `|α|^2 - |β|^2 + 1 = (1 + |a|^2 - |b|^2)/(|a|^2 - |b|^2)` in exact
/// arithmetic.
pub fn conversion_identity(report: &mut Report, seed: u64, n: usize) {
    let samples = exact_samples(seed, n);
    let hits: usize = samples
        .par_iter()
        .map(|g| {
            let sq = |z: &Complex<Exact>| z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone();
            let d = sq(&g.a) - sq(&g.b);
            let rhs = (BigRational::one() + d.clone()) / d;
            let lhs = convert_graph(g).map(|w| classify_w_graph(&w).margins.symplectic);
            usize::from(lhs == Ok(rhs))
        })
        .sum();
    report.push(Check::equals(
        "exact conversion identity holds",
        hits as f64,
        n as f64,
    ));
}

/// Three surfaces `w = a_j z + b_j z̄ + c_j z^2` over the unit chart.
pub fn triple_arrangement() -> Arrangement {
    let c = Complex64::new;
    let mk = |a, b, k| {
        LocalGraphSurface::linear(a, b, 1.0).with_residual(
            Residual::Poly {
                coeffs: vec![PolyTerm { p: 2, q: 0, c: k }],
            },
            1.0,
        )
    };
    Arrangement::new(
        vec![
            mk(c(1.0, 0.0), c(0.5, 0.0), c(0.5, 0.0)),
            mk(c(-1.0, 0.0), c(0.5, 0.0), c(-0.5, 0.0)),
            mk(c(0.0, 1.0), c(0.5, 0.0), c(0.0, 0.5)),
        ],
        1.0,
    )
}

pub const NODE_FIXTURE: NodeResolution = NodeResolution {
    epsilon: Complex64::new(0.01, 0.0),
    lambda0: 0.5,
};

/// Steps one and two in the original chart.
pub fn thm27_checks(arr: &Arrangement, grid: &GridSpec) -> Result<Section, ChartError> {
    let mut checks = Vec::new();
    let mut lines = Vec::new();
    let k = arrangement_constants(arr)?;
    let (lin, lambda1) = linearize_step(arr, grid)?;
    let (stepped, lambda2, mu) = remove_antiholomorphic_step(&lin, grid)?;
    lines.push(format!(
        "steps one and two: C = {}, M = {}, eps0 = {}, λ1 = {lambda1:.16e}, λ2 = {lambda2:.16e}, μ = {mu:.16e}",
        k.c, k.m, k.eps0
    ));
    if k.c > 0.0 {
        checks.push(Check::at_most("λ1 <= 0.9 eps0/(8C)", lambda1, 0.9 * k.eps0 / (8.0 * k.c)));
        checks.push(Check::at_most(
            "λ1 <= 0.9 eps0/(C(9+24M))",
            lambda1,
            0.9 * k.eps0 / (k.c * (9.0 + 24.0 * k.m)),
        ));
    }
    if k.m > 0.0 {
        checks.push(Check::at_most("λ2 <= 0.9 eps0/(6M^2)", lambda2, 0.9 * k.eps0 / (6.0 * k.m * k.m)));
    }
    for (j, (before, after)) in arr.surfaces.iter().zip(&stepped.surfaces).enumerate() {
        let s = j + 1;
        checks.push(Check::above(
            format!("S{s} min symplectic margin"),
            surface_min_margin(after, grid),
            0.0,
        ));
        // sample rings on the support circle itself can round to one ulp inside
        let outside = Region::annulus(after.support_radius() * (1.0 + 1e-12), arr.r0);
        checks.push(Check::equals(
            format!("S{s} samples changed outside cutoff zones"),
            crate::chart::bit_identical_outside(before, after, &outside, grid) as f64,
            0.0,
        ));
    }
    let region = Region::disc(arr.r0);
    let n = stepped.surfaces.len();
    for i in 0..n {
        for j in i + 1..n {
            let pts = locate_intersections(&stepped.surfaces[i], &stepped.surfaces[j], &region, grid)?;
            let name = format!("S{}∩S{}", i + 1, j + 1);
            checks.push(Check::equals(format!("{name} point count"), pts.len() as f64, 1.0));
            let far = pts.iter().map(|p| p.z.norm()).fold(0.0, f64::max);
            checks.push(Check::at_most(format!("{name} distance from origin"), far, 1e-10));
        }
    }
    Ok((checks, lines))
}

/// Complex-like model, separation and orthogonal double points.
pub fn nice_checks(arr: &Arrangement, grid: &GridSpec, tolerance: f64) -> Result<Section, ChartError> {
    let (_, rep) = nice_pipeline(arr, grid)?;
    let mut checks = Vec::new();
    let mut lines = vec![format!(
        "nice pipeline: {} separations, {} double points",
        rep.separations.len(),
        rep.double_points.len()
    )];
    for s in &rep.separations {
        lines.push(format!("  separation eps = {:.16e}, λ0 = {:.16e}", s.eps, s.lambda0));
    }
    checks.push(Check::above("nice pipeline min symplectic margin", rep.min_margin, 0.0));
    checks.push(Check::at_most("predicted vs located intersections", rep.prediction_error, tolerance));
    checks.push(Check::flag("only double points", rep.only_double_points));
    let l = arr.surfaces.len();
    checks.push(Check::equals(
        "double point count",
        rep.double_points.len() as f64,
        (l * (l + 1) / 2) as f64,
    ));
    for dp in &rep.double_points {
        let (i, j) = dp.surfaces;
        checks.push(Check::below(format!("double point ({i},{j}) model residual"), dp.model_residual, 1e-6));
        checks.push(Check::above(format!("double point ({i},{j}) margin"), dp.margin, 0.0));
    }
    Ok((checks, lines))
}

/// `C^1` distances of `f_ε - zw` over `k` successive halvings of `ε`.
pub fn c1_sequence(res: &NodeResolution, grid: &GridSpec, halvings: u32) -> Vec<f64> {
    (0..=halvings)
        .map(|k| smoothing_c1_distance(res.epsilon / 2f64.powi(k as i32), res.lambda0, grid))
        .collect()
}

pub fn node_checks(res: &NodeResolution, grid: &GridSpec) -> Result<Section, ChartError> {
    let rep = resolve_node(res, grid)?;
    let mut checks = vec![
        Check::above("node min singular value", rep.min_singular_value, 0.0),
        Check::above("node symplectic margin", rep.min_margin, 0.0),
        Check::at_most("node inner residual", rep.inner_residual, 1e-12),
        Check::at_most("node outer residual", rep.outer_residual, 0.0),
        Check::equals("euler characteristic after", rep.euler_after as f64, 0.0),
        Check::flag("resolved node connected", rep.connected),
    ];
    let seq = c1_sequence(&NodeResolution { epsilon: rep.epsilon, ..*res }, grid, 4);
    for (k, w) in seq.windows(2).enumerate() {
        checks.push(Check::at_most(
            format!("C1 ratio at halving {}, |ratio - 2|", k + 1),
            (w[0] / w[1] - 2.0).abs(),
            0.2,
        ));
    }
    let lines = vec![format!(
        "node: ε = {:.16e}, λ0 = {}, halvings {}, C1 distances {:?}",
        rep.epsilon.re, rep.lambda0, rep.halvings, seq
    )];
    Ok((checks, lines))
}

/// Fiber metrics used for the taming checks, with chart radius 0.5.
pub fn metric_fixtures() -> Vec<(&'static str, FiberMetric)> {
    vec![
        ("h = 1", FiberMetric::Const { c: 1.0 }),
        ("h = 2.5", FiberMetric::Const { c: 2.5 }),
        ("h = exp(|z|^2)", FiberMetric::ExpNorm2 { k: 1.0 }),
        ("h = exp(-5|z|^2)", FiberMetric::ExpNorm2 { k: -5.0 }),
        ("h = 1 + |z|^2", FiberMetric::Poly { coeffs: vec![1.0, 1.0] }),
    ]
}

/// Chart for the `dω` convergence check with `h = exp(|z|^2)`.
pub fn exp_metric_chart() -> (MetricChart, ChartGrid) {
    (
        MetricChart::new(FiberMetric::ExpNorm2 { k: 1.0 }, 0.25),
        ChartGrid {
            z_radius: 0.25,
            w_radius: 0.25,
            n: 8,
        },
    )
}

pub fn kahler_checks() -> Result<Section, kahler::KahlerError> {
    let mut checks = Vec::new();
    let mut lines = Vec::new();

    let flat = MetricChart::new(FiberMetric::Const { c: 1.0 }, 1.0);
    let grid = ChartGrid {
        z_radius: 0.9,
        w_radius: 1.0,
        n: 8,
    };
    let mut worst: f64 = 0.0;
    for (z, w) in grid.points() {
        let f = kahler::omega_l_local(&flat, z, w)?;
        worst = worst.max((f.real_matrix() - kahler::omega0_matrix()).abs().max());
    }
    checks.push(Check::equals("h = 1 deviation from product form", worst, 0.0));
    checks.push(Check::equals("h = 1 max |dω|", exterior_derivative_max(&flat, &grid, 1e-3)?, 0.0));

    let (chart, grid) = exp_metric_chart();
    let coarse = exterior_derivative_max(&chart, &grid, 1e-3)?;
    let fine = exterior_derivative_max(&chart, &grid, 5e-4)?;
    lines.push(format!("h = exp(|z|^2): max |dω| {coarse:.16e} at 1e-3, {fine:.16e} at 5e-4"));
    checks.push(Check::below("h = exp(|z|^2) max |dω| at step 1e-3", coarse, 1e-6));
    checks.push(Check::above("h = exp(|z|^2) |dω| shrink on halving", coarse / fine, 3.5));

    let radii: Vec<f64> = (0..=20).map(|i| f64::from(i) * 0.05).collect();
    for (name, h) in metric_fixtures() {
        let rep = taming_radius(&MetricChart::new(h, 0.5), &radii, 8, 1e-3)?;
        let zero_section = rep.rows.first().map_or(f64::NAN, |r| r.min_eigenvalue);
        checks.push(Check::above(format!("{name} taming at zero section"), zero_section, 0.0));
        checks.push(Check::above(
            format!("{name} tamed radius"),
            rep.tamed_up_to.unwrap_or(0.0),
            0.0,
        ));
        lines.push(format!("{name}: tamed up to |w| = {:?}", rep.tamed_up_to));
    }

    let mv = kahler::transition(Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0));
    let g = gluing_compatibility(&mv, 1e-12)?;
    checks.push(Check::at_most("transition ω0 defect", g.omega_defect, 1e-12));
    checks.push(Check::at_most("transition J0 defect", g.j_defect, 1e-12));
    Ok((checks, lines))
}

pub fn divisor_checks() -> Result<Section, DivisorError> {
    let mut checks = Vec::new();
    let mut lines = Vec::new();

    let lat = fixtures::torus_sphere();
    let sig = lat.signature();
    checks.push(Check::flag("T/D signature (1,1,0)", (sig.b_plus, sig.b_minus, sig.b_zero) == (1, 1, 0)));
    let rep = lat.realizability(&fixtures::t1_divisor())?;
    lines.push(t1_line(&rep));
    checks.push(Check::equals("T1^2", rep.self_intersection as f64, 18.0));
    checks.push(Check::equals("g(T1)", rep.genus.map_or(f64::NAN, |g| g as f64), 10.0));
    checks.push(Check::flag("T1 disjoint from exactly D", rep.disjoint_from == ["D"]));
    checks.push(Check::flag("T1 realizable", rep.realizable));

    let t1 = fixtures::t1_divisor().class(lat.rank())?;
    for n in 1..=10i64 {
        let (sq, g) = multiple_curve_invariants(18, 10, n)?;
        let nt: Vec<i64> = t1.iter().map(|x| n * x).collect();
        let adj = lat.adjunction_genus(&nt)?;
        lines.push(format!("T_{n}: T_{n}^2 = {sq}, g = {g}"));
        checks.push(Check::equals(format!("g(T_{n}) = 9n^2+1"), g as f64, (9 * n * n + 1) as f64));
        checks.push(Check::equals(format!("T_{n}^2 = 18n^2"), sq as f64, (18 * n * n) as f64));
        checks.push(Check::equals(format!("g(T_{n}) by adjunction on the lattice"), adj as f64, g as f64));
    }

    let blown = lat.blow_up(&[(0, 1)])?;
    let s2 = blown.signature();
    checks.push(Check::flag(
        "blow-up adds one negative direction",
        (s2.b_plus, s2.b_minus, s2.b_zero) == (sig.b_plus, sig.b_minus + 1, sig.b_zero),
    ));

    let (chain, a) = fixtures::chain_lattice(0)?;
    let minus_two = (1..chain.rank()).filter(|&i| chain.q[i][i] == -2).count();
    checks.push(Check::equals(
        "chain self-intersections equal to -2",
        minus_two as f64,
        (chain.rank() - 1) as f64,
    ));
    let rep = chain.realizability(&a)?;
    let orthogonal: Vec<String> = chain.labels[1..].to_vec();
    checks.push(Check::flag("A realizable", rep.realizable));
    checks.push(Check::flag(
        "A disjoint from E1 and every C_i, C_i'",
        orthogonal.iter().all(|l| rep.disjoint_from.contains(l)),
    ));
    checks.push(Check::equals("A^2", rep.self_intersection as f64, 18.0));
    checks.push(Check::equals("g(A)", rep.genus.map_or(f64::NAN, |g| g as f64), 10.0));
    lines.push(format!(
        "A^2 = {}, g = {}, disjoint from: {}",
        rep.self_intersection,
        rep.genus.map_or("-".into(), |g| g.to_string()),
        rep.disjoint_from.join(", ")
    ));
    Ok((checks, lines))
}

fn multiple_curve_invariants(k: i64, g: i64, n: i64) -> Result<(i64, i64), DivisorError> {
    divisor::multiple_curve_invariants(&MultipleCurveQuery { k, g, n })
}

/// `T1² = 18, g = 10, disjoint from: D`.
pub fn t1_line(rep: &divisor::RealizabilityReport) -> String {
    format!(
        "T1² = {}, g = {}, disjoint from: {}",
        rep.self_intersection,
        rep.genus.map_or("-".into(), |g| g.to_string()),
        rep.disjoint_from.join(", ")
    )
}

pub fn seifert_checks() -> Result<Section, DivisorError> {
    let mut checks = Vec::new();
    let mut lines = Vec::new();

    let g1 = divisor::theorem11_group(1, &BTreeMap::from([((1, 1), 5)]))?;
    lines.push(format!("N = 1, p = 5: {g1}"));
    checks.push(Check::flag(
        "prime-table group for N = 1, p = 5",
        g1.to_string() == "Z^2 + Z_5^20 + Z_25^20 + Z_125^20",
    ));

    let primes = BTreeMap::from([((1, 1), 5), ((1, 2), 7), ((2, 1), 11), ((2, 2), 13)]);
    let g2 = divisor::theorem11_group(2, &primes)?;
    lines.push(format!("N = 2: {g2}"));
    checks.push(Check::equals("N = 2 rank", g2.rank as f64, 2.0));
    let mut expected_rank = 0;
    for (&(n, m), &p) in &primes {
        let (n, m) = (u64::from(n), u64::from(m));
        for (order, exp) in [(p, 18 * n * n + 2), (p * p, 18 * m * m + 2), (p * p * p, 20)] {
            checks.push(Check::equals(
                format!("N = 2 block Z_{order} multiplicity"),
                g2.multiplicity_of(order) as f64,
                exp as f64,
            ));
            expected_rank += exp;
        }
    }
    checks.push(Check::equals("N = 2 torsion rank", g2.torsion_rank() as f64, expected_rank as f64));

    let clash = SeifertInput {
        b2x: 3,
        data: vec![
            divisor::IsotropyDatum { m: 2, g: 1 },
            divisor::IsotropyDatum { m: 3, g: 0 },
            divisor::IsotropyDatum { m: 4, g: 2 },
        ],
        adjacency: Some(vec![
            vec![false, true, true],
            vec![true, false, true],
            vec![true, true, false],
        ]),
    };
    let rejected = divisor::seifert_h2(&clash);
    lines.push(format!("gcd fixture: {rejected:?}"));
    checks.push(Check::flag(
        "gcd violation names D_0, D_2",
        rejected == Err(DivisorError::GcdViolation { i: 0, j: 2 }),
    ));
    Ok((checks, lines))
}
