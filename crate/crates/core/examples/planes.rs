// Classify a few planes through the origin of `(C^2, w0)` exactly and
// rewrite them as graphs over `w`.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use sympsurf::plane::{
    classify_w_graph, classify_z_graph, convert_graph, oracle_classify, pair_positive,
    triple_positive, Exact, GraphOverZ, PlaneBasis,
};

fn q(n: i64, d: i64) -> Exact {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn graph(a: (i64, i64), b: (i64, i64), d: i64) -> GraphOverZ<Exact> {
    GraphOverZ::new(Complex::new(q(a.0, d), q(a.1, d)), Complex::new(q(b.0, d), q(b.1, d)))
}

pub fn run_example() -> Vec<String> {
    let planes = [
        ("complex line w = z", graph((1, 0), (0, 0), 1)),
        ("w = z + z̄/2", graph((2, 0), (1, 0), 2)),
        ("lagrangian w = z̄", graph((0, 0), (1, 0), 1)),
        ("antiholomorphic branch w = 2z̄", graph((0, 0), (2, 0), 1)),
    ];
    let mut out = Vec::new();
    for (name, g) in &planes {
        let c = classify_z_graph(g);
        let o = oracle_classify(&PlaneBasis::horizontal(), &g.basis()).expect("graph basis");
        let over_w = match convert_graph(g) {
            Ok(w) => format!("z = ({}) w + ({}) w̄, margin {}", w.alpha, w.beta, classify_w_graph(&w).margins.symplectic),
            Err(e) => e.to_string(),
        };
        out.push(format!(
            "{name}: symplectic {}, transverse to w = 0 {}, positive {} (oracle agrees: {}); {over_w}",
            c.symplectic,
            c.transverse_to_reference,
            c.positive,
            o.flags() == c.flags()
        ));
    }
    let (s1, s2) = (&planes[0].1, &planes[1].1);
    out.push(format!("first two meet positively: {}", pair_positive(s1, s2)));
    out.push(format!("with {{z = 0}} all pairwise positive: {}", triple_positive(s1, s2)));
    out
}

fn main() {
    for line in run_example() {
        println!("{line}");
    }
}
