// Intersection lattice arithmetic: the divisor `T1 = 2T + 3D`, its
// multiples, a blow-up, and the chain divisor `A`.

use sympsurf::divisor::{
    fixtures, multiple_curve_invariants, resolution_genus, DivisorError, MultipleCurveQuery,
};

pub fn run_example() -> Result<Vec<String>, DivisorError> {
    let lat = fixtures::torus_sphere();
    let rep = lat.realizability(&fixtures::t1_divisor())?;
    let mut lines = vec![
        format!("signature {:?}", lat.signature()),
        format!(
            "T1² = {}, g = {:?}, disjoint from: {}",
            rep.self_intersection,
            rep.genus,
            rep.disjoint_from.join(", ")
        ),
    ];
    for n in 1..=5 {
        let (sq, g) = multiple_curve_invariants(&MultipleCurveQuery { k: 18, g: 10, n })?;
        lines.push(format!("T_{n}: square {sq}, genus {g}"));
    }
    lines.push(format!("two genus-10 curves joined at 18 nodes: genus {}", resolution_genus(&[10, 10], 18, 2)?));
    let blown = lat.blow_up(&[(0, 1)])?;
    lines.push(format!("after blowing up a point of T: labels {:?}, Q {:?}, K {:?}", blown.labels, blown.q, blown.k));
    let (chain, a) = fixtures::chain_lattice(0)?;
    let rep = chain.realizability(&a)?;
    lines.push(format!(
        "A² = {}, g = {:?}, A·F = {}, realizable {}",
        rep.self_intersection, rep.genus, rep.pairings[0].1, rep.realizable
    ));
    Ok(lines)
}

fn main() -> Result<(), DivisorError> {
    for line in run_example()? {
        println!("{line}");
    }
    Ok(())
}
