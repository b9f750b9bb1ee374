// `H_2` of Seifert bundles, including the groups of the N = 1 and N = 2
// constructions.

use std::collections::BTreeMap;

use sympsurf::divisor::{seifert_h2, theorem11_group, DivisorError, IsotropyDatum, SeifertInput};

pub fn run_example() -> Result<Vec<String>, DivisorError> {
    let mut lines = Vec::new();
    let g = theorem11_group(1, &BTreeMap::from([((1, 1), 5)]))?;
    lines.push(format!("N = 1, p = 5: {g}"));
    let primes = BTreeMap::from([((1, 1), 5), ((1, 2), 7), ((2, 1), 11), ((2, 2), 13)]);
    let g = theorem11_group(2, &primes)?;
    lines.push(format!("N = 2: {g} ({} cyclic factors)", g.torsion_rank()));
    let input = SeifertInput {
        b2x: 4,
        data: vec![IsotropyDatum { m: 6, g: 1 }, IsotropyDatum { m: 5, g: 2 }],
        adjacency: Some(vec![vec![false, true], vec![true, false]]),
    };
    lines.push(format!("b2X = 4, (6, 1), (5, 2): {}", seifert_h2(&input)?));
    let clash = SeifertInput {
        data: vec![IsotropyDatum { m: 6, g: 1 }, IsotropyDatum { m: 4, g: 2 }],
        ..input
    };
    lines.push(format!("(6, 1) meeting (4, 2): {:?}", seifert_h2(&clash)));
    Ok(lines)
}

fn main() -> Result<(), DivisorError> {
    for line in run_example()? {
        println!("{line}");
    }
    Ok(())
}
