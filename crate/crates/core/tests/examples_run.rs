#![allow(dead_code)]

mod planes {
    include!("../examples/planes.rs");
}
mod thm27_pipeline {
    include!("../examples/thm27_pipeline.rs");
}
mod nice_pipeline {
    include!("../examples/nice_pipeline.rs");
}
mod node_resolution {
    include!("../examples/node_resolution.rs");
}
mod kahler_model {
    include!("../examples/kahler_model.rs");
}
mod divisor_arithmetic {
    include!("../examples/divisor_arithmetic.rs");
}
mod seifert_homology {
    include!("../examples/seifert_homology.rs");
}
mod scenario_runner {
    include!("../examples/scenario_runner.rs");
}

#[test]
fn planes_example() {
    let lines = planes::run_example();
    assert!(lines.iter().filter(|l| l.contains("oracle agrees: true")).count() == 4);
}

#[test]
fn thm27_example() {
    let lines = thm27_pipeline::run_example(64).unwrap();
    assert_eq!(lines.iter().filter(|l| l.contains("1 point(s)")).count(), 3);
}

#[test]
fn nice_example() {
    let lines = nice_pipeline::run_example(64).unwrap();
    assert_eq!(lines.iter().filter(|l| l.starts_with("double point")).count(), 6);
    assert!(lines.last().unwrap().contains("only double points true"));
}

#[test]
fn node_example() {
    let lines = node_resolution::run_example(64).unwrap();
    assert!(lines[0].contains("χ 2 -> 0"));
}

#[test]
fn kahler_example() {
    let lines = kahler_model::run_example().unwrap();
    assert!(lines[0].contains("type (1,1) true"));
}

#[test]
fn divisor_example() {
    let lines = divisor_arithmetic::run_example().unwrap();
    assert!(lines.iter().any(|l| l == "T1² = 18, g = Some(10), disjoint from: D"));
    assert!(lines.iter().any(|l| l == "T_3: square 162, genus 82"));
}

#[test]
fn seifert_example() {
    let lines = seifert_homology::run_example().unwrap();
    assert_eq!(lines[0], "N = 1, p = 5: Z^2 + Z_5^20 + Z_25^20 + Z_125^20");
    assert!(lines[3].contains("GcdViolation"));
}

#[test]
fn scenario_example() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/t1.json");
    let text = scenario_runner::run_example(&path).unwrap();
    assert!(text.contains("T1² = 18, g = 10, disjoint from: D"));
    assert!(text.ends_with("verdict: pass\n"));
}
