// Smooth the node `{zw = 0}` into an annulus and watch the C¹ distance
// to `zw` halve with `ε`.

use num_complex::Complex64;
use sympsurf::chart::{
    node_retraction, resolve_node, retraction_seam_jump, smoothing_c1_distance, ChartError,
    GridSpec, NodeResolution, RetractionChart,
};

pub fn run_example(resolution: usize) -> Result<Vec<String>, ChartError> {
    let grid = GridSpec::with_resolution(resolution);
    let res = NodeResolution {
        epsilon: Complex64::new(0.01, 0.0),
        lambda0: 0.5,
    };
    let rep = resolve_node(&res, &grid)?;
    let mut lines = vec![format!(
        "ε = {}, min singular value {:.4e}, margin {:.4e}, χ {} -> {}",
        rep.epsilon, rep.min_singular_value, rep.min_margin, rep.euler_before, rep.euler_after
    )];
    let mut prev = None;
    for k in 0..5 {
        let eps = res.epsilon / 2f64.powi(k);
        let d = smoothing_c1_distance(eps, res.lambda0, &grid);
        let ratio = prev.map(|p: f64| p / d);
        lines.push(format!("|ε| = {:.4e}: C¹ distance {d:.6e}, ratio {ratio:?}", eps.norm()));
        prev = Some(d);
    }
    let chart = RetractionChart { eta: 0.1 };
    let p = node_retraction(&chart, Complex64::new(0.05, 0.0), Complex64::new(0.02, 0.01))?;
    lines.push(format!("retraction of (0.05, 0.02+0.01i) = {p:?}"));
    lines.push(format!("retraction seam jump {:.1e}", retraction_seam_jump(&chart, 1e-3)));
    Ok(lines)
}

fn main() -> Result<(), ChartError> {
    for line in run_example(128)? {
        println!("{line}");
    }
    Ok(())
}
