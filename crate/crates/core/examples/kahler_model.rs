// The form `ω_L` on a Hermitian line bundle chart: taming near the zero
// section, closedness, and the flat gluing moves.

use num_complex::Complex64;
use sympsurf::kahler::{
    exterior_derivative_max, gluing_compatibility, omega_l_local, taming_radius, transition,
    ChartGrid, FiberMetric, KahlerError, MetricChart,
};

pub fn run_example() -> Result<Vec<String>, KahlerError> {
    let mut lines = Vec::new();
    let chart = MetricChart::new(FiberMetric::ExpNorm2 { k: 1.0 }, 0.25);
    let f = omega_l_local(&chart, Complex64::new(0.1, 0.05), Complex64::new(0.2, 0.0))?;
    lines.push(format!("coefficients at (0.1+0.05i, 0.2): type (1,1) {}, real up to {:.1e}", f.is_type_11(), f.realness_defect()));
    let grid = ChartGrid { z_radius: 0.25, w_radius: 0.25, n: 8 };
    let coarse = exterior_derivative_max(&chart, &grid, 1e-3)?;
    let fine = exterior_derivative_max(&chart, &grid, 5e-4)?;
    lines.push(format!("max |dω|: {coarse:.3e} at step 1e-3, {fine:.3e} at 5e-4 (ratio {:.3})", coarse / fine));
    let radii: Vec<f64> = (0..=10).map(|i| f64::from(i) * 0.1).collect();
    for h in [FiberMetric::Const { c: 1.0 }, FiberMetric::ExpNorm2 { k: -5.0 }, FiberMetric::Poly { coeffs: vec![1.0, 1.0] }] {
        let rep = taming_radius(&MetricChart::new(h.clone(), 0.5), &radii, 6, 1e-3)?;
        lines.push(format!("{h:?}: tamed up to |w| = {:?}", rep.tamed_up_to));
    }
    let g = gluing_compatibility(&transition(Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)), 1e-12)?;
    lines.push(format!("transition defects: ω0 {:.1e}, J0 {:.1e}", g.omega_defect, g.j_defect));
    Ok(lines)
}

fn main() -> Result<(), KahlerError> {
    for line in run_example()? {
        println!("{line}");
    }
    Ok(())
}
