// Turn the triple point of three surfaces (plus `{z = 0}`) into six
// orthogonal double points.

use sympsurf::chart::{nice_pipeline, ChartError, GridSpec};
use sympsurf::suite::triple_arrangement;

pub fn run_example(resolution: usize) -> Result<Vec<String>, ChartError> {
    let (_, rep) = nice_pipeline(&triple_arrangement(), &GridSpec::with_resolution(resolution))?;
    let mut lines = vec![format!(
        "λ1 = {:.4e}, λ2 = {:.4e}, μ = {:.4}, shifts {:?}",
        rep.lambda_linearize, rep.lambda_antiholomorphic, rep.mu, rep.shifts
    )];
    if let Some(m) = &rep.model {
        lines.push(format!("complex-like model slopes {:?} on radius {:.4e}", m.slopes, m.radius));
    }
    for s in &rep.separations {
        lines.push(format!("separation eps = {:.4e} inside λ0 = {:.4e}", s.eps, s.lambda0));
    }
    for d in &rep.double_points {
        lines.push(format!(
            "double point {:?} at z = {:.3e}: local slope {:.4}, model residual {:.1e}, margin {:.4}",
            d.surfaces, d.point[0], d.local_slope, d.model_residual, d.margin
        ));
    }
    lines.push(format!(
        "prediction error {:.1e}, only double points {}, min margin {:.4}",
        rep.prediction_error, rep.only_double_points, rep.min_margin
    ));
    Ok(lines)
}

fn main() -> Result<(), ChartError> {
    for line in run_example(128)? {
        println!("{line}");
    }
    Ok(())
}
