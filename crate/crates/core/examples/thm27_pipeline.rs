// Steps one and two on three surfaces with quadratic residuals: cut off
// the residuals, then the antiholomorphic parts, and verify the result.

use sympsurf::chart::{
    arrangement_constants, linearize_step, locate_intersections, remove_antiholomorphic_step,
    verify::surface_min_margin, ChartError, GridSpec, Region,
};
use sympsurf::suite::triple_arrangement;

pub fn run_example(resolution: usize) -> Result<Vec<String>, ChartError> {
    let arr = triple_arrangement();
    let grid = GridSpec::with_resolution(resolution);
    let k = arrangement_constants(&arr)?;
    let (lin, lambda1) = linearize_step(&arr, &grid)?;
    let (out, lambda2, mu) = remove_antiholomorphic_step(&lin, &grid)?;
    let mut lines = vec![format!(
        "C = {}, M = {}, eps0 = {}; λ1 = {lambda1:.6e}, λ2 = {lambda2:.6e}, μ = {mu:.6}",
        k.c, k.m, k.eps0
    )];
    for (j, s) in out.surfaces.iter().enumerate() {
        lines.push(format!(
            "S{}: germ w = ({}) z + ({}) z̄, linear for |z| <= {:.4e}, min margin {:.4}",
            j + 1,
            s.germ().a,
            s.germ().b,
            s.linear_radius(),
            surface_min_margin(s, &grid)
        ));
    }
    for i in 0..out.surfaces.len() {
        for j in i + 1..out.surfaces.len() {
            let pts = locate_intersections(&out.surfaces[i], &out.surfaces[j], &Region::disc(arr.r0), &grid)?;
            lines.push(format!("S{}∩S{}: {} point(s) {:?}", i + 1, j + 1, pts.len(), pts.iter().map(|p| p.z).collect::<Vec<_>>()));
        }
    }
    Ok(lines)
}

fn main() -> Result<(), ChartError> {
    for line in run_example(128)? {
        println!("{line}");
    }
    Ok(())
}
