//! Δ₁ and Δ₂ on a single design for a Sobolev and a Besov ball.

use sphere_lecam::designs::resolve_design;
use sphere_lecam::lecam::{besov_bound, besov_system, sobolev_bound};
use sphere_lecam::spaces::SmoothnessSpec;

fn main() -> sphere_lecam::Result<()> {
    let design = resolve_design("sf024.00314", 2, None)?.require_verified(1e-10)?;
    for sigma in [0.5, 1.0, 2.0] {
        let row = sobolev_bound(&design, 2.0, 1.0, sigma, 20, 1)?;
        println!("Sobolev s=2, σ={sigma}: Δ₁ = {:.4}, Δ₂ = {:.4}, total {:.4}", row.delta1, row.delta2, row.total);
    }
    let spec = SmoothnessSpec::new(2.0, 2.0, 2.0, 1.0, 2)?;
    let system = besov_system(2, 3)?;
    let row = besov_bound(&design, 3, &spec, &system, 1.0, 20, 1)?;
    println!("Besov s=2 r=2, J=3, σ=1: Δ₁ = {:.4}, Δ₂ = {:.4}, total {:.4}", row.delta1, row.delta2, row.total);
    Ok(())
}
