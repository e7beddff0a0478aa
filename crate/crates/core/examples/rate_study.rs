//! Decay of the Le Cam bound with the design size, Sobolev ball s = 2 on S².

use sphere_lecam::designs::resolve_design;
use sphere_lecam::lecam::sobolev_rate_study;

fn main() -> sphere_lecam::Result<()> {
    let designs = ["sf008.00042", "sf012.00086", "sf016.00146", "sf024.00314", "sf032.00546"]
        .iter()
        .map(|name| resolve_design(name, 2, None)?.require_verified(1e-10))
        .collect::<sphere_lecam::Result<Vec<_>>>()?;
    let study = sobolev_rate_study(&designs, 2.0, 1.0, 1.0, 20, 7)?;
    println!("{:>5} {:>3} {:>12} {:>12} {:>8}", "n", "L", "pre-Φ", "envelope", "Δ₁+Δ₂");
    for row in &study.rows {
        println!("{:>5} {:>3} {:>12.5} {:>12.5} {:>8.4}", row.n, row.resolution, row.pre_phi, row.envelope, row.total);
    }
    println!("fitted slope {:.3}, theory {:.3}", study.slope, study.expected_slope);
    Ok(())
}
