//! Sobolev and Besov norms, the embedding check, and tail energy decay.

use sphere_lecam::needlets::{build_filter, needlet_coeffs_from_harmonics, NeedletSystem};
use sphere_lecam::spaces::{
    besov_embedding_check, besov_norm, make_sobolev_function, sobolev_norm, tail_energy, Profile, SmoothnessSpec,
};

fn main() -> sphere_lecam::Result<()> {
    let f = make_sobolev_function(2, 2.0, 1.0, 15, 21, Profile::Random)?;
    println!("‖f‖_H² = {:.6}", sobolev_norm(&f, 2.0));
    for l in [2, 4, 8, 12] {
        println!("‖f − Π_{l} f‖² = {:.3e}", tail_energy(&f, l));
    }
    let sys = NeedletSystem::standard(2, 5)?;
    let beta = needlet_coeffs_from_harmonics(&f, &sys, &build_filter(), 5)?;
    for r in [2.0, 4.0, 8.0] {
        let spec = SmoothnessSpec::new(2.0, r, 2.0, 1.0, 2)?;
        let check = besov_embedding_check(&beta, 2.0, r, 2.0, 2)?;
        println!(
            "r = {r}: ‖β‖_B = {:.6}; embedding {:.4} ≤ {:.2} × {:.4}: {}",
            besov_norm(&beta, &spec),
            check.lhs,
            check.constant,
            check.rhs,
            check.holds
        );
    }
    Ok(())
}
