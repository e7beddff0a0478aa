//! Empirical Marcinkiewicz–Zygmund constants of a design for polynomials of
//! twice the degree whose squares it integrates exactly.

use sphere_lecam::designs::{mz_ratio, resolve_design};

fn main() -> sphere_lecam::Result<()> {
    let rule = resolve_design("sf020.00222", 2, None)?.require_verified(1e-10)?.rule();
    for p in [1.0, 2.0, 4.0] {
        for l in [10, 15, 20] {
            let r = mz_ratio(&rule, 10, l, p, 100, 3)?;
            println!("p = {p}, L = {l:>2}: max ratio {r:.4}");
        }
    }
    Ok(())
}
