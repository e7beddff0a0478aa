//! Bundled design files: parse, check the point count against the name,
//! and verify the claimed strength.

use std::time::Instant;

use sphere_lecam::designs::{bundled_design_names, resolve_design, DEFAULT_TOL};

fn main() -> sphere_lecam::Result<()> {
    for name in bundled_design_names() {
        let start = Instant::now();
        let design = resolve_design(name, 2, None)?.verified(DEFAULT_TOL);
        let check = design.check().expect("verified() records the check");
        println!(
            "{name:<12} n = {:>5}  t = {:>3}  verified = {:<5}  max defect = {:.1e}  ({:.2?})",
            design.len(),
            design.strength(),
            check.verified,
            check.max_defect,
            start.elapsed()
        );
    }
    Ok(())
}
