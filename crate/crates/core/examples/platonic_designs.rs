//! The five Platonic solids as spherical designs: each verifies at its
//! strength and fails one degree higher.

use sphere_lecam::designs::{builtin_design, strength_defects, DEFAULT_TOL};

fn main() -> sphere_lecam::Result<()> {
    println!("{:<14} {:>3} {:>3} {:>12} {:>12}", "solid", "n", "t", "max A_l<=t", "A_{t+1}");
    for name in ["tetrahedron", "cube", "octahedron", "icosahedron", "dodecahedron"] {
        let design = builtin_design(name)?.verified(DEFAULT_TOL);
        let t = design.strength();
        let defects = strength_defects(design.points(), t + 1);
        let inside = defects[..t].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        println!("{name:<14} {:>3} {t:>3} {inside:>12.2e} {:>12.4}", design.len(), defects[t]);
        assert!(design.is_verified());
    }
    Ok(())
}
