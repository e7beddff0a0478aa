//! Draws from the regression model on a design and from the truncated
//! white-noise sequence model, written as CSV to standard output.

use sphere_lecam::designs::resolve_design;
use sphere_lecam::experiments::{regression_from_mean, replicate, white_noise_replication, write_replications_csv};
use sphere_lecam::spaces::{make_sobolev_function, Profile};

fn main() -> sphere_lecam::Result<()> {
    let design = resolve_design("icosahedron", 2, None)?.require_verified(1e-10)?;
    let f = make_sobolev_function(2, 2.0, 1.0, 4, 1, Profile::Random)?;
    let mean = design.points().values(&f);
    let z = replicate(3, |r| Ok(regression_from_mean(&mean, 0.5, 42, r)?.z))?;
    write_replications_csv(std::io::stdout(), "z", &z)?;
    let y = replicate(3, |r| Ok(white_noise_replication(&f, 0.5, design.len(), f.len() + 4, 42, r)?.y))?;
    write_replications_csv(std::io::stdout(), "y", &y)?;
    Ok(())
}
