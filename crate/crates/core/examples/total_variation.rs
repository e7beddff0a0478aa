//! Total variation between two Gaussians with common covariance.

use sphere_lecam::experiments::gaussian_tv_bound;

fn main() -> sphere_lecam::Result<()> {
    let noise = 0.1;
    for dist in [0.0, 0.01, 0.05, 0.1, 0.2, 0.5, 1.0] {
        println!("‖μ − μ′‖ = {dist:<5} σ̃ = {noise}: TV = {:.6}", gaussian_tv_bound(dist, noise)?);
    }
    Ok(())
}
