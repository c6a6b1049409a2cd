//! Entropy production under heat flow: `dS/dt = γ/δX²`.

use exact_uncertainty::fisher_stats::{diffusion_entropy_rate_check, DiffusionConfig};
use exact_uncertainty::grid_state::{Grid1D, GridDistribution};
use exact_uncertainty::numerics::Numerics;
use exact_uncertainty::Result;

pub fn run() -> Result<()> {
    let grid = Grid1D::covering(-14.0, 14.0, 560)?;
    let start = grid
        .points()
        .iter()
        .map(|x| (-(x - 2.0).powi(2) / 0.5).exp() + 0.6 * (-(x + 2.5).powi(2) / 0.8).exp())
        .collect();
    let initial = GridDistribution::normalized(grid, start, false)?;
    let cfg = DiffusionConfig { gamma: 0.1, drift: 0.0, dt: 0.005, steps: 1000, checkpoints: 10 };
    let report = diffusion_entropy_rate_check(&initial, &cfg, &Numerics::default())?;
    println!("{:>8} {:>12} {:>14} {:>14} {:>10}", "t", "entropy", "dS/dt", "gamma/dX^2", "mismatch");
    for c in &report.checkpoints {
        println!(
            "{:>8.3} {:>12.8} {:>14.8} {:>14.8} {:>10.2e}",
            c.time, c.entropy, c.measured_rate, c.predicted_rate, c.relative_mismatch
        );
    }
    println!("largest relative mismatch {:.3e}", report.max_relative_mismatch);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
