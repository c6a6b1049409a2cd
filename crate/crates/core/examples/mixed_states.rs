//! Mixed states: `δX·ΔP_nc ≥ ħ/2` with the identity behind it, and saturation for a pure
//! state written as a density matrix.

use exact_uncertainty::grid_state::{build_state, Grid1D, GridDensity, StateSpec};
use exact_uncertainty::numerics::Numerics;
use exact_uncertainty::relations::mixed_ur_check;
use exact_uncertainty::Result;

pub fn run() -> Result<()> {
    let grid = Grid1D::covering(-12.0, 12.0, 384)?;
    let num = Numerics::spectral();
    let a = build_state(&StateSpec::Gaussian { mean: -1.5, sigma: 0.9, momentum: 1.0, chirp: 0.1 }, &grid, 1.0)?;
    let b = build_state(&StateSpec::Gaussian { mean: 1.0, sigma: 1.3, momentum: -0.5, chirp: 0.0 }, &grid, 1.0)?;

    for w in [1.0, 0.8, 0.5] {
        let rho = GridDensity::from_mixture(&[(w, a.clone()), (1.0 - w, b.clone())])?;
        let m = mixed_ur_check(&rho, &num);
        println!("weight {w}: purity {:.4}", rho.purity());
        println!("  {}", m.inequality);
        println!("  {}", m.identity);
        println!("  {}", m.bound);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
