//! The position-momentum relation `δX·ΔP_nc = ħ/2` for a chirped, boosted Gaussian and
//! the real-wavefunction form `δX·ΔP = ħ/2` for oscillator eigenstates.
//!
//!     cargo run --example exact_relation

use exact_uncertainty::grid_state::{build_state, Grid1D, StateSpec};
use exact_uncertainty::numerics::Numerics;
use exact_uncertainty::relations::{exact_ur_conjugate, exact_ur_position};
use exact_uncertainty::Result;

pub fn run() -> Result<()> {
    let grid = Grid1D::covering(-20.0, 20.0, 4096)?;
    let num = Numerics::default();

    let spec = StateSpec::Gaussian { mean: 0.5, sigma: 1.1, momentum: 1.5, chirp: 0.25 };
    let state = build_state(&spec, &grid, 1.0)?;
    let r = exact_ur_position(&state, &num);
    println!("chirped gaussian");
    println!("  fisher length        {:.10}", r.fisher.delta);
    println!("  position spread      {:.10}", r.position_spread);
    println!("  momentum spread      {:.10}", r.momentum.var_obs.sqrt());
    println!("  nonclassical spread  {:.10}", r.momentum.nonclassical_spread());
    println!("  {}", r.exact);
    println!("  {}", r.heisenberg);
    println!("  {}", exact_ur_conjugate(&state, &num).exact);

    println!("oscillator eigenstates (classical momentum vanishes)");
    for n in 0..4 {
        let s = build_state(&StateSpec::harmonic(n), &grid, 1.0)?;
        let r = exact_ur_position(&s, &num);
        println!(
            "  n={n}: fisher length {:.6}, momentum spread {:.6}, product {:.8}",
            r.fisher.delta,
            r.momentum.var_obs.sqrt(),
            r.fisher.delta * r.momentum.var_obs.sqrt()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
