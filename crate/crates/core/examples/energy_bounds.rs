//! Energy as nonclassical kinetic + classical kinetic + potential, the Fisher-length
//! lower bound, and the entropic ground-state estimates.

use exact_uncertainty::grid_state::{build_state, Grid1D, StateSpec};
use exact_uncertainty::numerics::Numerics;
use exact_uncertainty::relations::{energy_decomposition, entropic_bound_estimates, Potential};
use exact_uncertainty::Result;

pub fn run() -> Result<()> {
    let grid = Grid1D::covering(-20.0, 20.0, 4096)?;
    let num = Numerics::default();
    let omega = 1.0;
    let states = [
        ("ground state", StateSpec::harmonic(0)),
        ("second excited", StateSpec::harmonic(2)),
        ("displaced boosted gaussian", StateSpec::Gaussian { mean: 1.0, sigma: 0.6, momentum: 0.8, chirp: 0.2 }),
    ];
    for (name, spec) in states {
        let s = build_state(&spec, &grid, 1.0)?;
        let e = energy_decomposition(&s, &Potential::Harmonic { omega }, 1.0, &num)?;
        println!(
            "{name}: E = {:.8} = {:.8} (nonclassical) + {:.8} (classical) + {:.8} (potential); bound {:.8}",
            e.direct_total, e.nonclassical_kinetic, e.classical_kinetic, e.potential, e.lower_bound
        );
    }
    let est = entropic_bound_estimates(1.0, 1.0, omega, 1.0);
    for c in est.all() {
        println!("{c}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
