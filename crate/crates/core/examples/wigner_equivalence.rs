//! The classical momentum as the momentum average of a Wigner slice, checked against
//! the phase gradient, with marginals and purity.

use exact_uncertainty::grid_state::{build_state, Grid1D, StateSpec};
use exact_uncertainty::wigner::{wigner_equivalence, wigner_function};
use exact_uncertainty::Result;
use num_complex::Complex64;

pub fn run() -> Result<()> {
    let grid = Grid1D::covering(-12.0, 12.0, 512)?;
    let one = Complex64::new(1.0, 0.0);
    let cat = StateSpec::Superposition(vec![
        (one, StateSpec::Gaussian { mean: -2.5, sigma: 0.7, momentum: 0.0, chirp: 0.0 }),
        (one, StateSpec::Gaussian { mean: 2.5, sigma: 0.7, momentum: 0.0, chirp: 0.0 }),
    ]);
    let chirped = StateSpec::Gaussian { mean: 0.3, sigma: 1.0, momentum: 1.2, chirp: 0.2 };
    for (name, spec) in [("chirped gaussian", chirped), ("cat state", cat)] {
        let s = build_state(&spec, &grid, 1.0)?;
        let w = wigner_function(&s);
        let e = wigner_equivalence(&s)?;
        println!("{name}:");
        println!("  min W = {:.5}, integral = {:.10}", w.min(), w.total());
        println!("  field deviation {:.3e} on {} cells", e.field_deviation, e.support_cells);
        println!("  marginals {:.3e} / {:.3e}, purity {:.10}", e.marginals.position, e.marginals.momentum, e.purity);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
