//! A box state: the Fisher information of its density is unbounded, so the relation is
//! reported as divergent and the momentum spread keeps growing under refinement.

use exact_uncertainty::grid_state::{build_state, Grid1D, StateSpec};
use exact_uncertainty::numerics::Numerics;
use exact_uncertainty::relations::exact_ur_position;
use exact_uncertainty::Result;

pub fn run() -> Result<()> {
    let num = Numerics::default();
    for n in [512, 1024, 2048, 4096] {
        let grid = Grid1D::covering(-1.0, 2.0, n)?;
        let s = build_state(&StateSpec::Box { lower: 0.0, upper: 1.0 }, &grid, 1.0)?;
        let r = exact_ur_position(&s, &num);
        println!(
            "n={n:>5}: momentum spread {:>8.3}, fisher divergent {}, status {}",
            r.momentum.var_obs.sqrt(),
            r.fisher.divergent,
            r.exact.status
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
