//! Classical momentum fields: the phase gradient of a superposition, variance
//! additivity, optimality of the classical estimate, and a curl-free 2D field.

use exact_uncertainty::decomp::{
    classical_momentum_field, estimator_error, max_discrete_curl, momentum_decomposition_stats, vector_classical_momentum,
    ClassicalField,
};
use exact_uncertainty::grid_state::{build_state, Grid1D, Grid2D, StateSpec};
use exact_uncertainty::numerics::Numerics;
use exact_uncertainty::random::StateSampler;
use exact_uncertainty::Result;
use num_complex::Complex64;

pub fn run() -> Result<()> {
    let grid = Grid1D::covering(-15.0, 15.0, 1024)?;
    let num = Numerics::default();
    let one = Complex64::new(1.0, 0.0);
    let spec = StateSpec::Superposition(vec![
        (one, StateSpec::Gaussian { mean: -2.0, sigma: 1.0, momentum: 1.0, chirp: 0.0 }),
        (0.7 * one, StateSpec::Gaussian { mean: 2.5, sigma: 0.8, momentum: -0.5, chirp: 0.1 }),
    ]);
    let state = build_state(&spec, &grid, 1.0)?;
    let field = classical_momentum_field(&state, &num);
    println!("classical momentum at a few positions:");
    for x in [-3.0, -1.0, 0.0, 1.0, 2.5] {
        if let Some(v) = field.value(grid.nearest(x)) {
            println!("  x = {x:>5.2}  P_cl = {v:>9.5}");
        }
    }

    let st = momentum_decomposition_stats(&state, &num);
    println!("variance: total {:.8} = classical {:.8} + nonclassical {:.8}", st.var_obs, st.var_cl, st.var_nc);

    let best = estimator_error(&state, &field, &num)?;
    let shifted = ClassicalField::with_values(&field, field.values().iter().map(|v| v + 0.2).collect())?;
    let worse = estimator_error(&state, &shifted, &num)?;
    println!("estimation error: classical field {best:.8}, shifted by 0.2 {worse:.8} (difference {:.8})", worse - best);

    let g2 = Grid2D::square(Grid1D::covering(-9.0, 9.0, 128)?);
    let entangled = StateSampler::new(4).entangled_state(&g2, 1.0)?;
    let curl = max_discrete_curl(&vector_classical_momentum(&entangled, &num));
    println!("largest discrete curl of the 2D classical momentum: {curl:.3e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
