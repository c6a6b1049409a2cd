//! Phase and photon number: `δΦ·ΔN_nc = 1/2` for number superpositions, an
//! indeterminate number eigenstate, and a mixture.

use exact_uncertainty::decomp::number_decomposition_stats;
use exact_uncertainty::grid_state::NumberState;
use exact_uncertainty::numerics::Numerics;
use exact_uncertainty::relations::{exact_ur_phase_number, phase_number_mixed_check};
use exact_uncertainty::Result;
use num_complex::Complex64;

pub fn run() -> Result<()> {
    let num = Numerics::default();
    let one = Complex64::new(1.0, 0.0);
    let states = [
        ("(|0>+|1>)/sqrt2", NumberState::photon(&[(0, one), (1, one)])?),
        ("(|0>+|2>)/sqrt2", NumberState::photon(&[(0, one), (2, one)])?),
        ("(|1>+2i|3>)/sqrt5", NumberState::photon(&[(1, one), (3, Complex64::new(0.0, 2.0))])?),
        ("|3>", NumberState::fock(3)?),
    ];
    for (name, s) in &states {
        let st = number_decomposition_stats(s, 256, &num)?;
        println!("{name}: number variance {:.6}, nonclassical {:.6}", st.var_obs, st.var_nc);
        println!("  {}", exact_ur_phase_number(s, 256, &num)?);
    }
    let mix = [(0.5, states[0].1.clone()), (0.5, states[2].1.clone())];
    println!("mixture: {}", phase_number_mixed_check(&mix, 256, &num)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
