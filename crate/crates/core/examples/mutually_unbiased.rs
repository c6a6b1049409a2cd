//! Finite dimensions: collision lengths in mutually unbiased bases and the generalized
//! relation between two observables.

use exact_uncertainty::finite_dim::{generalized_ur, ivanovic_check, mub_bases, FiniteObservable, FiniteState};
use exact_uncertainty::random::StateSampler;
use exact_uncertainty::Result;
use num_complex::Complex64;

pub fn run() -> Result<()> {
    let mut sampler = StateSampler::new(9);
    for d in [2, 3, 5] {
        let set = mub_bases(d)?;
        let pure = FiniteState::pure(&sampler.finite_pure(d))?;
        let mixed = sampler.finite_state(d, 2)?;
        for (name, rho) in [("pure", pure), ("rank 2", mixed)] {
            let r = ivanovic_check(&rho, &set)?;
            println!("d={d} {name}: purity {:.6}, lengths {:?}", r.purity, r.lengths.iter().map(|l| format!("{l:.4}")).collect::<Vec<_>>());
            println!("  {}", r.equality);
        }
    }

    let s = 0.5f64.sqrt();
    let rho = FiniteState::pure(&[Complex64::new(s, 0.0), Complex64::new(0.0, s)])?;
    let q = generalized_ur(&FiniteObservable::pauli_z(), &FiniteObservable::pauli_x(), &rho, 1.0)?;
    println!("qubit: delta = {}, nonclassical spread = {}", q.delta, q.component.nonclassical_spread());
    println!("  {}", q.check);

    let a = sampler.hermitian(3)?;
    let b = sampler.hermitian(3)?;
    let psi = FiniteState::pure(&sampler.finite_pure(3))?;
    println!("random qutrit: {}", generalized_ur(&a, &b, &psi, 1.0)?.check);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
