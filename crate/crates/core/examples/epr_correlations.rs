//! The approximate EPR state: `FCov(X)·Cov(P_nc) = (ħ/2)²I`, minimum uncertainty
//! `Cov(X)·Cov(P) = (ħ/2)²I`, the correlation relation, and the collapse of particle 1's
//! classical momentum after measuring particle 2's momentum.

use exact_uncertainty::decomp::classical_momentum_field;
use exact_uncertainty::grid_state::{build_state_2d, condition_on_momentum, Grid1D, Grid2D, Particle, StateSpec2D};
use exact_uncertainty::numerics::Numerics;
use exact_uncertainty::relations::{correlation_relation_check, matrix_ur_check};
use exact_uncertainty::Result;

pub fn run() -> Result<()> {
    let (sigma, tau, a, p0) = (0.1, 10.0, 1.0, 2.0);
    let grid = Grid2D::square(Grid1D::covering(-26.75, 26.75, 512)?);
    let state = build_state_2d(&StateSpec2D::epr(sigma, tau, a, p0), &grid, 1.0)?;
    let num = Numerics::default();

    let m = matrix_ur_check(&state, &num, 1e-3)?;
    for c in &m.checks {
        println!("{c}");
    }
    println!("Cov(X)Cov(P) / (hbar/2)^2 = {:?}", m.heisenberg_product);

    let corr = correlation_relation_check(&state, &num, 1e-3)?;
    println!("{}", corr.check);
    println!("r(P_nc) = {:.6}, r_F(X) = {:.6}", corr.r_pearson_pnc, corr.r_fisher_x);

    for p in [0.0, 1.0, 2.0] {
        let one = condition_on_momentum(&state, Particle::Second, p)?;
        let field = classical_momentum_field(&one, &num.with_support_floor(1e-4));
        let expected = (sigma * sigma * p + tau * tau * (p0 - p)) / (sigma * sigma + tau * tau);
        let worst = field.on_support().map(|(_, v)| (v - expected).abs()).fold(0.0, f64::max);
        println!("P2 = {p}: particle 1 classical momentum {expected:.6}, worst deviation {worst:.2e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
