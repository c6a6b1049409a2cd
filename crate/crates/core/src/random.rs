//! Seeded generators for test and scenario states.
//!
//! All draws come from [`ChaCha8Rng`] seeded with a `u64`, so a seed reproduces the same
//! states on every platform.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::finite_dim::{FiniteObservable, FiniteState};
use crate::grid_state::{Grid1D, Grid2D, GridDensity, GridState, GridState2D, StateSpec};

/// Source of reproducible random states.
#[derive(Debug, Clone)]
pub struct StateSampler {
    rng: ChaCha8Rng,
}

impl StateSampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Chirped, boosted Gaussian with mean in `[-2, 2]`, spread in `[0.5, 2]`, momentum in
    /// `[-3, 3]` and chirp in `[-0.3, 0.3]`.
    pub fn gaussian_spec(&mut self) -> StateSpec {
        StateSpec::Gaussian {
            mean: self.uniform(-2.0, 2.0),
            sigma: self.uniform(0.5, 2.0),
            momentum: self.uniform(-3.0, 3.0),
            chirp: self.uniform(-0.3, 0.3),
        }
    }

    /// Superposition of `terms` chirped Gaussians with random complex weights.
    pub fn gaussian_superposition(&mut self, terms: usize) -> StateSpec {
        let parts = (0..terms)
            .map(|_| {
                let weight = Complex64::from_polar(self.uniform(0.3, 1.0), self.uniform(0.0, std::f64::consts::TAU));
                let spec = StateSpec::Gaussian {
                    mean: self.uniform(-3.0, 3.0),
                    sigma: self.uniform(0.6, 1.5),
                    momentum: self.uniform(-2.0, 2.0),
                    chirp: self.uniform(-0.2, 0.2),
                };
                (weight, spec)
            })
            .collect();
        StateSpec::Superposition(parts)
    }

    /// Nodeless smooth state `exp(L(y) + iθ(y)/ħ)`, `y = x - c`, with log-concave
    /// `L = -y²/4s² - b4·y⁴ + b1·sin y` and `θ = k1·y + k2·y² + k3·cos y`.
    pub fn smooth_state(&mut self, grid: &Grid1D, hbar: f64) -> Result<GridState> {
        let c = self.uniform(-1.5, 1.5);
        let s = self.uniform(0.6, 1.2);
        let b4 = self.uniform(0.0, 0.01);
        let b1 = self.uniform(-0.2, 0.2);
        let (k1, k2, k3) = (self.uniform(-2.0, 2.0), self.uniform(-0.2, 0.2), self.uniform(-0.5, 0.5));
        let amps = grid
            .points()
            .iter()
            .map(|x| {
                let y = x - c;
                let log_amp = -y * y / (4.0 * s * s) - b4 * y.powi(4) + b1 * y.sin();
                Complex64::from_polar(log_amp.exp(), (k1 * y + k2 * y * y + k3 * y.cos()) / hbar)
            })
            .collect();
        GridState::from_amplitudes(*grid, amps, hbar)
    }

    /// Mixture of two random Gaussian superpositions with the first weight in `[0.2, 0.8]`.
    pub fn rank_two_mixture(&mut self, grid: &Grid1D, hbar: f64) -> Result<GridDensity> {
        let w = self.uniform(0.2, 0.8);
        let terms_a = self.rng.random_range(1..=2);
        let terms_b = self.rng.random_range(1..=2);
        let a = crate::grid_state::build_state(&self.gaussian_superposition(terms_a), grid, hbar)?;
        let b = crate::grid_state::build_state(&self.gaussian_superposition(terms_b), grid, hbar)?;
        GridDensity::from_mixture(&[(w, a), (1.0 - w, b)])
    }

    /// Nodeless, non-Gaussian entangled two-particle state: a correlated Gaussian envelope
    /// with a quartic term in `x1 + x2` and the phase `κ·x1·x2 + q1·x1 + q2·x2 + c·sin x1`.
    pub fn entangled_state(&mut self, grid: &Grid2D, hbar: f64) -> Result<GridState2D> {
        let s1 = self.uniform(0.7, 1.2);
        let s2 = self.uniform(0.7, 1.2);
        let rho = self.uniform(-0.6, 0.6);
        let quartic = self.uniform(0.005, 0.03);
        let kappa = self.uniform(-0.4, 0.4);
        let (q1, q2) = (self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0));
        let wobble = self.uniform(-0.4, 0.4);
        entangled_from(grid, hbar, [s1, s2, rho, quartic, kappa, q1, q2, wobble])
    }

    /// Random pure state of dimension `d` (complex Gaussian components).
    pub fn finite_pure(&mut self, d: usize) -> Vec<Complex64> {
        (0..d).map(|_| Complex64::new(self.normal(), self.normal())).collect()
    }

    /// Random mixture of `rank` random pure states with random weights.
    pub fn finite_state(&mut self, d: usize, rank: usize) -> Result<FiniteState> {
        let parts: Vec<(f64, Vec<Complex64>)> = (0..rank.max(1)).map(|_| (self.uniform(0.05, 1.0), self.finite_pure(d))).collect();
        FiniteState::mixture(&parts)
    }

    /// Random Hermitian observable `(G + G†)/2` with complex Gaussian `G`.
    pub fn hermitian(&mut self, d: usize) -> Result<FiniteObservable> {
        let g = DMatrix::from_fn(d, d, |_, _| Complex64::new(self.normal(), self.normal()));
        FiniteObservable::new((&g + g.adjoint()).unscale(2.0))
    }
}

/// The entangled family of [`StateSampler::entangled_state`] for explicit parameters
/// `[s1, s2, correlation, quartic, kappa, q1, q2, wobble]`.
pub fn entangled_from(grid: &Grid2D, hbar: f64, params: [f64; 8]) -> Result<GridState2D> {
    let [s1, s2, rho, quartic, kappa, q1, q2, wobble] = params;
    let (g1, g2) = (grid.axis(0), grid.axis(1));
    let norm = 1.0 / (1.0 - rho * rho);
    let mut amps = Vec::with_capacity(grid.len());
    for i in 0..g1.len() {
        let x1 = g1.x(i);
        for j in 0..g2.len() {
            let x2 = g2.x(j);
            let (u, v) = (x1 / s1, x2 / s2);
            let quad = norm * (u * u - 2.0 * rho * u * v + v * v);
            let log_amp = -quad / 4.0 - quartic * (x1 + x2).powi(4);
            let phase = (kappa * x1 * x2 + q1 * x1 + q2 * x2 + wobble * x1.sin()) / hbar;
            amps.push(Complex64::from_polar(log_amp.exp(), phase));
        }
    }
    GridState2D::from_amplitudes(*grid, amps, hbar)
}
