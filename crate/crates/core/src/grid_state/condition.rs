//! Collapse of a two-particle state after measuring one particle.

use num_complex::Complex64;

use super::transform::direct_sum;
use super::{GridState, GridState2D};
use crate::error::{Error, Result};

/// Which particle of a two-particle state is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Particle {
    First,
    Second,
}

impl Particle {
    fn other(self) -> Self {
        match self {
            Self::First => Self::Second,
            Self::Second => Self::First,
        }
    }
}

fn slice(s: &GridState2D, fixed: Particle, index: usize) -> Vec<Complex64> {
    let g = s.grid();
    match fixed {
        Particle::First => (0..g.second.len()).map(|j| s.at(index, j)).collect(),
        Particle::Second => (0..g.first.len()).map(|i| s.at(i, index)).collect(),
    }
}

fn renormalized(s: &GridState2D, remaining: Particle, amps: Vec<Complex64>) -> Result<GridState> {
    let grid = *s.grid().axis(match remaining {
        Particle::First => 0,
        Particle::Second => 1,
    });
    let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.dx();
    if !(norm > 1e-12) {
        return Err(Error::ZeroProbability(norm));
    }
    GridState::from_amplitudes(grid, amps, s.hbar())
}

/// State of the other particle after `particle` is found at the grid point `x_value`.
pub fn condition_on_position(s: &GridState2D, particle: Particle, x_value: f64) -> Result<GridState> {
    let axis = match particle {
        Particle::First => &s.grid().first,
        Particle::Second => &s.grid().second,
    };
    let index = axis.index_of(x_value).ok_or(Error::OffGrid { value: x_value })?;
    renormalized(s, particle.other(), slice(s, particle, index))
}

/// State of the other particle after `particle` is found with momentum `p_value`.
///
/// Only the measured particle is transformed, by direct summation, so `p_value` need
/// not lie on the discrete momentum grid.
pub fn condition_on_momentum(s: &GridState2D, particle: Particle, p_value: f64) -> Result<GridState> {
    let g = *s.grid();
    let hbar = s.hbar();
    let amps: Vec<Complex64> = match particle {
        Particle::Second => (0..g.first.len())
            .map(|i| direct_sum(&g.second, &slice(s, Particle::First, i), p_value, hbar))
            .collect(),
        Particle::First => (0..g.second.len())
            .map(|j| direct_sum(&g.first, &slice(s, Particle::Second, j), p_value, hbar))
            .collect(),
    };
    renormalized(s, particle.other(), amps)
}
