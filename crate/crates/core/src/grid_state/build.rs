use num_complex::Complex64;

use super::{Grid1D, Grid2D, GridState, GridState2D};
use crate::error::{Error, Result};

/// Number of standard deviations a state must fit inside the grid on each side.
const EXTENT_SIGMAS: f64 = 6.0;
/// Margin for the EPR state, whose momentum content wraps around on grids that are too wide.
const EPR_EXTENT_SIGMAS: f64 = 5.0;

/// Analytic 1D state descriptors.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// `exp(-(x-μ)²/4σ² + i p0 x/ħ + i α (x-μ)²/ħ)`; `σ` is the position spread.
    Gaussian { mean: f64, sigma: f64, momentum: f64, chirp: f64 },
    /// Oscillator eigenfunction of `P²/2m + mω²X²/2`.
    HarmonicEigen { n: usize, mass: f64, omega: f64 },
    /// Uniform amplitude on `[lower, upper]`.
    Box { lower: f64, upper: f64 },
    /// Weighted sum of other descriptors.
    Superposition(Vec<(Complex64, StateSpec)>),
    /// Raw samples, one per cell.
    Samples(Vec<Complex64>),
}

impl StateSpec {
    pub fn gaussian(mean: f64, sigma: f64) -> Self {
        Self::Gaussian { mean, sigma, momentum: 0.0, chirp: 0.0 }
    }

    pub fn harmonic(n: usize) -> Self {
        Self::HarmonicEigen { n, mass: 1.0, omega: 1.0 }
    }

    /// Interval the state must fit into, or `None` when it is not analytic.
    fn extent(&self, hbar: f64) -> Option<(f64, f64)> {
        match self {
            Self::Gaussian { mean, sigma, .. } => {
                Some((mean - EXTENT_SIGMAS * sigma, mean + EXTENT_SIGMAS * sigma))
            }
            Self::HarmonicEigen { n, mass, omega } => {
                let s = (hbar * (*n as f64 + 0.5) / (mass * omega)).sqrt();
                Some((-EXTENT_SIGMAS * s, EXTENT_SIGMAS * s))
            }
            Self::Box { lower, upper } => Some((*lower, *upper)),
            Self::Superposition(terms) => terms.iter().try_fold((f64::INFINITY, f64::NEG_INFINITY), |acc, (_, s)| {
                s.extent(hbar).map(|(a, b)| (acc.0.min(a), acc.1.max(b)))
            }),
            Self::Samples(_) => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match self {
            Self::Gaussian { mean, sigma, momentum, chirp } => {
                if !(*sigma > 0.0) || ![mean, momentum, chirp].iter().all(|v| v.is_finite()) {
                    return bad(format!("gaussian needs sigma > 0 and finite parameters, got sigma = {sigma}"));
                }
            }
            Self::HarmonicEigen { mass, omega, .. } => {
                if !(*mass > 0.0 && *omega > 0.0) {
                    return bad("oscillator mass and frequency must be positive".into());
                }
            }
            Self::Box { lower, upper } => {
                if !(upper > lower) {
                    return bad(format!("box needs lower < upper, got [{lower}, {upper}]"));
                }
            }
            Self::Superposition(terms) => {
                if terms.is_empty() {
                    return bad("empty superposition".into());
                }
                for (_, s) in terms {
                    s.validate()?;
                }
            }
            Self::Samples(_) => {}
        }
        Ok(())
    }

    fn sample(&self, grid: &Grid1D, hbar: f64) -> Result<Vec<Complex64>> {
        let xs = grid.points();
        Ok(match self {
            Self::Gaussian { mean, sigma, momentum, chirp } => xs
                .iter()
                .map(|&x| {
                    let y = x - mean;
                    let amp = (-y * y / (4.0 * sigma * sigma)).exp();
                    Complex64::from_polar(amp, (momentum * x + chirp * y * y) / hbar)
                })
                .collect(),
            Self::HarmonicEigen { n, mass, omega } => {
                let scale = (mass * omega / hbar).sqrt();
                xs.iter()
                    .map(|&x| Complex64::new(hermite_function(*n, x * scale), 0.0))
                    .collect()
            }
            Self::Box { lower, upper } => xs
                .iter()
                .map(|&x| Complex64::new(if x >= *lower && x < *upper { 1.0 } else { 0.0 }, 0.0))
                .collect(),
            Self::Superposition(terms) => {
                let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
                for (c, s) in terms {
                    let part = build_state(s, grid, hbar)?;
                    for (a, v) in acc.iter_mut().zip(part.amplitudes()) {
                        *a += c * v;
                    }
                }
                acc
            }
            Self::Samples(v) => {
                if v.len() != grid.len() {
                    return Err(Error::DimensionMismatch { expected: grid.len(), got: v.len() });
                }
                v.clone()
            }
        })
    }
}

/// Normalized oscillator eigenfunction in the dimensionless coordinate, by the stable
/// three-term recurrence.
pub(crate) fn hermite_function(n: usize, xi: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    for k in 0..n {
        let k = k as f64;
        let next = (2.0 / (k + 1.0)).sqrt() * xi * cur - (k / (k + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn check_extent(grid: &Grid1D, (lo, hi): (f64, f64)) -> Result<()> {
    if lo < grid.lower() || hi > grid.upper() {
        return Err(Error::Truncated {
            lower: grid.lower(),
            upper: grid.upper(),
            need_lower: lo,
            need_upper: hi,
        });
    }
    Ok(())
}

/// Samples an analytic descriptor on `grid` and normalizes it.
pub fn build_state(spec: &StateSpec, grid: &Grid1D, hbar: f64) -> Result<GridState> {
    spec.validate()?;
    if let Some(ext) = spec.extent(hbar) {
        check_extent(grid, ext)?;
    }
    GridState::from_amplitudes(*grid, spec.sample(grid, hbar)?, hbar)
}

/// Analytic two-particle descriptors.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec2D {
    /// `exp(-(x1-x2-a)²/4σ² - (x1+x2)²/4τ² + i p0 (x1+x2)/2ħ)`.
    Epr { sigma: f64, tau: f64, separation: f64, momentum: f64 },
    /// Product of two 1D descriptors.
    Product(StateSpec, StateSpec),
    /// Weighted sum of products.
    Superposition(Vec<(Complex64, StateSpec, StateSpec)>),
}

impl StateSpec2D {
    /// The approximate EPR state with the conventional parameters named explicitly.
    pub fn epr(sigma: f64, tau: f64, separation: f64, momentum: f64) -> Self {
        Self::Epr { sigma, tau, separation, momentum }
    }
}

/// Samples a two-particle descriptor on `grid` and normalizes it.
pub fn build_state_2d(spec: &StateSpec2D, grid: &Grid2D, hbar: f64) -> Result<GridState2D> {
    let (g1, g2) = (grid.first, grid.second);
    match spec {
        StateSpec2D::Epr { sigma, tau, separation, momentum } => {
            if !(*sigma > 0.0 && *tau > 0.0) {
                return Err(Error::InvalidParameter("EPR widths must be positive".into()));
            }
            let spread = (sigma * sigma + tau * tau).sqrt() / 2.0;
            let half = separation / 2.0;
            check_extent(&g1, (half - EPR_EXTENT_SIGMAS * spread, half + EPR_EXTENT_SIGMAS * spread))?;
            check_extent(&g2, (-half - EPR_EXTENT_SIGMAS * spread, -half + EPR_EXTENT_SIGMAS * spread))?;
            let mut amps = Vec::with_capacity(grid.len());
            for i in 0..g1.len() {
                let x1 = g1.x(i);
                for j in 0..g2.len() {
                    let x2 = g2.x(j);
                    let rel = x1 - x2 - separation;
                    let tot = x1 + x2;
                    let log_amp = -rel * rel / (4.0 * sigma * sigma) - tot * tot / (4.0 * tau * tau);
                    amps.push(Complex64::from_polar(log_amp.exp(), momentum * tot / (2.0 * hbar)));
                }
            }
            GridState2D::from_amplitudes(*grid, amps, hbar)
        }
        StateSpec2D::Product(a, b) => {
            GridState2D::product(&build_state(a, &g1, hbar)?, &build_state(b, &g2, hbar)?)
        }
        StateSpec2D::Superposition(terms) => {
            if terms.is_empty() {
                return Err(Error::InvalidParameter("empty superposition".into()));
            }
            let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
            for (c, a, b) in terms {
                let part = GridState2D::product(&build_state(a, &g1, hbar)?, &build_state(b, &g2, hbar)?)?;
                for (s, v) in acc.iter_mut().zip(part.amplitudes()) {
                    *s += c * v;
                }
            }
            GridState2D::from_amplitudes(*grid, acc, hbar)
        }
    }
}
