//! States, density operators and probability distributions sampled on uniform grids.
//!
//! Grids are cell-centered: sample `k` of a [`Grid1D`] sits at `x0 + k·dx` and represents
//! the cell `[x - dx/2, x + dx/2)`. Integrals are rectangle-rule sums over cells.

mod build;
mod condition;
pub(crate) mod transform;

pub use build::{build_state, build_state_2d, StateSpec, StateSpec2D};
pub use condition::{condition_on_momentum, condition_on_position, Particle};
pub use transform::{momentum_representation, momentum_representation_2d, transform_at};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{self, DerivativeScheme};

pub(crate) const NORM_TOL: f64 = 1e-10;

/// A uniform 1D grid of `n` samples starting at `x0` with spacing `dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x0: f64,
    dx: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(x0: f64, dx: f64, n: usize) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {dx}")));
        }
        if n < 8 {
            return Err(Error::InvalidGrid(format!("need at least 8 samples, got {n}")));
        }
        if !x0.is_finite() {
            return Err(Error::InvalidGrid("non-finite origin".into()));
        }
        Ok(Self { x0, dx, n })
    }

    /// `n` cells exactly covering `[lower, upper]`, samples at the cell centers.
    pub fn covering(lower: f64, upper: f64, n: usize) -> Result<Self> {
        if !(upper > lower) {
            return Err(Error::InvalidGrid(format!("empty interval [{lower}, {upper}]")));
        }
        let dx = (upper - lower) / n as f64;
        Self::new(lower + 0.5 * dx, dx, n)
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x0 + k as f64 * self.dx
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.x(k)).collect()
    }

    /// Left edge of the first cell.
    pub fn lower(&self) -> f64 {
        self.x0 - 0.5 * self.dx
    }

    /// Right edge of the last cell.
    pub fn upper(&self) -> f64 {
        self.x0 + (self.n as f64 - 0.5) * self.dx
    }

    /// Index of the sample equal to `x` up to a millionth of a cell.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let k = ((x - self.x0) / self.dx).round();
        if k < 0.0 || k >= self.n as f64 {
            return None;
        }
        ((self.x(k as usize) - x).abs() <= 1e-6 * self.dx).then_some(k as usize)
    }

    /// Index of the sample closest to `x`, clamped to the grid.
    pub fn nearest(&self, x: f64) -> usize {
        let k = ((x - self.x0) / self.dx).round();
        k.clamp(0.0, (self.n - 1) as f64) as usize
    }

    /// Conjugate momentum grid: `p_j = (j - n/2)·dp` with `dp = 2πħ/(n·dx)`.
    pub fn momentum_grid(&self, hbar: f64) -> Grid1D {
        let dp = 2.0 * std::f64::consts::PI * hbar / (self.n as f64 * self.dx);
        Grid1D {
            x0: -((self.n / 2) as f64) * dp,
            dx: dp,
            n: self.n,
        }
    }

    /// The grid with every other sample kept.
    pub(crate) fn coarsened(&self) -> Grid1D {
        Grid1D {
            x0: self.x0,
            dx: 2.0 * self.dx,
            n: self.n.div_ceil(2),
        }
    }
}

fn check_hbar(hbar: f64) -> Result<()> {
    if hbar > 0.0 && hbar.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")))
    }
}

fn normalize_in_place(amps: &mut [Complex64], cell: f64) -> Result<()> {
    let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>() * cell;
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::ZeroNorm);
    }
    let s = norm.sqrt().recip();
    amps.iter_mut().for_each(|z| *z *= s);
    Ok(())
}

/// A normalized pure state on a 1D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    grid: Grid1D,
    amplitudes: Vec<Complex64>,
    hbar: f64,
}

impl GridState {
    /// Builds a state from raw samples, rescaling them to unit norm.
    pub fn from_amplitudes(grid: Grid1D, mut amplitudes: Vec<Complex64>, hbar: f64) -> Result<Self> {
        check_hbar(hbar)?;
        if amplitudes.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: amplitudes.len(),
            });
        }
        normalize_in_place(&mut amplitudes, grid.dx())?;
        Ok(Self { grid, amplitudes, hbar })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn density(&self) -> GridDistribution {
        GridDistribution {
            grid: self.grid,
            p: self.amplitudes.iter().map(|z| z.norm_sqr()).collect(),
            periodic: false,
        }
    }

    /// The same state as a rank-one density operator.
    pub fn to_density(&self) -> GridDensity {
        GridDensity::from_mixture(&[(1.0, self.clone())]).expect("pure state is a valid density")
    }

    pub(crate) fn derivative(&self, scheme: DerivativeScheme) -> Vec<Complex64> {
        numerics::derivative_complex(&self.amplitudes, self.grid.dx(), scheme)
    }
}

/// A density operator sampled as the matrix `ρ(x_a, x_b)`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    grid: Grid1D,
    rho: Vec<Complex64>,
    hbar: f64,
}

impl GridDensity {
    /// Builds `Σ w_i |ψ_i⟩⟨ψ_i|` with the weights renormalized to sum to one.
    pub fn from_mixture(components: &[(f64, GridState)]) -> Result<Self> {
        let Some((_, first)) = components.first() else {
            return Err(Error::InvalidParameter("empty mixture".into()));
        };
        let grid = first.grid;
        let hbar = first.hbar;
        let total: f64 = components.iter().map(|(w, _)| *w).sum();
        if components.iter().any(|(w, _)| *w < 0.0) || !(total > 0.0) {
            return Err(Error::InvalidParameter("mixture weights must be nonnegative with positive sum".into()));
        }
        let n = grid.len();
        let mut rho = vec![Complex64::new(0.0, 0.0); n * n];
        for (w, s) in components {
            if s.grid != grid || s.hbar != hbar {
                return Err(Error::InvalidParameter("mixture components must share grid and hbar".into()));
            }
            let w = w / total;
            for a in 0..n {
                let wa = s.amplitudes[a] * w;
                let row = &mut rho[a * n..(a + 1) * n];
                for (r, b) in row.iter_mut().zip(&s.amplitudes) {
                    *r += wa * b.conj();
                }
            }
        }
        // Enforce exact Hermiticity against accumulated rounding.
        for a in 0..n {
            rho[a * n + a].im = 0.0;
            for b in a + 1..n {
                let m = 0.5 * (rho[a * n + b] + rho[b * n + a].conj());
                rho[a * n + b] = m;
                rho[b * n + a] = m.conj();
            }
        }
        Ok(Self { grid, rho, hbar })
    }

    /// Validates a raw row-major matrix: Hermitian, unit trace, positive semidefinite.
    pub fn from_matrix(grid: Grid1D, rho: Vec<Complex64>, hbar: f64) -> Result<Self> {
        check_hbar(hbar)?;
        let n = grid.len();
        if rho.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: rho.len() });
        }
        let scale = rho.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in a..n {
                worst = worst.max((rho[a * n + b] - rho[b * n + a].conj()).norm());
            }
        }
        if worst > 1e-12 * scale {
            return Err(Error::NotHermitian(worst / scale));
        }
        let trace: f64 = (0..n).map(|a| rho[a * n + a].re).sum::<f64>() * grid.dx();
        if (trace - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(trace));
        }
        let m = nalgebra::DMatrix::from_fn(n, n, |a, b| rho[a * n + b] * grid.dx());
        let eig = m.symmetric_eigen();
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -1e-10 {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { grid, rho, hbar })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dim(&self) -> usize {
        self.grid.len()
    }

    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.rho[a * self.grid.len() + b]
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.rho
    }

    pub fn density(&self) -> GridDistribution {
        let n = self.grid.len();
        GridDistribution {
            grid: self.grid,
            p: (0..n).map(|a| self.rho[a * n + a].re.max(0.0)).collect(),
            periodic: false,
        }
    }

    /// `tr ρ²` in the continuum normalization.
    pub fn purity(&self) -> f64 {
        let dx = self.grid.dx();
        self.rho.iter().map(|z| z.norm_sqr()).sum::<f64>() * dx * dx
    }
}

/// A probability density on a 1D grid, optionally periodic.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDistribution {
    grid: Grid1D,
    p: Vec<f64>,
    periodic: bool,
}

impl GridDistribution {
    /// Validates nonnegativity and unit mass.
    pub fn new(grid: Grid1D, p: Vec<f64>, periodic: bool) -> Result<Self> {
        Self::check(&grid, &p)?;
        let mass: f64 = p.iter().sum::<f64>() * grid.dx();
        if (mass - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(mass));
        }
        Ok(Self { grid, p, periodic })
    }

    /// Rescales nonnegative samples to unit mass.
    pub fn normalized(grid: Grid1D, mut p: Vec<f64>, periodic: bool) -> Result<Self> {
        Self::check(&grid, &p)?;
        let mass: f64 = p.iter().sum::<f64>() * grid.dx();
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::ZeroNorm);
        }
        p.iter_mut().for_each(|v| *v /= mass);
        Ok(Self { grid, p, periodic })
    }

    fn check(grid: &Grid1D, p: &[f64]) -> Result<()> {
        if p.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: p.len() });
        }
        if let Some(bad) = p.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::NegativeProbability(*bad));
        }
        Ok(())
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    /// Integral of `f(x)·p(x)`.
    pub fn expect(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.p
            .iter()
            .enumerate()
            .map(|(k, p)| p * f(self.grid.x(k)))
            .sum::<f64>()
            * self.grid.dx()
    }

    /// Same values with every other sample dropped, renormalized.
    pub(crate) fn coarsened(&self) -> Result<Self> {
        let p: Vec<f64> = self.p.iter().step_by(2).cloned().collect();
        Self::normalized(self.grid.coarsened(), p, self.periodic)
    }
}

/// Mean and variance of a distribution. Periodic distributions are treated on their
/// reference interval without wrapping.
pub fn moments(d: &GridDistribution) -> (f64, f64) {
    let mean = d.expect(|x| x);
    let var = d.expect(|x| (x - mean) * (x - mean));
    (mean, var.max(0.0))
}

/// A product grid for two degrees of freedom; index `(i, j)` is stored at `i·n2 + j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub first: Grid1D,
    pub second: Grid1D,
}

impl Grid2D {
    pub fn new(first: Grid1D, second: Grid1D) -> Self {
        Self { first, second }
    }

    pub fn square(grid: Grid1D) -> Self {
        Self { first: grid, second: grid }
    }

    pub fn len(&self) -> usize {
        self.first.len() * self.second.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell(&self) -> f64 {
        self.first.dx() * self.second.dx()
    }

    pub fn axis(&self, axis: usize) -> &Grid1D {
        if axis == 0 {
            &self.first
        } else {
            &self.second
        }
    }
}

/// A normalized pure two-particle state.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState2D {
    grid: Grid2D,
    amplitudes: Vec<Complex64>,
    hbar: f64,
}

impl GridState2D {
    pub fn from_amplitudes(grid: Grid2D, mut amplitudes: Vec<Complex64>, hbar: f64) -> Result<Self> {
        check_hbar(hbar)?;
        if amplitudes.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: amplitudes.len() });
        }
        normalize_in_place(&mut amplitudes, grid.cell())?;
        Ok(Self { grid, amplitudes, hbar })
    }

    /// The product `ψ1(x1)·ψ2(x2)`.
    pub fn product(a: &GridState, b: &GridState) -> Result<Self> {
        if a.hbar != b.hbar {
            return Err(Error::InvalidParameter("factors must share hbar".into()));
        }
        let amps = a
            .amplitudes
            .iter()
            .flat_map(|u| b.amplitudes.iter().map(move |v| u * v))
            .collect();
        Self::from_amplitudes(Grid2D::new(a.grid, b.grid), amps, a.hbar)
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.amplitudes[i * self.grid.second.len() + j]
    }

    pub fn density(&self) -> GridDistribution2D {
        GridDistribution2D {
            grid: self.grid,
            p: self.amplitudes.iter().map(|z| z.norm_sqr()).collect(),
        }
    }
}

/// A probability density on a 2D product grid, same layout as [`GridState2D`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridDistribution2D {
    grid: Grid2D,
    p: Vec<f64>,
}

impl GridDistribution2D {
    pub fn normalized(grid: Grid2D, mut p: Vec<f64>) -> Result<Self> {
        if p.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: p.len() });
        }
        if let Some(bad) = p.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::NegativeProbability(*bad));
        }
        let mass: f64 = p.iter().sum::<f64>() * grid.cell();
        if !(mass > 0.0) {
            return Err(Error::ZeroNorm);
        }
        p.iter_mut().for_each(|v| *v /= mass);
        Ok(Self { grid, p })
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.grid.second.len() + j]
    }

    /// Marginal density of one axis (0 or 1).
    pub fn marginal(&self, axis: usize) -> GridDistribution {
        let (n1, n2) = (self.grid.first.len(), self.grid.second.len());
        let p: Vec<f64> = if axis == 0 {
            (0..n1).map(|i| self.p[i * n2..(i + 1) * n2].iter().sum::<f64>() * self.grid.second.dx()).collect()
        } else {
            (0..n2).map(|j| (0..n1).map(|i| self.p[i * n2 + j]).sum::<f64>() * self.grid.first.dx()).collect()
        };
        GridDistribution { grid: *self.grid.axis(axis), p, periodic: false }
    }

    /// Means and the 2×2 covariance matrix.
    pub fn covariance(&self) -> ([f64; 2], [[f64; 2]; 2]) {
        let (g1, g2) = (self.grid.first, self.grid.second);
        let n2 = g2.len();
        let cell = self.grid.cell();
        let mut mean = [0.0; 2];
        for (idx, p) in self.p.iter().enumerate() {
            mean[0] += p * g1.x(idx / n2);
            mean[1] += p * g2.x(idx % n2);
        }
        mean.iter_mut().for_each(|m| *m *= cell);
        let mut cov = [[0.0; 2]; 2];
        for (idx, p) in self.p.iter().enumerate() {
            let d = [g1.x(idx / n2) - mean[0], g2.x(idx % n2) - mean[1]];
            for a in 0..2 {
                for b in 0..2 {
                    cov[a][b] += p * d[a] * d[b];
                }
            }
        }
        for row in &mut cov {
            row.iter_mut().for_each(|c| *c *= cell);
        }
        (mean, cov)
    }
}

/// Whether number indices count photons (nonnegative) or rotor quanta (any sign).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NumberMode {
    #[default]
    Photon,
    Rotor,
}

/// A pure state `Σ c_n |n⟩` over consecutive integers `n_min..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberState {
    n_min: i64,
    coefficients: Vec<Complex64>,
    hbar: f64,
    mode: NumberMode,
}

impl NumberState {
    pub fn new(n_min: i64, coefficients: Vec<Complex64>, hbar: f64, mode: NumberMode) -> Result<Self> {
        check_hbar(hbar)?;
        if coefficients.is_empty() {
            return Err(Error::InvalidParameter("no coefficients".into()));
        }
        if mode == NumberMode::Photon && n_min < 0 {
            return Err(Error::InvalidParameter(format!("photon numbers start at 0, got n_min = {n_min}")));
        }
        let norm: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::ZeroNorm);
        }
        let s = norm.sqrt().recip();
        let coefficients = coefficients.into_iter().map(|c| c * s).collect();
        Ok(Self { n_min, coefficients, hbar, mode })
    }

    /// Photon-number state from `(n, c_n)` pairs.
    pub fn photon(terms: &[(i64, Complex64)]) -> Result<Self> {
        Self::from_terms(terms, NumberMode::Photon, 1.0)
    }

    /// Rotor state from `(n, c_n)` pairs, with `J = ħ n`.
    pub fn rotor(terms: &[(i64, Complex64)], hbar: f64) -> Result<Self> {
        Self::from_terms(terms, NumberMode::Rotor, hbar)
    }

    fn from_terms(terms: &[(i64, Complex64)], mode: NumberMode, hbar: f64) -> Result<Self> {
        let lo = terms.iter().map(|t| t.0).min().ok_or_else(|| Error::InvalidParameter("no terms".into()))?;
        let hi = terms.iter().map(|t| t.0).max().unwrap_or(lo);
        let mut c = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (n, v) in terms {
            c[(n - lo) as usize] += v;
        }
        Self::new(lo, c, hbar, mode)
    }

    pub fn fock(n: i64) -> Result<Self> {
        Self::photon(&[(n, Complex64::new(1.0, 0.0))])
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.coefficients.len() as i64 - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mode(&self) -> NumberMode {
        self.mode
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coefficients.iter().enumerate().map(|(k, c)| (self.n_min + k as i64, *c))
    }

    pub(crate) fn check_phase_grid(&self, n_phi: usize) -> Result<()> {
        let required = 2 * (self.n_max() - self.n_min) as usize + 2;
        if n_phi < required.max(8) {
            return Err(Error::Aliasing { n_phi, required: required.max(8) });
        }
        Ok(())
    }

    /// Evaluates `(Σ c_n e^{-inφ}, Σ n c_n e^{-inφ})`.
    pub(crate) fn phase_amplitudes(&self, phi: f64) -> (Complex64, Complex64) {
        let mut f = Complex64::new(0.0, 0.0);
        let mut g = Complex64::new(0.0, 0.0);
        for (n, c) in self.terms() {
            let e = Complex64::from_polar(1.0, -(n as f64) * phi);
            f += c * e;
            g += c * e * n as f64;
        }
        (f, g)
    }
}

/// The cell-centered phase grid of `n_phi` points on `[0, 2π)`.
pub fn phase_grid(n_phi: usize) -> Result<Grid1D> {
    Grid1D::covering(0.0, 2.0 * std::f64::consts::PI, n_phi)
}

/// Canonical phase density `|Σ c_n e^{-inφ}|²/2π` on the cell-centered phase grid.
pub fn phase_distribution(ns: &NumberState, n_phi: usize) -> Result<GridDistribution> {
    ns.check_phase_grid(n_phi)?;
    let grid = phase_grid(n_phi)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let p = (0..n_phi)
        .map(|k| ns.phase_amplitudes(grid.x(k)).0.norm_sqr() / two_pi)
        .collect();
    Ok(GridDistribution { grid, p, periodic: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn covering_grid_is_cell_centered() {
        let g = Grid1D::covering(-1.0, 1.0, 8).unwrap();
        assert_eq!(g.dx(), 0.25);
        assert_eq!(g.x(0), -0.875);
        assert_eq!(g.lower(), -1.0);
        assert!((g.upper() - 1.0).abs() < 1e-15);
        assert_eq!(g.index_of(0.125), Some(4));
        assert_eq!(g.index_of(0.0), None);
    }

    #[test]
    fn grid_rejects_bad_inputs() {
        assert!(Grid1D::new(0.0, 0.0, 16).is_err());
        assert!(Grid1D::new(0.0, 0.1, 4).is_err());
    }

    #[test]
    fn uniform_density_moments() {
        let g = Grid1D::covering(0.0, 1.0, 1000).unwrap();
        let d = GridDistribution::normalized(g, vec![1.0; 1000], false).unwrap();
        let (m, v) = moments(&d);
        assert!((m - 0.5).abs() < 1e-12);
        assert!((v - 1.0 / 12.0).abs() < 1e-6);
    }

    #[test]
    fn single_cell_has_negligible_variance() {
        let g = Grid1D::covering(-1.0, 1.0, 64).unwrap();
        let mut p = vec![0.0; 64];
        p[20] = 1.0;
        let d = GridDistribution::normalized(g, p, false).unwrap();
        assert!(moments(&d).1 < 1e-20);
    }

    #[test]
    fn fock_phase_density_is_uniform() {
        let ns = NumberState::fock(3).unwrap();
        let d = phase_distribution(&ns, 64).unwrap();
        for v in d.values() {
            assert!((v - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
        }
    }

    #[test]
    fn two_term_phase_density_matches_cosine() {
        for (m, expect_mass) in [(1i64, 1.0), (2, 1.0)] {
            let ns = NumberState::photon(&[(0, c(1.0)), (m, c(1.0))]).unwrap();
            let d = phase_distribution(&ns, 256).unwrap();
            let mass: f64 = d.values().iter().sum::<f64>() * d.grid().dx();
            assert!((mass - expect_mass).abs() < 1e-12);
            for k in 0..256 {
                let phi = d.grid().x(k);
                let want = (1.0 + (m as f64 * phi).cos()) / (2.0 * std::f64::consts::PI);
                assert!((d.values()[k] - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn coarse_phase_grid_is_rejected() {
        let ns = NumberState::photon(&[(0, c(1.0)), (9, c(1.0))]).unwrap();
        assert!(matches!(phase_distribution(&ns, 16), Err(Error::Aliasing { .. })));
    }

    #[test]
    fn photon_mode_rejects_negative_numbers() {
        assert!(NumberState::photon(&[(-1, c(1.0))]).is_err());
        assert!(NumberState::rotor(&[(-1, c(1.0)), (1, c(1.0))], 1.0).is_ok());
    }

    #[test]
    fn raw_density_validation() {
        let g = Grid1D::covering(-1.0, 1.0, 8).unwrap();
        let mut rho = vec![Complex64::new(0.0, 0.0); 64];
        for a in 0..8 {
            rho[a * 8 + a] = c(1.0 / (8.0 * g.dx()));
        }
        assert!(GridDensity::from_matrix(g, rho.clone(), 1.0).is_ok());
        rho[1] = Complex64::new(0.0, 0.1);
        assert!(matches!(GridDensity::from_matrix(g, rho, 1.0), Err(Error::NotHermitian(_))));
    }
}
