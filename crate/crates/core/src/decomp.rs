//! Classical and nonclassical components of observables.
//!
//! The classical component of an observable is its best estimate from a measurement of
//! the conjugate observable: `P_cl(x) = Re⟨x|Pρ|x⟩ / ⟨x|ρ|x⟩`, which for a pure state is
//! `ħ` times the phase gradient. The nonclassical component is the remainder, and the
//! two are linearly uncorrelated, so variances add.

use num_complex::Complex64;

use crate::grid_state::transform::transform_samples;
use crate::grid_state::{
    phase_grid, Grid1D, Grid2D, GridDensity, GridDistribution, GridDistribution2D, GridState, GridState2D,
    NumberMode, NumberState,
};
use crate::error::{Error, Result};
use crate::numerics::{self, support_mask, DerivativeScheme, Numerics, FIRST};

/// A real field on a 1D grid, meaningful only where the underlying density is supported.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalField {
    grid: Grid1D,
    values: Vec<f64>,
    support: Vec<bool>,
}

impl ClassicalField {
    pub(crate) fn new(grid: Grid1D, values: Vec<f64>, support: Vec<bool>) -> Self {
        let values = values.into_iter().zip(&support).map(|(v, s)| if *s { v } else { 0.0 }).collect();
        Self { grid, values, support }
    }

    /// A field with the given values on the support of `like`.
    pub fn with_values(like: &ClassicalField, values: Vec<f64>) -> Result<Self> {
        if values.len() != like.values.len() {
            return Err(Error::DimensionMismatch { expected: like.values.len(), got: values.len() });
        }
        Ok(Self::new(like.grid, values, like.support.clone()))
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// Values per cell; cells off support hold zero.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support(&self) -> &[bool] {
        &self.support
    }

    pub fn value(&self, k: usize) -> Option<f64> {
        self.support[k].then(|| self.values[k])
    }

    /// `(x, value)` pairs on support.
    pub fn on_support(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.values.len()).filter(|k| self.support[*k]).map(|k| (self.grid.x(k), self.values[k]))
    }

    /// Largest absolute difference to another field over cells supported by both.
    pub fn max_deviation(&self, other: &ClassicalField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .zip(self.support.iter().zip(&other.support))
            .filter(|(_, (a, b))| **a && **b)
            .map(|((u, v), _)| (u - v).abs())
            .fold(0.0, f64::max)
    }

    /// `∫ p(x) f(x)^k dx` over the support.
    fn moment(&self, density: &[f64], power: i32) -> f64 {
        self.values
            .iter()
            .zip(density)
            .zip(&self.support)
            .filter(|(_, s)| **s)
            .map(|((v, p), _)| p * v.powi(power))
            .sum::<f64>()
            * self.grid.dx()
    }
}

/// Means and variances of an observable and of its classical and nonclassical parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompStats {
    pub mean_obs: f64,
    pub mean_cl: f64,
    pub second_obs: f64,
    pub second_cl: f64,
    pub var_obs: f64,
    pub var_cl: f64,
    /// `var_obs - var_cl`; the nonclassical part has zero mean.
    pub var_nc: f64,
    /// Smallest mean-square error of any classical estimate, `⟨O²⟩ - ⟨O_cl²⟩`.
    pub min_error: f64,
    /// Set when the observable's distribution still has weight near the grid's
    /// conjugate cutoff, so its second moment is not converged.
    pub unresolved: bool,
}

impl DecompStats {
    fn from_moments(mean_obs: f64, second_obs: f64, mean_cl: f64, second_cl: f64, unresolved: bool) -> Self {
        let var_obs = second_obs - mean_obs * mean_obs;
        let var_cl = second_cl - mean_cl * mean_cl;
        Self {
            mean_obs,
            mean_cl,
            second_obs,
            second_cl,
            var_obs,
            var_cl,
            var_nc: var_obs - var_cl,
            min_error: second_obs - second_cl,
            unresolved,
        }
    }

    pub fn nonclassical_spread(&self) -> f64 {
        self.var_nc.max(0.0).sqrt()
    }
}

/// States with a position representation: pure states and density operators.
pub trait PositionState {
    fn grid(&self) -> &Grid1D;
    fn hbar(&self) -> f64;
    fn position_density(&self) -> GridDistribution;
    fn momentum_distribution(&self) -> GridDistribution;
    /// `⟨x|Pρ|x⟩` at every grid point.
    fn p_rho_diagonal(&self, scheme: DerivativeScheme) -> Vec<Complex64>;
}

impl PositionState for GridState {
    fn grid(&self) -> &Grid1D {
        GridState::grid(self)
    }

    fn hbar(&self) -> f64 {
        GridState::hbar(self)
    }

    fn position_density(&self) -> GridDistribution {
        self.density()
    }

    fn momentum_distribution(&self) -> GridDistribution {
        self.momentum_density()
    }

    fn p_rho_diagonal(&self, scheme: DerivativeScheme) -> Vec<Complex64> {
        let minus_i_hbar = Complex64::new(0.0, -self.hbar());
        self.derivative(scheme)
            .iter()
            .zip(self.amplitudes())
            .map(|(d, psi)| minus_i_hbar * d * psi.conj())
            .collect()
    }
}

impl PositionState for GridDensity {
    fn grid(&self) -> &Grid1D {
        GridDensity::grid(self)
    }

    fn hbar(&self) -> f64 {
        GridDensity::hbar(self)
    }

    fn position_density(&self) -> GridDistribution {
        self.density()
    }

    fn momentum_distribution(&self) -> GridDistribution {
        self.momentum_density().expect("valid density has a momentum density")
    }

    fn p_rho_diagonal(&self, scheme: DerivativeScheme) -> Vec<Complex64> {
        let n = self.dim();
        let h = GridDensity::grid(self).dx();
        let minus_i_hbar = Complex64::new(0.0, -GridDensity::hbar(self));
        let first_index_derivative = |k: usize| -> Complex64 {
            match scheme {
                DerivativeScheme::FivePoint => {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (o, w) in (-2isize..=2).zip(FIRST) {
                        let a = k as isize + o;
                        if w != 0.0 && a >= 0 && (a as usize) < n {
                            acc += self.get(a as usize, k) * (w / h);
                        }
                    }
                    acc
                }
                DerivativeScheme::Spectral => {
                    let col: Vec<Complex64> = (0..n).map(|a| self.get(a, k)).collect();
                    numerics::spectral_complex(&col, h)[k]
                }
            }
        };
        (0..n).map(|k| minus_i_hbar * first_index_derivative(k)).collect()
    }
}

/// `Re⟨x|Pρ|x⟩ / ⟨x|ρ|x⟩` on the support of the position density.
pub fn classical_momentum_of<S: PositionState>(s: &S, num: &Numerics) -> ClassicalField {
    let density = s.position_density();
    let support = support_mask(density.values(), num.support_floor);
    let pr = s.p_rho_diagonal(num.scheme);
    let values = pr
        .iter()
        .zip(density.values())
        .zip(&support)
        .map(|((z, p), on)| if *on { z.re / p } else { 0.0 })
        .collect();
    ClassicalField::new(*s.grid(), values, support)
}

/// Classical momentum field `ħ·Im(ψ'/ψ)` of a pure state; exactly zero for real amplitudes.
pub fn classical_momentum_field(s: &GridState, num: &Numerics) -> ClassicalField {
    classical_momentum_of(s, num)
}

/// Classical momentum field of a density operator.
pub fn classical_momentum_field_mixed(r: &GridDensity, num: &Numerics) -> ClassicalField {
    classical_momentum_of(r, num)
}

/// Whether more than `1e-6` of the second moment sits in the outer quarter of the grid
/// on either side.
fn tail_dominated(d: &GridDistribution) -> bool {
    let (lo, hi) = (d.grid().lower(), d.grid().upper());
    let center = 0.5 * (lo + hi);
    let half = 0.375 * (hi - lo);
    let total = d.expect(|x| x * x);
    let outer = d.expect(|x| if (x - center).abs() > half { x * x } else { 0.0 });
    total > 0.0 && outer > 1e-6 * total
}

/// Momentum statistics: `⟨P⟩, ⟨P²⟩` spectrally, classical moments by position quadrature.
pub fn momentum_decomposition_stats<S: PositionState>(s: &S, num: &Numerics) -> DecompStats {
    let pd = s.momentum_distribution();
    let field = classical_momentum_of(s, num);
    let density = s.position_density();
    DecompStats::from_moments(
        pd.expect(|p| p),
        pd.expect(|p| p * p),
        field.moment(density.values(), 1),
        field.moment(density.values(), 2),
        tail_dominated(&pd),
    )
}

/// Mean-square error `⟨P²⟩ + ⟨P̃²⟩ - 2⟨P̃ P_cl⟩` of estimating momentum by `estimate(x)`.
pub fn estimator_error<S: PositionState>(s: &S, estimate: &ClassicalField, num: &Numerics) -> Result<f64> {
    let field = classical_momentum_of(s, num);
    if estimate.values.len() != field.values.len() {
        return Err(Error::DimensionMismatch { expected: field.values.len(), got: estimate.values.len() });
    }
    let density = s.position_density();
    let second = s.momentum_distribution().expect(|p| p * p);
    let h = s.grid().dx();
    let mut cross = 0.0;
    let mut est2 = 0.0;
    for k in 0..field.values.len() {
        if field.support[k] {
            let p = density.values()[k];
            est2 += p * estimate.values[k] * estimate.values[k];
            cross += p * estimate.values[k] * field.values[k];
        }
    }
    Ok(second + (est2 - 2.0 * cross) * h)
}

fn position_weighted(s: &GridState) -> Vec<Complex64> {
    s.amplitudes().iter().enumerate().map(|(k, z)| z * s.grid().x(k)).collect()
}

/// Classical position field `X_cl(p) = Re⟨p|Xρ|p⟩ / ⟨p|ρ|p⟩` on the momentum grid.
///
/// `⟨p|X|ψ⟩` is the transform of `xψ(x)`, so no differentiation in momentum is needed.
pub fn classical_position_field(s: &GridState, num: &Numerics) -> ClassicalField {
    let grid = s.grid();
    let hbar = s.hbar();
    let psi_p = transform_samples(grid, s.amplitudes(), hbar);
    let x_psi_p = transform_samples(grid, &position_weighted(s), hbar);
    let density: Vec<f64> = psi_p.iter().map(|z| z.norm_sqr()).collect();
    let support = support_mask(&density, num.support_floor);
    let values = x_psi_p
        .iter()
        .zip(&psi_p)
        .zip(&density)
        .map(|((g, f), p)| (g * f.conj()).re / p)
        .collect();
    ClassicalField::new(grid.momentum_grid(hbar), values, support)
}

/// Position statistics with the classical part estimated from momentum.
pub fn position_decomposition_stats(s: &GridState, num: &Numerics) -> DecompStats {
    let field = classical_position_field(s, num);
    let pd = s.momentum_density();
    let d = s.density();
    DecompStats::from_moments(
        d.expect(|x| x),
        d.expect(|x| x * x),
        field.moment(pd.values(), 1),
        field.moment(pd.values(), 2),
        tail_dominated(&d),
    )
}

/// A real field on a 2D product grid, same layout as the state.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalField2D {
    grid: Grid2D,
    values: Vec<f64>,
    support: Vec<bool>,
}

impl ClassicalField2D {
    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support(&self) -> &[bool] {
        &self.support
    }

    pub fn value(&self, i: usize, j: usize) -> Option<f64> {
        let k = i * self.grid.second.len() + j;
        self.support[k].then(|| self.values[k])
    }
}

/// Five-point derivative of `ln f` along one axis, built from the ratios `f(neighbor)/f(center)`.
///
/// With `ln` taken on the principal branch of each ratio, the imaginary part is the phase
/// gradient without a global unwrap. Cells where a neighbor vanishes, falls off the
/// grid, or differs in phase by more than `π/2` are reported as `None`.
pub(crate) fn log_gradient(
    grid: &Grid2D,
    values: &[Complex64],
    support: &[bool],
    axis: usize,
) -> Vec<Option<Complex64>> {
    let (n1, n2) = (grid.first.len() as isize, grid.second.len() as isize);
    let h = grid.axis(axis).dx();
    (0..values.len())
        .map(|idx| {
            if !support[idx] {
                return None;
            }
            let (i, j) = (idx as isize / n2, idx as isize % n2);
            let center = values[idx];
            let mut acc = Complex64::new(0.0, 0.0);
            for (o, w) in (-2isize..=2).zip(FIRST) {
                if w == 0.0 {
                    continue;
                }
                let (a, b) = if axis == 0 { (i + o, j) } else { (i, j + o) };
                if a < 0 || a >= n1 || b < 0 || b >= n2 {
                    return None;
                }
                let ratio = values[(a * n2 + b) as usize] / center;
                if ratio.norm_sqr() == 0.0 || !ratio.is_finite() {
                    return None;
                }
                let log = ratio.ln();
                if log.im.abs() > std::f64::consts::FRAC_PI_2 {
                    return None;
                }
                acc += log * w;
            }
            Some(acc / h)
        })
        .collect()
}

/// The two classical momentum components `ħ ∂_j arg ψ` of a two-particle state.
///
/// Both components are five-point differences of one locally unwrapped phase, so their
/// discrete curl vanishes up to rounding wherever the stencils are unmasked.
pub fn vector_classical_momentum(s: &GridState2D, num: &Numerics) -> (ClassicalField2D, ClassicalField2D) {
    let grid = *s.grid();
    let density: Vec<f64> = s.amplitudes().iter().map(|z| z.norm_sqr()).collect();
    let support = support_mask(&density, num.support_floor);
    let field = |axis: usize| {
        let g = log_gradient(&grid, s.amplitudes(), &support, axis);
        ClassicalField2D {
            grid,
            values: g.iter().map(|v| v.map_or(0.0, |z| s.hbar() * z.im)).collect(),
            support: g.iter().map(Option::is_some).collect(),
        }
    };
    (field(0), field(1))
}

/// Largest `|∂₁F₂ - ∂₂F₁|` over cells whose full curl stencil is supported.
pub fn max_discrete_curl(fields: &(ClassicalField2D, ClassicalField2D)) -> f64 {
    let (f1, f2) = fields;
    let grid = f1.grid;
    let (n1, n2) = (grid.first.len(), grid.second.len());
    let (h1, h2) = (grid.first.dx(), grid.second.dx());
    let mut worst = 0.0f64;
    for i in 2..n1.saturating_sub(2) {
        'cell: for j in 2..n2.saturating_sub(2) {
            let mut d1 = 0.0;
            let mut d2 = 0.0;
            for (o, w) in (-2isize..=2).zip(FIRST) {
                let a = (i as isize + o) as usize;
                let b = (j as isize + o) as usize;
                let (k1, k2) = (a * n2 + j, i * n2 + b);
                if !(f2.support[k1] && f1.support[k2]) {
                    continue 'cell;
                }
                d1 += w * f2.values[k1] / h1;
                d2 += w * f1.values[k2] / h2;
            }
            worst = worst.max((d1 - d2).abs());
        }
    }
    worst
}

/// 2×2 momentum statistics of a two-particle state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorDecompStats {
    pub mean_obs: [f64; 2],
    pub mean_cl: [f64; 2],
    /// `Cov(P)` from the momentum-space density.
    pub cov_obs: [[f64; 2]; 2],
    /// `Cov(P_cl)` by position quadrature.
    pub cov_cl: [[f64; 2]; 2],
    /// `Cov(P) - Cov(P_cl)`.
    pub cov_nc: [[f64; 2]; 2],
    /// `Cov(P_nc)` evaluated directly as `ħ² ∫ p ∂_j ln|ψ| ∂_k ln|ψ|`.
    pub cov_nc_direct: [[f64; 2]; 2],
}

/// Momentum covariance, its classical part and two independent routes to the
/// nonclassical part.
pub fn vector_decomposition_stats(s: &GridState2D, num: &Numerics) -> VectorDecompStats {
    let grid = *s.grid();
    let hbar = s.hbar();
    let (mean_obs, cov_obs) = crate::grid_state::momentum_representation_2d(s).density().covariance();
    let density: Vec<f64> = s.amplitudes().iter().map(|z| z.norm_sqr()).collect();
    let support = support_mask(&density, num.support_floor);
    let g = [
        log_gradient(&grid, s.amplitudes(), &support, 0),
        log_gradient(&grid, s.amplitudes(), &support, 1),
    ];
    let cell = grid.cell();
    let mut mean_cl = [0.0; 2];
    let mut second_cl = [[0.0; 2]; 2];
    let mut nc_direct = [[0.0; 2]; 2];
    for (k, p) in density.iter().enumerate() {
        let (Some(a), Some(b)) = (g[0][k], g[1][k]) else { continue };
        let pcl = [hbar * a.im, hbar * b.im];
        let amp = [hbar * a.re, hbar * b.re];
        for u in 0..2 {
            mean_cl[u] += p * pcl[u] * cell;
            for v in 0..2 {
                second_cl[u][v] += p * pcl[u] * pcl[v] * cell;
                nc_direct[u][v] += p * amp[u] * amp[v] * cell;
            }
        }
    }
    let mut cov_cl = [[0.0; 2]; 2];
    let mut cov_nc = [[0.0; 2]; 2];
    for u in 0..2 {
        for v in 0..2 {
            cov_cl[u][v] = second_cl[u][v] - mean_cl[u] * mean_cl[v];
            cov_nc[u][v] = cov_obs[u][v] - cov_cl[u][v];
        }
    }
    VectorDecompStats { mean_obs, mean_cl, cov_obs, cov_cl, cov_nc, cov_nc_direct: nc_direct }
}

/// Fisher information matrix `∫ p ∇ln p ∇ln pᵀ` of a 2D density, with the number of
/// supported cells that had to be dropped because a stencil neighbor vanished.
pub(crate) fn fisher_information_2d(d: &GridDistribution2D, floor: f64) -> ([[f64; 2]; 2], usize) {
    let grid = *d.grid();
    let values: Vec<Complex64> = d.values().iter().map(|&p| Complex64::new(p, 0.0)).collect();
    let support = support_mask(d.values(), floor);
    let g = [log_gradient(&grid, &values, &support, 0), log_gradient(&grid, &values, &support, 1)];
    let mut info = [[0.0; 2]; 2];
    let mut dropped = 0;
    for (k, p) in d.values().iter().enumerate() {
        if !support[k] {
            continue;
        }
        let (Some(a), Some(b)) = (g[0][k], g[1][k]) else {
            dropped += 1;
            continue;
        };
        let s = [a.re, b.re];
        for u in 0..2 {
            for v in 0..2 {
                info[u][v] += p * s[u] * s[v] * grid.cell();
            }
        }
    }
    (info, dropped)
}

/// A statistical mixture of number states, `Σ w_i |ψ_i⟩⟨ψ_i|`.
pub type NumberMixture = [(f64, NumberState)];

fn mixture_scale(mix: &NumberMixture) -> Result<(f64, f64)> {
    let total: f64 = mix.iter().map(|(w, _)| *w).sum();
    if mix.is_empty() || !(total > 0.0) || mix.iter().any(|(w, _)| *w < 0.0) {
        return Err(Error::InvalidParameter("mixture weights must be nonnegative with positive sum".into()));
    }
    let (mode, hbar) = (mix[0].1.mode(), mix[0].1.hbar());
    if mix.iter().any(|(_, s)| s.mode() != mode || s.hbar() != hbar) {
        return Err(Error::InvalidParameter("mixture components must share mode and hbar".into()));
    }
    Ok((total, if mode == NumberMode::Rotor { hbar } else { 1.0 }))
}

/// Phase density and classical number field of a mixture on the phase grid.
fn number_fields(mix: &NumberMixture, n_phi: usize, num: &Numerics) -> Result<(GridDistribution, ClassicalField, f64)> {
    let (total, scale) = mixture_scale(mix)?;
    for (_, s) in mix {
        s.check_phase_grid(n_phi)?;
    }
    let grid = phase_grid(n_phi)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut dens = vec![0.0; n_phi];
    let mut num_re = vec![0.0; n_phi];
    for (k, (d, nr)) in dens.iter_mut().zip(num_re.iter_mut()).enumerate() {
        for (w, s) in mix {
            let (f, g) = s.phase_amplitudes(grid.x(k));
            *d += w / total * f.norm_sqr() / two_pi;
            *nr += w / total * (g * f.conj()).re / two_pi;
        }
    }
    let support = support_mask(&dens, num.support_floor);
    let values = num_re.iter().zip(&dens).map(|(n, d)| scale * n / d).collect();
    let field = ClassicalField::new(grid, values, support);
    let dist = GridDistribution::normalized(grid, dens, true)?;
    Ok((dist, field, scale))
}

/// Classical number field `N_cl(φ) = Re[f_N(φ) f(φ)*] / |f(φ)|²` with
/// `f = Σ c_n e^{-inφ}` and `f_N = Σ n c_n e^{-inφ}`. Rotor states carry the factor `ħ`.
pub fn number_classical_field(ns: &NumberState, n_phi: usize, num: &Numerics) -> Result<ClassicalField> {
    Ok(number_fields(&[(1.0, ns.clone())], n_phi, num)?.1)
}

/// Number (or rotor angular momentum) statistics of a pure number state.
pub fn number_decomposition_stats(ns: &NumberState, n_phi: usize, num: &Numerics) -> Result<DecompStats> {
    number_decomposition_stats_mixed(&[(1.0, ns.clone())], n_phi, num)
}

/// Number statistics of a mixture; classical moments by quadrature over the phase grid.
pub fn number_decomposition_stats_mixed(mix: &NumberMixture, n_phi: usize, num: &Numerics) -> Result<DecompStats> {
    let (dist, field, scale) = number_fields(mix, n_phi, num)?;
    let (total, _) = mixture_scale(mix)?;
    let mut mean = 0.0;
    let mut second = 0.0;
    for (w, s) in mix {
        for (n, c) in s.terms() {
            let q = scale * n as f64;
            mean += w / total * c.norm_sqr() * q;
            second += w / total * c.norm_sqr() * q * q;
        }
    }
    Ok(DecompStats::from_moments(
        mean,
        second,
        field.moment(dist.values(), 1),
        field.moment(dist.values(), 2),
        false,
    ))
}

/// Phase density of a number-state mixture.
pub fn phase_distribution_mixed(mix: &NumberMixture, n_phi: usize) -> Result<GridDistribution> {
    Ok(number_fields(mix, n_phi, &Numerics::default())?.0)
}
