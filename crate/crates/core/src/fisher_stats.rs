//! Fisher lengths, Fisher covariance matrices, entropies, correlation coefficients and
//! the entropy-rate identity for diffusion.

use crate::decomp::{fisher_information_2d, PositionState};
use crate::error::{Error, Result};
use crate::grid_state::{GridDistribution, GridDistribution2D};
use crate::numerics::{self, DerivativeScheme, Numerics};

/// Fisher information of a 1D density under translations, with its length scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherResult {
    /// `fisher_info^{-1/2}`; infinite when the information vanishes.
    pub delta: f64,
    pub fisher_info: f64,
    /// Set when the information is not stable under support-floor halving or grid
    /// coarsening, or is zero or non-finite.
    pub divergent: bool,
    pub epsilon_used: f64,
}

impl FisherResult {
    fn from_sweep(info: f64, epsilon: f64, drift: f64, span: f64, num: &Numerics) -> Self {
        let vanishing = info.is_finite() && info * span * span < 1e-12;
        let divergent = !info.is_finite() || vanishing || drift > num.divergence_drift;
        Self {
            delta: if vanishing { f64::INFINITY } else { info.sqrt().recip() },
            fisher_info: if vanishing { 0.0 } else { info },
            divergent,
            epsilon_used: epsilon,
        }
    }
}

fn relative_drift(reference: f64, other: f64) -> f64 {
    if reference == other {
        0.0
    } else {
        (other - reference).abs() / reference.abs().max(f64::MIN_POSITIVE)
    }
}

fn density_derivative(d: &GridDistribution, scheme: DerivativeScheme) -> Vec<f64> {
    if d.is_periodic() {
        numerics::spectral_real(d.values(), d.grid().dx())
    } else {
        numerics::derivative_real(d.values(), d.grid().dx(), scheme, false)
    }
}

/// `Σ (numerator_k)² / p_k · dx` over cells with `p_k ≥ eps·max p`.
fn masked_information(p: &[f64], numerator: &[f64], eps: f64, dx: f64) -> f64 {
    let max = p.iter().cloned().fold(0.0, f64::max);
    p.iter()
        .zip(numerator)
        .filter(|(v, _)| **v > 0.0 && **v >= eps * max)
        .map(|(v, d)| d * d / v)
        .sum::<f64>()
        * dx
}

fn sweep(p: &[f64], numerator: &[f64], dx: f64, num: &Numerics) -> (f64, f64) {
    let base = masked_information(p, numerator, num.support_floor, dx);
    let drift = (1..=num.sweep_halvings)
        .map(|k| {
            let eps = num.support_floor / 2f64.powi(k as i32);
            relative_drift(base, masked_information(p, numerator, eps, dx))
        })
        .fold(0.0, f64::max);
    (base, drift)
}

/// Fisher length `δX = [∫ p (ln p)'² dx]^{-1/2}`.
///
/// Non-periodic densities are differentiated with the configured scheme and treated as
/// zero beyond the grid; periodic densities use FFT differentiation on the circle.
pub fn fisher_length(d: &GridDistribution, num: &Numerics) -> FisherResult {
    let dx = d.grid().dx();
    let span = d.grid().upper() - d.grid().lower();
    let deriv = density_derivative(d, num.scheme);
    let (info, mut drift) = sweep(d.values(), &deriv, dx, num);
    if d.grid().len() >= 32 {
        if let Ok(coarse) = d.coarsened() {
            let cd = density_derivative(&coarse, num.scheme);
            let ci = masked_information(coarse.values(), &cd, num.support_floor, coarse.grid().dx());
            drift = drift.max(relative_drift(info, ci));
        }
    }
    FisherResult::from_sweep(info, num.support_floor, drift, span, num)
}

/// Fisher length of a density operator from `⟨x|Pρ - ρP|x⟩`, which is `2i·Im⟨x|Pρ|x⟩`.
pub fn fisher_length_mixed<S: PositionState>(r: &S, num: &Numerics) -> FisherResult {
    let dens = r.position_density();
    let hbar = r.hbar();
    let numerator: Vec<f64> = r.p_rho_diagonal(num.scheme).iter().map(|z| 2.0 * z.im / hbar).collect();
    let dx = r.grid().dx();
    let (info, drift) = sweep(dens.values(), &numerator, dx, num);
    let span = r.grid().upper() - r.grid().lower();
    let mut out = FisherResult::from_sweep(info, num.support_floor, drift, span, num);
    out.divergent |= fisher_length(&dens, num).divergent;
    out
}

/// Inverse of the Fisher information matrix of a 2D density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherCovariance {
    pub matrix: [[f64; 2]; 2],
    /// Ratio of the smallest to the largest eigenvalue of the information matrix.
    pub inverse_conditioning: f64,
    /// Supported cells excluded because a stencil neighbor vanished.
    pub dropped_cells: usize,
}

pub(crate) fn symmetric_eigenvalues(m: &[[f64; 2]; 2]) -> (f64, f64) {
    let tr = m[0][0] + m[1][1];
    let disc = ((m[0][0] - m[1][1]).powi(2) / 4.0 + m[0][1] * m[1][0]).max(0.0).sqrt();
    (tr / 2.0 - disc, tr / 2.0 + disc)
}

/// `FCov(X) = [∫ p ∇ln p ∇ln pᵀ]^{-1}`, with `∇ln p` from five-point differences of `ln p`.
pub fn fisher_covariance(d: &GridDistribution2D, num: &Numerics) -> Result<FisherCovariance> {
    let (mut info, dropped_cells) = fisher_information_2d(d, num.support_floor);
    let off = 0.5 * (info[0][1] + info[1][0]);
    info[0][1] = off;
    info[1][0] = off;
    let (lo, hi) = symmetric_eigenvalues(&info);
    let inverse_conditioning = if hi > 0.0 { lo / hi } else { 0.0 };
    if !(inverse_conditioning > 1e-12) || !hi.is_finite() {
        return Err(Error::Singular(inverse_conditioning));
    }
    let det = info[0][0] * info[1][1] - off * off;
    let matrix = [[info[1][1] / det, -off / det], [-off / det, info[0][0] / det]];
    Ok(FisherCovariance { matrix, inverse_conditioning, dropped_cells })
}

/// Reciprocal of the sum of squared probabilities.
pub fn collision_length(p: &[f64]) -> Result<f64> {
    if p.iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::NegativeProbability(p.iter().cloned().fold(f64::INFINITY, f64::min)));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(total));
    }
    Ok(1.0 / p.iter().map(|v| v * v).sum::<f64>())
}

/// Differential entropy in nats and the ensemble length `e^S`.
pub fn entropy_and_ensemble_length(d: &GridDistribution) -> (f64, f64) {
    let s = -d.values().iter().filter(|p| **p > 0.0).map(|p| p * p.ln()).sum::<f64>() * d.grid().dx();
    (s, s.exp())
}

/// Pearson and Fisher correlation coefficients of a 2D density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationPair {
    pub r_pearson: f64,
    pub r_fisher: f64,
}

pub(crate) fn correlation_of(m: &[[f64; 2]; 2]) -> Result<f64> {
    if !(m[0][0] > 0.0 && m[1][1] > 0.0) {
        return Err(Error::Degenerate(format!("variances {} and {}", m[0][0], m[1][1])));
    }
    Ok(m[0][1] / (m[0][0] * m[1][1]).sqrt())
}

/// `r_P` from the covariance matrix and `r_F` from the Fisher covariance matrix.
pub fn correlations(d: &GridDistribution2D, num: &Numerics) -> Result<CorrelationPair> {
    let (_, cov) = d.covariance();
    let r_pearson = correlation_of(&cov)?;
    let fcov = fisher_covariance(d, num)?;
    Ok(CorrelationPair { r_pearson, r_fisher: correlation_of(&fcov.matrix)? })
}

/// Settings for the explicit heat-flow run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionConfig {
    pub gamma: f64,
    /// Constant drift velocity `v` in `ṗ = γp'' - v p'`.
    pub drift: f64,
    pub dt: f64,
    pub steps: usize,
    /// Number of evenly spaced checkpoints.
    pub checkpoints: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionCheckpoint {
    pub time: f64,
    pub entropy: f64,
    pub fisher_info: f64,
    /// Centered time difference of the entropy.
    pub measured_rate: f64,
    /// `γ/δX²`.
    pub predicted_rate: f64,
    pub relative_mismatch: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionReport {
    pub checkpoints: Vec<DiffusionCheckpoint>,
    pub max_relative_mismatch: f64,
    pub final_distribution: GridDistribution,
}

fn heat_step(p: &[f64], out: &mut [f64], cfg: &DiffusionConfig, dx: f64, periodic: bool) {
    let n = p.len();
    let at = |k: isize| -> f64 {
        if periodic {
            p[k.rem_euclid(n as isize) as usize]
        } else if k < 0 || k >= n as isize {
            0.0
        } else {
            p[k as usize]
        }
    };
    for (k, o) in out.iter_mut().enumerate() {
        let k = k as isize;
        let lap = (at(k + 1) - 2.0 * at(k) + at(k - 1)) / (dx * dx);
        let grad = (at(k + 1) - at(k - 1)) / (2.0 * dx);
        *o = at(k) + cfg.dt * (cfg.gamma * lap - cfg.drift * grad);
    }
}

/// Evolves `ṗ = γp'' - v p'` by explicit Euler and compares `dS/dt` with `γ/δX²`.
pub fn diffusion_entropy_rate_check(
    d: &GridDistribution,
    cfg: &DiffusionConfig,
    num: &Numerics,
) -> Result<DiffusionReport> {
    let dx = d.grid().dx();
    if !(cfg.gamma > 0.0) || !(cfg.dt > 0.0) {
        return Err(Error::InvalidParameter("gamma and dt must be positive".into()));
    }
    let limit = dx * dx / (2.0 * cfg.gamma);
    if cfg.dt > limit {
        return Err(Error::Unstable(format!("dt = {} exceeds the stability limit {limit}", cfg.dt)));
    }
    if cfg.checkpoints == 0 || cfg.steps < 2 * cfg.checkpoints {
        return Err(Error::InvalidParameter("need at least two steps per checkpoint".into()));
    }
    let every = cfg.steps / cfg.checkpoints;
    let periodic = d.is_periodic();
    let grid = *d.grid();
    let mut cur = d.values().to_vec();
    let mut next = vec![0.0; cur.len()];
    let entropy = |p: &[f64]| -p.iter().filter(|v| **v > 0.0).map(|v| v * v.ln()).sum::<f64>() * dx;
    // S one step before the current state, for centered differences.
    let mut s_before = entropy(&cur);
    let mut checkpoints = Vec::new();
    let mut pending: Option<(f64, f64, f64, f64)> = None;
    for step in 1..=cfg.steps {
        heat_step(&cur, &mut next, cfg, dx, periodic);
        if let Some(bad) = next.iter().find(|v| **v < -1e-300) {
            return Err(Error::Unstable(format!("negative density {bad} at step {step}")));
        }
        std::mem::swap(&mut cur, &mut next);
        let s_now = entropy(&cur);
        if let Some((time, s_mid, info, s_left)) = pending.take() {
            let measured = (s_now - s_left) / (2.0 * cfg.dt);
            let predicted = cfg.gamma * info;
            let mismatch = if measured.abs() < 1e-14 && predicted.abs() < 1e-14 {
                0.0
            } else {
                (measured - predicted).abs() / predicted.abs().max(measured.abs())
            };
            checkpoints.push(DiffusionCheckpoint {
                time,
                entropy: s_mid,
                fisher_info: info,
                measured_rate: measured,
                predicted_rate: predicted,
                relative_mismatch: mismatch,
            });
        }
        if step % every == 0 && step < cfg.steps {
            let dist = GridDistribution::normalized(grid, cur.clone(), periodic)?;
            let f = fisher_length(&dist, num);
            pending = Some((step as f64 * cfg.dt, s_now, f.fisher_info, s_before));
        }
        s_before = s_now;
    }
    let max_relative_mismatch = checkpoints.iter().map(|c| c.relative_mismatch).fold(0.0, f64::max);
    Ok(DiffusionReport {
        checkpoints,
        max_relative_mismatch,
        final_distribution: GridDistribution::normalized(grid, cur, periodic)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_state::{Grid1D, Grid2D};

    fn gaussian(g: &Grid1D, mean: f64, sigma: f64) -> Vec<f64> {
        g.points().iter().map(|x| (-(x - mean).powi(2) / (2.0 * sigma * sigma)).exp()).collect()
    }

    #[test]
    fn gaussian_fisher_length_is_sigma() {
        let g = Grid1D::covering(-15.0, 15.0, 2048).unwrap();
        let d = GridDistribution::normalized(g, gaussian(&g, 0.5, 1.7), false).unwrap();
        let f = fisher_length(&d, &Numerics::default());
        assert!(!f.divergent);
        assert!((f.delta - 1.7).abs() < 1e-8, "{}", f.delta);
    }

    #[test]
    fn box_density_is_divergent() {
        let g = Grid1D::covering(-1.0, 2.0, 1024).unwrap();
        let p = g.points().iter().map(|x| if (0.0..1.0).contains(x) { 1.0 } else { 0.0 }).collect();
        let d = GridDistribution::normalized(g, p, false).unwrap();
        assert!(fisher_length(&d, &Numerics::default()).divergent);
    }

    #[test]
    fn periodic_cosine_density_has_unit_length() {
        let g = crate::grid_state::phase_grid(256).unwrap();
        let p = g.points().iter().map(|phi| 1.0 + phi.cos()).collect();
        let d = GridDistribution::normalized(g, p, true).unwrap();
        let f = fisher_length(&d, &Numerics::default());
        assert!(!f.divergent);
        assert!((f.delta - 1.0).abs() < 1e-10, "{}", f.delta);
    }

    #[test]
    fn uniform_periodic_density_has_no_information() {
        let g = crate::grid_state::phase_grid(64).unwrap();
        let d = GridDistribution::normalized(g, vec![1.0; 64], true).unwrap();
        let f = fisher_length(&d, &Numerics::default());
        assert!(f.divergent);
        assert!(f.delta.is_infinite());
    }

    #[test]
    fn collision_length_examples() {
        assert_eq!(collision_length(&[1.0, 0.0, 0.0]).unwrap(), 1.0);
        assert!((collision_length(&[0.25; 4]).unwrap() - 4.0).abs() < 1e-15);
        assert!((collision_length(&[0.75, 0.25]).unwrap() - 1.6).abs() < 1e-15);
        assert!(collision_length(&[0.5, 0.6]).is_err());
    }

    #[test]
    fn entropy_examples() {
        let g = Grid1D::covering(-20.0, 20.0, 4096).unwrap();
        let d = GridDistribution::normalized(g, gaussian(&g, 0.0, 2.0), false).unwrap();
        let (s, _) = entropy_and_ensemble_length(&d);
        let want = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E * 4.0).ln();
        assert!((s - want).abs() < 1e-10);

        let g = Grid1D::covering(0.0, 1.0, 100).unwrap();
        let d = GridDistribution::normalized(g, vec![1.0; 100], false).unwrap();
        let (s, l) = entropy_and_ensemble_length(&d);
        assert!(s.abs() < 1e-12 && (l - 1.0).abs() < 1e-12);

        let lambda = 1.5;
        let g = Grid1D::covering(0.0, 80.0, 64000).unwrap();
        let p = g.points().iter().map(|x| (-x / lambda).exp()).collect();
        let d = GridDistribution::normalized(g, p, false).unwrap();
        let (s, _) = entropy_and_ensemble_length(&d);
        assert!((s - (1.0 + lambda.ln())).abs() < 1e-6, "{s}");
    }

    fn gaussian_2d(g: Grid2D, cov: [[f64; 2]; 2]) -> GridDistribution2D {
        let det = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
        let inv = [[cov[1][1] / det, -cov[0][1] / det], [-cov[1][0] / det, cov[0][0] / det]];
        let mut p = Vec::with_capacity(g.len());
        for i in 0..g.first.len() {
            for j in 0..g.second.len() {
                let (x, y) = (g.first.x(i), g.second.x(j));
                p.push((-0.5 * (inv[0][0] * x * x + 2.0 * inv[0][1] * x * y + inv[1][1] * y * y)).exp());
            }
        }
        GridDistribution2D::normalized(g, p).unwrap()
    }

    #[test]
    fn gaussian_fisher_covariance_equals_covariance() {
        let g = Grid1D::covering(-10.0, 10.0, 200).unwrap();
        let cov = [[1.5, -0.6], [-0.6, 0.9]];
        let d = gaussian_2d(Grid2D::square(g), cov);
        let f = fisher_covariance(&d, &Numerics::default()).unwrap();
        for (got, want) in f.matrix.iter().flatten().zip(cov.iter().flatten()) {
            assert!((got - want).abs() < 1e-6, "{:?}", f.matrix);
        }
        let c = correlations(&d, &Numerics::default()).unwrap();
        let want = -0.6 / (1.5f64 * 0.9).sqrt();
        assert!((c.r_pearson - want).abs() < 1e-6 && (c.r_fisher - want).abs() < 1e-6);
    }

    #[test]
    fn product_density_is_uncorrelated() {
        let g = Grid1D::covering(-8.0, 8.0, 128).unwrap();
        let d = gaussian_2d(Grid2D::square(g), [[1.0, 0.0], [0.0, 0.5]]);
        let c = correlations(&d, &Numerics::default()).unwrap();
        assert!(c.r_pearson.abs() < 1e-12 && c.r_fisher.abs() < 1e-12);
    }

    #[test]
    fn heat_flow_entropy_rate_matches_fisher_information() {
        let g = Grid1D::covering(-14.0, 14.0, 560).unwrap();
        let d = GridDistribution::normalized(g, gaussian(&g, 0.0, 1.0), false).unwrap();
        let cfg = DiffusionConfig { gamma: 0.1, drift: 0.0, dt: 0.005, steps: 1000, checkpoints: 10 };
        let r = diffusion_entropy_rate_check(&d, &cfg, &Numerics::default()).unwrap();
        assert_eq!(r.checkpoints.len(), 9);
        for c in &r.checkpoints {
            let analytic = 0.1 / (1.0 + 0.2 * c.time);
            assert!((c.measured_rate - analytic).abs() / analytic < 0.01);
        }
        assert!(r.max_relative_mismatch < 0.01);
    }

    #[test]
    fn unstable_step_is_rejected() {
        let g = Grid1D::covering(-5.0, 5.0, 100).unwrap();
        let d = GridDistribution::normalized(g, gaussian(&g, 0.0, 1.0), false).unwrap();
        let cfg = DiffusionConfig { gamma: 1.0, drift: 0.0, dt: 0.1, steps: 10, checkpoints: 2 };
        assert!(matches!(diffusion_entropy_rate_check(&d, &cfg, &Numerics::default()), Err(Error::Unstable(_))));
    }
}
