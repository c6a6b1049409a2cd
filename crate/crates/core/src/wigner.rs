//! Wigner quasi-probability on a phase-space grid.
//!
//! For a position grid `x_k = x0 + k·h` with `n` samples the Wigner function is sampled at
//!
//! ```text
//! W(x_k, p_m) = (h/πħ) Σ_j ρ(k+j, k-j) e^{-2i p_m j h/ħ},   p_m = (m - n/2)·πħ/(n h)
//! ```
//!
//! so the separation variable `ξ = 2jh` spans twice the position range, and pairs that
//! fall off the grid are treated as zero. The momentum spacing is half the FFT momentum
//! spacing: even `m` land on the FFT momentum grid.

use num_complex::Complex64;

use crate::decomp::ClassicalField;
use crate::error::{Error, Result};
use crate::grid_state::{Grid1D, GridDensity, GridState};
use crate::numerics::{apply_stencil, fft_forward, support_mask, Numerics, FIRST};

/// Wigner function sampled on an `x × p` grid, stored row-major by position.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    x: Grid1D,
    p: Grid1D,
    values: Vec<f64>,
    hbar: f64,
}

impl WignerGrid {
    pub fn x_grid(&self) -> &Grid1D {
        &self.x
    }

    pub fn p_grid(&self) -> &Grid1D {
        &self.p
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn at(&self, k: usize, m: usize) -> f64 {
        self.values[k * self.p.len() + m]
    }

    pub fn row(&self, k: usize) -> &[f64] {
        let n = self.p.len();
        &self.values[k * n..(k + 1) * n]
    }

    pub fn cell(&self) -> f64 {
        self.x.dx() * self.p.dx()
    }

    /// `∫∫ W dx dp`.
    pub fn total(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| f64::max(m, v.abs()))
    }

    /// `∫ W dp` at every position sample.
    pub fn position_marginal(&self) -> Vec<f64> {
        (0..self.x.len()).map(|k| self.row(k).iter().sum::<f64>() * self.p.dx()).collect()
    }

    /// `∫ W dx` at every momentum sample.
    pub fn momentum_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.p.len()];
        for k in 0..self.x.len() {
            for (o, w) in out.iter_mut().zip(self.row(k)) {
                *o += w;
            }
        }
        out.iter_mut().for_each(|o| *o *= self.x.dx());
        out
    }

    /// `2πħ ∫∫ W² dx dp`, equal to `tr ρ²`.
    pub fn purity(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.hbar * self.values.iter().map(|w| w * w).sum::<f64>() * self.cell()
    }
}

fn build(grid: Grid1D, hbar: f64, pair: impl Fn(usize, usize) -> Complex64) -> WignerGrid {
    let n = grid.len();
    let h = grid.dx();
    let p = Grid1D::new(
        -((n / 2) as f64) * std::f64::consts::PI * hbar / (n as f64 * h),
        std::f64::consts::PI * hbar / (n as f64 * h),
        n,
    )
    .expect("momentum grid inherits a valid size");
    let prefactor = h / (std::f64::consts::PI * hbar);
    let mut values = vec![0.0; n * n];
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
        let reach = k.min(n - 1 - k).min(n / 2 - 1);
        for j in 0..=reach {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            buf[j] = sign * pair(k + j, k - j);
            if j > 0 {
                buf[n - j] = sign * pair(k - j, k + j);
            }
        }
        fft_forward(&mut buf);
        for (m, b) in buf.iter().enumerate() {
            values[k * n + m] = prefactor * b.re;
        }
    }
    WignerGrid { x: grid, p, values, hbar }
}

/// Wigner function of a pure state.
pub fn wigner_function(s: &GridState) -> WignerGrid {
    let psi = s.amplitudes();
    build(*s.grid(), s.hbar(), |a, b| psi[a] * psi[b].conj())
}

/// Wigner function of a density matrix.
pub fn wigner_function_mixed(r: &GridDensity) -> WignerGrid {
    build(*r.grid(), r.hbar(), |a, b| r.get(a, b))
}

/// Largest deviations of the two marginals from directly computed densities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalFidelity {
    pub position: f64,
    pub momentum: f64,
}

/// Compares the marginals with the position density and the FFT momentum density.
///
/// Only samples with `m - n/2` even coincide with the FFT grid; the others are skipped.
pub fn marginal_fidelity(w: &WignerGrid, position: &[f64], momentum: &[f64]) -> Result<MarginalFidelity> {
    let n = w.x.len();
    if position.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: position.len() });
    }
    if momentum.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: momentum.len() });
    }
    let pos = w
        .position_marginal()
        .iter()
        .zip(position)
        .fold(0.0, |m, (a, b)| f64::max(m, (a - b).abs()));
    let marg = w.momentum_marginal();
    let half = (n / 2) as isize;
    let mom = (0..n as isize)
        .filter(|m| (m - half) % 2 == 0)
        .map(|m| (marg[m as usize] - momentum[(half + (m - half) / 2) as usize]).abs())
        .fold(0.0, f64::max);
    Ok(MarginalFidelity { position: pos, momentum: mom })
}

/// `P_cl(x) = ∫ p W dp / ∫ W dp` on each position slice.
///
/// The outermost momentum bin is left out of the numerator: it is the aliased Nyquist
/// component and its `±p` images cancel.
pub fn wigner_classical_momentum(w: &WignerGrid, num: &Numerics) -> ClassicalField {
    let marginal = w.position_marginal();
    let support = support_mask(&marginal, num.support_floor);
    let values = (0..w.x.len())
        .map(|k| {
            if !support[k] {
                return 0.0;
            }
            let first: f64 = w.row(k).iter().enumerate().skip(1).map(|(m, v)| w.p.x(m) * v).sum::<f64>() * w.p.dx();
            first / marginal[k]
        })
        .collect();
    ClassicalField::new(w.x, values, support)
}

/// Relative density floor for comparing Wigner and direct fields.
///
/// Slices far in the tails need amplitudes from beyond the grid edge, so the comparison
/// is restricted to cells holding at least this fraction of the peak density.
pub const EQUIVALENCE_SUPPORT_FLOOR: f64 = 1e-8;

/// Agreement between the Wigner description and direct evaluations for one pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equivalence {
    /// Largest `|P_cl^W - P_cl|` on the joint support.
    pub field_deviation: f64,
    pub marginals: MarginalFidelity,
    pub purity: f64,
    pub support_cells: usize,
}

/// Compares the slice-averaged Wigner momentum with the direct classical momentum
/// (spectral derivative), along with marginals and purity.
pub fn wigner_equivalence(s: &GridState) -> Result<Equivalence> {
    let w = wigner_function(s);
    let num = Numerics::spectral().with_support_floor(EQUIVALENCE_SUPPORT_FLOOR);
    let from_wigner = wigner_classical_momentum(&w, &num);
    let direct = crate::decomp::classical_momentum_field(s, &num);
    let support_cells = from_wigner.support().iter().zip(direct.support()).filter(|(a, b)| **a && **b).count();
    Ok(Equivalence {
        field_deviation: from_wigner.max_deviation(&direct),
        marginals: marginal_fidelity(&w, s.density().values(), s.momentum_density().values())?,
        purity: w.purity(),
        support_cells,
    })
}

/// Exploratory Wigner covariance: the inverse of `∫∫ W⁻¹ ∂_jW ∂_kW dx dp` over `|W| > ε·max|W|`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerCovariance {
    pub epsilon: f64,
    /// Inverse of `fisher`, or `None` when that matrix is singular or indefinite.
    pub matrix: Option<[[f64; 2]; 2]>,
    pub fisher: [[f64; 2]; 2],
    /// `(ε, inverse)` for each threshold of the sweep.
    pub sweep: Vec<(f64, Option<[[f64; 2]; 2]>)>,
    /// Largest relative change of any entry across the sweep (infinite if any inverse is missing).
    pub drift: f64,
    /// `W` takes negative values below `-ε·max|W|`, so the integrand is unbounded.
    pub sign_change: bool,
    pub stable: bool,
}

fn invert(m: &[[f64; 2]; 2]) -> Option<[[f64; 2]; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if !(det > 0.0 && m[0][0] > 0.0) || !det.is_finite() {
        return None;
    }
    Some([[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]])
}

fn wigner_fisher(w: &WignerGrid, grad_x: &[f64], grad_p: &[f64], eps: f64) -> [[f64; 2]; 2] {
    let cut = eps * w.max_abs();
    let mut f = [[0.0; 2]; 2];
    for (i, &v) in w.values.iter().enumerate() {
        if v.abs() <= cut {
            continue;
        }
        let g = [grad_x[i], grad_p[i]];
        for a in 0..2 {
            for b in 0..2 {
                f[a][b] += g[a] * g[b] / v;
            }
        }
    }
    f.map(|r| r.map(|v| v * w.cell()))
}

/// Wigner covariance at `epsilon`, with a sweep over `epsilon·{1, 10⁻², 10⁻⁴}`.
pub fn wigner_covariance(w: &WignerGrid, epsilon: f64) -> Result<WignerCovariance> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let (nx, np) = (w.x.len(), w.p.len());
    let mut grad_x = vec![0.0; nx * np];
    let mut grad_p = vec![0.0; nx * np];
    for k in 0..nx {
        let d = apply_stencil(w.row(k), &FIRST, 1.0 / w.p.dx(), false, 0.0);
        grad_p[k * np..(k + 1) * np].copy_from_slice(&d);
    }
    for m in 0..np {
        let column: Vec<f64> = (0..nx).map(|k| w.at(k, m)).collect();
        let d = apply_stencil(&column, &FIRST, 1.0 / w.x.dx(), false, 0.0);
        for k in 0..nx {
            grad_x[k * np + m] = d[k];
        }
    }
    let fisher = wigner_fisher(w, &grad_x, &grad_p, epsilon);
    let matrix = invert(&fisher);
    let sweep: Vec<_> = [1.0, 1e-2, 1e-4]
        .iter()
        .map(|s| (epsilon * s, invert(&wigner_fisher(w, &grad_x, &grad_p, epsilon * s))))
        .collect();
    let drift = match matrix {
        None => f64::INFINITY,
        Some(base) => sweep.iter().fold(0.0, |acc: f64, (_, m)| match m {
            None => f64::INFINITY,
            Some(m) => {
                let scale = base[0][0].abs().max(base[1][1].abs());
                let mut worst: f64 = 0.0;
                for a in 0..2 {
                    for b in 0..2 {
                        worst = worst.max((m[a][b] - base[a][b]).abs() / scale);
                    }
                }
                acc.max(worst)
            }
        }),
    };
    let sign_change = w.min() < -epsilon * w.max_abs();
    Ok(WignerCovariance { epsilon, matrix, fisher, sweep, drift, sign_change, stable: drift < 0.1 && !sign_change })
}
