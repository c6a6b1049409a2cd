//! Discrete form of `ψ̃(p) = (2πħ)^{-1/2} ∫ ψ(x) e^{-ipx/ħ} dx`.
//!
//! With `x_k = x0 + k·dx` and `p_j = (j - n/2)·dp`, `dp·dx = 2πħ/n`, the phase factor
//! splits as `e^{-i p_j x0/ħ} · e^{-2πi jk/n} · (-1)^k`, so the sum is one forward FFT
//! of `(-1)^k ψ_k` followed by a per-bin phase and the factor `dx/√(2πħ)`.

use num_complex::Complex64;

use super::{Grid1D, Grid2D, GridDensity, GridDistribution, GridState, GridState2D};
use crate::error::Result;

/// Applies the discrete transform to raw samples without renormalizing.
pub(crate) fn transform_samples(grid: &Grid1D, samples: &[Complex64], hbar: f64) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = samples
        .iter()
        .enumerate()
        .map(|(k, z)| if k % 2 == 0 { *z } else { -*z })
        .collect();
    crate::numerics::fft_forward(&mut buf);
    let pg = grid.momentum_grid(hbar);
    let scale = grid.dx() / (2.0 * std::f64::consts::PI * hbar).sqrt();
    for (j, b) in buf.iter_mut().enumerate() {
        *b *= Complex64::from_polar(scale, -pg.x(j) * grid.x0() / hbar);
    }
    buf
}

/// The state in the momentum representation on [`Grid1D::momentum_grid`].
pub fn momentum_representation(s: &GridState) -> GridState {
    let pg = s.grid().momentum_grid(s.hbar());
    let amps = transform_samples(s.grid(), s.amplitudes(), s.hbar());
    GridState::from_amplitudes(pg, amps, s.hbar()).expect("transform of a normalized state has unit norm")
}

/// The transform evaluated at an arbitrary momentum by direct summation.
pub fn transform_at(s: &GridState, p: f64) -> Complex64 {
    direct_sum(s.grid(), s.amplitudes(), p, s.hbar())
}

pub(crate) fn direct_sum(grid: &Grid1D, samples: &[Complex64], p: f64, hbar: f64) -> Complex64 {
    let scale = grid.dx() / (2.0 * std::f64::consts::PI * hbar).sqrt();
    samples
        .iter()
        .enumerate()
        .map(|(k, z)| z * Complex64::from_polar(1.0, -p * grid.x(k) / hbar))
        .sum::<Complex64>()
        * scale
}

/// Transforms both particles; the result lives on the product of the momentum grids.
pub fn momentum_representation_2d(s: &GridState2D) -> GridState2D {
    let g = *s.grid();
    let hbar = s.hbar();
    let (n1, n2) = (g.first.len(), g.second.len());
    let mut data = s.amplitudes().to_vec();
    for i in 0..n1 {
        let row = transform_samples(&g.second, &data[i * n2..(i + 1) * n2], hbar);
        data[i * n2..(i + 1) * n2].copy_from_slice(&row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); n1];
    for j in 0..n2 {
        for i in 0..n1 {
            col[i] = data[i * n2 + j];
        }
        let t = transform_samples(&g.first, &col, hbar);
        for i in 0..n1 {
            data[i * n2 + j] = t[i];
        }
    }
    let pg = Grid2D::new(g.first.momentum_grid(hbar), g.second.momentum_grid(hbar));
    GridState2D::from_amplitudes(pg, data, hbar).expect("transform of a normalized state has unit norm")
}

impl GridState {
    /// Momentum density on the conjugate grid.
    pub fn momentum_density(&self) -> GridDistribution {
        momentum_representation(self).density()
    }

    /// `⟨ψ|-ħ²∂²|ψ⟩` by a five-point second difference, independent of the transform.
    pub fn momentum_second_moment_fd(&self) -> f64 {
        let h = self.grid().dx();
        let d2 = crate::numerics::second_five_point_complex(self.amplitudes(), h);
        let hbar = self.hbar();
        -hbar * hbar * self.amplitudes().iter().zip(&d2).map(|(a, b)| (a.conj() * b).re).sum::<f64>() * h
    }
}

impl GridDensity {
    /// Momentum density `⟨p|ρ|p⟩` on the conjugate grid, via a transform of each column
    /// followed by a conjugate transform of each row.
    pub fn momentum_density(&self) -> Result<GridDistribution> {
        let g = *self.grid();
        let n = g.len();
        let hbar = self.hbar();
        let mut m = self.matrix().to_vec();
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for b in 0..n {
            for a in 0..n {
                col[a] = m[a * n + b];
            }
            let t = transform_samples(&g, &col, hbar);
            for a in 0..n {
                m[a * n + b] = t[a];
            }
        }
        // Row j now holds ⟨p_j|ρ|x_b⟩; its conjugate transform at p_j gives ⟨p_j|ρ|p_j⟩.
        let diag: Vec<f64> = (0..n)
            .map(|j| {
                let row: Vec<Complex64> = m[j * n..(j + 1) * n].iter().map(|z| z.conj()).collect();
                transform_samples(&g, &row, hbar)[j].conj().re.max(0.0)
            })
            .collect();
        GridDistribution::normalized(g.momentum_grid(hbar), diag, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_state::{build_state, moments, StateSpec};

    fn grid() -> Grid1D {
        Grid1D::covering(-10.0, 10.0, 1024).unwrap()
    }

    #[test]
    fn second_moment_matches_finite_difference() {
        let spec = StateSpec::Gaussian { mean: 0.3, sigma: 0.9, momentum: 1.2, chirp: 0.15 };
        let s = build_state(&spec, &grid(), 1.0).unwrap();
        let spectral = s.momentum_density().expect(|p| p * p);
        assert!((spectral / s.momentum_second_moment_fd() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn parseval_and_gaussian_width() {
        let sigma = 0.7;
        let s = build_state(&StateSpec::gaussian(0.3, sigma), &grid(), 1.0).unwrap();
        let m = momentum_representation(&s);
        let raw = transform_samples(s.grid(), s.amplitudes(), 1.0);
        let norm: f64 = raw.iter().map(|z| z.norm_sqr()).sum::<f64>() * m.grid().dx();
        assert!((norm - 1.0).abs() < 1e-10);
        let (mean, var) = moments(&m.density());
        assert!(mean.abs() < 1e-10);
        assert!((var.sqrt() - 1.0 / (2.0 * sigma)).abs() < 1e-10);
    }

    #[test]
    fn boost_shifts_momentum_density() {
        let spec = StateSpec::Gaussian { mean: 0.0, sigma: 1.0, momentum: 1.5, chirp: 0.0 };
        let s = build_state(&spec, &grid(), 1.0).unwrap();
        let (mean, var) = moments(&s.momentum_density());
        assert!((mean - 1.5).abs() < 1e-10);
        assert!((var - 0.25).abs() < 1e-10);
    }

    #[test]
    fn transform_matches_analytic_gaussian_pair() {
        // ψ = (2πσ²)^{-1/4} e^{-x²/4σ²}  ⇒  ψ̃ = (2σ²/π)^{1/4} e^{-σ²p²}.
        let sigma = 1.0;
        let s = build_state(&StateSpec::gaussian(0.0, sigma), &grid(), 1.0).unwrap();
        let m = momentum_representation(&s);
        for j in (0..1024).step_by(37) {
            let p = m.grid().x(j);
            let want = (2.0 * sigma * sigma / std::f64::consts::PI).powf(0.25) * (-sigma * sigma * p * p).exp();
            assert!((m.amplitudes()[j] - want).norm() < 1e-10, "p={p}");
        }
        let p = m.grid().x(600);
        assert!((transform_at(&s, p) - m.amplitudes()[600]).norm() < 1e-12);
    }

    #[test]
    fn density_momentum_path_matches_pure_path() {
        let spec = StateSpec::Gaussian { mean: 1.0, sigma: 0.8, momentum: -0.7, chirp: 0.2 };
        let g = Grid1D::covering(-10.0, 10.0, 256).unwrap();
        let s = build_state(&spec, &g, 1.0).unwrap();
        let a = s.momentum_density();
        let b = s.to_density().momentum_density().unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn two_dimensional_transform_preserves_norm() {
        let g = Grid1D::covering(-6.0, 6.0, 64).unwrap();
        let a = build_state(&StateSpec::gaussian(0.5, 0.8), &g, 1.0).unwrap();
        let b = build_state(&StateSpec::Gaussian { mean: 0.0, sigma: 0.6, momentum: 1.0, chirp: 0.0 }, &g, 1.0).unwrap();
        let s = GridState2D::product(&a, &b).unwrap();
        let raw = momentum_representation_2d(&s);
        let mb = momentum_representation(&b);
        let ma = momentum_representation(&a);
        for i in (0..64).step_by(7) {
            for j in (0..64).step_by(5) {
                assert!((raw.at(i, j) - ma.amplitudes()[i] * mb.amplitudes()[j]).norm() < 1e-12);
            }
        }
    }
}
