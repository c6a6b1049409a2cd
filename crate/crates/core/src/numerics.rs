//! Differentiation stencils, FFT helpers and the tunable numerical settings shared by
//! every operation.
//!
//! Grids are cell-centered and treated as zero-padded beyond their edges unless the
//! data is declared periodic. Integrals are rectangle-rule sums, which are spectrally
//! accurate for smooth decaying integrands.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::ops::{Add, Mul};

/// How first derivatives of sampled 1D functions are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeScheme {
    /// Fourth-order central differences on five points.
    #[default]
    FivePoint,
    /// FFT differentiation with the Nyquist mode dropped.
    Spectral,
}

/// Settings for support masking, differentiation and divergence detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Numerics {
    /// Cells whose density falls below `support_floor * max density` are off support.
    pub support_floor: f64,
    pub scheme: DerivativeScheme,
    /// Number of times the support floor is halved during a divergence sweep.
    pub sweep_halvings: u32,
    /// Relative drift of the Fisher information above which it is declared divergent.
    pub divergence_drift: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            support_floor: 1e-12,
            scheme: DerivativeScheme::FivePoint,
            sweep_halvings: 4,
            divergence_drift: 0.1,
        }
    }
}

impl Numerics {
    pub fn spectral() -> Self {
        Self {
            scheme: DerivativeScheme::Spectral,
            ..Self::default()
        }
    }

    pub fn with_scheme(mut self, scheme: DerivativeScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_support_floor(mut self, floor: f64) -> Self {
        self.support_floor = floor;
        self
    }
}

/// Five-point first-derivative weights for offsets -2..=2 (divide by h).
pub(crate) const FIRST: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
/// Five-point second-derivative weights for offsets -2..=2 (divide by h²).
pub(crate) const SECOND: [f64; 5] = [
    -1.0 / 12.0,
    16.0 / 12.0,
    -30.0 / 12.0,
    16.0 / 12.0,
    -1.0 / 12.0,
];

fn fetch<T: Copy>(v: &[T], k: isize, periodic: bool, zero: T) -> T {
    let n = v.len() as isize;
    if periodic {
        v[k.rem_euclid(n) as usize]
    } else if k < 0 || k >= n {
        zero
    } else {
        v[k as usize]
    }
}

pub(crate) fn apply_stencil<T>(v: &[T], weights: &[f64; 5], scale: f64, periodic: bool, zero: T) -> Vec<T>
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T>,
{
    (0..v.len() as isize)
        .map(|k| {
            let mut acc = zero;
            for (o, w) in (-2..=2).zip(weights) {
                if *w != 0.0 {
                    acc = acc + fetch(v, k + o, periodic, zero) * (*w * scale);
                }
            }
            acc
        })
        .collect()
}

pub(crate) fn five_point_real(v: &[f64], h: f64, periodic: bool) -> Vec<f64> {
    apply_stencil(v, &FIRST, 1.0 / h, periodic, 0.0)
}

pub(crate) fn five_point_complex(v: &[Complex64], h: f64, periodic: bool) -> Vec<Complex64> {
    apply_stencil(v, &FIRST, 1.0 / h, periodic, Complex64::new(0.0, 0.0))
}

pub(crate) fn second_five_point_complex(v: &[Complex64], h: f64) -> Vec<Complex64> {
    apply_stencil(v, &SECOND, 1.0 / (h * h), false, Complex64::new(0.0, 0.0))
}

pub(crate) fn fft_forward(buf: &mut [Complex64]) {
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(buf.len()).process(buf);
}

pub(crate) fn fft_inverse(buf: &mut [Complex64]) {
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(buf.len()).process(buf);
}

/// Angular wavenumbers in FFT order with the Nyquist entry set to zero.
pub(crate) fn derivative_wavenumbers(n: usize, h: f64) -> Vec<f64> {
    let base = 2.0 * std::f64::consts::PI / (n as f64 * h);
    (0..n)
        .map(|j| {
            let m = j as i64;
            let n = n as i64;
            if 2 * m == n {
                0.0
            } else if 2 * m < n {
                m as f64 * base
            } else {
                (m - n) as f64 * base
            }
        })
        .collect()
}

/// FFT derivative of real samples. Only the real part of the inverse transform is kept,
/// so an identically zero input yields exact zeros.
pub(crate) fn spectral_real(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len();
    let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft_forward(&mut buf);
    for (b, k) in buf.iter_mut().zip(derivative_wavenumbers(n, h)) {
        *b *= Complex64::new(0.0, k);
    }
    fft_inverse(&mut buf);
    buf.iter().map(|z| z.re / n as f64).collect()
}

pub(crate) fn spectral_complex(v: &[Complex64], h: f64) -> Vec<Complex64> {
    let re: Vec<f64> = v.iter().map(|z| z.re).collect();
    let im: Vec<f64> = v.iter().map(|z| z.im).collect();
    let dre = if re.iter().all(|&x| x == 0.0) { vec![0.0; v.len()] } else { spectral_real(&re, h) };
    let dim = if im.iter().all(|&x| x == 0.0) { vec![0.0; v.len()] } else { spectral_real(&im, h) };
    dre.into_iter()
        .zip(dim)
        .map(|(a, b)| Complex64::new(a, b))
        .collect()
}

pub(crate) fn derivative_real(v: &[f64], h: f64, scheme: DerivativeScheme, periodic: bool) -> Vec<f64> {
    match (scheme, periodic) {
        (DerivativeScheme::FivePoint, p) => five_point_real(v, h, p),
        (DerivativeScheme::Spectral, _) => spectral_real(v, h),
    }
}

pub(crate) fn derivative_complex(v: &[Complex64], h: f64, scheme: DerivativeScheme) -> Vec<Complex64> {
    match scheme {
        DerivativeScheme::FivePoint => five_point_complex(v, h, false),
        DerivativeScheme::Spectral => spectral_complex(v, h),
    }
}

/// Mask of cells whose value reaches `floor` times the maximum.
pub(crate) fn support_mask(values: &[f64], floor: f64) -> Vec<bool> {
    let max = values.iter().cloned().fold(0.0, f64::max);
    let cut = floor * max;
    values.iter().map(|&v| max > 0.0 && v >= cut && v > 0.0).collect()
}

/// Golden-section minimisation of a unimodal function on `[lo, hi]`.
pub(crate) fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while (hi - lo).abs() > tol * (c.abs() + d.abs()).max(1e-300) {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_point_is_exact_on_quartics() {
        let h = 0.1;
        let xs: Vec<f64> = (0..40).map(|k| k as f64 * h).collect();
        let v: Vec<f64> = xs.iter().map(|x| x.powi(4) - 2.0 * x * x + x).collect();
        let d = five_point_real(&v, h, false);
        for k in 2..38 {
            let x = xs[k];
            let exact = 4.0 * x.powi(3) - 4.0 * x + 1.0;
            assert!((d[k] - exact).abs() < 1e-9, "k={k}: {} vs {exact}", d[k]);
        }
    }

    #[test]
    fn spectral_derivative_of_sine() {
        let n = 64;
        let h = 2.0 * std::f64::consts::PI / n as f64;
        let v: Vec<f64> = (0..n).map(|k| (3.0 * k as f64 * h).sin()).collect();
        let d = spectral_real(&v, h);
        for (k, dk) in d.iter().enumerate() {
            assert!((dk - 3.0 * (3.0 * k as f64 * h).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn spectral_real_input_keeps_zero_imaginary_part() {
        let v: Vec<Complex64> = (0..32).map(|k| Complex64::new((-((k as f64 - 16.0) / 4.0).powi(2)).exp(), 0.0)).collect();
        let d = spectral_complex(&v, 0.25);
        assert!(d.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let x = golden_section(|x| (x - 1.25).powi(2) + 3.0, -10.0, 10.0, 1e-12);
        assert!((x - 1.25).abs() < 1e-7);
    }
}
