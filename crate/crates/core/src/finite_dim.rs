//! Finite-dimensional classical components, the generalized exact relation and
//! mutually unbiased bases.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::relations::{RelationCheck, Tolerance};

/// Probability weight below which an eigenvector is treated as off support.
pub const SUPPORT_WEIGHT: f64 = 1e-14;

const HERMITIAN_TOL: f64 = 1e-12;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    (m - m.adjoint()).iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn check_square(m: &DMatrix<Complex64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
    }
    if m.nrows() < 2 {
        return Err(Error::InvalidParameter("dimension must be at least 2".into()));
    }
    Ok(m.nrows())
}

/// A density matrix on `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteState {
    rho: DMatrix<Complex64>,
}

impl FiniteState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn from_matrix(rho: DMatrix<Complex64>) -> Result<Self> {
        check_square(&rho)?;
        let defect = hermiticity_defect(&rho);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let trace = rho.trace().re;
        if (trace - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(trace));
        }
        let min = rho.clone().symmetric_eigen().eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -1e-12 {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { rho })
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let v = DVector::from_column_slice(psi);
        let norm = v.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::ZeroNorm);
        }
        let v = v.unscale(norm);
        let rho = &v * v.adjoint();
        Self::from_matrix((&rho + rho.adjoint()).unscale(2.0))
    }

    /// Convex combination of pure states.
    pub fn mixture(components: &[(f64, Vec<Complex64>)]) -> Result<Self> {
        let Some((_, first)) = components.first() else {
            return Err(Error::InvalidParameter("empty mixture".into()));
        };
        let d = first.len();
        let total: f64 = components.iter().map(|(w, _)| *w).sum();
        let mut rho = DMatrix::<Complex64>::zeros(d, d);
        for (w, psi) in components {
            if *w < 0.0 {
                return Err(Error::NegativeProbability(*w));
            }
            if psi.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: psi.len() });
            }
            rho += Self::pure(psi)?.rho * c(*w / total);
        }
        Self::from_matrix((&rho + rho.adjoint()).unscale(2.0))
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        Self::from_matrix(DMatrix::identity(d, d) * c(1.0 / d as f64))
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    /// `tr(ρ M)`.
    pub fn expect(&self, m: &DMatrix<Complex64>) -> Complex64 {
        (&self.rho * m).trace()
    }
}

/// A Hermitian observable with a nondegenerate spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteObservable {
    matrix: DMatrix<Complex64>,
    eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, ordered like `eigenvalues`.
    eigenvectors: DMatrix<Complex64>,
}

impl FiniteObservable {
    /// Diagonalizes `m`; repeated eigenvalues (gap below `1e-9` of the spectral scale)
    /// are rejected.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        check_square(&m)?;
        let defect = hermiticity_defect(&m);
        if defect > HERMITIAN_TOL * (1.0 + m.norm()) {
            return Err(Error::NotHermitian(defect));
        }
        let m = (&m + m.adjoint()).unscale(2.0);
        let eig = m.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..m.nrows()).collect();
        order.sort_by(|a, b| eig.eigenvalues[*a].total_cmp(&eig.eigenvalues[*b]));
        let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let scale = eigenvalues.iter().fold(1e-300f64, |s, v| s.max(v.abs()));
        let gap = eigenvalues.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        if gap < 1e-9 * scale {
            return Err(Error::DegenerateSpectrum(gap));
        }
        let eigenvectors = DMatrix::from_fn(m.nrows(), m.nrows(), |r, col| eig.eigenvectors[(r, order[col])]);
        Ok(Self { matrix: m, eigenvalues, eigenvectors })
    }

    pub fn pauli_x() -> Self {
        Self::new(DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])).expect("nondegenerate")
    }

    pub fn pauli_y() -> Self {
        let i = Complex64::new(0.0, 1.0);
        Self::new(DMatrix::from_row_slice(2, 2, &[c(0.0), -i, i, c(0.0)])).expect("nondegenerate")
    }

    pub fn pauli_z() -> Self {
        Self::new(DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)])).expect("nondegenerate")
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    /// Largest entry of `A - Σ a |a⟩⟨a|`.
    pub fn reconstruction_error(&self) -> f64 {
        let d = DMatrix::from_diagonal(&DVector::from_iterator(self.dim(), self.eigenvalues.iter().map(|v| c(*v))));
        let rebuilt = &self.eigenvectors * d * self.eigenvectors.adjoint();
        (rebuilt - &self.matrix).iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }
}

/// `B^A_cl = Σ_a |a⟩⟨a| Re⟨a|Bρ|a⟩/⟨a|ρ|a⟩` together with its moments on `ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalComponent {
    /// Value of `B^A_cl` on each eigenvector of `A`; `None` off support.
    pub values: Vec<Option<f64>>,
    /// `⟨a|ρ|a⟩`.
    pub weights: Vec<f64>,
    /// `⟨a|Bρ|a⟩`.
    pub b_rho: Vec<Complex64>,
    pub mean_b: f64,
    pub mean_cl: f64,
    pub var_b: f64,
    pub var_cl: f64,
    pub var_nc: f64,
    basis: DMatrix<Complex64>,
}

impl ClassicalComponent {
    /// `B^A_cl` as a matrix, with off-support eigenvectors given eigenvalue zero.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let diag = DVector::from_iterator(self.values.len(), self.values.iter().map(|v| c(v.unwrap_or(0.0))));
        &self.basis * DMatrix::from_diagonal(&diag) * self.basis.adjoint()
    }

    pub fn nonclassical_spread(&self) -> f64 {
        self.var_nc.max(0.0).sqrt()
    }
}

fn check_dims(a: &FiniteObservable, b: &FiniteObservable, rho: &FiniteState) -> Result<()> {
    for got in [b.dim(), rho.dim()] {
        if got != a.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), got });
        }
    }
    Ok(())
}

/// Best estimate of `B` compatible with a measurement of `A`.
pub fn classical_component(a: &FiniteObservable, b: &FiniteObservable, rho: &FiniteState) -> Result<ClassicalComponent> {
    check_dims(a, b, rho)?;
    let br = b.matrix() * rho.matrix();
    let basis = a.eigenvectors().clone();
    let mut values = Vec::with_capacity(a.dim());
    let mut weights = Vec::with_capacity(a.dim());
    let mut b_rho = Vec::with_capacity(a.dim());
    for col in basis.column_iter() {
        let w = (col.adjoint() * rho.matrix() * col)[(0, 0)].re;
        let z = (col.adjoint() * &br * col)[(0, 0)];
        weights.push(w);
        b_rho.push(z);
        values.push((w >= SUPPORT_WEIGHT).then(|| z.re / w));
    }
    let mean_b = rho.expect(b.matrix()).re;
    let second_b = rho.expect(&(b.matrix() * b.matrix())).re;
    let (mut mean_cl, mut second_cl) = (0.0, 0.0);
    for (v, w) in values.iter().zip(&weights) {
        if let Some(v) = v {
            mean_cl += w * v;
            second_cl += w * v * v;
        }
    }
    let var_b = second_b - mean_b * mean_b;
    let var_cl = second_cl - mean_cl * mean_cl;
    Ok(ClassicalComponent {
        values,
        weights,
        b_rho,
        mean_b,
        mean_cl,
        var_b,
        var_cl,
        var_nc: second_b - second_cl,
        basis,
    })
}

/// The generalized relation `δ_BA·ΔB^A_nc ≥ ħ/2` and its ingredients.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedRelation {
    /// Equality for pure states, lower bound for mixtures.
    pub check: RelationCheck,
    /// `(δ_BA)^{-2} = Σ_a ⟨a|(i/ħ)[B,ρ]|a⟩² / ⟨a|ρ|a⟩`.
    pub inverse_square: f64,
    pub delta: f64,
    pub component: ClassicalComponent,
}

/// Threshold below which both `(δ_BA)^{-2}` and `(ΔB^A_nc)²` count as zero.
pub const DEGENERATE_PRODUCT: f64 = 1e-12;

/// Generalized exact relation for a reference observable `A` and a target `B`.
pub fn generalized_ur(a: &FiniteObservable, b: &FiniteObservable, rho: &FiniteState, hbar: f64) -> Result<GeneralizedRelation> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
    }
    let component = classical_component(a, b, rho)?;
    // ⟨a|[B,ρ]|a⟩ = 2i Im⟨a|Bρ|a⟩.
    let inverse_square: f64 = component
        .weights
        .iter()
        .zip(&component.b_rho)
        .filter(|(w, _)| **w >= SUPPORT_WEIGHT)
        .map(|(w, z)| 4.0 * z.im * z.im / (hbar * hbar * w))
        .sum();
    let delta = inverse_square.sqrt().recip();
    let scale = hbar * hbar;
    let indeterminate = inverse_square * scale < DEGENERATE_PRODUCT && component.var_nc.abs() < DEGENERATE_PRODUCT * scale.max(1.0);
    let lhs = if indeterminate { f64::NAN } else { delta * component.nonclassical_spread() };
    let pure = (rho.purity() - 1.0).abs() < 1e-10;
    let check = if pure {
        RelationCheck::equal("delta_BA x nonclassical spread (pure)", "generalized-exact", lhs, hbar / 2.0, Tolerance::Relative(1e-8))
    } else {
        RelationCheck::at_least("delta_BA x nonclassical spread (mixed)", "generalized-inequality", lhs, hbar / 2.0, Tolerance::Relative(1e-8))
    }
    .mark_indeterminate(indeterminate);
    Ok(GeneralizedRelation { check, inverse_square, delta, component })
}

/// `d + 1` pairwise mutually unbiased orthonormal bases of `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct MubSet {
    dim: usize,
    /// Each basis stores its vectors as columns.
    bases: Vec<DMatrix<Complex64>>,
}

impl MubSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bases(&self) -> &[DMatrix<Complex64>] {
        &self.bases
    }

    /// Largest deviation of `|⟨e|f⟩|²` from `1/d` across distinct bases, and of each
    /// basis from orthonormality.
    pub fn max_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let target = 1.0 / self.dim as f64;
        for (i, a) in self.bases.iter().enumerate() {
            let gram = a.adjoint() * a;
            worst = worst.max((gram - DMatrix::identity(self.dim, self.dim)).iter().fold(0.0, |m, z| m.max(z.norm())));
            for b in &self.bases[i + 1..] {
                let overlaps = a.adjoint() * b;
                worst = worst.max(overlaps.iter().fold(0.0, |m, z| m.max((z.norm_sqr() - target).abs())));
            }
        }
        worst
    }
}

fn is_prime(d: usize) -> bool {
    d >= 2 && (2..).take_while(|k| k * k <= d).all(|k| !d.is_multiple_of(k))
}

/// Mutually unbiased bases for prime `d`: the Pauli eigenbases for `d = 2`, otherwise the
/// computational basis plus `(1/√d) Σ_n ω^{k n² + j n} |n⟩` for `k = 0..d`.
pub fn mub_bases(d: usize) -> Result<MubSet> {
    if !is_prime(d) {
        return Err(Error::Unsupported(format!("mutually unbiased bases need a prime dimension, got {d}")));
    }
    let bases = if d == 2 {
        [FiniteObservable::pauli_z(), FiniteObservable::pauli_x(), FiniteObservable::pauli_y()]
            .into_iter()
            .map(|o| o.eigenvectors().clone())
            .collect()
    } else {
        let omega = |e: usize| Complex64::from_polar(1.0 / (d as f64).sqrt(), 2.0 * std::f64::consts::PI * (e % d) as f64 / d as f64);
        let mut bases = vec![DMatrix::identity(d, d)];
        for k in 0..d {
            bases.push(DMatrix::from_fn(d, d, |n, j| omega(k * n * n + j * n)));
        }
        bases
    };
    Ok(MubSet { dim: d, bases })
}

/// Outcome probabilities of `ρ` in each basis.
pub fn basis_probabilities(rho: &FiniteState, m: &MubSet) -> Result<Vec<Vec<f64>>> {
    if rho.dim() != m.dim {
        return Err(Error::DimensionMismatch { expected: m.dim, got: rho.dim() });
    }
    Ok(m.bases
        .iter()
        .map(|basis| basis.column_iter().map(|e| (e.adjoint() * rho.matrix() * e)[(0, 0)].re).collect())
        .collect())
}

/// Collision lengths and the reciprocal-sum relation `Σ 1/L_i = 1 + tr ρ²`.
#[derive(Debug, Clone, PartialEq)]
pub struct IvanovicReport {
    pub lengths: Vec<f64>,
    pub purity: f64,
    pub equality: RelationCheck,
    /// `Σ 1/L_i ≤ 2`.
    pub bound: RelationCheck,
}

pub fn ivanovic_check(rho: &FiniteState, m: &MubSet) -> Result<IvanovicReport> {
    let lengths = basis_probabilities(rho, m)?
        .iter()
        .map(|p| crate::fisher_stats::collision_length(p))
        .collect::<Result<Vec<_>>>()?;
    let sum: f64 = lengths.iter().map(|l| l.recip()).sum();
    let purity = rho.purity();
    Ok(IvanovicReport {
        equality: RelationCheck::equal(
            "sum of reciprocal collision lengths vs 1 + purity",
            "collision-lengths",
            sum,
            1.0 + purity,
            Tolerance::Absolute(1e-12),
        ),
        bound: RelationCheck::at_most("sum of reciprocal collision lengths", "collision-lengths", sum, 2.0, Tolerance::Absolute(1e-12)),
        lengths,
        purity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::Status;

    fn ket(v: &[(f64, f64)]) -> Vec<Complex64> {
        v.iter().map(|(r, i)| Complex64::new(*r, *i)).collect()
    }

    #[test]
    fn qubit_oracle() {
        // ψ = (|0⟩ + i|1⟩)/√2, A = z, B = x:
        // Bψ = (i|0⟩ + |1⟩)/√2, so ⟨a|Bρ|a⟩ = ⟨a|B|ψ⟩⟨ψ|a⟩ = (i/2, -i/2) for a = (+1, -1);
        // both real parts vanish, B_cl = 0, Var B_nc = ⟨x²⟩ = 1,
        // (δ_BA)^{-2} = 4(1/4)/(1/2) · 2 = 4, δ_BA = 1/2.
        let s = 0.5f64.sqrt();
        let rho = FiniteState::pure(&ket(&[(s, 0.0), (0.0, s)])).unwrap();
        let r = generalized_ur(&FiniteObservable::pauli_z(), &FiniteObservable::pauli_x(), &rho, 1.0).unwrap();
        assert!(r.component.values.iter().all(|v| v.unwrap().abs() < 1e-15));
        assert!((r.component.var_nc - 1.0).abs() < 1e-15);
        assert!((r.delta - 0.5).abs() < 1e-15);
        assert!((r.check.lhs - 0.5).abs() < 1e-15 && r.check.passed());
    }

    #[test]
    fn ground_state_classical_x_vanishes() {
        let rho = FiniteState::pure(&ket(&[(1.0, 0.0), (0.0, 0.0)])).unwrap();
        let cc = classical_component(&FiniteObservable::pauli_z(), &FiniteObservable::pauli_x(), &rho).unwrap();
        let supported: Vec<f64> = cc.values.iter().flatten().cloned().collect();
        assert_eq!(supported, vec![0.0]);
        assert_eq!(cc.values.iter().filter(|v| v.is_none()).count(), 1);
    }

    #[test]
    fn self_estimate_is_exact() {
        let a = FiniteObservable::new(DMatrix::from_row_slice(
            3,
            3,
            &[c(1.0), Complex64::new(0.2, 0.3), c(0.0), Complex64::new(0.2, -0.3), c(-0.5), c(0.4), c(0.0), c(0.4), c(2.0)],
        ))
        .unwrap();
        let rho = FiniteState::pure(&ket(&[(0.3, 0.1), (0.5, -0.7), (0.2, 0.4)])).unwrap();
        let cc = classical_component(&a, &a, &rho).unwrap();
        assert!((cc.matrix() - a.matrix()).iter().all(|z| z.norm() < 1e-12));
        assert!(cc.var_nc.abs() < 1e-12);
        assert!(a.reconstruction_error() < 1e-12);
    }

    #[test]
    fn real_qubit_is_indeterminate() {
        let t: f64 = 0.4;
        let rho = FiniteState::pure(&ket(&[(t.cos(), 0.0), (t.sin(), 0.0)])).unwrap();
        let r = generalized_ur(&FiniteObservable::pauli_z(), &FiniteObservable::pauli_x(), &rho, 1.0).unwrap();
        assert_eq!(r.check.status, Status::Indeterminate);
    }

    #[test]
    fn degenerate_and_invalid_inputs() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0), c(1.0), c(2.0)]));
        assert!(matches!(FiniteObservable::new(m), Err(Error::DegenerateSpectrum(_))));
        assert!(matches!(mub_bases(4), Err(Error::Unsupported(_))));
        let bad = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.5)]);
        assert!(matches!(FiniteState::from_matrix(bad), Err(Error::NotNormalized(_))));
        let neg = DMatrix::from_row_slice(2, 2, &[c(1.5), c(0.0), c(0.0), c(-0.5)]);
        assert!(matches!(FiniteState::from_matrix(neg), Err(Error::NotPositive(_))));
    }

    #[test]
    fn mub_overlaps() {
        for d in [2, 3, 5, 7] {
            let m = mub_bases(d).unwrap();
            assert_eq!(m.bases().len(), d + 1);
            assert!(m.max_defect() < 1e-12, "d={d}");
        }
    }

    #[test]
    fn collision_length_examples() {
        let m = mub_bases(2).unwrap();
        let r = ivanovic_check(&FiniteState::pure(&ket(&[(1.0, 0.0), (0.0, 0.0)])).unwrap(), &m).unwrap();
        assert!((r.lengths[0] - 1.0).abs() < 1e-12 && (r.lengths[1] - 2.0).abs() < 1e-12 && (r.lengths[2] - 2.0).abs() < 1e-12);
        assert!(r.equality.passed() && (r.equality.lhs - 2.0).abs() < 1e-12);
        let r = ivanovic_check(&FiniteState::maximally_mixed(2).unwrap(), &m).unwrap();
        assert!(r.lengths.iter().all(|l| (l - 2.0).abs() < 1e-12));
        assert!((r.equality.lhs - 1.5).abs() < 1e-12);
    }

    #[test]
    fn mixture_obeys_inequality() {
        let s = 0.5f64.sqrt();
        let rho = FiniteState::mixture(&[(0.7, ket(&[(s, 0.0), (0.0, s)])), (0.3, ket(&[(0.6, 0.0), (0.0, -0.8)]))]).unwrap();
        let r = generalized_ur(&FiniteObservable::pauli_z(), &FiniteObservable::pauli_x(), &rho, 1.0).unwrap();
        assert!(r.check.passed() && r.check.lhs > 0.5, "{}", r.check);
    }
}
