//! Signals, bases, sensing matrices, and the measurement step `y = Phi x + z`.
//!
//! All matrices are dense `f64`; problem sizes stay in the low thousands, so
//! clarity and exactness win over sparse machinery.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{CsError, Result};

/// Maximum absolute deviation tolerated when validating that a user-supplied
/// basis is orthonormal.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;

/// An orthonormal sparsity basis `Psi`.
///
/// The matrix is behind an `Arc`, so cloning a `Basis` is cheap and a single
/// basis can be shared by every trial of a sweep.
#[derive(Debug, Clone)]
pub struct Basis {
    n: usize,
    matrix: Arc<DMatrix<f64>>,
}

impl Basis {
    /// Wrap an `n x n` matrix, validating orthonormality: every entry of
    /// `Psi^T Psi - I` must be below [`ORTHONORMALITY_TOL`] in magnitude.
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if n == 0 || matrix.ncols() != n {
            return Err(CsError::InvalidParameter(format!(
                "basis must be square and nonempty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let gram = matrix.transpose() * &matrix;
        let deviation = max_abs_deviation_from_identity(&gram);
        if deviation > ORTHONORMALITY_TOL {
            return Err(CsError::InvalidParameter(format!(
                "basis is not orthonormal: max |Psi^T Psi - I| = {deviation:e}"
            )));
        }
        Ok(Self {
            n,
            matrix: Arc::new(matrix),
        })
    }

    /// Dimension of the basis.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The basis matrix `Psi`.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Synthesize `x = Psi theta` for a `theta` that is nonzero only on
    /// `support` (indices ascending, coefficients in the same order).
    ///
    /// Accumulates basis columns in ascending support order, which matches a
    /// dense product term by term: zero coefficients contribute exactly
    /// nothing, so the result is bit-identical to `Psi * theta`.
    pub fn synthesize_sparse(&self, support: &[usize], coeffs: &[f64]) -> DVector<f64> {
        debug_assert_eq!(support.len(), coeffs.len());
        let mut x = DVector::zeros(self.n);
        for (&j, &c) in support.iter().zip(coeffs.iter()) {
            x.axpy(c, &self.matrix.column(j), 1.0);
        }
        x
    }
}

/// The orthonormal DCT-II basis of dimension `n`.
///
/// Entry `(k, j)` is `c_k cos(pi (2j+1) k / (2n))` with `c_0 = sqrt(1/n)` and
/// `c_k = sqrt(2/n)` for `k >= 1`. Built by direct evaluation; O(n^2) is fine
/// at the sizes this crate targets.
pub fn dct_basis(n: usize) -> Basis {
    assert!(n >= 1, "dct_basis requires n >= 1");
    let c0 = (1.0 / n as f64).sqrt();
    let ck = (2.0 / n as f64).sqrt();
    let matrix = DMatrix::from_fn(n, n, |k, j| {
        let scale = if k == 0 { c0 } else { ck };
        let angle = std::f64::consts::PI * (2 * j + 1) as f64 * k as f64 / (2 * n) as f64;
        scale * angle.cos()
    });
    Basis {
        n,
        matrix: Arc::new(matrix),
    }
}

/// A signal that is exactly `k`-sparse in some basis.
#[derive(Debug, Clone)]
pub struct SparseSignal {
    /// Signal length.
    pub n: usize,
    /// Number of nonzero coefficients.
    pub k: usize,
    /// Nonzero coefficient indices, ascending.
    pub support: Vec<usize>,
    /// Coefficient vector; zero outside `support`.
    pub theta: DVector<f64>,
    /// Dense representation `x = Psi theta`.
    pub x: DVector<f64>,
}

/// Draw a `k`-sparse signal: support uniform over `k`-subsets of `[0, n)`,
/// nonzero coefficients i.i.d. `N(0, sigma2_theta)`.
///
/// Draw order is fixed for reproducibility: the support first (partial
/// Fisher-Yates over the index array, then sorted ascending), then one
/// Gaussian per support index in ascending index order.
pub fn gen_sparse_signal<R: Rng>(
    n: usize,
    k: usize,
    sigma2_theta: f64,
    basis: &Basis,
    rng: &mut R,
) -> Result<SparseSignal> {
    if k == 0 || k >= n {
        return Err(CsError::InvalidParameter(format!(
            "sparsity must satisfy 0 < k < n, got k = {k}, n = {n}"
        )));
    }
    if !(sigma2_theta > 0.0) {
        return Err(CsError::InvalidParameter(format!(
            "sigma2_theta must be positive, got {sigma2_theta}"
        )));
    }
    if basis.n() != n {
        return Err(CsError::DimensionMismatch {
            what: "basis dimension",
            expected: n,
            actual: basis.n(),
        });
    }

    // Partial Fisher-Yates: after k swaps the first k slots are a uniform
    // k-subset in random order.
    let mut indices: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        indices.swap(i, j);
    }
    let mut support = indices[..k].to_vec();
    support.sort_unstable();

    let sigma_theta = sigma2_theta.sqrt();
    let coeffs: Vec<f64> = (0..k)
        .map(|_| sigma_theta * rng.sample::<f64, _>(StandardNormal))
        .collect();

    let mut theta = DVector::zeros(n);
    for (&j, &c) in support.iter().zip(coeffs.iter()) {
        theta[j] = c;
    }
    let x = basis.synthesize_sparse(&support, &coeffs);

    Ok(SparseSignal {
        n,
        k,
        support,
        theta,
        x,
    })
}

/// Draw an `m x n` sensing matrix with i.i.d. `N(0, sigma2_phi)` entries.
///
/// Entries are drawn in column-major order. The result is the raw matrix;
/// pair it with a basis via [`SensingSetup::new`].
pub fn gen_sensing_matrix<R: Rng>(
    m: usize,
    n: usize,
    sigma2_phi: f64,
    rng: &mut R,
) -> Result<DMatrix<f64>> {
    if m == 0 || m >= n {
        return Err(CsError::InvalidParameter(format!(
            "measurement count must satisfy 0 < m < n, got m = {m}, n = {n}"
        )));
    }
    if !(sigma2_phi > 0.0) {
        return Err(CsError::InvalidParameter(format!(
            "sigma2_phi must be positive, got {sigma2_phi}"
        )));
    }
    let sigma_phi = sigma2_phi.sqrt();
    let mut phi = DMatrix::zeros(m, n);
    for j in 0..n {
        for i in 0..m {
            phi[(i, j)] = sigma_phi * rng.sample::<f64, _>(StandardNormal);
        }
    }
    Ok(phi)
}

/// A sensing matrix paired with a basis and the derived product `U = Phi Psi`.
#[derive(Debug, Clone)]
pub struct SensingSetup {
    /// Measurement count.
    pub m: usize,
    /// Signal length.
    pub n: usize,
    /// Per-entry variance of the sensing matrix.
    pub sigma2_phi: f64,
    /// The `m x n` sensing matrix `Phi`.
    pub phi: DMatrix<f64>,
    /// The sparsity basis `Psi`.
    pub basis: Basis,
    /// The derived `m x n` matrix `U = Phi Psi`.
    pub u: DMatrix<f64>,
}

impl SensingSetup {
    /// Pair a sensing matrix with a basis, computing `U = Phi Psi`.
    pub fn new(phi: DMatrix<f64>, sigma2_phi: f64, basis: Basis) -> Result<Self> {
        let (m, n) = phi.shape();
        if m == 0 || m >= n {
            return Err(CsError::InvalidParameter(format!(
                "sensing matrix must be wide (0 < m < n), got {m}x{n}"
            )));
        }
        if basis.n() != n {
            return Err(CsError::DimensionMismatch {
                what: "basis dimension",
                expected: n,
                actual: basis.n(),
            });
        }
        let u = &phi * basis.matrix();
        Ok(Self {
            m,
            n,
            sigma2_phi,
            phi,
            basis,
            u,
        })
    }
}

/// The measurement step `y = Phi x + z`.
pub fn measure(setup: &SensingSetup, x: &DVector<f64>, z: &DVector<f64>) -> Result<DVector<f64>> {
    if x.len() != setup.n {
        return Err(CsError::DimensionMismatch {
            what: "signal length",
            expected: setup.n,
            actual: x.len(),
        });
    }
    if z.len() != setup.m {
        return Err(CsError::DimensionMismatch {
            what: "noise length",
            expected: setup.m,
            actual: z.len(),
        });
    }
    let mut y = &setup.phi * x;
    y += z;
    Ok(y)
}

fn max_abs_deviation_from_identity(gram: &DMatrix<f64>) -> f64 {
    let n = gram.nrows();
    let mut max = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            max = max.max((gram[(i, j)] - target).abs());
        }
    }
    max
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use approx::assert_relative_eq;

    fn max_gram_deviation(basis: &Basis) -> f64 {
        let gram = basis.matrix().transpose() * basis.matrix();
        max_abs_deviation_from_identity(&gram)
    }

    #[test]
    fn dct_dimension_one_is_unit() {
        let b = dct_basis(1);
        assert_eq!(b.matrix()[(0, 0)], 1.0);
    }

    #[test]
    fn dct_dimension_two_matches_formula() {
        let b = dct_basis(2);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(b.matrix()[(0, 0)], r, max_relative = 1e-15);
        assert_relative_eq!(b.matrix()[(0, 1)], r, max_relative = 1e-15);
        assert_relative_eq!(b.matrix()[(1, 0)], r, max_relative = 1e-15);
        assert_relative_eq!(b.matrix()[(1, 1)], -r, max_relative = 1e-15);
    }

    #[test]
    fn dct_is_orthonormal() {
        for n in [1, 2, 16, 512] {
            assert!(
                max_gram_deviation(&dct_basis(n)) < 1e-10,
                "DCT basis of dimension {n} failed orthonormality"
            );
        }
    }

    #[test]
    fn synthesis_preserves_energy() {
        let basis = dct_basis(64);
        let mut rng = RngStream::new(11, 0).rng();
        for _ in 0..20 {
            let signal = gen_sparse_signal(64, 5, 1.0, &basis, &mut rng).unwrap();
            assert_relative_eq!(signal.x.norm(), signal.theta.norm(), max_relative = 1e-10);
        }
    }

    #[test]
    fn sparse_signal_has_exactly_k_nonzeros() {
        let basis = dct_basis(128);
        let mut rng = RngStream::new(3, 0).rng();
        let signal = gen_sparse_signal(128, 9, 2.0, &basis, &mut rng).unwrap();
        let nonzero: Vec<usize> = (0..128).filter(|&i| signal.theta[i] != 0.0).collect();
        assert_eq!(nonzero, signal.support);
        assert_eq!(signal.support.len(), 9);
    }

    #[test]
    fn sparse_signal_rejects_bad_sparsity() {
        let basis = dct_basis(4);
        let mut rng = RngStream::new(0, 0).rng();
        assert!(gen_sparse_signal(4, 4, 1.0, &basis, &mut rng).is_err());
        assert!(gen_sparse_signal(4, 0, 1.0, &basis, &mut rng).is_err());
    }

    #[test]
    fn sparse_signal_mean_energy_matches_k_sigma2() {
        // E[||theta||^2] = k sigma2_theta; Monte-Carlo estimate over 10^4 draws.
        let basis = dct_basis(512);
        let mut rng = RngStream::new(5, 0).rng();
        let trials = 10_000;
        let mut total = 0.0;
        for _ in 0..trials {
            let signal = gen_sparse_signal(512, 16, 1.0, &basis, &mut rng).unwrap();
            total += signal.theta.norm_squared();
        }
        let mean = total / trials as f64;
        assert!(
            (mean - 16.0).abs() / 16.0 < 0.05,
            "mean coefficient energy {mean} outside 5% of 16"
        );
    }

    #[test]
    fn sensing_matrix_entry_variance() {
        // 65536 entries at variance 1/128; the sample variance lands within 5%.
        let mut rng = RngStream::new(9, 0).rng();
        let phi = gen_sensing_matrix(128, 512, 1.0 / 128.0, &mut rng).unwrap();
        let mean: f64 = phi.iter().sum::<f64>() / (128.0 * 512.0);
        let var: f64 = phi.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (128.0 * 512.0);
        assert!(
            (var - 1.0 / 128.0).abs() / (1.0 / 128.0) < 0.05,
            "entry variance {var} outside 5% of 1/128"
        );
    }

    #[test]
    fn sensing_matrix_column_norms() {
        // E[||column||^2] = m sigma2_phi = 1 when sigma2_phi = 1/m.
        let mut rng = RngStream::new(10, 0).rng();
        let phi = gen_sensing_matrix(128, 512, 1.0 / 128.0, &mut rng).unwrap();
        let mean_norm2: f64 = (0..512).map(|j| phi.column(j).norm_squared()).sum::<f64>() / 512.0;
        assert!(
            (mean_norm2 - 1.0).abs() < 0.05,
            "mean column energy {mean_norm2} not near 1"
        );
    }

    #[test]
    fn sensing_matrix_rejects_degenerate_shapes() {
        let mut rng = RngStream::new(0, 0).rng();
        assert!(gen_sensing_matrix(0, 4, 1.0, &mut rng).is_err());
        assert!(gen_sensing_matrix(4, 4, 1.0, &mut rng).is_err());
        assert!(gen_sensing_matrix(5, 4, 1.0, &mut rng).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let basis = dct_basis(64);
        let draw = || {
            let mut rng = RngStream::new(77, 13).rng();
            let phi = gen_sensing_matrix(16, 64, 1.0 / 16.0, &mut rng).unwrap();
            let sig = gen_sparse_signal(64, 4, 1.0, &basis, &mut rng).unwrap();
            (phi, sig)
        };
        let (phi_a, sig_a) = draw();
        let (phi_b, sig_b) = draw();
        assert_eq!(phi_a, phi_b);
        assert_eq!(sig_a.support, sig_b.support);
        assert_eq!(sig_a.theta, sig_b.theta);
        assert_eq!(sig_a.x, sig_b.x);
    }

    #[test]
    fn setup_product_matches_naive_loop() {
        let basis = dct_basis(96);
        let mut rng = RngStream::new(21, 0).rng();
        let phi = gen_sensing_matrix(24, 96, 1.0 / 24.0, &mut rng).unwrap();
        let setup = SensingSetup::new(phi.clone(), 1.0 / 24.0, basis.clone()).unwrap();
        for i in 0..24 {
            for j in 0..96 {
                let mut acc = 0.0;
                for l in 0..96 {
                    acc += phi[(i, l)] * basis.matrix()[(l, j)];
                }
                assert!(
                    (setup.u[(i, j)] - acc).abs() < 1e-12,
                    "u[{i},{j}] deviates from direct product"
                );
            }
        }
    }

    #[test]
    fn measure_identity_sensing_truncates() {
        // Phi = [I_m | 0]: y recovers the first m entries of x.
        let m = 3;
        let n = 6;
        let mut phi = DMatrix::zeros(m, n);
        for i in 0..m {
            phi[(i, i)] = 1.0;
        }
        let basis = Basis::from_matrix(DMatrix::identity(n, n)).unwrap();
        let setup = SensingSetup::new(phi, 1.0, basis).unwrap();
        let x = DVector::from_vec(vec![1.0, -2.0, 3.0, 4.0, 5.0, 6.0]);
        let z = DVector::zeros(m);
        let y = measure(&setup, &x, &z).unwrap();
        assert_eq!(y, DVector::from_vec(vec![1.0, -2.0, 3.0]));
    }

    #[test]
    fn measure_zero_signal_returns_noise() {
        let basis = dct_basis(8);
        let mut rng = RngStream::new(2, 0).rng();
        let phi = gen_sensing_matrix(4, 8, 0.25, &mut rng).unwrap();
        let setup = SensingSetup::new(phi, 0.25, basis).unwrap();
        let z = DVector::from_vec(vec![0.5, -0.5, 1.0, 0.0]);
        let y = measure(&setup, &DVector::zeros(8), &z).unwrap();
        assert_eq!(y, z);
    }

    #[test]
    fn measure_matches_naive_dot_products() {
        let basis = dct_basis(512);
        let mut rng = RngStream::new(31, 0).rng();
        let phi = gen_sensing_matrix(128, 512, 1.0 / 128.0, &mut rng).unwrap();
        let setup = SensingSetup::new(phi.clone(), 1.0 / 128.0, basis.clone()).unwrap();
        let sig = gen_sparse_signal(512, 16, 1.0, &basis, &mut rng).unwrap();
        let z: DVector<f64> = DVector::from_fn(128, |i, _| (i as f64).sin());
        let y = measure(&setup, &sig.x, &z).unwrap();
        for i in 0..128 {
            let mut acc = 0.0;
            for j in 0..512 {
                acc += phi[(i, j)] * sig.x[j];
            }
            acc += z[i];
            assert!((y[i] - acc).abs() < 1e-12, "entry {i} deviates");
        }
    }

    #[test]
    fn measure_rejects_mismatched_dimensions() {
        let basis = dct_basis(8);
        let mut rng = RngStream::new(2, 0).rng();
        let phi = gen_sensing_matrix(4, 8, 0.25, &mut rng).unwrap();
        let setup = SensingSetup::new(phi, 0.25, basis).unwrap();
        assert!(measure(&setup, &DVector::zeros(7), &DVector::zeros(4)).is_err());
        assert!(measure(&setup, &DVector::zeros(8), &DVector::zeros(5)).is_err());
    }

    #[test]
    fn basis_validation_rejects_non_orthonormal() {
        let mut m = DMatrix::identity(3, 3);
        m[(0, 0)] = 1.1;
        assert!(Basis::from_matrix(m).is_err());
    }
}
