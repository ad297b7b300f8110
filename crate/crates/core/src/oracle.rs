//! The oracle estimator: least-squares reconstruction restricted to the known
//! support, `theta_hat_omega = pinv(U_omega) y`, then `x_hat = Psi theta_hat`.
//!
//! The least-squares solve goes through an SVD of the restricted matrix, not
//! through the normal equations `(U^T U)^{-1} U^T y`; the two agree in exact
//! arithmetic and the factorized form is the better-conditioned one. A
//! rank-deficient restriction is reported as an error, never regularized.

use nalgebra::{DMatrix, DVector};

use crate::error::{CsError, Result};
use crate::model::SensingSetup;

/// Relative singular-value threshold below which the restricted matrix is
/// declared rank deficient. Gaussian restrictions are full rank almost
/// surely; this guards hand-built input.
pub const RANK_TOL: f64 = 1e-10;

/// Result of one oracle reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReconstruction {
    /// Length-`n` coefficient estimate; exactly zero off the support.
    pub theta_hat: DVector<f64>,
    /// Length-`n` signal estimate `Psi theta_hat`.
    pub x_hat: DVector<f64>,
    /// `||x_hat - x||^2` when the true signal was supplied.
    pub squared_error: Option<f64>,
}

/// Keep the columns of `u` indexed by `support`, in the given order.
pub fn restrict_columns(u: &DMatrix<f64>, support: &[usize]) -> Result<DMatrix<f64>> {
    let n = u.ncols();
    if support.is_empty() {
        return Err(CsError::InvalidSupport("support set is empty".into()));
    }
    let mut seen = vec![false; n];
    for &j in support {
        if j >= n {
            return Err(CsError::InvalidSupport(format!(
                "index {j} out of range for {n} columns"
            )));
        }
        if seen[j] {
            return Err(CsError::InvalidSupport(format!("duplicate index {j}")));
        }
        seen[j] = true;
    }
    Ok(u.select_columns(support.iter()))
}

/// Minimum-norm least-squares solve `argmin ||u_omega t - y||` via SVD.
///
/// Refuses rank-deficient input: every singular value must exceed
/// [`RANK_TOL`] times the largest. The Monte-Carlo harness calls this
/// directly with a restricted matrix it assembled itself;
/// [`oracle_reconstruct`] wraps it for a full [`SensingSetup`].
pub fn oracle_solve_restricted(u_omega: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    if y.len() != u_omega.nrows() {
        return Err(CsError::DimensionMismatch {
            what: "measurement length",
            expected: u_omega.nrows(),
            actual: y.len(),
        });
    }
    if u_omega.ncols() > u_omega.nrows() {
        return Err(CsError::InvalidSupport(format!(
            "support size {} exceeds measurement count {}",
            u_omega.ncols(),
            u_omega.nrows()
        )));
    }
    let svd = u_omega.clone().svd(true, true);
    let largest = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let smallest = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if !(smallest > RANK_TOL * largest) {
        return Err(CsError::SingularMatrix {
            smallest,
            largest,
            tolerance: RANK_TOL,
        });
    }
    svd.solve(y, 0.0)
        .map_err(|e| CsError::Internal(format!("SVD solve failed: {e}")))
}

/// Oracle reconstruction from measurements `y` with known support.
///
/// Computes the least-squares coefficients on the restricted columns of
/// `U = Phi Psi`, embeds them into a length-`n` vector that is zero off the
/// support, and synthesizes `x_hat = Psi theta_hat`. When `x_true` is given,
/// the raw squared error `||x_hat - x||^2` is filled in.
pub fn oracle_reconstruct(
    setup: &SensingSetup,
    support: &[usize],
    y: &DVector<f64>,
    x_true: Option<&DVector<f64>>,
) -> Result<OracleReconstruction> {
    if support.len() >= setup.m {
        return Err(CsError::InvalidSupport(format!(
            "support size {} must be below measurement count {}",
            support.len(),
            setup.m
        )));
    }
    if let Some(x) = x_true {
        if x.len() != setup.n {
            return Err(CsError::DimensionMismatch {
                what: "signal length",
                expected: setup.n,
                actual: x.len(),
            });
        }
    }
    let u_omega = restrict_columns(&setup.u, support)?;
    let theta_omega = oracle_solve_restricted(&u_omega, y)?;

    let mut theta_hat = DVector::zeros(setup.n);
    for (i, &j) in support.iter().enumerate() {
        theta_hat[j] = theta_omega[i];
    }
    let x_hat = setup
        .basis
        .synthesize_sparse(support, theta_omega.as_slice());
    let squared_error = x_true.map(|x| (&x_hat - x).norm_squared());

    Ok(OracleReconstruction {
        theta_hat,
        x_hat,
        squared_error,
    })
}
