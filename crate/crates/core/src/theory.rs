//! Closed-form predictions and bounds for the oracle receiver: the exact
//! expected-MSE formula, the RIP-based prior bounds, brute-force RIP
//! constants on small instances, and an empirical check of the singular
//! Wishart pseudo-inverse mean that the exact formula rests on.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{CsError, Result};
use crate::noise::CovarianceSummary;
use crate::rng::RngStream;

/// Hard cap on the number of k-subsets the brute-force RIP search will
/// enumerate.
pub const RIP_SUBSET_GUARD: u64 = 1_000_000;

/// Closed form and RIP bounds evaluated at one noise configuration and one
/// RIP constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSet {
    /// Exact expected MSE `k tr(Sigma_z) / (m (m - k - 1) sigma2_phi)`.
    pub closed_form: f64,
    /// White-noise lower bound `k sigma2_z / (1 + delta_k)`.
    pub rip_lower_white: f64,
    /// White-noise upper bound `k sigma2_z / (1 - delta_k)`.
    pub rip_upper_white: f64,
    /// Correlated-noise upper bound `k lambda_max / (1 - delta_k)`.
    pub rip_upper_corr: f64,
    /// The RIP constant the bounds were evaluated at.
    pub delta_k: f64,
}

/// Outcome of the Monte-Carlo check of the pseudo-inverse mean
/// `E[(U_omega U_omega^T)^+] = k / (m (m - k - 1) sigma2_phi) I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WishartCheckReport {
    pub m: usize,
    pub k: usize,
    /// Per-entry variance of the Gaussian draws.
    pub sigma2_phi: f64,
    /// Number of independent draws averaged.
    pub trials: usize,
    /// The predicted diagonal value `k / (m (m - k - 1) sigma2_phi)`.
    pub predicted_scale: f64,
    /// Average diagonal entry of the empirical mean matrix.
    pub empirical_diag_mean: f64,
    /// Largest `|entry|` off the diagonal of the empirical mean matrix.
    pub empirical_offdiag_max: f64,
}

/// Result of a brute-force RIP constant search.
#[derive(Debug, Clone, PartialEq)]
pub struct RipEstimate {
    /// `delta_k = max over k-subsets of || A_omega^T A_omega - I ||_2`.
    pub delta_k: f64,
    /// The subset attaining the maximum (first in lexicographic order on
    /// ties), ascending indices.
    pub argmax_subset: Vec<usize>,
    /// How many subsets were enumerated.
    pub subsets_checked: u64,
}

/// Exact expected squared reconstruction error of the oracle receiver,
/// `k tr(Sigma_z) / (m (m - k - 1) sigma2_phi)`.
///
/// Only the trace of the noise covariance enters: two noise models with equal
/// trace yield the identical prediction. Requires `m > k + 3`.
pub fn closed_form_mse(k: usize, m: usize, sigma2_phi: f64, trace_sigma_z: f64) -> Result<f64> {
    if m <= k + 3 {
        return Err(CsError::MomentCondition { m, k });
    }
    if !(sigma2_phi > 0.0) {
        return Err(CsError::InvalidParameter(format!(
            "sigma2_phi must be positive, got {sigma2_phi}"
        )));
    }
    if !(trace_sigma_z >= 0.0) {
        return Err(CsError::InvalidParameter(format!(
            "noise covariance trace must be nonnegative, got {trace_sigma_z}"
        )));
    }
    Ok(k as f64 * trace_sigma_z / (m as f64 * (m - k - 1) as f64 * sigma2_phi))
}

/// White-noise specialization `k sigma2_z / ((m - k - 1) sigma2_phi)`.
///
/// Delegates to [`closed_form_mse`] with trace `m sigma2_z`, so the two
/// agree bit for bit.
pub fn closed_form_mse_white(k: usize, m: usize, sigma2_phi: f64, sigma2_z: f64) -> Result<f64> {
    closed_form_mse(k, m, sigma2_phi, m as f64 * sigma2_z)
}

/// White-noise RIP sandwich `(k sigma2_z / (1 + delta_k), k sigma2_z / (1 - delta_k))`.
pub fn rip_bounds_white(k: usize, delta_k: f64, sigma2_z: f64) -> Result<(f64, f64)> {
    check_delta_k(delta_k)?;
    if !(sigma2_z >= 0.0) {
        return Err(CsError::InvalidParameter(format!(
            "sigma2_z must be nonnegative, got {sigma2_z}"
        )));
    }
    let kf = k as f64;
    Ok((
        kf * sigma2_z / (1.0 + delta_k),
        kf * sigma2_z / (1.0 - delta_k),
    ))
}

/// Correlated-noise upper bound `k lambda_max / (1 - delta_k)`.
pub fn rip_bound_correlated(k: usize, delta_k: f64, lambda_max: f64) -> Result<f64> {
    check_delta_k(delta_k)?;
    if !(lambda_max >= 0.0) {
        return Err(CsError::InvalidParameter(format!(
            "lambda_max must be nonnegative, got {lambda_max}"
        )));
    }
    Ok(k as f64 * lambda_max / (1.0 - delta_k))
}

fn check_delta_k(delta_k: f64) -> Result<()> {
    if !(0.0..1.0).contains(&delta_k) {
        return Err(CsError::InvalidParameter(format!(
            "delta_k must lie in [0, 1), got {delta_k}"
        )));
    }
    Ok(())
}

/// Assemble the closed form and all three RIP bounds for one noise
/// configuration, described by its per-entry variance and its covariance
/// summary, at one RIP constant.
pub fn bound_set(
    k: usize,
    m: usize,
    sigma2_phi: f64,
    per_entry_variance: f64,
    summary: &CovarianceSummary,
    delta_k: f64,
) -> Result<BoundSet> {
    let closed_form = closed_form_mse(k, m, sigma2_phi, summary.trace)?;
    let (rip_lower_white, rip_upper_white) = rip_bounds_white(k, delta_k, per_entry_variance)?;
    let rip_upper_corr = rip_bound_correlated(k, delta_k, summary.lambda_max)?;
    Ok(BoundSet {
        closed_form,
        rip_lower_white,
        rip_upper_white,
        rip_upper_corr,
        delta_k,
    })
}

/// `C(n, k)`, saturating at `u64::MAX`.
fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
        if c > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    c as u64
}

/// All k-subsets of `0..n` in lexicographic order, flattened into one vector
/// of length `count * k`.
fn enumerate_subsets(n: usize, k: usize, count: u64) -> Vec<usize> {
    let mut flat = Vec::with_capacity(count as usize * k);
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        flat.extend_from_slice(&subset);
        // Advance to the lexicographic successor.
        let mut i = k;
        while i > 0 && subset[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        subset[i - 1] += 1;
        for j in i..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
    flat
}

fn check_rip_inputs(a: &DMatrix<f64>, k: usize) -> Result<u64> {
    let n = a.ncols();
    if a.nrows() == 0 || n == 0 {
        return Err(CsError::InvalidParameter("matrix must be nonempty".into()));
    }
    if k == 0 || k > n {
        return Err(CsError::InvalidParameter(format!(
            "RIP order must satisfy 0 < k <= n, got k = {k}, n = {n}"
        )));
    }
    let count = binomial(n, k);
    if count > RIP_SUBSET_GUARD {
        return Err(CsError::CombinatorialGuard {
            count,
            guard: RIP_SUBSET_GUARD,
        });
    }
    Ok(count)
}

/// Reduce per-subset results to the maximum, breaking exact ties toward the
/// lexicographically first subset. Total order makes the parallel reduction
/// deterministic for any work split.
fn max_by_rank(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

/// Brute-force RIP constant of order `k`:
/// `delta_k = max over k-subsets of || A_omega^T A_omega - I ||_2`.
///
/// Works from the precomputed Gram matrix `A^T A`, taking the spectral norm
/// of each k x k principal submatrix minus the identity via a symmetric
/// eigensolve. Subsets are enumerated in lexicographic order; the search
/// refuses instances with more than [`RIP_SUBSET_GUARD`] subsets.
pub fn rip_constant_bruteforce(a: &DMatrix<f64>, k: usize) -> Result<RipEstimate> {
    let count = check_rip_inputs(a, k)?;
    let gram = a.transpose() * a;
    let flat = enumerate_subsets(a.ncols(), k, count);
    let (delta_k, rank) = flat
        .par_chunks(k)
        .enumerate()
        .map(|(rank, subset)| {
            let sub = gram
                .select_rows(subset.iter())
                .select_columns(subset.iter());
            let eigen = SymmetricEigen::new(sub);
            let dev = eigen
                .eigenvalues
                .iter()
                .map(|&l| (l - 1.0).abs())
                .fold(0.0f64, f64::max);
            (dev, rank)
        })
        .reduce(|| (f64::NEG_INFINITY, usize::MAX), max_by_rank);
    Ok(RipEstimate {
        delta_k,
        argmax_subset: flat[rank * k..(rank + 1) * k].to_vec(),
        subsets_checked: count,
    })
}

/// Independent formulation of the same constant: per subset, take the
/// singular values of `A_omega` itself and report `max |sigma_i^2 - 1|`.
///
/// Exists as a cross-check oracle for [`rip_constant_bruteforce`]; the two
/// must agree to high accuracy on any input.
pub fn rip_constant_bruteforce_svd(a: &DMatrix<f64>, k: usize) -> Result<RipEstimate> {
    let count = check_rip_inputs(a, k)?;
    let flat = enumerate_subsets(a.ncols(), k, count);
    let (delta_k, rank) = flat
        .par_chunks(k)
        .enumerate()
        .map(|(rank, subset)| {
            let sub = a.select_columns(subset.iter());
            let mut dev = sub
                .svd(false, false)
                .singular_values
                .iter()
                .map(|&s| (s * s - 1.0).abs())
                .fold(0.0f64, f64::max);
            // An m x k submatrix with k > m has k - m zero singular values
            // that the thin SVD does not report.
            if k > a.nrows() {
                dev = dev.max(1.0);
            }
            (dev, rank)
        })
        .reduce(|| (f64::NEG_INFINITY, usize::MAX), max_by_rank);
    Ok(RipEstimate {
        delta_k,
        argmax_subset: flat[rank * k..(rank + 1) * k].to_vec(),
        subsets_checked: count,
    })
}

/// Trials per partition in the Wishart check. Fixed (never derived from the
/// worker count) so the merged sum is identical for any parallelism.
const WISHART_BATCH: usize = 64;

/// Monte-Carlo check of the singular Wishart pseudo-inverse mean.
///
/// Draws `trials` independent `m x k` matrices with i.i.d.
/// `N(0, sigma2_phi)` entries, averages the Moore-Penrose pseudo-inverse of
/// `U U^T` (via thin SVD, inverting singular values above `1e-10` relative),
/// and reports the average diagonal and the largest off-diagonal entry
/// against the predicted scale `k / (m (m - k - 1) sigma2_phi)`.
///
/// Trial `i` draws from `stream.offset(i)`, so the result is independent of
/// how trials are scheduled across workers.
pub fn wishart_pinv_mean_check(
    m: usize,
    k: usize,
    sigma2_phi: f64,
    trials: usize,
    stream: RngStream,
) -> Result<WishartCheckReport> {
    if k == 0 {
        return Err(CsError::InvalidParameter("k must be positive".into()));
    }
    if m <= k + 3 {
        return Err(CsError::MomentCondition { m, k });
    }
    if !(sigma2_phi > 0.0) {
        return Err(CsError::InvalidParameter(format!(
            "sigma2_phi must be positive, got {sigma2_phi}"
        )));
    }
    if trials == 0 {
        return Err(CsError::InvalidParameter(
            "trials must be at least 1".into(),
        ));
    }

    let batches = trials.div_ceil(WISHART_BATCH);
    let partial_sums: Vec<DMatrix<f64>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let lo = b * WISHART_BATCH;
            let hi = ((b + 1) * WISHART_BATCH).min(trials);
            let mut sum = DMatrix::<f64>::zeros(m, m);
            for i in lo..hi {
                let mut rng = stream.offset(i as u64).rng();
                let pinv = sample_pinv_outer(m, k, sigma2_phi, &mut rng);
                sum += pinv;
            }
            sum
        })
        .collect();
    // Partition sums merged in partition order.
    let mut total = DMatrix::<f64>::zeros(m, m);
    for s in &partial_sums {
        total += s;
    }
    let mean = total / trials as f64;

    let diag_mean = (0..m).map(|i| mean[(i, i)]).sum::<f64>() / m as f64;
    let mut offdiag_max = 0.0f64;
    for j in 0..m {
        for i in 0..m {
            if i != j {
                offdiag_max = offdiag_max.max(mean[(i, j)].abs());
            }
        }
    }

    Ok(WishartCheckReport {
        m,
        k,
        sigma2_phi,
        trials,
        predicted_scale: k as f64 / (m as f64 * (m - k - 1) as f64 * sigma2_phi),
        empirical_diag_mean: diag_mean,
        empirical_offdiag_max: offdiag_max,
    })
}

/// One draw of `(U U^T)^+` for `U` an `m x k` Gaussian matrix.
///
/// With the thin SVD `U = W S V^T`, the pseudo-inverse of `U U^T` is
/// `W S^{-2} W^T`; singular values at or below `1e-10` relative are treated
/// as zero (rank is `k` almost surely, so this never triggers in practice).
fn sample_pinv_outer<R: Rng>(m: usize, k: usize, sigma2_phi: f64, rng: &mut R) -> DMatrix<f64> {
    let sigma_phi = sigma2_phi.sqrt();
    let mut u = DMatrix::<f64>::zeros(m, k);
    for j in 0..k {
        for i in 0..m {
            u[(i, j)] = sigma_phi * rng.sample::<f64, _>(StandardNormal);
        }
    }
    let svd = u.svd(true, false);
    let w = svd.u.expect("SVD with compute_u must return u");
    let s_max = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let mut scaled = w;
    for (j, &s) in svd.singular_values.iter().enumerate() {
        let inv = if s > 1e-10 * s_max { 1.0 / s } else { 0.0 };
        scaled.column_mut(j).scale_mut(inv);
    }
    &scaled * scaled.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{dct_basis, gen_sensing_matrix};
    use crate::noise::{covariance_summary, NoiseModel};
    use approx::assert_relative_eq;

    #[test]
    fn closed_form_at_reference_parameters() {
        // k = 16, m = 128, sigma2_phi = 1/128, white trace 128 sigma2_z:
        // the prediction is 2048/111 times sigma2_z.
        let mse = closed_form_mse(16, 128, 1.0 / 128.0, 128.0).unwrap();
        assert_relative_eq!(mse, 2048.0 / 111.0, max_relative = 1e-12);
        let scaled = closed_form_mse(16, 128, 1.0 / 128.0, 128.0 * 1e-3).unwrap();
        assert_relative_eq!(scaled, 2048.0 / 111.0 * 1e-3, max_relative = 1e-12);
    }

    #[test]
    fn closed_form_zero_trace_is_zero() {
        assert_eq!(closed_form_mse(16, 128, 1.0 / 128.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_depends_only_on_trace() {
        // Two correlated models with different rho but equal sigma2_z have
        // the exact same covariance trace, hence identical predictions.
        let s1 = covariance_summary(&NoiseModel::ar1(128, 0.01, 0.9).unwrap()).unwrap();
        let s2 = covariance_summary(&NoiseModel::ar1(128, 0.01, 0.999).unwrap()).unwrap();
        assert_eq!(s1.trace, s2.trace);
        let m1 = closed_form_mse(16, 128, 1.0 / 128.0, s1.trace).unwrap();
        let m2 = closed_form_mse(16, 128, 1.0 / 128.0, s2.trace).unwrap();
        assert_eq!(m1.to_bits(), m2.to_bits());
    }

    #[test]
    fn closed_form_requires_m_above_k_plus_three() {
        assert_eq!(
            closed_form_mse(8, 10, 1.0, 1.0),
            Err(CsError::MomentCondition { m: 10, k: 8 })
        );
        assert!(closed_form_mse(8, 11, 1.0, 1.0).is_err());
        assert!(closed_form_mse(8, 12, 1.0, 1.0).is_ok());
    }

    #[test]
    fn white_specialization_is_bit_identical_to_general_form() {
        for &sigma2_z in &[1e-6, 1e-3, 0.7, 3.0] {
            let white = closed_form_mse_white(16, 128, 1.0 / 128.0, sigma2_z).unwrap();
            let general = closed_form_mse(16, 128, 1.0 / 128.0, 128.0 * sigma2_z).unwrap();
            assert_eq!(white.to_bits(), general.to_bits());
        }
        let white = closed_form_mse_white(16, 128, 1.0 / 128.0, 1.0).unwrap();
        assert_relative_eq!(white, 2048.0 / 111.0, max_relative = 1e-12);
    }

    #[test]
    fn white_bounds_collapse_at_delta_zero() {
        let (lo, hi) = rip_bounds_white(16, 0.0, 0.3).unwrap();
        assert_eq!(lo, hi);
        assert_relative_eq!(lo, 16.0 * 0.3, max_relative = 1e-15);
    }

    #[test]
    fn white_bounds_at_delta_half() {
        let (lo, hi) = rip_bounds_white(16, 0.5, 1.0).unwrap();
        assert_relative_eq!(lo, 32.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(hi, 32.0, max_relative = 1e-15);
    }

    #[test]
    fn white_bounds_degenerate_and_invalid_inputs() {
        assert_eq!(rip_bounds_white(16, 0.2, 0.0).unwrap(), (0.0, 0.0));
        assert!(rip_bounds_white(16, 1.0, 1.0).is_err());
        assert!(rip_bounds_white(16, -0.1, 1.0).is_err());
    }

    #[test]
    fn correlated_bound_reduces_to_white_upper() {
        let corr = rip_bound_correlated(16, 0.0, 0.3).unwrap();
        let (_, hi) = rip_bounds_white(16, 0.0, 0.3).unwrap();
        assert_eq!(corr, hi);
        assert!(rip_bound_correlated(16, 1.0, 1.0).is_err());
    }

    #[test]
    fn correlated_bound_near_k_m_sigma2_for_rho_near_one() {
        let summary = covariance_summary(&NoiseModel::ar1(128, 1.0, 0.999).unwrap()).unwrap();
        let bound = rip_bound_correlated(16, 0.0, summary.lambda_max).unwrap();
        // lambda_max <= trace = m sigma2_z, and at rho = 0.999 it is within
        // a few percent of that limit, so the bound approaches k m sigma2_z.
        assert!(bound <= 16.0 * 128.0 * (1.0 + 1e-12));
        assert!(bound > 0.9 * 16.0 * 128.0, "bound {bound} not near 2048");
    }

    #[test]
    fn bound_set_orders_white_bounds() {
        let model = NoiseModel::ar1(128, 0.01, 0.9).unwrap();
        let summary = covariance_summary(&model).unwrap();
        for &dk in &[0.0, 0.3, 0.9] {
            let b = bound_set(
                16,
                128,
                1.0 / 128.0,
                model.per_entry_variance(),
                &summary,
                dk,
            )
            .unwrap();
            assert!(b.rip_lower_white <= b.rip_upper_white);
            assert!(b.rip_upper_white <= b.rip_upper_corr);
            assert!(b.closed_form > 0.0);
            assert_eq!(b.delta_k, dk);
        }
    }

    #[test]
    fn closed_form_exceeds_ideal_white_upper_bound_at_reference_setup() {
        // With sigma2_phi = 1/m the closed form is k sigma2_z m/(m-k-1),
        // strictly above the delta = 0 upper bound k sigma2_z.
        let sigma2_z = 1e-2;
        let closed = closed_form_mse_white(16, 128, 1.0 / 128.0, sigma2_z).unwrap();
        let (_, upper) = rip_bounds_white(16, 0.0, sigma2_z).unwrap();
        assert!(closed > upper);
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(12, 3), 220);
        assert_eq!(binomial(8, 0), 1);
        assert_eq!(binomial(8, 8), 1);
        assert_eq!(binomial(4, 5), 0);
        assert_eq!(binomial(30, 15), 155_117_520);
    }

    #[test]
    fn subset_enumeration_is_lexicographic_and_complete() {
        let flat = enumerate_subsets(4, 2, binomial(4, 2));
        assert_eq!(flat, vec![0, 1, 0, 2, 0, 3, 1, 2, 1, 3, 2, 3]);
    }

    #[test]
    fn rip_of_orthonormal_columns_is_zero() {
        let basis = dct_basis(8);
        let est = rip_constant_bruteforce(basis.matrix(), 3).unwrap();
        assert!(est.delta_k < 1e-10, "delta {} should vanish", est.delta_k);
        assert_eq!(est.subsets_checked, 56);
    }

    #[test]
    fn rip_order_one_is_worst_column_norm_deviation() {
        let a = DMatrix::from_row_slice(1, 2, &[0.8f64.sqrt(), 1.3f64.sqrt()]);
        let est = rip_constant_bruteforce(&a, 1).unwrap();
        assert_relative_eq!(est.delta_k, 0.3, max_relative = 1e-12);
        assert_eq!(est.argmax_subset, vec![1]);
    }

    #[test]
    fn rip_is_nondecreasing_in_order() {
        let mut rng = RngStream::new(21, 0).rng();
        let a = gen_sensing_matrix(6, 10, 1.0 / 6.0, &mut rng).unwrap();
        let mut last = 0.0;
        for k in 1..=4 {
            let est = rip_constant_bruteforce(&a, k).unwrap();
            assert!(
                est.delta_k >= last - 1e-12,
                "delta_{k} = {} dropped below delta_{} = {last}",
                est.delta_k,
                k - 1
            );
            last = est.delta_k;
        }
    }

    #[test]
    fn rip_formulations_agree_on_random_matrices() {
        for trial in 0..5 {
            let mut rng = RngStream::new(22, trial).rng();
            let a = gen_sensing_matrix(8, 12, 1.0 / 8.0, &mut rng).unwrap();
            for k in 1..=3 {
                let gram = rip_constant_bruteforce(&a, k).unwrap();
                let svd = rip_constant_bruteforce_svd(&a, k).unwrap();
                assert!(
                    (gram.delta_k - svd.delta_k).abs() <= 1e-10,
                    "formulations disagree at k={k}: {} vs {}",
                    gram.delta_k,
                    svd.delta_k
                );
            }
        }
    }

    #[test]
    fn rip_guard_refuses_large_instances() {
        let a = DMatrix::<f64>::identity(30, 30);
        assert_eq!(
            rip_constant_bruteforce(&a, 15),
            Err(CsError::CombinatorialGuard {
                count: 155_117_520,
                guard: RIP_SUBSET_GUARD
            })
        );
    }

    #[test]
    fn rip_rejects_degenerate_orders() {
        let a = DMatrix::<f64>::identity(4, 4);
        assert!(rip_constant_bruteforce(&a, 0).is_err());
        assert!(rip_constant_bruteforce(&a, 5).is_err());
    }

    #[test]
    fn wishart_check_matches_prediction_on_small_case() {
        let report = wishart_pinv_mean_check(16, 4, 1.0, 4000, RngStream::new(31, 0)).unwrap();
        assert_relative_eq!(
            report.predicted_scale,
            4.0 / (16.0 * 11.0),
            max_relative = 1e-15
        );
        let rel =
            (report.empirical_diag_mean - report.predicted_scale).abs() / report.predicted_scale;
        assert!(rel < 0.1, "diagonal mean off by {:.1}%", rel * 100.0);
        assert!(report.empirical_offdiag_max < 0.15 * report.empirical_diag_mean);
    }

    #[test]
    fn wishart_check_scales_inversely_with_variance() {
        let stream = RngStream::new(32, 0);
        let base = wishart_pinv_mean_check(16, 4, 1.0, 200, stream).unwrap();
        let quad = wishart_pinv_mean_check(16, 4, 4.0, 200, stream).unwrap();
        assert_relative_eq!(
            quad.empirical_diag_mean,
            base.empirical_diag_mean / 4.0,
            max_relative = 1e-10
        );
    }

    #[test]
    fn wishart_check_enforces_dimension_condition() {
        assert_eq!(
            wishart_pinv_mean_check(10, 8, 1.0, 10, RngStream::new(33, 0)),
            Err(CsError::MomentCondition { m: 10, k: 8 })
        );
        assert!(wishart_pinv_mean_check(16, 4, 1.0, 0, RngStream::new(33, 0)).is_err());
    }

    #[test]
    fn wishart_offdiagonal_mass_shrinks_with_trials() {
        let stream = RngStream::new(34, 0);
        let small = wishart_pinv_mean_check(16, 4, 1.0, 250, stream).unwrap();
        let large = wishart_pinv_mean_check(16, 4, 1.0, 4000, stream).unwrap();
        assert!(
            large.empirical_offdiag_max < small.empirical_offdiag_max,
            "off-diagonal mass should shrink: {} -> {}",
            small.empirical_offdiag_max,
            large.empirical_offdiag_max
        );
    }
}
