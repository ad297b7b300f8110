//! Noise channels for the measurement vector: white Gaussian, AR(1)-correlated
//! Gaussian, and uniform scalar quantization.
//!
//! The Gaussian channels expose their covariance matrix and a sampler; the
//! quantizer is deterministic and only carries the high-rate surrogate
//! variance `delta^2 / 12`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{CsError, Result};

/// A noise channel acting on the `m` measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    /// i.i.d. zero-mean Gaussian entries with variance `sigma2_z`.
    White { m: usize, sigma2_z: f64 },
    /// Zero-mean Gaussian with covariance `(i, j) -> sigma2_z rho^|i-j|`.
    Ar1 { m: usize, sigma2_z: f64, rho: f64 },
    /// Uniform scalar quantization of the measurements with step `delta`
    /// (mid-tread, round half away from zero). Deterministic; its high-rate
    /// surrogate per-entry variance is `delta^2 / 12`.
    Quantizer { m: usize, delta: f64 },
}

/// Scalar summaries of the noise covariance used by the closed form and the
/// correlated-noise bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceSummary {
    /// `tr(Sigma_z)`; for the quantizer, the surrogate `m delta^2 / 12`.
    pub trace: f64,
    /// Largest eigenvalue of `Sigma_z`; for the quantizer, `delta^2 / 12`.
    pub lambda_max: f64,
}

impl NoiseModel {
    /// White Gaussian noise of length `m` with per-entry variance `sigma2_z`.
    pub fn white(m: usize, sigma2_z: f64) -> Result<Self> {
        let model = NoiseModel::White { m, sigma2_z };
        model.validate()?;
        Ok(model)
    }

    /// AR(1)-correlated Gaussian noise. `rho` must lie in `[0, 1)`; at
    /// `rho = 1` the covariance is singular, so it is rejected here.
    pub fn ar1(m: usize, sigma2_z: f64, rho: f64) -> Result<Self> {
        let model = NoiseModel::Ar1 { m, sigma2_z, rho };
        model.validate()?;
        Ok(model)
    }

    /// Uniform scalar quantizer with step `delta > 0` on `m` measurements.
    pub fn quantizer(m: usize, delta: f64) -> Result<Self> {
        let model = NoiseModel::Quantizer { m, delta };
        model.validate()?;
        Ok(model)
    }

    /// Check the parameter ranges of this model.
    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseModel::White { m, sigma2_z } => {
                if m == 0 {
                    return Err(CsError::InvalidParameter(
                        "noise length must be positive".into(),
                    ));
                }
                if !(sigma2_z >= 0.0) {
                    return Err(CsError::InvalidParameter(format!(
                        "sigma2_z must be nonnegative, got {sigma2_z}"
                    )));
                }
            }
            NoiseModel::Ar1 { m, sigma2_z, rho } => {
                if m == 0 {
                    return Err(CsError::InvalidParameter(
                        "noise length must be positive".into(),
                    ));
                }
                if !(sigma2_z >= 0.0) {
                    return Err(CsError::InvalidParameter(format!(
                        "sigma2_z must be nonnegative, got {sigma2_z}"
                    )));
                }
                if !(0.0..1.0).contains(&rho) {
                    return Err(CsError::InvalidParameter(format!(
                        "rho must lie in [0, 1), got {rho}"
                    )));
                }
            }
            NoiseModel::Quantizer { m, delta } => {
                if m == 0 {
                    return Err(CsError::InvalidParameter(
                        "noise length must be positive".into(),
                    ));
                }
                if !(delta > 0.0) {
                    return Err(CsError::InvalidParameter(format!(
                        "quantizer step must be positive, got {delta}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of measurements this channel acts on.
    pub fn len(&self) -> usize {
        match *self {
            NoiseModel::White { m, .. }
            | NoiseModel::Ar1 { m, .. }
            | NoiseModel::Quantizer { m, .. } => m,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Per-entry variance: `sigma2_z` for the Gaussian channels, the
    /// high-rate surrogate `delta^2 / 12` for the quantizer.
    pub fn per_entry_variance(&self) -> f64 {
        match *self {
            NoiseModel::White { sigma2_z, .. } | NoiseModel::Ar1 { sigma2_z, .. } => sigma2_z,
            NoiseModel::Quantizer { delta, .. } => delta * delta / 12.0,
        }
    }
}

/// The covariance matrix of a Gaussian noise model.
///
/// The quantizer is a deterministic channel and has none; asking for it is an
/// error rather than a silent surrogate.
pub fn covariance(model: &NoiseModel) -> Result<DMatrix<f64>> {
    model.validate()?;
    match *model {
        NoiseModel::White { m, sigma2_z } => Ok(DMatrix::from_diagonal_element(m, m, sigma2_z)),
        NoiseModel::Ar1 { m, sigma2_z, rho } => Ok(DMatrix::from_fn(m, m, |i, j| {
            sigma2_z * rho.powi(i.abs_diff(j) as i32)
        })),
        NoiseModel::Quantizer { .. } => Err(CsError::DeterministicChannel),
    }
}

/// A reusable sampler for a Gaussian noise model.
///
/// Factors the covariance once; every [`NoiseSampler::sample`] call then costs
/// one matrix-vector product. The Monte-Carlo harness keeps one sampler per
/// grid point instead of re-factoring per trial.
#[derive(Debug, Clone)]
pub struct NoiseSampler {
    m: usize,
    kind: SamplerKind,
}

#[derive(Debug, Clone)]
enum SamplerKind {
    Zero,
    White { sigma_z: f64 },
    Correlated { chol_l: DMatrix<f64> },
}

impl NoiseSampler {
    /// Build a sampler for a White or AR(1) model.
    pub fn new(model: &NoiseModel) -> Result<Self> {
        model.validate()?;
        match *model {
            NoiseModel::White { m, sigma2_z } => {
                if sigma2_z == 0.0 {
                    Ok(Self {
                        m,
                        kind: SamplerKind::Zero,
                    })
                } else {
                    Ok(Self {
                        m,
                        kind: SamplerKind::White {
                            sigma_z: sigma2_z.sqrt(),
                        },
                    })
                }
            }
            NoiseModel::Ar1 { m, sigma2_z, .. } => {
                if sigma2_z == 0.0 {
                    return Ok(Self {
                        m,
                        kind: SamplerKind::Zero,
                    });
                }
                let sigma = covariance(model)?;
                // Cannot fail for rho in [0, 1) and sigma2_z > 0.
                let chol = nalgebra::Cholesky::new(sigma).ok_or_else(|| {
                    CsError::Internal("Cholesky factorization of AR(1) covariance failed".into())
                })?;
                Ok(Self {
                    m,
                    kind: SamplerKind::Correlated { chol_l: chol.l() },
                })
            }
            NoiseModel::Quantizer { .. } => Err(CsError::DeterministicChannel),
        }
    }

    /// Lower Cholesky factor `L` with `L L^T = Sigma_z`, when one is held.
    pub fn cholesky_factor(&self) -> Option<&DMatrix<f64>> {
        match &self.kind {
            SamplerKind::Correlated { chol_l } => Some(chol_l),
            _ => None,
        }
    }

    /// Draw one noise vector. White: i.i.d. `N(0, sigma2_z)`. AR(1): `L w`
    /// with `w` i.i.d. standard normal, `w` drawn entry 0 first.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> DVector<f64> {
        match &self.kind {
            SamplerKind::Zero => DVector::zeros(self.m),
            SamplerKind::White { sigma_z } => DVector::from_fn(self.m, |_, _| {
                sigma_z * rng.sample::<f64, _>(StandardNormal)
            }),
            SamplerKind::Correlated { chol_l } => {
                let w = DVector::from_fn(self.m, |_, _| rng.sample::<f64, _>(StandardNormal));
                chol_l * w
            }
        }
    }
}

/// Draw one noise vector from a Gaussian model.
///
/// Convenience wrapper that factors the covariance on every call; loops
/// should hold a [`NoiseSampler`] instead.
pub fn sample_noise<R: Rng>(model: &NoiseModel, rng: &mut R) -> Result<DVector<f64>> {
    Ok(NoiseSampler::new(model)?.sample(rng))
}

/// Mid-tread uniform scalar quantization: each entry maps to
/// `delta * round(entry / delta)`, rounding half away from zero.
pub fn quantize_uniform(y: &DVector<f64>, delta: f64) -> Result<DVector<f64>> {
    if !(delta > 0.0) {
        return Err(CsError::InvalidParameter(format!(
            "quantizer step must be positive, got {delta}"
        )));
    }
    Ok(y.map(|v| delta * (v / delta).round()))
}

/// Trace and largest eigenvalue of the noise covariance.
///
/// The trace is computed analytically (the diagonal is constant for every
/// model here), so `trace = m * sigma2_z` holds exactly for AR(1) noise
/// regardless of `rho`. The largest eigenvalue of the AR(1) covariance comes
/// from a full symmetric eigendecomposition.
pub fn covariance_summary(model: &NoiseModel) -> Result<CovarianceSummary> {
    model.validate()?;
    match *model {
        NoiseModel::White { m, sigma2_z } => Ok(CovarianceSummary {
            trace: m as f64 * sigma2_z,
            lambda_max: sigma2_z,
        }),
        NoiseModel::Ar1 { m, sigma2_z, .. } => {
            let lambda_max = if sigma2_z == 0.0 {
                0.0
            } else {
                let eigen = SymmetricEigen::new(covariance(model)?);
                eigen.eigenvalues.iter().cloned().fold(0.0f64, f64::max)
            };
            Ok(CovarianceSummary {
                trace: m as f64 * sigma2_z,
                lambda_max,
            })
        }
        NoiseModel::Quantizer { m, delta } => {
            let surrogate = delta * delta / 12.0;
            Ok(CovarianceSummary {
                trace: m as f64 * surrogate,
                lambda_max: surrogate,
            })
        }
    }
}
