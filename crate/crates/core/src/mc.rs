//! Deterministic Monte-Carlo harness: single oracle-reconstruction trials,
//! parameter sweeps over noise grids, and aggregation with standard errors.
//!
//! Reproducibility contract: trial `i` of grid point `p` draws from the
//! substream `p * trials + i` under the master seed, and aggregation runs in
//! a fixed order, so every result is bit-identical across runs and worker
//! counts. Workers only decide *where* a trial executes, never *what* it
//! draws.

use rayon::prelude::*;

use crate::error::{CsError, Result};
use crate::model::{dct_basis, gen_sensing_matrix, gen_sparse_signal, Basis};
use crate::noise::{covariance_summary, quantize_uniform, NoiseModel, NoiseSampler};
use crate::oracle::oracle_solve_restricted;
use crate::rng::RngStream;
use crate::theory::{bound_set, closed_form_mse, BoundSet};

/// Full description of one Monte-Carlo experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    /// Signal length.
    pub n: usize,
    /// Sparsity (nonzero coefficient count).
    pub k: usize,
    /// Measurement count.
    pub m: usize,
    /// Variance of the nonzero coefficients.
    pub sigma2_theta: f64,
    /// Per-entry variance of the sensing matrix.
    pub sigma2_phi: f64,
    /// Noise channel applied to the measurements.
    pub noise: NoiseModel,
    /// Trials per grid point.
    pub trials: usize,
    /// Master seed; all randomness derives from it.
    pub seed: u64,
}

impl ExperimentConfig {
    /// Check dimension ordering, parameter ranges, and that the noise model
    /// length matches the measurement count.
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k >= self.m || self.m >= self.n {
            return Err(CsError::InvalidParameter(format!(
                "dimensions must satisfy 0 < k < m < n, got k = {}, m = {}, n = {}",
                self.k, self.m, self.n
            )));
        }
        if !(self.sigma2_theta > 0.0) {
            return Err(CsError::InvalidParameter(format!(
                "sigma2_theta must be positive, got {}",
                self.sigma2_theta
            )));
        }
        if !(self.sigma2_phi > 0.0) {
            return Err(CsError::InvalidParameter(format!(
                "sigma2_phi must be positive, got {}",
                self.sigma2_phi
            )));
        }
        if self.trials == 0 {
            return Err(CsError::InvalidParameter(
                "trials must be at least 1".into(),
            ));
        }
        self.noise.validate()?;
        if self.noise.len() != self.m {
            return Err(CsError::DimensionMismatch {
                what: "noise length",
                expected: self.m,
                actual: self.noise.len(),
            });
        }
        Ok(())
    }
}

/// Which noise parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// Gaussian noise variance (White or Ar1).
    Sigma2Z,
    /// Quantizer step size.
    Delta,
    /// AR(1) correlation coefficient.
    Rho,
}

impl SweepParameter {
    /// Column-header-friendly name.
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::Sigma2Z => "sigma2_z",
            SweepParameter::Delta => "delta",
            SweepParameter::Rho => "rho",
        }
    }
}

impl std::fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Aggregated results at one grid value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    /// The swept parameter's value at this point.
    pub value: f64,
    /// Mean squared error over the trials.
    pub empirical_mse: f64,
    /// Standard error of that mean (sample stddev / sqrt(trials); zero when
    /// fewer than two trials).
    pub std_error: f64,
    /// Closed-form expected MSE at this point.
    pub predicted_mse: f64,
    /// One bound set per requested RIP constant, in request order.
    pub bounds: Vec<BoundSet>,
}

/// A full sweep: the swept parameter, the RIP constants the bounds were
/// evaluated at, and one [`SweepPoint`] per grid value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub parameter: SweepParameter,
    pub delta_ks: Vec<f64>,
    pub points: Vec<SweepPoint>,
}

/// A validated experiment with its basis built once up front.
#[derive(Debug, Clone)]
pub struct Experiment {
    config: ExperimentConfig,
    basis: Basis,
}

impl Experiment {
    /// Validate the configuration and precompute the DCT basis.
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            basis: dct_basis(config.n),
            config,
        })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    /// Run one trial and return the squared reconstruction error
    /// `||x_hat - x||^2`.
    ///
    /// The trial draws everything fresh from substream `(seed, trial_index)`
    /// in a fixed order: sensing matrix (column-major), support,
    /// coefficients, then — for Gaussian channels — the noise vector. For
    /// the quantizer channel the measurements `Phi x` are quantized instead
    /// and no noise is drawn. Reconstruction uses the true support.
    pub fn run_trial(&self, trial_index: u64) -> Result<f64> {
        let cfg = &self.config;
        let mut rng = RngStream::new(cfg.seed, trial_index).rng();
        let phi = gen_sensing_matrix(cfg.m, cfg.n, cfg.sigma2_phi, &mut rng)?;
        let signal = gen_sparse_signal(cfg.n, cfg.k, cfg.sigma2_theta, &self.basis, &mut rng)?;

        // Only the restricted columns of U = Phi Psi are ever needed, so
        // assemble U_omega = Phi Psi_omega directly instead of the full
        // m x n product.
        let psi_omega = self.basis.matrix().select_columns(signal.support.iter());
        let u_omega = &phi * psi_omega;

        let clean = &phi * &signal.x;
        let y = match cfg.noise {
            NoiseModel::Quantizer { delta, .. } => quantize_uniform(&clean, delta)?,
            _ => {
                let z = NoiseSampler::new(&cfg.noise)?.sample(&mut rng);
                clean + z
            }
        };

        let theta_omega = oracle_solve_restricted(&u_omega, &y)?;
        let x_hat = self
            .basis
            .synthesize_sparse(&signal.support, theta_omega.as_slice());
        Ok((&x_hat - &signal.x).norm_squared())
    }

    /// Sweep one noise parameter over `grid`, aggregating `trials` trials
    /// per point and attaching the closed form plus one [`BoundSet`] per
    /// entry of `delta_ks`.
    ///
    /// Point `p` uses substreams `p * trials .. (p + 1) * trials`; the master
    /// seed is never re-derived from grid values, so points are disjoint and
    /// the whole result is reproducible for any worker count.
    pub fn run_sweep(
        &self,
        parameter: SweepParameter,
        grid: &[f64],
        delta_ks: &[f64],
    ) -> Result<SweepResult> {
        if grid.is_empty() {
            return Err(CsError::InvalidParameter("sweep grid is empty".into()));
        }
        let cfg = &self.config;
        let trials = cfg.trials as u64;
        let mut points = Vec::with_capacity(grid.len());
        for (pi, &value) in grid.iter().enumerate() {
            let noise = apply_parameter(&cfg.noise, parameter, value)?;
            let point_exp = Experiment {
                config: ExperimentConfig { noise, ..*cfg },
                basis: self.basis.clone(),
            };
            let base = pi as u64 * trials;
            let errors = (0..trials)
                .into_par_iter()
                .map(|t| point_exp.run_trial(base + t))
                .collect::<Result<Vec<f64>>>()?;
            let (empirical_mse, std_error) = mean_and_stderr(&errors);

            let summary = covariance_summary(&noise)?;
            let predicted_mse = closed_form_mse(cfg.k, cfg.m, cfg.sigma2_phi, summary.trace)?;
            let bounds = delta_ks
                .iter()
                .map(|&dk| {
                    bound_set(
                        cfg.k,
                        cfg.m,
                        cfg.sigma2_phi,
                        noise.per_entry_variance(),
                        &summary,
                        dk,
                    )
                })
                .collect::<Result<Vec<_>>>()?;

            points.push(SweepPoint {
                value,
                empirical_mse,
                std_error,
                predicted_mse,
                bounds,
            });
        }
        Ok(SweepResult {
            parameter,
            delta_ks: delta_ks.to_vec(),
            points,
        })
    }
}

/// Rebuild the noise model with the swept parameter set to `value`,
/// rejecting incompatible pairings (e.g. a step-size sweep on a Gaussian
/// channel). Goes through the checked constructors so grid values outside
/// the model's domain are caught here.
fn apply_parameter(
    noise: &NoiseModel,
    parameter: SweepParameter,
    value: f64,
) -> Result<NoiseModel> {
    match (parameter, *noise) {
        (SweepParameter::Sigma2Z, NoiseModel::White { m, .. }) => NoiseModel::white(m, value),
        (SweepParameter::Sigma2Z, NoiseModel::Ar1 { m, rho, .. }) => NoiseModel::ar1(m, value, rho),
        (SweepParameter::Delta, NoiseModel::Quantizer { m, .. }) => NoiseModel::quantizer(m, value),
        (SweepParameter::Rho, NoiseModel::Ar1 { m, sigma2_z, .. }) => {
            NoiseModel::ar1(m, sigma2_z, value)
        }
        (p, n) => Err(CsError::InvalidParameter(format!(
            "cannot sweep {p} on the {} noise model",
            noise_name(&n)
        ))),
    }
}

fn noise_name(noise: &NoiseModel) -> &'static str {
    match noise {
        NoiseModel::White { .. } => "white",
        NoiseModel::Ar1 { .. } => "AR(1)",
        NoiseModel::Quantizer { .. } => "quantizer",
    }
}

/// Compensated (Kahan) sum, accumulating in slice order.
fn kahan_sum<I: Iterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Mean and standard error of the mean, in fixed order with compensated
/// summation. The standard error is zero when fewer than two samples exist.
fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let count = values.len() as f64;
    let mean = kahan_sum(values.iter().copied()) / count;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss = kahan_sum(values.iter().map(|&v| (v - mean) * (v - mean)));
    let sample_var = ss / (count - 1.0);
    (mean, (sample_var / count).sqrt())
}
