//! Simulation library for the oracle receiver in compressed sensing: sparse
//! signals measured through a Gaussian sensing matrix, reconstructed by
//! least squares on the known support, compared against the closed-form
//! expected error and the classical RIP-based bounds.
//!
//! The crate is organized as a pipeline:
//!
//! - [`model`]: sparse signals, the orthonormal DCT basis, Gaussian sensing
//!   matrices, and the measurement step `y = Phi x + z`.
//! - [`noise`]: white, AR(1)-correlated, and uniform-quantization noise
//!   channels with covariance access and sampling.
//! - [`oracle`]: the support-aware least-squares estimator.
//! - [`theory`]: the exact expected-MSE formula, RIP bounds, brute-force RIP
//!   constants, and a Monte-Carlo check of the Wishart pseudo-inverse mean.
//! - [`mc`]: the deterministic Monte-Carlo harness tying it all together.
//! - [`rng`]: seeded, streamed randomness underneath everything.
//!
//! Every random quantity derives from a [`rng::RngStream`] (a master seed
//! plus substream id), and all reductions run in fixed order, so every
//! number this crate produces is reproducible bit for bit — independent of
//! thread count.

// Validation deliberately uses `!(x > 0.0)` rather than `x <= 0.0`: the
// negated form also rejects NaN, which the non-negated comparison would
// silently let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod mc;
pub mod model;
pub mod noise;
pub mod oracle;
pub mod rng;
pub mod theory;

pub use error::{CsError, Result};
pub use mc::{Experiment, ExperimentConfig, SweepParameter, SweepPoint, SweepResult};
pub use model::{
    dct_basis, gen_sensing_matrix, gen_sparse_signal, measure, Basis, SensingSetup, SparseSignal,
};
pub use noise::{
    covariance, covariance_summary, quantize_uniform, sample_noise, CovarianceSummary, NoiseModel,
    NoiseSampler,
};
pub use oracle::{
    oracle_reconstruct, oracle_solve_restricted, restrict_columns, OracleReconstruction,
};
pub use rng::RngStream;
pub use theory::{
    bound_set, closed_form_mse, closed_form_mse_white, rip_bound_correlated, rip_bounds_white,
    rip_constant_bruteforce, rip_constant_bruteforce_svd, wishart_pinv_mean_check, BoundSet,
    RipEstimate, WishartCheckReport,
};
