//! The `check-wishart` subcommand: estimate the mean of the pseudo-inverse
//! `(U U^T)^+` over Gaussian draws and compare it against the predicted
//! scaled identity.

use anyhow::Result;

use oracle_cs_core::{wishart_pinv_mean_check, RngStream, WishartCheckReport};

use crate::config::{resolve, ConfigFile};
use crate::WishartArgs;

/// Below this many trials the empirical mean is too noisy to call either
/// way; the verdict is INCONCLUSIVE instead of PASS/FAIL.
const MIN_CONCLUSIVE_TRIALS: usize = 100;

/// Off-diagonal entries must stay below this fraction of the diagonal mean
/// for a PASS (the predicted mean is a scaled identity).
const OFFDIAG_FRACTION: f64 = 0.10;

pub fn run(args: &WishartArgs) -> Result<()> {
    let file = match &args.common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let m = resolve(args.common.m, file.m, 128);
    let k = resolve(args.common.k, file.k, 16);
    let sigma2_phi = resolve(args.common.sigma2_phi, file.sigma2_phi, 1.0);
    let trials = resolve(args.common.trials, file.trials, 10_000);
    let seed = resolve(args.common.seed, file.seed, 1);
    let tolerance = resolve(args.tolerance, file.tolerance, 0.03);

    let report = crate::with_pool(args.common.threads, || {
        Ok(wishart_pinv_mean_check(
            m,
            k,
            sigma2_phi,
            trials,
            RngStream::new(seed, 0),
        )?)
    })?;
    print_report(&report, seed, tolerance);
    Ok(())
}

fn print_report(report: &WishartCheckReport, seed: u64, tolerance: f64) {
    let diag_rel =
        (report.empirical_diag_mean - report.predicted_scale).abs() / report.predicted_scale;
    let offdiag_rel = report.empirical_offdiag_max / report.empirical_diag_mean;

    println!("singular Wishart pseudo-inverse mean check");
    println!(
        "  m = {}, k = {}, sigma2_phi = {}, trials = {}, seed = {seed}",
        report.m, report.k, report.sigma2_phi, report.trials
    );
    println!("  predicted scale       {}", report.predicted_scale);
    println!(
        "  empirical diag mean   {}  ({:.2}% off prediction)",
        report.empirical_diag_mean,
        diag_rel * 100.0
    );
    println!(
        "  off-diagonal max      {}  ({:.2}% of diagonal mean)",
        report.empirical_offdiag_max,
        offdiag_rel * 100.0
    );

    if report.trials < MIN_CONCLUSIVE_TRIALS {
        println!(
            "  verdict: INCONCLUSIVE (fewer than {MIN_CONCLUSIVE_TRIALS} trials; \
             the empirical mean is too noisy to judge)"
        );
    } else if diag_rel <= tolerance && offdiag_rel <= OFFDIAG_FRACTION {
        println!(
            "  verdict: PASS (diagonal within {:.0}%, off-diagonal below {:.0}%)",
            tolerance * 100.0,
            OFFDIAG_FRACTION * 100.0
        );
    } else if diag_rel > tolerance {
        println!(
            "  verdict: FAIL (diagonal deviates {:.2}%, tolerance {:.0}%)",
            diag_rel * 100.0,
            tolerance * 100.0
        );
    } else {
        println!(
            "  verdict: FAIL (off-diagonal mass {:.2}% of diagonal, limit {:.0}%)",
            offdiag_rel * 100.0,
            OFFDIAG_FRACTION * 100.0
        );
    }
}
