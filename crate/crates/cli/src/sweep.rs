//! The `sweep` subcommands: run a Monte-Carlo sweep for one noise family,
//! write one CSV per series, print a comparison report, and record a
//! manifest that reproduces the run.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};

use oracle_cs_core::{Experiment, ExperimentConfig, NoiseModel, SweepParameter, SweepResult};

use crate::config::{resolve, resolve_with, ConfigFile};
use crate::output::{format_list, plot_script, sweep_csv, write_text, Manifest};
use crate::{SweepArgs, SweepKind};

/// Everything a sweep needs, after flag/config/default resolution.
struct Resolved {
    n: usize,
    k: usize,
    m: usize,
    trials: usize,
    seed: u64,
    sigma2_theta: f64,
    sigma2_phi: f64,
    out: PathBuf,
    threads: Option<usize>,
    sigma2z_grid: Vec<f64>,
    delta_grid: Vec<f64>,
    rho: Vec<f64>,
    delta_k: Vec<f64>,
    plot_script: bool,
}

fn default_sigma2z_grid() -> Vec<f64> {
    // Six decades, 1e-6 ..= 1e-1. Artifact default; override with
    // --sigma2z-grid.
    (-6..=-1).map(|e| 10f64.powi(e)).collect()
}

fn default_delta_grid() -> Vec<f64> {
    // Seven half-decade steps, 1e-3 ..= 1. The small end sits deep in the
    // high-rate regime, the large end at signal scale.
    (0..7).map(|i| 10f64.powf(-3.0 + 0.5 * i as f64)).collect()
}

fn resolve_args(args: &SweepArgs) -> Result<Resolved> {
    let file = match &args.common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let m = resolve(args.common.m, file.m, 128);
    Ok(Resolved {
        n: resolve(args.common.n, file.n, 512),
        k: resolve(args.common.k, file.k, 16),
        m,
        trials: resolve(args.common.trials, file.trials, 1000),
        seed: resolve(args.common.seed, file.seed, 1),
        sigma2_theta: resolve(args.sigma2_theta, file.sigma2_theta, 1.0),
        sigma2_phi: resolve_with(args.common.sigma2_phi, file.sigma2_phi, || 1.0 / m as f64),
        out: args
            .common
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from(".")),
        threads: args.common.threads,
        sigma2z_grid: resolve_with(
            args.sigma2z_grid.clone(),
            file.sigma2z_grid,
            default_sigma2z_grid,
        ),
        delta_grid: resolve_with(args.delta_grid.clone(), file.delta_grid, default_delta_grid),
        rho: resolve_with(args.rho.clone(), file.rho, || vec![0.9, 0.999]),
        delta_k: resolve_with(args.delta_k.clone(), file.delta_k, || vec![0.0, 0.5]),
        plot_script: args.plot_script,
    })
}

pub fn run(kind: &SweepKind) -> Result<()> {
    let args = match kind {
        SweepKind::White(a) | SweepKind::Quant(a) | SweepKind::Corr(a) => a,
    };
    let r = resolve_args(args)?;
    crate::with_pool(r.threads, || execute(kind, &r))
}

fn execute(kind: &SweepKind, r: &Resolved) -> Result<()> {
    let started = Instant::now();
    std::fs::create_dir_all(&r.out)
        .with_context(|| format!("cannot create output directory {}", r.out.display()))?;

    // One (noise base, parameter, grid, csv stem) tuple per series.
    let series: Vec<(NoiseModel, SweepParameter, &[f64], String)> = match kind {
        SweepKind::White(_) => vec![(
            NoiseModel::white(r.m, 0.0)?,
            SweepParameter::Sigma2Z,
            &r.sigma2z_grid[..],
            "white".to_string(),
        )],
        SweepKind::Quant(_) => vec![(
            NoiseModel::quantizer(r.m, 1.0)?,
            SweepParameter::Delta,
            &r.delta_grid[..],
            "quant".to_string(),
        )],
        SweepKind::Corr(_) => r
            .rho
            .iter()
            .map(|&rho| {
                Ok((
                    NoiseModel::ar1(r.m, 0.0, rho)?,
                    SweepParameter::Sigma2Z,
                    &r.sigma2z_grid[..],
                    format!("corr_rho{rho}"),
                ))
            })
            .collect::<Result<_>>()?,
    };
    let correlated_upper = matches!(kind, SweepKind::Corr(_));

    let mut outputs = Vec::new();
    for (noise, parameter, grid, stem) in &series {
        let experiment = Experiment::new(ExperimentConfig {
            n: r.n,
            k: r.k,
            m: r.m,
            sigma2_theta: r.sigma2_theta,
            sigma2_phi: r.sigma2_phi,
            noise: *noise,
            trials: r.trials,
            seed: r.seed,
        })?;
        let result = experiment.run_sweep(*parameter, grid, &r.delta_k)?;

        println!(
            "{stem}: {} points x {} trials (n={}, k={}, m={}, seed={})",
            grid.len(),
            r.trials,
            r.n,
            r.k,
            r.m,
            r.seed
        );
        report(&result);

        let csv_path = r.out.join(format!("{stem}.csv"));
        write_text(&csv_path, &sweep_csv(&result, correlated_upper))?;
        outputs.push(csv_path);
        if r.plot_script {
            let gp_path = r.out.join(format!("{stem}.gp"));
            write_text(
                &gp_path,
                &plot_script(&format!("{stem}.csv"), result.parameter.name()),
            )?;
            outputs.push(gp_path);
        }
    }

    let stem = match kind {
        SweepKind::White(_) => "white",
        SweepKind::Quant(_) => "quant",
        SweepKind::Corr(_) => "corr",
    };
    let mut entries = vec![
        ("n", r.n.to_string()),
        ("k", r.k.to_string()),
        ("m", r.m.to_string()),
        ("trials", r.trials.to_string()),
        ("seed", r.seed.to_string()),
        ("sigma2_theta", format!("{}", r.sigma2_theta)),
        ("sigma2_phi", format!("{}", r.sigma2_phi)),
    ];
    match kind {
        SweepKind::White(_) => entries.push(("sigma2z_grid", format_list(&r.sigma2z_grid))),
        SweepKind::Quant(_) => entries.push(("delta_grid", format_list(&r.delta_grid))),
        SweepKind::Corr(_) => {
            entries.push(("sigma2z_grid", format_list(&r.sigma2z_grid)));
            entries.push(("rho", format_list(&r.rho)));
        }
    }
    entries.push(("delta_k", format_list(&r.delta_k)));

    let manifest_path = r.out.join(format!("{stem}_manifest.txt"));
    let manifest = Manifest {
        subcommand: &format!("sweep {stem}"),
        duration: started.elapsed(),
        outputs: &outputs,
        entries,
    };
    write_text(&manifest_path, &manifest.render())?;

    for path in outputs.iter().chain(std::iter::once(&manifest_path)) {
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// Per-point comparison of the empirical mean against the closed form.
fn report(result: &SweepResult) {
    for p in &result.points {
        let dev = if p.std_error > 0.0 {
            format!(
                "{:+.2} se",
                (p.empirical_mse - p.predicted_mse) / p.std_error
            )
        } else {
            "se = 0".to_string()
        };
        println!(
            "  {}={:<10} empirical={:.6e}  predicted={:.6e}  ({dev})",
            result.parameter.name(),
            p.value,
            p.empirical_mse,
            p.predicted_mse,
        );
    }
}
