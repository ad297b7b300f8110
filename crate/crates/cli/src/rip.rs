//! The `rip` subcommand: brute-force RIP constant of a small matrix, either
//! generated from the seed or read from a CSV file.

use std::path::Path;

use anyhow::{bail, Context, Result};
use nalgebra::DMatrix;

use oracle_cs_core::{gen_sensing_matrix, rip_constant_bruteforce, RngStream};

use crate::config::{resolve, resolve_with, ConfigFile};
use crate::RipArgs;

pub fn run(args: &RipArgs) -> Result<()> {
    let file = match &args.common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let k = resolve(args.common.k, file.k, 2);
    if k == 0 {
        bail!("the RIP order k must be at least 1");
    }

    let a = match &args.matrix {
        Some(path) => read_matrix_csv(path)?,
        None => {
            // Defaults are deliberately small: the search is combinatorial.
            let m = resolve(args.common.m, file.m, 8);
            let n = resolve(args.common.n, file.n, 12);
            let sigma2_phi =
                resolve_with(args.common.sigma2_phi, file.sigma2_phi, || 1.0 / m as f64);
            let seed = resolve(args.common.seed, file.seed, 1);
            let mut rng = RngStream::new(seed, 0).rng();
            gen_sensing_matrix(m, n, sigma2_phi, &mut rng)?
        }
    };

    let estimate = crate::with_pool(args.common.threads, || Ok(rip_constant_bruteforce(&a, k)?))?;

    println!("matrix: {} x {}", a.nrows(), a.ncols());
    println!("subsets checked: {}", estimate.subsets_checked);
    println!("delta_{k} = {}", estimate.delta_k);
    println!(
        "argmax subset = {}",
        estimate
            .argmax_subset
            .iter()
            .map(|j| j.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    Ok(())
}

/// Read a matrix from a CSV file: one row per line, comma-separated numbers,
/// no header.
fn read_matrix_csv(path: &Path) -> Result<DMatrix<f64>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read matrix file {}", path.display()))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = crate::config::parse_list(line)
            .with_context(|| format!("{}:{}", path.display(), lineno + 1))?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                bail!(
                    "{}:{}: row has {} entries, expected {}",
                    path.display(),
                    lineno + 1,
                    row.len(),
                    first.len()
                );
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        bail!("matrix file {} contains no rows", path.display());
    }
    let (nrows, ncols) = (rows.len(), rows[0].len());
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}
