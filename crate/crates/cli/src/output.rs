//! File emission: CSV tables, run manifests, and optional gnuplot scripts.
//!
//! All numeric output goes through `f64`'s `Display`, which prints the
//! shortest decimal string that parses back to the identical value, so CSV
//! and manifest values round-trip exactly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{Context, Result};

use oracle_cs_core::SweepResult;

/// Render one sweep as CSV: the swept parameter, the empirical and predicted
/// MSE columns, then one (lower, upper) bound pair per RIP constant. The
/// upper bound is the white-noise one unless `correlated_upper` is set, in
/// which case it is the correlated-noise bound and the headers say so.
pub fn sweep_csv(result: &SweepResult, correlated_upper: bool) -> String {
    let mut header = vec![
        result.parameter.name().to_string(),
        "empirical_mse".to_string(),
        "std_error".to_string(),
        "predicted_mse".to_string(),
    ];
    for &dk in &result.delta_ks {
        if correlated_upper {
            header.push(format!("rip_lower_white_dk{dk}"));
            header.push(format!("rip_upper_corr_dk{dk}"));
        } else {
            header.push(format!("rip_lower_dk{dk}"));
            header.push(format!("rip_upper_dk{dk}"));
        }
    }

    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for p in &result.points {
        let mut row = vec![p.value, p.empirical_mse, p.std_error, p.predicted_mse];
        for b in &p.bounds {
            row.push(b.rip_lower_white);
            row.push(if correlated_upper {
                b.rip_upper_corr
            } else {
                b.rip_upper_white
            });
        }
        let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// A run manifest: informational lines as `#` comments, then the resolved
/// configuration as `key=value` lines readable back via `--config`.
pub struct Manifest<'a> {
    pub subcommand: &'a str,
    pub duration: Duration,
    pub outputs: &'a [PathBuf],
    /// Resolved configuration, in emission order.
    pub entries: Vec<(&'static str, String)>,
}

impl Manifest<'_> {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# oracle-cs run manifest");
        let _ = writeln!(out, "# subcommand: {}", self.subcommand);
        let _ = writeln!(out, "# duration_s: {}", self.duration.as_secs_f64());
        for o in self.outputs {
            let _ = writeln!(out, "# output: {}", o.display());
        }
        let _ = writeln!(
            out,
            "# config lines follow; pass this file to --config to reproduce the outputs"
        );
        let _ = writeln!(out, "version={}", env!("CARGO_PKG_VERSION"));
        for (key, value) in &self.entries {
            let _ = writeln!(out, "{key}={value}");
        }
        out
    }
}

/// Join numbers into a comma list using round-trip formatting.
pub fn format_list(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// A minimal gnuplot script plotting empirical vs predicted MSE from a CSV.
pub fn plot_script(csv_name: &str, parameter: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set logscale xy\n\
         set xlabel '{parameter}'\n\
         set ylabel 'MSE'\n\
         set key left top\n\
         plot '{csv_name}' using 1:2:3 with yerrorbars title 'empirical', \\\n\
         \x20    '{csv_name}' using 1:4 with lines title 'closed form'\n"
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use oracle_cs_core::{BoundSet, SweepParameter, SweepPoint};

    fn tiny_result() -> SweepResult {
        SweepResult {
            parameter: SweepParameter::Sigma2Z,
            delta_ks: vec![0.0, 0.5],
            points: vec![SweepPoint {
                value: 1e-3,
                empirical_mse: 0.0625,
                std_error: 0.001,
                predicted_mse: 0.0624,
                bounds: vec![
                    BoundSet {
                        closed_form: 0.0624,
                        rip_lower_white: 0.016,
                        rip_upper_white: 0.016,
                        rip_upper_corr: 0.03,
                        delta_k: 0.0,
                    },
                    BoundSet {
                        closed_form: 0.0624,
                        rip_lower_white: 0.0106,
                        rip_upper_white: 0.032,
                        rip_upper_corr: 0.06,
                        delta_k: 0.5,
                    },
                ],
            }],
        }
    }

    #[test]
    fn csv_header_and_rows_match_layout() {
        let csv = sweep_csv(&tiny_result(), false);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "sigma2_z,empirical_mse,std_error,predicted_mse,\
             rip_lower_dk0,rip_upper_dk0,rip_lower_dk0.5,rip_upper_dk0.5"
        );
        assert_eq!(
            lines.next().unwrap(),
            "0.001,0.0625,0.001,0.0624,0.016,0.016,0.0106,0.032"
        );
        assert!(lines.next().is_none());
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn correlated_upper_switches_column_and_header() {
        let csv = sweep_csv(&tiny_result(), true);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "sigma2_z,empirical_mse,std_error,predicted_mse,\
             rip_lower_white_dk0,rip_upper_corr_dk0,rip_lower_white_dk0.5,rip_upper_corr_dk0.5"
        );
        assert_eq!(
            lines.next().unwrap(),
            "0.001,0.0625,0.001,0.0624,0.016,0.03,0.0106,0.06"
        );
    }

    #[test]
    fn csv_values_round_trip() {
        let values = [1e-6, 0.1 + 0.2, 2048.0 / 111.0, f64::MIN_POSITIVE * 8.0];
        for v in values {
            let s = format!("{v}");
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }

    #[test]
    fn manifest_is_config_readable() {
        let manifest = Manifest {
            subcommand: "sweep white",
            duration: Duration::from_millis(1234),
            outputs: &[PathBuf::from("white.csv")],
            entries: vec![("n", "512".into()), ("delta_k", "0,0.5".into())],
        };
        let text = manifest.render();
        let cfg = crate::config::ConfigFile::parse(&text).unwrap();
        assert_eq!(cfg.n, Some(512));
        assert_eq!(cfg.delta_k, Some(vec![0.0, 0.5]));
    }
}
