//! The commands behind the `bettinet` binary.
//!
//! Four subcommands cover the pipeline end to end:
//!
//! * `filtrate` — one dataset in; edge weights, filtration values, the
//!   Betti-0 curve, and a plot out.
//! * `compare` — two datasets in; jackknife replicate curves, area table,
//!   test result, and an overlay plot out.
//! * `simulate` — write the two calibration studies' CSVs for a seed.
//! * `bench` — time each pipeline stage on synthetic data of a given size.
//!
//! Every run that writes files also writes a `manifest.json` recording the
//! inputs, parameters, seed, and tool version — enough to reproduce the run
//! byte for byte. Outputs are composed in memory and written only after all
//! computation has succeeded; if any single write then fails, the files
//! already written for that run are removed, so a partial output directory
//! is never left behind. The manifest is always the last file written.

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::data::{edge_weights, fmt_g17, load_csv, normalize_columns, DataMatrix, WeightMode};
use crate::error::{Error, Result};
use crate::filtration::{betti_curve, build_filtration, BettiCurve};
use crate::inference::{auc, compare_groups_detailed};
use crate::plot::{render_betti_plot, LineStyle, PlotSeries};
use crate::sim::{simulate_study1, simulate_study2, SimConfig, SimRng, RNG_IDENTITY};

/// Record of one command run, written as `manifest.json` next to the other
/// outputs. Fields irrelevant to a command are omitted from the JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Manifest layout version; bump on breaking changes.
    pub schema_version: u32,
    /// Which subcommand ran.
    pub command: String,
    /// Input file paths, in positional order (empty for generators).
    pub inputs: Vec<String>,
    /// Edge-weight mode, for commands that have one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// The threshold domain actually used (resolved from the flag or the
    /// mode default).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain_max: Option<f64>,
    /// RNG seed, for generator commands.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Full simulation configuration, for generator commands.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sim_config: Option<SimConfig>,
    /// Identity of the random number generator, for generator commands.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
    /// Version of this tool.
    pub tool_version: String,
    /// Wall-clock compute time (excludes writing the outputs).
    pub duration_seconds: f64,
}

impl RunManifest {
    fn new(command: &str, inputs: Vec<String>) -> Self {
        RunManifest {
            schema_version: 1,
            command: command.to_string(),
            inputs,
            mode: None,
            domain_max: None,
            seed: None,
            sim_config: None,
            rng: None,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            duration_seconds: 0.0,
        }
    }

    fn to_json_string(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        text
    }
}

/// Network filtrations and Betti-0 group comparison for
/// subjects-by-nodes data matrices.
#[derive(Debug, Parser)]
#[command(name = "bettinet", version, about)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the filtration and Betti-0 curve for one dataset
    Filtrate {
        /// CSV with one subject per row and one node per column
        input: PathBuf,
        /// Edge-weight mode: "correlation" or "covariance"
        #[arg(long, default_value = "correlation", value_parser = parse_weight_mode)]
        mode: WeightMode,
        /// Upper end of the threshold domain (default: 1 for correlation,
        /// the largest weight for covariance)
        #[arg(long)]
        domain_max: Option<f64>,
        /// Treat the first CSV row as column names
        #[arg(long)]
        has_header: bool,
        /// Output directory, created if missing
        #[arg(long, default_value = "filtrate_out")]
        out: PathBuf,
    },
    /// Compare two groups via jackknife areas and a rank-sum test
    Compare {
        /// Group 1 CSV (subjects x nodes)
        input1: PathBuf,
        /// Group 2 CSV (subjects x nodes, same nodes as group 1)
        input2: PathBuf,
        /// Edge-weight mode: "correlation" or "covariance"
        #[arg(long, default_value = "correlation", value_parser = parse_weight_mode)]
        mode: WeightMode,
        /// Common integration domain (default: 1 for correlation, the
        /// largest replicate weight for covariance)
        #[arg(long)]
        domain_max: Option<f64>,
        /// Treat the first CSV row of each input as column names
        #[arg(long)]
        has_header: bool,
        /// Output directory, created if missing
        #[arg(long, default_value = "compare_out")]
        out: PathBuf,
    },
    /// Generate the calibration studies' datasets for a seed
    Simulate {
        /// Which study: 1 (matched null groups) or 2 (planted dependency)
        #[arg(long)]
        study: u8,
        /// Subjects in group 1
        #[arg(long, default_value_t = SimConfig::default().n)]
        n: usize,
        /// Subjects in group 2
        #[arg(long, default_value_t = SimConfig::default().m)]
        m: usize,
        /// Nodes per subject
        #[arg(long, default_value_t = SimConfig::default().p)]
        p: usize,
        /// Standard deviation of group 2's measurement noise
        #[arg(long, default_value_t = SimConfig::default().noise_sd)]
        noise_sd: f64,
        /// Coefficient tying the planted columns to column 1 (study 2 only)
        #[arg(long, default_value_t = SimConfig::default().dependency_coefficient)]
        dependency_coefficient: f64,
        /// RNG seed; fixes every output byte
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory, created if missing
        #[arg(long, default_value = "simulate_out")]
        out: PathBuf,
    },
    /// Time the pipeline stages on synthetic standard-normal data
    Bench {
        /// Nodes per subject
        #[arg(long, default_value_t = 548)]
        p: usize,
        /// Subjects
        #[arg(long, default_value_t = 54)]
        n: usize,
        /// RNG seed for the synthetic data
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_weight_mode(text: &str) -> std::result::Result<WeightMode, String> {
    text.parse().map_err(|e: Error| e.to_string())
}

impl Cli {
    /// Runs the parsed command.
    pub fn execute(self) -> Result<()> {
        match self.command {
            Command::Filtrate {
                input,
                mode,
                domain_max,
                has_header,
                out,
            } => cmd_filtrate(&input, mode, domain_max, has_header, &out),
            Command::Compare {
                input1,
                input2,
                mode,
                domain_max,
                has_header,
                out,
            } => cmd_compare(&input1, &input2, mode, domain_max, has_header, &out),
            Command::Simulate {
                study,
                n,
                m,
                p,
                noise_sd,
                dependency_coefficient,
                seed,
                out,
            } => {
                let cfg = SimConfig {
                    n,
                    m,
                    p,
                    noise_sd,
                    dependency_coefficient,
                    seed,
                };
                cmd_simulate(study, &cfg, &out)
            }
            Command::Bench { p, n, seed } => {
                let report = run_bench(p, n, seed)?;
                println!("{report}");
                Ok(())
            }
        }
    }
}

/// Parses the process arguments and runs the selected command.
pub fn run() -> Result<()> {
    Cli::parse().execute()
}

/// Writes `files` into `dir` in order, creating the directory if needed.
/// On any write failure the files already written by this call are removed,
/// so a run never leaves a partial output set behind.
fn write_files(dir: &Path, files: &[(&str, String)]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written: Vec<PathBuf> = Vec::new();
    for (name, content) in files {
        let path = dir.join(name);
        match std::fs::write(&path, content) {
            Ok(()) => written.push(path),
            Err(source) => {
                for path in &written {
                    let _ = std::fs::remove_file(path);
                }
                return Err(Error::io(&path, source));
            }
        }
    }
    Ok(())
}

fn file_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn cmd_filtrate(
    input: &Path,
    mode: WeightMode,
    domain_max: Option<f64>,
    has_header: bool,
    out: &Path,
) -> Result<()> {
    let start = Instant::now();
    let data = load_csv(input, has_header)?;
    let z = normalize_columns(&data)?;
    let weights = edge_weights(&z, mode);
    let filtration = build_filtration(&weights);
    let domain = domain_max.unwrap_or(match mode {
        WeightMode::Correlation => 1.0,
        WeightMode::Covariance => weights.max_weight(),
    });
    let curve = betti_curve(&filtration, domain)?;
    let svg = render_betti_plot(
        &[PlotSeries {
            label: file_label(input),
            curve: &curve,
            style: LineStyle::Solid,
        }],
        &format!("Betti-0 curve ({mode} weights)"),
    )?;

    let mut manifest = RunManifest::new("filtrate", vec![input.display().to_string()]);
    manifest.mode = Some(mode.to_string());
    manifest.domain_max = Some(domain);
    manifest.duration_seconds = start.elapsed().as_secs_f64();

    write_files(
        out,
        &[
            ("edge_weights.csv", weights.to_csv_string()),
            ("filtration_values.csv", filtration.values_to_csv_string()),
            ("betti_curve.csv", curve.to_csv_string()),
            ("betti_curve.json", pretty_json(&curve.to_json())),
            ("betti_plot.svg", svg),
            ("manifest.json", manifest.to_json_string()),
        ],
    )?;

    println!(
        "loaded {} subjects x {} nodes from {}",
        data.n_subjects(),
        data.n_nodes(),
        input.display()
    );
    println!(
        "{} weighted edges, {} distinct weights, {} filtration levels",
        filtration.edges().len(),
        filtration.values().len(),
        filtration.levels()
    );
    println!(
        "betti curve: {} breakpoints, terminal value {}, area {:.6} over [0, {}]",
        curve.breakpoints().len(),
        curve.terminal_value(),
        auc(&curve),
        domain
    );
    println!("wrote 6 files to {}", out.display());
    Ok(())
}

fn cmd_compare(
    input1: &Path,
    input2: &Path,
    mode: WeightMode,
    domain_max: Option<f64>,
    has_header: bool,
    out: &Path,
) -> Result<()> {
    let start = Instant::now();
    let data1 = load_csv(input1, has_header)?;
    let data2 = load_csv(input2, has_header)?;
    let comparison = compare_groups_detailed(&data1, &data2, mode, domain_max)?;

    // Long-format export of every replicate curve.
    let mut replicate_csv = String::from("group,replicate,lambda,beta0\n");
    let mut auc_csv = String::from("group,replicate,auc\n");
    for (group, curves) in [(1, &comparison.curves1), (2, &comparison.curves2)] {
        for (idx, curve) in curves.iter().enumerate() {
            for &(lambda, beta) in curve.breakpoints() {
                replicate_csv.push_str(&format!(
                    "{group},{},{},{beta}\n",
                    idx + 1,
                    fmt_g17(lambda)
                ));
            }
            auc_csv.push_str(&format!("{group},{},{}\n", idx + 1, fmt_g17(auc(curve))));
        }
    }

    // Overlay plot uses the full samples; the domain may need to stretch
    // past the comparison's (a full covariance weight can exceed every
    // leave-one-out weight).
    let full_curve = |data: &DataMatrix| -> Result<(BettiCurve, f64)> {
        let w = edge_weights(&normalize_columns(data)?, mode);
        Ok((
            betti_curve(
                &build_filtration(&w),
                comparison.domain_max.max(w.max_weight()),
            )?,
            w.max_weight(),
        ))
    };
    let (curve1, max1) = full_curve(&data1)?;
    let (curve2, max2) = full_curve(&data2)?;
    let overlay_domain = comparison.domain_max.max(max1).max(max2);
    let restretch = |c: &BettiCurve| -> Result<BettiCurve> {
        BettiCurve::from_breakpoints(c.breakpoints().to_vec(), overlay_domain)
    };
    let (curve1, curve2) = (restretch(&curve1)?, restretch(&curve2)?);
    let svg = render_betti_plot(
        &[
            PlotSeries {
                label: format!("group 1 ({})", file_label(input1)),
                curve: &curve1,
                style: LineStyle::Solid,
            },
            PlotSeries {
                label: format!("group 2 ({})", file_label(input2)),
                curve: &curve2,
                style: LineStyle::Dashed,
            },
        ],
        &format!("Full-sample Betti-0 curves ({mode} weights)"),
    )?;

    let mut result_json = comparison.result.to_json();
    result_json["domain_max"] = serde_json::json!(comparison.domain_max);

    let mut manifest = RunManifest::new(
        "compare",
        vec![input1.display().to_string(), input2.display().to_string()],
    );
    manifest.mode = Some(mode.to_string());
    manifest.domain_max = Some(comparison.domain_max);
    manifest.duration_seconds = start.elapsed().as_secs_f64();

    write_files(
        out,
        &[
            ("replicate_curves.csv", replicate_csv),
            ("auc_table.csv", auc_csv),
            ("comparison.json", pretty_json(&result_json)),
            ("betti_overlay.svg", svg),
            ("manifest.json", manifest.to_json_string()),
        ],
    )?;

    println!("{}", comparison.result);
    println!("wrote 5 files to {}", out.display());
    Ok(())
}

fn cmd_simulate(study: u8, cfg: &SimConfig, out: &Path) -> Result<()> {
    let start = Instant::now();
    let (x, y) = match study {
        1 => simulate_study1(cfg)?,
        2 => simulate_study2(cfg)?,
        other => {
            return Err(Error::InvalidConfig(format!(
                "study must be 1 or 2, got {other}"
            )))
        }
    };

    let mut manifest = RunManifest::new(&format!("simulate --study {study}"), Vec::new());
    manifest.seed = Some(cfg.seed);
    manifest.sim_config = Some(*cfg);
    manifest.rng = Some(RNG_IDENTITY.to_string());
    manifest.duration_seconds = start.elapsed().as_secs_f64();

    write_files(
        out,
        &[
            ("group1.csv", x.to_csv_string(false)),
            ("group2.csv", y.to_csv_string(false)),
            ("manifest.json", manifest.to_json_string()),
        ],
    )?;

    println!(
        "study {study}, seed {}: wrote group1.csv ({}x{}) and group2.csv ({}x{}) to {}",
        cfg.seed,
        x.n_subjects(),
        x.n_nodes(),
        y.n_subjects(),
        y.n_nodes(),
        out.display()
    );
    Ok(())
}

fn pretty_json(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON value serializes");
    text.push('\n');
    text
}

/// Per-stage wall-clock timings of the pipeline on synthetic data.
#[derive(Debug, Clone)]
pub struct BenchReport {
    pub n: usize,
    pub p: usize,
    pub edges: usize,
    pub levels: usize,
    pub normalize_seconds: f64,
    pub weights_seconds: f64,
    pub filtration_seconds: f64,
    pub curve_seconds: f64,
    pub total_seconds: f64,
}

impl std::fmt::Display for BenchReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "pipeline timings for {} subjects x {} nodes",
            self.n, self.p
        )?;
        writeln!(f, "  normalize   {:>9.3} ms", self.normalize_seconds * 1e3)?;
        writeln!(f, "  weights     {:>9.3} ms", self.weights_seconds * 1e3)?;
        writeln!(
            f,
            "  filtration  {:>9.3} ms  ({} edges, {} levels)",
            self.filtration_seconds * 1e3,
            self.edges,
            self.levels
        )?;
        writeln!(f, "  curve       {:>9.3} ms", self.curve_seconds * 1e3)?;
        write!(f, "  total       {:>9.3} ms", self.total_seconds * 1e3)
    }
}

/// Generates an `n x p` standard-normal dataset and times each pipeline
/// stage on it (normalize, edge weights, filtration, curve).
pub fn run_bench(p: usize, n: usize, seed: u64) -> Result<BenchReport> {
    if n < 2 || p < 2 {
        return Err(Error::InvalidConfig(format!(
            "bench needs at least 2 subjects and 2 nodes, got n = {n}, p = {p}"
        )));
    }
    let mut rng = SimRng::new(seed);
    let mut values = ndarray::Array2::zeros((n, p));
    for i in 0..n {
        for j in 0..p {
            values[(i, j)] = rng.next_normal();
        }
    }
    let data = DataMatrix::new(values)?;

    let t0 = Instant::now();
    let z = normalize_columns(&data)?;
    let t1 = Instant::now();
    let weights = edge_weights(&z, WeightMode::Correlation);
    let t2 = Instant::now();
    let filtration = build_filtration(&weights);
    let t3 = Instant::now();
    let curve = betti_curve(&filtration, 1.0)?;
    let t4 = Instant::now();

    // Keep the curve alive so the stage above cannot be optimized away.
    debug_assert_eq!(curve.terminal_value(), p);
    Ok(BenchReport {
        n,
        p,
        edges: filtration.edges().len(),
        levels: filtration.levels(),
        normalize_seconds: (t1 - t0).as_secs_f64(),
        weights_seconds: (t2 - t1).as_secs_f64(),
        filtration_seconds: (t3 - t2).as_secs_f64(),
        curve_seconds: (t4 - t3).as_secs_f64(),
        total_seconds: (t4 - t0).as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_round_trips_through_json() {
        let mut manifest = RunManifest::new("simulate --study 2", Vec::new());
        manifest.seed = Some(42);
        manifest.sim_config = Some(SimConfig {
            seed: 42,
            ..SimConfig::default()
        });
        manifest.rng = Some(RNG_IDENTITY.to_string());
        manifest.duration_seconds = 0.125;
        let text = manifest.to_json_string();
        let back: RunManifest = serde_json::from_str(&text).unwrap();
        assert_eq!(manifest, back);
        // Irrelevant fields stay out of the JSON entirely.
        assert!(!text.contains("\"mode\""));
        assert!(!text.contains("\"domain_max\""));
    }

    #[test]
    fn cli_parses_filtrate_flags() {
        let cli = Cli::try_parse_from([
            "bettinet",
            "filtrate",
            "data.csv",
            "--mode",
            "covariance",
            "--domain-max",
            "2.5",
            "--has-header",
        ])
        .unwrap();
        match cli.command {
            Command::Filtrate {
                input,
                mode,
                domain_max,
                has_header,
                out,
            } => {
                assert_eq!(input, PathBuf::from("data.csv"));
                assert_eq!(mode, WeightMode::Covariance);
                assert_eq!(domain_max, Some(2.5));
                assert!(has_header);
                assert_eq!(out, PathBuf::from("filtrate_out"));
            }
            other => panic!("parsed wrong command: {other:?}"),
        }
    }

    #[test]
    fn cli_rejects_unknown_mode() {
        let err = Cli::try_parse_from(["bettinet", "filtrate", "x.csv", "--mode", "cosine"]);
        assert!(err.is_err());
    }

    #[test]
    fn cli_parses_simulate_defaults() {
        let cli = Cli::try_parse_from(["bettinet", "simulate", "--study", "1"]).unwrap();
        match cli.command {
            Command::Simulate {
                study,
                n,
                m,
                p,
                seed,
                ..
            } => {
                assert_eq!(study, 1);
                assert_eq!((n, m, p, seed), (20, 20, 100, 0));
            }
            other => panic!("parsed wrong command: {other:?}"),
        }
    }

    #[test]
    fn simulate_rejects_unknown_study() {
        let dir = tempfile::tempdir().unwrap();
        let err = cmd_simulate(3, &SimConfig::default(), dir.path()).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
        assert!(
            std::fs::read_dir(dir.path()).unwrap().next().is_none(),
            "failed runs must not leave files"
        );
    }

    #[test]
    fn write_files_cleans_up_after_a_failed_write() {
        let dir = tempfile::tempdir().unwrap();
        // A directory squatting on the second file name forces that write
        // to fail after the first file has landed.
        std::fs::create_dir(dir.path().join("blocked.csv")).unwrap();
        let err = write_files(
            dir.path(),
            &[
                ("first.csv", "a,b\n".to_string()),
                ("blocked.csv", "c,d\n".to_string()),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
        assert!(
            !dir.path().join("first.csv").exists(),
            "earlier outputs must be removed on failure"
        );
    }

    #[test]
    fn bench_runs_on_small_inputs() {
        let report = run_bench(12, 8, 3).unwrap();
        assert_eq!((report.n, report.p), (8, 12));
        assert!(report.levels >= 1);
        assert!(report.total_seconds > 0.0);
        let text = report.to_string();
        assert!(text.contains("pipeline timings"));
        assert!(text.contains("total"));
    }

    #[test]
    fn bench_rejects_degenerate_sizes() {
        assert!(run_bench(1, 8, 0).is_err());
        assert!(run_bench(10, 1, 0).is_err());
    }
}
