//! Experiment configuration, counting campaigns and exponent fits.
//!
//! A run writes `series.csv` (columns `B,count`) and `report.json` to the
//! configured output directory. Neither file contains timings, so reruns are
//! byte-identical regardless of thread count.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::detmethod::{extract_auxiliary_form, partition_by_residue, prime_window, AuxOutcome};
use crate::enumerate::{count_affine, count_affine_surface, count_projective, CountSeries, ResidueFilter, Strategy};
use crate::poly::{irreducibility_report, parse_poly, IntPoly, IrreducibilityOptions, Verdict};
use crate::{Error, Result};

pub const THREADS_VAR: &str = "HEIGHTCOUNT_THREADS";
pub const SEED_VAR: &str = "HEIGHTCOUNT_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountFunction {
    /// Primitive projective zeros N(F;B).
    N,
    /// Affine zeros M(f;B) in the box.
    M,
    /// Affine surface points [1, x] with residue filters.
    Naff,
    /// N(F;B) plus per-class auxiliary forms.
    #[serde(rename = "detmethod")]
    Detmethod,
}

impl std::str::FromStr for CountFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "N" => Ok(Self::N),
            "M" => Ok(Self::M),
            "Naff" => Ok(Self::Naff),
            "detmethod" | "Detmethod" => Ok(Self::Detmethod),
            _ => Err(Error::Config(format!("unknown counting function {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Grid {
    /// `points` bounds ending at `bmax`, each `ratio` times the previous.
    Geometric { bmax: u64, points: usize, ratio: f64 },
    List { values: Vec<u64> },
}

impl Grid {
    /// Powers of two from 2 up to bmax.
    pub fn powers_of_two(bmax: u64) -> Grid {
        let points = (bmax.max(2) as f64).log2().floor() as usize;
        Grid::Geometric { bmax: 1 << points, points, ratio: 2.0 }
    }

    /// Parses `geometric:k` (ratio 2 ending at bmax) or a comma list.
    pub fn parse(s: &str, bmax: u64) -> Result<Grid> {
        if let Some(k) = s.strip_prefix("geometric:") {
            let points = k.parse().map_err(|_| Error::Config(format!("bad grid size {k:?}")))?;
            return Ok(Grid::Geometric { bmax, points, ratio: 2.0 });
        }
        let values = s
            .split(',')
            .map(|v| v.trim().parse().map_err(|_| Error::Config(format!("bad grid value {v:?}"))))
            .collect::<Result<_>>()?;
        Ok(Grid::List { values })
    }

    pub fn values(&self) -> Vec<u64> {
        match self {
            Grid::List { values } => values.clone(),
            Grid::Geometric { bmax, points, ratio } => (0..*points)
                .map(|i| (*bmax as f64 / ratio.powi((*points - 1 - i) as i32)).round() as u64)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarietySpec {
    pub poly: String,
    #[serde(default)]
    pub degree: Option<u32>,
    #[serde(default)]
    pub dimension: Option<usize>,
    #[serde(default)]
    pub integral: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowParams {
    pub epsilon: f64,
    pub min_count: usize,
    pub max_degree: u32,
}

impl Default for WindowParams {
    fn default() -> Self {
        WindowParams { epsilon: 0.05, min_count: 1, max_degree: 6 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub variety: VarietySpec,
    pub grid: Grid,
    pub function: CountFunction,
    #[serde(default)]
    pub filters: Vec<ResidueFilter>,
    #[serde(default)]
    pub window: WindowParams,
    #[serde(default)]
    pub target: Option<f64>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Not echoed into reports, so runs into different directories compare equal.
    #[serde(default, skip_serializing)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

fn default_tolerance() -> f64 {
    0.15
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        Self::from_json(&s)
    }

    /// Applies the seed environment override.
    pub fn with_env(mut self) -> Result<Self> {
        if let Ok(s) = std::env::var(SEED_VAR) {
            self.seed = s.parse().map_err(|_| Error::Config(format!("{SEED_VAR} must be an integer")))?;
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<IntPoly> {
        let grid = self.grid.values();
        if grid.is_empty() {
            return Err(Error::Config("empty B-grid".into()));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] == 0 {
            return Err(Error::Config("B-grid must be positive and strictly increasing".into()));
        }
        let f = parse_poly(&self.variety.poly)?.poly;
        if let Some(d) = self.variety.degree {
            if f.degree() != Some(d) {
                return Err(Error::Config(format!("declared degree {d} but polynomial has degree {:?}", f.degree())));
            }
        }
        Ok(f)
    }
}

pub(crate) fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), msg: e.to_string() }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub series: CountSeries,
    pub slope: f64,
    pub intercept: f64,
    /// Sum of squared residuals in log space.
    pub residual: f64,
    pub target: Option<f64>,
    pub tolerance: f64,
    pub margin: Option<f64>,
    pub verdict: Option<bool>,
}

/// Least-squares slope of log count against log B over positive counts.
pub fn fit_exponent(series: &CountSeries) -> Result<FitReport> {
    fit_against(series, None, default_tolerance())
}

pub fn fit_against(series: &CountSeries, target: Option<f64>, tolerance: f64) -> Result<FitReport> {
    let pts: Vec<(f64, f64)> =
        series.entries.iter().filter(|e| e.1 > 0 && e.0 > 0).map(|&(b, c)| ((b as f64).ln(), (c as f64).ln())).collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData);
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData);
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let margin = target.map(|t| (slope - t).abs());
    Ok(FitReport {
        series: series.clone(),
        slope,
        intercept,
        residual,
        target,
        tolerance,
        margin,
        verdict: margin.map(|m| m <= tolerance),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub b: u64,
    pub p: u64,
    pub classes: usize,
    pub largest_class: usize,
    pub forms_found: usize,
    pub rank_full: usize,
    pub max_form_degree: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub parsed: String,
    pub irreducibility: Option<Verdict>,
    pub fit: Option<FitReport>,
    pub fit_error: Option<String>,
    pub detmethod: Vec<ClassStats>,
}

fn detmethod_stats(f: &IntPoly, b: u64, window: &WindowParams) -> Result<ClassStats> {
    let d = f.degree().unwrap_or(0).max(1);
    let pw = prime_window(b, d, window.epsilon, window.min_count);
    let p = pw.primes[0];
    let pts = count_affine_surface(f, b, &[])?.points;
    let classes = partition_by_residue(&pts, p, f)?;
    let mut stats =
        ClassStats { b, p, classes: classes.len(), largest_class: 0, forms_found: 0, rank_full: 0, max_form_degree: 0 };
    for c in classes.values() {
        stats.largest_class = stats.largest_class.max(c.points.len());
        if c.points.len() < 2 {
            continue;
        }
        let xs: Vec<Vec<BigInt>> =
            c.points.iter().map(|x| [1, x[0], x[1], x[2]].iter().map(|&v| BigInt::from(v)).collect()).collect();
        let mut found = false;
        for dd in 1..=window.max_degree {
            match extract_auxiliary_form(&xs, dd, f) {
                Ok(AuxOutcome::Form(g)) => {
                    stats.max_form_degree = stats.max_form_degree.max(g.degree);
                    found = true;
                    break;
                }
                Ok(AuxOutcome::RankFull { .. }) | Err(Error::IncreaseDegree) => {}
                Err(e) => return Err(e),
            }
        }
        if found {
            stats.forms_found += 1;
        } else {
            stats.rank_full += 1;
        }
    }
    Ok(stats)
}

/// Counts over the grid; grid points are evaluated in order, each count
/// internally parallel.
pub fn run_counts(config: &ExperimentConfig) -> Result<(CountSeries, Vec<ClassStats>)> {
    let f = config.validate()?;
    let mut entries = Vec::new();
    let mut stats = Vec::new();
    for b in config.grid.values() {
        let count = match config.function {
            CountFunction::N => count_projective(&f, b, false)?.count,
            CountFunction::M => count_affine(&f, b, Strategy::SolveLast)?,
            CountFunction::Naff => count_affine_surface(&f, b, &config.filters)?.count,
            CountFunction::Detmethod => {
                stats.push(detmethod_stats(&f, b, &config.window)?);
                count_projective(&f, b, false)?.count
            }
        };
        entries.push((b, count));
    }
    let function = serde_json::to_value(config.function).unwrap().as_str().unwrap().to_string();
    Ok((CountSeries { function, entries }, stats))
}

pub fn series_csv(series: &CountSeries) -> String {
    let mut s = String::from("B,count\n");
    for (b, c) in &series.entries {
        s.push_str(&format!("{b},{c}\n"));
    }
    s
}

/// Runs the experiment, writing `series.csv` and `report.json` when an output
/// directory is configured.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let f = config.validate()?;
    let (series, detmethod) = run_counts(config)?;
    let irreducibility = config.variety.integral.map(|_| {
        let opts = IrreducibilityOptions { seed: config.seed, ..Default::default() };
        irreducibility_report(&f, &opts).verdict
    });
    let (fit, fit_error) = match fit_against(&series, config.target, config.tolerance) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let report = ExperimentReport { config: config.clone(), parsed: f.to_string(), irreducibility, fit, fit_error, detmethod };
    if let Some(dir) = &config.output {
        write_outputs(dir, &series, &report)?;
    }
    Ok(report)
}

pub fn write_outputs(dir: &Path, series: &CountSeries, report: &impl Serialize) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let csv = dir.join("series.csv");
    std::fs::write(&csv, series_csv(series)).map_err(|e| io_err(&csv, e))?;
    let json = dir.join("report.json");
    let body = serde_json::to_string_pretty(report).map_err(|e| Error::Config(e.to_string()))? + "\n";
    std::fs::write(&json, body).map_err(|e| io_err(&json, e))?;
    Ok(())
}

/// Thread count from the environment, if set.
pub fn env_threads() -> Result<Option<usize>> {
    match std::env::var(THREADS_VAR) {
        Ok(s) => s.parse().map(Some).map_err(|_| Error::Config(format!("{THREADS_VAR} must be a positive integer"))),
        Err(_) => Ok(None),
    }
}
