use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use heightcount::curves::{conic_parameterize, conic_points_brute_force, count_class_points, plane_eliminate, ConicOutcome};
use heightcount::detmethod::{extract_auxiliary_form, partition_by_residue, prime_window, AuxOutcome};
use heightcount::enumerate::{count_affine_surface, enumerate_variety, verify_slicing, CountSeries, ResidueFilter};
use heightcount::geometry::{find_point_centre, linear_span_equations, project_point, projection_setup, sample_birationality_check};
use heightcount::harness::{env_threads, fit_against, run_experiment, CountFunction, ExperimentConfig, Grid, VarietySpec, WindowParams};
use heightcount::poly::{parse_poly, parse_poly_in};
use heightcount::{Error, Result};
use num_bigint::BigInt;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "heightcount", version, about = "Counting rational points of bounded height")]
struct Cli {
    /// Worker threads (overrides HEIGHTCOUNT_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count points over a grid of bounds.
    Count {
        /// Polynomial text or a file containing it.
        #[arg(long)]
        variety: String,
        #[arg(long, default_value = "N")]
        function: String,
        #[arg(long)]
        bmax: u64,
        /// `geometric:k` or a comma-separated list.
        #[arg(long)]
        grid: Option<String>,
        /// `p:r1,r2,r3`, repeatable.
        #[arg(long)]
        filter: Vec<String>,
        #[arg(long)]
        target: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the slicing inequality for a form.
    Slice {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        bound: u64,
    },
    /// Parameterise integral points on a tangent conic.
    ConicParam {
        /// a0,a1,a2,a3 for a0·X0 = a1·X1 + a2·X2 + a3·X3.
        #[arg(long, allow_hyphen_values = true)]
        plane: String,
        #[arg(long)]
        quadric: String,
        #[arg(long)]
        bound: u64,
        /// Compare against brute-force enumeration.
        #[arg(long)]
        verify: bool,
    },
    /// Project a variety's points from a linear centre.
    Project {
        /// Generators separated by `;`.
        #[arg(long)]
        generators: String,
        #[arg(long)]
        bound: u64,
        /// Variety degree (fiber bound).
        #[arg(long)]
        degree: usize,
        /// Centre points separated by `;`, each comma-separated; searched if absent.
        #[arg(long, allow_hyphen_values = true)]
        centre: Option<String>,
        #[arg(long, default_value_t = 2)]
        centre_height: u64,
    },
    /// Residue classes and auxiliary forms for a surface.
    Detmethod {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long, default_value_t = 6)]
        max_degree: u32,
        /// Use this prime instead of the window's first.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Fit a log-log slope to a `B,count` CSV.
    Fit {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        target: Option<f64>,
        #[arg(long, default_value_t = 0.15)]
        tolerance: f64,
    },
    /// Run a JSON experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_text(s: &str) -> Result<String> {
    let p = Path::new(s);
    if p.is_file() {
        let t = std::fs::read_to_string(p).map_err(|e| Error::Io { path: s.into(), msg: e.to_string() })?;
        Ok(t.trim().to_string())
    } else {
        Ok(s.to_string())
    }
}

fn parse_ints(s: &str) -> Result<Vec<BigInt>> {
    s.split(',')
        .map(|v| v.trim().parse().map_err(|_| Error::invalid(format!("bad integer {v:?}"))))
        .collect()
}

fn parse_filter(s: &str) -> Result<ResidueFilter> {
    let (p, rs) = s.split_once(':').ok_or_else(|| Error::invalid(format!("filter {s:?} is not p:r1,r2,r3")))?;
    let p: u64 = p.trim().parse().map_err(|_| Error::invalid("bad filter prime"))?;
    let r: Vec<u64> = rs.split(',').map(|v| v.trim().parse()).collect::<std::result::Result<_, _>>().map_err(|_| Error::invalid("bad residue"))?;
    let r: [u64; 3] = r.try_into().map_err(|_| Error::invalid("three residues expected"))?;
    ResidueFilter::new(p, r)
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn run(cli: Cli) -> Result<Value> {
    match cli.command {
        Command::Count { variety, function, bmax, grid, filter, target, out } => {
            let grid = match grid {
                Some(g) => Grid::parse(&g, bmax)?,
                None => Grid::powers_of_two(bmax),
            };
            let config = ExperimentConfig {
                variety: VarietySpec { poly: read_text(&variety)?, degree: None, dimension: None, integral: None },
                grid,
                function: function.parse::<CountFunction>()?,
                filters: filter.iter().map(|f| parse_filter(f)).collect::<Result<_>>()?,
                window: WindowParams::default(),
                target,
                tolerance: 0.15,
                output: out,
                seed: 0,
            }
            .with_env()?;
            let report = run_experiment(&config)?;
            Ok(serde_json::to_value(report).unwrap())
        }
        Command::Slice { variety, bound } => {
            let f = parse_poly(&read_text(&variety)?)?.poly;
            let c = verify_slicing(&f, bound)?;
            Ok(json!({ "lhs": c.lhs, "rhs": c.rhs, "holds": c.holds(), "per_slice": c.per_slice }))
        }
        Command::ConicParam { plane, quadric, bound, verify } => {
            let q = parse_poly_in(&read_text(&quadric)?, 4)?.poly;
            let data = plane_eliminate(&parse_ints(&plane)?, &q)?;
            let outcome = conic_parameterize(&data)?;
            let mut v = json!({ "conic": data.q.to_string(), "eliminated": data.eliminated });
            match &outcome {
                ConicOutcome::Empty => v["param"] = json!("Empty"),
                ConicOutcome::Param(p) => {
                    let counts: Vec<Value> = p
                        .classes
                        .iter()
                        .map(|c| {
                            let r = count_class_points(c, bound);
                            json!({ "lambda": c.lambda.to_string(), "count": r.count, "bound": r.bound })
                        })
                        .collect();
                    let pts = p.points(bound);
                    v["param"] = serde_json::to_value(p).unwrap();
                    v["kappa"] = json!(p.kappa(bound.max(2)));
                    v["class_counts"] = json!(counts);
                    v["points"] = json!(pts.len());
                }
            }
            if verify {
                let brute = conic_points_brute_force(&data, bound)?;
                let param = match &outcome {
                    ConicOutcome::Param(p) => p.points(bound),
                    ConicOutcome::Empty => Vec::new(),
                };
                v["brute_force"] = json!(brute.len());
                v["agree"] = json!(brute == param);
            }
            Ok(v)
        }
        Command::Project { generators, bound, degree, centre, centre_height } => {
            let text = read_text(&generators)?;
            let polys: Vec<&str> = text.split(';').map(str::trim).filter(|s| !s.is_empty()).collect();
            let n = polys.iter().map(|s| parse_poly(s).map(|p| p.poly.nvars())).collect::<Result<Vec<_>>>()?.into_iter().max().unwrap_or(0);
            let gens = polys.iter().map(|s| parse_poly_in(s, n).map(|p| p.poly)).collect::<Result<Vec<_>>>()?;
            let pts = enumerate_variety(&gens, bound)?;
            let setup = match centre {
                Some(c) => projection_setup(&c.split(';').map(parse_ints).collect::<Result<Vec<_>>>()?)?,
                None => find_point_centre(&pts, degree, centre_height)?,
            };
            let report = sample_birationality_check(&setup, &pts, degree);
            let images: Vec<Value> = pts
                .iter()
                .filter_map(|x| project_point(&setup, x).ok().map(|y| json!([x.to_string(), y.to_string()])))
                .collect();
            Ok(json!({
                "setup": setup,
                "hyperplanes": linear_span_equations(&pts).iter().map(|v| strings(v)).collect::<Vec<_>>(),
                "report": report,
                "images": images,
            }))
        }
        Command::Detmethod { variety, bound, epsilon, max_degree, prime } => {
            let f = parse_poly_in(&read_text(&variety)?, 4)?.poly;
            let d = f.degree().unwrap_or(1).max(1);
            let p = match prime {
                Some(p) => p,
                None => prime_window(bound, d, epsilon, 1).primes[0],
            };
            let pts = count_affine_surface(&f, bound, &[])?.points;
            let classes = partition_by_residue(&pts, p, &f)?;
            let mut records = Vec::new();
            for (key, c) in &classes {
                let xs: Vec<Vec<BigInt>> =
                    c.points.iter().map(|x| [1, x[0], x[1], x[2]].iter().map(|&v| BigInt::from(v)).collect()).collect();
                let mut rec = json!({ "p": p, "residue": key, "class_size": c.points.len(), "classification": c.class });
                for dd in 1..=max_degree {
                    match extract_auxiliary_form(&xs, dd, &f) {
                        Ok(AuxOutcome::Form(g)) => {
                            rec["D"] = json!(dd);
                            rec["rank"] = json!(g.rank);
                            rec["form"] = json!(g.form.to_string());
                            break;
                        }
                        Ok(AuxOutcome::RankFull { rank, .. }) => {
                            rec["D"] = json!(dd);
                            rec["rank"] = json!(rank);
                            rec["form"] = json!("RankFull");
                        }
                        Err(Error::IncreaseDegree) => {
                            rec["D"] = json!(dd);
                            rec["form"] = json!("IncreaseDegree");
                        }
                        Err(e) => return Err(e),
                    }
                }
                records.push(rec);
            }
            Ok(json!({ "p": p, "points": pts.len(), "classes": records }))
        }
        Command::Fit { csv, target, tolerance } => {
            let text = std::fs::read_to_string(&csv).map_err(|e| Error::Io { path: csv.display().to_string(), msg: e.to_string() })?;
            let mut entries = Vec::new();
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || (i == 0 && line.starts_with('B')) {
                    continue;
                }
                let (b, c) = line.split_once(',').ok_or_else(|| Error::invalid(format!("line {}: expected B,count", i + 1)))?;
                let parse = |s: &str| s.trim().parse::<u64>().map_err(|_| Error::invalid(format!("line {}: bad number", i + 1)));
                entries.push((parse(b)?, parse(c)?));
            }
            let r = fit_against(&CountSeries { function: "csv".into(), entries }, target, tolerance)?;
            Ok(serde_json::to_value(r).unwrap())
        }
        Command::Run { config, out } => {
            let mut cfg = ExperimentConfig::load(&config)?.with_env()?;
            if out.is_some() {
                cfg.output = out;
            }
            Ok(serde_json::to_value(run_experiment(&cfg)?).unwrap())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = match cli.threads.map(Ok).or_else(|| env_threads().transpose()) {
        Some(Ok(n)) => Some(n),
        Some(Err(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        None => None,
    };
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(cli) {
        Ok(v) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

