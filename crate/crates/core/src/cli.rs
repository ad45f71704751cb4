//! Command-line front door.
//!
//! Data goes to standard output (or `--out`); human-readable summaries go to
//! standard error. Exit codes: 0 success, 1 validation/usage error, 2
//! numerical failure. Every build subcommand checks the produced net against
//! an independent oracle at 20 seeded random points before writing it.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::monomial::monomial_net;
use crate::multipoly::{mpoly_net, MultiPoly};
use crate::netcore::PowerNet;
use crate::poly1d::{build_poly_net, PolyCoeffs, Strategy};
use crate::spectral::{
    approximate_net_1d, approximate_net_md, convergence_sweep, RateFit, TestFunction,
};
use crate::vandermonde::{cond_sweep_csv, NodeScheme};

const DEFAULT_SEED: u64 = 20240531;

#[derive(Parser)]
#[command(
    name = "powernet",
    version,
    about = "Compile polynomials and smooth functions into exact rectified-power-unit networks"
)]
struct Cli {
    /// Seed for the randomized build validation (env POWERNET_SEED overrides)
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a net realizing x^n exactly
    #[command(name = "build-mono")]
    BuildMono {
        /// Activation power (2..=12)
        #[arg(long)]
        s: u32,
        /// Exponent
        #[arg(long)]
        n: u64,
        /// Write the net JSON here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a net realizing a univariate polynomial exactly
    #[command(name = "build-poly")]
    BuildPoly {
        /// Coefficient file: one per line ascending degree (.csv) or a JSON array
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        s: u32,
        /// shallow | horner | recursive | optimal | auto
        #[arg(long, default_value = "auto")]
        strategy: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a net realizing a sparse multivariate polynomial exactly
    #[command(name = "build-mpoly")]
    BuildMpoly {
        /// JSON file: { "dim": d, "terms": [ { "k": [..], "a": .. } ] }.
        /// The support is completed to its downward closure before compiling.
        #[arg(long)]
        terms: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a serialized net
    Eval {
        #[arg(long)]
        net: PathBuf,
        /// One point: comma-separated coordinates
        #[arg(long)]
        x: Option<String>,
        /// CSV of points, one comma-separated row per line
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print depth / hidden nodes / nonzero weights of a serialized net
    Stats {
        #[arg(long)]
        net: PathBuf,
    },
    /// Vandermonde condition-number sweep (CSV: s,scheme,cond_inf)
    Cond {
        /// Comma-separated: chebyshev, equidistant, optimal
        #[arg(long)]
        schemes: String,
        #[arg(long = "max-s")]
        max_s: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Project a built-in function and compile the projection into a net
    Approx {
        /// exp | sin3 | runge | absx3 | inv2px | expxy | sumsq
        #[arg(long)]
        func: String,
        /// Polynomial degree of the projection
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        s: u32,
        /// Dimension (1 uses the Legendre line, 2..3 the hyperbolic cross)
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// Write the compiled net JSON here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convergence sweep over degrees (CSV: N,l2,linf)
    Sweep {
        #[arg(long)]
        func: String,
        /// Comma-separated increasing degrees, e.g. 4,8,16
        #[arg(long = "Ns")]
        ns: String,
        #[arg(long)]
        s: u32,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let seed = std::env::var("POWERNET_SEED")
        .ok()
        .and_then(|v| v.parse().ok())
        .or(cli.seed)
        .unwrap_or(DEFAULT_SEED);
    match dispatch(cli.cmd, seed) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Cmd, seed: u64) -> Result<()> {
    match cmd {
        Cmd::BuildMono { s, n, out } => {
            let net = monomial_net(n, s)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            validate_net(&net, 1.5, &mut rng, |x| {
                crate::oracle::pow_compensated(x[0], n as u32)
            })?;
            eprintln!(
                "x^{n} with s={s}: depth {}, nodes {}, nonzeros {}",
                net.depth(),
                net.stats().nodes,
                net.stats().nonzeros
            );
            emit(out.as_deref(), &net.to_json())
        }
        Cmd::BuildPoly {
            coeffs,
            s,
            strategy,
            out,
        } => {
            let text = std::fs::read_to_string(&coeffs)?;
            let p = if coeffs.extension().is_some_and(|e| e == "json") {
                PolyCoeffs::from_json_str(&text)?
            } else {
                PolyCoeffs::from_csv_str(&text)?
            };
            let net = build_poly_net(&p, s, Strategy::parse(&strategy)?)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            validate_net(&net, 1.0, &mut rng, |x| p.eval(x[0]))?;
            eprintln!(
                "degree-{} polynomial with s={s} ({strategy}): depth {}, nodes {}",
                p.degree(),
                net.depth(),
                net.stats().nodes
            );
            emit(out.as_deref(), &net.to_json())
        }
        Cmd::BuildMpoly { terms, s, out } => {
            let text = std::fs::read_to_string(&terms)?;
            let f = MultiPoly::from_json_str(&text)?.with_completed_support()?;
            let net = mpoly_net(&f, s)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            validate_net(&net, 1.0, &mut rng, |x| {
                f.eval(x).expect("dimension checked by construction")
            })?;
            eprintln!(
                "{}-dimensional polynomial, {} terms, s={s}: depth {}, nodes {}",
                f.dim(),
                f.terms().len(),
                net.depth(),
                net.stats().nodes
            );
            emit(out.as_deref(), &net.to_json())
        }
        Cmd::Eval {
            net,
            x,
            points,
            out,
        } => {
            let net = PowerNet::from_json(&std::fs::read_to_string(&net)?)?;
            let pts: Vec<Vec<f64>> = match (x, points) {
                (Some(spec), None) => vec![parse_point(&spec)?],
                (None, Some(path)) => std::fs::read_to_string(&path)?
                    .lines()
                    .filter(|l| !l.trim().is_empty())
                    .map(parse_point)
                    .collect::<Result<_>>()?,
                _ => {
                    return Err(Error::Invalid(
                        "provide exactly one of --x or --points".into(),
                    ))
                }
            };
            let results = if pts.len() > 64 {
                net.evaluate_batch(&pts)?
            } else {
                pts.iter()
                    .map(|p| net.evaluate(p))
                    .collect::<Result<Vec<_>>>()?
            };
            let mut text = String::new();
            for row in &results {
                let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
                writeln!(text, "{}", line.join(",")).expect("string write");
            }
            emit(out.as_deref(), &text)
        }
        Cmd::Stats { net } => {
            let net = PowerNet::from_json(&std::fs::read_to_string(&net)?)?;
            emit(None, &format!("{}\n", serde_json::to_string(&net.stats())?))
        }
        Cmd::Cond {
            schemes,
            max_s,
            out,
        } => {
            let schemes = schemes
                .split(',')
                .map(NodeScheme::parse)
                .collect::<Result<Vec<_>>>()?;
            let csv = cond_sweep_csv(&schemes, max_s)?;
            emit(out.as_deref(), &csv)
        }
        Cmd::Approx { func, n, s, d, out } => {
            let f = TestFunction::parse(&func)?;
            let (net, report) = if d == 1 {
                approximate_net_1d(|x| f.eval(&[x]), n as usize, s)?
            } else {
                approximate_net_md(|x| f.eval(x), n, d, s)?
            };
            eprintln!(
                "{} projected to degree {n} (d={d}, s={s}): depth {}, nodes {}",
                f.name(),
                net.depth(),
                net.stats().nodes
            );
            let row = format!("{},{},{}\n", n, report.l2_error, report.linf_error);
            if let Some(path) = out.as_deref() {
                std::fs::write(path, net.to_json())?;
                print!("{row}");
            } else {
                print!("{row}");
            }
            Ok(())
        }
        Cmd::Sweep { func, ns, s, d, out } => {
            let f = TestFunction::parse(&func)?;
            let degrees = ns
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Invalid(format!("bad degree '{t}'")))
                })
                .collect::<Result<Vec<_>>>()?;
            let result = convergence_sweep(|x| f.eval(x), &degrees, s, d)?;
            let mut csv = String::from("N,l2,linf\n");
            for row in &result.rows {
                writeln!(csv, "{},{},{}", row.degree, row.l2, row.linf).expect("string write");
            }
            match result.preferred {
                RateFit::Exponential { slope, r2 } => {
                    eprintln!("exponential decay preferred: slope {slope:.4} per degree (r2 {r2:.4})")
                }
                RateFit::Algebraic { slope, r2 } => {
                    eprintln!("algebraic decay preferred: rate N^{slope:.3} (r2 {r2:.4})")
                }
                RateFit::Exact => eprintln!("all errors at the roundoff floor: exact"),
            }
            emit(out.as_deref(), &csv)
        }
    }
}

fn parse_point<S: AsRef<str>>(spec: S) -> Result<Vec<f64>> {
    spec.as_ref()
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Invalid(format!("bad coordinate '{t}'")))
        })
        .collect()
}

/// Compares the net against the oracle at 20 random points; a failure means
/// the construction is wrong and nothing is written.
fn validate_net(
    net: &PowerNet,
    half_width: f64,
    rng: &mut ChaCha8Rng,
    oracle: impl Fn(&[f64]) -> f64,
) -> Result<()> {
    for _ in 0..20 {
        let x: Vec<f64> = (0..net.input_dim())
            .map(|_| rng.random_range(-half_width..half_width))
            .collect();
        let want = oracle(&x);
        let got = net.evaluate(&x)?[0];
        if (got - want).abs() > 1e-9 * want.abs().max(1.0) {
            return Err(Error::Numerical(format!(
                "net validation failed at {x:?}: net {got}, oracle {want}"
            )));
        }
    }
    Ok(())
}

fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}
