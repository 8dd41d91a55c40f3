//! `capsieve`: large-sieve concentration bounds from the command line.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use capsieve::region::RegionSpec;
use capsieve::report::{constant_table, density_report, limit_report, zeros_report};
use capsieve::sieve::bound_report;
use capsieve::verify::{run_suite, Suite, VerifyOptions};
use capsieve::SpaceParams;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "capsieve",
    version,
    about = "Large-sieve concentration bounds on compact two-point homogeneous spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Spaces are named `s<d>`, `rp<d>`, `cp<d>`, `hp<d>` or `cay16`, with `d` the
/// real dimension.
#[derive(Debug, Subcommand)]
enum Command {
    /// Bound constants for one (space, K, delta).
    ///
    /// CSV columns: space,K,delta,t_KK,T2,cap_measure_at_tKK,A_K,A_infinity,quadrature_nodes
    Bound {
        space: String,
        #[arg(long = "K", visible_alias = "k")]
        k: usize,
        /// Cap parameter; defaults to t_KK.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Largest zero t_KK, its angle, the Euler-Rayleigh bound and the
    /// asymptotic estimate.
    ///
    /// CSV columns: space,K,alpha,beta,t_KK,theta_K1,euler_rayleigh_bound,asymptotic
    Zeros {
        space: String,
        #[arg(long = "K", visible_alias = "k")]
        k: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Limit of A_K as K grows.
    ///
    /// CSV columns: space,alpha,j_alpha_1,A_infinity
    Limit {
        space: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Maximum Nyquist density of a region file and the resulting bound.
    ///
    /// CSV columns: region,K,delta,rho,std_error,n_samples,n_centers,seed,A_K,margin,bound
    Density {
        #[arg(long)]
        region: PathBuf,
        #[arg(long = "K", visible_alias = "k")]
        k: usize,
        /// Cap samples per candidate center.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Add three standard errors to rho before multiplying by A_K.
        #[arg(long)]
        margin: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run verification suites; exits with status 2 if any check fails.
    ///
    /// Suites: closed_form, oracle, soundness, limit, ordering, zeros,
    /// mehler_heine, convolution, spectral, structural, all.
    /// CSV columns: name,value,threshold,comparison,pass
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Restrict the oracle and ordering suites to one space.
        #[arg(long)]
        space: Option<String>,
        /// Restrict the oracle and ordering suites to one degree.
        #[arg(long = "K", visible_alias = "k")]
        k: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Table of t_KK, T2(K, t_KK) and A_K for 1 <= K <= K-max.
    ///
    /// CSV columns: K,t_KK,T2,A_K
    Table {
        space: String,
        #[arg(long = "K-max", visible_alias = "k-max")]
        k_max: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

/// Failure modes with their exit codes.
enum Failure {
    Invalid(String),
    Verification(String),
}

impl From<capsieve::Error> for Failure {
    fn from(e: capsieve::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn space(id: &str) -> Result<SpaceParams, Failure> {
    Ok(id.parse::<SpaceParams>()?)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Quotes a CSV field when needed.
fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Bound {
            space: id,
            k,
            delta,
            format,
        } => {
            let r = bound_report(&space(&id)?, k, delta)?;
            Ok(match format {
                Format::Json => json(&r),
                Format::Csv => format!(
                    "space,K,delta,t_KK,T2,cap_measure_at_tKK,A_K,A_infinity,quadrature_nodes\n{},{},{},{},{},{},{},{},{}\n",
                    r.space.id,
                    r.K,
                    r.delta,
                    opt(r.t_KK),
                    r.T2,
                    opt(r.cap_measure_at_tKK),
                    opt(r.A_K),
                    r.A_infinity,
                    r.quadrature_nodes
                ),
            })
        }
        Command::Zeros { space: id, k, format } => {
            let r = zeros_report(&space(&id)?, k)?;
            Ok(match format {
                Format::Json => json(&r),
                Format::Csv => format!(
                    "space,K,alpha,beta,t_KK,theta_K1,euler_rayleigh_bound,asymptotic\n{},{},{},{},{},{},{},{}\n",
                    r.space, r.K, r.alpha, r.beta, r.t_KK, r.theta_K1, r.euler_rayleigh_bound, r.asymptotic
                ),
            })
        }
        Command::Limit { space: id, format } => {
            let r = limit_report(&space(&id)?)?;
            Ok(match format {
                Format::Json => json(&r),
                Format::Csv => format!(
                    "space,alpha,j_alpha_1,A_infinity\n{},{},{},{}\n",
                    r.space, r.alpha, r.j_alpha_1, r.A_infinity
                ),
            })
        }
        Command::Density {
            region,
            k,
            samples,
            seed,
            margin,
            format,
        } => {
            let spec = RegionSpec::load(&region)?;
            let r = density_report(&spec, k, samples, seed, margin)?;
            Ok(match format {
                Format::Json => json(&r),
                Format::Csv => {
                    let e = &r.estimate;
                    format!(
                        "region,K,delta,rho,std_error,n_samples,n_centers,seed,A_K,margin,bound\n{},{},{},{},{},{},{},{},{},{},{}\n",
                        field(&r.region),
                        e.k,
                        e.delta,
                        e.rho,
                        e.std_error,
                        e.n_samples,
                        e.n_centers,
                        e.seed,
                        r.A_K,
                        r.margin,
                        r.bound
                    )
                }
            })
        }
        Command::Verify {
            suite,
            space: id,
            k,
            format,
        } => {
            let suite: Suite = suite.parse()?;
            let opts = VerifyOptions {
                space: id.as_deref().map(space).transpose()?,
                k,
            };
            let r = run_suite(suite, &opts)?;
            let out = match format {
                Format::Json => json(&r),
                Format::Csv => {
                    let mut s = String::from("name,value,threshold,comparison,pass\n");
                    for c in &r.checks {
                        let cmp = serde_json::to_value(c.comparison).expect("comparison serializes");
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{}",
                            field(&c.name),
                            c.value,
                            c.threshold,
                            cmp.as_str().unwrap_or_default(),
                            c.pass
                        );
                    }
                    s
                }
            };
            if r.all_passed {
                Ok(out)
            } else {
                Err(Failure::Verification(out))
            }
        }
        Command::Table {
            space: id,
            k_max,
            format,
        } => {
            let rows = constant_table(&space(&id)?, k_max)?;
            Ok(match format {
                Format::Json => json(&rows),
                Format::Csv => {
                    let mut s = String::from("K,t_KK,T2,A_K\n");
                    for r in &rows {
                        let _ = writeln!(s, "{},{},{},{}", r.K, r.t_KK, r.T2, r.A_K);
                    }
                    s
                }
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(out)) => {
            print!("{out}");
            eprintln!("verification failed");
            ExitCode::from(2)
        }
    }
}
