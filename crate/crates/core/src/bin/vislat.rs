//! Batch command-line surface: emits CSV for the table/count/circle scans
//! and JSON for field info, exponent fits, Perron checks, and oracle runs.
//!
//! Exit codes: 0 success, 1 usage error, 2 numeric failure, 3 oracle
//! mismatch (the one status a CI harness should treat as a correctness
//! failure).

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;
use serde_json::json;

use vislat::analysis::fit_exponent;
use vislat::circle::residual_scan;
use vislat::counts::{brute_force_count, count_series, sprime_count};
use vislat::error::Error;
use vislat::fields::make_field;
use vislat::perron::perron_j_reconstruction;
use vislat::sieve::{build_coefficients, build_moebius};
use vislat::zeta::zeta_k_at;

#[derive(Parser)]
#[command(
    name = "vislat",
    version,
    about = "Lattice point counting over number fields"
)]
struct Cli {
    /// Parallel worker lanes. Overrides the VLP_WORKERS environment variable.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Field invariants and special values
    Fields {
        #[command(subcommand)]
        cmd: FieldsCmd,
    },
    /// Dump coefficient tables as CSV (n,a,b,j)
    Sieve {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long)]
        limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count series over a geometric grid, CSV (x,V,main,E)
    Count {
        #[command(subcommand)]
        cmd: CountCmd,
    },
    /// Circle counts and residuals, CSV (r,N,residual)
    Circle {
        #[arg(long)]
        rmax: u64,
        #[arg(long, default_value_t = 1)]
        stride: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Log-log exponent fit of a CSV column pair, JSON output
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        xcol: String,
        #[arg(long)]
        vcol: String,
    },
    /// Truncated Perron reconstruction of j_K(x), JSON output
    Perron {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long)]
        x: f64,
        #[arg(long = "T")]
        t_height: f64,
        #[arg(long, default_value_t = 2_000_000)]
        nodes: u64,
    },
    /// Compare the formula count against the brute-force oracle, JSON output
    Oracle {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(short)]
        m: u32,
        #[arg(short, default_value_t = 1)]
        s: u32,
        #[arg(long)]
        xmax: u64,
    },
}

#[derive(Subcommand)]
enum FieldsCmd {
    /// Print the field's invariants plus zeta_K(2), zeta_K(3) as JSON
    Info {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
    },
}

#[derive(Subcommand)]
enum CountCmd {
    /// Visible tuples (s = 1)
    Visible(CountArgs),
    /// Relatively s-prime tuples
    Sprime(SprimeArgs),
}

#[derive(Args)]
struct CountArgs {
    #[arg(long, allow_negative_numbers = true)]
    d: i64,
    #[arg(short)]
    m: u32,
    #[arg(long)]
    xmin: f64,
    #[arg(long)]
    xmax: f64,
    #[arg(long, default_value_t = 1.25)]
    ratio: f64,
    /// Sieve table size; defaults to ceil(xmax).
    #[arg(long)]
    limit: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SprimeArgs {
    #[command(flatten)]
    common: CountArgs,
    #[arg(short)]
    s: u32,
}

enum Failure {
    Lib(Error),
    Io(String),
    Usage(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(Error::NumericFailure { .. }) => 2,
            Failure::Lib(Error::IdentityViolation { .. }) => 3,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(m) | Failure::Usage(m) => m.clone(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes, not usage errors.
            if e.use_stderr() {
                let _ = e.print();
                return ExitCode::from(1);
            }
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };

    let workers = cli.workers.or_else(|| {
        std::env::var("VLP_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    let body = || match run(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    };
    match workers {
        Some(n) if n >= 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("worker pool")
            .install(body),
        _ => body(),
    }
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Fields {
            cmd: FieldsCmd::Info { d },
        } => {
            let field = make_field(d)?;
            let z2 = zeta_k_at(&field, 2.0, 1e-10)?;
            let z3 = zeta_k_at(&field, 3.0, 1e-10)?;
            let mut doc = serde_json::to_value(field).expect("field json");
            doc["zeta_k_2"] = json!(z2.value);
            doc["zeta_k_3"] = json!(z3.value);
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Sieve { d, limit, out } => {
            let field = make_field(d)?;
            let coef = build_coefficients(&field, limit)?;
            let moeb = build_moebius(&coef);
            let mut csv = String::from("n,a,b,j\n");
            for n in 1..=limit {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    n,
                    coef.a(n),
                    moeb.b(n),
                    coef.j_at(n)
                ));
            }
            emit(&out, &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Count { cmd } => {
            let (args, s) = match cmd {
                CountCmd::Visible(a) => (a, 1),
                CountCmd::Sprime(a) => (a.common, a.s),
            };
            let field = make_field(args.d)?;
            let limit = args.limit.unwrap_or(args.xmax.ceil() as u64);
            if (limit as f64) < args.xmax {
                return Err(Failure::Usage(format!(
                    "--limit {limit} is below --xmax {}",
                    args.xmax
                )));
            }
            let coef = build_coefficients(&field, limit)?;
            let moeb = build_moebius(&coef);
            let series = count_series(&coef, &moeb, args.m, s, args.xmin, args.xmax, args.ratio)?;
            let mut csv = String::from("x,V,main,E\n");
            for i in 0..series.xs.len() {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt15(series.xs[i]),
                    series.counts[i],
                    fmt15(series.main_terms[i]),
                    fmt15(series.errors[i])
                ));
            }
            emit(&args.out, &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Circle { rmax, stride, out } => {
            let scan = residual_scan(rmax, stride)?;
            let mut csv = String::from("r,N,residual\n");
            for i in 0..scan.r_values.len() {
                csv.push_str(&format!(
                    "{},{},{}\n",
                    fmt15(scan.r_values[i]),
                    scan.counts[i],
                    fmt15(scan.residuals[i])
                ));
            }
            emit(&out, &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Fit { input, xcol, vcol } => {
            let text = fs::read_to_string(&input)
                .map_err(|e| Failure::Io(format!("{}: {e}", input.display())))?;
            let series = parse_csv_columns(&text, &xcol, &vcol)?;
            let fit = fit_exponent(&series)?;
            println!("{}", serde_json::to_string_pretty(&fit).expect("json"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Perron {
            d,
            x,
            t_height,
            nodes,
        } => {
            let field = make_field(d)?;
            let result = perron_j_reconstruction(&field, x, t_height, nodes)?;
            let doc = json!({
                "x": result.x,
                "T": result.t_height,
                "estimate": result.estimate,
                "reference": result.reference,
                "abs_error": result.abs_error,
                "nodes": result.nodes,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { d, m, s, xmax } => {
            let field = make_field(d)?;
            let coef = build_coefficients(&field, xmax)?;
            let moeb = build_moebius(&coef);
            let formula = sprime_count(&coef, &moeb, m, s, xmax as f64)?;
            let brute = brute_force_count(&field, m, s, xmax)?;
            let equal = formula == num_bigint::BigInt::from(brute);
            let doc = json!({
                "formula": formula.to_u64(),
                "brute_force": brute,
                "equal": equal,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            Ok(if equal {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }
    }
}

/// 15 significant digits, round-trippable as f64.
fn fmt15(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.14e}")
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, content).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(Failure::from)
        }
    }
}

fn parse_csv_columns(text: &str, xcol: &str, vcol: &str) -> Result<Vec<(f64, f64)>, Failure> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Failure::Usage("empty CSV input".into()))?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    let xi = names
        .iter()
        .position(|&n| n == xcol)
        .ok_or_else(|| Failure::Usage(format!("column '{xcol}' not in header '{header}'")))?;
    let vi = names
        .iter()
        .position(|&n| n == vcol)
        .ok_or_else(|| Failure::Usage(format!("column '{vcol}' not in header '{header}'")))?;
    let mut series = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let parse = |idx: usize| -> Result<f64, Failure> {
            cells
                .get(idx)
                .and_then(|c| c.parse::<f64>().ok())
                .ok_or_else(|| {
                    Failure::Usage(format!("line {}: cannot parse field {idx}", lineno + 2))
                })
        };
        series.push((parse(xi)?, parse(vi)?));
    }
    Ok(series)
}
