use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fracsub::catalog::{self, CatalogError, ProblemSpec, Values, VerifyOptions};

#[derive(Parser)]
#[command(name = "fracsub", version, about = "Invariant-subspace reductions of fractional PDEs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog examples.
    List,
    /// Check invariance, reduction and the closed-form residual.
    Verify {
        #[command(flatten)]
        problem: Problem,
        /// Residual grid as `min:max:count` per variable, comma separated.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<Axes>,
        /// Residual tolerance.
        #[arg(long, value_parser = parse_positive)]
        tol: Option<f64>,
        /// Skip the independent solver comparison.
        #[arg(long)]
        no_oracle: bool,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print the reduced FODE system, one equation per line.
    Reduce {
        #[command(flatten)]
        problem: Problem,
    },
    /// Solve the reduced system as generalized power series.
    Solve {
        #[command(flatten)]
        problem: Problem,
    },
    /// Write closed-form samples as CSV.
    Sample {
        #[command(flatten)]
        source: SampleSource,
        /// Parameter override; repeatable.
        #[arg(long = "set", value_name = "NAME=VALUE", value_parser = parse_assignment)]
        overrides: Vec<(String, f64)>,
        /// Sample grid as `min:max:count` per variable, comma separated.
        #[arg(long, value_parser = parse_grid, conflicts_with = "figure")]
        grid: Option<Axes>,
        /// Destination file, or `-` for standard output.
        #[arg(long, default_value = "-")]
        out: PathBuf,
        /// Sample even when verification fails.
        #[arg(long)]
        force: bool,
    },
    /// Print the problem document as JSON.
    Spec {
        #[command(flatten)]
        problem: Problem,
        /// Destination file, or `-` for standard output.
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Catalog example id.
    #[arg(long)]
    example: Option<String>,
    /// Problem document in the catalog JSON schema.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args)]
struct Problem {
    #[command(flatten)]
    source: Source,
    /// Parameter override; repeatable.
    #[arg(long = "set", value_name = "NAME=VALUE", value_parser = parse_assignment, conflicts_with = "spec")]
    overrides: Vec<(String, f64)>,
    /// Truncation frontier for the series arithmetic.
    #[arg(long, value_parser = parse_positive)]
    truncation: Option<f64>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SampleSource {
    /// Catalog example id.
    #[arg(long)]
    example: Option<String>,
    /// Problem document in the catalog JSON schema.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Figure number; its panels supply the parameters and grid.
    #[arg(long)]
    figure: Option<u32>,
}

/// One `(min, max, count)` per variable.
#[derive(Clone)]
struct Axes(Vec<(f64, f64, usize)>);

enum Failure {
    Config(String),
    Failed(String),
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::UnknownExample(_)
            | CatalogError::UnknownParameter { .. }
            | CatalogError::ParamOutOfRange { .. }
            | CatalogError::Spec(_)
            | CatalogError::Schema { .. }
            | CatalogError::UnknownFigure(_)
            | CatalogError::Output(_) => Failure::Config(e.to_string()),
            _ => Failure::Failed(e.to_string()),
        }
    }
}

fn parse_assignment(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got '{s}'"))?;
    let value: f64 = value.trim().parse().map_err(|_| format!("'{value}' is not a number"))?;
    Ok((name.trim().to_string(), value))
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got '{s}'")),
    }
}

fn parse_grid(s: &str) -> Result<Axes, String> {
    s.split(',')
        .map(|axis| {
            let parts: Vec<&str> = axis.split(':').map(str::trim).collect();
            let [lo, hi, n] = parts[..] else {
                return Err(format!("axis '{axis}' is not min:max:count"));
            };
            let lo: f64 = lo.parse().map_err(|_| format!("bad minimum '{lo}'"))?;
            let hi: f64 = hi.parse().map_err(|_| format!("bad maximum '{hi}'"))?;
            let n: usize = n.parse().map_err(|_| format!("bad count '{n}'"))?;
            if n == 0 {
                return Err(format!("axis '{axis}' needs at least one point"));
            }
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(format!("axis '{axis}' needs finite min ≤ max"));
            }
            Ok((lo, hi, n))
        })
        .collect::<Result<_, _>>()
        .map(Axes)
}

fn read_spec(path: &Path) -> Result<ProblemSpec, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
    Ok(ProblemSpec::from_json(&text)?)
}

fn overrides(pairs: &[(String, f64)]) -> Values {
    let mut v = Values::new();
    for (k, x) in pairs {
        v.set(k, *x);
    }
    v
}

fn load(problem: &Problem) -> Result<ProblemSpec, Failure> {
    let mut spec = match (&problem.source.example, &problem.source.spec) {
        (Some(id), _) => catalog::build(id, &overrides(&problem.overrides))?.0,
        (None, Some(path)) => read_spec(path)?,
        (None, None) => unreachable!("clap requires a source"),
    };
    if let Some(t) = problem.truncation {
        spec.truncation = t;
    }
    Ok(spec)
}

fn open_out(path: &Path) -> Result<Box<dyn Write>, Failure> {
    if path == Path::new("-") {
        return Ok(Box::new(io::stdout().lock()));
    }
    let file = File::create(path).map_err(|e| Failure::Config(format!("cannot create {}: {e}", path.display())))?;
    Ok(Box::new(BufWriter::new(file)))
}

fn emit(path: &Path, text: &str) -> Result<(), Failure> {
    let mut out = open_out(path)?;
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Failure::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::List => {
            for (id, provenance) in catalog::list() {
                println!("{id}\t{provenance}");
            }
        }
        Command::Verify { problem, grid, tol, no_oracle, json } => {
            let spec = load(&problem)?;
            let opts = VerifyOptions {
                tolerance: tol.unwrap_or(catalog::DEFAULT_TOLERANCE),
                truncation: problem.truncation,
                grid: grid.map(|g| g.0),
                oracle: !no_oracle,
            };
            let report = catalog::verify_spec(&spec, &opts)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).map_err(|e| Failure::Failed(e.to_string()))?);
            } else {
                println!("{report}");
            }
            if !report.passed() {
                return Err(Failure::Failed(format!("{} did not verify", report.id)));
            }
        }
        Command::Reduce { problem } => {
            let spec = load(&problem)?;
            let sys = spec.system()?.reduce().map_err(CatalogError::from)?;
            print!("{sys}");
        }
        Command::Solve { problem } => {
            let spec = load(&problem)?;
            let truncation = spec.truncation;
            print!("{}", catalog::solve(&spec, truncation)?.render());
        }
        Command::Sample { source, overrides: pairs, grid, out, force } => {
            let table = match (source.example, source.spec, source.figure) {
                (_, _, Some(n)) => catalog::sample_figure(n, force)?,
                (Some(id), _, _) => {
                    let ex = catalog::example(&id)?;
                    let values = catalog::bind(ex, &overrides(&pairs))?;
                    let axes = grid.map_or_else(|| ex.verify_grid(&values), |g| g.0);
                    catalog::sample(&id, &values, &axes, force)?
                }
                (None, Some(path), None) => {
                    if !pairs.is_empty() {
                        return Err(Failure::Config("--set cannot be combined with --spec".into()));
                    }
                    let spec = read_spec(&path)?;
                    let axes = match grid {
                        Some(g) => g.0,
                        None => {
                            let ex = catalog::example(&spec.id)?;
                            ex.verify_grid(&catalog::bind(ex, &spec.values())?)
                        }
                    };
                    catalog::sample_spec(&spec, &axes, force)?
                }
                (None, None, None) => unreachable!("clap requires a source"),
            };
            let mut sink = open_out(&out)?;
            catalog::write_csv(&table, &mut sink)?;
            sink.flush().map_err(|e| Failure::Config(e.to_string()))?;
        }
        Command::Spec { problem, out } => {
            let spec = load(&problem)?;
            emit(&out, &(spec.to_json() + "\n"))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
