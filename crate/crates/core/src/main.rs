use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bohr::error::{BohrError, Result};
use bohr::harness::{self, Suite, SuiteOptions};
use bohr::operators::{check_membership, compose, CompositionSymbol, MembershipGrid, DEFAULT_WORK_HORIZON};
use bohr::series::{DirichletPolynomial, DEFAULT_MAX_HORIZON};
use bohr::spaces::{MeasureKind, NormSpec, Space, Strategy};

/// Directory used for output files when `-o` is not given.
const OUT_DIR_VAR: &str = "BOHR_OUT_DIR";

#[derive(Parser)]
#[command(name = "bohr", version, about = "Dirichlet polynomials, their norms and composition operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    #[value(name = "Dalpha")]
    Dalpha,
    #[value(name = "HbetaOmega")]
    HbetaOmega,
    #[value(name = "McCarthy")]
    McCarthy,
    #[value(name = "Hp")]
    Hp,
    #[value(name = "Ap")]
    Ap,
    #[value(name = "HalfPlaneD")]
    HalfPlaneD,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    #[value(name = "HaarTorus")]
    HaarTorus,
    #[value(name = "UniformDisc")]
    UniformDisc,
    #[value(name = "NuAlpha")]
    NuAlpha,
}

#[derive(Subcommand)]
enum Command {
    /// Norm of a series, one CSV row.
    Norm {
        #[arg(long, value_enum)]
        space: SpaceArg,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Monte Carlo sample count (Hp/Ap with non-even p).
        #[arg(long)]
        mc: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Radial quadrature order for HalfPlaneD.
        #[arg(long, default_value_t = 64)]
        quad: usize,
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Composes a series with a symbol.
    Compose {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long, default_value_t = DEFAULT_WORK_HORIZON)]
        horizon: u64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Runs a verification suite (or `all`).
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<f64>>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Divisor-sum asymptotics as CSV.
    Asymptotic {
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<u64>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Draws points from a product measure as CSV.
    Sample {
        #[arg(long, value_enum)]
        measure: MeasureArg,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| BohrError::Io(format!("{}: {e}", path.display())))
}

/// Writes to `-o`, else to `$BOHR_OUT_DIR/<default_name>`, else to stdout.
fn emit(output: Option<PathBuf>, default_name: &str, text: &str) -> Result<()> {
    let target = output.or_else(|| std::env::var_os(OUT_DIR_VAR).map(|d| PathBuf::from(d).join(default_name)));
    match target {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| BohrError::Io(format!("{}: {e}", dir.display())))?;
            }
            fs::write(&path, text).map_err(|e| BohrError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

enum Outcome {
    Pass,
    PropertyFailure,
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Norm {
            space,
            alpha,
            beta,
            p,
            mc,
            seed,
            quad,
            input,
            output,
        } => {
            let f = DirichletPolynomial::parse(&read(&input)?, DEFAULT_MAX_HORIZON)?;
            let space = match space {
                SpaceArg::Dalpha => Space::Dalpha(alpha),
                SpaceArg::HbetaOmega => Space::HbetaOmega(beta),
                SpaceArg::McCarthy => Space::McCarthy(alpha),
                SpaceArg::Hp => Space::Hp(p),
                SpaceArg::Ap => Space::Ap(p),
                SpaceArg::HalfPlaneD => Space::HalfPlaneD(beta),
            };
            let strategy = match (space, mc) {
                (Space::HalfPlaneD(_), _) => Strategy::Quadrature { order: quad },
                (_, Some(samples)) => Strategy::MonteCarlo { samples, seed },
                _ => Strategy::Exact,
            };
            let spec = NormSpec::new(space, strategy)?;
            emit(output, "norm.csv", &harness::norm_csv(&f, &[spec], seed)?)?;
            Ok(Outcome::Pass)
        }
        Command::Compose {
            input,
            symbol,
            horizon,
            output,
        } => {
            let f = DirichletPolynomial::parse(&read(&input)?, DEFAULT_MAX_HORIZON)?;
            let sym = CompositionSymbol::parse(&read(&symbol)?, DEFAULT_MAX_HORIZON)?;
            if horizon == 0 || horizon > DEFAULT_MAX_HORIZON {
                return Err(BohrError::Domain(format!("horizon must lie in 1..={DEFAULT_MAX_HORIZON}")));
            }
            let verdict = check_membership(&sym, &MembershipGrid::standard(1e-3)?)?;
            if let bohr::operators::GVerdict::Falsified { witness, real_part, .. } = verdict {
                eprintln!(
                    "warning: symbol violates the mapping property at s = {} + {}i (Re phi = {real_part}); composing formally",
                    witness.sigma, witness.t
                );
            }
            emit(output, "compose.ds", &compose(&f, &sym, horizon).write())?;
            Ok(Outcome::Pass)
        }
        Command::Verify {
            suite,
            seed,
            trials,
            alpha,
            samples,
            output,
        } => {
            let opts = SuiteOptions {
                seed,
                trials,
                alphas: alpha,
                samples,
            };
            let report = if suite == "all" {
                harness::run_all(&opts)?
            } else {
                let s: Suite = suite.parse()?;
                harness::Report {
                    suites: vec![harness::run_suite(s, &opts)?],
                }
            };
            emit(output, "verify.txt", &report.render())?;
            Ok(if report.passed() { Outcome::Pass } else { Outcome::PropertyFailure })
        }
        Command::Asymptotic { alpha, x, output } => {
            emit(output, "asymptotic.csv", &harness::asymptotic_csv(alpha, &x)?)?;
            Ok(Outcome::Pass)
        }
        Command::Sample {
            measure,
            alpha,
            dim,
            count,
            seed,
            output,
        } => {
            let kind = match measure {
                MeasureArg::HaarTorus => MeasureKind::HaarTorus,
                MeasureArg::UniformDisc => MeasureKind::UniformDisc,
                MeasureArg::NuAlpha => MeasureKind::NuAlpha(alpha),
            };
            emit(output, "sample.csv", &harness::sample_csv(kind, dim, count, seed)?)?;
            Ok(Outcome::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::PropertyFailure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
