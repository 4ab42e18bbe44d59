use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chainsvd::bench::{format_report, run_suite, Suite};
use chainsvd::document::{ComplexDocument, DecompositionDocument, PseudoinverseDocument};
use chainsvd::generators::{
    random_complex, stanley_reisner_chain, stanley_reisner_from_generators, GeneratorConfig,
};
use chainsvd::pinv::{
    penrose_residuals, penrose_residuals_prime_field, penrose_residuals_rational, pinv_complex,
    pinv_exact_complex, PseudoinverseComplex,
};
use chainsvd::{
    exact_homology, make_special_orthogonal, project_to_complex, svd_by_laplacian,
    svd_by_projection, ChainComplex, Differentials, Error, Method, ScalarField, Thresholds,
};
use clap::{Parser, Subcommand};

mod format;
mod monomials;

use format::{join, sig6};
use monomials::Monomials;

/// SVD normal forms, pseudoinverses and projections of chain complexes.
#[derive(Parser)]
#[command(name = "chainsvd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the composition law A_i·A_{i+1} = 0.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Put a complex into SVD normal form.
    Svd {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "projection")]
        method: Method,
        /// Gap ratio for rank decisions.
        #[arg(long, default_value_t = 1e-4)]
        threshold: f64,
        /// Flip basis columns so that every det U_i = +1.
        #[arg(long)]
        special_orthogonal: bool,
        /// Write the bases and singular values as JSON.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Pseudoinverse complex.
    Pinv {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Exact arithmetic; needs QQ or Fp input.
        #[arg(long)]
        exact: bool,
    },
    /// Nearby complex with prescribed homology.
    Project {
        #[arg(long)]
        input: PathBuf,
        /// h_0,...,h_n
        #[arg(long, value_delimiter = ',', required = true)]
        homology: Vec<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Test complexes with known homology.
    Generate {
        #[command(subcommand)]
        kind: Generate,
    },
    /// Run a benchmark suite against the exact oracle.
    Bench {
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Generate {
    /// Unimodular conjugate of a normal-form complex.
    Random {
        #[arg(long, value_delimiter = ',', required = true)]
        homology: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        ranks: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Chain complex of a Stanley–Reisner complex.
    StanleyReisner {
        #[arg(long)]
        vars: usize,
        /// A count of random monomials, or explicit ones such as `x1*x2,x3*x4`.
        #[arg(long)]
        monomials: Monomials,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Message and exit status of a failed command.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

/// 1: unreadable input, 2: infeasible or invalid request, 3: the algorithm gave up.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Document(_) | Error::EntryCount { .. } | Error::NonFinite { .. } => 1,
        Error::RepeatedEigenvalue { .. }
        | Error::DiagonalityFailure { .. }
        | Error::RankDecisionFailure { .. }
        | Error::NumericalFailure(_)
        | Error::PenroseCondition { .. }
        | Error::IllConditionedRank { .. }
        | Error::InsufficientSignFreedom(_) => 3,
        _ => 2,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(exit_code(&e), e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Reports go to stdout unless a document is being written there.
struct Report {
    to_stderr: bool,
}

impl Report {
    fn beside(output: &Option<PathBuf>) -> Self {
        Self {
            to_stderr: output.is_none(),
        }
    }

    fn line(&self, s: impl AsRef<str>) {
        if self.to_stderr {
            eprintln!("{}", s.as_ref());
        } else {
            println!("{}", s.as_ref());
        }
    }
}

fn emit(output: &Option<PathBuf>, json: String) -> Outcome {
    match output {
        Some(path) => std::fs::write(path, json + "\n")
            .map_err(|e| Failure::new(1, format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<ChainComplex, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(1, format!("cannot read {}: {e}", path.display())))?;
    ComplexDocument::from_json(&text)
        .and_then(|doc| doc.to_complex())
        .map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))
}

/// Real-double version of the input, noting any conversion.
fn load_real(path: &Path, report: &Report) -> Result<ChainComplex, Failure> {
    let c = load(path)?;
    if c.field() != ScalarField::Real {
        report.line(format!("note: {} input converted to doubles", c.field().name()));
    }
    Ok(c.to_real()?)
}

fn validate(input: &Path) -> Outcome {
    let c = load(input)?;
    let residual = c.validate();
    let pass = match c.field() {
        ScalarField::Real => residual <= Thresholds::default().compose_tol,
        _ => residual == 0.0,
    };
    println!("c = {}", join(c.ranks()));
    println!("max residual = {residual:e}");
    if pass {
        println!("PASS");
        Ok(())
    } else {
        println!("FAIL");
        Err(Failure::new(2, "composition residual above tolerance"))
    }
}

fn svd(
    input: &Path,
    method: Method,
    threshold: f64,
    special_orthogonal: bool,
    output: &Option<PathBuf>,
) -> Outcome {
    let report = Report { to_stderr: false };
    let c = load_real(input, &report)?;
    let t = Thresholds::default().with_rank_threshold(threshold)?;
    let maps = c.real_maps()?;
    let mut d = match method {
        Method::Projection => svd_by_projection(maps, &t)?,
        Method::Laplacian => svd_by_laplacian(maps, &t)?,
    };
    if special_orthogonal {
        d = make_special_orthogonal(d)?;
    }
    report.line(format!("method = {}", method.name()));
    report.line(format!("r = {}", join(&d.profile.ranks)));
    report.line(format!("h = {}", join(&d.profile.homology)));
    for (i, sigma) in d.singular_values.iter().enumerate() {
        let values: Vec<String> = sigma.iter().map(|&s| sig6(s)).collect();
        let shown = if values.is_empty() { "(none)".to_string() } else { values.join(", ") };
        report.line(format!("Σ_{} = {shown}", i + 1));
    }
    report.line(format!("normal-form residual = {:.2e}", d.normal_form_residual));
    if output.is_some() {
        emit(output, DecompositionDocument::from_svd(&d).to_json())?;
    }
    Ok(())
}

/// Non-zero entry counts of the four exact residuals.
fn nonzero(r: &[usize; 4]) -> String {
    r.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
}

fn print_penrose(c: &ChainComplex, p: &PseudoinverseComplex, report: &Report) -> Outcome {
    let lines: Vec<String> = match (c.differentials(), &p.maps) {
        (Differentials::Real(a), Differentials::Real(x)) => a
            .iter()
            .zip(x)
            .map(|(a, x)| penrose_residuals(a, x).map(|r| r.iter().map(|v| format!("{v:.1e}")).collect::<Vec<_>>().join(", ")))
            .collect::<Result<_, _>>()?,
        (Differentials::Rational(a), Differentials::Rational(x)) => a
            .iter()
            .zip(x)
            .map(|(a, x)| penrose_residuals_rational(a, x).map(|r| nonzero(&r)))
            .collect::<Result<_, _>>()?,
        (Differentials::PrimeField(a), Differentials::PrimeField(x)) => a
            .iter()
            .zip(x)
            .map(|(a, x)| penrose_residuals_prime_field(a, x).map(|r| nonzero(&r)))
            .collect::<Result<_, _>>()?,
        _ => return Err(Failure::new(2, "pseudoinverse and complex live over different fields")),
    };
    for (i, l) in lines.iter().enumerate() {
        report.line(format!("A_{}^+ Penrose residuals = {l}", i + 1));
    }
    report.line(format!("composition residual = {:e}", p.composition_residual()));
    Ok(())
}

fn pinv(input: &Path, output: &Option<PathBuf>, exact: bool) -> Outcome {
    let report = Report::beside(output);
    let (c, p) = if exact {
        let c = load(input)?;
        if c.field() == ScalarField::Real {
            return Err(Failure::new(2, "--exact needs QQ or Fp input"));
        }
        let p = pinv_exact_complex(&c)?;
        (c, p)
    } else {
        let c = load_real(input, &report)?;
        let d = svd_by_projection(c.real_maps()?, &Thresholds::default())?;
        let p = pinv_complex(&c, &d.profile)?;
        (c, p)
    };
    print_penrose(&c, &p, &report)?;
    emit(output, PseudoinverseDocument::from_pinv(&p).to_json())
}

fn project(input: &Path, homology: &[usize], output: &Option<PathBuf>) -> Outcome {
    let report = Report::beside(output);
    let c = load_real(input, &report)?;
    let maps = project_to_complex(c.real_maps()?, homology)?;
    let out = ChainComplex::real(maps)?;
    report.line(format!("h = {}", join(homology)));
    report.line(format!("composition residual = {:e}", out.validate()));
    emit(output, ComplexDocument::from_complex(&out).to_json())
}

fn write_generated(c: &ChainComplex, output: &Option<PathBuf>) -> Outcome {
    let report = Report::beside(output);
    report.line(format!("c = {}", join(c.ranks())));
    report.line(format!("h = {}", join(&exact_homology(c)?)));
    emit(output, ComplexDocument::from_complex(c).to_json())
}

fn generate(kind: &Generate) -> Outcome {
    match kind {
        Generate::Random {
            homology,
            ranks,
            seed,
            output,
        } => {
            let c = random_complex(homology, ranks, &GeneratorConfig::with_seed(*seed))?;
            write_generated(&c, output)
        }
        Generate::StanleyReisner {
            vars,
            monomials,
            seed,
            output,
        } => {
            let c = match monomials {
                Monomials::Count(n) => stanley_reisner_chain(*vars, *n, &GeneratorConfig::with_seed(*seed))?,
                Monomials::Explicit(gens) => {
                    let masks = monomials::masks(gens, *vars).map_err(|m| Failure::new(2, m))?;
                    stanley_reisner_from_generators(*vars, &masks)?
                }
            };
            write_generated(&c, output)
        }
    }
}

fn bench(suite: Suite, repeats: usize, seed: u64) -> Outcome {
    let rows = run_suite(suite, repeats, seed)?;
    print!("{}", format_report(&rows));
    let failed = rows.iter().filter(|r| !r.pass()).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::new(2, format!("{failed} case(s) disagree with the exact oracle")))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { input } => validate(&input),
        Command::Svd {
            input,
            method,
            threshold,
            special_orthogonal,
            output,
        } => svd(&input, method, threshold, special_orthogonal, &output),
        Command::Pinv { input, output, exact } => pinv(&input, &output, exact),
        Command::Project {
            input,
            homology,
            output,
        } => project(&input, &homology, &output),
        Command::Generate { kind } => generate(&kind),
        Command::Bench { suite, repeats, seed } => bench(suite, repeats, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
