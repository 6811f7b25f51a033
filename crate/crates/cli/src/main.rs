//! Command-line front end.
//!
//! Exit codes: 0 success with all checks true; 2 malformed input;
//! 3 input not singular; 4 a certificate check failed or an internal
//! invariant was violated (a bug — the diagnostic names the stage);
//! 5 oracle indeterminate under the default budget.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use idemfac::{
    factorize, idempotent_generated, is_singular, parse_endo, verify_factorization,
    AlgebraDescriptor, Endomorphism, Error, OracleBudget,
};
use idemfac_cli::{first_failing_check, OutputDocument};

#[derive(Parser)]
#[command(name = "idemfac", version, about = "Factorizes a singular endomorphism into idempotents of the same rank and emits a checkable certificate")]
struct Cli {
    /// Emit the structured document instead of the human-readable report
    #[arg(long, global = true)]
    json: bool,

    /// Print only the recomputed checks
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factorize a singular endomorphism and print the certificate
    Factorize(AlgebraArgs),
    /// Recompute the certificate checks for an externally supplied factor list
    Verify {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Factor texts in application order, separated by `|`
        #[arg(long)]
        factors: String,
    },
    /// Confirm by brute-force search that the input is a product of
    /// idempotents of its own rank, independently of the pipeline
    Oracle(AlgebraArgs),
}

#[derive(Args)]
struct AlgebraArgs {
    /// Algebra kind: `set` or `vec`
    #[arg(long)]
    algebra: String,

    /// Set size (with `--algebra set`)
    #[arg(long)]
    n: Option<u64>,

    /// Prime modulus (with `--algebra vec`)
    #[arg(long)]
    p: Option<u64>,

    /// Dimension (with `--algebra vec`)
    #[arg(long)]
    dim: Option<usize>,

    /// Image list, e.g. "1 1 2 2" (with `--algebra set`)
    #[arg(long)]
    map: Option<String>,

    /// Semicolon-separated matrix rows, e.g. "0 1; 0 0" (with `--algebra vec`)
    #[arg(long)]
    matrix: Option<String>,
}

impl AlgebraArgs {
    fn resolve(&self) -> Result<(AlgebraDescriptor, Endomorphism), Error> {
        let (alg, text) = match self.algebra.as_str() {
            "set" => {
                let n = self.n.ok_or_else(|| Error::InvalidAlgebra {
                    reason: "--algebra set requires --n".into(),
                })?;
                let text = self.map.as_deref().ok_or_else(|| Error::InvalidAlgebra {
                    reason: "--algebra set requires --map".into(),
                })?;
                (AlgebraDescriptor::finite_set(n)?, text)
            }
            "vec" => {
                let p = self.p.ok_or_else(|| Error::InvalidAlgebra {
                    reason: "--algebra vec requires --p".into(),
                })?;
                let dim = self.dim.ok_or_else(|| Error::InvalidAlgebra {
                    reason: "--algebra vec requires --dim".into(),
                })?;
                let text = self.matrix.as_deref().ok_or_else(|| Error::InvalidAlgebra {
                    reason: "--algebra vec requires --matrix".into(),
                })?;
                (AlgebraDescriptor::vector_space(p, dim)?, text)
            }
            other => {
                return Err(Error::InvalidAlgebra {
                    reason: format!("unknown algebra kind `{other}` (expected `set` or `vec`)"),
                })
            }
        };
        Ok((alg, parse_endo(alg, text)?))
    }
}

fn exit_for_error(err: &Error) -> u8 {
    match err {
        Error::InvalidAlgebra { .. }
        | Error::InvalidElement { .. }
        | Error::DuplicateElement { .. }
        | Error::Malformed { .. } => 2,
        Error::NotSingular => 3,
        Error::BudgetExceeded { .. } | Error::EnumerationCap { .. } | Error::UniverseCap { .. } => 5,
        _ => 4,
    }
}

fn emit(cli: &Cli, doc: &OutputDocument) {
    if cli.json {
        print!("{}", doc.to_json());
    } else if cli.quiet {
        print!("{}", doc.checks_summary());
    } else {
        print!("{}", doc.render_human());
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    match &cli.command {
        Command::Factorize(args) => {
            let (_, input) = args.resolve()?;
            if !is_singular(&input) {
                return Err(Error::NotSingular);
            }
            let report = factorize(&input)?;
            let doc = OutputDocument::from_report(&report);
            emit(cli, &doc);
            if let Some(name) = first_failing_check(&report.checks) {
                eprintln!("error: certificate check `{name}` failed (certificate-check stage)");
            }
            Ok(doc.exit_code() as u8)
        }
        Command::Verify { algebra, factors } => {
            let (alg, input) = algebra.resolve()?;
            let mut parsed = Vec::new();
            for block in factors.split('|') {
                parsed.push(parse_endo(alg, block)?);
            }
            let checks = verify_factorization(&input, &parsed)?;
            let doc = OutputDocument::from_verification(&input, &parsed, checks);
            emit(cli, &doc);
            if let Some(name) = first_failing_check(&checks) {
                eprintln!("error: certificate check `{name}` failed");
            }
            Ok(doc.exit_code() as u8)
        }
        Command::Oracle(args) => {
            let (_, input) = args.resolve()?;
            if !is_singular(&input) {
                return Err(Error::NotSingular);
            }
            let outcome = idempotent_generated(&input, &OracleBudget::default());
            let doc = OutputDocument::from_oracle(&input, outcome);
            emit(cli, &doc);
            Ok(doc.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            match &err {
                Error::NotSingular => eprintln!("error: input is an automorphism"),
                other => eprintln!("error: {other}"),
            }
            ExitCode::from(exit_for_error(&err))
        }
    }
}
