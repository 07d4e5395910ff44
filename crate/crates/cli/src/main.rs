//! `cremona`: command-line front end for the exact birational-map toolkit.
//!
//! Exit status is 0 on success, 1 when a verification suite reports
//! failures and 2 on parse or validation errors. Errors print their
//! stable name on stderr.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cremona_core::cocycle::trivialize;
use cremona_core::deformation::{build_family, extendability, move_point_to_origin};
use cremona_core::linear::{gauss_decompose, in_congruence_subgroup, transvection_product};
use cremona_core::parse::parse_matrix;
use cremona_core::suite::run_suite;
use cremona_core::{
    Cocycle, CremonaMap, DieudonneAutomorphism, FieldAutomorphism, FieldSpec, ProjLinear, ProjPoint, SuiteConfig,
    SuiteName,
};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(name = "cremona", version, about = "Exact computations with Cremona maps and linear groups")]
struct Cli {
    /// Base field: Q, Qi or Fp:<prime>.
    #[arg(long, global = true, default_value = "Q")]
    field: String,

    /// Dimension of the ambient space for `verify`.
    #[arg(long, global = true, default_value_t = 2)]
    dim: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print f ∘ g in reduced form.
    Compose {
        #[arg(short)]
        f: PathBuf,
        #[arg(short)]
        g: PathBuf,
    },
    /// Print the degree of a map.
    Degree {
        #[arg(short)]
        f: PathBuf,
    },
    /// Evaluate a map at a projective point such as `[1:2:3]`.
    Apply {
        #[arg(short)]
        f: PathBuf,
        #[arg(long)]
        point: String,
    },
    /// Build the scaling deformation of a map and decide extendability at t = 0.
    Deform {
        #[arg(short)]
        f: PathBuf,
        /// Conjugate so that this point sits at [1:0:…:0] first.
        #[arg(long)]
        at: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Apply g ↦ h α(g) h⁻¹, optionally followed by the transpose inverse.
    Dieudonne {
        #[arg(long)]
        h: PathBuf,
        #[arg(long, value_enum)]
        alpha: Alpha,
        #[arg(long)]
        dual: bool,
        #[arg(short)]
        g: PathBuf,
    },
    /// Write a unimodular matrix as a product of transvections.
    Decompose {
        #[arg(short)]
        m: PathBuf,
    },
    /// Test membership in the congruence subgroup of level p.
    Congruence {
        #[arg(short)]
        m: PathBuf,
        #[arg(short)]
        p: u64,
    },
    /// Find a with a⁻¹ ν(σ) σ(a) = 1 for a cocycle over Q(i).
    Trivialize {
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Run a seeded verification suite.
    Verify {
        /// polynomials, cremona, deformation, linear, affineauto, cocycles or all.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Alpha {
    Id,
    Conj,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] cremona_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    fn name(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.name(),
            CliError::Io { .. } => "IO_ERROR",
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn read_map(field: FieldSpec, path: &Path) -> Result<CremonaMap, CliError> {
    Ok(CremonaMap::parse(field, read(path)?.trim())?)
}

fn read_linear(field: FieldSpec, path: &Path) -> Result<ProjLinear, CliError> {
    Ok(ProjLinear::parse(field, read(path)?.trim())?)
}

/// Runs one command, writing its output to `out`. Returns the exit status.
fn run(cli: Cli, out: &mut impl Write) -> Result<u8, CliError> {
    let field = FieldSpec::parse(&cli.field)?;
    let io_err = |source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    };
    match cli.command {
        Command::Compose { f, g } => {
            let h = read_map(field, &f)?.compose(&read_map(field, &g)?)?;
            writeln!(out, "{h}").map_err(io_err)?;
        }
        Command::Degree { f } => {
            writeln!(out, "{}", read_map(field, &f)?.degree()).map_err(io_err)?;
        }
        Command::Apply { f, point } => {
            let p = ProjPoint::parse(field, &point)?;
            writeln!(out, "{}", read_map(field, &f)?.apply(&p)?).map_err(io_err)?;
        }
        Command::Deform { f, at, json } => {
            let mut map = read_map(field, &f)?;
            if let Some(at) = at {
                let a = move_point_to_origin(&ProjPoint::parse(field, &at)?);
                map = CremonaMap::from_linear(&a)
                    .compose(&map)?
                    .compose(&CremonaMap::from_linear(&a.proj_inv()))?;
            }
            let family = build_family(&map)?;
            let verdict = extendability(&family);
            if json {
                let s = serde_json::to_string_pretty(&verdict).expect("verdict serializes");
                writeln!(out, "{s}").map_err(io_err)?;
            } else {
                let flags = |v: &[bool]| v.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", ");
                let r = &verdict.reasons;
                let limit = match &verdict.limit {
                    Some(l) => CremonaMap::from_linear(l).to_string(),
                    None => "none".to_string(),
                };
                writeln!(
                    out,
                    "{family}\nextendable: {}\nP_i0_nonzero: [{}]\nQ_i0_zero: [{}]\njacobian_singular: {}\nlimit: {limit}",
                    verdict.extendable,
                    flags(&r.p_i0_nonzero),
                    flags(&r.q_i0_zero),
                    r.jacobian_singular,
                )
                .map_err(io_err)?;
            }
        }
        Command::Dieudonne { h, alpha, dual, g } => {
            let alpha = match alpha {
                Alpha::Id => FieldAutomorphism::identity(field),
                Alpha::Conj => FieldAutomorphism::conjugation(),
            };
            let phi = DieudonneAutomorphism::new(read_linear(field, &h)?, alpha, dual)?;
            writeln!(out, "{}", phi.apply(&read_linear(field, &g)?)?).map_err(io_err)?;
        }
        Command::Decompose { m } => {
            let a = parse_matrix(field, read(&m)?.trim())?;
            let ts = gauss_decompose(&a)?;
            debug_assert_eq!(transvection_product(field, a.nrows(), &ts), a);
            for t in &ts {
                writeln!(out, "{t}").map_err(io_err)?;
            }
            writeln!(out, "factors: {}", ts.len()).map_err(io_err)?;
        }
        Command::Congruence { m, p } => {
            let a = parse_matrix(field, read(&m)?.trim())?;
            writeln!(out, "{}", in_congruence_subgroup(&a, p)?).map_err(io_err)?;
        }
        Command::Trivialize { cocycle } => {
            let nu = Cocycle::parse(read(&cocycle)?.trim())?;
            writeln!(out, "{}", trivialize(&nu)?).map_err(io_err)?;
        }
        Command::Verify {
            suite,
            seed,
            trials,
            json,
        } => {
            let cfg = SuiteConfig {
                seed,
                trials,
                field,
                dim: cli.dim,
            };
            let report = run_suite(suite.parse::<SuiteName>()?, &cfg)?;
            if json {
                let s = serde_json::to_string_pretty(&report).expect("report serializes");
                writeln!(out, "{s}").map_err(io_err)?;
            } else {
                writeln!(
                    out,
                    "{}: {}/{} passed (seed {})",
                    report.suite, report.passed, report.trials, report.seed
                )
                .map_err(io_err)?;
                for f in &report.failures {
                    writeln!(
                        out,
                        "FAIL {}: expected {}, got {} [{}]",
                        f.case_id,
                        f.expected,
                        f.actual,
                        f.inputs.join("; ")
                    )
                    .map_err(io_err)?;
                }
            }
            if !report.ok() {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            ExitCode::from(2)
        }
    }
}
