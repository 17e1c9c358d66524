//! Command-line front end. [`run`] takes the argument list and returns the
//! exit code with the text to print; the `divpow` binary is a thin wrapper.

pub mod interchange;
pub mod parse;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::autgroup::{build_sigma, extract_digits, factorize, sigma_apply, SigmaShift};
use crate::diffop::RecoveryOptions;
use crate::error::{Error, Result};
use crate::oracles::{self, SuiteReport};
use crate::scalars::{Prime, DEFAULT_PRECISION};

pub use interchange::{images_from_json, images_to_json, operator_from_json, operator_to_json};
pub use parse::{eval, normalize, parse, Expr};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;
pub const EXIT_AUTOMORPHISM: i32 = 4;

/// Largest divided-power level `verify` builds; precision is lowered to fit.
pub const VERIFY_LEVEL_CAP: u64 = 256;

/// Default index bound for `verify relations`.
pub const VERIFY_INDEX_CAP: u64 = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Relations,
    Kernel,
    Corollary,
    Grouplaw,
    Roundtrip,
    All,
}

#[derive(Debug, Parser)]
#[command(
    name = "divpow",
    version,
    about = "Differential operators on Laurent polynomials in characteristic p"
)]
pub struct Cli {
    /// Characteristic.
    #[arg(long = "p", global = true, default_value_t = 2)]
    pub p: u64,
    /// Number of variables.
    #[arg(long = "n", global = true, default_value_t = 1)]
    pub n: usize,
    /// p-adic digits kept for shifts and generator images.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    pub precision: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Kernel window radius w: windows [-w, w]^n and [0, w]^n (default 2p).
    #[arg(long, global = true)]
    pub window: Option<i64>,
    /// Largest divided-power index in `verify relations` (default min(p^3, 128)).
    #[arg(long = "order-bound", global = true)]
    pub order_bound: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the normal form of an expression.
    Normalize { expr: String },
    /// Apply an operator to a Laurent polynomial.
    Act { expr: String, function: String },
    /// Act with sigma_s, digits least significant first, e.g. "1,1;0,1".
    Sigma {
        #[arg(long)]
        digits: String,
        #[command(subcommand)]
        action: SigmaAction,
    },
    /// Write the generator images of sigma_s.
    BuildSigma {
        #[arg(long)]
        digits: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Recover s from the images of some sigma_s.
    Extract { file: PathBuf },
    /// Split an automorphism preserving L_n into sigma_s and a monomial part.
    Factor { file: PathBuf },
    /// Run verification suites.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum SigmaAction {
    /// Print sigma_s(D).
    Apply { expr: String },
}

/// Exit code and the text to print.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InsufficientPrecision { .. } => EXIT_PRECISION,
        Error::NotAUnit(_)
        | Error::NotGL(_)
        | Error::NotInStabilizer(_)
        | Error::NotSigmaForm { .. }
        | Error::InconsistentAction { .. } => EXIT_AUTOMORPHISM,
        _ => EXIT_USAGE,
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return Outcome {
                code,
                output: e.to_string(),
            };
        }
    };
    match execute(&cli) {
        Ok(outcome) => outcome,
        Err(e) => Outcome {
            code: exit_code(&e),
            output: format!("error: {e}\n"),
        },
    }
}

fn ok(output: String) -> Result<Outcome> {
    Ok(Outcome {
        code: EXIT_OK,
        output,
    })
}

fn session(cli: &Cli) -> Result<(Prime, usize)> {
    let p = Prime::new(cli.p)?;
    if cli.n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    if cli.precision == 0 {
        return Err(Error::Invalid("precision must be at least 1".into()));
    }
    Ok((p, cli.n))
}

/// `"1,1;0,1"` -> one digit list per variable.
pub fn parse_digits(text: &str, p: Prime, n: usize, precision: usize) -> Result<SigmaShift> {
    let lists: Vec<Vec<u32>> = text
        .split(';')
        .map(|part| {
            part.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<u32>()
                        .map_err(|_| Error::Invalid(format!("bad digit '{s}'")))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    if lists.len() != n {
        return Err(Error::Invalid(format!(
            "{} digit lists given for n = {n}",
            lists.len()
        )));
    }
    if let Some(d) = lists.iter().flatten().find(|&&d| d >= p.get()) {
        return Err(Error::Invalid(format!("digit {d} is not below p = {p}")));
    }
    SigmaShift::from_digits(p, precision, &lists)
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

#[derive(Serialize)]
struct ShiftRecord {
    p: u64,
    precision: usize,
    digits: Vec<Vec<u32>>,
}

#[derive(Serialize)]
struct FactorRecord {
    p: u64,
    precision: usize,
    digits: Vec<Vec<u32>>,
    matrix: Vec<Vec<i64>>,
    lambda: Vec<u32>,
}

fn shift_digits(s: &SigmaShift) -> Vec<Vec<u32>> {
    s.components().iter().map(|c| c.digits().to_vec()).collect()
}

fn shift_lines(s: &SigmaShift) -> String {
    s.components()
        .iter()
        .enumerate()
        .map(|(i, c)| format!("s[{}] = {c}\n", i + 1))
        .collect()
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("records serialize") + "\n"
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let (p, n) = session(cli)?;
    let machine = cli.format == Format::Machine;
    let show_op = |op: &crate::DiffOp| {
        if machine {
            operator_to_json(op) + "\n"
        } else {
            format!("{op}\n")
        }
    };
    match &cli.command {
        Command::Normalize { expr } => ok(show_op(&normalize(expr, p, n)?)),
        Command::Act { expr, function } => {
            let op = normalize(expr, p, n)?;
            let f = normalize(function, p, n)?.as_laurent().ok_or_else(|| {
                Error::Invalid(format!("'{function}' is not a Laurent polynomial"))
            })?;
            ok(show_op(&crate::DiffOp::from_laurent(op.act(&f)?)))
        }
        Command::Sigma {
            digits,
            action: SigmaAction::Apply { expr },
        } => {
            let s = parse_digits(digits, p, n, cli.precision)?;
            ok(show_op(&sigma_apply(&s, &normalize(expr, p, n)?)?))
        }
        Command::BuildSigma { digits, output } => {
            let s = parse_digits(digits, p, n, cli.precision)?;
            let text = images_to_json(&build_sigma(&s)?) + "\n";
            match output {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|e| {
                        Error::Invalid(format!("cannot write {}: {e}", path.display()))
                    })?;
                    ok(format!("wrote {}\n", path.display()))
                }
                None => ok(text),
            }
        }
        Command::Extract { file } => {
            let g = images_from_json(&read(file)?)?;
            let s = extract_digits(&g)?;
            if machine {
                let record = ShiftRecord {
                    p: g.prime().get() as u64,
                    precision: g.precision(),
                    digits: shift_digits(&s),
                };
                ok(json(&record))
            } else {
                ok(shift_lines(&s))
            }
        }
        Command::Factor { file } => {
            let g = images_from_json(&read(file)?)?;
            let opts = RecoveryOptions {
                seed: cli.seed,
                ..RecoveryOptions::default()
            };
            let f = factorize(&g, opts)?;
            if machine {
                let record = FactorRecord {
                    p: g.prime().get() as u64,
                    precision: g.precision(),
                    digits: shift_digits(&f.shift),
                    matrix: f.tau.matrix().to_vec(),
                    lambda: f.tau.lambda().iter().map(|l| l.value()).collect(),
                };
                ok(json(&record))
            } else {
                let lambda: Vec<String> = f.tau.lambda().iter().map(|l| l.to_string()).collect();
                ok(format!(
                    "{}A = {:?}\nlambda = [{}]\n",
                    shift_lines(&f.shift),
                    f.tau.matrix(),
                    lambda.join(", ")
                ))
            }
        }
        Command::Verify { suite, trials } => verify(cli, p, n, *suite, *trials),
    }
}

/// Largest precision `<= requested` whose top level `p^{K-1}` stays within
/// [`VERIFY_LEVEL_CAP`].
pub fn verify_precision(p: Prime, requested: usize) -> usize {
    let mut k = 1;
    while k < requested && p.checked_pow(k).is_some_and(|v| v <= VERIFY_LEVEL_CAP) {
        k += 1;
    }
    k
}

fn verify(cli: &Cli, p: Prime, n: usize, suite: Suite, trials: usize) -> Result<Outcome> {
    let precision = verify_precision(p, cli.precision);
    let max_index = cli.order_bound.unwrap_or_else(|| {
        p.checked_pow(3)
            .map_or(VERIFY_INDEX_CAP, |v| v.min(VERIFY_INDEX_CAP))
    });
    let radius = cli.window.unwrap_or(2 * p.get() as i64);
    if radius < 1 {
        return Err(Error::Invalid("window radius must be positive".into()));
    }
    let rng = || ChaCha8Rng::seed_from_u64(cli.seed);
    let mul = |a: &crate::DiffOp, b: &crate::DiffOp| a * b;
    let wanted = |s: Suite| suite == s || suite == Suite::All;
    let mut report = SuiteReport::default();
    if wanted(Suite::Relations) {
        report
            .blocks
            .extend(oracles::defining_relations(p, n, max_index, &mul));
        report.blocks.push(oracles::multi_index_products(
            p,
            n,
            max_index,
            trials,
            &mut rng(),
            &mul,
        ));
    }
    if wanted(Suite::Corollary) {
        report
            .blocks
            .push(oracles::pth_power_identity(p, n, trials, &mut rng(), &mul));
    }
    if wanted(Suite::Kernel) {
        report.blocks.push(oracles::kernel_checks(p, n, radius)?);
    }
    if wanted(Suite::Grouplaw) {
        report
            .blocks
            .push(oracles::group_law(p, n, precision, trials, &mut rng())?);
    }
    if wanted(Suite::Roundtrip) {
        report
            .blocks
            .push(oracles::round_trip(p, n, precision, trials, &mut rng())?);
    }
    let code = if report.passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    };
    let output = if cli.format == Format::Machine {
        report.render_machine() + "\n"
    } else {
        format!(
            "verify: p = {p}, n = {n}, seed = {}, precision = {precision}, index bound = {max_index}, window = {radius}\n{}",
            cli.seed,
            report.render_text()
        )
    };
    Ok(Outcome { code, output })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("divpow").chain(args.iter().copied()))
    }

    #[test]
    fn normalize_command() {
        let out = run_args(&["normalize", "d1[2]*x1", "--p", "3", "--n", "1"]);
        assert_eq!(
            out,
            Outcome {
                code: 0,
                output: "x1*d1[2] + d1[1]\n".into()
            }
        );
        assert_eq!(run_args(&["normalize", "d1[2]*"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["normalize", "x1", "--p", "4"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]).code, EXIT_USAGE);
    }

    #[test]
    fn act_and_sigma() {
        assert_eq!(
            run_args(&["act", "d1[2]", "x1^5", "--p", "7"]).output,
            "3*x1^3\n"
        );
        let out = run_args(&[
            "sigma",
            "--digits",
            "1",
            "apply",
            "d1[1]",
            "--p",
            "3",
            "--precision",
            "2",
        ]);
        assert_eq!(out.output, "d1[1] + x1^-1\n");
        let out = run_args(&[
            "sigma",
            "--digits",
            "1,0,1",
            "apply",
            "d1[1]",
            "--precision",
            "2",
        ]);
        assert_eq!(out.code, EXIT_PRECISION);
        let out = run_args(&[
            "sigma",
            "--digits",
            "1",
            "apply",
            "d1[9]",
            "--p",
            "3",
            "--precision",
            "2",
        ]);
        assert_eq!(out.code, EXIT_PRECISION);
    }

    #[test]
    fn verify_precision_cap() {
        let p = |v| Prime::new(v).unwrap();
        assert_eq!(verify_precision(p(2), 8), 8);
        assert_eq!(verify_precision(p(2), 20), 9);
        assert_eq!(verify_precision(p(5), 8), 4);
        assert_eq!(verify_precision(p(3), 2), 2);
    }

    #[test]
    fn verify_small() {
        let out = run_args(&[
            "verify",
            "all",
            "--p",
            "2",
            "--n",
            "1",
            "--trials",
            "5",
            "--precision",
            "3",
        ]);
        assert_eq!(out.code, EXIT_OK, "{}", out.output);
        assert!(out.output.contains("summary:"));
    }
}
