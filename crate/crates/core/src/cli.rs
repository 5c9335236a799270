//! The `cssreduce` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a code fails validation or a reported bound
//! does not hold, 2 on usage, parse or file errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::code::CssCode;
use crate::distance::{cosoundness, soundness, Side};
use crate::error::Error;
use crate::exponents::{exponents_clasympt, exponents_theorem1, nu_from_mu, ExponentVector};
use crate::fixtures;
use crate::io::{read_code_file, write_code_file, CodeFile};
use crate::pipeline::{balance, weight_reduce, PhaseParams, PipelineOptions, PipelineReport};
use crate::transforms::{
    alt_qubit_split_all, parse_rational, split_all_x_generators, thicken, thicken_all_first,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cssreduce", version, about = "Weight reduction for CSS stabilizer codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Output code file; written to stdout when omitted.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check commutation and report degenerate generators.
    Validate { file: PathBuf },
    /// Print counts, weights and degrees, and distances up to a cap.
    Params {
        file: PathBuf,
        #[arg(long)]
        distance_cap: Option<usize>,
    },
    /// Split every X generator of weight at least 4 into weight-3 generators.
    SplitX {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Thicken along an interval of l copies.
    Thicken {
        file: PathBuf,
        #[arg(long)]
        l: usize,
        /// Keep every Z generator at copy 1.
        #[arg(long, conflicts_with_all = ["w", "seed"])]
        all_k_one: bool,
        /// Target copied load; the assignment is resampled until no qubit exceeds it.
        #[arg(long, requires = "seed")]
        w: Option<usize>,
        #[arg(long, requires = "w")]
        seed: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Split every qubit of X degree at least 4 into a chain of copies.
    AltSplit {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Exchange the X and Z generators.
    Dualize {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Two-phase weight reduction.
    Reduce {
        file: PathBuf,
        #[arg(long, conflicts_with_all = ["w", "l"])]
        epsilon: Option<String>,
        #[arg(long, requires = "l")]
        w: Option<usize>,
        #[arg(long, requires = "w")]
        l: Option<usize>,
        #[arg(long)]
        seed: u64,
        /// Resampling budget per phase.
        #[arg(long)]
        max_rounds: Option<usize>,
        /// Search distances up to this weight and check distance bounds.
        #[arg(long)]
        distance_cap: Option<usize>,
        /// Write the structured report here.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Thicken along the side with the smaller distance so both distances match.
    Balance {
        file: PathBuf,
        #[arg(long, requires = "dz")]
        dx: Option<usize>,
        #[arg(long, requires = "dx")]
        dz: Option<usize>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Exhaustive soundness (or cosoundness) search up to a weight cap.
    Soundness {
        file: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long)]
        w_cap: usize,
        #[arg(long)]
        co: bool,
    },
    /// Distance exponents of a code family after the reduction.
    Exponents(ExponentArgs),
    /// Write a reference code.
    Fixture {
        #[arg(value_enum)]
        name: FixtureName,
        /// Torus size for `toric`.
        #[arg(long = "size", default_value_t = 3)]
        size: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        n_x: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    X,
    Z,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::X => Side::X,
            SideArg::Z => Side::Z,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum FixtureName {
    Steane,
    Toric,
    RepetitionTriangle,
    RandomCss,
}

#[derive(Args, Debug)]
struct ExponentArgs {
    #[arg(long, default_value_t = 0.0)]
    alpha_x: f64,
    #[arg(long, default_value_t = 0.0)]
    alpha_z: f64,
    #[arg(long, default_value_t = 0.0)]
    beta_x: f64,
    #[arg(long, default_value_t = 0.0)]
    beta_z: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma_x: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma_z: f64,
    #[arg(long, default_value_t = 0.0)]
    tau_x: f64,
    #[arg(long, default_value_t = 0.0)]
    tau_z: f64,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Closed-form exponents after both phases (the default).
    #[arg(long, conflicts_with_all = ["clasympt", "nu"])]
    theorem1: bool,
    /// Exponents after a single reduction of `w_X` and `q_Z`.
    #[arg(long, conflicts_with = "nu")]
    clasympt: bool,
    /// Distance exponent reachable by balancing a family with `d_X d_Z ~ N^MU`.
    #[arg(long, value_name = "MU")]
    nu: Option<f64>,
}

/// Failures the CLI reports, split by exit code.
enum Failure {
    Usage(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Field { .. } | Error::Io(_) => Failure::Usage(e.to_string()),
            other => Failure::Failed(other.to_string()),
        }
    }
}

type CliResult = std::result::Result<i32, Failure>;

/// Runs the CLI on `argv` (including the program name), writing to the given streams.
pub fn run_with<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Failed(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            EXIT_FAILED
        }
    }
}

pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn load(path: &Path) -> std::result::Result<(CssCode, CodeFile), Failure> {
    let file = read_code_file(path)?;
    let code = file.to_code()?;
    Ok((code, file))
}

/// Loads a code and attaches numeric labels if it has none, so outputs stay traceable.
fn load_labelled(path: &Path) -> std::result::Result<(CssCode, CodeFile), Failure> {
    let (code, file) = load(path)?;
    let code = match code.labels() {
        Some(_) => code,
        None => {
            let l = code.labels_or_numeric();
            code.with_labels(l)?
        }
    };
    Ok((code, file))
}

fn emit_code(
    code: &CssCode,
    source: Option<&CodeFile>,
    transform: String,
    out: &Output,
    stdout: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    let mut extra = vec![("transform".to_string(), transform)];
    if let Some(name) = source.and_then(|f| f.metadata.get("name")) {
        extra.push(("source".to_string(), name.clone()));
    }
    let file = CodeFile::from_code_with(code, extra);
    match &out.output {
        Some(path) => write_code_file(path, &file)?,
        None => write_text(stdout, &file.to_json())?,
    }
    Ok(())
}

fn write_text(w: &mut dyn Write, text: &str) -> std::result::Result<(), Failure> {
    w.write_all(text.as_bytes())
        .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn write_report(path: Option<&PathBuf>, report: &PipelineReport) -> std::result::Result<(), Failure> {
    if let Some(p) = path {
        std::fs::write(p, to_json(report)).map_err(|e| Error::Io(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

/// Writes the code and report; the rendered report goes to stdout unless the code does.
fn finish_pipeline(
    code: &CssCode,
    src: &CodeFile,
    transform: String,
    out: &Output,
    report_path: Option<&PathBuf>,
    report: &PipelineReport,
    stdout: &mut dyn Write,
) -> CliResult {
    emit_code(code, Some(src), transform, out, stdout)?;
    write_report(report_path, report)?;
    if out.output.is_some() {
        write_text(stdout, &report.render())?;
    }
    Ok(if report.all_hold() { EXIT_OK } else { EXIT_FAILED })
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> CliResult {
    match command {
        Command::Validate { file } => {
            let (code, _) = load(&file)?;
            let v = code.validate();
            let mut text = format!("commutes: {}\n", v.commutes);
            for (i, j) in v.anticommuting_pairs.iter().take(20) {
                text.push_str(&format!("anticommuting: X row {i}, Z row {j}\n"));
            }
            for w in v.warnings() {
                text.push_str(&format!("warning: {w}\n"));
            }
            write_text(stdout, &text)?;
            Ok(if v.commutes { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Params { file, distance_cap } => {
            let (code, _) = load(&file)?;
            code.ensure_valid()?;
            let p = code.params(distance_cap)?;
            write_text(stdout, &format!("{}\n", p.summary()))?;
            Ok(EXIT_OK)
        }
        Command::SplitX { file, out } => {
            let (code, src) = load_labelled(&file)?;
            let (split, trace) = split_all_x_generators(&code)?;
            emit_code(&split, Some(&src), format!("split-x (delta {})", trace.delta()), &out, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Thicken {
            file,
            l,
            all_k_one,
            w,
            seed,
            out,
        } => {
            let (code, src) = load_labelled(&file)?;
            let (thick, desc) = match (all_k_one, w, seed) {
                (true, None, None) => (thicken_all_first(&code, l)?, format!("thicken l={l} all-k-one")),
                (false, Some(w), Some(seed)) => {
                    let rounds = crate::assignment::default_max_rounds(&code);
                    let outcome = crate::assignment::lll_resample(&code, l, w, seed, rounds)?;
                    let desc = format!(
                        "thicken l={l} w={w} seed={seed} max copied load {}",
                        outcome.max_copied_load
                    );
                    (thicken(&code, &outcome.assignment)?, desc)
                }
                _ => return Err(Failure::Usage("thicken needs --all-k-one or both --w and --seed".into())),
            };
            emit_code(&thick, Some(&src), desc, &out, stdout)?;
            Ok(EXIT_OK)
        }
        Command::AltSplit { file, out } => {
            let (code, src) = load_labelled(&file)?;
            emit_code(&alt_qubit_split_all(&code)?, Some(&src), "alt-split".into(), &out, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Dualize { file, out } => {
            let (code, src) = load(&file)?;
            emit_code(&code.dualize(), Some(&src), "dualize".into(), &out, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Reduce {
            file,
            epsilon,
            w,
            l,
            seed,
            max_rounds,
            distance_cap,
            report,
            out,
        } => {
            let params = match (epsilon, w, l) {
                (Some(e), None, None) => {
                    PhaseParams::Epsilon(parse_rational(&e).map_err(|err| Failure::Usage(err.to_string()))?)
                }
                (None, Some(w), Some(l)) => PhaseParams::Explicit { w, l },
                _ => return Err(Failure::Usage("reduce needs --epsilon or both --w and --l".into())),
            };
            let (code, src) = load_labelled(&file)?;
            let opts = PipelineOptions {
                max_rounds,
                distance_cap,
            };
            let (reduced, rep) = weight_reduce(&code, params, params, seed, &opts)?;
            let desc = match params {
                PhaseParams::Explicit { w, l } => format!("reduce w={w} l={l} seed={seed}"),
                PhaseParams::Epsilon(e) => format!("reduce epsilon={e} seed={seed}"),
            };
            finish_pipeline(&reduced, &src, desc, &out, report.as_ref(), &rep, stdout)
        }
        Command::Balance {
            file,
            dx,
            dz,
            report,
            out,
        } => {
            let (code, src) = load_labelled(&file)?;
            let hint = dx.zip(dz);
            let (balanced, rep) = balance(&code, hint, &PipelineOptions::default())?;
            finish_pipeline(&balanced, &src, "balance".into(), &out, report.as_ref(), &rep, stdout)
        }
        Command::Soundness { file, side, w_cap, co } => {
            let (code, _) = load(&file)?;
            let est = if co {
                cosoundness(&code, side.into(), w_cap)?
            } else {
                soundness(&code, side.into(), w_cap)?
            };
            write_text(stdout, &to_json(&est))?;
            Ok(EXIT_OK)
        }
        Command::Exponents(args) => exponents(args, stdout),
        Command::Fixture {
            name,
            size,
            n,
            n_x,
            seed,
            out,
        } => {
            let (code, label) = match name {
                FixtureName::Steane => (fixtures::steane(), "steane".to_string()),
                FixtureName::Toric => (fixtures::toric(size)?, format!("toric({size})")),
                FixtureName::RepetitionTriangle => (fixtures::repetition_triangle(), "repetition_triangle".into()),
                FixtureName::RandomCss => {
                    let (Some(n), Some(n_x), Some(seed)) = (n, n_x, seed) else {
                        return Err(Failure::Usage("random_css needs --n, --n-x and --seed".into()));
                    };
                    (fixtures::random_css(n, n_x, seed)?, format!("random_css({n}, {n_x}, {seed})"))
                }
            };
            let file = CodeFile::from_code_with(&code, [("name".to_string(), label)]);
            match &out.output {
                Some(path) => write_code_file(path, &file)?,
                None => write_text(stdout, &file.to_json())?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn exponents(args: ExponentArgs, stdout: &mut dyn Write) -> CliResult {
    if let Some(mu) = args.nu {
        let nu = nu_from_mu(mu)?;
        write_text(stdout, &to_json(&serde_json::json!({ "mu": mu, "nu": nu })))?;
        return Ok(EXIT_OK);
    }
    let Some(eps) = args.epsilon else {
        return Err(Failure::Usage("--epsilon is required unless --nu is given".into()));
    };
    let e = ExponentVector {
        alpha_x: args.alpha_x,
        alpha_z: args.alpha_z,
        beta_x: args.beta_x,
        beta_z: args.beta_z,
        sigma_x: args.sigma_x,
        sigma_z: args.sigma_z,
        tau_x: args.tau_x,
        tau_z: args.tau_z,
    };
    let text = if args.clasympt {
        to_json(&exponents_clasympt(&e, &eps)?)
    } else {
        to_json(&exponents_theorem1(&e, &eps)?)
    };
    write_text(stdout, &text)?;
    Ok(EXIT_OK)
}
