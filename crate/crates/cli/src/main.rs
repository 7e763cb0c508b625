//! Command-line interface: construct window-based transversals, verify
//! packing/strength properties, solve the max-weight packing problem and
//! inspect the profile-matrix hull.
//!
//! Exit codes are fixed for scripting: 0 success, 1 parse error, 2
//! construction error, 3 verification failure or infeasibility, 4 scale
//! guard exceeded.

mod files;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use moatk::construct::{
    full_construction, fractional_construction, interval_union_construction, linear_combination,
    tensor_product, window_violations, CombinationMode, Window,
};
use moatk::domain::{MultiTransversal, ParamSet, Rational};
use moatk::hull::{
    convex_decomposition, enumerate_transversals, extreme_candidates, s_matrix,
    MultiplicityConstraint,
};
use moatk::optimize::{max_weight_transversal, SolveMode};
use moatk::transversal::{
    check_transversal, constant_ratio, fullness, moa_strength, to_moa, StrengthCheck,
};
use moatk::Error;

use files::{
    matrix_to_entries, parse_rational, parse_rational_list, read_matrix, read_moa, read_params,
    read_transversal, write_moa, write_params, write_transversal, MatrixEntry,
};

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Construct(String),
    Verify(String),
    Scale(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Construct(_) => 2,
            CliError::Verify(_) => 3,
            CliError::Scale(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Construct(m) | CliError::Verify(m) | CliError::Scale(m) => m,
        }
    }
}

/// Library errors map onto construct errors except for the scale guards.
fn construct_error(e: Error) -> CliError {
    match e {
        Error::ScaleGuard(m) | Error::SearchSpace(m) => CliError::Scale(m),
        other => CliError::Construct(other.to_string()),
    }
}

#[derive(Parser)]
#[command(name = "moatk", version, about = "Multi-transversal and mixed orthogonal array toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a transversal file with one of the constructions.
    Construct(ConstructArgs),
    /// Check a transversal file against a parameter file.
    Verify(VerifyArgs),
    /// Maximize the total weight over simple transversals.
    Solve(SolveArgs),
    /// Extreme points and convex decompositions of candidate matrices.
    Hull(HullArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Single window at a given start (width defaults to min L_P/K_P).
    Frac,
    /// Union of shifted windows from an odd list of starts.
    Interval,
    /// Tensor product of two transversal files.
    Tensor,
    /// Rational linear combination of transversal files.
    Lincomb,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    method: Method,
    /// Parameter file; repeat per input for tensor/lincomb.
    #[arg(long = "params", required = true)]
    params: Vec<PathBuf>,
    /// Window start (rational), for frac.
    #[arg(long)]
    beta: Option<String>,
    /// Window width (rational); frac defaults to min L_P/K_P.
    #[arg(long)]
    mu: Option<String>,
    /// Comma-separated odd list of interval starts, for interval.
    #[arg(long)]
    betas: Option<String>,
    /// Input transversal files for tensor/lincomb.
    #[arg(long = "in")]
    inputs: Vec<PathBuf>,
    /// Comma-separated rational coefficients for lincomb.
    #[arg(long)]
    coeffs: Option<String>,
    /// Combine in array mode (exact bound sums; terms must be full with
    /// constant ratio).
    #[arg(long)]
    moa_mode: bool,
    #[arg(long)]
    out: PathBuf,
    /// Also write the derived parameter file.
    #[arg(long)]
    params_out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    params: PathBuf,
    /// Transversal file to verify.
    #[arg(long = "in", conflicts_with = "input_moa", required_unless_present = "input_moa")]
    input: Option<PathBuf>,
    /// Array file to verify; its rows are read back as a transversal.
    #[arg(long = "in-moa")]
    input_moa: Option<PathBuf>,
    /// Additionally require fullness, constant ratio and a strength check.
    #[arg(long)]
    as_moa: bool,
    /// Strength to verify (defaults to M − k).
    #[arg(long)]
    strength: Option<usize>,
    /// Write the array file after a successful --as-moa check.
    #[arg(long)]
    moa_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveModeArg {
    Exhaustive,
    Bnb,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    params: PathBuf,
    #[arg(long, value_enum)]
    mode: SolveModeArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct HullArgs {
    #[arg(long)]
    params: PathBuf,
    /// Print the extreme candidate matrices.
    #[arg(long, conflicts_with = "decompose")]
    extreme: bool,
    /// Decompose the profile matrix in this JSON file over the candidates.
    #[arg(long)]
    decompose: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage problems are parse errors (exit 1), except the help and
            // version displays which are not errors at all.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Construct(args) => cmd_construct(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Hull(args) => cmd_hull(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn load_checked_input(
    params_path: &PathBuf,
    input_path: &PathBuf,
) -> Result<(MultiTransversal, ParamSet), CliError> {
    let loaded = read_params(params_path)?;
    let t = read_transversal(input_path)?;
    if t.dims() != loaded.params.dims() {
        return Err(CliError::Parse(format!(
            "{} and {} use different boxes",
            params_path.display(),
            input_path.display()
        )));
    }
    if !check_transversal(&t, &loaded.params).ok() {
        return Err(CliError::Construct(format!(
            "{} is not a transversal for {}",
            input_path.display(),
            params_path.display()
        )));
    }
    Ok((t, loaded.params))
}

fn cmd_construct(args: ConstructArgs) -> Result<(), CliError> {
    let (result, derived) = match args.method {
        Method::Frac => {
            let loaded = read_params(&args.params[0])?;
            let beta = parse_rational(args.beta.as_deref().unwrap_or("0"))?;
            let t = match &args.mu {
                None => full_construction(&loaded.params, &beta).map_err(construct_error)?,
                Some(mu_text) => {
                    let mu = parse_rational(mu_text)?;
                    let violations = window_violations(&loaded.params, &mu);
                    if let Some(subset) = violations.first() {
                        return Err(CliError::Construct(format!(
                            "window condition fails at subset {subset:?} for width {mu}"
                        )));
                    }
                    let window = Window::new(beta, mu).map_err(construct_error)?;
                    fractional_construction(loaded.params.dims(), &window)
                }
            };
            (t, loaded.params)
        }
        Method::Interval => {
            let loaded = read_params(&args.params[0])?;
            let mu = parse_rational(
                args.mu
                    .as_deref()
                    .ok_or_else(|| CliError::Parse("interval needs --mu".into()))?,
            )?;
            let starts = parse_rational_list(
                args.betas
                    .as_deref()
                    .ok_or_else(|| CliError::Parse("interval needs --betas".into()))?,
            )?;
            let (t, derived) =
                interval_union_construction(loaded.params.dims(), loaded.params.k(), &mu, &starts)
                    .map_err(construct_error)?;
            if derived != loaded.params {
                return Err(CliError::Construct(
                    "parameter file bounds do not match the derived window bounds μ·K_P".into(),
                ));
            }
            (t, derived)
        }
        Method::Tensor => {
            if args.params.len() != 2 || args.inputs.len() != 2 {
                return Err(CliError::Parse(
                    "tensor needs two --params and two --in files".into(),
                ));
            }
            let (t1, p1) = load_checked_input(&args.params[0], &args.inputs[0])?;
            let (t2, p2) = load_checked_input(&args.params[1], &args.inputs[1])?;
            let (t, derived) = tensor_product(&t1, &p1, &t2, &p2).map_err(construct_error)?;
            (t, derived)
        }
        Method::Lincomb => {
            let coeffs = parse_rational_list(
                args.coeffs
                    .as_deref()
                    .ok_or_else(|| CliError::Parse("lincomb needs --coeffs".into()))?,
            )?;
            if args.params.len() != coeffs.len() || args.inputs.len() != coeffs.len() {
                return Err(CliError::Parse(
                    "lincomb needs matching counts of --params, --in and coefficients".into(),
                ));
            }
            let mut loaded: Vec<(Rational, MultiTransversal, ParamSet)> = Vec::new();
            for ((params_path, input_path), coeff) in
                args.params.iter().zip(&args.inputs).zip(coeffs)
            {
                let (t, p) = load_checked_input(params_path, input_path)?;
                loaded.push((coeff, t, p));
            }
            let terms: Vec<(Rational, &MultiTransversal, &ParamSet)> = loaded
                .iter()
                .map(|(c, t, p)| (c.clone(), t, p))
                .collect();
            let mode = if args.moa_mode {
                CombinationMode::Moa
            } else {
                CombinationMode::Transversal
            };
            let (t, derived) = linear_combination(&terms, mode).map_err(construct_error)?;
            (t, derived)
        }
    };
    write_transversal(&args.out, &result)?;
    if let Some(path) = &args.params_out {
        write_params(path, &derived, None)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct WitnessJson {
    subset: Vec<usize>,
    fixed: Vec<Option<usize>>,
    observed: u64,
    bound: u64,
}

#[derive(Serialize)]
struct CheckSection {
    ok: bool,
    witnesses: Vec<WitnessJson>,
}

#[derive(Serialize)]
struct LambdaJson {
    columns: Vec<usize>,
    value: u64,
}

#[derive(Serialize)]
struct StrengthWitnessJson {
    columns: Vec<usize>,
    tuple_a: Vec<usize>,
    count_a: u64,
    tuple_b: Vec<usize>,
    count_b: u64,
}

#[derive(Serialize)]
struct MoaSection {
    strength: usize,
    holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<Vec<LambdaJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<StrengthWitnessJson>,
}

#[derive(Serialize)]
struct VerifyReport {
    check_transversal: CheckSection,
    size: u64,
    simple: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    full: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tight_subsets: Option<Vec<Vec<usize>>>,
    constant_ratio: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    moa: Option<MoaSection>,
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let loaded = read_params(&args.params)?;
    let (t, input_path) = match (&args.input, &args.input_moa) {
        (Some(path), None) => (read_transversal(path)?, path),
        (None, Some(path)) => {
            let array = read_moa(path)?;
            let (t, _) = moatk::transversal::from_moa(&array, array.strength())
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            (t, path)
        }
        _ => return Err(CliError::Parse("verify needs --in or --in-moa".into())),
    };
    if t.dims() != loaded.params.dims() {
        return Err(CliError::Parse(format!(
            "{} and {} use different boxes",
            args.params.display(),
            input_path.display()
        )));
    }
    let p = &loaded.params;
    let report = check_transversal(&t, p);
    let check_ok = report.ok();
    let (full, tight) = if check_ok {
        let (f, tight) = fullness(&t, p).map_err(|e| CliError::Verify(e.to_string()))?;
        (Some(f), Some(tight))
    } else {
        (None, None)
    };
    let ratio_ok = constant_ratio(p);

    let mut moa_section = None;
    let mut failure: Option<String> = None;
    if !check_ok {
        failure = Some(format!(
            "{} packing inequalities fail",
            report.witnesses.len()
        ));
    } else if args.as_moa {
        if !ratio_ok {
            failure = Some(
                "constant-ratio condition fails: (∏_{i∈P} n_i)/L_P depends on P".into(),
            );
        } else if full != Some(true) {
            failure = Some("transversal is not full".into());
        } else {
            let array = to_moa(&t, p).map_err(|e| CliError::Verify(e.to_string()))?;
            let d = args.strength.unwrap_or(p.m() - p.k());
            match moa_strength(&array, d) {
                StrengthCheck::Holds { lambda } => {
                    moa_section = Some(MoaSection {
                        strength: d,
                        holds: true,
                        lambda: Some(
                            lambda
                                .into_iter()
                                .map(|(columns, value)| LambdaJson { columns, value })
                                .collect(),
                        ),
                        witness: None,
                    });
                    if let Some(path) = &args.moa_out {
                        write_moa(path, &array)?;
                    }
                }
                StrengthCheck::Fails(w) => {
                    moa_section = Some(MoaSection {
                        strength: d,
                        holds: false,
                        lambda: None,
                        witness: Some(StrengthWitnessJson {
                            columns: w.columns,
                            tuple_a: w.tuple_a,
                            count_a: w.count_a,
                            tuple_b: w.tuple_b,
                            count_b: w.count_b,
                        }),
                    });
                    failure = Some(format!("strength {d} fails"));
                }
            }
        }
    }

    let out = VerifyReport {
        check_transversal: CheckSection {
            ok: check_ok,
            witnesses: report
                .witnesses
                .iter()
                .map(|w| WitnessJson {
                    subset: w.subset.clone(),
                    fixed: w.fixed.clone(),
                    observed: w.observed,
                    bound: w.bound,
                })
                .collect(),
        },
        size: t.size(),
        simple: t.is_simple(),
        full,
        tight_subsets: tight,
        constant_ratio: ratio_ok,
        moa: moa_section,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&out).expect("report serializes")
    );
    match failure {
        None => Ok(()),
        Some(msg) => Err(CliError::Verify(msg)),
    }
}

#[derive(Serialize)]
struct SolveJson {
    weight: String,
    node_count: u64,
    optimal: bool,
}

fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    let loaded = read_params(&args.params)?;
    let m = loaded.part_sizes.ok_or_else(|| {
        CliError::Parse(format!(
            "{} needs part sizes \"m\" for the weight function",
            args.params.display()
        ))
    })?;
    let mode = match args.mode {
        SolveModeArg::Exhaustive => SolveMode::Exhaustive,
        SolveModeArg::Bnb => SolveMode::BranchAndBound,
    };
    let result = max_weight_transversal(&loaded.params, &m, mode).map_err(|e| match e {
        Error::ScaleGuard(msg) => CliError::Scale(msg),
        other => CliError::Construct(other.to_string()),
    })?;
    write_transversal(&args.out, &result.best)?;
    let json = SolveJson {
        weight: result.weight.to_string(),
        node_count: result.node_count,
        optimal: result.optimal,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&json).expect("report serializes")
    );
    Ok(())
}

#[derive(Serialize)]
struct TransversalEntryJson {
    v: Vec<usize>,
    mult: u64,
}

#[derive(Serialize)]
struct ExtremeJson {
    transversal: Vec<TransversalEntryJson>,
    s_matrix: Vec<MatrixEntry>,
}

#[derive(Serialize)]
struct DecomposeTermJson {
    coefficient: String,
    transversal: Vec<TransversalEntryJson>,
}

#[derive(Serialize)]
struct DecomposeJson {
    feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    terms: Option<Vec<DecomposeTermJson>>,
}

fn transversal_entries(t: &MultiTransversal) -> Vec<TransversalEntryJson> {
    t.entries()
        .map(|(v, mult)| TransversalEntryJson {
            v: v.coords().to_vec(),
            mult,
        })
        .collect()
}

fn cmd_hull(args: HullArgs) -> Result<(), CliError> {
    let loaded = read_params(&args.params)?;
    let p = &loaded.params;
    // Without explicit caps the candidate class is the simple one.
    let constraint = loaded
        .constraint
        .unwrap_or_else(|| MultiplicityConstraint::simplicity(p.dims()));

    if let Some(target_path) = &args.decompose {
        let target = read_matrix(target_path)?;
        if target.dims() != p.dims() {
            return Err(CliError::Parse(format!(
                "{} lives on a different box",
                target_path.display()
            )));
        }
        let candidates = enumerate_transversals(p, &constraint, false).map_err(|e| match e {
            Error::SearchSpace(msg) => CliError::Scale(msg),
            other => CliError::Construct(other.to_string()),
        })?;
        let mats: Vec<_> = candidates.iter().map(s_matrix).collect();
        match convex_decomposition(&target, &mats) {
            Some(lambda) => {
                let terms: Vec<DecomposeTermJson> = lambda
                    .iter()
                    .zip(&candidates)
                    .filter(|(c, _)| !num_traits::Zero::is_zero(*c))
                    .map(|(c, cand)| DecomposeTermJson {
                        coefficient: c.to_string(),
                        transversal: transversal_entries(cand),
                    })
                    .collect();
                let json = DecomposeJson {
                    feasible: true,
                    terms: Some(terms),
                };
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json).expect("report serializes")
                );
                Ok(())
            }
            None => {
                let json = DecomposeJson {
                    feasible: false,
                    terms: None,
                };
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json).expect("report serializes")
                );
                Err(CliError::Verify("infeasible".into()))
            }
        }
    } else if args.extreme {
        let detail = extreme_candidates(p, &constraint).map_err(|e| match e {
            Error::SearchSpace(msg) => CliError::Scale(msg),
            other => CliError::Construct(other.to_string()),
        })?;
        let out: Vec<ExtremeJson> = detail
            .into_iter()
            .filter(|(_, _, extreme)| *extreme)
            .map(|(cand, mat, _)| ExtremeJson {
                transversal: transversal_entries(&cand),
                s_matrix: matrix_to_entries(&mat),
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("report serializes")
        );
        Ok(())
    } else {
        Err(CliError::Parse(
            "hull needs --extreme or --decompose FILE".into(),
        ))
    }
}
