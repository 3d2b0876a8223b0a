use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cbpv::denot::{interp_comp, Model, ModelKind};
use cbpv::eval::{eval_unchecked, results};
use cbpv::fresh;
use cbpv::galois::{apply_map, rhs_term, MapDirection};
use cbpv::harness::{parse_witness, repro, run_suite, SuiteConfig};
use cbpv::order::DEFAULT_BUDGET;
use cbpv::source::text::{parse_context, parse_expr, parse_type};
use cbpv::source::{check_src, translate_checked, SrcContext, SrcExpr, SrcType, Strategy};
use cbpv::syntax::{CompTerm, CompType, EffectSignature};
use cbpv::text::{parse_comp, print_comp, print_comp_type};
use cbpv::typing::{check_comp, check_comp_any, TypingContext};

#[derive(Parser)]
#[command(name = "cbpv", version, about = "Call-by-push-value translations, evaluation and models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a closed computation and print its results.
    Eval {
        #[arg(long, default_value_t = 10_000)]
        fuel: u64,
        /// Reject effects outside this signature; by default every effect
        /// construct is accepted.
        #[arg(long)]
        sig: Option<EffectSignature>,
        /// Read FILE as a source expression and translate it first.
        #[arg(long)]
        source: Option<Strategy>,
        file: PathBuf,
    },
    /// Translate a source expression into a computation.
    Translate {
        #[arg(long, default_value = "cbv")]
        strategy: Strategy,
        /// Context file for open expressions.
        #[arg(long)]
        ctx: Option<PathBuf>,
        file: PathBuf,
    },
    /// Apply a syntactic map between the two translations to a computation.
    GaloisTerm {
        #[arg(long)]
        dir: MapDirection,
        #[arg(long = "type")]
        ty: String,
        file: PathBuf,
    },
    /// The call-by-name translation of a source expression, converted
    /// back to call-by-value typing.
    Rhs {
        #[arg(long)]
        ctx: Option<PathBuf>,
        file: PathBuf,
    },
    /// Print the denotation of a closed computation as a table.
    Denote {
        #[arg(long, default_value = "lift")]
        model: ModelKind,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Read FILE as a source expression and translate it first.
        #[arg(long)]
        source: Option<Strategy>,
        file: PathBuf,
    },
    /// Run every check for a model; JSON records go to stdout, one per
    /// line, and the summary to stderr.
    Suite {
        #[arg(long)]
        model: ModelKind,
        /// Types for the per-type checks, separated by `;`.
        #[arg(long, value_delimiter = ';')]
        types: Option<Vec<String>>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        fuel: Option<u64>,
        #[arg(long)]
        budget: Option<usize>,
        /// Inconclusive verdicts tolerated on a pure corpus.
        #[arg(long)]
        quota: Option<usize>,
        /// Print only the summary.
        #[arg(long)]
        summary_only: bool,
    },
    /// Re-run one recorded instance from a JSON witness.
    Repro {
        #[arg(long)]
        witness: PathBuf,
    },
}

type CliResult = Result<ExitCode, String>;

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_ctx(path: Option<&PathBuf>) -> Result<SrcContext, String> {
    match path {
        Some(p) => parse_context(&read(p)?).map_err(|e| e.to_string()),
        None => Ok(SrcContext::empty()),
    }
}

/// Types `e` under the smallest signature that accepts it.
fn infer_src(ctx: &SrcContext, e: &SrcExpr) -> Result<(SrcType, EffectSignature), String> {
    let mut last = None;
    for sig in EffectSignature::ALL {
        match check_src(ctx, e, sig) {
            Ok(ty) => return Ok((ty, sig)),
            Err(err) => last = Some(err),
        }
    }
    Err(last.map(|e| e.to_string()).unwrap_or_default())
}

fn load_comp(file: &Path, source: Option<Strategy>) -> Result<CompTerm, String> {
    let text = read(file)?;
    match source {
        None => parse_comp(&text).map_err(|e| e.to_string()),
        Some(strategy) => {
            let e = parse_expr(&text).map_err(|e| e.to_string())?;
            let (_, sig) = infer_src(&SrcContext::empty(), &e)?;
            let (m, _) = fresh::scoped(|| translate_checked(strategy, &SrcContext::empty(), &e, sig))
                .map_err(|e| e.to_string())?;
            Ok(m)
        }
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Eval {
            fuel,
            sig,
            source,
            file,
        } => {
            let m = load_comp(&file, source)?;
            let ty = match sig {
                Some(sig) => check_comp(&TypingContext::empty(), &m, sig),
                None => check_comp_any(&TypingContext::empty(), &m),
            }
            .map_err(|e| e.to_string())?;
            if matches!(ty, CompType::Free(_)) {
                let r = results(&m, fuel).map_err(|e| e.to_string())?;
                println!("results {}", r.render());
                println!("exhausted {}", r.exhausted);
            } else {
                let out = eval_unchecked(&m, fuel).map_err(|e| e.to_string())?;
                for t in &out.terminals {
                    println!("terminal {}", print_comp(t));
                }
                println!("exhausted {}", out.exhausted);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Translate { strategy, ctx, file } => {
            let ctx = read_ctx(ctx.as_ref())?;
            let e = parse_expr(&read(&file)?).map_err(|e| e.to_string())?;
            let (_, sig) = infer_src(&ctx, &e)?;
            let (m, ty) = fresh::scoped(|| translate_checked(strategy, &ctx, &e, sig)).map_err(|e| e.to_string())?;
            println!("{}", print_comp(&m));
            eprintln!(": {}", print_comp_type(&ty));
            Ok(ExitCode::SUCCESS)
        }
        Command::GaloisTerm { dir, ty, file } => {
            let ty = parse_type(&ty).map_err(|e| e.to_string())?;
            let m = parse_comp(&read(&file)?).map_err(|e| e.to_string())?;
            let out = fresh::scoped(|| apply_map(dir, &ty, &m));
            println!("{}", print_comp(&out));
            Ok(ExitCode::SUCCESS)
        }
        Command::Rhs { ctx, file } => {
            let ctx = read_ctx(ctx.as_ref())?;
            let e = parse_expr(&read(&file)?).map_err(|e| e.to_string())?;
            let (ty, _) = infer_src(&ctx, &e)?;
            let out = fresh::scoped(|| rhs_term(&ctx, &e, &ty));
            println!("{}", print_comp(&out));
            Ok(ExitCode::SUCCESS)
        }
        Command::Denote {
            model,
            budget,
            source,
            file,
        } => {
            let m = load_comp(&file, source)?;
            let model = Model::new(model, budget).map_err(|e| e.to_string())?;
            let ty = check_comp_any(&TypingContext::empty(), &m).map_err(|e| e.to_string())?;
            let table = interp_comp(&TypingContext::empty(), &m, &model).map_err(|e| e.to_string())?;
            println!("{} : {} in {}", print_comp(&m), print_comp_type(&ty), table.cod());
            print!("{table}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Suite {
            model,
            types,
            seed,
            count,
            fuel,
            budget,
            quota,
            summary_only,
        } => {
            let mut cfg = SuiteConfig::new(model);
            if let Some(types) = types {
                cfg.types = types
                    .iter()
                    .map(|t| parse_type(t.trim()).map_err(|e| format!("type `{t}`: {e}")))
                    .collect::<Result<_, _>>()?;
            }
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.count = count.unwrap_or(cfg.count);
            cfg.fuel = fuel.unwrap_or(cfg.fuel);
            cfg.budget = budget.unwrap_or(cfg.budget);
            cfg.inconclusive_quota = quota.unwrap_or(cfg.inconclusive_quota);
            let report = run_suite(&cfg).map_err(|e| e.to_string())?;
            if !summary_only {
                for r in &report.records {
                    println!("{}", serde_json::to_string(r).map_err(|e| e.to_string())?);
                }
            }
            eprint!("{}", report.render_summary());
            Ok(if report.is_success() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Repro { witness } => {
            let instance = parse_witness(&read(&witness)?).map_err(|e| e.to_string())?;
            let report = repro(&instance).map_err(|e| e.to_string())?;
            println!("{report}");
            Ok(if report.is_fail() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
