//! `rexlab`: parse, reduce, translate and check explicit-substitution terms.

use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rexlab::engine::{normalize, NormalizeError, Rewritable, Trace, TraceJson, DEFAULT_CLASS_CAP};
use rexlab::meta_ops;
use rexlab::testgen::{
    enumerate, run_suite, summary_table, EnumSpec, PropertyReport, RandomConfig, ReportStatus, SuiteConfig, SuiteId,
    DEFAULT_SEED,
};
use rexlab::translate::{u_list, u_uniform, w_list, w_uniform};
use rexlab::{parse_indexed, parse_named, CalculusId, NamedTerm, Strategy, Term, VarList, World};

const EXIT_USAGE: u8 = 1;
const EXIT_BOUND: u8 = 2;
const EXIT_SUITE: u8 = 3;

#[derive(Parser)]
#[command(name = "rexlab", version, about = "Explicit-substitution calculi workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WorldArg {
    Indexed,
    Named,
}

impl From<WorldArg> for World {
    fn from(w: WorldArg) -> World {
        match w {
            WorldArg::Indexed => World::Indexed,
            WorldArg::Named => World::Named,
        }
    }
}

#[derive(Args)]
struct Input {
    /// Term text; read from --file or standard input when absent.
    term: Option<String>,
    #[arg(long, conflicts_with = "term")]
    file: Option<PathBuf>,
}

impl Input {
    fn read(&self) -> Result<String, String> {
        match (&self.term, &self.file) {
            (Some(t), _) => Ok(t.clone()),
            (None, Some(p)) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display())),
            (None, None) => {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s).map_err(|e| e.to_string())?;
                Ok(s)
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a term and print it in canonical form.
    Parse {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "indexed")]
        world: WorldArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Reduce a term to normal form.
    #[command(alias = "normalize")]
    Reduce {
        #[command(flatten)]
        input: Input,
        #[arg(long, short, value_parser = parse_calculus)]
        calculus: CalculusId,
        #[arg(long, short, default_value = "leftmost-outermost", value_parser = parse_strategy)]
        strategy: Strategy,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
        #[arg(long, default_value_t = DEFAULT_CLASS_CAP)]
        class_cap: usize,
        /// Include every step.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Translate between indexed and named terms.
    Translate {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        to: WorldArg,
        /// Comma-separated variable list; defaults to the uniform x1, x2, ...
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate a meta-operator, e.g. `meta swap 1 "1 2"`.
    Meta {
        #[arg(value_enum)]
        op: MetaOp,
        /// Operator arguments, numbers first, terms last.
        #[arg(required = true, num_args = 1..)]
        args: Vec<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the free variables of a term.
    Fv {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "indexed")]
        world: WorldArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run a property suite, or `all`.
    Check {
        suite: String,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        fv: Option<u32>,
        #[arg(long)]
        sub_size: Option<usize>,
        #[arg(long)]
        max_n: Option<u32>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        max_steps: Option<usize>,
        /// Sample the primary universe instead of enumerating it.
        #[arg(long)]
        random: bool,
        #[arg(long, requires = "random")]
        cases: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Report path; defaults to rexlab-report-<suite>.json.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// List every term of a universe.
    Enumerate {
        #[arg(long, value_enum, default_value = "indexed")]
        world: WorldArg,
        #[arg(long)]
        max_size: usize,
        #[arg(long, default_value_t = 0)]
        fv: u32,
        #[arg(long)]
        closures: bool,
        /// Allow metavariables decorated with at most this many variables.
        #[arg(long)]
        metavars: Option<usize>,
        /// Print only the number of terms.
        #[arg(long)]
        count: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetaOp {
    /// update K I TERM
    Update,
    /// increment I TERM
    #[value(alias = "inc")]
    Increment,
    /// swap I TERM
    Swap,
    /// decrement I TERM
    #[value(alias = "dec")]
    Decrement,
    /// stacked-swap I J TERM
    StackedSwap,
    /// stacked-increment I TERM
    StackedIncrement,
    /// db-subst TERM N TERM
    DbSubst,
    /// r-subst TERM TERM
    RSubst,
    /// named-subst TERM X TERM
    NamedSubst,
}

fn parse_calculus(s: &str) -> Result<CalculusId, String> {
    s.parse()
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse()
}

/// Failure of a command, with its exit status.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure { code: EXIT_USAGE, message: message.to_string() }
}

type Outcome = Result<u8, Failure>;

fn emit(format: Format, text: impl FnOnce() -> String, value: impl FnOnce() -> Value) {
    match format {
        Format::Text => println!("{}", text()),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value()).expect("serialisable")),
    }
}

fn indexed(s: &str) -> Result<Term, Failure> {
    parse_indexed(s).map_err(usage)
}

fn named(s: &str) -> Result<NamedTerm, Failure> {
    parse_named(s).map_err(usage)
}

fn number(s: &str) -> Result<u32, Failure> {
    s.parse().map_err(|_| usage(format!("expected a natural number, got '{s}'")))
}

fn cmd_parse(input: &Input, world: WorldArg, format: Format) -> Outcome {
    let text = input.read().map_err(usage)?;
    let (printed, size, fv) = match world {
        WorldArg::Indexed => {
            let t = indexed(&text)?;
            (t.to_string(), rexlab::term::Tree::size(&t), json!(t.fv().iter().collect::<Vec<_>>()))
        }
        WorldArg::Named => {
            let t = named(&text)?;
            (t.to_string(), rexlab::term::Tree::size(&t), json!(t.fv().iter().collect::<Vec<_>>()))
        }
    };
    emit(format, || printed.clone(), || json!({ "world": World::from(world), "term": printed, "size": size, "fv": fv }));
    Ok(0)
}

fn report_trace<T: Rewritable>(trace: &Trace<T>, with_steps: bool, format: Format) {
    let j = TraceJson::from(trace);
    emit(
        format,
        || {
            let mut out = String::new();
            if with_steps {
                out.push_str(&format!("   {}\n", trace.initial));
                for s in &trace.steps {
                    let eqs = if s.equations.is_empty() {
                        String::new()
                    } else {
                        let ps: Vec<String> = s.equations.iter().map(|p| p.to_string()).collect();
                        format!(" after equation moves at {}", ps.join(", "))
                    };
                    out.push_str(&format!("-> {}   [{} at {}{}]\n", s.after, s.rule, s.position, eqs));
                }
            }
            out.push_str(&trace.result.to_string());
            out
        },
        || {
            json!({
                "result": j.result,
                "status": j.status,
                "steps": j.steps.len(),
                "trace": if with_steps { serde_json::to_value(&j).expect("serialisable") } else { Value::Null },
            })
        },
    );
}

fn reduce_in<T: Rewritable>(
    t: T,
    calc: CalculusId,
    strategy: Strategy,
    max_steps: usize,
    cap: usize,
    trace: bool,
    format: Format,
) -> Outcome {
    match normalize(calc, strategy, &t, max_steps, cap) {
        Ok(tr) => {
            report_trace(&tr, trace, format);
            Ok(0)
        }
        Err(NormalizeError::BoundExceeded(tr)) => {
            report_trace(&tr, trace, format);
            eprintln!("rexlab: no normal form within {max_steps} steps");
            Ok(EXIT_BOUND)
        }
        Err(NormalizeError::Engine(e)) => Err(Failure { code: EXIT_BOUND, message: e.to_string() }),
    }
}

fn cmd_translate(input: &Input, to: WorldArg, vars: &Option<Vec<String>>, format: Format) -> Outcome {
    let text = input.read().map_err(usage)?;
    let list = vars.as_ref().map(|v| v.iter().map(|s| s.trim().to_string()).collect::<Vec<_>>());
    let out = match to {
        WorldArg::Named => {
            let a = indexed(&text)?;
            match list {
                Some(xs) => u_list(&VarList::new(xs), &a).map_err(usage)?.to_string(),
                None => u_uniform(&a).to_string(),
            }
        }
        WorldArg::Indexed => {
            let t = named(&text)?;
            match list {
                Some(xs) => w_list(&VarList::new(xs), &t),
                None => w_uniform(&t),
            }
            .map_err(usage)?
            .to_string()
        }
    };
    emit(format, || out.clone(), || json!({ "world": World::from(to), "term": out }));
    Ok(0)
}

fn cmd_meta(op: MetaOp, args: &[String], format: Format) -> Outcome {
    let arity = match op {
        MetaOp::Update | MetaOp::StackedSwap | MetaOp::DbSubst | MetaOp::NamedSubst => 3,
        MetaOp::RSubst | MetaOp::Increment | MetaOp::Swap | MetaOp::Decrement | MetaOp::StackedIncrement => 2,
    };
    if args.len() != arity {
        return Err(usage(format!("this operator takes {arity} arguments, got {}", args.len())));
    }
    let positive = |s: &str| {
        number(s).and_then(|n| if n == 0 { Err(usage("index arguments start at 1")) } else { Ok(n) })
    };
    let out = match op {
        MetaOp::Update => {
            meta_ops::update(number(&args[0])?, positive(&args[1])?, &indexed(&args[2])?).map_err(usage)?.to_string()
        }
        MetaOp::Increment => meta_ops::increment(number(&args[0])?, &indexed(&args[1])?).to_string(),
        MetaOp::Swap => meta_ops::swap(positive(&args[0])?, &indexed(&args[1])?).to_string(),
        MetaOp::Decrement => {
            meta_ops::decrement(positive(&args[0])?, &indexed(&args[1])?).map_err(usage)?.to_string()
        }
        MetaOp::StackedSwap => {
            meta_ops::stacked_swap(positive(&args[0])?, number(&args[1])?, &indexed(&args[2])?).to_string()
        }
        MetaOp::StackedIncrement => meta_ops::stacked_increment(number(&args[0])?, &indexed(&args[1])?).to_string(),
        MetaOp::DbSubst => meta_ops::db_subst(&indexed(&args[0])?, positive(&args[1])?, &indexed(&args[2])?)
            .map_err(usage)?
            .to_string(),
        MetaOp::RSubst => meta_ops::r_subst(&indexed(&args[0])?, &indexed(&args[1])?).map_err(usage)?.to_string(),
        MetaOp::NamedSubst => {
            meta_ops::named_subst(&named(&args[0])?, &args[1], &named(&args[2])?).map_err(usage)?.to_string()
        }
    };
    emit(format, || out.clone(), || json!({ "term": out }));
    Ok(0)
}

fn cmd_fv(input: &Input, world: WorldArg, format: Format) -> Outcome {
    let text = input.read().map_err(usage)?;
    let (shown, items) = match world {
        WorldArg::Indexed => {
            let fv = indexed(&text)?.fv();
            (fv.to_string(), json!(fv.iter().collect::<Vec<_>>()))
        }
        WorldArg::Named => {
            let fv = named(&text)?.fv();
            (fv.to_string(), json!(fv.iter().collect::<Vec<_>>()))
        }
    };
    emit(format, || shown.clone(), || json!({ "fv": items }));
    Ok(0)
}

fn seed_from_env() -> Result<u64, Failure> {
    match std::env::var("REXLAB_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| usage(format!("REXLAB_SEED is not a number: '{s}'"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_check(
    suite: &str,
    size: Option<usize>,
    fv: Option<u32>,
    sub_size: Option<usize>,
    max_n: Option<u32>,
    depth: Option<usize>,
    max_steps: Option<usize>,
    random: bool,
    cases: Option<usize>,
    seed: Option<u64>,
    report: &Option<PathBuf>,
    format: Format,
) -> Outcome {
    let ids: Vec<SuiteId> = if suite.eq_ignore_ascii_case("all") {
        SuiteId::ALL.to_vec()
    } else {
        vec![suite.parse().map_err(usage)?]
    };
    let seed = match seed {
        Some(s) => s,
        None => seed_from_env()?,
    };
    let d = SuiteConfig::default();
    let cfg = SuiteConfig {
        size,
        fv,
        sub_size: sub_size.unwrap_or(d.sub_size),
        max_n: max_n.unwrap_or(d.max_n),
        depth: depth.unwrap_or(d.depth),
        max_steps: max_steps.unwrap_or(d.max_steps),
        random: random.then(|| RandomConfig { cases: cases.unwrap_or(10_000), ..RandomConfig::with_seed(seed) }),
        ..d
    };
    let reports: Vec<PropertyReport> = ids
        .iter()
        .map(|&id| {
            // the parse round trip always samples; honour the seed there too
            let cfg = if id == SuiteId::ParseRoundtrip && cfg.random.is_none() {
                SuiteConfig { random: Some(RandomConfig::with_seed(seed)), ..cfg.clone() }
            } else {
                cfg.clone()
            };
            run_suite(id, &cfg)
        })
        .collect();
    let path = report.clone().unwrap_or_else(|| PathBuf::from(format!("rexlab-report-{}.json", suite)));
    let body = if reports.len() == 1 { json!(reports[0]) } else { json!(reports) };
    std::fs::write(&path, serde_json::to_string_pretty(&body).expect("serialisable") + "\n")
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    emit(format, || summary_table(&reports), || body.clone());
    println!("report: {}", path.display());
    Ok(if reports.iter().any(|r| r.status == ReportStatus::Fail) {
        EXIT_SUITE
    } else if reports.iter().any(|r| r.status == ReportStatus::BoundExceeded) {
        EXIT_BOUND
    } else {
        0
    })
}

fn cmd_enumerate(
    world: WorldArg,
    max_size: usize,
    fv: u32,
    closures: bool,
    metavars: Option<usize>,
    count: bool,
    format: Format,
) -> Outcome {
    let mut spec = EnumSpec { world: world.into(), ..EnumSpec::indexed(max_size, fv).closures(closures) };
    if let Some(d) = metavars {
        spec = spec.metavars(d);
    }
    let terms: Vec<String> = enumerate(&spec).iter().map(|t| t.to_string()).collect();
    if count {
        emit(format, || terms.len().to_string(), || json!({ "count": terms.len() }));
    } else {
        emit(format, || terms.join("\n"), || json!({ "count": terms.len(), "terms": terms }));
    }
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Parse { input, world, format } => cmd_parse(&input, world, format),
        Command::Reduce { input, calculus, strategy, max_steps, class_cap, trace, format } => {
            let text = input.read().map_err(usage)?;
            match calculus.world() {
                World::Indexed => {
                    reduce_in(indexed(&text)?, calculus, strategy, max_steps, class_cap, trace, format)
                }
                World::Named => reduce_in(named(&text)?, calculus, strategy, max_steps, class_cap, trace, format),
            }
        }
        Command::Translate { input, to, vars, format } => cmd_translate(&input, to, &vars, format),
        Command::Meta { op, args, format } => cmd_meta(op, &args, format),
        Command::Fv { input, world, format } => cmd_fv(&input, world, format),
        Command::Check { suite, size, fv, sub_size, max_n, depth, max_steps, random, cases, seed, report, format } => {
            cmd_check(&suite, size, fv, sub_size, max_n, depth, max_steps, random, cases, seed, &report, format)
        }
        Command::Enumerate { world, max_size, fv, closures, metavars, count, format } => {
            cmd_enumerate(world, max_size, fv, closures, metavars, count, format)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("rexlab: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
