//! Command-line driver and the reusable source-to-report pipeline.
//!
//! Exit codes: 0 when the analysis ran and every assert was proved, 1 when
//! the analysis ran but some assert stayed unknown, 2 on configuration,
//! parse or analysis errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::ast::{CondDisplay, ExprDisplay, Program, Stmt};
use crate::bound::{Coefficient, OverflowError, Rational};
use crate::cfg::{build_cfg, interleave, FlowGraph, Label, ProductCfg};
use crate::domain::{AbstractElement, NormalizedElement};
use crate::engine::{
    self, AnalysisOptions, AnalysisResult, CoeffMode, DomainKind, Verdict,
};
use crate::parser::ParseError;
use crate::render::{self, Report};

/// Everything that can go wrong between a source string and a report.
#[derive(Debug, thiserror::Error)]
pub enum SourceError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("init block only supports assignments and skip")]
    UnsupportedInit,
    #[error("analysis aborted: {0}")]
    Overflow(#[from] OverflowError),
}

/// A finished analysis of one source text.
pub struct SourceAnalysis {
    pub report: Report,
    pub all_proved: bool,
}

/// Parses, builds the interleaving product, runs the requested analysis and
/// renders the report structure. This is the whole pipeline behind both the
/// command-line driver and the C interface.
pub fn analyze_source(
    source: &str,
    opts: &AnalysisOptions,
    compare: bool,
    dump_cfg: bool,
) -> Result<SourceAnalysis, SourceError> {
    let program = crate::parser::parse_program(source)?;
    for stmt in &program.init {
        if !matches!(stmt, Stmt::Assign { .. } | Stmt::Skip) {
            return Err(SourceError::UnsupportedInit);
        }
    }
    let cfgs: Vec<_> = program
        .processes
        .iter()
        .map(|p| build_cfg(&p.body))
        .collect();
    let product = interleave(&cfgs);
    match opts.coefficients {
        CoeffMode::Integer => {
            analyze_product::<i64>(&program, &product, opts, compare, dump_cfg)
        }
        CoeffMode::Rational => {
            analyze_product::<Rational>(&program, &product, opts, compare, dump_cfg)
        }
    }
}

fn analyze_product<C: Coefficient>(
    program: &Program,
    product: &ProductCfg,
    opts: &AnalysisOptions,
    compare: bool,
    dump_cfg: bool,
) -> Result<SourceAnalysis, SourceError> {
    let labels: Vec<String> = (0..product.num_nodes())
        .map(|n| product.point_label(n))
        .collect();
    let names = &program.vars;

    let cfg_dump = dump_cfg.then(|| dump_product(product, program));

    let mut compare_rows = None;
    let (points, asserts) = if compare {
        let (dbm, boxes, rows) = engine::compare_domains::<C>(program, product, opts)?;
        compare_rows = Some(
            rows.iter()
                .map(|r| render::CompareRowJson {
                    point: r.point.clone(),
                    var: r.var.clone(),
                    dbm: r.dbm.clone(),
                    interval: r.interval.clone(),
                    contained: r.contained,
                })
                .collect::<Vec<_>>(),
        );
        match opts.domain {
            DomainKind::Dbm => {
                let norm = normalize_result(&dbm)?;
                (render::dbm_points(&norm, &labels, names), dbm.asserts)
            }
            DomainKind::Interval => {
                (render::box_points(&boxes, &labels, names), boxes.asserts)
            }
        }
    } else {
        match opts.domain {
            DomainKind::Dbm => {
                let init = engine::initial_state::<AbstractElement<C>>(program)?;
                let result = engine::analyze(product, init, opts)?;
                let norm = normalize_result(&result)?;
                (render::dbm_points(&norm, &labels, names), result.asserts)
            }
            DomainKind::Interval => {
                let init = engine::initial_state::<crate::boxdom::BoxEnv<C>>(program)?;
                let result = engine::analyze(product, init, opts)?;
                (render::box_points(&result, &labels, names), result.asserts)
            }
        }
    };

    let all_proved = asserts.iter().all(|a| a.verdict == Verdict::Proved);
    let report = Report {
        points,
        asserts: render::asserts_json(&asserts),
        domain: match opts.domain {
            DomainKind::Dbm => "dbm".to_string(),
            DomainKind::Interval => "interval".to_string(),
        },
        options: render::OptionsJson {
            widening_delay: opts.widening_delay,
            descending_steps: opts.descending_steps,
            coefficients: match opts.coefficients {
                CoeffMode::Integer => "integer".to_string(),
                CoeffMode::Rational => "rational".to_string(),
            },
        },
        cfg: cfg_dump,
        compare: compare_rows,
    };
    Ok(SourceAnalysis { report, all_proved })
}

fn normalize_result<C: Coefficient>(
    result: &AnalysisResult<AbstractElement<C>>,
) -> Result<AnalysisResult<NormalizedElement<C>>, OverflowError> {
    let values = result
        .values
        .iter()
        .map(|v| v.normalize())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AnalysisResult {
        values,
        asserts: result.asserts.clone(),
    })
}

fn dump_product(product: &ProductCfg, program: &Program) -> Vec<String> {
    let mut lines = Vec::new();
    lines.push(format!(
        "points: {} (entry {})",
        product.num_nodes(),
        product.point_label(product.entry())
    ));
    for e in product.edges() {
        let label = match &e.label {
            Label::Skip => "skip".to_string(),
            Label::Assign { var, expr } => format!(
                "{} <- {}",
                program.var_name(*var),
                ExprDisplay { e: expr, vars: &program.vars }
            ),
            Label::Guard(c) => format!("guard {}", CondDisplay { c, vars: &program.vars }),
        };
        lines.push(format!(
            "{} -> {} [{}]",
            product.point_label(e.src),
            product.point_label(e.dst),
            label
        ));
    }
    lines
}

#[derive(Parser)]
#[command(name = "diffbound", version, about = "Difference-bound invariant analyzer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a program and print the invariant at every control point.
    Analyze(AnalyzeArgs),
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    /// Input program.
    input: PathBuf,
    /// Abstract domain to run.
    #[arg(long, value_enum, default_value_t = DomainArg::Dbm)]
    domain: DomainArg,
    /// Plain joins at a widening point before widening starts.
    #[arg(long, default_value_t = 1)]
    widening_delay: usize,
    /// Cap on descending (narrowing) sweeps.
    #[arg(long, default_value_t = 2)]
    descending_steps: usize,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Run both domains and report per-variable containment.
    #[arg(long)]
    compare: bool,
    /// Also emit the interleaving product graph.
    #[arg(long)]
    dump_cfg: bool,
    /// Use exact rational coefficients instead of checked 64-bit integers.
    #[arg(long)]
    rational: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DomainArg {
    Dbm,
    Interval,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

/// Runs the CLI against `argv` (including the program name), writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_cli<W: Write, E: Write>(argv: &[String], out: &mut W, err: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // Help and version requests are successful terminations.
            return if e.use_stderr() {
                let _ = writeln!(err, "{e}");
                2
            } else {
                let _ = write!(out, "{e}");
                0
            };
        }
    };
    let Command::Analyze(args) = cli.command;

    let source = match std::fs::read_to_string(&args.input) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", args.input.display());
            return 2;
        }
    };
    let opts = AnalysisOptions {
        domain: match args.domain {
            DomainArg::Dbm => DomainKind::Dbm,
            DomainArg::Interval => DomainKind::Interval,
        },
        widening_delay: args.widening_delay,
        descending_steps: args.descending_steps,
        coefficients: if args.rational {
            CoeffMode::Rational
        } else {
            CoeffMode::Integer
        },
    };

    let analysis = match analyze_source(&source, &opts, args.compare, args.dump_cfg) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", args.input.display());
            return 2;
        }
    };

    match args.format {
        FormatArg::Text => {
            let _ = write!(out, "{}", render::report_text(&analysis.report));
        }
        FormatArg::Json => {
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&analysis.report).expect("report serializes")
            );
        }
    }
    if let Some(rows) = &analysis.report.compare {
        let violations = rows.iter().filter(|r| !r.contained).count();
        if violations > 0 {
            let _ = writeln!(err, "warning: {violations} containment violations");
        }
    }
    if analysis.all_proved {
        0
    } else {
        1
    }
}
