use std::io::{self, BufWriter, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lyagraph::check::{check, Target};
use lyagraph::enumerate::{
    enumerate_graphs, random_graph, EnumerationBounds, EnumerationError, Labelling,
    RealizableCount,
};
use lyagraph::graph::{LyapunovGraph, VertexLabel};
use lyagraph::io::json::render_json_compact;
use lyagraph::io::report::{render_explanation, render_invariants, render_report, RenderMode};
use lyagraph::io::{parse_document, render_graph, GraphDocument, SourceFormat};
use lyagraph::linalg::{IntMatrix, MatrixError};
use lyagraph::sft::invariant_report;

const EXIT_REALIZABLE: u8 = 0;
const EXIT_NOT_REALIZABLE: u8 = 1;
const EXIT_INVALID: u8 = 2;

/// Decide whether abstract Lyapunov graphs are realizable by Smale flows on
/// S2xS1 or S3.
#[derive(Parser)]
#[command(name = "lyagraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph. Exit code 0: realizable, 1: not realizable, 2: invalid input.
    Check {
        /// Graph file in the DSL or JSON format, or `-` for stdin.
        file: String,
        #[arg(long, value_parser = parse_target)]
        target: Target,
        #[arg(long)]
        json: bool,
    },
    /// Like `check`, with the per-vertex data behind each verdict.
    Explain {
        file: String,
        #[arg(long, value_parser = parse_target)]
        target: Target,
    },
    /// Matrix invariants of a file holding a single subshift vertex.
    Invariants {
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate every graph within the bounds and check each one.
    Enumerate {
        #[command(flatten)]
        bounds: BoundsArgs,
        #[arg(long, value_parser = parse_target)]
        target: Target,
        /// Print only the totals.
        #[arg(long)]
        count_only: bool,
        /// Worker threads (defaults to the available parallelism).
        #[arg(long)]
        workers: Option<usize>,
        /// JSON lines instead of DSL.
        #[arg(long)]
        json: bool,
    },
    /// Print a seeded random graph.
    Random {
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        bounds: BoundsArgs,
        #[arg(long, value_enum, default_value_t = Format::Dsl)]
        format: Format,
    },
    /// Rewrite a graph; `--reverse` reverses time.
    Transform {
        #[arg(long, required = true)]
        reverse: bool,
        file: String,
        /// Output format (defaults to the input format).
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    max_vertices: usize,
    #[arg(long)]
    max_weight: u32,
    /// Largest number of parallel edges between two vertices.
    #[arg(long, default_value_t = 1)]
    max_parallel: usize,
    /// File of subshift vertex declarations replacing the default matrix pool.
    #[arg(long)]
    matrices: Option<String>,
    /// Restrict labels to those that fit each vertex's role.
    #[arg(long)]
    role_compatible: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dsl,
    Json,
}

impl From<Format> for SourceFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Dsl => SourceFormat::Dsl,
            Format::Json => SourceFormat::Json,
        }
    }
}

fn parse_target(s: &str) -> Result<Target, String> {
    s.parse().map_err(|e: lyagraph::check::UnknownTarget| e.to_string())
}

enum Failure {
    Message(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<MatrixError> for Failure {
    fn from(e: MatrixError) -> Self {
        Failure::Message(e.to_string())
    }
}

impl From<EnumerationError> for Failure {
    fn from(e: EnumerationError) -> Self {
        Failure::Message(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn read_source(file: &str) -> Result<String, Failure> {
    let mut text = String::new();
    if file == "-" {
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Message(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(file).map_err(|e| Failure::Message(format!("{file}: {e}")))?;
    }
    Ok(text)
}

fn load(file: &str) -> Result<GraphDocument, Failure> {
    let text = read_source(file)?;
    parse_document(&text).map_err(|e| Failure::Message(format!("{file}: {e}")))
}

fn emit(out: &mut impl Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn verdict_code(g: &LyapunovGraph, realizable: bool) -> u8 {
    if realizable {
        EXIT_REALIZABLE
    } else if g.validate_structure().is_valid() {
        EXIT_NOT_REALIZABLE
    } else {
        EXIT_INVALID
    }
}

fn run_check(out: &mut impl Write, file: &str, target: Target, json: bool) -> Outcome {
    let doc = load(file)?;
    let report = check(&doc.graph, target);
    let mode = if json { RenderMode::Json } else { RenderMode::Text };
    emit(out, &render_report(&report, mode))?;
    Ok(verdict_code(&doc.graph, report.realizable))
}

fn run_explain(out: &mut impl Write, file: &str, target: Target) -> Outcome {
    let doc = load(file)?;
    let report = check(&doc.graph, target);
    emit(out, &render_explanation(&doc.graph, &report))?;
    Ok(verdict_code(&doc.graph, report.realizable))
}

fn run_invariants(out: &mut impl Write, file: &str, json: bool) -> Outcome {
    let doc = load(file)?;
    let g = &doc.graph;
    let matrix = match (g.vertices(), g.edges().is_empty()) {
        ([v], true) => match &v.label {
            VertexLabel::SuspensionSft { matrix } => matrix.clone(),
            _ => return Err(Failure::Message(format!("{file}: vertex {} is not a subshift", v.id))),
        },
        _ => {
            return Err(Failure::Message(format!(
                "{file}: expected a single subshift vertex and no edges"
            )))
        }
    };
    let report = invariant_report(&matrix)?;
    let mode = if json { RenderMode::Json } else { RenderMode::Text };
    emit(out, &render_invariants(&matrix, &report, mode))?;
    Ok(EXIT_REALIZABLE)
}

fn load_matrices(file: &str) -> Result<Vec<IntMatrix>, Failure> {
    let doc = load(file)?;
    if !doc.graph.edges().is_empty() {
        return Err(Failure::Message(format!("{file}: a matrix file may not declare edges")));
    }
    doc.graph
        .vertices()
        .iter()
        .map(|v| match &v.label {
            VertexLabel::SuspensionSft { matrix } => Ok(matrix.clone()),
            _ => Err(Failure::Message(format!("{file}: vertex {} is not a subshift", v.id))),
        })
        .collect()
}

fn build_bounds(args: &BoundsArgs) -> Result<EnumerationBounds, Failure> {
    let mut bounds = EnumerationBounds::new(args.max_vertices, args.max_weight)
        .with_parallel_edges(args.max_parallel);
    if let Some(file) = &args.matrices {
        bounds = bounds.with_pool(EnumerationBounds::pool_with_matrices(load_matrices(file)?));
    }
    if args.role_compatible {
        bounds = bounds.with_labelling(Labelling::RoleCompatible);
    }
    if let Ok(value) = std::env::var("LYAGRAPH_BUDGET") {
        let budget = value
            .trim()
            .parse()
            .map_err(|_| Failure::Message(format!("LYAGRAPH_BUDGET: not a count: {value:?}")))?;
        bounds = bounds.with_budget(budget);
    }
    bounds.validate()?;
    Ok(bounds)
}

fn run_enumerate(
    out: &mut impl Write,
    args: &BoundsArgs,
    target: Target,
    count_only: bool,
    workers: Option<usize>,
    json: bool,
) -> Outcome {
    let bounds = build_bounds(args)?;
    let plan = enumerate_graphs(&bounds)?;
    let workers = workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1);

    let totals = if count_only {
        let counts = plan.par_map_blocks(workers, |block| {
            block.fold(RealizableCount::default(), |acc, g| {
                acc + RealizableCount {
                    total: 1,
                    realizable: u64::from(check(&g, target).realizable),
                }
            })
        });
        counts.into_iter().fold(RealizableCount::default(), |a, b| a + b)
    } else {
        // Blocks are rendered in parallel batches and written in order so
        // the output is identical for any worker count.
        let mut totals = RealizableCount::default();
        let batch = workers * 4;
        for start in (0..plan.block_count()).step_by(batch) {
            let end = (start + batch).min(plan.block_count());
            let rendered: Vec<Vec<(bool, String)>> = std::thread::scope(|scope| {
                let handles: Vec<_> = (0..workers.min(end - start))
                    .map(|w| {
                        let plan = &plan;
                        scope.spawn(move || {
                            (start + w..end)
                                .step_by(workers)
                                .map(|i| {
                                    plan.block(i)
                                        .map(|g| {
                                            let ok = check(&g, target).realizable;
                                            let text = if json {
                                                render_json_compact(&g)
                                            } else {
                                                render_graph(&g, SourceFormat::Dsl)
                                            };
                                            (ok, text)
                                        })
                                        .collect::<Vec<_>>()
                                })
                                .collect::<Vec<_>>()
                        })
                    })
                    .collect();
                let mut per_worker: Vec<_> = handles
                    .into_iter()
                    .map(|h| h.join().expect("enumeration worker panicked").into_iter())
                    .collect();
                (0..end - start)
                    .map(|i| per_worker[i % workers].next().expect("one result per block"))
                    .collect()
            });
            for (ok, text) in rendered.into_iter().flatten() {
                totals.total += 1;
                totals.realizable += u64::from(ok);
                if json {
                    writeln!(
                        out,
                        "{{\"index\":{},\"realizable\":{ok},\"graph\":{text}}}",
                        totals.total
                    )?;
                } else {
                    let word = if ok { "realizable" } else { "not realizable" };
                    writeln!(out, "# graph {}: {word} on {target}", totals.total)?;
                    writeln!(out, "{text}")?;
                }
            }
        }
        totals
    };

    if json {
        let summary = serde_json::json!({
            "target": target.name(),
            "max_vertices": bounds.max_vertices,
            "max_weight": bounds.max_weight,
            "max_parallel_edges": bounds.max_parallel_edges,
            "role_compatible": bounds.labelling == Labelling::RoleCompatible,
            "total": totals.total,
            "realizable": totals.realizable,
        });
        writeln!(out, "{summary}")?;
    } else {
        let prefix = if count_only { "" } else { "# " };
        writeln!(out, "{prefix}graphs: {}", totals.total)?;
        writeln!(out, "{prefix}realizable on {target}: {}", totals.realizable)?;
    }
    Ok(EXIT_REALIZABLE)
}

fn run_random(out: &mut impl Write, seed: u64, args: &BoundsArgs, format: Format) -> Outcome {
    let bounds = build_bounds(args)?;
    let g = random_graph(seed, &bounds)?;
    emit(out, &render_graph(&g, format.into()))?;
    Ok(EXIT_REALIZABLE)
}

fn run_transform(out: &mut impl Write, file: &str, format: Option<Format>) -> Outcome {
    let doc = load(file)?;
    let format = format.map_or(doc.format, SourceFormat::from);
    emit(out, &render_graph(&doc.graph.reverse(), format))?;
    Ok(EXIT_REALIZABLE)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let outcome = match &cli.command {
        Command::Check { file, target, json } => run_check(&mut out, file, *target, *json),
        Command::Explain { file, target } => run_explain(&mut out, file, *target),
        Command::Invariants { file, json } => run_invariants(&mut out, file, *json),
        Command::Enumerate {
            bounds,
            target,
            count_only,
            workers,
            json,
        } => run_enumerate(&mut out, bounds, *target, *count_only, *workers, *json),
        Command::Random {
            seed,
            bounds,
            format,
        } => run_random(&mut out, *seed, bounds, *format),
        Command::Transform { file, format, .. } => run_transform(&mut out, file, *format),
    };
    let outcome = outcome.and_then(|code| {
        out.flush()?;
        Ok(code)
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        // A closed pipe downstream (`| head`) is not an error.
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Message(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
