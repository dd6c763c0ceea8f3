use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use contrascale::adjust::{self, AdjustedSelection, InfluenceTable};
use contrascale::experiment::{
    self, Algorithm as BenchAlgorithm, ExperimentConfig, Method,
};
use contrascale::format::{self, Format};
use contrascale::lattice::{canonical_base, count_concepts, enumerate_concepts};
use contrascale::preprocess::{self, clarify, is_clarified, is_reduced, reduce};
use contrascale::scales::{
    self, enumerate_bronkerbosch, for_each_bronkerbosch, ContraFinder, EnumerationOptions,
    ScaleCounts,
};
use contrascale::{Execution, FormalContext};

#[derive(Parser)]
#[command(name = "contrascale", version, about = "Contranominal scales in formal contexts")]
struct Cli {
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true, env = "CONTRASCALE_THREADS", default_value_t = 1)]
    threads: usize,

    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    /// Input format; guessed from the file extension when omitted.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Write the result here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Cxt,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Cxt => Format::Cxt,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Contrafinder,
    Bronkerbosch,
}

impl From<AlgorithmArg> for BenchAlgorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Contrafinder => BenchAlgorithm::ContraFinder,
            AlgorithmArg::Bronkerbosch => BenchAlgorithm::BronKerbosch,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Adjusted,
    Sampled,
}

#[derive(Subcommand)]
enum Command {
    /// Convert between .cxt and .csv (target format from --to or the output extension).
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: Option<FormatArg>,
    },
    /// Size, density and preprocessing status.
    Stats {
        input: PathBuf,
        /// Also count concepts.
        #[arg(long)]
        concepts: bool,
    },
    /// Clarify and reduce, reporting the merged and removed elements.
    Preprocess {
        input: PathBuf,
        /// Skip reduction.
        #[arg(long)]
        clarify_only: bool,
        /// Save the preprocessed context.
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// The (p,q)-core.
    Core {
        input: PathBuf,
        #[arg(short)]
        p: usize,
        #[arg(short)]
        q: usize,
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Enumerate or count contranominal scales.
    Scales {
        input: PathBuf,
        #[arg(long)]
        count_only: bool,
        #[arg(long, value_enum, default_value = "contrafinder")]
        algorithm: AlgorithmArg,
        /// Enumerate on the clarified and reduced context and map back.
        #[arg(long, conflicts_with = "algorithm")]
        preprocess: bool,
        /// Only scales of at least this dimension.
        #[arg(long)]
        min_dim: Option<usize>,
    },
    /// Cubic-set counts and influence per attribute.
    Influence {
        input: PathBuf,
        #[command(flatten)]
        prep: PrepArgs,
        /// CSV table instead of JSON.
        #[arg(long, conflicts_with = "pretty")]
        csv: bool,
    },
    /// Select the attributes of smallest influence.
    Adjust {
        input: PathBuf,
        #[arg(long, value_parser = parse_unit)]
        delta: f64,
        #[command(flatten)]
        prep: PrepArgs,
        /// Save the adjusted subcontext.
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Formal concepts.
    Concepts {
        input: PathBuf,
        #[arg(long)]
        count_only: bool,
    },
    /// Canonical implication base.
    Base {
        input: PathBuf,
        #[arg(long)]
        count_only: bool,
    },
    /// Structure and knowledge experiments.
    Experiment {
        #[command(subcommand)]
        kind: ExperimentKind,
    },
    /// Time scale counting per algorithm.
    Bench {
        input: PathBuf,
        #[arg(long, value_enum, num_args = 1.., default_values = ["contrafinder", "bronkerbosch"])]
        algorithm: Vec<AlgorithmArg>,
        /// Seconds per algorithm.
        #[arg(long, default_value_t = 60.0, value_parser = parse_positive)]
        timeout: f64,
    },
}

#[derive(Args)]
struct PrepArgs {
    /// Clarify and reduce the input first.
    #[arg(long)]
    preprocess: bool,
}

#[derive(Subcommand)]
enum ExperimentKind {
    /// Concept and base sizes of original, adjusted and sampled subcontexts.
    Structure {
        input: PathBuf,
        #[arg(long, default_value_t = 0.5, value_parser = parse_unit)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        prep: PrepArgs,
    },
    /// Decision-tree accuracy on adjusted versus sampled features.
    Knowledge {
        input: PathBuf,
        #[arg(long, default_value_t = 0.5, value_parser = parse_unit)]
        delta: f64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        repetitions: u64,
        #[arg(long, default_value_t = 0.5, value_parser = parse_open_unit)]
        split: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, num_args = 1.., default_values = ["adjusted", "sampled"])]
        method: Vec<MethodArg>,
        /// CSV summary instead of the full JSON report.
        #[arg(long)]
        summary_csv: bool,
        #[command(flatten)]
        prep: PrepArgs,
    },
}

fn parse_unit(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is not in [0, 1]"))
    }
}

fn parse_open_unit(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} is not in (0, 1)"))
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{v} is not positive"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if cli.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(1);
    }
    match with_threads(cli.threads, || run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(feature = "parallel")]
fn with_threads(threads: usize, f: impl FnOnce() -> Result<()> + Send) -> Result<()> {
    if threads == 1 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("starting thread pool")?
        .install(f)
}

#[cfg(not(feature = "parallel"))]
fn with_threads(_threads: usize, f: impl FnOnce() -> Result<()>) -> Result<()> {
    f()
}

fn execution(cli: &Cli) -> Execution {
    if cli.threads > 1 {
        Execution::Parallel
    } else {
        Execution::Sequential
    }
}

fn input_format(cli: &Cli, path: &Path) -> Result<Format> {
    match cli.format {
        Some(f) => Ok(f.into()),
        None => Format::from_path(path)
            .with_context(|| format!("cannot tell the format of {}; use --format", path.display())),
    }
}

fn load(cli: &Cli, path: &Path) -> Result<FormalContext> {
    let fmt = input_format(cli, path)?;
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    format::read_context(BufReader::new(file), fmt)
        .with_context(|| format!("reading {}", path.display()))
}

fn save(ctx: &FormalContext, path: &Path, fmt: Option<Format>) -> Result<()> {
    let fmt = match fmt.or_else(|| Format::from_path(path)) {
        Some(f) => f,
        None => bail!("cannot tell the output format of {}", path.display()),
    };
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    format::write_context(ctx, &mut w, fmt)?;
    w.flush()?;
    Ok(())
}

fn emit_text(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn emit_json(cli: &Cli, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit_text(cli, &text)
}

fn prepared(ctx: FormalContext, prep: &PrepArgs) -> FormalContext {
    if prep.preprocess {
        preprocess::clarify_and_reduce(&ctx).0
    } else {
        ctx
    }
}

fn labels(ctx: &FormalContext, attrs: impl IntoIterator<Item = usize>) -> Vec<String> {
    attrs.into_iter().map(|m| ctx.attribute_label(m).to_string()).collect()
}

fn object_labels(ctx: &FormalContext, objs: impl IntoIterator<Item = usize>) -> Vec<String> {
    objs.into_iter().map(|g| ctx.object_label(g).to_string()).collect()
}

fn run(cli: &Cli) -> Result<()> {
    let exec = execution(cli);
    match &cli.command {
        Command::Convert { input, to } => {
            let ctx = load(cli, input)?;
            let Some(out) = &cli.output else {
                bail!("convert needs --output");
            };
            save(&ctx, out, to.map(Into::into))
        }
        Command::Stats { input, concepts } => {
            let ctx = load(cli, input)?;
            let mut stats = json!({
                "objects": ctx.n_objects(),
                "attributes": ctx.n_attributes(),
                "incidences": ctx.n_incidences(),
                "density": ctx.density(),
                "clarified": is_clarified(&ctx),
                "reduced": is_reduced(&ctx),
            });
            if *concepts {
                stats["concepts"] = json!(count_concepts(&ctx));
            }
            if cli.pretty {
                let mut text = String::new();
                for (k, v) in stats.as_object().expect("object") {
                    text.push_str(&format!("{k}: {v}\n"));
                }
                emit_text(cli, &text)
            } else {
                emit_json(cli, &stats)
            }
        }
        Command::Preprocess {
            input,
            clarify_only,
            save: save_path,
        } => {
            let ctx = load(cli, input)?;
            let (clarified, map) = clarify(&ctx);
            let classes = |classes: &[Vec<usize>], label: &dyn Fn(usize) -> String| -> Vec<Vec<String>> {
                classes
                    .iter()
                    .filter(|c| c.len() > 1)
                    .map(|c| c.iter().map(|&i| label(i)).collect())
                    .collect()
            };
            let mut report = json!({
                "original": {"objects": ctx.n_objects(), "attributes": ctx.n_attributes()},
                "clarified": {"objects": clarified.n_objects(), "attributes": clarified.n_attributes()},
                "merged_objects": classes(&map.object_classes, &|g| ctx.object_label(g).to_string()),
                "merged_attributes": classes(&map.attribute_classes, &|m| ctx.attribute_label(m).to_string()),
            });
            let result = if *clarify_only {
                clarified
            } else {
                let (reduced, trace) = reduce(&clarified)?;
                let removed = |items: &[(usize, Vec<usize>)], label: &dyn Fn(usize) -> String| -> Value {
                    items
                        .iter()
                        .map(|(x, omega)| {
                            json!({"label": label(*x), "omega": omega.iter().map(|&y| label(y)).collect::<Vec<_>>()})
                        })
                        .collect()
                };
                report["reduced"] =
                    json!({"objects": reduced.n_objects(), "attributes": reduced.n_attributes()});
                report["removed_attributes"] = removed(&trace.removed_attributes, &|m| {
                    clarified.attribute_label(m).to_string()
                });
                report["removed_objects"] =
                    removed(&trace.removed_objects, &|g| clarified.object_label(g).to_string());
                reduced
            };
            if let Some(p) = save_path {
                save(&result, p, None)?;
            }
            emit_json(cli, &report)
        }
        Command::Core {
            input,
            p,
            q,
            save: save_path,
        } => {
            let ctx = load(cli, input)?;
            let sel = ctx.pq_core(*p, *q);
            if let Some(path) = save_path {
                save(&ctx.apply_selection(&sel)?, path, None)?;
            }
            emit_json(
                cli,
                &json!({
                    "objects": object_labels(&ctx, sel.objects().iter().copied()),
                    "attributes": labels(&ctx, sel.attributes().iter().copied()),
                }),
            )
        }
        Command::Scales {
            input,
            count_only,
            algorithm,
            preprocess,
            min_dim,
        } => {
            let ctx = load(cli, input)?;
            scales_command(cli, &ctx, *count_only, *algorithm, *preprocess, *min_dim, exec)
        }
        Command::Influence { input, prep, csv } => {
            let ctx = prepared(load(cli, input)?, prep);
            let report = adjust::influence(&ctx, exec)?;
            if *csv {
                emit_text(cli, &InfluenceTable::new(&report, None).to_csv()?)
            } else if cli.pretty {
                emit_text(cli, &InfluenceTable::new(&report, None).to_text())
            } else {
                emit_json(cli, &serde_json::to_value(report.to_json())?)
            }
        }
        Command::Adjust {
            input,
            delta,
            prep,
            save: save_path,
        } => {
            let ctx = prepared(load(cli, input)?, prep);
            let report = adjust::influence(&ctx, exec)?;
            let sel = AdjustedSelection::from_report(report, *delta)?;
            if let Some(p) = save_path {
                save(&sel.subcontext(&ctx)?, p, None)?;
            }
            if cli.pretty {
                emit_text(cli, &InfluenceTable::new(&sel.report, Some(&sel)).to_text())
            } else {
                emit_json(cli, &serde_json::to_value(sel.to_json())?)
            }
        }
        Command::Concepts { input, count_only } => {
            let ctx = load(cli, input)?;
            if *count_only {
                return emit_json(cli, &json!({"count": count_concepts(&ctx)}));
            }
            let concepts = enumerate_concepts(&ctx);
            if cli.pretty {
                let mut text = String::new();
                for c in &concepts {
                    let j = c.to_json(&ctx);
                    text.push_str(&format!("{{{}}} | {{{}}}\n", j.extent.join(", "), j.intent.join(", ")));
                }
                emit_text(cli, &text)
            } else {
                emit_json(cli, &serde_json::to_value(concepts.to_json(&ctx))?)
            }
        }
        Command::Base { input, count_only } => {
            let ctx = load(cli, input)?;
            let base = canonical_base(&ctx);
            if *count_only {
                emit_json(cli, &json!({"count": base.len()}))
            } else if cli.pretty {
                emit_text(cli, &base.to_text(&ctx))
            } else {
                emit_json(cli, &serde_json::to_value(base.to_json(&ctx))?)
            }
        }
        Command::Experiment { kind } => experiment_command(cli, kind, exec),
        Command::Bench {
            input,
            algorithm,
            timeout,
        } => {
            let ctx = load(cli, input)?;
            let algorithms: Vec<BenchAlgorithm> = algorithm.iter().map(|&a| a.into()).collect();
            let report = experiment::benchmark_enumeration(
                &ctx,
                &algorithms,
                Duration::from_secs_f64(*timeout),
                exec,
            );
            emit_json(cli, &serde_json::to_value(report)?)
        }
    }
}

fn scales_command(
    cli: &Cli,
    ctx: &FormalContext,
    count_only: bool,
    algorithm: AlgorithmArg,
    preprocess: bool,
    min_dim: Option<usize>,
    exec: Execution,
) -> Result<()> {
    let min = min_dim.unwrap_or(1);
    let plain_count = count_only && !preprocess && min <= 1;
    let counts_json = |counts: &ScaleCounts| {
        json!({
            "total": counts.total.to_string(),
            "max_dim": counts.max_dimension(),
            "histogram": counts.histogram.iter().map(|(k, v)| (k.to_string(), json!(v.to_string()))).collect::<serde_json::Map<_, _>>(),
        })
    };
    let scales = match algorithm {
        AlgorithmArg::Contrafinder if plain_count => {
            return emit_json(cli, &counts_json(&ContraFinder::new(ctx).count(exec)));
        }
        AlgorithmArg::Bronkerbosch if plain_count => {
            let mut counts = ScaleCounts::default();
            let _ = for_each_bronkerbosch(ctx, None, |s| {
                counts.add(s.dimension(), 1);
                std::ops::ControlFlow::Continue(())
            });
            return emit_json(cli, &counts_json(&counts));
        }
        AlgorithmArg::Contrafinder => scales::enumerate(
            ctx,
            EnumerationOptions {
                preprocess,
                min_dimension: min_dim,
                execution: exec,
            },
        ),
        AlgorithmArg::Bronkerbosch => {
            let mut all = enumerate_bronkerbosch(ctx);
            all.retain(|s| s.dimension() >= min);
            all.sort_unstable();
            all
        }
    };
    if count_only {
        return emit_json(cli, &counts_json(&ScaleCounts::from_scales(&scales)));
    }
    if cli.pretty {
        let mut text = String::new();
        for s in &scales {
            text.push_str(&format!("{}\n", s.display(ctx)));
        }
        emit_text(cli, &text)
    } else {
        let list: Vec<_> = scales.iter().map(|s| s.to_json(ctx)).collect();
        emit_json(cli, &serde_json::to_value(list)?)
    }
}

fn experiment_command(cli: &Cli, kind: &ExperimentKind, exec: Execution) -> Result<()> {
    match kind {
        ExperimentKind::Structure {
            input,
            delta,
            seed,
            prep,
        } => {
            let ctx = prepared(load(cli, input)?, prep);
            let result = experiment::run_structure_experiment(&ctx, *delta, *seed, exec)?;
            emit_json(cli, &serde_json::to_value(result)?)
        }
        ExperimentKind::Knowledge {
            input,
            delta,
            repetitions,
            split,
            seed,
            method,
            summary_csv,
            prep,
        } => {
            let ctx = prepared(load(cli, input)?, prep);
            let mut methods: Vec<Method> = method
                .iter()
                .map(|m| match m {
                    MethodArg::Adjusted => Method::Adjusted,
                    MethodArg::Sampled => Method::Sampled,
                })
                .collect();
            methods.sort_unstable();
            methods.dedup();
            let cfg = ExperimentConfig {
                delta: *delta,
                repetitions: *repetitions as usize,
                split_fraction: *split,
                seed: *seed,
                methods,
            };
            let result = experiment::run_knowledge_experiment(&ctx, &cfg, exec)?;
            if *summary_csv {
                emit_text(cli, &result.summary_csv())
            } else {
                emit_json(cli, &serde_json::to_value(result)?)
            }
        }
    }
}
