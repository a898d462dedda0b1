//! Command-line surface for the probabilistic-path pipeline: build rating
//! graphs, run constrained reachability queries, extract features, train and
//! apply the logistic model, and score experiments.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error (unreadable or invalid
//! inputs), 3 internal invariant violation. Every file-writing subcommand
//! also writes a `<out>.manifest` with the full configuration, so a run can
//! be replayed exactly; all randomness flows from `--seed`.

use std::fs;
use std::io::Write as IoWrite;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use probpath::eval::{
    run_experiment, BaselineKind, BaselinePredictor, EvalError, ExperimentConfig,
};
use probpath::features::{extract_features, FeatureTable, LanguageSet};
use probpath::graph::ProbabilisticGraph;
use probpath::infer::ReachQuery;
use probpath::learn::{train_multiclass, LinearModel, TrainOptions};
use probpath::pattern::parse_pattern;
use probpath::recsys::{build_graph, item_node_id, user_node_id, GraphBuildConfig, RatingsTable};

#[derive(Parser)]
#[command(
    name = "probpath",
    version,
    about = "Language-constrained reachability on probabilistic graphs, and the rating pipeline built on it"
)]
struct Cli {
    /// Worker threads for parallel stages (0 = one per core). Results never
    /// depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the probabilistic graph from a ratings file.
    BuildGraph(BuildGraphArgs),
    /// Estimate one pattern-constrained reachability probability.
    Query(QueryArgs),
    /// Extract language features for every rating pair in a file.
    Features(FeaturesArgs),
    /// Train the one-vs-rest logistic model on a feature file.
    Train(TrainArgs),
    /// Predict rating classes for a feature file with a trained model.
    Predict(PredictArgs),
    /// Run the cross-validation experiment over a folds directory.
    Evaluate(EvaluateArgs),
    /// Print the expected MAE of the uniform or categorical baseline.
    Baseline(BaselineArgs),
}

#[derive(Args)]
struct BuildGraphArgs {
    /// Ratings file: user<TAB>item<TAB>rating[<TAB>timestamp].
    #[arg(long)]
    ratings: PathBuf,
    /// Similar neighbors kept per node.
    #[arg(long, default_value_t = 30)]
    k: usize,
    /// Minimum co-rated items (users) / shared raters (items) for a
    /// similarity to count.
    #[arg(long, default_value_t = 2)]
    min_cosupport: usize,
    /// Output graph file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct QueryArgs {
    /// Graph file produced by build-graph.
    #[arg(long)]
    graph: PathBuf,
    /// Concrete pattern (no `r?` placeholder), e.g. "simU.r3".
    #[arg(long)]
    pattern: String,
    /// Source node identifier, e.g. "u42".
    #[arg(long)]
    source: String,
    /// Target node identifier, e.g. "i7".
    #[arg(long)]
    target: String,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct FeaturesArgs {
    /// Graph file produced by build-graph.
    #[arg(long)]
    graph: PathBuf,
    /// Ratings file naming the (user, item, rating) pairs to featurize.
    #[arg(long)]
    ratings: PathBuf,
    /// Built-in feature set: F1 or F2.
    #[arg(long, default_value = "F1")]
    set: String,
    /// Pattern file overriding --set: one family per line, `r?` allowed.
    #[arg(long)]
    patterns: Option<PathBuf>,
    /// Monte Carlo samples per estimate.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output feature file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    /// Feature file produced by `features`.
    #[arg(long)]
    features: PathBuf,
    /// L2 penalty weight.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Relative gradient-norm stopping tolerance.
    #[arg(long, default_value_t = 1e-4)]
    tolerance: f64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    /// Output model file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    /// Model file produced by `train`.
    #[arg(long)]
    model: PathBuf,
    /// Feature file with the rows to predict.
    #[arg(long)]
    features: PathBuf,
    /// Output predictions file (pair, true label, predicted label).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Directory containing uN.base / uN.test fold pairs.
    #[arg(long)]
    folds: PathBuf,
    /// Built-in feature set: F1 or F2.
    #[arg(long, default_value = "F1")]
    features: String,
    #[arg(long, default_value_t = 30)]
    k: usize,
    #[arg(long, default_value_t = 2)]
    min_cosupport: usize,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 1e-4)]
    tolerance: f64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    /// Output report file (the key=value summary goes to `<out>.summary`).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BaselineArgs {
    /// uniform | categorical
    #[arg(long)]
    kind: String,
    /// Ratings file whose class counts define the categorical distribution.
    #[arg(long)]
    ratings: Option<PathBuf>,
    /// Comma-separated class counts (alternative to --ratings), e.g.
    /// "6110,11370,27145,34174,21201".
    #[arg(long)]
    counts: Option<String>,
    /// Also simulate this many random draws per class and print the
    /// empirical MAE next to the closed form.
    #[arg(long)]
    simulate: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

/// Adds the offending file's path to a module error.
fn data_in(path: &Path, err: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("{}: {err}", path.display()))
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        CliError::Data(e.to_string())
    }
}

fn main() {
    let code = match std::panic::catch_unwind(run) {
        Ok(Ok(())) => 0,
        Ok(Err(CliError::Usage(msg))) => {
            eprintln!("usage error: {msg}");
            1
        }
        Ok(Err(CliError::Data(msg))) => {
            eprintln!("error: {msg}");
            2
        }
        Err(_) => {
            eprintln!("internal error: invariant violated (this is a bug)");
            3
        }
    };
    std::process::exit(code);
}

fn run() -> Result<(), CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| CliError::Data(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::BuildGraph(args) => cmd_build_graph(args),
        Command::Query(args) => cmd_query(args),
        Command::Features(args) => cmd_features(args),
        Command::Train(args) => cmd_train(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Baseline(args) => cmd_baseline(args),
    }
}

fn write_manifest(out: &Path, entries: &[(&str, String)]) -> Result<(), CliError> {
    let mut path = out.as_os_str().to_owned();
    path.push(".manifest");
    let mut text = String::new();
    text.push_str("tool=probpath\n");
    text.push_str(&format!("version={}\n", env!("CARGO_PKG_VERSION")));
    for (key, value) in entries {
        text.push_str(&format!("{key}={value}\n"));
    }
    fs::write(&path, text).map_err(|e| data_in(Path::new(&path), e))
}

fn cmd_build_graph(args: BuildGraphArgs) -> Result<(), CliError> {
    if args.k == 0 {
        return Err(CliError::usage("--k must be at least 1"));
    }
    let ratings =
        RatingsTable::load_from_path(&args.ratings).map_err(|e| data_in(&args.ratings, e))?;
    let config = GraphBuildConfig { k: args.k, min_cosupport: args.min_cosupport };
    let graph = build_graph(&ratings, &config).map_err(|e| CliError::Data(e.to_string()))?;
    graph.save_to_path(&args.out).map_err(|e| data_in(&args.out, e))?;
    write_manifest(
        &args.out,
        &[
            ("command", "build-graph".into()),
            ("ratings", args.ratings.display().to_string()),
            ("k", args.k.to_string()),
            ("min_cosupport", args.min_cosupport.to_string()),
            ("out", args.out.display().to_string()),
        ],
    )?;
    println!("nodes={}", graph.node_count());
    println!("edges={}", graph.edge_count());
    println!("labels={}", graph.label_count());
    Ok(())
}

fn cmd_query(args: QueryArgs) -> Result<(), CliError> {
    if args.samples == 0 {
        return Err(CliError::usage("--samples must be at least 1"));
    }
    let pattern = parse_pattern(&args.pattern).map_err(|e| CliError::usage(e.to_string()))?;
    if pattern.has_placeholder() {
        return Err(CliError::usage(
            "query patterns must be concrete; replace `r?` with a rating label such as r3",
        ));
    }
    let graph =
        ProbabilisticGraph::load_from_path(&args.graph).map_err(|e| data_in(&args.graph, e))?;
    let resolve = |name: &str| {
        graph
            .node_id(name)
            .ok_or_else(|| CliError::Data(format!("node {name} is not in the graph")))
    };
    let source = resolve(&args.source)?;
    let target = resolve(&args.target)?;
    let acceptor = pattern.compile().map_err(|e| CliError::usage(e.to_string()))?;
    let acceptors = [acceptor];
    let query = ReachQuery { source, target, acceptors: &acceptors, samples: args.samples, seed: args.seed };
    let estimate = probpath::infer::estimate_probability(&graph, &query)
        .map_err(|e| CliError::Data(e.to_string()))?;
    println!("p_hat={:.6}", estimate.probabilities[0]);
    println!("successes={}", estimate.successes[0]);
    println!("samples={}", estimate.samples);
    Ok(())
}

fn load_language_set(
    set: &str,
    patterns: Option<&Path>,
) -> Result<(String, LanguageSet), CliError> {
    match patterns {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| data_in(path, e))?;
            let families: Vec<(String, String)> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .enumerate()
                .map(|(i, l)| (format!("P{}", i + 1), l.to_string()))
                .collect();
            let borrowed: Vec<(&str, &str)> =
                families.iter().map(|(n, t)| (n.as_str(), t.as_str())).collect();
            let set = LanguageSet::new(&borrowed, &probpath::recsys::RATING_CLASSES)
                .map_err(|e| data_in(path, e))?;
            Ok((format!("file:{}", path.display()), set))
        }
        None => {
            let languages = LanguageSet::builtin(set).ok_or_else(|| {
                CliError::usage(format!("unknown feature set {set} (expected F1 or F2)"))
            })?;
            Ok((set.to_string(), languages))
        }
    }
}

fn cmd_features(args: FeaturesArgs) -> Result<(), CliError> {
    if args.samples == 0 {
        return Err(CliError::usage("--samples must be at least 1"));
    }
    let (set_name, languages) = load_language_set(&args.set, args.patterns.as_deref())?;
    let graph =
        ProbabilisticGraph::load_from_path(&args.graph).map_err(|e| data_in(&args.graph, e))?;
    let ratings =
        RatingsTable::load_from_path(&args.ratings).map_err(|e| data_in(&args.ratings, e))?;
    let pairs: Vec<(String, String, u8)> = ratings
        .triples()
        .map(|(u, i, r)| (user_node_id(u), item_node_id(i), r))
        .collect();
    let table = extract_features(&graph, &pairs, &languages, args.samples, args.seed)
        .map_err(|e| CliError::Data(e.to_string()))?;
    table.save_to_path(&args.out).map_err(|e| data_in(&args.out, e))?;
    write_manifest(
        &args.out,
        &[
            ("command", "features".into()),
            ("graph", args.graph.display().to_string()),
            ("ratings", args.ratings.display().to_string()),
            ("set", set_name),
            ("samples", args.samples.to_string()),
            ("seed", args.seed.to_string()),
            ("out", args.out.display().to_string()),
        ],
    )?;
    println!("rows={}", table.len());
    println!("columns={}", table.dim());
    Ok(())
}

fn cmd_train(args: TrainArgs) -> Result<(), CliError> {
    if !(args.c > 0.0) {
        return Err(CliError::usage("--c must be positive"));
    }
    if !(args.tolerance > 0.0) {
        return Err(CliError::usage("--tolerance must be positive"));
    }
    let table =
        FeatureTable::load_from_path(&args.features).map_err(|e| data_in(&args.features, e))?;
    let (xs, ys) = table.training_data();
    let options = TrainOptions { c: args.c, tolerance: args.tolerance, max_iter: args.max_iter };
    let model =
        train_multiclass(&xs, &ys, &options).map_err(|e| CliError::Data(e.to_string()))?;
    model.save_to_path(&args.out).map_err(|e| data_in(&args.out, e))?;
    write_manifest(
        &args.out,
        &[
            ("command", "train".into()),
            ("features", args.features.display().to_string()),
            ("C", args.c.to_string()),
            ("tolerance", args.tolerance.to_string()),
            ("max_iter", args.max_iter.to_string()),
            ("out", args.out.display().to_string()),
        ],
    )?;
    for (i, &class) in model.classes().iter().enumerate() {
        println!(
            "class={class} iterations={} grad_norm={:.3e}",
            model.iterations()[i],
            model.final_grad_norms()[i]
        );
    }
    Ok(())
}

fn cmd_predict(args: PredictArgs) -> Result<(), CliError> {
    let model = LinearModel::load_from_path(&args.model).map_err(|e| data_in(&args.model, e))?;
    let table =
        FeatureTable::load_from_path(&args.features).map_err(|e| data_in(&args.features, e))?;
    let mut out = String::from("pair\ty\tpredicted\n");
    let mut correct = 0usize;
    for row in table.rows() {
        let (class, _) = model.predict(&row.x).map_err(|e| CliError::Data(e.to_string()))?;
        if class == row.y {
            correct += 1;
        }
        out.push_str(&format!("{}\t{}\t{}\n", row.pair, row.y, class));
    }
    fs::write(&args.out, out).map_err(|e| data_in(&args.out, e))?;
    write_manifest(
        &args.out,
        &[
            ("command", "predict".into()),
            ("model", args.model.display().to_string()),
            ("features", args.features.display().to_string()),
            ("out", args.out.display().to_string()),
        ],
    )?;
    println!("rows={}", table.len());
    println!("exact_matches={correct}");
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    if args.k == 0 {
        return Err(CliError::usage("--k must be at least 1"));
    }
    if args.samples == 0 {
        return Err(CliError::usage("--samples must be at least 1"));
    }
    if !(args.c > 0.0) {
        return Err(CliError::usage("--c must be positive"));
    }
    let config = ExperimentConfig {
        feature_set: args.features.clone(),
        k: args.k,
        min_cosupport: args.min_cosupport,
        samples: args.samples,
        seed: args.seed,
        c: args.c,
        tolerance: args.tolerance,
        max_iter: args.max_iter,
    };
    if LanguageSet::builtin(&config.feature_set).is_none() {
        return Err(CliError::usage(format!(
            "unknown feature set {} (expected F1 or F2)",
            config.feature_set
        )));
    }
    let report = run_experiment(&args.folds, &config)?;
    fs::write(&args.out, report.to_tsv()).map_err(|e| data_in(&args.out, e))?;
    let mut summary_path = args.out.as_os_str().to_owned();
    summary_path.push(".summary");
    fs::write(&summary_path, report.summary())
        .map_err(|e| data_in(Path::new(&summary_path), e))?;
    write_manifest(
        &args.out,
        &[
            ("command", "evaluate".into()),
            ("folds", args.folds.display().to_string()),
            ("features", config.feature_set.clone()),
            ("k", config.k.to_string()),
            ("min_cosupport", config.min_cosupport.to_string()),
            ("samples", config.samples.to_string()),
            ("seed", config.seed.to_string()),
            ("C", config.c.to_string()),
            ("tolerance", config.tolerance.to_string()),
            ("max_iter", config.max_iter.to_string()),
            ("out", args.out.display().to_string()),
        ],
    )?;
    for fold in &report.folds {
        eprintln!(
            "fold {}: mae_macro={:.4} (test rows {}, fallback {})",
            fold.fold, fold.report.macro_mae, fold.test_rows, fold.fallback_rows
        );
    }
    print!("{}", report.summary());
    Ok(())
}

fn cmd_baseline(args: BaselineArgs) -> Result<(), CliError> {
    let predictor = match args.kind.as_str() {
        "uniform" => {
            if args.ratings.is_some() || args.counts.is_some() {
                return Err(CliError::usage("--ratings/--counts only apply to categorical"));
            }
            BaselinePredictor::uniform()
        }
        "categorical" => match (&args.ratings, &args.counts) {
            (Some(path), None) => {
                let ratings =
                    RatingsTable::load_from_path(path).map_err(|e| data_in(path, e))?;
                BaselinePredictor::from_counts(ratings.class_counts())
                    .map_err(|e| CliError::Data(e.to_string()))?
            }
            (None, Some(text)) => {
                let parsed: Vec<u64> = text
                    .split(',')
                    .map(|t| t.trim().parse())
                    .collect::<Result<_, _>>()
                    .map_err(|_| CliError::usage("--counts must be 5 comma-separated integers"))?;
                let counts: [u64; 5] = parsed
                    .try_into()
                    .map_err(|_| CliError::usage("--counts must have exactly 5 values"))?;
                BaselinePredictor::from_counts(counts)
                    .map_err(|e| CliError::Data(e.to_string()))?
            }
            _ => {
                return Err(CliError::usage(
                    "categorical needs exactly one of --ratings or --counts",
                ))
            }
        },
        other => {
            return Err(CliError::usage(format!(
                "unknown baseline kind {other} (expected uniform or categorical)"
            )))
        }
    };
    let label = match predictor.kind() {
        BaselineKind::Uniform => "uniform",
        BaselineKind::Categorical => "categorical",
    };
    let mut out = std::io::stdout().lock();
    writeln!(out, "kind={label}").ok();
    for (k, p) in predictor.probs().iter().enumerate() {
        writeln!(out, "p_{}={p:.6}", k + 1).ok();
    }
    let (per_class, macro_mae) = predictor.expected_mae();
    for (j, mae) in per_class.iter().enumerate() {
        writeln!(out, "mae_r{}={mae:.6}", j + 1).ok();
    }
    writeln!(out, "mae_macro={macro_mae:.6}").ok();
    if let Some(draws) = args.simulate {
        if draws == 0 {
            return Err(CliError::usage("--simulate must be at least 1"));
        }
        for class in 1..=5u8 {
            let sim = predictor.simulate_class_mae(class, draws, args.seed);
            writeln!(out, "sim_mae_r{class}={sim:.6}").ok();
        }
    }
    Ok(())
}
