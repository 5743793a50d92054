//! Command-line front end. Every run writes its results as CSV or JSON and
//! a [`manifest::RunManifest`] that `revgraph replay` can rerun.

mod config;
mod manifest;
mod output;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::branching::{self, BranchingConfig, Offspring};
use crate::cayley::{self, GraphSpec, VertexSet};
use crate::experiments::{self, CutoffRule, Method, SweepConfig, SweepOutput, DEFAULT_C_VALUES};
use crate::random_graph::{self, LambdaSpec, SampleConfig};
use crate::seed::fresh_seed;
use crate::{Error, GeneratorKind, GeneratorSet, SignedPerm};

use manifest::{manifest_path, with_suffix, RunManifest};
use output::{csv_table, f, json, opt};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Infeasible(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Infeasible(m) | CliError::Io(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Io(_) | Error::Format(_) => CliError::Io(msg),
            Error::TooLarge { .. }
            | Error::Infeasible(_)
            | Error::BadProbability(_)
            | Error::EdgeBudgetExceeded(_) => CliError::Infeasible(msg),
            _ => CliError::Usage(msg),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum MethodArg {
    Explicit,
    Lazy,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Explicit => Method::Explicit,
            MethodArg::Lazy => Method::Lazy,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum GensArg {
    Reversals,
    Transpositions,
    TranspositionsNoflips,
}

impl From<GensArg> for GeneratorKind {
    fn from(g: GensArg) -> Self {
        match g {
            GensArg::Reversals => GeneratorKind::Reversals,
            GensArg::Transpositions => GeneratorKind::Transpositions,
            GensArg::TranspositionsNoflips => GeneratorKind::TranspositionsNoFlips,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum OffspringArg {
    Binomial,
    RootBinomial,
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Variants {
    Flips,
    Noflips,
    Both,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize)]
struct Common {
    /// Master seed; drawn from the OS and recorded in the manifest if omitted.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,
    /// Output file; companions are written as PATH.summary.csv, PATH.plot.csv
    /// and PATH.manifest.json.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    #[serde(skip)]
    threads: Option<usize>,
    /// key=value file supplying defaults for any long flag.
    #[arg(long, global = true)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(
    name = "revgraph",
    version,
    about = "Random subgraphs of signed-reversal Cayley graphs"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
struct Rate {
    /// Scaled rate: λ = c / degree.
    #[arg(long, value_delimiter = ',', conflicts_with = "lambda")]
    c: Vec<f64>,
    /// Absolute edge probability.
    #[arg(long, value_delimiter = ',')]
    lambda: Vec<f64>,
}

impl Rate {
    fn single(&self) -> CliResult<LambdaSpec> {
        match (self.c.as_slice(), self.lambda.as_slice()) {
            ([c], []) => Ok(LambdaSpec::Scaled(*c)),
            ([], [l]) => Ok(LambdaSpec::Absolute(*l)),
            ([], []) => Err(CliError::Usage("one of --c or --lambda is required".into())),
            _ => Err(CliError::Usage(
                "expected a single --c or --lambda value".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
struct SweepArgs {
    /// Genome lengths, comma separated (default 5,6,7 explicit and 8..12 lazy).
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[command(flatten)]
    rate: Rate,
    #[arg(long, default_value_t = 10)]
    trials: u64,
    /// Lazy exploration cutoff (default n^4).
    #[arg(long)]
    cutoff: Option<u64>,
    #[arg(long, value_enum, default_value = "explicit")]
    method: MethodArg,
    /// Also sweep c = 1 + n^{-1/8} for each n.
    #[arg(long)]
    window: bool,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
enum Command {
    /// Component-size sweep over n and c.
    Sweep {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_enum, default_value = "reversals")]
        gens: GensArg,
    },
    /// The same sweep with sign-change transpositions.
    TranspositionSweep {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_enum, default_value = "both")]
        variants: Variants,
    },
    /// Sample one graph and report its components.
    Components {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        rate: Rate,
        #[arg(long, value_enum, default_value = "reversals")]
        gens: GensArg,
        /// Write the sampled edge list in binary form.
        #[arg(long)]
        save_edges: Option<PathBuf>,
        /// Number of component sizes listed.
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Explore the component of the identity without building the graph.
    Explore {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        rate: Rate,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long)]
        cutoff: Option<u64>,
        #[arg(long, value_enum, default_value = "reversals")]
        gens: GensArg,
    },
    /// Survival probability of a Poisson(1 + ε) branching process.
    Survival {
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        epsilon: Vec<f64>,
        #[arg(long, default_value_t = branching::DEFAULT_TOL)]
        tol: f64,
    },
    /// Monte Carlo survival of a Galton-Watson process.
    Branching {
        #[arg(long, value_enum, default_value = "binomial")]
        offspring: OffspringArg,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long, conflicts_with = "lambda")]
        p: Option<f64>,
        /// Mean offspring; for binomial laws p = λ / m.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 10_000)]
        cap: u64,
        #[arg(long, default_value_t = 200)]
        max_generations: u32,
    },
    /// Restricted tree-growth process from the identity.
    Tree {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        rate: Rate,
        #[arg(long, default_value_t = 1)]
        runs: u64,
        /// Write the first run's tree as JSON.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Distance between two signed permutations, or the graph diameter.
    Distance {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<String>,
        #[arg(long, default_value_t = 64)]
        max_depth: u32,
        #[arg(long, value_enum, default_value = "reversals")]
        gens: GensArg,
        /// Report the diameter instead.
        #[arg(long)]
        diameter: bool,
    },
    /// Density and boundary estimate for a vertex set read from a file.
    Density {
        #[arg(long)]
        n: usize,
        /// One rank or signed permutation per line; `-` reads stdin.
        #[arg(long)]
        set: PathBuf,
        #[arg(long, value_enum, default_value = "reversals")]
        gens: GensArg,
    },
    /// Critical edge probabilities 1 / C(L+1, 2) for block lengths L.
    CriticalRates {
        #[arg(long, value_delimiter = ',')]
        lengths: Vec<f64>,
    },
    /// Rerun the command recorded in a manifest.
    #[serde(skip)]
    Replay { manifest: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Sweep { .. } => "sweep",
            Command::TranspositionSweep { .. } => "transposition-sweep",
            Command::Components { .. } => "components",
            Command::Explore { .. } => "explore",
            Command::Survival { .. } => "survival",
            Command::Branching { .. } => "branching",
            Command::Tree { .. } => "tree",
            Command::Distance { .. } => "distance",
            Command::Density { .. } => "density",
            Command::CriticalRates { .. } => "critical-rates",
            Command::Replay { .. } => "replay",
        }
    }

    fn is_random(&self) -> bool {
        matches!(
            self,
            Command::Sweep { .. }
                | Command::TranspositionSweep { .. }
                | Command::Components { .. }
                | Command::Explore { .. }
                | Command::Branching { .. }
                | Command::Tree { .. }
        )
    }
}

/// Main file plus companions keyed by filename suffix.
struct Rendered {
    main: String,
    companions: Vec<(&'static str, String)>,
    /// Files the command wrote itself.
    extra_outputs: Vec<PathBuf>,
}

impl Rendered {
    fn single(main: String) -> Self {
        Rendered {
            main,
            companions: Vec::new(),
            extra_outputs: Vec::new(),
        }
    }
}

pub fn main() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    match run(argv) {
        Ok(()) => 0,
        Err(e) => {
            let msg = e.message();
            if msg.starts_with("error:") {
                eprintln!("{msg}");
            } else {
                eprintln!("error: {msg}");
            }
            e.exit_code()
        }
    }
}

fn run(argv: Vec<String>) -> CliResult<()> {
    let mut argv = config::inject(argv)?;
    let mut cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return Ok(());
            }
            return Err(CliError::Usage(
                e.render().to_string().trim_end().to_string(),
            ));
        }
    };
    if let Command::Replay { manifest } = &cli.command {
        return replay(manifest, &cli.common);
    }
    if cli.command.is_random() && cli.common.seed.is_none() {
        let seed = fresh_seed();
        cli.common.seed = Some(seed);
        argv.push("--seed".into());
        argv.push(seed.to_string());
    }
    let started_at = manifest::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    let rendered = pool.install(|| execute(&cli))?;

    let mut outputs = Vec::new();
    match &cli.common.out {
        Some(out) => {
            write_file(out, &rendered.main)?;
            outputs.push(out.clone());
            for (suffix, text) in &rendered.companions {
                let path = with_suffix(out, suffix);
                write_file(&path, text)?;
                outputs.push(path);
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(rendered.main.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))?;
        }
    }
    outputs.extend(rendered.extra_outputs);

    let manifest = RunManifest {
        command: cli.command.name().to_string(),
        args: strip_threads(&argv[1..]),
        params: params(&cli),
        master_seed: cli.common.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        started_at,
        finished_at: manifest::now(),
        outputs,
    };
    match &cli.common.out {
        Some(out) => write_file(&manifest_path(out), &manifest.to_json())?,
        None => eprintln!("{}", manifest.to_json()),
    }
    Ok(())
}

/// The thread count never changes results, so it is not part of a rerun.
fn strip_threads(args: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--threads" {
            skip = true;
        } else if !a.starts_with("--threads=") {
            out.push(a.clone());
        }
    }
    out
}

fn params(cli: &Cli) -> BTreeMap<String, serde_json::Value> {
    fn flatten(v: serde_json::Value, into: &mut BTreeMap<String, serde_json::Value>) {
        if let serde_json::Value::Object(obj) = v {
            for (k, v) in obj {
                if v.is_object() {
                    flatten(v, into);
                } else {
                    into.insert(k, v);
                }
            }
        }
    }
    let mut map = BTreeMap::new();
    flatten(
        serde_json::to_value(&cli.common).expect("serialisable"),
        &mut map,
    );
    flatten(
        serde_json::to_value(&cli.command).expect("serialisable"),
        &mut map,
    );
    map
}

fn replay(path: &Path, overrides: &Common) -> CliResult<()> {
    let recorded = RunManifest::read(path)?;
    let mut args = vec!["revgraph".to_string()];
    let mut skip = false;
    for a in &recorded.args {
        if skip {
            skip = false;
            continue;
        }
        if overrides.out.is_some() && a == "--out" {
            skip = true;
            continue;
        }
        if overrides.out.is_some() && a.starts_with("--out=") {
            continue;
        }
        args.push(a.clone());
    }
    if let Some(out) = &overrides.out {
        args.push("--out".into());
        args.push(out.display().to_string());
    }
    if let Some(t) = overrides.threads {
        args.push("--threads".into());
        args.push(t.to_string());
    }
    run(args)
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn execute(cli: &Cli) -> CliResult<Rendered> {
    let fmt = cli.common.format;
    let seed = cli.common.seed.unwrap_or(0);
    match &cli.command {
        Command::Sweep { sweep, gens } => {
            let out = run_sweep(sweep, &[(*gens).into()], seed)?;
            Ok(render_sweep(&out, fmt))
        }
        Command::TranspositionSweep { sweep, variants } => {
            let kinds: &[GeneratorKind] = match variants {
                Variants::Flips => &[GeneratorKind::Transpositions],
                Variants::Noflips => &[GeneratorKind::TranspositionsNoFlips],
                Variants::Both => &[
                    GeneratorKind::Transpositions,
                    GeneratorKind::TranspositionsNoFlips,
                ],
            };
            let out = run_sweep(sweep, kinds, seed)?;
            Ok(render_sweep(&out, fmt))
        }
        Command::Components {
            n,
            rate,
            gens,
            save_edges,
            top,
        } => cmd_components(
            *n,
            rate,
            (*gens).into(),
            save_edges.as_deref(),
            *top,
            seed,
            fmt,
        ),
        Command::Explore {
            n,
            rate,
            trials,
            cutoff,
            gens,
        } => cmd_explore(*n, rate, *trials, *cutoff, (*gens).into(), seed, fmt),
        Command::Survival { epsilon, tol } => cmd_survival(epsilon, *tol, fmt),
        Command::Branching {
            offspring,
            m,
            p,
            lambda,
            trials,
            cap,
            max_generations,
        } => {
            let law = offspring_law(*offspring, *m, *p, *lambda)?;
            let config = BranchingConfig {
                offspring: law,
                max_generations: *max_generations,
                population_cap: *cap,
            };
            cmd_branching(&config, *trials, seed, fmt)
        }
        Command::Tree {
            n,
            rate,
            runs,
            dump,
        } => cmd_tree(*n, rate, *runs, dump.as_deref(), seed, fmt),
        Command::Distance {
            n,
            from,
            to,
            max_depth,
            gens,
            diameter,
        } => cmd_distance(
            *n,
            from.as_deref(),
            to.as_deref(),
            *max_depth,
            (*gens).into(),
            *diameter,
            fmt,
        ),
        Command::Density { n, set, gens } => cmd_density(*n, set, (*gens).into(), fmt),
        Command::CriticalRates { lengths } => cmd_critical_rates(lengths, fmt),
        Command::Replay { .. } => unreachable!("handled before dispatch"),
    }
}

fn run_sweep(args: &SweepArgs, kinds: &[GeneratorKind], seed: u64) -> CliResult<SweepOutput> {
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let cutoff = args.cutoff.map(CutoffRule::Fixed).unwrap_or_default();
    let plan: Vec<(Method, Vec<usize>)> = if args.n.is_empty() {
        let explicit = (Method::Explicit, vec![5, 6, 7]);
        let lazy = (Method::Lazy, (8..=12).collect());
        match args.method {
            MethodArg::Explicit => vec![explicit],
            MethodArg::Lazy => vec![lazy],
            MethodArg::Both => vec![explicit, lazy],
        }
    } else {
        vec![(args.method.into(), args.n.clone())]
    };
    let mut configs = Vec::new();
    for &kind in kinds {
        for (method, n_values) in &plan {
            let base = |n_values: Vec<usize>, c_values: Vec<f64>| SweepConfig {
                method: *method,
                cutoff,
                gens: kind,
                window_rows: args.window,
                ..SweepConfig::new(n_values, c_values, args.trials, seed)
            };
            if args.rate.lambda.is_empty() {
                let c = if args.rate.c.is_empty() {
                    DEFAULT_C_VALUES.to_vec()
                } else {
                    args.rate.c.clone()
                };
                configs.push(base(n_values.clone(), c));
            } else {
                // an absolute rate maps to a different c for every n
                for &n in n_values {
                    let degree = GeneratorSet::new(kind, n)?.degree() as f64;
                    let c = args.rate.lambda.iter().map(|l| l * degree).collect();
                    configs.push(base(vec![n], c));
                }
            }
        }
    }
    let mut merged = SweepOutput {
        rows: Vec::new(),
        trials: Vec::new(),
    };
    for out in experiments::run_sweeps(&configs)? {
        merged.rows.extend(out.rows);
        merged.trials.extend(out.trials);
    }
    if !merged.rows.is_empty() && merged.rows.iter().all(|r| !r.is_ok()) {
        return Err(CliError::Infeasible(format!(
            "no feasible cell: {}",
            merged.rows[0].status
        )));
    }
    Ok(merged)
}

fn render_sweep(out: &SweepOutput, fmt: Format) -> Rendered {
    if fmt == Format::Json {
        return Rendered::single(json(out));
    }
    let trials = csv_table(
        &[
            "n",
            "c",
            "lambda",
            "method",
            "trial",
            "largest",
            "second",
            "vertex_count",
            "seed",
            "gens",
        ],
        out.trials.iter().map(|t| {
            vec![
                t.n.to_string(),
                f(t.c),
                f(t.lambda),
                t.method.to_string(),
                t.trial.to_string(),
                t.largest.to_string(),
                opt(t.second),
                t.vertex_count.to_string(),
                t.seed.to_string(),
                t.gens.to_string(),
            ]
        }),
    );
    let summary = csv_table(
        &[
            "n",
            "c",
            "lambda",
            "gens",
            "method",
            "mean_largest_fraction",
            "std_largest_fraction",
            "mean_second_over_first",
            "predicted_wp",
            "predicted_wp_small_eps",
            "trials",
            "status",
        ],
        out.rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                f(r.c),
                f(r.lambda),
                r.gens.to_string(),
                r.method.to_string(),
                f(r.mean_largest_fraction),
                f(r.std_largest_fraction),
                opt(r.mean_second_over_first),
                f(r.predicted_wp),
                f(r.predicted_wp_small_eps),
                r.trials.to_string(),
                r.status.clone(),
            ]
        }),
    );
    let mut plot_rows: Vec<_> = out.rows.iter().filter(|r| r.is_ok()).collect();
    plot_rows.sort_by(|a, b| {
        (a.gens.name(), a.method.name(), a.n)
            .cmp(&(b.gens.name(), b.method.name(), b.n))
            .then(a.c.total_cmp(&b.c))
    });
    let plot = csv_table(
        &[
            "gens",
            "method",
            "n",
            "c",
            "observed",
            "std_error",
            "predicted_wp",
        ],
        plot_rows.into_iter().map(|r| {
            vec![
                r.gens.to_string(),
                r.method.to_string(),
                r.n.to_string(),
                f(r.c),
                f(r.mean_largest_fraction),
                f(r.std_error()),
                f(r.predicted_wp),
            ]
        }),
    );
    Rendered {
        main: trials,
        companions: vec![(".summary.csv", summary), (".plot.csv", plot)],
        extra_outputs: Vec::new(),
    }
}

#[derive(Serialize)]
struct ComponentsReport {
    n: usize,
    c: f64,
    lambda: f64,
    gens: GeneratorKind,
    seed: u64,
    vertex_count: u64,
    edges: usize,
    components: usize,
    largest: u64,
    second: u64,
    largest_fraction: f64,
    top_sizes: Vec<u64>,
}

fn cmd_components(
    n: usize,
    rate: &Rate,
    kind: GeneratorKind,
    save_edges: Option<&Path>,
    top: usize,
    seed: u64,
    fmt: Format,
) -> CliResult<Rendered> {
    let gens = GeneratorSet::new(kind, n)?;
    let config = SampleConfig::new(gens, rate.single()?, seed)?;
    let g = random_graph::sample_subgraph_explicit(&config)?;
    let stats = random_graph::components(&g);
    let mut extra_outputs = Vec::new();
    if let Some(path) = save_edges {
        let file = std::fs::File::create(path)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        random_graph::write_edges(&g, std::io::BufWriter::new(file))?;
        extra_outputs.push(path.to_path_buf());
    }
    let report = ComponentsReport {
        n,
        c: config.c(),
        lambda: config.lambda,
        gens: kind,
        seed,
        vertex_count: stats.vertex_count,
        edges: g.edge_count(),
        components: stats.component_count(),
        largest: stats.largest,
        second: stats.second,
        largest_fraction: stats.largest_fraction(),
        top_sizes: stats.sizes.iter().take(top).copied().collect(),
    };
    let main = match fmt {
        Format::Json => json(&report),
        Format::Csv => csv_table(
            &[
                "n",
                "c",
                "lambda",
                "gens",
                "seed",
                "vertex_count",
                "edges",
                "components",
                "largest",
                "second",
                "largest_fraction",
                "top_sizes",
            ],
            [vec![
                n.to_string(),
                f(report.c),
                f(report.lambda),
                kind.to_string(),
                seed.to_string(),
                report.vertex_count.to_string(),
                report.edges.to_string(),
                report.components.to_string(),
                report.largest.to_string(),
                report.second.to_string(),
                f(report.largest_fraction),
                report
                    .top_sizes
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(" "),
            ]],
        ),
    };
    Ok(Rendered {
        main,
        companions: Vec::new(),
        extra_outputs,
    })
}

#[derive(Serialize)]
struct ExploreRow {
    n: usize,
    c: f64,
    lambda: f64,
    gens: GeneratorKind,
    trial: u64,
    seed: u64,
    component_size: u64,
    hit_cutoff: bool,
    edges_examined: u64,
}

fn cmd_explore(
    n: usize,
    rate: &Rate,
    trials: u64,
    cutoff: Option<u64>,
    kind: GeneratorKind,
    seed: u64,
    fmt: Format,
) -> CliResult<Rendered> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let gens = GeneratorSet::new(kind, n)?;
    let lambda = rate.single()?.resolve(&gens)?;
    let c = lambda * gens.degree() as f64;
    let cutoff = cutoff.unwrap_or_else(|| random_graph::default_cutoff(n));
    let runs = random_graph::lazy_trials(gens, lambda, cutoff, trials, seed)?;
    let rows: Vec<ExploreRow> = runs
        .iter()
        .enumerate()
        .map(|(t, (s, r))| ExploreRow {
            n,
            c,
            lambda,
            gens: kind,
            trial: t as u64,
            seed: *s,
            component_size: r.component_size,
            hit_cutoff: r.hit_cutoff,
            edges_examined: r.edges_examined,
        })
        .collect();
    let hits = rows.iter().filter(|r| r.hit_cutoff).count() as u64;
    let estimate = random_graph::GiantEstimate::from_hits(hits, trials);
    if fmt == Format::Json {
        #[derive(Serialize)]
        struct Doc<'a> {
            cutoff: u64,
            estimate: random_graph::GiantEstimate,
            trials: &'a [ExploreRow],
        }
        return Ok(Rendered::single(json(&Doc {
            cutoff,
            estimate,
            trials: &rows,
        })));
    }
    let main = csv_table(
        &[
            "n",
            "c",
            "lambda",
            "gens",
            "trial",
            "seed",
            "component_size",
            "hit_cutoff",
            "edges_examined",
        ],
        rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                f(r.c),
                f(r.lambda),
                r.gens.to_string(),
                r.trial.to_string(),
                r.seed.to_string(),
                r.component_size.to_string(),
                r.hit_cutoff.to_string(),
                r.edges_examined.to_string(),
            ]
        }),
    );
    let summary = csv_table(
        &[
            "n",
            "c",
            "lambda",
            "gens",
            "cutoff",
            "trials",
            "hits",
            "giant_fraction",
            "std_error",
        ],
        [vec![
            n.to_string(),
            f(c),
            f(lambda),
            kind.to_string(),
            cutoff.to_string(),
            trials.to_string(),
            hits.to_string(),
            f(estimate.mean),
            f(estimate.std_error),
        ]],
    );
    Ok(Rendered {
        main,
        companions: vec![(".summary.csv", summary)],
        extra_outputs: Vec::new(),
    })
}

fn cmd_survival(epsilons: &[f64], tol: f64, fmt: Format) -> CliResult<Rendered> {
    let results = epsilons
        .iter()
        .map(|&e| branching::survival_fixed_point(e, tol))
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(Rendered::single(match fmt {
        Format::Json => json(&results),
        Format::Csv => csv_table(
            &["epsilon", "lambda", "root", "residual", "iterations"],
            results.iter().map(|r| {
                vec![
                    f(r.epsilon),
                    f(r.lambda),
                    f(r.root),
                    f(r.residual),
                    r.iterations.to_string(),
                ]
            }),
        ),
    }))
}

fn offspring_law(
    kind: OffspringArg,
    m: Option<u64>,
    p: Option<f64>,
    lambda: Option<f64>,
) -> CliResult<Offspring> {
    match kind {
        OffspringArg::Poisson => {
            let lambda =
                lambda.ok_or_else(|| CliError::Usage("poisson offspring needs --lambda".into()))?;
            Ok(Offspring::Poisson { lambda })
        }
        OffspringArg::Binomial | OffspringArg::RootBinomial => {
            let m = m.ok_or_else(|| CliError::Usage("binomial offspring needs --m".into()))?;
            if m == 0 {
                return Err(CliError::Usage("--m must be at least 1".into()));
            }
            let p = match (p, lambda) {
                (Some(p), _) => p,
                (None, Some(l)) => l / m as f64,
                (None, None) => {
                    return Err(CliError::Usage(
                        "binomial offspring needs --p or --lambda".into(),
                    ))
                }
            };
            Ok(if kind == OffspringArg::Binomial {
                Offspring::Binomial { m, p }
            } else {
                Offspring::RootBinomial { m, p }
            })
        }
    }
}

fn mean_offspring(law: &Offspring) -> f64 {
    match *law {
        Offspring::Binomial { m, p } | Offspring::RootBinomial { m, p } => m as f64 * p,
        Offspring::Poisson { lambda } => lambda,
    }
}

fn cmd_branching(
    config: &BranchingConfig,
    trials: u64,
    seed: u64,
    fmt: Format,
) -> CliResult<Rendered> {
    let est = branching::simulate_branching(config, trials, seed)?;
    let mean = mean_offspring(&config.offspring);
    let reference = branching::survival_fixed_point(mean - 1.0, branching::DEFAULT_TOL)?.root;
    if fmt == Format::Json {
        #[derive(Serialize)]
        struct Doc<'a> {
            config: &'a BranchingConfig,
            mean_offspring: f64,
            poisson_reference: f64,
            estimate: branching::SurvivalEstimate,
        }
        return Ok(Rendered::single(json(&Doc {
            config,
            mean_offspring: mean,
            poisson_reference: reference,
            estimate: est,
        })));
    }
    let (kind, m, p) = match config.offspring {
        Offspring::Binomial { m, p } => ("binomial", Some(m), Some(p)),
        Offspring::RootBinomial { m, p } => ("root-binomial", Some(m), Some(p)),
        Offspring::Poisson { .. } => ("poisson", None, None),
    };
    Ok(Rendered::single(csv_table(
        &[
            "offspring",
            "m",
            "p",
            "mean_offspring",
            "trials",
            "survived",
            "survival",
            "std_error",
            "ci_low",
            "ci_high",
            "poisson_reference",
        ],
        [vec![
            kind.to_string(),
            opt(m),
            opt(p),
            f(mean),
            est.trials.to_string(),
            est.survived.to_string(),
            f(est.mean),
            f(est.std_error),
            f(est.ci_low),
            f(est.ci_high),
            f(reference),
        ]],
    )))
}

fn cmd_tree(
    n: usize,
    rate: &Rate,
    runs: u64,
    dump: Option<&Path>,
    seed: u64,
    fmt: Format,
) -> CliResult<Rendered> {
    let gens = GeneratorSet::reversals(n)?;
    let lambda = match rate.single()? {
        // resolving needs |B_n| only for c; avoid the u64 size limit here
        LambdaSpec::Scaled(c) => c / gens.degree() as f64,
        LambdaSpec::Absolute(l) => l,
    };
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::BadProbability(lambda).into());
    }
    let batch = branching::run_restricted_trees(n, lambda, runs, seed)?;
    let c = lambda * gens.degree() as f64;
    let reference = branching::survival_fixed_point(c - 1.0, branching::DEFAULT_TOL)?.root;
    let mut extra_outputs = Vec::new();
    if let Some(path) = dump {
        let first =
            branching::grow_restricted_tree(n, lambda, crate::seed::trial_seed(seed, n as u64, 0))?;
        write_file(path, &json(&first))?;
        extra_outputs.push(path.to_path_buf());
    }
    let main = match fmt {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                c: f64,
                survival_reference: f64,
                batch: &'a branching::TreeBatch,
            }
            json(&Doc {
                c,
                survival_reference: reference,
                batch: &batch,
            })
        }
        Format::Csv => csv_table(
            &[
                "n",
                "c",
                "lambda",
                "runs",
                "successes",
                "success_rate",
                "std_error",
                "target_size",
                "m_offspring",
                "duplicate_violations",
                "bookkeeping_violations",
                "shortfalls",
                "survival_reference",
            ],
            [vec![
                n.to_string(),
                f(c),
                f(lambda),
                batch.runs.to_string(),
                batch.successes.to_string(),
                f(batch.success_rate),
                f(batch.std_error),
                batch.target_size.to_string(),
                batch.m_offspring.to_string(),
                batch.duplicate_violations.to_string(),
                batch.bookkeeping_violations.to_string(),
                batch.shortfalls.to_string(),
                f(reference),
            ]],
        ),
    };
    Ok(Rendered {
        main,
        companions: Vec::new(),
        extra_outputs,
    })
}

fn parse_perm(n: usize, text: Option<&str>) -> CliResult<SignedPerm> {
    let p = match text {
        None => SignedPerm::identity(n)?,
        Some(t) => t.parse::<SignedPerm>()?,
    };
    if p.n() != n {
        return Err(Error::LengthMismatch(n, p.n()).into());
    }
    Ok(p)
}

fn cmd_distance(
    n: usize,
    from: Option<&str>,
    to: Option<&str>,
    max_depth: u32,
    kind: GeneratorKind,
    diameter: bool,
    fmt: Format,
) -> CliResult<Rendered> {
    let gens = GeneratorSet::new(kind, n)?;
    if diameter {
        let d = cayley::diameter(&GraphSpec::new(gens))?;
        #[derive(Serialize)]
        struct Doc {
            n: usize,
            gens: GeneratorKind,
            diameter: u32,
        }
        return Ok(Rendered::single(match fmt {
            Format::Json => json(&Doc {
                n,
                gens: kind,
                diameter: d,
            }),
            Format::Csv => csv_table(
                &["n", "gens", "diameter"],
                [vec![n.to_string(), kind.to_string(), d.to_string()]],
            ),
        }));
    }
    let v = parse_perm(n, from)?;
    let w = parse_perm(n, to)?;
    let d = cayley::bfs_distance(&v, &w, &gens, max_depth)?;
    #[derive(Serialize)]
    struct Doc {
        from: String,
        to: String,
        gens: GeneratorKind,
        distance: Option<u32>,
    }
    let doc = Doc {
        from: v.to_string(),
        to: w.to_string(),
        gens: kind,
        distance: d,
    };
    Ok(Rendered::single(match fmt {
        Format::Json => json(&doc),
        Format::Csv => csv_table(
            &["from", "to", "gens", "distance"],
            [vec![doc.from, doc.to, kind.to_string(), opt(d)]],
        ),
    }))
}

fn cmd_density(n: usize, set: &Path, kind: GeneratorKind, fmt: Format) -> CliResult<Rendered> {
    let text = if set.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?
    } else {
        std::fs::read_to_string(set)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", set.display())))?
    };
    let gens = GeneratorSet::new(kind, n)?;
    let a = VertexSet::parse_lines(n, &text)?;
    let dense = cayley::is_dense(&a, &gens)?;
    let bound = cayley::check_boundary_bound(&a, &gens)?;
    #[derive(Serialize)]
    struct Doc {
        n: usize,
        gens: GeneratorKind,
        set_size: usize,
        is_dense: bool,
        boundary: u64,
        bound: f64,
        diameter: u32,
        bound_holds: bool,
    }
    let doc = Doc {
        n,
        gens: kind,
        set_size: a.len(),
        is_dense: dense,
        boundary: bound.boundary,
        bound: bound.bound,
        diameter: bound.diameter,
        bound_holds: bound.holds,
    };
    Ok(Rendered::single(match fmt {
        Format::Json => json(&doc),
        Format::Csv => csv_table(
            &[
                "n",
                "gens",
                "set_size",
                "is_dense",
                "boundary",
                "bound",
                "diameter",
                "bound_holds",
            ],
            [vec![
                n.to_string(),
                kind.to_string(),
                doc.set_size.to_string(),
                dense.to_string(),
                doc.boundary.to_string(),
                f(doc.bound),
                doc.diameter.to_string(),
                doc.bound_holds.to_string(),
            ]],
        ),
    }))
}

fn cmd_critical_rates(lengths: &[f64], fmt: Format) -> CliResult<Rendered> {
    let lengths = if lengths.is_empty() {
        experiments::YEAST_BLOCK_LENGTHS.to_vec()
    } else {
        lengths.to_vec()
    };
    let rows = experiments::critical_rate_table(&lengths)?;
    Ok(Rendered::single(match fmt {
        Format::Json => json(&rows),
        Format::Csv => csv_table(
            &["block_length", "critical_probability", "rounded"],
            rows.iter().map(|r| {
                vec![
                    f(r.block_length),
                    f(r.critical_probability),
                    format!("{:.2}", r.rounded()),
                ]
            }),
        ),
    }))
}

#[cfg(test)]
mod tests;
