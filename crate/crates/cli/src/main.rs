//! `tdgraph` command line: decomposition, codec, datasets, training, sampling and evaluation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::RngCore;
use serde::Serialize;
use serde_json::{json, Value};
use tdgraph::graph::bfs_layers;
use tdgraph::model::{sample_graphs, sample_trees, substream};
use tdgraph::stats::statistics;
use tdgraph::{
    bfs_layer_decomposition, decode_graph, encode_graph, gen_community, gen_lobster, lobster_accuracy,
    minimal_decomposition, mmd, nll, parse_edge_list, split_dataset, to_edge_list, train_count_model, train_tree_model,
    uniform_model, unique_sequence_count, validate_decomposition, CommunityParams, Dataset, DecisionModel,
    DecisionSequence, Graph, Kernel, LobsterParams, Permutation, SampleLimits, SequenceMethod, StatKind,
};

#[derive(Parser)]
#[command(name = "tdgraph", version, about = "Graph generation through tree decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal tree decomposition with a validation report and bound checks.
    Decompose(DecomposeArgs),
    /// Graph to decision sequence.
    Encode(EncodeArgs),
    /// Decision sequence to graph.
    Decode(DecodeArgs),
    /// Unique sequence counts per graph under random permutations.
    Space(SpaceArgs),
    /// Generate a synthetic dataset.
    GenDataset(GenArgs),
    /// Seeded 70/10/20 split into train, valid and test files.
    Split(SplitArgs),
    /// Train a count model.
    Train(TrainArgs),
    /// Sample graphs from a model.
    Sample(SampleArgs),
    /// Sample trees from a model.
    SampleTrees(SampleArgs),
    /// Expected and marginal NLL on the train and test splits.
    EvalNll(EvalNllArgs),
    /// MMD between a reference and a generated dataset.
    EvalStats(EvalStatsArgs),
    /// Fraction of lobster trees in a dataset.
    LobsterAcc(LobsterArgs),
}

#[derive(Args, Serialize)]
struct DecomposeArgs {
    /// Edge-list file.
    #[arg(long)]
    input: PathBuf,
    /// Randomizes the elimination tie order; identity order when absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Root of the BFS layer decomposition.
    #[arg(long, default_value_t = 0)]
    bfs_root: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct EncodeArgs {
    #[arg(long)]
    input: PathBuf,
    /// Node permutation seed; identity permutation when absent.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct DecodeArgs {
    /// Decision sequence text file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SpaceArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, default_value_t = 1000)]
    perms: usize,
    /// Comma-separated subset of td, bfs, dfs.
    #[arg(long, value_delimiter = ',', default_value = "td,bfs,dfs")]
    methods: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum DatasetKind {
    Community,
    CommunitySmall,
    Lobster,
}

#[derive(Args, Serialize)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: DatasetKind,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    min_n: Option<usize>,
    #[arg(long)]
    max_n: Option<usize>,
    #[arg(long)]
    p_in: Option<f64>,
    #[arg(long)]
    inter_frac: Option<f64>,
    #[arg(long)]
    expected_backbone: Option<f64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SplitArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory receiving train.txt, valid.txt and test.txt.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args, Serialize)]
struct TrainArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// Permutations drawn per graph.
    #[arg(long, default_value_t = 5)]
    epochs: usize,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Train the tree model on the graphs' own PLRs (graphs must be trees).
    #[arg(long)]
    trees: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Serialize)]
struct SampleArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long)]
    max_nodes: usize,
    /// Defaults to the model's own cap.
    #[arg(long)]
    plr_cap: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct EvalNllArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    #[arg(long, default_value_t = 32)]
    perms: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Add a uniform-model row scored on the same permutations.
    #[arg(long)]
    baseline: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum KernelKind {
    GaussianEmd,
    Tv,
}

#[derive(Args, Serialize)]
struct EvalStatsArgs {
    #[arg(long)]
    reference: PathBuf,
    #[arg(long)]
    generated: PathBuf,
    #[arg(long, value_enum, default_value_t = KernelKind::GaussianEmd)]
    kernel: KernelKind,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-metric JSON with binning metadata.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct LobsterArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Data(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

impl From<tdgraph::Error> for Failure {
    fn from(e: tdgraph::Error) -> Self {
        Failure::Data(e.into())
    }
}

type Res<T> = Result<T, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

/// Artifacts are buffered and written together so a failed run leaves nothing behind.
#[derive(Default)]
struct Outputs(Vec<(Option<PathBuf>, String)>);

impl Outputs {
    fn to(mut self, path: Option<&Path>, text: String) -> Self {
        self.0.push((path.map(Path::to_path_buf), text));
        self
    }

    fn write(self) -> Res<()> {
        let mut written: Vec<PathBuf> = Vec::new();
        let mut stdout = String::new();
        for (path, text) in self.0 {
            let Some(path) = path else {
                stdout.push_str(&text);
                continue;
            };
            if let Err(e) = fs::write(&path, text) {
                for p in &written {
                    let _ = fs::remove_file(p);
                }
                return Err(Failure::Data(
                    anyhow::Error::new(e).context(format!("writing {}", path.display())),
                ));
            }
            written.push(path);
        }
        print!("{stdout}");
        Ok(())
    }
}

fn config(command: &str, args: &impl Serialize) -> Value {
    let mut v = serde_json::to_value(args).expect("arguments serialize");
    v.as_object_mut()
        .expect("arguments are a struct")
        .insert("command".into(), Value::from(command));
    v
}

fn run_line(command: &str, args: &impl Serialize) -> String {
    format!("# run {}\n", config(command, args))
}

fn read(path: &Path) -> Res<String> {
    Ok(fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

fn load_graph(path: &Path) -> Res<Graph> {
    Ok(parse_edge_list(&read(path)?).with_context(|| format!("parsing {}", path.display()))?)
}

fn load_dataset(path: &Path) -> Res<Dataset> {
    Ok(Dataset::from_text(&read(path)?).with_context(|| format!("parsing {}", path.display()))?)
}

fn load_model(path: &Path) -> Res<DecisionModel> {
    Ok(DecisionModel::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))?)
}

/// Dataset text with the run line after its header.
fn dataset_text(ds: &Dataset, run: &str) -> String {
    let text = ds.to_text();
    let (head, rest) = text.split_once('\n').unwrap_or((&text, ""));
    format!("{head}\n{run}{rest}")
}

fn stream_seed(seed: u64, index: u64) -> u64 {
    substream(seed, index).next_u64()
}

fn tie_order(n: usize, seed: Option<u64>) -> Permutation {
    match seed {
        Some(s) => Permutation::random(n, &mut substream(s, 0)),
        None => Permutation::identity(n),
    }
}

fn csv_text(run: &str, header: &[&str], rows: &[Vec<String>]) -> Res<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).context("writing csv")?;
    for row in rows {
        w.write_record(row).context("writing csv")?;
    }
    let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("writing csv: {e}"))?;
    Ok(format!("{run}{}", String::from_utf8(bytes).context("csv is utf-8")?))
}

fn file_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn decompose(a: &DecomposeArgs) -> Res<Outputs> {
    let g = load_graph(&a.input)?;
    if g.n() > 0 && a.bfs_root >= g.n() {
        return Err(usage(format!(
            "--bfs-root {} is not a node of a {}-node graph",
            a.bfs_root,
            g.n()
        )));
    }
    let td = minimal_decomposition(&g, &tie_order(g.n(), a.seed))?;
    let report = validate_decomposition(&g, &td);
    let (n, r, k) = (g.n(), td.len(), td.width());
    let rel = |ok: bool| if ok { "<=" } else { ">" };
    let mut text = run_line("decompose", a);
    text.push_str(&td.to_text());
    text.push_str(&format!("report {report}\nwidth {k}\n"));
    text.push_str(&format!(
        "r={r} {} n-k+1={}\n",
        rel(r + k <= n + 1),
        (n + 1).saturating_sub(k)
    ));
    let bfs = bfs_layer_decomposition(&g, a.bfs_root)?;
    let layers = bfs_layers(&g, a.bfs_root, &Permutation::identity(n))?;
    let max_layer = layers.iter().map(Vec::len).max().unwrap_or(0);
    let bfs_ok = validate_decomposition(&g, &bfs).is_ok();
    text.push_str(&format!(
        "bfs root={} {} width={} {} 2*max_layer={}\n",
        a.bfs_root,
        if bfs_ok { "valid" } else { "invalid" },
        bfs.width(),
        rel(bfs.width() <= 2 * max_layer),
        2 * max_layer
    ));
    Ok(Outputs::default().to(a.out.as_deref(), text))
}

fn encode(a: &EncodeArgs) -> Res<Outputs> {
    let g = load_graph(&a.input)?;
    let ds = encode_graph(&g, &tie_order(g.n(), a.seed))?;
    Ok(Outputs::default().to(a.out.as_deref(), run_line("encode", a) + &ds.to_text()))
}

fn decode(a: &DecodeArgs) -> Res<Outputs> {
    let ds = DecisionSequence::from_text(&read(&a.input)?).with_context(|| format!("parsing {}", a.input.display()))?;
    let g = decode_graph(&ds)?;
    Ok(Outputs::default().to(a.out.as_deref(), run_line("decode", a) + &to_edge_list(&g)))
}

fn space(a: &SpaceArgs) -> Res<Outputs> {
    if a.perms == 0 {
        return Err(usage("--perms must be positive"));
    }
    let methods = a
        .methods
        .iter()
        .map(|m| m.parse::<SequenceMethod>().map_err(usage))
        .collect::<Res<Vec<_>>>()?;
    let ds = load_dataset(&a.dataset)?;
    let mut rows = Vec::with_capacity(ds.len());
    for (i, g) in ds.graphs.iter().enumerate() {
        let mut row = vec![i.to_string(), g.n().to_string(), g.edge_count().to_string()];
        for &m in &methods {
            row.push(unique_sequence_count(g, a.perms, m, stream_seed(a.seed, i as u64))?.to_string());
        }
        rows.push(row);
    }
    let mut header = vec!["graph", "n", "m"];
    header.extend(methods.iter().map(|m| m.name()));
    let text = csv_text(&run_line("space", a), &header, &rows)?;
    Ok(Outputs::default().to(a.out.as_deref(), text))
}

fn gen_dataset(a: &GenArgs) -> Res<Outputs> {
    let ds = match a.kind {
        DatasetKind::Community | DatasetKind::CommunitySmall => {
            if a.expected_backbone.is_some() || a.p1.is_some() || a.p2.is_some() {
                return Err(usage("--expected-backbone, --p1 and --p2 apply to lobster datasets"));
            }
            let base = match a.kind {
                DatasetKind::Community => CommunityParams::community(),
                _ => CommunityParams::community_small(),
            };
            let params = CommunityParams {
                count: a.count.unwrap_or(base.count),
                min_n: a.min_n.unwrap_or(base.min_n),
                max_n: a.max_n.unwrap_or(base.max_n),
                p_in: a.p_in.unwrap_or(base.p_in),
                inter_frac: a.inter_frac.unwrap_or(base.inter_frac),
            };
            match gen_community(params, a.seed) {
                Err(tdgraph::Error::InvalidArgument(m)) if !m.starts_with("no connected") => return Err(usage(m)),
                r => r?,
            }
        }
        DatasetKind::Lobster => {
            if a.min_n.is_some() || a.p_in.is_some() || a.inter_frac.is_some() {
                return Err(usage("--min-n, --p-in and --inter-frac apply to community datasets"));
            }
            let base = LobsterParams::default();
            let params = LobsterParams {
                count: a.count.unwrap_or(base.count),
                expected_backbone: a.expected_backbone.unwrap_or(base.expected_backbone),
                p1: a.p1.unwrap_or(base.p1),
                p2: a.p2.unwrap_or(base.p2),
                max_n: a.max_n.unwrap_or(base.max_n),
            };
            gen_lobster(params, a.seed).map_err(usage)?
        }
    };
    Ok(Outputs::default().to(a.out.as_deref(), dataset_text(&ds, &run_line("gen-dataset", a))))
}

fn split(a: &SplitArgs) -> Res<Outputs> {
    let ds = load_dataset(&a.dataset)?;
    let (train, valid, test) = split_dataset(&ds, a.seed)?;
    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let run = run_line("split", a);
    let mut out = Outputs::default();
    let mut summary = String::new();
    for (name, part) in [("train", &train), ("valid", &valid), ("test", &test)] {
        let path = a.out_dir.join(format!("{name}.txt"));
        out = out.to(Some(&path), dataset_text(part, &run));
        summary.push_str(&format!("{name} {} {}\n", part.len(), path.display()));
    }
    Ok(out.to(None, summary))
}

fn train(a: &TrainArgs) -> Res<Outputs> {
    if a.epochs == 0 {
        return Err(usage("--epochs must be positive"));
    }
    DecisionModel::uniform().with_alpha(a.alpha).map_err(usage)?;
    let ds = load_dataset(&a.dataset)?;
    let model = if a.trees {
        if let Some(i) = ds.graphs.iter().position(|g| !g.is_tree()) {
            return Err(Failure::Data(anyhow::anyhow!("graph {i} is not a tree")));
        }
        train_tree_model(&ds.graphs, a.alpha)?
    } else {
        train_count_model(&ds.graphs, a.epochs, a.alpha, a.seed)?
    };
    let mut doc: Value = serde_json::from_str(&model.to_json()).context("model json")?;
    doc.as_object_mut()
        .expect("model is an object")
        .insert("config".into(), config("train", a));
    let text = serde_json::to_string_pretty(&doc).context("model json")? + "\n";
    Ok(Outputs::default().to(Some(&a.out), text))
}

fn sample(a: &SampleArgs, trees: bool) -> Res<Outputs> {
    let model = load_model(&a.model)?;
    if a.count == 0 {
        return Err(usage("--count must be positive"));
    }
    let limits = SampleLimits::new(a.plr_cap.unwrap_or(model.plr_cap()), a.max_nodes).map_err(usage)?;
    let (command, name, graphs) = if trees {
        let gs = sample_trees(&model, limits.plr_cap, limits.max_nodes, a.count, a.seed)?;
        ("sample-trees", "tree-samples", gs)
    } else {
        ("sample", "samples", sample_graphs(&model, limits, a.count, a.seed)?)
    };
    let ds = Dataset::new(name, a.seed, graphs)?;
    Ok(Outputs::default().to(a.out.as_deref(), dataset_text(&ds, &run_line(command, a))))
}

fn mean_nll(model: &DecisionModel, gs: &[Graph], perms: usize, seed: u64, split: u64) -> Res<(f64, f64)> {
    let (mut expected, mut marginal) = (0.0, 0.0);
    for (i, g) in gs.iter().enumerate() {
        let r = nll(model, g, perms, stream_seed(seed, split << 32 | i as u64))?;
        expected += r.expected;
        marginal += r.marginal;
    }
    let n = gs.len() as f64;
    Ok((expected / n, marginal / n))
}

fn eval_nll(a: &EvalNllArgs) -> Res<Outputs> {
    if a.perms == 0 {
        return Err(usage("--perms must be positive"));
    }
    let model = load_model(&a.model)?;
    let train = load_dataset(&a.train)?;
    let test = load_dataset(&a.test)?;
    let mut models = vec![(file_label(&a.model), model.clone())];
    if a.baseline {
        models.push(("uniform".to_string(), uniform_model().with_plr_cap(model.plr_cap())));
    }
    let mut rows = Vec::new();
    for (label, m) in &models {
        let (tr_e, tr_m) = mean_nll(m, &train.graphs, a.perms, a.seed, 0)?;
        let (te_e, te_m) = mean_nll(m, &test.graphs, a.perms, a.seed, 1)?;
        rows.push(vec![
            label.clone(),
            train.len().to_string(),
            tr_e.to_string(),
            tr_m.to_string(),
            test.len().to_string(),
            te_e.to_string(),
            te_m.to_string(),
        ]);
    }
    let header = [
        "model",
        "train_graphs",
        "train_expected_nll",
        "train_marginal_nll",
        "test_graphs",
        "test_expected_nll",
        "test_marginal_nll",
    ];
    let text = csv_text(&run_line("eval-nll", a), &header, &rows)?;
    Ok(Outputs::default().to(a.out.as_deref(), text))
}

fn eval_stats(a: &EvalStatsArgs) -> Res<Outputs> {
    let kernel = match a.kernel {
        KernelKind::GaussianEmd => Kernel::gaussian_emd(a.sigma).map_err(usage)?,
        KernelKind::Tv => Kernel::Tv,
    };
    let reference = load_dataset(&a.reference)?;
    let generated = load_dataset(&a.generated)?;
    let mut row = vec![
        file_label(&a.reference),
        file_label(&a.generated),
        serde_json::to_value(a.kernel)
            .expect("kernel serializes")
            .as_str()
            .unwrap_or_default()
            .to_string(),
        a.sigma.to_string(),
    ];
    let mut metrics = Vec::new();
    for kind in StatKind::ALL {
        let x = statistics(&reference.graphs, kind)?;
        let y = statistics(&generated.graphs, kind)?;
        let value = mmd(&x, &y, kernel)?;
        row.push(value.to_string());
        metrics.push(json!({ "metric": kind.name(), "mmd": value, "bins": kind.binning() }));
    }
    let header = [
        "reference",
        "generated",
        "kernel",
        "sigma",
        "deg",
        "clus",
        "orbit",
        "spec",
    ];
    let text = csv_text(&run_line("eval-stats", a), &header, &[row])?;
    let mut out = Outputs::default().to(a.out.as_deref(), text);
    if let Some(path) = &a.json {
        let doc = json!({ "config": config("eval-stats", a), "metrics": metrics });
        out = out.to(
            Some(path),
            serde_json::to_string_pretty(&doc).context("stats json")? + "\n",
        );
    }
    Ok(out)
}

fn lobster_acc(a: &LobsterArgs) -> Res<Outputs> {
    let ds = load_dataset(&a.dataset)?;
    let acc = lobster_accuracy(&ds.graphs)?;
    let lobsters = ds.graphs.iter().filter(|g| tdgraph::is_lobster(g)).count();
    let row = vec![
        file_label(&a.dataset),
        ds.len().to_string(),
        lobsters.to_string(),
        acc.to_string(),
    ];
    let text = csv_text(
        &run_line("lobster-acc", a),
        &["dataset", "graphs", "lobsters", "accuracy"],
        &[row],
    )?;
    Ok(Outputs::default().to(a.out.as_deref(), text))
}

fn run(cli: Cli) -> Res<()> {
    let outputs = match &cli.command {
        Command::Decompose(a) => decompose(a),
        Command::Encode(a) => encode(a),
        Command::Decode(a) => decode(a),
        Command::Space(a) => space(a),
        Command::GenDataset(a) => gen_dataset(a),
        Command::Split(a) => split(a),
        Command::Train(a) => train(a),
        Command::Sample(a) => sample(a, false),
        Command::SampleTrees(a) => sample(a, true),
        Command::EvalNll(a) => eval_nll(a),
        Command::EvalStats(a) => eval_stats(a),
        Command::LobsterAcc(a) => lobster_acc(a),
    }?;
    outputs.write()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
