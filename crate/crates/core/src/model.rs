//! Autoregressive decision models over decision sequences: a smoothed count
//! model (uniform when empty), training by permutation replay, sampling of
//! trees and graphs, and NLL evaluation.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::RootedTree;
use crate::codec::{encode_graph, AddStep, DecisionSequence, SupernodeDecisions};
use crate::error::{Error, Result};
use crate::graph::{is_connected, Graph, Permutation};
use crate::plr::{plr_encode, PartialTree, Plr, PlrBounds};

/// Cap on the first path length used by [`DecisionModel::uniform`].
pub const DEFAULT_PLR_CAP: usize = 32;
pub const DEFAULT_ALPHA: f64 = 1.0;
/// Outcome key of the terminal `0` at the root.
pub const TERMINAL_KEY: u32 = u32::MAX;
/// Extra room above the longest first path seen in training.
const PLR_CAP_SLACK: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DecisionKind {
    TreeLength,
    Share,
    Add,
    Edge,
}

/// A decision kind with up to three small bounded features.
///
/// * TreeLength: depth of the extension point (≤ 8), whether `a > 0`, `b − a` (≤ 15)
/// * Share: bit index, parent bag size, ones so far (each ≤ 15)
/// * Add: nodes added in this bag, shared nodes (each ≤ 15)
/// * Edge: candidate index, the new node's edges so far in this bag (each ≤ 15)
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DecisionContext {
    pub kind: DecisionKind,
    pub features: [u8; 3],
}

fn cap(x: usize, c: u8) -> u8 {
    x.min(c as usize) as u8
}

impl DecisionContext {
    fn new(kind: DecisionKind, features: [u8; 3]) -> Self {
        DecisionContext { kind, features }
    }

    pub fn tree_length(depth: usize, bounds: &PlrBounds) -> Self {
        let (a, b) = bounds.range.unwrap_or((0, 0));
        Self::new(
            DecisionKind::TreeLength,
            [cap(depth, 8), u8::from(a > 0), cap(b - a, 15)],
        )
    }

    pub fn share(index: usize, parent_size: usize, ones: usize) -> Self {
        Self::new(
            DecisionKind::Share,
            [cap(index, 15), cap(parent_size, 15), cap(ones, 15)],
        )
    }

    pub fn add(added: usize, shared: usize) -> Self {
        Self::new(DecisionKind::Add, [cap(added, 15), cap(shared, 15), 0])
    }

    pub fn edge(index: usize, degree: usize) -> Self {
        Self::new(DecisionKind::Edge, [cap(index, 15), cap(degree, 15), 0])
    }
}

/// Smoothed count tables: `p(o | c) = (n(c,o) + α) / (Σ_admissible n(c,·) + α·|admissible|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecisionModel {
    alpha: f64,
    plr_cap: usize,
    tables: HashMap<DecisionContext, HashMap<u32, u64>>,
}

impl Default for DecisionModel {
    fn default() -> Self {
        Self::uniform()
    }
}

impl DecisionModel {
    /// Empty tables: every admissible outcome is equally likely.
    pub fn uniform() -> Self {
        DecisionModel {
            alpha: DEFAULT_ALPHA,
            plr_cap: DEFAULT_PLR_CAP,
            tables: HashMap::new(),
        }
    }

    pub fn with_plr_cap(mut self, plr_cap: usize) -> Self {
        self.plr_cap = plr_cap.max(1);
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
        }
        self.alpha = alpha;
        Ok(self)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn plr_cap(&self) -> usize {
        self.plr_cap
    }

    pub fn count(&self, ctx: &DecisionContext, outcome: u32) -> u64 {
        self.tables.get(ctx).and_then(|t| t.get(&outcome)).copied().unwrap_or(0)
    }

    /// Probability of `outcome` among the admissible `outcomes`.
    pub fn prob(&self, ctx: &DecisionContext, outcome: u32, outcomes: &[u32]) -> f64 {
        let table = self.tables.get(ctx);
        let c = |k: u32| table.and_then(|t| t.get(&k)).copied().unwrap_or(0) as f64;
        let total: f64 = outcomes.iter().map(|&k| c(k)).sum();
        (c(outcome) + self.alpha) / (total + self.alpha * outcomes.len() as f64)
    }

    fn observe(&mut self, ctx: DecisionContext, outcome: u32, n: u64) {
        *self.tables.entry(ctx).or_default().entry(outcome).or_insert(0) += n;
    }

    fn merge(&mut self, counts: Counts) {
        for ((ctx, o), n) in counts {
            self.observe(ctx, o, n);
        }
    }

    /// Distribution of the next PLR entry after `prefix`, as (length, probability).
    pub fn tree_length_probs(&self, prefix: &[usize]) -> Result<Vec<(usize, f64)>> {
        let t = PartialTree::from_prefix(prefix)?;
        let b = t.bounds(self.plr_cap)?;
        let ctx = DecisionContext::tree_length(t.depth(t.extension_point()), &b);
        let opts = tree_options(&b);
        let keys: Vec<u32> = opts.iter().map(|o| o.key).collect();
        Ok(opts.iter().map(|o| (o.value, self.prob(&ctx, o.key, &keys))).collect())
    }

    pub fn to_json(&self) -> String {
        let mut records: Vec<Record> = self
            .tables
            .iter()
            .flat_map(|(ctx, t)| {
                t.iter().map(move |(&outcome, &count)| Record {
                    kind: ctx.kind,
                    context: ctx.features,
                    outcome,
                    count,
                })
            })
            .collect();
        records.sort_by_key(|r| (r.kind, r.context, r.outcome));
        let file = ModelFile {
            format: MODEL_FORMAT.to_string(),
            alpha: self.alpha,
            plr_cap: self.plr_cap,
            records,
        };
        serde_json::to_string_pretty(&file).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
        if file.format != MODEL_FORMAT {
            return Err(Error::Model(format!("unknown format {:?}", file.format)));
        }
        let mut m = DecisionModel::uniform()
            .with_plr_cap(file.plr_cap)
            .with_alpha(file.alpha)
            .map_err(|e| Error::Model(e.to_string()))?;
        for r in file.records {
            m.observe(DecisionContext::new(r.kind, r.context), r.outcome, r.count);
        }
        Ok(m)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

pub fn uniform_model() -> DecisionModel {
    DecisionModel::uniform()
}

const MODEL_FORMAT: &str = "tdgraph-count-model/1";

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    alpha: f64,
    plr_cap: usize,
    records: Vec<Record>,
}

#[derive(Serialize, Deserialize)]
struct Record {
    kind: DecisionKind,
    context: [u8; 3],
    outcome: u32,
    count: u64,
}

type Counts = BTreeMap<(DecisionContext, u32), u64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Opt {
    key: u32,
    value: usize,
}

fn tree_options(b: &PlrBounds) -> Vec<Opt> {
    let mut out = Vec::with_capacity(b.count());
    if b.at_root && b.terminal_zero_allowed {
        out.push(Opt {
            key: TERMINAL_KEY,
            value: 0,
        });
    }
    if let Some((lo, hi)) = b.range {
        out.extend((lo..=hi).map(|l| Opt {
            key: (l - lo) as u32,
            value: l,
        }));
    }
    out
}

fn bit_options(allow0: bool, allow1: bool) -> Vec<Opt> {
    let mut out = Vec::with_capacity(2);
    if allow0 {
        out.push(Opt { key: 0, value: 0 });
    }
    if allow1 {
        out.push(Opt { key: 1, value: 1 });
    }
    out
}

/// Supplies every decision of the generation process.
trait Chooser {
    /// Picks one of `options`; called for forced decisions too.
    fn choose(&mut self, ctx: DecisionContext, options: &[Opt]) -> Result<usize>;

    /// Cap to apply to the next PLR entry.
    fn tree_cap(&mut self, cap: usize) -> usize {
        cap
    }
}

/// Limits that only apply while sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleLimits {
    pub plr_cap: usize,
    pub max_nodes: usize,
}

impl SampleLimits {
    pub fn new(plr_cap: usize, max_nodes: usize) -> Result<Self> {
        if plr_cap == 0 || max_nodes == 0 {
            return Err(Error::InvalidArgument("plr_cap and max_nodes must be positive".into()));
        }
        Ok(SampleLimits { plr_cap, max_nodes })
    }
}

/// Whether adding a path of `len` nodes keeps a completion within `limit` tree nodes.
fn fits_tree_limit(t: &PartialTree, len: usize, limit: usize) -> bool {
    if len == 0 {
        return true;
    }
    let first = if t.root_children() == 0 {
        len
    } else {
        t.first_path_len()
    };
    let opens_second = t.extension_point() == 0 && t.root_children() == 1;
    // A lone first branch deeper than one node forces a second branch of length ≥ first − 1.
    let reserve = if t.root_children() == 0 || (t.root_children() == 1 && !opens_second) {
        first.saturating_sub(1)
    } else {
        0
    };
    t.node_count() + len + reserve <= limit
}

fn drive_tree<C: Chooser>(chooser: &mut C, cap: usize, limit: Option<usize>) -> Result<(PartialTree, Vec<usize>)> {
    let mut t = PartialTree::new();
    let mut plr = Vec::new();
    while !t.is_complete() {
        let cap_here = chooser.tree_cap(cap);
        let b = t.bounds(cap_here)?;
        let ctx = DecisionContext::tree_length(t.depth(t.extension_point()), &b);
        let mut opts = tree_options(&b);
        if let Some(limit) = limit {
            opts.retain(|o| fits_tree_limit(&t, o.value, limit));
        }
        if opts.is_empty() {
            return Err(Error::MalformedSequence("no admissible tree length".into()));
        }
        let l = opts[chooser.choose(ctx, &opts)?].value;
        t.push(l)?;
        plr.push(l);
    }
    Ok((t, plr))
}

struct DrivenGraph {
    graph: Graph,
    members: Vec<Vec<usize>>,
    supernodes: Vec<SupernodeDecisions>,
}

/// Connected-component label of every node.
fn component_labels(g: &Graph) -> Vec<usize> {
    let mut label = vec![usize::MAX; g.n()];
    let mut next = 0;
    for s in 0..g.n() {
        if label[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        label[s] = next;
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if label[v] == usize::MAX {
                    label[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    label
}

/// Runs the bag-by-bag node-sharing / node-adding / edge decisions over `tree`
/// (supernodes numbered in canonical order). `max_nodes` turns on the sampler
/// guards that keep the output connected and bounded.
fn drive_graph<C: Chooser>(tree: &RootedTree, chooser: &mut C, max_nodes: Option<usize>) -> Result<DrivenGraph> {
    let r = tree.len();
    let mut g = Graph::new(0);
    let mut members: Vec<Vec<usize>> = Vec::with_capacity(r);
    let mut supernodes = Vec::with_capacity(r);
    let bit = |c: &mut C, ctx, opts: &[Opt]| -> Result<bool> {
        if opts.is_empty() {
            return Err(Error::MalformedSequence("no admissible decision".into()));
        }
        Ok(opts[c.choose(ctx, opts)?].value == 1)
    };
    for i in 0..r {
        let remaining = r - i - 1;
        let mut present = Vec::new();
        let mut sharing = Vec::new();
        if let Some(p) = tree.parent(i) {
            let m = members[p].len();
            let mut ones = 0;
            for (j, &member) in members[p].iter().enumerate() {
                let last = j + 1 == m;
                // Non-empty and proper: the child meets its parent without swallowing it.
                let opts = bit_options(!(last && ones == 0), !(last && ones + 1 == m));
                let b = bit(chooser, DecisionContext::share(j, m, ones), &opts)?;
                sharing.push(b);
                if b {
                    present.push(member);
                    ones += 1;
                }
            }
        }
        let shared = present.len();
        let mut adds = Vec::new();
        loop {
            let v = g.add_node();
            let last_allowed = max_nodes.is_some_and(|mx| g.n() + 1 + remaining > mx);
            // The last node this bag may add must join every component among the members.
            let labels = if last_allowed { component_labels(&g) } else { Vec::new() };
            let mut last_of = HashMap::new();
            if last_allowed {
                for (idx, &m) in present.iter().enumerate() {
                    last_of.insert(labels[m], idx);
                }
            }
            let mut hit = std::collections::HashSet::new();
            let mut edges = Vec::with_capacity(present.len());
            let mut degree = 0;
            for (idx, &m) in present.iter().enumerate() {
                let forced = last_allowed && last_of[&labels[m]] == idx && !hit.contains(&labels[m]);
                let opts = bit_options(!forced, true);
                let e = bit(chooser, DecisionContext::edge(idx, degree), &opts)?;
                if e {
                    g.add_edge(v, m)?;
                    degree += 1;
                    if last_allowed {
                        hit.insert(labels[m]);
                    }
                }
                edges.push(e);
            }
            present.push(v);
            adds.push(AddStep::add(edges));
            let added = present.len() - shared;
            let root_needs_more = i == 0 && r >= 2 && added == 1;
            let mut allow_add = true;
            let mut allow_stop = !root_needs_more;
            if let Some(mx) = max_nodes {
                allow_add = g.n() + 1 + remaining <= mx;
                allow_stop &= is_connected(&g);
                if root_needs_more {
                    allow_add = true;
                }
            }
            let more = bit(
                chooser,
                DecisionContext::add(added, shared),
                &bit_options(allow_stop, allow_add),
            )?;
            if !more {
                adds.push(AddStep::stop());
                break;
            }
        }
        members.push(present);
        supernodes.push(SupernodeDecisions { sharing, adds });
    }
    Ok(DrivenGraph {
        graph: g,
        members,
        supernodes,
    })
}

/// Replays a known sequence, accumulating log-probability and counts.
struct Replay<'a> {
    model: &'a DecisionModel,
    events: Vec<usize>,
    cursor: usize,
    log_prob: f64,
    counts: Option<Counts>,
}

impl<'a> Replay<'a> {
    fn new(model: &'a DecisionModel, ds: &DecisionSequence, record: bool) -> Self {
        Replay {
            model,
            events: flatten(ds),
            cursor: 0,
            log_prob: 0.0,
            counts: record.then(Counts::new),
        }
    }
}

impl Chooser for Replay<'_> {
    fn choose(&mut self, ctx: DecisionContext, options: &[Opt]) -> Result<usize> {
        let want = *self
            .events
            .get(self.cursor)
            .ok_or_else(|| Error::MalformedSequence("sequence ends early".into()))?;
        self.cursor += 1;
        let idx = options.iter().position(|o| o.value == want).ok_or_else(|| {
            Error::MalformedSequence(format!("decision {} value {want} is not admissible", self.cursor - 1))
        })?;
        if options.len() >= 2 {
            let keys: Vec<u32> = options.iter().map(|o| o.key).collect();
            self.log_prob += self.model.prob(&ctx, options[idx].key, &keys).ln();
            if let Some(c) = self.counts.as_mut() {
                *c.entry((ctx, options[idx].key)).or_insert(0) += 1;
            }
        }
        Ok(idx)
    }

    fn tree_cap(&mut self, cap: usize) -> usize {
        cap.max(self.events.get(self.cursor).copied().unwrap_or(0))
    }
}

/// Decision values in generation order: PLR entries, then per supernode the
/// sharing bits, the first node's edge bits, and for every later record its
/// add bit followed by its edge bits.
fn flatten(ds: &DecisionSequence) -> Vec<usize> {
    let mut out: Vec<usize> = ds.tree_plr.lengths().to_vec();
    for s in &ds.supernodes {
        out.extend(s.sharing.iter().map(|&b| usize::from(b)));
        for (j, a) in s.adds.iter().enumerate() {
            if j > 0 {
                out.push(usize::from(a.add));
            }
            out.extend(a.edges.iter().map(|&b| usize::from(b)));
        }
    }
    out
}

fn replay_sequence(model: &DecisionModel, ds: &DecisionSequence, record: bool) -> Result<(f64, Option<Counts>)> {
    let mut rp = Replay::new(model, ds, record);
    let (tree, _) = drive_tree(&mut rp, model.plr_cap, None)?;
    drive_graph(&tree.to_rooted_tree(), &mut rp, None)?;
    if rp.cursor != rp.events.len() {
        return Err(Error::MalformedSequence("trailing decisions".into()));
    }
    Ok((rp.log_prob, rp.counts))
}

/// Natural log-probability of a decision sequence; forced decisions contribute nothing.
pub fn log_prob(model: &DecisionModel, ds: &DecisionSequence) -> Result<f64> {
    replay_sequence(model, ds, false).map(|(lp, _)| lp)
}

struct Sampler<'a, R: Rng> {
    model: &'a DecisionModel,
    rng: &'a mut R,
}

impl<R: Rng> Chooser for Sampler<'_, R> {
    fn choose(&mut self, ctx: DecisionContext, options: &[Opt]) -> Result<usize> {
        if options.len() == 1 {
            return Ok(0);
        }
        let keys: Vec<u32> = options.iter().map(|o| o.key).collect();
        let u: f64 = self.rng.gen();
        let mut acc = 0.0;
        for (i, o) in options.iter().enumerate() {
            acc += self.model.prob(&ctx, o.key, &keys);
            if u < acc {
                return Ok(i);
            }
        }
        Ok(options.len() - 1)
    }
}

/// Samples a PLR with at most `max_nodes` tree nodes.
pub fn sample_plr<R: Rng>(model: &DecisionModel, plr_cap: usize, max_nodes: usize, rng: &mut R) -> Result<Plr> {
    let limits = SampleLimits::new(plr_cap, max_nodes)?;
    let mut s = Sampler { model, rng };
    let (_, plr) = drive_tree(&mut s, limits.plr_cap, Some(limits.max_nodes))?;
    Ok(Plr::new(plr))
}

pub fn sample_tree(model: &DecisionModel, plr_cap: usize, max_nodes: usize, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plr = sample_plr(model, plr_cap, max_nodes, &mut rng)?;
    Ok(crate::plr::plr_decode(&plr)?.to_graph())
}

/// Samples a full decision sequence; the decoded graph is connected and has at most `max_nodes` nodes.
pub fn sample_sequence<R: Rng>(model: &DecisionModel, limits: SampleLimits, rng: &mut R) -> Result<DecisionSequence> {
    let limits = SampleLimits::new(limits.plr_cap, limits.max_nodes)?;
    let mut s = Sampler { model, rng };
    // Every supernode past the root needs a fresh node and the root needs two.
    let tree_limit = limits.max_nodes.saturating_sub(1).max(1);
    let (tree, plr) = drive_tree(&mut s, limits.plr_cap, Some(tree_limit))?;
    let driven = drive_graph(&tree.to_rooted_tree(), &mut s, Some(limits.max_nodes))?;
    debug_assert_eq!(driven.members.len(), driven.supernodes.len());
    debug_assert!(is_connected(&driven.graph));
    Ok(DecisionSequence {
        tree_plr: Plr::new(plr),
        supernodes: driven.supernodes,
    })
}

pub fn sample_graph(model: &DecisionModel, limits: SampleLimits, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    crate::codec::decode_graph(&sample_sequence(model, limits, &mut rng)?)
}

/// Random stream for the `index`-th item of a seeded batch.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `count` graphs sampled in parallel, each from its own substream of `seed`.
pub fn sample_graphs(model: &DecisionModel, limits: SampleLimits, count: usize, seed: u64) -> Result<Vec<Graph>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i);
            crate::codec::decode_graph(&sample_sequence(model, limits, &mut rng)?)
        })
        .collect()
}

pub fn sample_trees(
    model: &DecisionModel,
    plr_cap: usize,
    max_nodes: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<Graph>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let plr = sample_plr(model, plr_cap, max_nodes, &mut substream(seed, i))?;
            Ok(crate::plr::plr_decode(&plr)?.to_graph())
        })
        .collect()
}

/// Counts every charged decision of one fresh permutation per graph per epoch.
pub fn train_count_model(graphs: &[Graph], epochs: usize, alpha: f64, seed: u64) -> Result<DecisionModel> {
    if epochs == 0 {
        return Err(Error::InvalidArgument("epochs must be positive".into()));
    }
    if graphs.is_empty() {
        return Err(Error::Empty("no training graphs".into()));
    }
    if let Some(i) = graphs.iter().position(|g| !is_connected(g) || g.n() == 0) {
        return Err(Error::InvalidArgument(format!("training graph {i} is not connected")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jobs = Vec::with_capacity(epochs * graphs.len());
    for _ in 0..epochs {
        for g in graphs {
            jobs.push((g, Permutation::random(g.n(), &mut rng)));
        }
    }
    let seqs = jobs
        .par_iter()
        .map(|(g, p)| encode_graph(g, p))
        .collect::<Result<Vec<_>>>()?;
    let longest = seqs.iter().map(|s| s.tree_plr.lengths()[0]).max().unwrap_or(0);
    let mut model = DecisionModel::uniform()
        .with_alpha(alpha)?
        .with_plr_cap(longest + PLR_CAP_SLACK);
    record_all(&mut model, &seqs)?;
    Ok(model)
}

fn record_all(model: &mut DecisionModel, seqs: &[DecisionSequence]) -> Result<()> {
    let base = model.clone();
    let parts = seqs
        .par_iter()
        .map(|s| replay_sequence(&base, s, true).map(|(_, c)| c.expect("recording")))
        .collect::<Result<Vec<_>>>()?;
    for c in parts {
        model.merge(c);
    }
    Ok(())
}

/// Tree-only model from the PLRs of the given trees (the tree itself, not a decomposition).
pub fn train_tree_model(trees: &[Graph], alpha: f64) -> Result<DecisionModel> {
    if trees.is_empty() {
        return Err(Error::Empty("no training trees".into()));
    }
    let plrs = trees.iter().map(plr_encode).collect::<Result<Vec<_>>>()?;
    let longest = plrs.iter().map(|p| p.lengths()[0]).max().unwrap_or(0);
    let mut model = DecisionModel::uniform()
        .with_alpha(alpha)?
        .with_plr_cap(longest + PLR_CAP_SLACK);
    let base = model.clone();
    for plr in &plrs {
        let ds = DecisionSequence {
            tree_plr: plr.clone(),
            supernodes: Vec::new(),
        };
        let mut rp = Replay::new(&base, &ds, true);
        drive_tree(&mut rp, base.plr_cap, None)?;
        model.merge(rp.counts.expect("recording"));
    }
    Ok(model)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NllResult {
    pub per_perm: Vec<f64>,
    pub expected: f64,
    pub marginal: f64,
    pub std_error: f64,
    pub distinct: usize,
}

/// Negative log-likelihood of `g` over `n_perms` seeded permutations.
pub fn nll(model: &DecisionModel, g: &Graph, n_perms: usize, seed: u64) -> Result<NllResult> {
    if n_perms == 0 {
        return Err(Error::InvalidArgument("n_perms must be positive".into()));
    }
    if !is_connected(g) || g.n() == 0 {
        return Err(Error::Disconnected);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perms: Vec<Permutation> = (0..n_perms).map(|_| Permutation::random(g.n(), &mut rng)).collect();
    let scored = perms
        .par_iter()
        .map(|p| {
            let ds = encode_graph(g, p)?;
            Ok((ds.to_bytes(), log_prob(model, &ds)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let per_perm: Vec<f64> = scored.iter().map(|(_, lp)| -lp).collect();
    let distinct: BTreeMap<&[u8], f64> = scored.iter().map(|(k, lp)| (k.as_slice(), *lp)).collect();
    let lps: Vec<f64> = distinct.values().copied().collect();
    let max = lps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let marginal = -(max + lps.iter().map(|lp| (lp - max).exp()).sum::<f64>().ln());
    let n = per_perm.len() as f64;
    let expected = per_perm.iter().sum::<f64>() / n;
    let std_error = if per_perm.len() > 1 {
        let var = per_perm.iter().map(|x| (x - expected).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok(NllResult {
        per_perm,
        expected,
        marginal,
        std_error,
        distinct: lps.len(),
    })
}
