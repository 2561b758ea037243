//! Synthetic datasets (two-community graphs, lobster trees), the multi-graph
//! text format and 70/10/20 splitting.

use std::path::Path;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{is_connected, Graph};
use crate::model::substream;

const MAX_RESAMPLES: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    pub name: String,
    pub seed: u64,
    pub graphs: Vec<Graph>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, seed: u64, graphs: Vec<Graph>) -> Result<Self> {
        if let Some(i) = graphs.iter().position(|g| g.n() == 0 || !is_connected(g)) {
            return Err(Error::InvalidArgument(format!("graph {i} is not connected")));
        }
        Ok(Dataset {
            name: name.into(),
            seed,
            graphs,
        })
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// `# dataset <name> <seed>`, then per graph `# graph <index> <n>` and its edges,
    /// blocks separated by blank lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("# dataset {} {}\n", self.name, self.seed);
        for (i, g) in self.graphs.iter().enumerate() {
            out.push_str(&format!("\n# graph {i} {}\n", g.n()));
            for (u, v) in g.edges() {
                out.push_str(&format!("{u} {v}\n"));
            }
        }
        out
    }

    /// Parses the multi-graph format. A file without `# graph` headers is read as
    /// a single plain edge list.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut name = String::from("dataset");
        let mut seed = 0;
        let mut blocks: Vec<(usize, Vec<(usize, usize)>)> = Vec::new();
        let mut plain = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            let bad = |message: &str| Error::Parse {
                line: line_no,
                message: message.to_string(),
            };
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                match fields.first() {
                    Some(&"graph") => {
                        let parsed = (fields.len() == 3)
                            .then(|| Some((fields[1].parse::<usize>().ok()?, fields[2].parse::<usize>().ok()?)))
                            .flatten();
                        let (i, n) = parsed.ok_or_else(|| bad("expected `# graph <index> <n>`"))?;
                        if i != blocks.len() {
                            return Err(bad("graph index out of sequence"));
                        }
                        blocks.push((n, Vec::new()));
                    }
                    Some(&"dataset") if blocks.is_empty() && fields.len() == 3 => {
                        name = fields[1].to_string();
                        seed = fields[2].parse().map_err(|_| bad("bad dataset seed"))?;
                    }
                    _ => {}
                }
                continue;
            }
            match blocks.last_mut() {
                Some((n, edges)) => {
                    let t: Vec<&str> = line.split_whitespace().collect();
                    let pair = (t.len() == 2)
                        .then(|| Some((t[0].parse::<usize>().ok()?, t[1].parse::<usize>().ok()?)))
                        .flatten();
                    let (u, v) = pair.ok_or_else(|| bad("expected an edge `u v`"))?;
                    if u >= *n || v >= *n {
                        return Err(Error::NodeOutOfRange { node: u.max(v), n: *n });
                    }
                    edges.push((u, v));
                }
                None => {
                    plain.push_str(line);
                    plain.push('\n');
                }
            }
        }
        let graphs = if blocks.is_empty() {
            if plain.is_empty() {
                return Err(Error::Empty("no graphs".into()));
            }
            vec![crate::graph::parse_edge_list(&plain)?]
        } else {
            if !plain.is_empty() {
                return Err(Error::Parse {
                    line: 1,
                    message: "edges before the first graph header".into(),
                });
            }
            blocks
                .into_iter()
                .map(|(n, edges)| Graph::from_edges(n, edges))
                .collect::<Result<Vec<_>>>()?
        };
        if let Some(i) = graphs.iter().position(|g| g.n() == 0 || !is_connected(g)) {
            return Err(Error::InvalidArgument(format!("graph {i} is not connected")));
        }
        Ok(Dataset { name, seed, graphs })
    }
}

pub fn save_dataset(ds: &Dataset, path: &Path) -> Result<()> {
    std::fs::write(path, ds.to_text())?;
    Ok(())
}

pub fn load_dataset(path: &Path) -> Result<Dataset> {
    Dataset::from_text(&std::fs::read_to_string(path)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommunityParams {
    pub count: usize,
    pub min_n: usize,
    pub max_n: usize,
    pub p_in: f64,
    pub inter_frac: f64,
}

impl CommunityParams {
    pub fn community() -> Self {
        CommunityParams {
            count: 500,
            min_n: 60,
            max_n: 160,
            p_in: 0.7,
            inter_frac: 0.05,
        }
    }

    pub fn community_small() -> Self {
        CommunityParams {
            min_n: 12,
            max_n: 20,
            ..Self::community()
        }
    }
}

/// Two-community graphs: halves of sizes ⌈n/2⌉ and ⌊n/2⌋ with i.i.d. intra edges
/// and ⌈inter_frac·n⌉ distinct inter edges, resampled until connected.
pub fn gen_community(params: CommunityParams, seed: u64) -> Result<Dataset> {
    let CommunityParams {
        count,
        min_n,
        max_n,
        p_in,
        inter_frac,
    } = params;
    if min_n < 4 || min_n > max_n {
        return Err(Error::InvalidArgument(format!(
            "need 4 <= min_n <= max_n, got {min_n}..{max_n}"
        )));
    }
    if !(p_in > 0.0 && p_in <= 1.0) {
        return Err(Error::InvalidArgument(format!("p_in must lie in (0,1], got {p_in}")));
    }
    if !(inter_frac > 0.0 && inter_frac.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "inter_frac must be positive, got {inter_frac}"
        )));
    }
    let graphs = (0..count as u64)
        .into_par_iter()
        .map(|i| community_graph(&mut substream(seed, i), min_n, max_n, p_in, inter_frac))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new("community", seed, graphs)
}

fn community_graph<R: Rng>(rng: &mut R, min_n: usize, max_n: usize, p_in: f64, inter_frac: f64) -> Result<Graph> {
    let n = rng.gen_range(min_n..=max_n);
    for _ in 0..MAX_RESAMPLES {
        let g = community_draw(rng, n, p_in, inter_frac);
        if is_connected(&g) {
            return Ok(g);
        }
    }
    Err(Error::InvalidArgument(format!(
        "no connected community graph with n={n} after {MAX_RESAMPLES} draws"
    )))
}

/// One two-community draw on `n` nodes, before any connectivity check.
pub fn community_draw<R: Rng>(rng: &mut R, n: usize, p_in: f64, inter_frac: f64) -> Graph {
    let (a, b) = (n.div_ceil(2), n / 2);
    let inter = ((inter_frac * n as f64).ceil() as usize).min(a * b);
    let mut g = Graph::new(n);
    for (lo, hi) in [(0, a), (a, n)] {
        for u in lo..hi {
            for v in u + 1..hi {
                if rng.gen_bool(p_in) {
                    g.add_edge(u, v).expect("distinct in range");
                }
            }
        }
    }
    for k in index::sample(rng, a * b, inter) {
        g.add_edge(k / b, a + k % b).expect("distinct in range");
    }
    g
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LobsterParams {
    pub count: usize,
    pub expected_backbone: f64,
    pub p1: f64,
    pub p2: f64,
    pub max_n: usize,
}

impl Default for LobsterParams {
    fn default() -> Self {
        LobsterParams {
            count: 100,
            expected_backbone: 40.0,
            p1: 0.7,
            p2: 0.7,
            max_n: 100,
        }
    }
}

/// Lobster trees: a geometric-length backbone, level-1 leaves on backbone nodes
/// and level-2 leaves on level-1 nodes, each added while a coin keeps landing
/// heads; growth stops at `max_n` nodes.
pub fn gen_lobster(params: LobsterParams, seed: u64) -> Result<Dataset> {
    let LobsterParams {
        count,
        expected_backbone,
        p1,
        p2,
        max_n,
    } = params;
    if !(0.0..1.0).contains(&p1) || !(0.0..1.0).contains(&p2) {
        return Err(Error::InvalidArgument("p1 and p2 must lie in [0,1)".into()));
    }
    if !(expected_backbone >= 2.0 && expected_backbone.is_finite()) {
        return Err(Error::InvalidArgument("expected_backbone must be at least 2".into()));
    }
    if max_n == 0 {
        return Err(Error::InvalidArgument("max_n must be positive".into()));
    }
    let graphs = (0..count as u64)
        .into_par_iter()
        .map(|i| lobster(&mut substream(seed, i), expected_backbone, p1, p2, max_n))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new("lobster", seed, graphs)
}

fn lobster<R: Rng>(rng: &mut R, expected_backbone: f64, p1: f64, p2: f64, max_n: usize) -> Result<Graph> {
    let p = 1.0 / expected_backbone;
    let mut len = 1;
    while len < max_n && !rng.gen_bool(p) {
        len += 1;
    }
    let mut g = Graph::new(len);
    for v in 1..len {
        g.add_edge(v - 1, v)?;
    }
    let mut level1 = Vec::new();
    for v in 0..len {
        while g.n() < max_n && rng.gen_bool(p1) {
            let u = g.add_node();
            g.add_edge(v, u)?;
            level1.push(u);
        }
    }
    for v in level1 {
        while g.n() < max_n && rng.gen_bool(p2) {
            let u = g.add_node();
            g.add_edge(v, u)?;
        }
    }
    Ok(g)
}

/// Seeded shuffle into train/validation/test with ⌊70%⌋, ⌊10%⌋ and the rest.
pub fn split_dataset(ds: &Dataset, seed: u64) -> Result<(Dataset, Dataset, Dataset)> {
    let n = ds.len();
    if n < 10 {
        return Err(Error::InvalidArgument(format!(
            "need at least 10 graphs to split, got {n}"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_train = n * 7 / 10;
    let n_val = n / 10;
    let part = |name: &str, idx: &[usize]| Dataset {
        name: format!("{}-{name}", ds.name),
        seed: ds.seed,
        graphs: idx.iter().map(|&i| ds.graphs[i].clone()).collect(),
    };
    Ok((
        part("train", &order[..n_train]),
        part("validation", &order[n_train..n_train + n_val]),
        part("test", &order[n_train + n_val..]),
    ))
}
