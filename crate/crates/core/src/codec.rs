//! Graph ↔ decision-sequence codec over minimal tree decompositions, plus the
//! BFS/DFS adjacency baselines used for counting distinct sequences.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::decomp::{minimal_decomposition, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{bfs_order, dfs_order, is_connected, Graph, Permutation};
use crate::plr::{plr_of_rooted, PartialTree, Plr};

/// One node-adding decision and, when it adds, the new node's edges to the bag
/// members already present (in insertion order).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AddStep {
    pub add: bool,
    pub edges: Vec<bool>,
}

impl AddStep {
    pub fn add(edges: Vec<bool>) -> Self {
        AddStep { add: true, edges }
    }

    pub fn stop() -> Self {
        AddStep {
            add: false,
            edges: Vec::new(),
        }
    }
}

/// Decisions of one supernode.
///
/// `sharing` has one bit per parent-bag member in the parent's insertion order
/// and is empty for the root. `adds` always starts with an add (implicit, not a
/// real choice) and ends with a stop.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SupernodeDecisions {
    pub sharing: Vec<bool>,
    pub adds: Vec<AddStep>,
}

impl SupernodeDecisions {
    pub fn new_nodes(&self) -> usize {
        self.adds.iter().filter(|a| a.add).count()
    }
}

/// A tree PLR followed by per-supernode decisions in canonical order, root first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecisionSequence {
    pub tree_plr: Plr,
    pub supernodes: Vec<SupernodeDecisions>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecisionCounts {
    pub tree_steps: usize,
    pub sharing_steps: usize,
    pub add_steps: usize,
    pub edge_steps: usize,
}

impl DecisionCounts {
    pub fn total(&self) -> usize {
        self.tree_steps + self.sharing_steps + self.add_steps + self.edge_steps
    }

    /// Worst-case accounting for `n` nodes, `r` supernodes and width `k`.
    pub fn within_bounds(&self, n: usize, r: usize, k: usize) -> bool {
        let km1 = k.saturating_sub(1);
        self.tree_steps == r
            && self.sharing_steps <= r.saturating_sub(1) * k
            && self.edge_steps <= n * km1
            && self.add_steps <= 2 * n
            && self.total() <= r + r.saturating_sub(1) * k + 2 * n + n * km1
    }
}

fn bit_char(b: bool) -> char {
    if b {
        '1'
    } else {
        '0'
    }
}

fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| bit_char(b)).collect()
}

fn parse_bits(s: &str, line: usize) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Parse {
                line,
                message: format!("bad bit {c:?}"),
            }),
        })
        .collect()
}

impl DecisionSequence {
    /// Number of graph nodes the sequence builds.
    pub fn node_count(&self) -> usize {
        self.supernodes.iter().map(SupernodeDecisions::new_nodes).sum()
    }

    /// Line-oriented text form.
    ///
    /// ```text
    /// plr 1,0
    /// supernode 0
    /// share
    /// add
    /// add 1
    /// stop
    /// supernode 1
    /// share 01
    /// add 1
    /// stop
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = format!("plr {}\n", self.tree_plr);
        for (i, s) in self.supernodes.iter().enumerate() {
            out.push_str(&format!("supernode {i}\n"));
            out.push_str(format!("share {}", bits_to_string(&s.sharing)).trim_end());
            out.push('\n');
            for a in &s.adds {
                if a.add {
                    out.push_str(format!("add {}", bits_to_string(&a.edges)).trim_end());
                } else {
                    out.push_str("stop");
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut plr = None;
        let mut supernodes: Vec<SupernodeDecisions> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let (key, rest) = l.split_once(' ').map_or((l, ""), |(k, r)| (k, r.trim()));
            let bad = |message: String| Error::Parse { line, message };
            match key {
                "plr" if plr.is_none() => plr = Some(rest.parse::<Plr>()?),
                "supernode" => {
                    let idx: usize = rest.parse().map_err(|_| bad("bad supernode index".into()))?;
                    if plr.is_none() || idx != supernodes.len() {
                        return Err(bad(format!("unexpected supernode {idx}")));
                    }
                    supernodes.push(SupernodeDecisions::default());
                }
                "share" | "add" | "stop" => {
                    let s = supernodes
                        .last_mut()
                        .ok_or_else(|| bad(format!("`{key}` outside a supernode")))?;
                    match key {
                        "share" => s.sharing = parse_bits(rest, line)?,
                        "add" => s.adds.push(AddStep::add(parse_bits(rest, line)?)),
                        _ if rest.is_empty() => s.adds.push(AddStep::stop()),
                        _ => return Err(bad("`stop` takes no bits".into())),
                    }
                }
                _ => return Err(bad(format!("unexpected line {l:?}"))),
            }
        }
        let tree_plr = plr.ok_or_else(|| Error::Empty("no plr line".into()))?;
        Ok(DecisionSequence { tree_plr, supernodes })
    }

    /// Compact byte form used to compare sequences: the PLR, `|`, then per
    /// supernode the sharing bits, `:`, `1<edge bits>/` per add, `0` for stop, `;`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.tree_plr.to_string().into_bytes();
        out.push(b'|');
        for s in &self.supernodes {
            out.extend(s.sharing.iter().map(|&b| bit_char(b) as u8));
            out.push(b':');
            for a in &s.adds {
                if a.add {
                    out.push(b'1');
                    out.extend(a.edges.iter().map(|&b| bit_char(b) as u8));
                    out.push(b'/');
                } else {
                    out.push(b'0');
                }
            }
            out.push(b';');
        }
        out
    }
}

impl fmt::Display for DecisionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Encodes `g` under the node ordering `perm`.
pub fn encode_graph(g: &Graph, perm: &Permutation) -> Result<DecisionSequence> {
    let td = minimal_decomposition(g, perm)?;
    encode_with(g, perm, &td)
}

/// Encodes `g` along a decomposition already numbered in canonical order.
pub fn encode_with(g: &Graph, perm: &Permutation, td: &TreeDecomposition) -> Result<DecisionSequence> {
    let tree_plr = plr_of_rooted(td.tree());
    let r = td.len();
    let mut members: Vec<Vec<usize>> = Vec::with_capacity(r);
    let mut supernodes = Vec::with_capacity(r);
    for i in 0..r {
        let bag = td.bag(i);
        let in_bag = |v: &usize| bag.binary_search(v).is_ok();
        let (sharing, mut present): (Vec<bool>, Vec<usize>) = match td.tree().parent(i) {
            None => (Vec::new(), Vec::new()),
            Some(p) => {
                if p >= i {
                    return Err(Error::InvalidDecomposition("supernodes not in canonical order".into()));
                }
                let bits: Vec<bool> = members[p].iter().map(in_bag).collect();
                let shared = members[p].iter().copied().filter(in_bag).collect();
                (bits, shared)
            }
        };
        if td.tree().parent(i).is_some() && present.is_empty() {
            return Err(Error::EmptySharing(i));
        }
        let mut fresh: Vec<usize> = bag.iter().copied().filter(|v| !present.contains(v)).collect();
        if fresh.is_empty() {
            return Err(Error::EmptyBag(i));
        }
        fresh.sort_by_key(|&v| perm.rank(v));
        let mut adds = Vec::with_capacity(fresh.len() + 1);
        for v in fresh {
            adds.push(AddStep::add(present.iter().map(|&m| g.has_edge(v, m)).collect()));
            present.push(v);
        }
        adds.push(AddStep::stop());
        members.push(present);
        supernodes.push(SupernodeDecisions { sharing, adds });
    }
    Ok(DecisionSequence { tree_plr, supernodes })
}

/// A decoded graph with the bags and insertion orders of its replayed decomposition.
#[derive(Clone, Debug)]
pub struct Replay {
    pub graph: Graph,
    pub decomposition: TreeDecomposition,
    /// Bag members per supernode in insertion order.
    pub members: Vec<Vec<usize>>,
}

pub fn decode_graph(ds: &DecisionSequence) -> Result<Graph> {
    replay(ds).map(|r| r.graph)
}

/// Decodes a sequence, keeping the replayed decomposition.
pub fn replay(ds: &DecisionSequence) -> Result<Replay> {
    let malformed = |m: String| Error::MalformedSequence(m);
    let tree = PartialTree::from_prefix(ds.tree_plr.lengths())?;
    if !tree.is_complete() {
        return Err(Error::PlrIncomplete);
    }
    let tree = tree.to_rooted_tree();
    let r = tree.len();
    if ds.supernodes.len() != r {
        return Err(malformed(format!(
            "{} supernode records for a tree of {r} supernodes",
            ds.supernodes.len()
        )));
    }
    let mut g = Graph::new(0);
    let mut members: Vec<Vec<usize>> = Vec::with_capacity(r);
    for (i, s) in ds.supernodes.iter().enumerate() {
        let mut present = match tree.parent(i) {
            None => {
                if !s.sharing.is_empty() {
                    return Err(malformed("root supernode has sharing bits".into()));
                }
                Vec::new()
            }
            Some(p) => {
                if s.sharing.len() != members[p].len() {
                    return Err(malformed(format!(
                        "supernode {i}: {} sharing bits for a parent bag of {}",
                        s.sharing.len(),
                        members[p].len()
                    )));
                }
                let shared: Vec<usize> = members[p]
                    .iter()
                    .zip(&s.sharing)
                    .filter_map(|(&v, &b)| b.then_some(v))
                    .collect();
                if shared.is_empty() {
                    return Err(Error::EmptySharing(i));
                }
                shared
            }
        };
        match s.adds.first() {
            Some(a) if a.add => {}
            _ => return Err(Error::EmptyBag(i)),
        }
        let (last, body) = s.adds.split_last().expect("non-empty");
        if last.add || !last.edges.is_empty() {
            return Err(malformed(format!("supernode {i} does not end with a stop")));
        }
        for a in body {
            if !a.add {
                return Err(malformed(format!("supernode {i} stops before its last record")));
            }
            if a.edges.len() != present.len() {
                return Err(malformed(format!(
                    "supernode {i}: {} edge bits against {} members",
                    a.edges.len(),
                    present.len()
                )));
            }
            let v = g.add_node();
            for (&m, &e) in present.iter().zip(&a.edges) {
                if e {
                    g.add_edge(v, m)?;
                }
            }
            present.push(v);
        }
        members.push(present);
    }
    let bags = members.clone();
    let decomposition = TreeDecomposition::new(tree, bags)?;
    Ok(Replay {
        graph: g,
        decomposition,
        members,
    })
}

/// Exact per-category counts of charged decisions; the implicit first add of
/// each supernode is excluded.
pub fn decision_counts(ds: &DecisionSequence) -> DecisionCounts {
    let mut c = DecisionCounts {
        tree_steps: ds.tree_plr.len(),
        ..Default::default()
    };
    for s in &ds.supernodes {
        c.sharing_steps += s.sharing.len();
        c.add_steps += s.adds.len().saturating_sub(1);
        c.edge_steps += s.adds.iter().map(|a| a.edges.len()).sum::<usize>();
    }
    c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ordering {
    Bfs,
    Dfs,
}

/// Upper-triangle adjacency bits, row by row, under a BFS or DFS node order
/// started at `perm`'s first node with ties broken by `perm`.
pub fn adjacency_sequence(g: &Graph, perm: &Permutation, ordering: Ordering) -> Result<Vec<bool>> {
    let n = g.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    if perm.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "length {} for {n} nodes",
            perm.len()
        )));
    }
    let start = perm.order()[0];
    let order = match ordering {
        Ordering::Bfs => bfs_order(g, start, perm),
        Ordering::Dfs => dfs_order(g, start, perm),
    };
    if order.len() != n {
        return Err(Error::Disconnected);
    }
    let mut bits = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            bits.push(g.has_edge(order[i], order[j]));
        }
    }
    Ok(bits)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SequenceMethod {
    Td,
    Bfs,
    Dfs,
}

impl SequenceMethod {
    pub fn name(self) -> &'static str {
        match self {
            SequenceMethod::Td => "td",
            SequenceMethod::Bfs => "bfs",
            SequenceMethod::Dfs => "dfs",
        }
    }
}

impl FromStr for SequenceMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "td" => Ok(SequenceMethod::Td),
            "bfs" => Ok(SequenceMethod::Bfs),
            "dfs" => Ok(SequenceMethod::Dfs),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

impl fmt::Display for SequenceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Serialized sequence of `g` under one permutation.
pub fn sequence_bytes(g: &Graph, perm: &Permutation, method: SequenceMethod) -> Result<Vec<u8>> {
    let bits = |o| -> Result<Vec<u8>> {
        Ok(adjacency_sequence(g, perm, o)?
            .into_iter()
            .map(|b| bit_char(b) as u8)
            .collect())
    };
    match method {
        SequenceMethod::Td => Ok(encode_graph(g, perm)?.to_bytes()),
        SequenceMethod::Bfs => bits(Ordering::Bfs),
        SequenceMethod::Dfs => bits(Ordering::Dfs),
    }
}

/// Number of distinct sequences produced by `n_perms` seeded random permutations.
pub fn unique_sequence_count(g: &Graph, n_perms: usize, method: SequenceMethod, seed: u64) -> Result<usize> {
    if n_perms == 0 {
        return Err(Error::InvalidArgument("n_perms must be positive".into()));
    }
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perms: Vec<Permutation> = (0..n_perms).map(|_| Permutation::random(g.n(), &mut rng)).collect();
    let seqs = perms
        .par_iter()
        .map(|p| sequence_bytes(g, p, method))
        .collect::<Result<Vec<_>>>()?;
    Ok(seqs.into_iter().collect::<HashSet<_>>().len())
}
