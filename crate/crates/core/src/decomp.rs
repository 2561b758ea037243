//! Tree decompositions: min-fill construction, minimization, validation and
//! the breadth-first layer decomposition.

use std::fmt;

use crate::canon::{canonical_order, RootedTree};
use crate::error::{Error, Result};
use crate::graph::{bfs_layers, is_connected, Graph, Permutation};

/// A rooted tree of supernodes, each carrying a sorted, non-empty bag of graph nodes.
///
/// Decompositions built here number their supernodes in canonical order, so
/// supernode `0` is the canonical root and parents precede children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    tree: RootedTree,
    bags: Vec<Vec<usize>>,
}

impl TreeDecomposition {
    pub fn new(tree: RootedTree, mut bags: Vec<Vec<usize>>) -> Result<Self> {
        if tree.len() != bags.len() {
            return Err(Error::InvalidDecomposition(format!(
                "{} supernodes but {} bags",
                tree.len(),
                bags.len()
            )));
        }
        for (i, bag) in bags.iter_mut().enumerate() {
            bag.sort_unstable();
            bag.dedup();
            if bag.is_empty() {
                return Err(Error::EmptyBag(i));
            }
        }
        Ok(TreeDecomposition { tree, bags })
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn bag(&self, i: usize) -> &[usize] {
        &self.bags[i]
    }

    /// Number of supernodes `r`.
    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Size of the largest bag.
    pub fn width(&self) -> usize {
        width(self)
    }

    /// No bag is contained in an adjacent bag.
    pub fn is_minimal(&self) -> bool {
        self.tree_edges().all(|(i, j)| !nested(&self.bags[i], &self.bags[j]))
    }

    fn tree_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.tree
            .parents()
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (p, v)))
    }

    /// Text record: supernode count, parent array (`-` for the root), then one bag per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("supernodes {}\nparents", self.len());
        for p in self.tree.parents() {
            match p {
                Some(p) => out.push_str(&format!(" {p}")),
                None => out.push_str(" -"),
            }
        }
        out.push('\n');
        for bag in &self.bags {
            let line: Vec<String> = bag.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let bad = |line: usize, message: &str| Error::Parse {
            line,
            message: message.to_string(),
        };
        let (ln, head) = lines.next().ok_or_else(|| Error::Empty("no decomposition".into()))?;
        let r: usize = head
            .strip_prefix("supernodes")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| bad(ln, "expected `supernodes <r>`"))?;
        let (ln, par) = lines.next().ok_or_else(|| bad(ln, "missing parents line"))?;
        let fields: Vec<&str> = par
            .strip_prefix("parents")
            .ok_or_else(|| bad(ln, "expected `parents ...`"))?
            .split_whitespace()
            .collect();
        if fields.len() != r {
            return Err(bad(ln, "parent count differs from supernode count"));
        }
        let parents = fields
            .iter()
            .map(|f| match *f {
                "-" => Ok(None),
                f => f.parse().map(Some).map_err(|_| bad(ln, "bad parent id")),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut bags = Vec::with_capacity(r);
        for _ in 0..r {
            let (ln, l) = lines.next().ok_or_else(|| Error::Parse {
                line: ln,
                message: "missing bag line".into(),
            })?;
            let bag = l
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad(ln, "bad node id")))
                .collect::<Result<Vec<usize>>>()?;
            bags.push(bag);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(bad(ln, "trailing content"));
        }
        TreeDecomposition::new(RootedTree::from_parents(parents)?, bags)
    }
}

impl fmt::Display for TreeDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn width(td: &TreeDecomposition) -> usize {
    td.bags.iter().map(Vec::len).max().unwrap_or(0)
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    // both sorted
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

fn nested(a: &[usize], b: &[usize]) -> bool {
    is_subset(a, b) || is_subset(b, a)
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Dense adjacency rows as bit sets.
struct BitRows {
    words: usize,
    rows: Vec<u64>,
}

impl BitRows {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitRows {
            words,
            rows: vec![0; n * words],
        }
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    fn set(&mut self, u: usize, v: usize, on: bool) {
        let w = &mut self.rows[u * self.words + v / 64];
        if on {
            *w |= 1 << (v % 64);
        } else {
            *w &= !(1 << (v % 64));
        }
    }

    fn members(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &w) in self.row(v).iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(i * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }
}

/// Builds a decomposition by min-fill elimination, ties broken by `tie_order` rank.
///
/// Bags are `v` plus its neighbors at elimination time; each bag hangs off the
/// bag of its earliest eliminated remaining neighbor. The result is rooted and
/// numbered canonically but not minimized.
pub fn min_fill_decomposition(g: &Graph, tie_order: &Permutation) -> Result<TreeDecomposition> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Empty("graph has no nodes".into()));
    }
    if tie_order.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "length {} for graph with {n} nodes",
            tie_order.len()
        )));
    }
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let mut adj = BitRows::new(n);
    for (u, v) in g.edges() {
        adj.set(u, v, true);
        adj.set(v, u, true);
    }
    let mut alive = vec![true; n];
    let mut elim_pos = vec![usize::MAX; n];
    let mut bags = Vec::with_capacity(n);
    let mut later = Vec::with_capacity(n);
    for step in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (fill_in(&adj, v), tie_order.rank(v)))
            .expect("a node remains");
        let nbrs = adj.members(v);
        for (i, &x) in nbrs.iter().enumerate() {
            for &y in &nbrs[i + 1..] {
                adj.set(x, y, true);
                adj.set(y, x, true);
            }
            adj.set(x, v, false);
        }
        alive[v] = false;
        elim_pos[v] = step;
        let mut bag = nbrs.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        later.push(nbrs);
    }
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for (i, nbrs) in later.iter().enumerate() {
        if let Some(&u) = nbrs.iter().min_by_key(|&&u| elim_pos[u]) {
            edges.push((i, elim_pos[u]));
        }
    }
    canonicalize(bags, &edges)
}

fn fill_in(adj: &BitRows, v: usize) -> usize {
    let nbrs = adj.members(v);
    let mut missing = 0;
    for &u in &nbrs {
        // neighbors of v that u does not see, excluding u itself
        missing += adj
            .row(v)
            .iter()
            .zip(adj.row(u))
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum::<usize>()
            - 1;
    }
    missing / 2
}

/// Roots an unrooted decomposition tree canonically and renumbers supernodes in canonical order.
fn canonicalize(bags: Vec<Vec<usize>>, edges: &[(usize, usize)]) -> Result<TreeDecomposition> {
    let r = bags.len();
    let tg = Graph::from_edges(r, edges.iter().copied())?;
    let rooted = RootedTree::canonical(&tg)?;
    let order = canonical_order(&rooted);
    let mut pos = vec![0; r];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut parents = vec![None; r];
    let mut new_bags = vec![Vec::new(); r];
    for (old, bag) in bags.into_iter().enumerate() {
        parents[pos[old]] = rooted.parent(old).map(|p| pos[p]);
        new_bags[pos[old]] = bag;
    }
    TreeDecomposition::new(RootedTree::from_parents(parents)?, new_bags)
}

/// Merges adjacent nested bags until none remain.
///
/// Each pass scans supernodes in canonical order of the current tree (and each
/// supernode's neighbors in the same order) and merges the first nested pair it
/// meets; passes repeat until a fixed point.
pub fn minimize_decomposition(td: &TreeDecomposition) -> Result<TreeDecomposition> {
    if let Some(v) = running_intersection_violations(td).into_iter().next() {
        return Err(Error::InvalidDecomposition(v.to_string()));
    }
    let mut bags = td.bags.clone();
    let mut edges: Vec<(usize, usize)> = td.tree_edges().collect();
    loop {
        let r = bags.len();
        let tg = Graph::from_edges(r, edges.iter().copied())?;
        let rooted = RootedTree::canonical(&tg)?;
        let order = canonical_order(&rooted);
        let mut pos = vec![0; r];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut found = None;
        'scan: for &v in &order {
            let mut nbrs = tg.neighbors(v).to_vec();
            nbrs.sort_by_key(|&w| pos[w]);
            for w in nbrs {
                if nested(&bags[v], &bags[w]) {
                    found = Some((v, w));
                    break 'scan;
                }
            }
        }
        let Some((keep, gone)) = found else {
            return canonicalize(bags, &edges);
        };
        bags[keep] = union(&bags[keep], &bags[gone]);
        bags.remove(gone);
        let shift = |x: usize| {
            let x = if x == gone { keep } else { x };
            if x > gone {
                x - 1
            } else {
                x
            }
        };
        edges = edges
            .into_iter()
            .filter(|&(a, b)| !((a == keep && b == gone) || (a == gone && b == keep)))
            .map(|(a, b)| (shift(a), shift(b)))
            .collect();
    }
}

/// Min-fill followed by minimization.
pub fn minimal_decomposition(g: &Graph, tie_order: &Permutation) -> Result<TreeDecomposition> {
    minimize_decomposition(&min_fill_decomposition(g, tie_order)?)
}

/// A violated decomposition condition with its witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NodeNotCovered(usize),
    EdgeNotCovered(usize, usize),
    /// The supernodes holding `node` do not form a connected subtree.
    RunningIntersection {
        node: usize,
        supernodes: Vec<usize>,
    },
    UnknownNode(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NodeNotCovered(v) => write!(f, "node {v} is in no bag"),
            Violation::EdgeNotCovered(u, v) => write!(f, "edge ({u},{v}) is in no bag"),
            Violation::RunningIntersection { node, supernodes } => {
                write!(f, "supernodes {supernodes:?} holding node {node} are not connected")
            }
            Violation::UnknownNode(v) => write!(f, "bag mentions node {v} outside the graph"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "violation: {v}")?;
        }
        Ok(())
    }
}

fn running_intersection_violations(td: &TreeDecomposition) -> Vec<Violation> {
    let mut holders: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            holders.entry(v).or_default().push(i);
        }
    }
    let mut out = Vec::new();
    for (node, supernodes) in holders {
        let inside = |s: usize| supernodes.binary_search(&s).is_ok();
        let links = supernodes
            .iter()
            .filter(|&&s| td.tree.parent(s).is_some_and(inside))
            .count();
        if links + 1 != supernodes.len() {
            out.push(Violation::RunningIntersection { node, supernodes });
        }
    }
    out
}

/// Checks node coverage, edge coverage and running intersection.
pub fn validate_decomposition(g: &Graph, td: &TreeDecomposition) -> ValidationReport {
    let n = g.n();
    let mut violations = Vec::new();
    let mut covered = vec![false; n];
    for bag in &td.bags {
        for &v in bag {
            if v < n {
                covered[v] = true;
            } else {
                violations.push(Violation::UnknownNode(v));
            }
        }
    }
    violations.sort_by_key(|v| match v {
        Violation::UnknownNode(x) => *x,
        _ => 0,
    });
    violations.dedup();
    violations.extend((0..n).filter(|&v| !covered[v]).map(Violation::NodeNotCovered));
    for (u, v) in g.edges() {
        if !td
            .bags
            .iter()
            .any(|b| b.binary_search(&u).is_ok() && b.binary_search(&v).is_ok())
        {
            violations.push(Violation::EdgeNotCovered(u, v));
        }
    }
    violations.extend(running_intersection_violations(td));
    ValidationReport { violations }
}

/// Path decomposition with bags `L[i-1] ∪ L[i]` over the BFS layers around `root`.
pub fn bfs_layer_decomposition(g: &Graph, root: usize) -> Result<TreeDecomposition> {
    let layers = bfs_layers(g, root, &Permutation::identity(g.n()))?;
    let bags: Vec<Vec<usize>> = if layers.len() == 1 {
        vec![layers[0].clone()]
    } else {
        layers.windows(2).map(|w| union(&w[0], &w[1])).collect()
    };
    let parents = (0..bags.len()).map(|i| i.checked_sub(1)).collect();
    TreeDecomposition::new(RootedTree::from_parents(parents)?, bags)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    fn path_td(bags: Vec<Vec<usize>>) -> TreeDecomposition {
        let parents = (0..bags.len()).map(|i| i.checked_sub(1)).collect();
        TreeDecomposition::new(RootedTree::from_parents(parents).unwrap(), bags).unwrap()
    }

    pub(crate) fn random_connected(n: usize, extra: f64, rng: &mut ChaCha8Rng) -> Graph {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.add_edge(rng.gen_range(0..v), v).unwrap();
        }
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(extra) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g
    }

    #[test]
    fn min_fill_examples() {
        let k3 = complete(3);
        let td = minimal_decomposition(&k3, &Permutation::identity(3)).unwrap();
        assert_eq!(td.bags(), &[vec![0, 1, 2]]);
        assert_eq!(td.width(), 3);

        let c4 = cycle(4);
        let td = minimal_decomposition(&c4, &Permutation::identity(4)).unwrap();
        assert_eq!(td.len(), 2);
        assert!(td.bags().iter().all(|b| b.len() == 3));
        assert_eq!(td.width(), 3);
        assert!(validate_decomposition(&c4, &td).is_ok());

        let single = minimal_decomposition(&Graph::new(1), &Permutation::identity(1)).unwrap();
        assert_eq!(single.bags(), &[vec![0]]);

        let two = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(
            min_fill_decomposition(&two, &Permutation::identity(3)),
            Err(Error::Disconnected)
        );
    }

    #[test]
    fn trees_decompose_into_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let n = rng.gen_range(2..30);
            let g = random_connected(n, 0.0, &mut rng);
            let td = minimal_decomposition(&g, &Permutation::random(n, &mut rng)).unwrap();
            assert_eq!(td.width(), 2);
            assert_eq!(td.len(), n - 1);
            assert!(validate_decomposition(&g, &td).is_ok());
        }
    }

    #[test]
    fn minimize_examples() {
        let td = path_td(vec![vec![0, 1], vec![0, 1, 2]]);
        assert_eq!(minimize_decomposition(&td).unwrap().bags(), &[vec![0, 1, 2]]);

        let td = path_td(vec![vec![0, 1], vec![1], vec![1, 2]]);
        let m = minimize_decomposition(&td).unwrap();
        assert_eq!(m.len(), 2);
        let mut bags = m.bags().to_vec();
        bags.sort();
        assert_eq!(bags, vec![vec![0, 1], vec![1, 2]]);

        let minimal = path_td(vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(minimize_decomposition(&minimal).unwrap().bags(), minimal.bags());

        let broken = path_td(vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert!(minimize_decomposition(&broken).is_err());
    }

    #[test]
    fn validation_examples() {
        let k3 = complete(3);
        assert!(validate_decomposition(&k3, &path_td(vec![vec![0, 1, 2]])).is_ok());

        let c4 = cycle(4);
        let report = validate_decomposition(&c4, &path_td(vec![vec![0, 1], vec![1, 2], vec![2, 3]]));
        assert_eq!(report.violations, vec![Violation::EdgeNotCovered(0, 3)]);

        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let report = validate_decomposition(&p3, &path_td(vec![vec![0, 1], vec![1, 2], vec![0, 2]]));
        assert!(report.violations.contains(&Violation::RunningIntersection {
            node: 0,
            supernodes: vec![0, 2]
        }));
        let report = validate_decomposition(&p3, &path_td(vec![vec![0, 1]]));
        assert!(report.violations.contains(&Violation::NodeNotCovered(2)));
        assert!(report.violations.contains(&Violation::EdgeNotCovered(1, 2)));
    }

    #[test]
    fn bfs_layer_examples() {
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            bfs_layer_decomposition(&p3, 0).unwrap().bags(),
            &[vec![0, 1], vec![1, 2]]
        );

        let star = Graph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
        assert_eq!(
            bfs_layer_decomposition(&star, 0).unwrap().bags(),
            &[vec![0, 1, 2, 3, 4]]
        );

        let c6 = cycle(6);
        let td = bfs_layer_decomposition(&c6, 0).unwrap();
        assert_eq!(td.bags(), &[vec![0, 1, 5], vec![1, 2, 4, 5], vec![2, 3, 4]]);
        assert_eq!(td.width(), 4);
        assert!(validate_decomposition(&c6, &td).is_ok());

        assert_eq!(bfs_layer_decomposition(&Graph::new(1), 0).unwrap().bags(), &[vec![0]]);
    }

    #[test]
    fn text_round_trip() {
        let c4 = cycle(4);
        let td = minimal_decomposition(&c4, &Permutation::identity(4)).unwrap();
        let text = td.to_text();
        assert!(text.starts_with("supernodes 2\nparents - 0\n"));
        assert_eq!(TreeDecomposition::from_text(&text).unwrap(), td);
        assert!(TreeDecomposition::from_text("supernodes 2\nparents - 0\n0 1\n").is_err());
    }

    #[test]
    fn numbering_is_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let n = rng.gen_range(1..25);
            let g = random_connected(n, 0.15, &mut rng);
            let td = minimal_decomposition(&g, &Permutation::random(n, &mut rng)).unwrap();
            assert_eq!(td.tree().root(), 0);
            assert_eq!(canonical_order(td.tree()), (0..td.len()).collect::<Vec<_>>());
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(200))]
        #[test]
        fn decompositions_are_valid(seed in 0u64..1_000_000, n in 1usize..40, density in 0.0f64..0.4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_connected(n, density, &mut rng);
            let perm = Permutation::random(n, &mut rng);
            let raw = min_fill_decomposition(&g, &perm).unwrap();
            proptest::prop_assert!(validate_decomposition(&g, &raw).is_ok());
            let td = minimize_decomposition(&raw).unwrap();
            proptest::prop_assert!(validate_decomposition(&g, &td).is_ok());
            proptest::prop_assert!(td.is_minimal());
            proptest::prop_assert!(td.width() <= raw.width());
            proptest::prop_assert!(td.len() + td.width() <= n + 1);
            proptest::prop_assert_eq!(minimize_decomposition(&td).unwrap(), td.clone());
            let root = rng.gen_range(0..n);
            let bfs = bfs_layer_decomposition(&g, root).unwrap();
            proptest::prop_assert!(validate_decomposition(&g, &bfs).is_ok());
            let layers = bfs_layers(&g, root, &Permutation::identity(n)).unwrap();
            let widest = layers.iter().map(Vec::len).max().unwrap();
            proptest::prop_assert!(bfs.width() <= 2 * widest);
        }
    }
}
