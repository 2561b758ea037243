//! Undirected simple graphs over dense node ids `0..n`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// An undirected simple graph. Node ids are `0..n`; adjacency lists are kept sorted.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Appends an isolated node and returns its id.
    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    /// Inserts the edge `{u, v}`. Returns `Ok(false)` when it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.n();
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        for node in [u, v] {
            if node >= n {
                return Err(Error::NodeOutOfRange { node, n });
            }
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.edge_count += 1;
                Ok(true)
            }
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Returns the graph with every node `v` renamed to `perm.image(v)`.
    pub fn relabel(&self, perm: &Permutation) -> Graph {
        assert_eq!(perm.len(), self.n(), "permutation size mismatch");
        let mut g = Graph::new(self.n());
        for (u, v) in self.edges() {
            g.add_edge(perm.image(u), perm.image(v))
                .expect("relabeling preserves simplicity");
        }
        g
    }

    /// True when the graph is connected and has exactly `n - 1` edges.
    pub fn is_tree(&self) -> bool {
        self.n() >= 1 && self.edge_count + 1 == self.n() && is_connected(self)
    }
}

/// A bijection on `0..n`, stored as the sequence `order` of node ids.
///
/// Position `i` of `order` holds the `i`-th node of the ordering; the same
/// array read as a function maps `v` to `order[v]` when relabeling.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    order: Vec<usize>,
    rank: Vec<usize>,
}

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut rank = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidPermutation(format!("id {v} out of range 0..{n}")));
            }
            if rank[v] != usize::MAX {
                return Err(Error::InvalidPermutation(format!("id {v} repeated")));
            }
            rank[v] = i;
        }
        Ok(Permutation { order, rank })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            order: (0..n).collect(),
            rank: (0..n).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        Permutation::new(order).expect("shuffle of identity is a permutation")
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Position of node `v` in the ordering.
    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    /// `order[v]`: the permutation read as a function.
    pub fn image(&self, v: usize) -> usize {
        self.order[v]
    }
}

/// Parses the edge-list text format.
///
/// Lines are `u v` pairs; an optional first data line `n <count>` fixes the
/// node count. Blank lines and lines starting with `#` are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    let mut seen_data = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() == 2 && tokens[0] == "n" {
            if seen_data {
                return Err(Error::Parse {
                    line: line_no,
                    message: "node count must precede edges".into(),
                });
            }
            declared = Some(parse_int(tokens[1], line_no)?);
            seen_data = true;
            continue;
        }
        seen_data = true;
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected two node ids, found {:?}", line),
            });
        }
        let u = parse_int(tokens[0], line_no)?;
        let v = parse_int(tokens[1], line_no)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        edges.push((u, v));
    }
    let n = match declared {
        Some(n) => n,
        None => edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0),
    };
    Graph::from_edges(n, edges)
}

fn parse_int(token: &str, line: usize) -> Result<usize> {
    token.parse::<usize>().map_err(|_| Error::Parse {
        line,
        message: format!("not a non-negative integer: {token:?}"),
    })
}

/// Serializes to the edge-list format: `n <count>` then sorted `u v` lines with `u < v`.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Breadth-first layers around `root`; neighbors are visited in `tie_order` rank order.
pub fn bfs_layers(g: &Graph, root: usize, tie_order: &Permutation) -> Result<Vec<Vec<usize>>> {
    let n = g.n();
    if root >= n {
        return Err(Error::NodeOutOfRange { node: root, n });
    }
    let order = bfs_order(g, root, tie_order);
    if order.len() != n {
        return Err(Error::Disconnected);
    }
    let dist = distances_from(g, root);
    let depth = dist.iter().filter_map(|d| *d).max().unwrap_or(0);
    let mut layers = vec![Vec::new(); depth + 1];
    for v in order {
        layers[dist[v].expect("reached")].push(v);
    }
    Ok(layers)
}

/// BFS visitation order from `root`, ties among neighbors broken by `tie_order`.
/// Only the component of `root` is visited.
pub fn bfs_order(g: &Graph, root: usize, tie_order: &Permutation) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::with_capacity(g.n());
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(u) = queue.pop_front() {
        out.push(u);
        let mut nbrs: Vec<usize> = g.neighbors(u).iter().copied().filter(|&v| !seen[v]).collect();
        nbrs.sort_by_key(|&v| tie_order.rank(v));
        for v in nbrs {
            seen[v] = true;
            queue.push_back(v);
        }
    }
    out
}

/// Preorder DFS from `root`, children explored in `tie_order` rank order.
pub fn dfs_order(g: &Graph, root: usize, tie_order: &Permutation) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::with_capacity(g.n());
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        if seen[u] {
            continue;
        }
        seen[u] = true;
        out.push(u);
        let mut nbrs: Vec<usize> = g.neighbors(u).iter().copied().filter(|&v| !seen[v]).collect();
        // reversed so the lowest-ranked neighbor is popped first
        nbrs.sort_by_key(|&v| std::cmp::Reverse(tie_order.rank(v)));
        stack.extend(nbrs);
    }
    out
}

fn distances_from(g: &Graph, root: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    dist[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        for &v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

pub fn is_connected(g: &Graph) -> bool {
    if g.n() <= 1 {
        return true;
    }
    distances_from(g, 0).iter().all(Option::is_some)
}

/// Largest eccentricity, by BFS from every node.
pub fn diameter(g: &Graph) -> Result<usize> {
    if g.n() == 0 {
        return Err(Error::Empty("graph has no nodes".into()));
    }
    let mut best = 0;
    for v in 0..g.n() {
        let dist = distances_from(g, v);
        for d in dist {
            best = best.max(d.ok_or(Error::Disconnected)?);
        }
    }
    Ok(best)
}

/// Eccentricity of every node of a connected graph.
pub fn eccentricities(g: &Graph) -> Result<Vec<usize>> {
    (0..g.n())
        .map(|v| {
            distances_from(g, v)
                .into_iter()
                .try_fold(0, |acc, d| d.map(|d| acc.max(d)).ok_or(Error::Disconnected))
        })
        .collect()
}

/// Connected components as sorted node lists.
pub fn components(g: &Graph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            comp.push(u);
            for &v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Exact isomorphism test: color refinement followed by backtracking.
///
/// Intended for small graphs (tens of nodes); worst cases are exponential.
pub fn graph_isomorphic(g1: &Graph, g2: &Graph) -> bool {
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() {
        return false;
    }
    let mut d1: Vec<usize> = (0..g1.n()).map(|v| g1.degree(v)).collect();
    let mut d2: Vec<usize> = (0..g2.n()).map(|v| g2.degree(v)).collect();
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return false;
    }
    let (c1, c2) = refine_colors(g1, g2);
    let mut h1 = c1.clone();
    let mut h2 = c2.clone();
    h1.sort_unstable();
    h2.sort_unstable();
    if h1 != h2 {
        return false;
    }
    let n = g1.n();
    if n == 0 {
        return true;
    }

    // Visit g1 in BFS order from rare colors so each step is constrained by mapped neighbors.
    let mut class_size = BTreeMap::new();
    for &c in &c1 {
        *class_size.entry(c).or_insert(0usize) += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let start = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| (class_size[&c1[v]], v))
            .unwrap();
        let mut queue = VecDeque::from([start]);
        placed[start] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in g1.neighbors(u) {
                if !placed[v] {
                    placed[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    backtrack(g1, g2, &c1, &c2, &order, 0, &mut map, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    g1: &Graph,
    g2: &Graph,
    c1: &[usize],
    c2: &[usize],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let u = order[depth];
    for v in 0..g2.n() {
        if used[v] || c2[v] != c1[u] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&w| g1.has_edge(u, w) == g2.has_edge(v, map[w]));
        if !consistent {
            continue;
        }
        map[u] = v;
        used[v] = true;
        if backtrack(g1, g2, c1, c2, order, depth + 1, map, used) {
            return true;
        }
        used[v] = false;
        map[u] = usize::MAX;
    }
    false
}

/// 1-dimensional Weisfeiler-Leman refinement run jointly on both graphs so colors are comparable.
fn refine_colors(g1: &Graph, g2: &Graph) -> (Vec<usize>, Vec<usize>) {
    let mut c1: Vec<usize> = (0..g1.n()).map(|v| g1.degree(v)).collect();
    let mut c2: Vec<usize> = (0..g2.n()).map(|v| g2.degree(v)).collect();
    let mut classes = usize::MAX;
    loop {
        let sig = |g: &Graph, c: &[usize], v: usize| {
            let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&w| c[w]).collect();
            nb.sort_unstable();
            (c[v], nb)
        };
        let s1: Vec<_> = (0..g1.n()).map(|v| sig(g1, &c1, v)).collect();
        let s2: Vec<_> = (0..g2.n()).map(|v| sig(g2, &c2, v)).collect();
        let mut palette = BTreeMap::new();
        for s in s1.iter().chain(s2.iter()) {
            let next = palette.len();
            palette.entry(s.clone()).or_insert(next);
        }
        c1 = s1.iter().map(|s| palette[s]).collect();
        c2 = s2.iter().map(|s| palette[s]).collect();
        if palette.len() == classes {
            return (c1, c2);
        }
        classes = palette.len();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn parse_examples() {
        let g = parse_edge_list("n 3\n0 1\n1 2").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);

        let g = parse_edge_list("0 1\n1 0").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edge_count(), 1);

        assert_eq!(parse_edge_list("0 0"), Err(Error::SelfLoop(0)));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_edge_list("0 x"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_edge_list("n 2\n0 2"),
            Err(Error::NodeOutOfRange { node: 2, n: 2 })
        ));
        let g = parse_edge_list("# comment\n\n0 1\n").unwrap();
        assert_eq!(g.n(), 2);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = cycle(5);
        assert_eq!(parse_edge_list(&to_edge_list(&g)).unwrap(), g);
        let isolated = Graph::new(3);
        assert_eq!(parse_edge_list(&to_edge_list(&isolated)).unwrap(), isolated);
    }

    #[test]
    fn layers() {
        let id = Permutation::identity(5);
        let as_sets = |ls: Vec<Vec<usize>>| -> Vec<Vec<usize>> {
            ls.into_iter()
                .map(|mut l| {
                    l.sort_unstable();
                    l
                })
                .collect()
        };
        assert_eq!(
            as_sets(bfs_layers(&path(3), 0, &Permutation::identity(3)).unwrap()),
            vec![vec![0], vec![1], vec![2]]
        );
        let k3 = cycle(3);
        assert_eq!(
            as_sets(bfs_layers(&k3, 0, &Permutation::identity(3)).unwrap()),
            vec![vec![0], vec![1, 2]]
        );
        let star = Graph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
        assert_eq!(
            as_sets(bfs_layers(&star, 1, &id).unwrap()),
            vec![vec![1], vec![0], vec![2, 3, 4]]
        );
        let two = Graph::new(2);
        assert_eq!(bfs_layers(&two, 0, &Permutation::identity(2)), Err(Error::Disconnected));
    }

    #[test]
    fn layer_visitation_follows_tie_order() {
        let star = Graph::from_edges(4, (1..4).map(|i| (0, i))).unwrap();
        let perm = Permutation::new(vec![0, 3, 1, 2]).unwrap();
        assert_eq!(bfs_layers(&star, 0, &perm).unwrap()[1], vec![3, 1, 2]);
    }

    #[test]
    fn connectivity() {
        assert!(is_connected(&cycle(3)));
        assert!(!is_connected(&Graph::new(2)));
        assert!(is_connected(&Graph::new(1)));
        assert!(is_connected(&Graph::new(0)));
        let mut g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(!is_connected(&g));
        g.add_edge(2, 3).unwrap();
        assert!(is_connected(&g));
    }

    #[test]
    fn diameters() {
        assert_eq!(diameter(&Graph::new(1)).unwrap(), 0);
        assert_eq!(diameter(&path(5)).unwrap(), 4);
        assert_eq!(diameter(&cycle(6)).unwrap(), 3);
        assert_eq!(diameter(&Graph::new(2)), Err(Error::Disconnected));
    }

    #[test]
    fn isomorphism_examples() {
        let k3 = cycle(3);
        let relabeled = k3.relabel(&Permutation::new(vec![2, 0, 1]).unwrap());
        assert!(graph_isomorphic(&k3, &relabeled));

        let p4 = path(4);
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!graph_isomorphic(&p4, &star));

        let two_triangles = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(!graph_isomorphic(&cycle(6), &two_triangles));
    }

    /// Brute force over all bijections, for tiny graphs.
    fn brute_isomorphic(g1: &Graph, g2: &Graph) -> bool {
        fn rec(g1: &Graph, g2: &Graph, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            let u = map.len();
            if u == g1.n() {
                return g1.edges().all(|(a, b)| g2.has_edge(map[a], map[b]));
            }
            for v in 0..g2.n() {
                if !used[v] {
                    used[v] = true;
                    map.push(v);
                    if rec(g1, g2, map, used) {
                        return true;
                    }
                    map.pop();
                    used[v] = false;
                }
            }
            false
        }
        g1.n() == g2.n() && g1.edge_count() == g2.edge_count() && rec(g1, g2, &mut Vec::new(), &mut vec![false; g2.n()])
    }

    fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g
    }

    #[test]
    fn isomorphism_agrees_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.gen_range(1..=6);
            let g1 = random_graph(n, 0.5, &mut rng);
            let g2 = if rng.gen_bool(0.5) {
                g1.relabel(&Permutation::random(n, &mut rng))
            } else {
                random_graph(n, 0.5, &mut rng)
            };
            assert_eq!(graph_isomorphic(&g1, &g2), brute_isomorphic(&g1, &g2), "{g1:?} {g2:?}");
        }
    }

    #[test]
    fn relabel_is_isomorphic_on_regular_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // Petersen graph: refinement alone cannot split it.
        let petersen = Graph::from_edges(
            10,
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 0),
                (0, 5),
                (1, 6),
                (2, 7),
                (3, 8),
                (4, 9),
                (5, 7),
                (7, 9),
                (9, 6),
                (6, 8),
                (8, 5),
            ],
        )
        .unwrap();
        for _ in 0..10 {
            let p = Permutation::random(10, &mut rng);
            assert!(graph_isomorphic(&petersen, &petersen.relabel(&p)));
        }
        // Same degree sequence, not isomorphic.
        let prism = Graph::from_edges(
            10,
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 0),
                (5, 6),
                (6, 7),
                (7, 8),
                (8, 9),
                (9, 5),
                (0, 5),
                (1, 6),
                (2, 7),
                (3, 8),
                (4, 9),
            ],
        )
        .unwrap();
        assert!(!graph_isomorphic(&petersen, &prism));
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(p.rank(2), 0);
        assert_eq!(p.image(0), 2);
    }

    #[test]
    fn traversal_orders() {
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let perm = Permutation::new(vec![0, 2, 3, 1]).unwrap();
        assert_eq!(bfs_order(&star, 0, &perm), vec![0, 2, 3, 1]);
        assert_eq!(dfs_order(&path(4), 1, &Permutation::identity(4)), vec![1, 0, 2, 3]);
    }

    proptest::proptest! {
        #[test]
        fn layers_partition_nodes(seed in 0u64..5000, n in 1usize..25) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // random tree plus extra edges keeps the graph connected
            let mut g = Graph::new(n);
            for v in 1..n {
                let u = rng.gen_range(0..v);
                g.add_edge(u, v).unwrap();
            }
            for _ in 0..n {
                let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if u != v { g.add_edge(u, v).unwrap(); }
            }
            let perm = Permutation::random(n, &mut rng);
            let root = rng.gen_range(0..n);
            let layers = bfs_layers(&g, root, &perm).unwrap();
            proptest::prop_assert_eq!(layers.iter().map(Vec::len).sum::<usize>(), n);
            let ecc = eccentricities(&g).unwrap();
            let far = (0..n).max_by_key(|&v| ecc[v]).unwrap();
            let far_layers = bfs_layers(&g, far, &perm).unwrap();
            proptest::prop_assert_eq!(diameter(&g).unwrap(), far_layers.len() - 1);
            proptest::prop_assert!(graph_isomorphic(&g, &g.relabel(&perm)));
        }
    }
}
