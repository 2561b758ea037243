//! AHU canonical names for rooted trees, canonical roots and the canonical DFS order.
//!
//! A name is a balanced string over `{a, b}`: a leaf is `ab`, an internal node is
//! `a`, its children's names in non-increasing order, then `b`. Names are ordered
//! lexicographically with `a` ranked above `b`, so a deeper subtree always sorts
//! ahead of a shallower one and the first child in canonical order carries the
//! longest downward path.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Compares two name strings under the `a > b` lexicographic order.
pub fn compare_names(x: &[u8], y: &[u8]) -> Ordering {
    for (p, q) in x.iter().zip(y) {
        if p != q {
            return if *p == b'a' { Ordering::Greater } else { Ordering::Less };
        }
    }
    x.len().cmp(&y.len())
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CanonicalName(String);

impl CanonicalName {
    pub fn leaf() -> Self {
        CanonicalName("ab".to_owned())
    }

    /// Builds the name of a node from its children's names (sorted here).
    pub fn from_children<'a, I>(children: I) -> Self
    where
        I: IntoIterator<Item = &'a CanonicalName>,
    {
        let mut kids: Vec<&CanonicalName> = children.into_iter().collect();
        kids.sort_by(|x, y| y.cmp(x));
        let len = 2 + kids.iter().map(|k| k.0.len()).sum::<usize>();
        let mut s = String::with_capacity(len);
        s.push('a');
        for k in kids {
            s.push_str(&k.0);
        }
        s.push('b');
        CanonicalName(s)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of nodes in the named subtree.
    pub fn subtree_size(&self) -> usize {
        self.0.len() / 2
    }
}

impl Ord for CanonicalName {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_names(self.0.as_bytes(), other.0.as_bytes())
    }
}

impl PartialOrd for CanonicalName {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for CanonicalName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for CanonicalName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A rooted tree over node ids `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
}

impl RootedTree {
    /// Builds a rooted tree from a parent array; exactly one entry must be `None`.
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        if n == 0 {
            return Err(Error::Empty("tree has no nodes".into()));
        }
        let mut root = None;
        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            match *p {
                None if root.is_some() => return Err(Error::NotATree),
                None => root = Some(v),
                Some(p) if p >= n => return Err(Error::NodeOutOfRange { node: p, n }),
                Some(p) if p == v => return Err(Error::NotATree),
                Some(p) => children[p].push(v),
            }
        }
        let root = root.ok_or(Error::NotATree)?;
        let t = RootedTree { parent, children, root };
        if t.preorder().len() != n {
            return Err(Error::NotATree);
        }
        Ok(t)
    }

    /// Roots an unrooted tree (given as a graph) at `root`.
    pub fn from_graph(g: &Graph, root: usize) -> Result<Self> {
        if !g.is_tree() {
            return Err(Error::NotATree);
        }
        if root >= g.n() {
            return Err(Error::NodeOutOfRange { node: root, n: g.n() });
        }
        let mut parent = vec![None; g.n()];
        let mut seen = vec![false; g.n()];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    stack.push(v);
                }
            }
        }
        RootedTree::from_parents(parent)
    }

    /// Roots an unrooted tree at its canonical root.
    pub fn canonical(g: &Graph) -> Result<Self> {
        let root = canonical_root(g)?;
        RootedTree::from_graph(g, root)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    /// Children in increasing id order.
    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    /// Preorder with children in id order.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        let mut seen = vec![false; self.len()];
        while let Some(u) = stack.pop() {
            if std::mem::replace(&mut seen[u], true) {
                continue;
            }
            out.push(u);
            stack.extend(self.children[u].iter().rev());
        }
        out
    }

    /// The undirected tree as a graph on the same ids.
    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(
            self.len(),
            self.parent.iter().enumerate().filter_map(|(v, p)| p.map(|p| (p, v))),
        )
        .expect("tree edges are simple")
    }

    /// Canonical names of every node, computed bottom-up.
    pub fn names(&self) -> Vec<CanonicalName> {
        let mut names: Vec<Option<CanonicalName>> = vec![None; self.len()];
        for &v in self.preorder().iter().rev() {
            let name = if self.children[v].is_empty() {
                CanonicalName::leaf()
            } else {
                CanonicalName::from_children(
                    self.children[v]
                        .iter()
                        .map(|&c| names[c].as_ref().expect("children named first")),
                )
            };
            names[v] = Some(name);
        }
        names.into_iter().map(|n| n.expect("all named")).collect()
    }

    /// Children of `v` in canonical visiting order: non-increasing name, ties by id.
    pub fn sorted_children(&self, v: usize, names: &[CanonicalName]) -> Vec<usize> {
        let mut kids = self.children[v].clone();
        kids.sort_by(|&x, &y| names[y].cmp(&names[x]).then(x.cmp(&y)));
        kids
    }
}

/// Canonical name of node `v` in `t`.
pub fn canonical_name(t: &RootedTree, v: usize) -> CanonicalName {
    // Only the subtree of `v` matters; the full pass is cheap at the sizes used here.
    t.names().swap_remove(v)
}

/// Center(s) of a tree by repeated leaf stripping, in increasing id order.
pub fn tree_centers(g: &Graph) -> Result<Vec<usize>> {
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    let n = g.n();
    if n <= 2 {
        return Ok((0..n).collect());
    }
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            degree[leaf] = 0;
            for &u in g.neighbors(leaf) {
                if degree[u] > 0 {
                    degree[u] -= 1;
                    if degree[u] == 1 {
                        next.push(u);
                    }
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    Ok(layer)
}

/// The center of the tree; with two centers, the one giving the greater rooted
/// name, and the smaller id when both names coincide.
pub fn canonical_root(g: &Graph) -> Result<usize> {
    let centers = tree_centers(g)?;
    match centers.as_slice() {
        [c] => Ok(*c),
        [c1, c2] => {
            let n1 = RootedTree::from_graph(g, *c1)?.names().swap_remove(*c1);
            let n2 = RootedTree::from_graph(g, *c2)?.names().swap_remove(*c2);
            Ok(if n2 > n1 { *c2 } else { *c1 })
        }
        _ => unreachable!("a tree has one or two centers"),
    }
}

/// Preorder visiting children by non-increasing canonical name, ties by smaller id.
pub fn canonical_order(t: &RootedTree) -> Vec<usize> {
    let names = t.names();
    canonical_order_with(t, &names)
}

pub(crate) fn canonical_order_with(t: &RootedTree, names: &[CanonicalName]) -> Vec<usize> {
    let mut out = Vec::with_capacity(t.len());
    let mut stack = vec![t.root()];
    while let Some(u) = stack.pop() {
        out.push(u);
        stack.extend(t.sorted_children(u, names).into_iter().rev());
    }
    out
}

/// Unrooted tree isomorphism through names at the canonical roots.
pub fn tree_isomorphic(t1: &Graph, t2: &Graph) -> Result<bool> {
    let r1 = RootedTree::canonical(t1)?;
    let r2 = RootedTree::canonical(t2)?;
    Ok(r1.names().swap_remove(r1.root()) == r2.names().swap_remove(r2.root()))
}
