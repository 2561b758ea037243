//! Path length representation (PLR) of unlabeled trees.
//!
//! A PLR lists, in canonical DFS order, the length of every forward path that
//! ends in a leaf, and a `0` every time the traversal finishes an internal node.
//! Decoding replays the paths from an extension point; [`PartialTree`] tracks
//! that state and decides which next lengths keep the prefix completable.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::canon::{compare_names, RootedTree};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest tree size accepted by [`enumerate_valid_plrs`].
pub const MAX_ENUMERATION_SIZE: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Plr(Vec<usize>);

impl Plr {
    pub fn new(lengths: Vec<usize>) -> Self {
        Plr(lengths)
    }

    pub fn lengths(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

impl fmt::Display for Plr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Plr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Plr(Vec::new()));
        }
        s.split(',')
            .map(|t| {
                t.trim().parse::<usize>().map_err(|_| Error::Parse {
                    line: 1,
                    message: format!("bad PLR entry {t:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Plr)
    }
}

/// Admissible next lengths for a PLR prefix.
///
/// `range` holds the lengths that continue the tree: at a non-root extension
/// point it starts at `0` (move up); at the root it starts at `1` and may be
/// empty when the tree can only be closed. A `0` at the root ends the PLR and is
/// admissible iff `terminal_zero_allowed`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlrBounds {
    pub range: Option<(usize, usize)>,
    pub terminal_zero_allowed: bool,
    pub at_root: bool,
}

impl PlrBounds {
    pub fn admits(&self, len: usize) -> bool {
        if self.at_root && len == 0 {
            return self.terminal_zero_allowed;
        }
        matches!(self.range, Some((a, b)) if a <= len && len <= b)
    }

    /// Every admissible value, terminal zero first.
    pub fn values(&self) -> Vec<usize> {
        let mut out = Vec::new();
        if self.at_root && self.terminal_zero_allowed {
            out.push(0);
        }
        if let Some((a, b)) = self.range {
            out.extend(a..=b);
        }
        out
    }

    pub fn count(&self) -> usize {
        usize::from(self.at_root && self.terminal_zero_allowed) + self.range.map_or(0, |(a, b)| b - a + 1)
    }
}

/// The tree rebuilt from a PLR prefix, plus the node the next path hangs from.
///
/// Node ids follow creation order, which is also the canonical DFS order of any
/// tree built from admissible lengths.
#[derive(Clone, Debug)]
pub struct PartialTree {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    ext: usize,
    complete: bool,
    entries: usize,
    /// Length of the first path from the root (0 before it exists).
    first_len: usize,
    /// Length of the first path of the root's second branch.
    second_len: usize,
}

impl Default for PartialTree {
    fn default() -> Self {
        Self::new()
    }
}

impl PartialTree {
    pub fn new() -> Self {
        PartialTree {
            parent: vec![None],
            children: vec![Vec::new()],
            depth: vec![0],
            ext: 0,
            complete: false,
            entries: 0,
            first_len: 0,
            second_len: 0,
        }
    }

    /// Replays `prefix`, checking every entry against the bounds of its own prefix.
    pub fn from_prefix(prefix: &[usize]) -> Result<Self> {
        let mut t = PartialTree::new();
        for &l in prefix {
            t.push(l)?;
        }
        Ok(t)
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    /// Number of PLR entries consumed so far.
    pub fn entries(&self) -> usize {
        self.entries
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Current extension point; the root once the PLR is complete.
    pub fn extension_point(&self) -> usize {
        self.ext
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn root_children(&self) -> usize {
        self.children[0].len()
    }

    pub fn first_path_len(&self) -> usize {
        self.first_len
    }

    pub fn to_rooted_tree(&self) -> RootedTree {
        RootedTree::from_parents(self.parent.clone()).expect("partial tree is a rooted tree")
    }

    /// Whether `len` is an admissible next entry (no cap applied).
    pub fn admits(&self, len: usize) -> bool {
        !self.complete && Checker::new(self).check(len)
    }

    /// Admissible next entries with the first path capped at `cap`.
    pub fn bounds(&self, cap: usize) -> Result<PlrBounds> {
        if self.complete {
            return Err(Error::PlrTrailing(self.entries));
        }
        if cap == 0 {
            return Err(Error::InvalidArgument("PLR cap must be positive".into()));
        }
        let checker = Checker::new(self);
        let at_root = self.ext == 0;
        let terminal_zero_allowed = at_root && checker.check(0);
        let (lower, upper) = if at_root {
            let upper = if self.root_children() == 0 {
                cap
            } else {
                self.first_len.min(cap)
            };
            (1, upper)
        } else {
            (0, self.first_len.saturating_sub(self.depth[self.ext]).min(cap))
        };
        let hi = (lower..=upper).rev().find(|&l| checker.check(l));
        let range = hi.map(|hi| {
            let lo = (lower..=hi).find(|&l| checker.check(l)).expect("hi passes");
            debug_assert!((lo..=hi).all(|l| checker.check(l)), "admissible lengths are contiguous");
            (lo, hi)
        });
        Ok(PlrBounds {
            range,
            terminal_zero_allowed,
            at_root,
        })
    }

    /// Appends an entry after checking it.
    pub fn push(&mut self, len: usize) -> Result<()> {
        if self.complete {
            return Err(Error::PlrTrailing(self.entries));
        }
        if !Checker::new(self).check(len) {
            return Err(Error::PlrOutOfBounds {
                index: self.entries,
                value: len,
            });
        }
        self.apply(len);
        Ok(())
    }

    fn apply(&mut self, len: usize) {
        self.entries += 1;
        let u = self.ext;
        if len == 0 {
            match self.parent[u] {
                None => self.complete = true,
                Some(p) => self.ext = p,
            }
            return;
        }
        if u == 0 {
            match self.children[0].len() {
                0 => self.first_len = len,
                1 => self.second_len = len,
                _ => {}
            }
        }
        let mut prev = u;
        for _ in 0..len {
            let id = self.parent.len();
            self.parent.push(Some(prev));
            self.children.push(Vec::new());
            self.depth.push(self.depth[prev] + 1);
            self.children[prev].push(id);
            prev = id;
        }
        self.ext = self.parent[prev].expect("new leaf has a parent");
    }
}

/// Evaluates the validity conditions for one tentative next length.
struct Checker<'a> {
    tree: &'a PartialTree,
    names: Vec<Vec<u8>>,
}

impl<'a> Checker<'a> {
    fn new(tree: &'a PartialTree) -> Self {
        // Ids are in DFS creation order, so children always have larger ids.
        let n = tree.node_count();
        let mut names: Vec<Vec<u8>> = vec![Vec::new(); n];
        for v in (0..n).rev() {
            let mut s = Vec::with_capacity(2);
            s.push(b'a');
            for &c in &tree.children[v] {
                s.extend_from_slice(&names[c]);
            }
            s.push(b'b');
            names[v] = s;
        }
        Checker { tree, names }
    }

    fn check(&self, len: usize) -> bool {
        let t = self.tree;
        let u = t.ext;
        if len == 0 {
            return u != 0 || self.terminal_ok();
        }
        let root_kids = t.children[0].len();
        if u == 0 && root_kids == 1 && (len + 1 < t.first_len || len > t.first_len) {
            return false;
        }
        let mut path = vec![b'a'; len];
        path.resize(2 * len, b'b');
        // The new child must not outrank its left brother.
        if let Some(&lb) = t.children[u].last() {
            if compare_names(&path, &self.names[lb]) == Ordering::Greater {
                return false;
            }
        }
        if u == 0 {
            return self.centrality_ok(&path, true, len);
        }
        let mut cur = u;
        let mut cur_name = self.with_last(u, &path, false);
        loop {
            let w = t.parent[cur].expect("non-root has a parent");
            let sibs = &t.children[w];
            debug_assert_eq!(sibs.last(), Some(&cur));
            if sibs.len() >= 2 {
                let lb = sibs[sibs.len() - 2];
                if compare_names(&cur_name, &self.names[lb]) == Ordering::Greater {
                    return false;
                }
            }
            if w == 0 {
                return self.centrality_ok(&cur_name, false, len);
            }
            cur_name = self.with_last(w, &cur_name, true);
            cur = w;
        }
    }

    /// Name of `v` with `last` appended as a new last child (`replace == false`)
    /// or substituted for the current last child.
    fn with_last(&self, v: usize, last: &[u8], replace: bool) -> Vec<u8> {
        let kids = &self.tree.children[v];
        let keep = if replace { kids.len() - 1 } else { kids.len() };
        let mut s = Vec::new();
        s.push(b'a');
        for &c in &kids[..keep] {
            s.extend_from_slice(&self.names[c]);
        }
        s.extend_from_slice(last);
        s.push(b'b');
        s
    }

    /// Root must stay a center; with two centers the first branch must not lose
    /// to the rest of the tree.
    fn centrality_ok(&self, last: &[u8], appended: bool, len: usize) -> bool {
        let t = self.tree;
        let kids = &t.children[0];
        let mut names: Vec<&[u8]> = kids.iter().map(|&c| self.names[c].as_slice()).collect();
        if appended {
            names.push(last);
        } else {
            *names.last_mut().expect("root has children") = last;
        }
        if names.len() < 2 {
            return true;
        }
        let second_len = if appended && names.len() == 2 {
            len
        } else {
            t.second_len
        };
        if second_len + 1 != t.first_len {
            return true;
        }
        let mut rest = vec![b'a'];
        for name in &names[1..] {
            rest.extend_from_slice(name);
        }
        rest.push(b'b');
        compare_names(names[0], &rest) != Ordering::Less
    }

    fn terminal_ok(&self) -> bool {
        let t = self.tree;
        match t.children[0].len() {
            0 => true,
            1 => t.first_len == 1,
            _ => true,
        }
    }
}

/// Result of decoding a PLR prefix.
#[derive(Clone, Debug)]
pub struct DecodedPrefix {
    pub tree: RootedTree,
    pub extending_node: usize,
    pub complete: bool,
}

/// Rebuilds the partial tree of a prefix, validating every entry.
pub fn plr_decode_prefix(prefix: &[usize]) -> Result<DecodedPrefix> {
    let t = PartialTree::from_prefix(prefix)?;
    Ok(DecodedPrefix {
        tree: t.to_rooted_tree(),
        extending_node: t.extension_point(),
        complete: t.is_complete(),
    })
}

/// Decodes a complete PLR into a tree graph.
pub fn plr_decode(plr: &Plr) -> Result<RootedTree> {
    let d = plr_decode_prefix(plr.lengths())?;
    if !d.complete {
        return Err(Error::PlrIncomplete);
    }
    Ok(d.tree)
}

pub fn plr_bounds(prefix: &[usize], cap: usize) -> Result<PlrBounds> {
    PartialTree::from_prefix(prefix)?.bounds(cap)
}

pub fn plr_is_valid(seq: &[usize]) -> bool {
    matches!(PartialTree::from_prefix(seq), Ok(t) if t.is_complete())
}

/// PLR of an unrooted tree, rooted at its canonical root.
pub fn plr_encode(g: &Graph) -> Result<Plr> {
    Ok(plr_of_rooted(&RootedTree::canonical(g)?))
}

/// PLR of a rooted tree traversed in canonical order from its given root.
pub fn plr_of_rooted(t: &RootedTree) -> Plr {
    let names = t.names();
    let mut out = Vec::with_capacity(t.len());
    // Iterative form of: for each child c { visit(c, l + 1); l = 0 }; emit(l)
    enum Frame {
        Enter(usize, usize),
        Exit,
    }
    let mut stack = vec![Frame::Enter(t.root(), 0)];
    while let Some(frame) = stack.pop() {
        match frame {
            Frame::Enter(v, l) => {
                let kids = t.sorted_children(v, &names);
                if kids.is_empty() {
                    out.push(l);
                    continue;
                }
                stack.push(Frame::Exit);
                // First child continues the path; the others start fresh at 1.
                for (i, &c) in kids.iter().enumerate().rev() {
                    stack.push(Frame::Enter(c, if i == 0 { l + 1 } else { 1 }));
                }
            }
            Frame::Exit => out.push(0),
        }
    }
    Plr(out)
}

/// All valid PLRs of exactly `r` entries, by bound-driven depth-first expansion.
pub fn enumerate_valid_plrs(r: usize) -> Result<Vec<Plr>> {
    if r == 0 || r > MAX_ENUMERATION_SIZE {
        return Err(Error::UnsupportedSize(r));
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(r);
    expand(&PartialTree::new(), r, &mut prefix, &mut out);
    out.sort();
    Ok(out)
}

fn expand(t: &PartialTree, r: usize, prefix: &mut Vec<usize>, out: &mut Vec<Plr>) {
    let bounds = t.bounds(r).expect("incomplete prefix");
    let remaining = r - prefix.len();
    for l in bounds.values() {
        let closes = bounds.at_root && l == 0;
        if closes {
            if remaining == 1 && t.node_count() == r {
                let mut done = prefix.clone();
                done.push(0);
                out.push(Plr(done));
            }
            continue;
        }
        // Each node contributes exactly one entry, so the nodes must fit the entries left.
        if remaining <= 1 || t.node_count() + l > r {
            continue;
        }
        let mut next = t.clone();
        next.apply(l);
        prefix.push(l);
        expand(&next, r, prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::tree_isomorphic;
    use crate::graph::Permutation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Graph {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.add_edge(rng.gen_range(0..v), v).unwrap();
        }
        g.relabel(&Permutation::random(n, rng))
    }

    #[test]
    fn encode_examples() {
        assert_eq!(plr_encode(&Graph::new(1)).unwrap().lengths(), &[0]);
        assert_eq!(plr_encode(&star(3)).unwrap().lengths(), &[1, 1, 1, 0]);
        assert_eq!(plr_encode(&path(5)).unwrap().lengths(), &[2, 0, 2, 0, 0]);
        assert_eq!(plr_encode(&path(4)).unwrap().lengths(), &[2, 0, 1, 0]);
        assert_eq!(plr_encode(&path(2)).unwrap().lengths(), &[1, 0]);
        assert_eq!(plr_encode(&Graph::new(2)), Err(Error::NotATree));
    }

    #[test]
    fn decode_prefix_examples() {
        let d = plr_decode_prefix(&[2]).unwrap();
        assert_eq!(d.tree.len(), 3);
        assert_eq!(d.tree.parents(), &[None, Some(0), Some(1)]);
        assert_eq!(d.extending_node, 1);
        assert!(!d.complete);

        let d = plr_decode_prefix(&[1, 1, 1, 0]).unwrap();
        assert!(d.complete);
        assert!(tree_isomorphic(&d.tree.to_graph(), &star(3)).unwrap());

        let d = plr_decode_prefix(&[2, 0, 2, 0, 0]).unwrap();
        assert!(d.complete);
        assert!(tree_isomorphic(&d.tree.to_graph(), &path(5)).unwrap());
    }

    #[test]
    fn unit_paths_keep_the_extension_point() {
        // After a length-1 path the next path starts from the same node.
        let d = plr_decode_prefix(&[1, 1]).unwrap();
        assert_eq!(d.extending_node, 0);
        assert_eq!(d.tree.parents(), &[None, Some(0), Some(0)]);
    }

    #[test]
    fn decode_reports_offending_index() {
        assert_eq!(
            plr_decode_prefix(&[1, 2, 0, 0]).unwrap_err(),
            Error::PlrOutOfBounds { index: 1, value: 2 }
        );
        assert_eq!(plr_decode_prefix(&[0, 0]).unwrap_err(), Error::PlrTrailing(1));
    }

    #[test]
    fn bounds_examples() {
        let b = plr_bounds(&[], 10).unwrap();
        assert_eq!(b.range, Some((1, 10)));
        assert!(b.terminal_zero_allowed);

        let b = plr_bounds(&[2], 10).unwrap();
        assert_eq!(b.range, Some((0, 1)));
        assert!(!b.at_root);

        let b = plr_bounds(&[2, 0], 10).unwrap();
        assert_eq!(b.range, Some((1, 2)));
        assert!(!b.terminal_zero_allowed);

        // P4 closed: the root cannot take another branch.
        let b = plr_bounds(&[2, 0, 1], 10).unwrap();
        assert_eq!(b.range, None);
        assert!(b.terminal_zero_allowed);

        assert!(plr_bounds(&[0], 10).is_err());
    }

    #[test]
    fn bounds_respect_cap() {
        let b = plr_bounds(&[], 3).unwrap();
        assert_eq!(b.range, Some((1, 3)));
        assert_eq!(b.count(), 4);
        let b = plr_bounds(&[1], 1).unwrap();
        assert_eq!(b.range, Some((1, 1)));
        assert!(b.terminal_zero_allowed);
    }

    #[test]
    fn validity_examples() {
        assert!(plr_is_valid(&[0]));
        assert!(!plr_is_valid(&[1]));
        assert!(!plr_is_valid(&[1, 2, 0, 0]));
        assert!(plr_is_valid(&[2, 0, 1, 0]));
        assert!(!plr_is_valid(&[]));
        assert!(!plr_is_valid(&[2, 0, 0]));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_valid_plrs(1).unwrap(), vec![Plr(vec![0])]);
        assert_eq!(enumerate_valid_plrs(4).unwrap().len(), 2);
        assert_eq!(enumerate_valid_plrs(7).unwrap().len(), 11);
        assert!(enumerate_valid_plrs(0).is_err());
        assert!(enumerate_valid_plrs(10).is_err());
    }

    #[test]
    fn display_and_parse() {
        let p: Plr = "2,0,2,0,0".parse().unwrap();
        assert_eq!(p.lengths(), &[2, 0, 2, 0, 0]);
        assert_eq!(p.to_string(), "2,0,2,0,0");
        assert!("2,x".parse::<Plr>().is_err());
    }

    #[test]
    fn random_round_trip_and_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..500 {
            let n = rng.gen_range(1..=50);
            let g = random_tree(n, &mut rng);
            let plr = plr_encode(&g).unwrap();
            assert_eq!(plr.len(), n);
            let decoded = plr_decode(&plr).unwrap();
            assert!(tree_isomorphic(&decoded.to_graph(), &g).unwrap());
            let leaves = (0..decoded.len()).filter(|&v| decoded.is_leaf(v) && n > 1).count();
            assert_eq!(plr.lengths().iter().filter(|&&l| l > 0).count(), leaves);
            let relabeled = g.relabel(&Permutation::random(n, &mut rng));
            assert_eq!(plr_encode(&relabeled).unwrap(), plr);
            // Re-encoding the decoded tree from its own root gives the same sequence.
            assert_eq!(plr_of_rooted(&decoded), plr);
        }
    }

    proptest::proptest! {
        #[test]
        fn every_bounded_choice_completes(seed in 0u64..10_000) {
            // Random walk through the bounds always ends in a valid PLR.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut t = PartialTree::new();
            let mut seq = Vec::new();
            while !t.is_complete() {
                let b = t.bounds(6).unwrap();
                let vals = b.values();
                proptest::prop_assert!(!vals.is_empty());
                // bias towards closing so walks stay short
                let l = if t.node_count() > 25 { vals[0] } else { vals[rng.gen_range(0..vals.len())] };
                t.push(l).unwrap();
                seq.push(l);
            }
            proptest::prop_assert!(plr_is_valid(&seq));
            let tree = t.to_rooted_tree();
            proptest::prop_assert_eq!(plr_encode(&tree.to_graph()).unwrap().into_inner(), seq);
        }
    }
}
