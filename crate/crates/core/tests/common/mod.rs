//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tdgraph::{Graph, Permutation};

/// Every labeled tree on `n` nodes, one per Prüfer sequence.
pub fn prufer_trees(n: usize) -> Vec<Graph> {
    if n == 1 {
        return vec![Graph::new(1)];
    }
    if n == 2 {
        return vec![Graph::from_edges(2, [(0, 1)]).unwrap()];
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    let mut out = Vec::with_capacity(total);
    let mut seq = vec![0usize; len];
    for mut code in 0..total {
        for s in seq.iter_mut() {
            *s = code % n;
            code /= n;
        }
        out.push(prufer_decode(&seq, n));
    }
    out
}

fn prufer_decode(seq: &[usize], n: usize) -> Graph {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut g = Graph::new(n);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        g.add_edge(leaf, s).unwrap();
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    g.add_edge(rest[0], rest[1]).unwrap();
    g
}

/// Parenthesis encoding of the tree hanging from `v`, children sorted ascending.
fn rooted_form(g: &Graph, v: usize, parent: Option<usize>) -> String {
    let mut kids: Vec<String> = g
        .neighbors(v)
        .iter()
        .filter(|&&u| Some(u) != parent)
        .map(|&u| rooted_form(g, u, Some(v)))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// Isomorphism-invariant form of an unrooted tree: the least rooted form over all roots.
pub fn tree_form(g: &Graph) -> String {
    (0..g.n()).map(|r| rooted_form(g, r, None)).min().unwrap()
}

/// Number of unlabeled trees on `n` nodes, counted by brute force.
pub fn unlabeled_tree_count(n: usize) -> usize {
    prufer_trees(n).iter().map(tree_form).collect::<HashSet<_>>().len()
}

pub fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::new(n);
    for v in 1..n {
        g.add_edge(rng.gen_range(0..v), v).unwrap();
    }
    g.relabel(&Permutation::random(n, rng))
}

/// A random spanning tree plus independent extra edges, randomly relabeled.
pub fn random_connected(n: usize, extra: f64, rng: &mut ChaCha8Rng) -> Graph {
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
    g.relabel(&Permutation::random(n, rng))
}

pub fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
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

/// Connected 4-node graphlets with the orbit index of each template node.
type Template = (Vec<(usize, usize)>, [usize; 4]);

fn orbit_templates() -> Vec<Template> {
    vec![
        (vec![(0, 1), (1, 2), (2, 3)], [0, 1, 1, 0]),
        (vec![(0, 1), (0, 2), (0, 3)], [3, 2, 2, 2]),
        (vec![(0, 1), (1, 2), (2, 3), (3, 0)], [4, 4, 4, 4]),
        (vec![(0, 1), (1, 2), (2, 0), (2, 3)], [6, 6, 7, 5]),
        (vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)], [9, 8, 9, 8]),
        (vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], [10, 10, 10, 10]),
    ]
}

const PERMS4: [[usize; 4]; 24] = [
    [0, 1, 2, 3],
    [0, 1, 3, 2],
    [0, 2, 1, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
    [0, 3, 2, 1],
    [1, 0, 2, 3],
    [1, 0, 3, 2],
    [1, 2, 0, 3],
    [1, 2, 3, 0],
    [1, 3, 0, 2],
    [1, 3, 2, 0],
    [2, 0, 1, 3],
    [2, 0, 3, 1],
    [2, 1, 0, 3],
    [2, 1, 3, 0],
    [2, 3, 0, 1],
    [2, 3, 1, 0],
    [3, 0, 1, 2],
    [3, 0, 2, 1],
    [3, 1, 0, 2],
    [3, 1, 2, 0],
    [3, 2, 0, 1],
    [3, 2, 1, 0],
];

/// Orbit census by matching every 4-subset against the templates under all bijections.
pub fn orbit_census(g: &Graph) -> [u64; 11] {
    let templates = orbit_templates();
    let n = g.n();
    let mut counts = [0u64; 11];
    let mut subset = [0usize; 4];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    subset.copy_from_slice(&[a, b, c, d]);
                    'templates: for (edges, orbits) in &templates {
                        for p in PERMS4 {
                            // template node t sits on graph node subset[p[t]]
                            let matches = (0..4).all(|x| {
                                (x + 1..4).all(|y| {
                                    let in_template = edges.contains(&(x, y)) || edges.contains(&(y, x));
                                    in_template == g.has_edge(subset[p[x]], subset[p[y]])
                                })
                            });
                            if matches {
                                for t in 0..4 {
                                    counts[orbits[t]] += 1;
                                }
                                break 'templates;
                            }
                        }
                    }
                }
            }
        }
    }
    counts
}

/// Every labeled simple graph on `n` nodes.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0..1u64 << pairs.len())
        .map(|mask| {
            Graph::from_edges(
                n,
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e),
            )
            .unwrap()
        })
        .collect()
}

pub fn median(xs: &mut [usize]) -> f64 {
    xs.sort_unstable();
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m] as f64
    } else {
        (xs[m - 1] + xs[m]) as f64 / 2.0
    }
}
