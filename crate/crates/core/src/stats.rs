//! Graph statistics as histograms, MMD between histogram sets, and the lobster check.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::{is_connected, Graph};

pub const CLUSTERING_BINS: usize = 100;
pub const SPECTRAL_BINS: usize = 200;
pub const ORBIT_COUNT: usize = 11;

/// Uniformly binned distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    edges: Vec<f64>,
    masses: Vec<f64>,
}

impl Histogram {
    pub fn new(edges: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if edges.len() != masses.len() + 1 || masses.is_empty() {
            return Err(Error::InvalidArgument("histogram needs one more edge than bins".into()));
        }
        if edges.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("histogram edges must increase".into()));
        }
        if masses.iter().any(|&m| m < 0.0 || !m.is_finite()) {
            return Err(Error::InvalidArgument("histogram masses must be non-negative".into()));
        }
        Ok(Histogram { edges, masses })
    }

    /// `bins` equal bins over `[lo, hi]`; values equal to `hi` fall in the last bin.
    fn from_values(values: &[f64], lo: f64, hi: f64, bins: usize) -> Self {
        let width = (hi - lo) / bins as f64;
        let edges = (0..=bins).map(|i| lo + width * i as f64).collect();
        let mut masses = vec![0.0; bins];
        for &x in values {
            let i = (((x - lo) / width).floor().max(0.0) as usize).min(bins - 1);
            masses[i] += 1.0;
        }
        normalize(&mut masses);
        Histogram { edges, masses }
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn bin_width(&self) -> f64 {
        self.edges[1] - self.edges[0]
    }
}

fn normalize(masses: &mut [f64]) {
    let total: f64 = masses.iter().sum();
    if total > 0.0 {
        masses.iter_mut().for_each(|m| *m /= total);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StatKind {
    Degree,
    Clustering,
    Orbit4,
    Spectral,
}

impl StatKind {
    pub const ALL: [StatKind; 4] = [
        StatKind::Degree,
        StatKind::Clustering,
        StatKind::Orbit4,
        StatKind::Spectral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StatKind::Degree => "deg",
            StatKind::Clustering => "clus",
            StatKind::Orbit4 => "orbit",
            StatKind::Spectral => "spec",
        }
    }

    /// How the per-graph histogram is binned.
    pub fn binning(self) -> String {
        match self {
            StatKind::Degree => "integer degrees from 0".into(),
            StatKind::Clustering => format!("{CLUSTERING_BINS} bins on [0,1]"),
            StatKind::Orbit4 => format!("{ORBIT_COUNT} orbits of 4-node graphlets"),
            StatKind::Spectral => format!("{SPECTRAL_BINS} bins on [0,2]"),
        }
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StatKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown statistic {s:?}")))
    }
}

pub fn graph_statistic(g: &Graph, kind: StatKind) -> Result<Histogram> {
    if g.n() == 0 {
        return Err(Error::Empty("graph has no nodes".into()));
    }
    Ok(match kind {
        StatKind::Degree => {
            let max = (0..g.n()).map(|v| g.degree(v)).max().unwrap_or(0);
            let mut masses = vec![0.0; max + 1];
            for v in 0..g.n() {
                masses[g.degree(v)] += 1.0;
            }
            normalize(&mut masses);
            Histogram {
                edges: (0..=max + 1).map(|d| d as f64).collect(),
                masses,
            }
        }
        StatKind::Clustering => Histogram::from_values(&clustering_coefficients(g), 0.0, 1.0, CLUSTERING_BINS),
        StatKind::Orbit4 => {
            let mut masses: Vec<f64> = orbit_counts(g).iter().map(|&c| c as f64).collect();
            normalize(&mut masses);
            Histogram {
                edges: (0..=ORBIT_COUNT).map(|i| i as f64).collect(),
                masses,
            }
        }
        StatKind::Spectral => Histogram::from_values(&normalized_laplacian_spectrum(g)?, 0.0, 2.0, SPECTRAL_BINS),
    })
}

/// Local clustering coefficient of every node (0 below degree 2).
pub fn clustering_coefficients(g: &Graph) -> Vec<f64> {
    (0..g.n())
        .map(|v| {
            let nb = g.neighbors(v);
            let d = nb.len();
            if d < 2 {
                return 0.0;
            }
            let mut links = 0usize;
            for (i, &a) in nb.iter().enumerate() {
                links += nb[i + 1..].iter().filter(|&&b| g.has_edge(a, b)).count();
            }
            2.0 * links as f64 / (d * (d - 1)) as f64
        })
        .collect()
}

/// Eigenvalues of `I − D^{-1/2} A D^{-1/2}`, ascending.
pub fn normalized_laplacian_spectrum(g: &Graph) -> Result<Vec<f64>> {
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let inv_sqrt: Vec<f64> = (0..n)
        .map(|v| match g.degree(v) {
            0 => 0.0,
            d => 1.0 / (d as f64).sqrt(),
        })
        .collect();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for v in 0..n {
        if g.degree(v) > 0 {
            m[(v, v)] = 1.0;
        }
    }
    for (u, v) in g.edges() {
        let x = -inv_sqrt[u] * inv_sqrt[v];
        m[(u, v)] = x;
        m[(v, u)] = x;
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Per-orbit node counts over all connected induced 4-node subgraphs, in the order
/// P4 end, P4 middle, star leaf, star center, C4, paw tail, paw side, paw center,
/// diamond side, diamond middle, K4.
pub fn orbit_counts(g: &Graph) -> [u64; ORBIT_COUNT] {
    let n = g.n();
    let mut counts = [0u64; ORBIT_COUNT];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let nodes = [a, b, c, d];
                    let mut deg = [0usize; 4];
                    let mut m = 0;
                    for i in 0..4 {
                        for j in i + 1..4 {
                            if g.has_edge(nodes[i], nodes[j]) {
                                deg[i] += 1;
                                deg[j] += 1;
                                m += 1;
                            }
                        }
                    }
                    if m < 3 || deg.contains(&0) {
                        continue;
                    }
                    let max_deg = *deg.iter().max().expect("four nodes");
                    for &k in &deg {
                        counts[orbit_of(m, max_deg, k)] += 1;
                    }
                }
            }
        }
    }
    counts
}

/// Orbit index of a node with degree `k` in a connected 4-node graphlet with
/// `m` edges and maximum degree `max_deg`.
fn orbit_of(m: usize, max_deg: usize, k: usize) -> usize {
    match (m, max_deg, k) {
        (3, 2, 1) => 0,
        (3, 2, 2) => 1,
        (3, 3, 1) => 2,
        (3, 3, 3) => 3,
        (4, 2, _) => 4,
        (4, 3, 1) => 5,
        (4, 3, 2) => 6,
        (4, 3, 3) => 7,
        (5, _, 2) => 8,
        (5, _, 3) => 9,
        (6, _, _) => 10,
        _ => unreachable!("not a connected graphlet: m={m} max={max_deg} k={k}"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kernel {
    GaussianEmd { sigma: f64 },
    Tv,
}

impl Kernel {
    pub fn gaussian_emd(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
        }
        Ok(Kernel::GaussianEmd { sigma })
    }

    fn eval(&self, p: &[f64], q: &[f64], width: f64) -> f64 {
        match *self {
            Kernel::GaussianEmd { sigma } => {
                let d = emd_aligned(p, q, width);
                (-d * d / (2.0 * sigma * sigma)).exp()
            }
            Kernel::Tv => (-0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()).exp(),
        }
    }
}

fn emd_aligned(p: &[f64], q: &[f64], width: f64) -> f64 {
    let (mut cp, mut cq, mut total) = (0.0, 0.0, 0.0);
    for (a, b) in p.iter().zip(q) {
        cp += a;
        cq += b;
        total += (cp - cq).abs();
    }
    total * width
}

/// Earth mover's distance between two 1D histograms on compatible grids.
pub fn emd(p: &Histogram, q: &Histogram) -> Result<f64> {
    let (grid, width) = common_grid(&[p, q])?;
    Ok(emd_aligned(&grid[0], &grid[1], width))
}

const GRID_EPS: f64 = 1e-9;

/// Pads every histogram with zero bins onto the union of their supports.
fn common_grid(hs: &[&Histogram]) -> Result<(Vec<Vec<f64>>, f64)> {
    let width = hs[0].bin_width();
    let lo = hs.iter().map(|h| h.edges[0]).fold(f64::INFINITY, f64::min);
    let mut offsets = Vec::with_capacity(hs.len());
    let mut bins = 0;
    for h in hs {
        let uniform = h
            .edges
            .windows(2)
            .all(|w| ((w[1] - w[0]) - width).abs() <= GRID_EPS * width.max(1.0));
        if !uniform {
            return Err(Error::InvalidArgument("histograms use different bin widths".into()));
        }
        let shift = (h.edges[0] - lo) / width;
        if (shift - shift.round()).abs() > GRID_EPS * shift.abs().max(1.0) {
            return Err(Error::InvalidArgument("histogram grids are not aligned".into()));
        }
        let off = shift.round() as usize;
        bins = bins.max(off + h.masses.len());
        offsets.push(off);
    }
    let grid = hs
        .iter()
        .zip(offsets)
        .map(|(h, off)| {
            let mut v = vec![0.0; bins];
            v[off..off + h.masses.len()].copy_from_slice(&h.masses);
            v
        })
        .collect();
    Ok((grid, width))
}

/// Squared MMD (V-statistic) between two histogram sets; may be slightly negative.
pub fn mmd_squared(a: &[Histogram], b: &[Histogram], kernel: Kernel) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("MMD needs two non-empty sets".into()));
    }
    let all: Vec<&Histogram> = a.iter().chain(b).collect();
    let (grid, width) = common_grid(&all)?;
    let (ga, gb) = grid.split_at(a.len());
    let mean = |x: &[Vec<f64>], y: &[Vec<f64>]| {
        let mut s = 0.0;
        for p in x {
            for q in y {
                s += kernel.eval(p, q, width);
            }
        }
        s / (x.len() * y.len()) as f64
    };
    Ok(mean(ga, ga) + mean(gb, gb) - 2.0 * mean(ga, gb))
}

/// MMD with the squared value clamped at zero before the square root.
pub fn mmd(a: &[Histogram], b: &[Histogram], kernel: Kernel) -> Result<f64> {
    Ok(mmd_squared(a, b, kernel)?.max(0.0).sqrt())
}

/// Statistic histograms of every graph.
pub fn statistics(gs: &[Graph], kind: StatKind) -> Result<Vec<Histogram>> {
    use rayon::prelude::*;
    gs.par_iter().map(|g| graph_statistic(g, kind)).collect()
}

/// A tree that becomes a path (or vanishes to at most one node) after removing
/// its leaves twice.
pub fn is_lobster(g: &Graph) -> bool {
    if !g.is_tree() {
        return false;
    }
    let mut alive = vec![true; g.n()];
    let mut degree: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    for _ in 0..2 {
        let leaves: Vec<usize> = (0..g.n()).filter(|&v| alive[v] && degree[v] <= 1).collect();
        let remaining = alive.iter().filter(|&&a| a).count();
        if remaining <= 2 {
            return true;
        }
        for &v in &leaves {
            alive[v] = false;
        }
        for &v in &leaves {
            for &u in g.neighbors(v) {
                if alive[u] {
                    degree[u] -= 1;
                }
            }
        }
    }
    (0..g.n()).all(|v| !alive[v] || degree[v] <= 2)
}

pub fn lobster_accuracy(gs: &[Graph]) -> Result<f64> {
    if gs.is_empty() {
        return Err(Error::Empty("no graphs".into()));
    }
    Ok(gs.iter().filter(|g| is_lobster(g)).count() as f64 / gs.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn k3_statistics() {
        let d = graph_statistic(&complete(3), StatKind::Degree).unwrap();
        assert_eq!(d.masses(), &[0.0, 0.0, 1.0]);
        let c = graph_statistic(&complete(3), StatKind::Clustering).unwrap();
        assert_eq!(c.masses()[CLUSTERING_BINS - 1], 1.0);
        assert_eq!(c.masses().iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn p4_has_one_graphlet() {
        let c = orbit_counts(&path(4));
        assert_eq!(c, [2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(orbit_counts(&complete(4))[10], 4);
        assert_eq!(orbit_counts(&complete(3)), [0; ORBIT_COUNT]);
    }

    #[test]
    fn spectrum_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let n = rng.gen_range(1..30);
            let mut g = path(n);
            for _ in 0..n {
                let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if u != v {
                    g.add_edge(u, v).unwrap();
                }
            }
            let ev = normalized_laplacian_spectrum(&g).unwrap();
            assert!(ev[0].abs() < 1e-8);
            assert!(ev.iter().all(|&x| (-1e-9..=2.0 + 1e-9).contains(&x)));
            let h = graph_statistic(&g, StatKind::Spectral).unwrap();
            assert!((h.masses().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        let split = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(graph_statistic(&split, StatKind::Spectral), Err(Error::Disconnected));
    }

    #[test]
    fn mmd_examples() {
        let unit = |at: usize| {
            let mut m = vec![0.0; 6];
            m[at] = 1.0;
            Histogram::new((0..=6).map(|i| i as f64).collect(), m).unwrap()
        };
        let k = Kernel::gaussian_emd(1.0).unwrap();
        let a = vec![unit(1)];
        assert_eq!(mmd(&a, &a, k).unwrap(), 0.0);
        let d = 3.0f64;
        let got = mmd_squared(&[unit(1)], &[unit(4)], k).unwrap();
        assert!((got - (2.0 - 2.0 * (-d * d / 2.0).exp())).abs() < 1e-12);
        let t = mmd_squared(&[unit(1)], &[unit(4)], Kernel::Tv).unwrap();
        assert!((t - (2.0 - 2.0 * (-1.0f64).exp())).abs() < 1e-12);
        assert!(mmd(&[], &a, k).is_err());
        assert!(Kernel::gaussian_emd(0.0).is_err());
    }

    #[test]
    fn degree_histograms_of_different_lengths_align() {
        let a = graph_statistic(&path(5), StatKind::Degree).unwrap();
        let b = graph_statistic(&complete(5), StatKind::Degree).unwrap();
        assert!(mmd(std::slice::from_ref(&a), std::slice::from_ref(&b), Kernel::Tv).unwrap() > 0.0);
        assert_eq!(
            mmd(&[a.clone(), b.clone()], &[b, a], Kernel::gaussian_emd(1.0).unwrap()).unwrap(),
            0.0
        );
        let c = graph_statistic(&path(5), StatKind::Clustering).unwrap();
        let d = graph_statistic(&path(5), StatKind::Degree).unwrap();
        assert!(mmd(&[c], &[d], Kernel::Tv).is_err());
    }

    #[test]
    fn lobster_examples() {
        for n in 1..8 {
            assert!(is_lobster(&path(n)));
        }
        let star = Graph::from_edges(6, (1..6).map(|i| (0, i))).unwrap();
        assert!(is_lobster(&star));
        // Three legs of three nodes from a hub: two strips leave a claw.
        let mut spider = Graph::new(10);
        for leg in 0..3 {
            let base = 1 + 3 * leg;
            spider.add_edge(0, base).unwrap();
            spider.add_edge(base, base + 1).unwrap();
            spider.add_edge(base + 1, base + 2).unwrap();
        }
        assert!(!is_lobster(&spider));
        assert!(!is_lobster(&complete(3)));
        let mixed: Vec<Graph> = (0..5).map(|_| path(4)).chain((0..5).map(|_| complete(3))).collect();
        assert_eq!(lobster_accuracy(&mixed).unwrap(), 0.5);
        assert!(lobster_accuracy(&[]).is_err());
    }

    proptest::proptest! {
        #[test]
        fn emd_is_a_metric(a in proptest::collection::vec(0.0f64..1.0, 8),
                           b in proptest::collection::vec(0.0f64..1.0, 8),
                           c in proptest::collection::vec(0.0f64..1.0, 8)) {
            let h = |m: &Vec<f64>| {
                let mut m = m.clone();
                normalize(&mut m);
                Histogram::new((0..=8).map(|i| i as f64 * 0.5).collect(), m).unwrap()
            };
            let (ha, hb, hc) = (h(&a), h(&b), h(&c));
            proptest::prop_assert_eq!(emd(&ha, &ha).unwrap(), 0.0);
            let (ab, bc, ac) = (emd(&ha, &hb).unwrap(), emd(&hb, &hc).unwrap(), emd(&ha, &hc).unwrap());
            proptest::prop_assert!(ac <= ab + bc + 1e-12);
            proptest::prop_assert!((ab - emd(&hb, &ha).unwrap()).abs() < 1e-15);
            let k = Kernel::gaussian_emd(1.0).unwrap();
            let sa = vec![ha.clone(), hb.clone()];
            let sb = vec![hc.clone()];
            proptest::prop_assert_eq!(mmd(&sa, &sa, k).unwrap(), 0.0);
            proptest::prop_assert!((mmd_squared(&sa, &sb, k).unwrap() - mmd_squared(&sb, &sa, k).unwrap()).abs() < 1e-12);
        }
    }
}
