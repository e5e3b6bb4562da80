//! Graph corpora and brute-force reference computations for the
//! acceptance suite in `tests/acceptance.rs`.

use std::collections::BTreeSet;

use gaugefree::graph::{DirectedMultigraph, ExtendedNat, VertexSet};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A small graph on vertices `0..n`, described by index pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SmallGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub bundles: Vec<(usize, usize)>,
}

impl SmallGraph {
    pub fn build(&self) -> DirectedMultigraph {
        DirectedMultigraph::from_indices(self.n, &self.edges, &self.bundles).unwrap()
    }

    pub fn label(&self) -> String {
        let fmt = |pairs: &[(usize, usize)]| {
            pairs
                .iter()
                .map(|(s, r)| format!("{s}{r}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut s = format!("n={} edges=[{}]", self.n, fmt(&self.edges));
        if !self.bundles.is_empty() {
            s += &format!(" inf=[{}]", fmt(&self.bundles));
        }
        s
    }

    /// Replaces every positive edge multiplicity by `m`.
    pub fn with_uniform_multiplicity(&self, m: usize) -> SmallGraph {
        let distinct: BTreeSet<(usize, usize)> = self.edges.iter().copied().collect();
        SmallGraph {
            n: self.n,
            edges: distinct
                .into_iter()
                .flat_map(|p| std::iter::repeat_n(p, m))
                .collect(),
            bundles: self.bundles.clone(),
        }
    }

    fn relabel(&self, perm: &[usize]) -> SmallGraph {
        let map = |v: &[(usize, usize)]| {
            let mut out: Vec<(usize, usize)> = v.iter().map(|&(s, r)| (perm[s], perm[r])).collect();
            out.sort_unstable();
            out
        };
        SmallGraph {
            n: self.n,
            edges: map(&self.edges),
            bundles: map(&self.bundles),
        }
    }

    /// Lexicographically least relabelling.
    pub fn canonical(&self) -> SmallGraph {
        permutations(self.n)
            .iter()
            .map(|p| self.relabel(p))
            .min()
            .expect("at least the identity permutation")
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Multisets of size at most `max` drawn from `items`, as sorted vectors.
fn multisets<T: Copy>(items: &[T], max: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    fn go<T: Copy>(
        items: &[T],
        start: usize,
        left: usize,
        cur: &mut Vec<T>,
        out: &mut Vec<Vec<T>>,
    ) {
        if left == 0 {
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            out.push(cur.clone());
            go(items, i, left - 1, cur, out);
            cur.pop();
        }
    }
    go(items, 0, max, &mut Vec::new(), &mut out);
    out
}

/// Every multigraph with 1 to 3 vertices and at most 3 finite edges, one
/// representative per isomorphism class, followed by every variant with
/// one infinite bundle added (again up to isomorphism).
pub fn small_corpus() -> Vec<SmallGraph> {
    let mut finite = BTreeSet::new();
    let mut with_bundle = BTreeSet::new();
    for n in 1..=3 {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|s| (0..n).map(move |r| (s, r))).collect();
        for edges in multisets(&pairs, 3) {
            let g = SmallGraph {
                n,
                edges,
                bundles: Vec::new(),
            };
            for &b in &pairs {
                with_bundle.insert(
                    SmallGraph {
                        bundles: vec![b],
                        ..g.clone()
                    }
                    .canonical(),
                );
            }
            finite.insert(g.canonical());
        }
    }
    finite.into_iter().chain(with_bundle).collect()
}

/// Acyclic multigraphs on 1 to `max_vertices` vertices: every simple DAG
/// (edges `u -> v` with `u < v`), plus every DAG with edge multiplicities
/// up to 2 on at most `max_multi_vertices` vertices.
pub fn acyclic_corpus(max_vertices: usize, max_multi_vertices: usize) -> Vec<SmallGraph> {
    let mut out = BTreeSet::new();
    for n in 1..=max_vertices {
        let forward: Vec<(usize, usize)> = (0..n)
            .flat_map(|s| (s + 1..n).map(move |r| (s, r)))
            .collect();
        let max_mult = if n <= max_multi_vertices { 2 } else { 1 };
        let mut counts = vec![0usize; forward.len()];
        loop {
            let edges = forward
                .iter()
                .zip(&counts)
                .flat_map(|(&p, &c)| std::iter::repeat_n(p, c))
                .collect();
            out.insert(SmallGraph {
                n,
                edges,
                bundles: Vec::new(),
            });
            // Odometer over multiplicities.
            let mut i = 0;
            while i < counts.len() && counts[i] == max_mult {
                counts[i] = 0;
                i += 1;
            }
            if i == counts.len() {
                break;
            }
            counts[i] += 1;
        }
    }
    out.into_iter().collect()
}

/// A random graph with 1 to `max_vertices` vertices and at most
/// `max_edges` arrows; each arrow is an infinite bundle with probability
/// `bundle_rate`.
pub fn random_graph(
    rng: &mut ChaCha8Rng,
    max_vertices: usize,
    max_edges: usize,
    bundle_rate: f64,
) -> SmallGraph {
    let n = rng.gen_range(1..=max_vertices);
    let m = rng.gen_range(0..=max_edges);
    let mut edges = Vec::new();
    let mut bundles = Vec::new();
    for _ in 0..m {
        let pair = (rng.gen_range(0..n), rng.gen_range(0..n));
        if rng.gen_bool(bundle_rate) {
            bundles.push(pair);
        } else {
            edges.push(pair);
        }
    }
    SmallGraph { n, edges, bundles }
}

/// `S_len` by exhaustive search: `v` qualifies when some walk of exactly
/// `len` arrows ends at `v`. Only the adjacency relation is consulted.
pub fn brute_force_receivers(graph: &DirectedMultigraph, len: usize) -> VertexSet {
    let n = graph.vertex_count();
    let preds: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            (0..n)
                .filter(|&u| graph.multiplicity(u, v) != ExtendedNat::ZERO)
                .collect()
        })
        .collect();
    fn walk_back(preds: &[Vec<usize>], v: usize, left: usize) -> bool {
        left == 0 || preds[v].iter().any(|&u| walk_back(preds, u, left - 1))
    }
    VertexSet::from_indices(n, (0..n).filter(|&v| walk_back(&preds, v, len)))
}
