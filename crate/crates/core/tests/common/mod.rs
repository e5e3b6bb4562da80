use gaugefree::graph::{DirectedMultigraph, ExtendedNat, VertexSet};

/// A small graph on vertices `0..n`, described by index pairs.
#[derive(Debug, Clone)]
pub struct SmallGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub bundles: Vec<(usize, usize)>,
}

impl SmallGraph {
    pub fn build(&self) -> DirectedMultigraph {
        DirectedMultigraph::from_indices(self.n, &self.edges, &self.bundles).unwrap()
    }
}

/// `S_len` by exhaustive search over walks of exactly `len` arrows.
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
