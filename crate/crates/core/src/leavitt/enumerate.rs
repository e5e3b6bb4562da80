use crate::group::GaugeGroup;

use super::graph::OracleGraph;
use super::monomial::PathMonomial;

/// Directed paths of the oracle graph grouped by length and end vertex,
/// extended on demand.
#[derive(Debug, Clone)]
pub struct PathTable {
    /// `by_len[l][v]`: edge sequences of length `l` ending at `v`.
    by_len: Vec<Vec<Vec<Vec<usize>>>>,
}

impl PathTable {
    pub fn new(graph: &OracleGraph) -> Self {
        let zero = (0..graph.vertex_count())
            .map(|_| vec![Vec::new()])
            .collect();
        PathTable { by_len: vec![zero] }
    }

    pub fn ensure(&mut self, graph: &OracleGraph, len: usize) {
        while self.by_len.len() <= len {
            let last = self.by_len.last().expect("length-0 layer exists");
            let mut next = vec![Vec::new(); graph.vertex_count()];
            for (end, paths) in last.iter().enumerate() {
                for p in paths {
                    for &e in graph.out_edges(end) {
                        let mut q = p.clone();
                        q.push(e);
                        next[graph.range(e)].push(q);
                    }
                }
            }
            self.by_len.push(next);
        }
    }

    /// Call [`PathTable::ensure`] first.
    pub fn ending_at(&self, len: usize, v: usize) -> &[Vec<usize>] {
        &self.by_len[len][v]
    }

    /// Number of paths of length `len`, without materializing them.
    pub fn count_of_length(graph: &OracleGraph, len: usize) -> Vec<u128> {
        let mut counts = vec![1u128; graph.vertex_count()];
        for _ in 0..len {
            let mut next = vec![0u128; graph.vertex_count()];
            for (v, &c) in counts.iter().enumerate() {
                for &e in graph.out_edges(v) {
                    next[graph.range(e)] = next[graph.range(e)].saturating_add(c);
                }
            }
            counts = next;
        }
        counts
    }
}

/// Irreducible monomials with `|μ| + |ν| = len` whose degree lies in the
/// class of `residue` (exactly `residue` for the full group).
pub fn component_of_length(
    graph: &OracleGraph,
    table: &mut PathTable,
    group: GaugeGroup,
    residue: i64,
    len: usize,
) -> Vec<PathMonomial> {
    table.ensure(graph, len);
    let special = graph.special_edges();
    let mut out = Vec::new();
    for base in 0..graph.vertex_count() {
        for mu_len in 0..=len {
            let nu_len = len - mu_len;
            if !group.same_class(mu_len as i64 - nu_len as i64, residue) {
                continue;
            }
            for mu in table.ending_at(mu_len, base) {
                for nu in table.ending_at(nu_len, base) {
                    let m = PathMonomial {
                        mu: mu.clone(),
                        nu: nu.clone(),
                        base,
                    };
                    if m.is_irreducible(special) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// All irreducible monomials of length at most `max_len` in the degree
/// class of `residue`, shortest first.
pub fn enumerate_component(
    graph: &OracleGraph,
    residue: i64,
    group: GaugeGroup,
    max_len: usize,
) -> Vec<PathMonomial> {
    let mut table = PathTable::new(graph);
    (0..=max_len)
        .flat_map(|len| component_of_length(graph, &mut table, group, residue, len))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DirectedMultigraph;

    fn og(n: usize, edges: &[(usize, usize)]) -> OracleGraph {
        OracleGraph::materialize(&DirectedMultigraph::from_indices(n, edges, &[]).unwrap(), 3)
    }

    #[test]
    fn single_loop_degree_one() {
        let g = og(1, &[(0, 0)]);
        assert_eq!(
            enumerate_component(&g, 1, GaugeGroup::Full, 2),
            vec![PathMonomial::edge(&g, 0)]
        );
    }

    #[test]
    fn length_zero_is_vertex_projections() {
        let g = og(3, &[(0, 1), (1, 2), (2, 2)]);
        assert_eq!(
            enumerate_component(&g, 0, GaugeGroup::Full, 0),
            (0..3).map(PathMonomial::vertex).collect::<Vec<_>>()
        );
    }

    #[test]
    fn odd_class_mod_two() {
        let g = og(2, &[(0, 1)]);
        let mut got = enumerate_component(&g, 1, GaugeGroup::Cyclic(2), 1);
        got.sort();
        let mut want = vec![PathMonomial::edge(&g, 0), PathMonomial::edge_adjoint(&g, 0)];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn path_counts_match_table() {
        let g = og(2, &[(0, 0), (0, 1), (1, 0)]);
        let mut t = PathTable::new(&g);
        t.ensure(&g, 5);
        for len in 0..=5 {
            let counts = PathTable::count_of_length(&g, len);
            for (v, &count) in counts.iter().enumerate() {
                assert_eq!(count, t.ending_at(len, v).len() as u128);
            }
        }
    }
}
