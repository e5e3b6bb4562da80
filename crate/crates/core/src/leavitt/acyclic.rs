use crate::graph::DirectedMultigraph;

use super::enumerate::PathTable;
use super::graph::OracleGraph;
use super::search::OracleError;

/// `Σ_{sinks v} n_v²` where `n_v` counts the paths ending at `v`, the
/// trivial one included. For a finite acyclic graph this is the dimension
/// of its Leavitt path algebra (a direct sum of `n_v × n_v` matrix blocks).
pub fn lpa_dimension_acyclic(graph: &DirectedMultigraph) -> Result<u64, OracleError> {
    if !graph.is_row_finite() {
        return Err(OracleError::InfiniteBundles);
    }
    if graph.has_cycle() {
        return Err(OracleError::Cyclic);
    }
    let n = graph.vertex_count();
    let mut paths_into: Vec<Option<u64>> = vec![None; n];
    fn count(graph: &DirectedMultigraph, v: usize, memo: &mut Vec<Option<u64>>) -> u64 {
        if let Some(c) = memo[v] {
            return c;
        }
        let mut c = 1u64;
        for e in graph.edges().iter().filter(|e| e.range == v) {
            c += count(graph, e.source, memo);
        }
        memo[v] = Some(c);
        c
    }
    Ok(graph
        .sinks()
        .iter()
        .map(|v| {
            let c = count(graph, v, &mut paths_into);
            c * c
        })
        .sum())
}

/// Counts irreducible monomials of an acyclic oracle graph by enumerating
/// every pair of paths with a common end.
pub fn irreducible_monomial_count(graph: &OracleGraph) -> u64 {
    let mut table = PathTable::new(graph);
    // An acyclic graph on n vertices has no path longer than n - 1.
    let longest = graph.vertex_count().saturating_sub(1);
    table.ensure(graph, longest);
    let special = graph.special_edges();
    let mut total = 0u64;
    for base in 0..graph.vertex_count() {
        let ending: Vec<&Vec<usize>> = (0..=longest)
            .flat_map(|l| table.ending_at(l, base))
            .collect();
        for mu in &ending {
            for nu in &ending {
                let irreducible = match (mu.last(), nu.last()) {
                    (Some(a), Some(b)) => !(a == b && special.is_special(*a)),
                    _ => true,
                };
                if irreducible {
                    total += 1;
                }
            }
        }
    }
    total
}
