use crate::graph::DirectedMultigraph;

/// The graph the oracle computes over: the finite edges of the input plus
/// `bundle_size` representative edges for every infinite bundle. The
/// Cuntz-Krieger sum relation is imposed only at regular vertices of the
/// input graph, never at infinite emitters.
#[derive(Debug, Clone)]
pub struct OracleGraph {
    vertex_names: Vec<String>,
    edge_ids: Vec<String>,
    source: Vec<usize>,
    range: Vec<usize>,
    out_edges: Vec<Vec<usize>>,
    regular: Vec<bool>,
    special: SpecialEdgeChoice,
}

impl OracleGraph {
    pub fn materialize(graph: &DirectedMultigraph, bundle_size: usize) -> Self {
        let n = graph.vertex_count();
        let mut edge_ids = Vec::new();
        let mut source = Vec::new();
        let mut range = Vec::new();
        for e in graph.edges() {
            edge_ids.push(e.id.clone());
            source.push(e.source);
            range.push(e.range);
        }
        for &(u, v) in graph.infinite_bundles() {
            for i in 0..bundle_size {
                let mut id = format!("{}=>{}[{i}]", graph.vertex_name(u), graph.vertex_name(v));
                while edge_ids.contains(&id) {
                    id.push('\'');
                }
                edge_ids.push(id);
                source.push(u);
                range.push(v);
            }
        }
        let mut out_edges = vec![Vec::new(); n];
        for (e, &s) in source.iter().enumerate() {
            out_edges[s].push(e);
        }
        let regular_set = graph.regular_vertices();
        let regular: Vec<bool> = (0..n).map(|v| regular_set.contains(v)).collect();

        let mut g = OracleGraph {
            vertex_names: graph.vertices().to_vec(),
            edge_ids,
            source,
            range,
            out_edges,
            regular,
            special: SpecialEdgeChoice::default(),
        };
        g.special = SpecialEdgeChoice::lowest_declared(&g);
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn edge_id(&self, e: usize) -> &str {
        &self.edge_ids[e]
    }

    pub fn source(&self, e: usize) -> usize {
        self.source[e]
    }

    pub fn range(&self, e: usize) -> usize {
        self.range[e]
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    /// Finite emitter and not a sink in the input graph.
    pub fn is_regular(&self, v: usize) -> bool {
        self.regular[v]
    }

    pub fn special_edges(&self) -> &SpecialEdgeChoice {
        &self.special
    }

    /// Replaces the special-edge choice. Fails if the choice names an edge
    /// not emitted by its vertex or leaves a regular vertex without one.
    pub fn set_special_edges(&mut self, choice: &[Option<usize>]) -> Result<(), String> {
        self.special = SpecialEdgeChoice::new(self, choice)?;
        Ok(())
    }

    /// First vertex of a path ending at `end`.
    pub fn path_start(&self, path: &[usize], end: usize) -> usize {
        path.first().map_or(end, |&e| self.source[e])
    }

    pub fn is_path(&self, path: &[usize]) -> bool {
        path.windows(2)
            .all(|w| self.range[w[0]] == self.source[w[1]])
    }
}

/// One distinguished outgoing edge per regular vertex. Monomials whose two
/// paths both end in the same distinguished edge are rewritten away, so the
/// irreducible monomials form a basis.
#[derive(Debug, Clone, Default)]
pub struct SpecialEdgeChoice {
    by_vertex: Vec<Option<usize>>,
    is_special: Vec<bool>,
    /// The other edges emitted by the vertex, in declaration order.
    siblings: Vec<Vec<usize>>,
}

impl SpecialEdgeChoice {
    /// The lowest edge in declaration order at every regular vertex.
    pub fn lowest_declared(graph: &OracleGraph) -> Self {
        let choice: Vec<Option<usize>> = (0..graph.vertex_count())
            .map(|v| {
                graph
                    .is_regular(v)
                    .then(|| graph.out_edges(v).first().copied())
                    .flatten()
            })
            .collect();
        Self::new(graph, &choice).expect("lowest declared edge is always valid")
    }

    pub fn new(graph: &OracleGraph, choice: &[Option<usize>]) -> Result<Self, String> {
        if choice.len() != graph.vertex_count() {
            return Err("one entry per vertex expected".into());
        }
        let mut is_special = vec![false; graph.edge_count()];
        let mut siblings = vec![Vec::new(); graph.vertex_count()];
        for (v, &c) in choice.iter().enumerate() {
            match (graph.is_regular(v), c) {
                (true, Some(e)) => {
                    if e >= graph.edge_count() || graph.source(e) != v {
                        return Err(format!("edge {e} is not emitted by vertex {v}"));
                    }
                    is_special[e] = true;
                    siblings[v] = graph
                        .out_edges(v)
                        .iter()
                        .copied()
                        .filter(|&f| f != e)
                        .collect();
                }
                (true, None) => return Err(format!("regular vertex {v} needs a special edge")),
                (false, Some(_)) => {
                    return Err(format!(
                        "vertex {v} is not regular and takes no special edge"
                    ))
                }
                (false, None) => {}
            }
        }
        Ok(SpecialEdgeChoice {
            by_vertex: choice.to_vec(),
            is_special,
            siblings,
        })
    }

    pub fn special_edge(&self, v: usize) -> Option<usize> {
        self.by_vertex[v]
    }

    pub fn is_special(&self, e: usize) -> bool {
        self.is_special[e]
    }

    pub fn siblings(&self, v: usize) -> &[usize] {
        &self.siblings[v]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundles_materialize_without_special_edges() {
        let g = DirectedMultigraph::from_indices(2, &[(0, 1), (1, 1)], &[(0, 0)]).unwrap();
        let og = OracleGraph::materialize(&g, 3);
        assert_eq!(og.edge_count(), 5);
        assert_eq!(og.out_edges(0), &[0, 2, 3, 4]);
        assert!(!og.is_regular(0));
        assert!(og.is_regular(1));
        assert_eq!(og.special_edges().special_edge(0), None);
        assert_eq!(og.special_edges().special_edge(1), Some(1));
        assert_eq!(og.edge_id(2), "v0=>v0[0]");
    }

    #[test]
    fn special_choice_validation() {
        let g = DirectedMultigraph::from_indices(2, &[(0, 1), (0, 0)], &[]).unwrap();
        let mut og = OracleGraph::materialize(&g, 3);
        assert_eq!(og.special_edges().special_edge(0), Some(0));
        assert_eq!(og.special_edges().siblings(0), &[1]);
        og.set_special_edges(&[Some(1), None]).unwrap();
        assert_eq!(og.special_edges().siblings(0), &[0]);
        assert!(og.set_special_edges(&[None, None]).is_err());
        assert!(og.set_special_edges(&[Some(0), Some(1)]).is_err());
    }
}
