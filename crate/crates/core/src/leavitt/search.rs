//! Certificate search for `1 ∈ L_d · L_{-d}`.
//!
//! Multiplying a certificate `Σ c_i x_i y_i = 1` by `p_v` on both sides keeps
//! only the terms with `s(x_i) = v = s(y_i*)`, and every monomial in the
//! normal form of such a product again starts and ends at `v`. The search
//! therefore splits into independent blocks, one per vertex, each asking
//! whether `p_v` lies in the span of its own products.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::graph::DirectedMultigraph;
use crate::group::GaugeGroup;

use super::element::{multiply_monomials, rational, LpaElement};
use super::enumerate::{component_of_length, PathTable};
use super::graph::OracleGraph;
use super::monomial::{normal_form_monomial, raw_product, PathMonomial};
use super::span::{unit_vector, SpanSolver};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle resource cap of {limit} products/monomials exceeded")]
    ResourceCap { limit: u64 },
    #[error("graph has a directed cycle")]
    Cyclic,
    #[error("graph has infinite bundles")]
    InfiniteBundles,
    #[error("emitted certificate failed re-verification: {0}")]
    UnsoundCertificate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    /// Representative edges per infinite bundle.
    pub bundle_size: usize,
    /// Cap on enumerated monomials plus formed products per check.
    pub max_products: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            bundle_size: 3,
            max_products: 50_000_000,
        }
    }
}

/// Which of `L_1 L_{-1}` (`Plus`) or `L_{-1} L_1` (`Minus`) must contain 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    /// Degree classes of the left and right factors.
    pub fn factor_residues(self) -> (i64, i64) {
        match self {
            Direction::Plus => (1, -1),
            Direction::Minus => (-1, 1),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Plus => "+",
            Direction::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateTerm {
    pub left: PathMonomial,
    pub right: PathMonomial,
    pub coefficient: BigRational,
}

/// `Σ coefficient · left · right = 1` with `left` in the degree class of
/// `+1` and `right` in that of `-1` (swapped for [`Direction::Minus`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub group: GaugeGroup,
    pub direction: Direction,
    pub terms: Vec<CertificateTerm>,
}

impl Certificate {
    /// Re-multiplies every term and reduces the sum.
    pub fn expand(&self, graph: &OracleGraph) -> LpaElement {
        self.terms.iter().fold(LpaElement::zero(), |acc, t| {
            acc.add(&multiply_monomials(graph, &t.left, &t.right).scale(&t.coefficient))
        })
    }

    pub fn verify(&self, graph: &OracleGraph) -> Result<(), String> {
        let (dl, dr) = self.direction.factor_residues();
        for t in &self.terms {
            if !t.left.is_valid(graph) || !t.right.is_valid(graph) {
                return Err("certificate term is not a valid monomial".into());
            }
            if !self.group.same_class(t.left.degree(), dl)
                || !self.group.same_class(t.right.degree(), dr)
            {
                return Err(format!(
                    "term {} · {} has degrees outside the required classes",
                    t.left.display(graph),
                    t.right.display(graph)
                ));
            }
        }
        let total = self.expand(graph);
        if total != LpaElement::unit(graph) {
            return Err(format!("terms sum to {}", total.display(graph)));
        }
        Ok(())
    }

    /// Largest `|μ| + |ν|` over all factors.
    pub fn max_factor_length(&self) -> usize {
        self.terms
            .iter()
            .map(|t| t.left.length().max(t.right.length()))
            .max()
            .unwrap_or(0)
    }

    pub fn display(&self, graph: &OracleGraph) -> String {
        self.terms
            .iter()
            .map(|t| {
                format!(
                    "({}) {} · {}",
                    t.coefficient,
                    t.left.display(graph),
                    t.right.display(graph)
                )
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    /// One verified certificate per required direction.
    CertifiedFree { certificates: Vec<Certificate> },
    /// No certificate with factors of length at most `max_len`. This is
    /// not a proof that the grading is not strong.
    UndecidedAt { max_len: usize },
}

impl OracleVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, OracleVerdict::CertifiedFree { .. })
    }
}

/// Factors of one degree class, enumerated lazily by length and bucketed by
/// the vertex they start (left class) or end (right class) at.
struct Factors {
    residue: i64,
    by_len: Vec<Option<Vec<PathMonomial>>>,
    /// `[len][v]` positions in `by_len[len]`.
    by_vertex: Vec<Option<Vec<Vec<usize>>>>,
}

impl Factors {
    fn new(residue: i64) -> Self {
        Factors {
            residue,
            by_len: Vec::new(),
            by_vertex: Vec::new(),
        }
    }
}

type AlphaIndex = BTreeMap<(usize, Vec<usize>), Vec<usize>>;

struct Search<'g> {
    graph: &'g OracleGraph,
    group: GaugeGroup,
    max_len: usize,
    table: PathTable,
    left: Factors,
    right: Factors,
    /// Right factors of length `len` with `s(ν) = v`, keyed by `(s(α), α)`.
    right_index: HashMap<(usize, usize), AlphaIndex>,
    spent: u64,
    limit: u64,
}

impl<'g> Search<'g> {
    fn charge(&mut self, n: u64) -> Result<(), OracleError> {
        self.spent = self.spent.saturating_add(n);
        if self.spent > self.limit {
            return Err(OracleError::ResourceCap { limit: self.limit });
        }
        Ok(())
    }

    /// Fills the length-`len` layer of the left (bucketed by `s(μ)`) or
    /// right (bucketed by `s(ν)`) factors.
    fn ensure_factors(&mut self, left_side: bool, len: usize) -> Result<(), OracleError> {
        let graph = self.graph;
        let group = self.group;
        let factors = if left_side {
            &mut self.left
        } else {
            &mut self.right
        };
        if factors.by_len.len() <= len {
            factors.by_len.resize(len + 1, None);
            factors.by_vertex.resize(len + 1, None);
        }
        if factors.by_len[len].is_some() {
            return Ok(());
        }
        let list = component_of_length(graph, &mut self.table, group, factors.residue, len);
        let mut buckets = vec![Vec::new(); graph.vertex_count()];
        for (i, m) in list.iter().enumerate() {
            let v = if left_side {
                m.left_vertex(graph)
            } else {
                m.right_vertex(graph)
            };
            buckets[v].push(i);
        }
        let count = list.len() as u64;
        factors.by_len[len] = Some(list);
        factors.by_vertex[len] = Some(buckets);
        self.charge(count)
    }

    fn alpha_index(&mut self, v: usize, len: usize) {
        let graph = self.graph;
        let right = &self.right;
        self.right_index.entry((v, len)).or_insert_with(|| {
            let list = right.by_len[len].as_ref().expect("right factors ensured");
            let mut index: AlphaIndex = BTreeMap::new();
            for &i in &right.by_vertex[len].as_ref().expect("buckets ensured")[v] {
                let y = &list[i];
                let key = (graph.path_start(&y.mu, y.base), y.mu.clone());
                index.entry(key).or_default().push(i);
            }
            index
        });
    }

    /// Searches the block of vertex `v`. Returns the certificate terms for
    /// `p_v` or `None` if the length bound is exhausted.
    fn block(&mut self, v: usize) -> Result<Option<Vec<CertificateTerm>>, OracleError> {
        let graph = self.graph;
        let special = graph.special_edges();
        let target = unit_vector(PathMonomial::vertex(v));
        let mut solver: SpanSolver<PathMonomial> = SpanSolver::new();
        let mut seen: HashSet<PathMonomial> = HashSet::new();
        let mut provenance: Vec<(usize, usize, usize, usize)> = Vec::new();

        for total in 0..=2 * self.max_len {
            let mut splits: Vec<(usize, usize)> = (0..=total)
                .map(|a| (a, total - a))
                .filter(|&(a, b)| a <= self.max_len && b <= self.max_len)
                .collect();
            splits.sort_by_key(|&(a, b)| (a.abs_diff(b), a));

            for (a, b) in splits {
                self.ensure_factors(true, a)?;
                self.ensure_factors(false, b)?;
                self.alpha_index(v, b);
                let index = &self.right_index[&(v, b)];
                let lefts = &self.left.by_vertex[a].as_ref().expect("ensured")[v];
                if lefts.is_empty() || index.is_empty() {
                    continue;
                }
                let left_list = self.left.by_len[a].as_ref().expect("ensured");
                let rights = self.right.by_len[b].as_ref().expect("ensured");
                let mut added = false;
                let mut partners: Vec<usize> = Vec::new();
                for &xi in lefts {
                    let x = &left_list[xi];
                    let start = graph.path_start(&x.nu, x.base);
                    partners.clear();
                    // α a prefix of ν (including ν itself) ...
                    for cut in 0..=x.nu.len() {
                        if let Some(ys) = index.get(&(start, x.nu[..cut].to_vec())) {
                            partners.extend(ys);
                        }
                    }
                    // ... or a strict extension of ν.
                    for ((s, alpha), ys) in index.range((start, x.nu.clone())..) {
                        if *s != start || !alpha.starts_with(&x.nu) {
                            break;
                        }
                        if alpha.len() > x.nu.len() {
                            partners.extend(ys);
                        }
                    }
                    self.spent = self.spent.saturating_add(partners.len() as u64);
                    if self.spent > self.limit {
                        return Err(OracleError::ResourceCap { limit: self.limit });
                    }
                    for &yi in &partners {
                        let y = &rights[yi];
                        let Some(m) = raw_product(graph, x, y) else {
                            continue;
                        };
                        if !seen.insert(m.clone()) {
                            continue;
                        }
                        let nf = normal_form_monomial(graph, special, &m);
                        solver.add(nf.into_iter().map(|(n, s)| (n, rational(i64::from(s)))));
                        provenance.push((a, xi, b, yi));
                        added = true;
                    }
                }
                if added && solver.contains(&target) {
                    let combo = solver.express(&target).expect("membership just confirmed");
                    let terms = combo
                        .into_iter()
                        .map(|(g, coefficient)| {
                            let (a, xi, b, yi) = provenance[g];
                            CertificateTerm {
                                left: self.left.by_len[a].as_ref().expect("ensured")[xi].clone(),
                                right: self.right.by_len[b].as_ref().expect("ensured")[yi].clone(),
                                coefficient,
                            }
                        })
                        .collect();
                    return Ok(Some(terms));
                }
            }
        }
        Ok(None)
    }
}

/// Number of paths of length at most `max_len` starting at each vertex.
fn outgoing_path_counts(graph: &OracleGraph, max_len: usize) -> Vec<u128> {
    (0..graph.vertex_count())
        .map(|v| {
            let mut layer = vec![0u128; graph.vertex_count()];
            layer[v] = 1;
            let mut total = 1u128;
            for _ in 0..max_len {
                let mut next = vec![0u128; graph.vertex_count()];
                for (u, &c) in layer.iter().enumerate() {
                    for &e in graph.out_edges(u) {
                        next[graph.range(e)] = next[graph.range(e)].saturating_add(c);
                    }
                }
                total = total.saturating_add(next.iter().fold(0u128, |a, &b| a.saturating_add(b)));
                layer = next;
            }
            total
        })
        .collect()
}

/// Searches for `1 ∈ span{x·y}` with `x`, `y` irreducible monomials of
/// length at most `max_len` in the classes required by `direction`.
/// A returned certificate has been re-verified.
pub fn unit_membership_witness(
    graph: &OracleGraph,
    group: GaugeGroup,
    direction: Direction,
    max_len: usize,
    options: &OracleOptions,
) -> Result<Option<Certificate>, OracleError> {
    let (dl, dr) = direction.factor_residues();
    let mut search = Search {
        graph,
        group,
        max_len,
        table: PathTable::new(graph),
        left: Factors::new(group.reduce(dl)),
        right: Factors::new(group.reduce(dr)),
        right_index: HashMap::new(),
        spent: 0,
        limit: options.max_products,
    };

    // Cheap blocks first, so a failing small block ends the search early.
    let sizes = outgoing_path_counts(graph, max_len);
    let mut order: Vec<usize> = (0..graph.vertex_count()).collect();
    order.sort_by_key(|&v| (sizes[v], v));

    let mut terms = Vec::new();
    for v in order {
        match search.block(v)? {
            Some(block_terms) => terms.extend(block_terms),
            None => return Ok(None),
        }
    }
    let certificate = Certificate {
        group,
        direction,
        terms,
    };
    certificate
        .verify(graph)
        .map_err(OracleError::UnsoundCertificate)?;
    Ok(Some(certificate))
}

/// Tests whether the grading of the Leavitt path algebra by the character
/// group of `group` is strong, by certifying `L_1 L_{-1} = L_0 = L_{-1} L_1`.
pub fn strong_grading_check(
    graph: &OracleGraph,
    group: GaugeGroup,
    max_len: usize,
    options: &OracleOptions,
) -> Result<OracleVerdict, OracleError> {
    let mut certificates = Vec::new();
    for direction in [Direction::Plus, Direction::Minus] {
        match unit_membership_witness(graph, group, direction, max_len, options)? {
            Some(c) => certificates.push(c),
            None => return Ok(OracleVerdict::UndecidedAt { max_len }),
        }
    }
    Ok(OracleVerdict::CertifiedFree { certificates })
}

/// [`strong_grading_check`] on a graph with bundles materialized per
/// `options`.
pub fn check_graph(
    graph: &DirectedMultigraph,
    group: GaugeGroup,
    max_len: usize,
    options: &OracleOptions,
) -> Result<OracleVerdict, OracleError> {
    let og = OracleGraph::materialize(graph, options.bundle_size);
    strong_grading_check(&og, group, max_len, options)
}
