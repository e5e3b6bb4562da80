//! Finite-dimensional correspondences over commutative algebras of functions
//! on a finite set, and the freeness verdicts for their gauge actions.
//!
//! Over `A = C(X)` with `X` finite, a correspondence is determined up to
//! isomorphism by the dimensions `D[u][v]` of its fibers (left action at `u`,
//! right action at `v`). Ideals of `A` are functions supported on a subset
//! of `X`, so every ideal computation below is a computation on subsets.
//! Everything is finite dimensional, so all ideals and spans are closed.

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::{DirectedMultigraph, ExtendedNat, VertexSet};
use crate::group::{GaugeGroup, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorrespondenceError {
    #[error("a correspondence needs at least one point")]
    NoPoints,
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("dimension matrix row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("dimension matrix has {found} rows, expected {expected}")]
    WrongRowCount { found: usize, expected: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// An ideal of `C(X)`, identified with its support.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ideal {
    pub support: VertexSet,
}

impl Ideal {
    pub fn whole(points: usize) -> Self {
        Ideal {
            support: VertexSet::full(points),
        }
    }

    pub fn zero(points: usize) -> Self {
        Ideal {
            support: VertexSet::empty(points),
        }
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        Ideal {
            support: self.support.union(&other.support),
        }
    }

    /// Product and intersection agree for ideals of a commutative C*-algebra.
    pub fn product(&self, other: &Ideal) -> Ideal {
        Ideal {
            support: self.support.intersection(&other.support),
        }
    }

    pub fn orthogonal_complement(&self) -> Ideal {
        Ideal {
            support: self.support.complement(),
        }
    }

    pub fn is_whole(&self) -> bool {
        self.support.complement().is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealChain {
    /// `I_0 ⊇ I_1 ⊇ ...` through the first repetition.
    pub ideals: Vec<Ideal>,
    pub is_artinian: bool,
    pub stabilization_index: usize,
}

impl IdealChain {
    /// `I_n` for any `n`, using stabilization past the stored prefix.
    pub fn get(&self, n: usize) -> &Ideal {
        &self.ideals[n.min(self.stabilization_index)]
    }
}

/// Evidence attached to a verdict. Point indices refer to the
/// correspondence's point list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Full action: faithful, finitely generated and artinian, with the
    /// chain's stabilization data.
    AllConditionsHold {
        stabilization_index: usize,
        stable_support: VertexSet,
    },
    /// Points whose row of `D` vanishes (they lie in `ker φ`).
    NotFaithful { zero_rows: Vec<usize> },
    /// Entries of `D` that are infinite.
    NotFinitelyGenerated {
        infinite_entries: Vec<(usize, usize)>,
    },
    /// Finite action: every point outside `J_E` receives a walk of length
    /// `k - 1`. Each walk lists `k` points and ends at the covered point.
    Covered { walks: Vec<Vec<usize>> },
    /// Finite action: points outside both `J_E` and `I_{k-1}`.
    Uncovered { points: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub group: GaugeGroup,
    pub free: bool,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutativeCorrespondence {
    points: Vec<String>,
    dims: Vec<Vec<ExtendedNat>>,
}

impl CommutativeCorrespondence {
    pub fn new<P>(points: P, dims: Vec<Vec<ExtendedNat>>) -> Result<Self, CorrespondenceError>
    where
        P: IntoIterator,
        P::Item: Into<String>,
    {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        if points.is_empty() {
            return Err(CorrespondenceError::NoPoints);
        }
        let mut seen = HashSet::new();
        for p in &points {
            if !seen.insert(p.as_str()) {
                return Err(CorrespondenceError::DuplicatePoint(p.clone()));
            }
        }
        if dims.len() != points.len() {
            return Err(CorrespondenceError::WrongRowCount {
                found: dims.len(),
                expected: points.len(),
            });
        }
        for (row, entries) in dims.iter().enumerate() {
            if entries.len() != points.len() {
                return Err(CorrespondenceError::NotSquare {
                    row,
                    found: entries.len(),
                    expected: points.len(),
                });
            }
        }
        Ok(CommutativeCorrespondence { points, dims })
    }

    /// The correspondence of a graph: functions on edges, with the right
    /// action through the range map and the left action through the source
    /// map. `D[u][v]` counts edges `u -> v`.
    pub fn from_graph(graph: &DirectedMultigraph) -> Self {
        let n = graph.vertex_count();
        let dims = (0..n)
            .map(|u| (0..n).map(|v| graph.multiplicity(u, v)).collect())
            .collect();
        CommutativeCorrespondence {
            points: graph.vertices().to_vec(),
            dims,
        }
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn dims(&self) -> &[Vec<ExtendedNat>] {
        &self.dims
    }

    pub fn dim(&self, u: usize, v: usize) -> ExtendedNat {
        self.dims[u][v]
    }

    /// Dimension of the right fiber over `v`.
    pub fn right_fiber_dim(&self, v: usize) -> ExtendedNat {
        self.dims.iter().map(|row| row[v]).sum()
    }

    fn row_sum(&self, u: usize) -> ExtendedNat {
        self.dims[u].iter().copied().sum()
    }

    fn zero_rows(&self) -> Vec<usize> {
        (0..self.point_count())
            .filter(|&u| self.row_sum(u).is_zero())
            .collect()
    }

    fn infinite_entries(&self) -> Vec<(usize, usize)> {
        let n = self.point_count();
        (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !self.dims[u][v].is_finite())
            .collect()
    }

    /// `φ` is injective iff no point acts by zero.
    pub fn is_faithful(&self) -> bool {
        self.zero_rows().is_empty()
    }

    /// Finitely generated iff every fiber is finite dimensional.
    pub fn is_fg(&self) -> bool {
        self.infinite_entries().is_empty()
    }

    /// `ker φ`: functions supported where the row of `D` vanishes.
    pub fn kernel(&self) -> Ideal {
        Ideal {
            support: VertexSet::from_indices(self.point_count(), self.zero_rows()),
        }
    }

    /// `φ⁻¹(K(E))`: functions supported on points with finite row sum.
    pub fn compact_preimage(&self) -> Ideal {
        Ideal {
            support: VertexSet::from_indices(
                self.point_count(),
                (0..self.point_count()).filter(|&u| self.row_sum(u).is_finite()),
            ),
        }
    }

    /// `J_E = φ⁻¹(K(E)) ∩ (ker φ)^⊥`.
    pub fn katsura_ideal(&self) -> Ideal {
        self.compact_preimage()
            .product(&self.kernel().orthogonal_complement())
    }

    /// `I_{n+1}` from `I_n`: the span of `⟨e|φ(x)f⟩` with `x ∈ I_n` is
    /// supported on the right ends of fibers whose left end lies in `I_n`.
    fn next_ideal(&self, current: &Ideal) -> Ideal {
        let n = self.point_count();
        let support = VertexSet::from_indices(
            n,
            (0..n).filter(|&v| current.support.iter().any(|u| !self.dims[u][v].is_zero())),
        );
        Ideal { support }
    }

    pub fn ideal_chain(&self) -> IdealChain {
        let mut ideals = vec![Ideal::whole(self.point_count())];
        loop {
            let last = ideals.last().expect("chain is never empty");
            let next = self.next_ideal(last);
            if &next == last {
                let stabilization_index = ideals.len() - 1;
                return IdealChain {
                    ideals,
                    // Finitely many subsets: every descending chain stops.
                    is_artinian: true,
                    stabilization_index,
                };
            }
            ideals.push(next);
        }
    }

    pub fn full_gauge_free(&self) -> Verdict {
        let group = GaugeGroup::Full;
        let zero_rows = self.zero_rows();
        if !zero_rows.is_empty() {
            return Verdict {
                group,
                free: false,
                witness: Witness::NotFaithful { zero_rows },
            };
        }
        let infinite_entries = self.infinite_entries();
        if !infinite_entries.is_empty() {
            return Verdict {
                group,
                free: false,
                witness: Witness::NotFinitelyGenerated { infinite_entries },
            };
        }
        let chain = self.ideal_chain();
        debug_assert!(chain.is_artinian);
        Verdict {
            group,
            free: chain.is_artinian,
            witness: Witness::AllConditionsHold {
                stabilization_index: chain.stabilization_index,
                stable_support: chain.get(chain.stabilization_index).support.clone(),
            },
        }
    }

    /// Free iff `J_E + I_{k-1} = A`.
    pub fn zk_gauge_free(&self, k: u64) -> Result<Verdict, CorrespondenceError> {
        let group = GaugeGroup::cyclic(k)?;
        let chain = self.ideal_chain();
        let reach = (k - 1) as usize;
        let covered = self.katsura_ideal().sum(chain.get(reach));
        let uncovered: Vec<usize> = covered.support.complement().iter().collect();
        if !uncovered.is_empty() {
            return Ok(Verdict {
                group,
                free: false,
                witness: Witness::Uncovered { points: uncovered },
            });
        }
        let walks = self
            .katsura_ideal()
            .support
            .complement()
            .iter()
            .map(|v| self.walk_ending_at(&chain, v, reach))
            .collect();
        Ok(Verdict {
            group,
            free: true,
            witness: Witness::Covered { walks },
        })
    }

    pub fn gauge_free(&self, group: GaugeGroup) -> Verdict {
        match group {
            GaugeGroup::Full => self.full_gauge_free(),
            GaugeGroup::Cyclic(k) => self
                .zk_gauge_free(u64::from(k))
                .expect("GaugeGroup::Cyclic always has k >= 2"),
        }
    }

    /// A walk `w_0 -> ... -> w_len = target` along nonzero entries of `D`.
    /// Requires `target ∈ supp(I_len)`.
    fn walk_ending_at(&self, chain: &IdealChain, target: usize, len: usize) -> Vec<usize> {
        let mut walk = vec![target];
        let mut current = target;
        for step in (0..len).rev() {
            let layer = &chain.get(step).support;
            current = layer
                .iter()
                .find(|&u| !self.dims[u][current].is_zero())
                .expect("a point of I_{n+1} has a predecessor in I_n");
            walk.push(current);
        }
        walk.reverse();
        walk
    }

    /// Re-checks a verdict's witness directly against `D`.
    pub fn check_witness(&self, verdict: &Verdict) -> Result<(), String> {
        let n = self.point_count();
        let row_zero = |u: usize| (0..n).all(|v| self.dims[u][v].is_zero());
        let row_finite = |u: usize| (0..n).all(|v| self.dims[u][v].is_finite());
        match (&verdict.witness, verdict.free) {
            (Witness::NotFaithful { zero_rows }, false) => {
                if zero_rows.is_empty() || !zero_rows.iter().all(|&u| row_zero(u)) {
                    return Err(format!("claimed zero rows {zero_rows:?} are not all zero"));
                }
            }
            (Witness::NotFinitelyGenerated { infinite_entries }, false) => {
                if infinite_entries.is_empty()
                    || !infinite_entries
                        .iter()
                        .all(|&(u, v)| !self.dims[u][v].is_finite())
                {
                    return Err(format!("entries {infinite_entries:?} are not all infinite"));
                }
            }
            (
                Witness::AllConditionsHold {
                    stabilization_index,
                    ..
                },
                true,
            ) => {
                if verdict.group != GaugeGroup::Full {
                    return Err("full-action witness on a finite group".into());
                }
                if let Some(u) = (0..n).find(|&u| row_zero(u) || !row_finite(u)) {
                    return Err(format!("point {u} has a zero or infinite row"));
                }
                if *stabilization_index > n {
                    return Err("stabilization index exceeds the number of points".into());
                }
            }
            (Witness::Uncovered { points }, false) => {
                let k = verdict
                    .group
                    .order()
                    .ok_or("finite witness on full group")?;
                if points.is_empty() {
                    return Err("empty counter-witness".into());
                }
                for &p in points {
                    if !row_zero(p) && row_finite(p) {
                        return Err(format!("point {p} is regular, hence in J_E"));
                    }
                    if self.has_walk_into(p, k as usize - 1) {
                        return Err(format!("point {p} receives a walk of length {}", k - 1));
                    }
                }
            }
            (Witness::Covered { walks }, true) => {
                let k = verdict
                    .group
                    .order()
                    .ok_or("finite witness on full group")?;
                for p in (0..n).filter(|&p| row_zero(p) || !row_finite(p)) {
                    let walk = walks
                        .iter()
                        .find(|w| w.last() == Some(&p))
                        .ok_or_else(|| format!("no walk ends at point {p}"))?;
                    if walk.len() != k as usize {
                        return Err(format!("walk {walk:?} does not have length {}", k - 1));
                    }
                    if !walk.windows(2).all(|w| !self.dims[w[0]][w[1]].is_zero()) {
                        return Err(format!("{walk:?} is not a walk"));
                    }
                }
            }
            (w, free) => return Err(format!("witness {w:?} inconsistent with free = {free}")),
        }
        Ok(())
    }

    /// Forward search over walks of exactly `len` steps.
    fn has_walk_into(&self, target: usize, len: usize) -> bool {
        let n = self.point_count();
        let mut frontier: HashSet<usize> = (0..n).collect();
        for _ in 0..len {
            frontier = frontier
                .iter()
                .flat_map(|&u| (0..n).filter(move |&v| !self.dims[u][v].is_zero()))
                .collect();
        }
        frontier.contains(&target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ExtendedNat::{Finite, Infinite};

    fn corr(dims: Vec<Vec<ExtendedNat>>) -> CommutativeCorrespondence {
        let names: Vec<String> = (0..dims.len()).map(|i| format!("p{i}")).collect();
        CommutativeCorrespondence::new(names, dims).unwrap()
    }

    fn loop1() -> CommutativeCorrespondence {
        corr(vec![vec![Finite(1)]])
    }

    fn edge() -> CommutativeCorrespondence {
        corr(vec![vec![Finite(0), Finite(1)], vec![Finite(0), Finite(0)]])
    }

    fn inf_loop() -> CommutativeCorrespondence {
        corr(vec![vec![Infinite]])
    }

    fn support(c: &CommutativeCorrespondence, items: &[usize]) -> VertexSet {
        VertexSet::from_indices(c.point_count(), items.iter().copied())
    }

    #[test]
    fn from_graph_examples() {
        let g = DirectedMultigraph::from_indices(1, &[(0, 0)], &[]).unwrap();
        assert_eq!(
            CommutativeCorrespondence::from_graph(&g).dims(),
            &[vec![Finite(1)]]
        );

        let g = DirectedMultigraph::from_indices(2, &[(0, 1)], &[]).unwrap();
        assert_eq!(CommutativeCorrespondence::from_graph(&g), {
            let mut c = edge();
            c.points = vec!["v0".into(), "v1".into()];
            c
        });

        let g = DirectedMultigraph::from_indices(1, &[], &[(0, 0)]).unwrap();
        assert_eq!(
            CommutativeCorrespondence::from_graph(&g).dims(),
            &[vec![Infinite]]
        );
    }

    #[test]
    fn right_fiber_dimension_sums_columns() {
        let g =
            DirectedMultigraph::from_indices(3, &[(0, 2), (1, 2), (1, 2), (2, 0)], &[]).unwrap();
        let c = CommutativeCorrespondence::from_graph(&g);
        assert_eq!(c.right_fiber_dim(2), Finite(3));
        assert_eq!(c.right_fiber_dim(1), Finite(0));
    }

    #[test]
    fn faithfulness_examples() {
        assert!(loop1().is_faithful());
        assert!(!edge().is_faithful());
        assert!(inf_loop().is_faithful());
    }

    #[test]
    fn finite_generation_examples() {
        assert!(loop1().is_fg());
        assert!(!inf_loop().is_fg());
        assert!(edge().is_fg());
    }

    #[test]
    fn katsura_ideal_examples() {
        assert_eq!(loop1().katsura_ideal().support, support(&loop1(), &[0]));
        assert!(inf_loop().katsura_ideal().support.is_empty());
        assert_eq!(edge().katsura_ideal().support, support(&edge(), &[0]));
    }

    #[test]
    fn ideal_chain_examples() {
        let g = DirectedMultigraph::from_indices(3, &[(0, 1), (1, 2)], &[]).unwrap();
        let c = CommutativeCorrespondence::from_graph(&g);
        let chain = c.ideal_chain();
        let supports: Vec<VertexSet> = chain.ideals.iter().map(|i| i.support.clone()).collect();
        assert_eq!(
            supports,
            vec![
                support(&c, &[0, 1, 2]),
                support(&c, &[1, 2]),
                support(&c, &[2]),
                support(&c, &[])
            ]
        );
        assert!(chain.is_artinian);
        assert_eq!(chain.stabilization_index, 3);

        for c in [loop1(), inf_loop()] {
            let chain = c.ideal_chain();
            assert_eq!(chain.ideals, vec![Ideal::whole(1)]);
            assert_eq!(chain.stabilization_index, 0);
        }
    }

    #[test]
    fn full_action_examples() {
        let v = loop1().full_gauge_free();
        assert!(v.free);
        assert!(matches!(v.witness, Witness::AllConditionsHold { .. }));

        let v = edge().full_gauge_free();
        assert!(!v.free);
        assert_eq!(v.witness, Witness::NotFaithful { zero_rows: vec![1] });

        let v = inf_loop().full_gauge_free();
        assert!(!v.free);
        assert_eq!(
            v.witness,
            Witness::NotFinitelyGenerated {
                infinite_entries: vec![(0, 0)]
            }
        );
        for c in [loop1(), edge(), inf_loop()] {
            c.check_witness(&c.full_gauge_free()).unwrap();
        }
    }

    #[test]
    fn cyclic_action_examples() {
        let v = edge().zk_gauge_free(2).unwrap();
        assert!(v.free);
        assert_eq!(
            v.witness,
            Witness::Covered {
                walks: vec![vec![0, 1]]
            }
        );

        let v = edge().zk_gauge_free(3).unwrap();
        assert!(!v.free);
        assert_eq!(v.witness, Witness::Uncovered { points: vec![1] });

        for k in 2..7 {
            let v = inf_loop().zk_gauge_free(k).unwrap();
            assert!(v.free);
            assert_eq!(
                v.witness,
                Witness::Covered {
                    walks: vec![vec![0; k as usize]]
                }
            );
            inf_loop().check_witness(&v).unwrap();
        }
        edge()
            .check_witness(&edge().zk_gauge_free(2).unwrap())
            .unwrap();
        edge()
            .check_witness(&edge().zk_gauge_free(3).unwrap())
            .unwrap();
    }

    #[test]
    fn rejects_trivial_group() {
        assert_eq!(
            loop1().zk_gauge_free(1),
            Err(CorrespondenceError::Group(GroupError::OrderTooSmall(1)))
        );
        assert!(loop1().zk_gauge_free(0).is_err());
    }

    #[test]
    fn forged_witnesses_are_rejected() {
        let mut v = edge().zk_gauge_free(2).unwrap();
        v.witness = Witness::Covered {
            walks: vec![vec![1, 1]],
        };
        assert!(edge().check_witness(&v).is_err());

        let v = Verdict {
            group: GaugeGroup::Full,
            free: false,
            witness: Witness::NotFaithful { zero_rows: vec![0] },
        };
        assert!(edge().check_witness(&v).is_err());

        let v = Verdict {
            group: GaugeGroup::Cyclic(2),
            free: false,
            witness: Witness::Uncovered { points: vec![1] },
        };
        assert!(edge().check_witness(&v).is_err());
    }

    #[test]
    fn construction_errors() {
        let none: Vec<String> = vec![];
        assert_eq!(
            CommutativeCorrespondence::new(none, vec![]),
            Err(CorrespondenceError::NoPoints)
        );
        assert_eq!(
            CommutativeCorrespondence::new(["a", "b"], vec![vec![Finite(0)], vec![Finite(0)]]),
            Err(CorrespondenceError::NotSquare {
                row: 0,
                found: 1,
                expected: 2
            })
        );
        assert_eq!(
            CommutativeCorrespondence::new(["a", "a"], vec![]),
            Err(CorrespondenceError::DuplicatePoint("a".into()))
        );
    }

    #[test]
    fn ideal_arithmetic() {
        let a = Ideal {
            support: VertexSet::from_indices(3, [0, 1]),
        };
        let b = Ideal {
            support: VertexSet::from_indices(3, [1, 2]),
        };
        assert!(a.sum(&b).is_whole());
        assert_eq!(a.product(&b).support, VertexSet::from_indices(3, [1]));
        assert_eq!(
            a.orthogonal_complement().support,
            VertexSet::from_indices(3, [2])
        );
        assert!(!Ideal::zero(3).is_whole());
    }
}
