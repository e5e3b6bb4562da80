//! Incremental exact Gaussian elimination over the rationals.
//!
//! Vectors are sparse combinations of hashable column keys. Each stored row
//! remembers how it was derived from the generator that produced it, so a
//! successful membership query can be written back as a combination of the
//! original generators.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Debug, Clone)]
struct Row {
    /// Sorted by column; the first entry is the pivot and equals 1.
    entries: Vec<(usize, BigRational)>,
    generator: usize,
    /// The generator divided by this before normalization.
    scale: BigRational,
    /// `(earlier row, factor)` subtracted from the generator.
    reductions: Vec<(usize, BigRational)>,
}

#[derive(Debug, Clone)]
pub struct SpanSolver<K> {
    columns: HashMap<K, usize>,
    rows: Vec<Row>,
    pivots: HashMap<usize, usize>,
    generators: usize,
}

impl<K: Eq + Hash + Clone> Default for SpanSolver<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Eq + Hash + Clone> SpanSolver<K> {
    pub fn new() -> Self {
        SpanSolver {
            columns: HashMap::new(),
            rows: Vec::new(),
            pivots: HashMap::new(),
            generators: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    fn intern(&mut self, key: K) -> usize {
        let next = self.columns.len();
        *self.columns.entry(key).or_insert(next)
    }

    /// Reduces `v` against the stored rows until its leading column has no
    /// pivot. Returns the subtracted `(row, factor)` pairs.
    fn reduce(&self, v: &mut BTreeMap<usize, BigRational>) -> Vec<(usize, BigRational)> {
        let mut used = Vec::new();
        while let Some((&col, coef)) = v.iter().next() {
            let Some(&r) = self.pivots.get(&col) else {
                break;
            };
            let factor = coef.clone();
            for (c, x) in &self.rows[r].entries {
                let entry = v.entry(*c).or_insert_with(BigRational::zero);
                *entry -= &factor * x;
                if entry.is_zero() {
                    v.remove(c);
                }
            }
            used.push((r, factor));
        }
        used
    }

    /// Adds a generator; returns its index. Dependent generators are
    /// counted but store no row.
    pub fn add(&mut self, vector: impl IntoIterator<Item = (K, BigRational)>) -> usize {
        let generator = self.generators;
        self.generators += 1;
        let mut v = BTreeMap::new();
        for (k, c) in vector {
            if c.is_zero() {
                continue;
            }
            let col = self.intern(k);
            let entry = v.entry(col).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                v.remove(&col);
            }
        }
        let reductions = self.reduce(&mut v);
        if let Some((&pivot, lead)) = v.iter().next() {
            let scale = lead.clone();
            let inv = scale.recip();
            let entries = v.into_iter().map(|(c, x)| (c, x * &inv)).collect();
            self.pivots.insert(pivot, self.rows.len());
            self.rows.push(Row {
                entries,
                generator,
                scale,
                reductions,
            });
        }
        generator
    }

    /// If `target` lies in the span, returns coefficients `c_g` with
    /// `Σ c_g · generator_g = target` (zero coefficients omitted).
    pub fn express(&self, target: &[(K, BigRational)]) -> Option<Vec<(usize, BigRational)>> {
        let mut v = BTreeMap::new();
        for (k, c) in target {
            if c.is_zero() {
                continue;
            }
            let col = *self.columns.get(k)?;
            *v.entry(col).or_insert_with(BigRational::zero) += c;
        }
        v.retain(|_, c: &mut BigRational| !c.is_zero());
        let used = self.reduce(&mut v);
        if !v.is_empty() {
            return None;
        }
        // target = Σ a_r row_r; unwind rows newest first.
        let mut row_coef: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (r, f) in used {
            *row_coef.entry(r).or_insert_with(BigRational::zero) += f;
        }
        let mut out = BTreeMap::new();
        while let Some((r, a)) = row_coef.pop_last() {
            if a.is_zero() {
                continue;
            }
            let row = &self.rows[r];
            // row = (generator - Σ f_j row_j) / scale
            let g = &a / &row.scale;
            for (j, f) in &row.reductions {
                *row_coef.entry(*j).or_insert_with(BigRational::zero) -= &g * f;
            }
            *out.entry(row.generator).or_insert_with(BigRational::zero) += g;
        }
        Some(out.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    pub fn contains(&self, target: &[(K, BigRational)]) -> bool {
        let mut v = BTreeMap::new();
        for (k, c) in target {
            if c.is_zero() {
                continue;
            }
            match self.columns.get(k) {
                Some(&col) => *v.entry(col).or_insert_with(BigRational::zero) += c,
                None => return false,
            }
        }
        v.retain(|_, c: &mut BigRational| !c.is_zero());
        self.reduce(&mut v);
        v.is_empty()
    }
}

/// Convenience for unit targets.
pub fn unit_vector<K>(key: K) -> Vec<(K, BigRational)> {
    vec![(key, BigRational::one())]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leavitt::element::rational;
    use proptest::prelude::*;

    fn vec_of(items: &[(u8, i64)]) -> Vec<(u8, BigRational)> {
        items.iter().map(|&(k, c)| (k, rational(c))).collect()
    }

    #[test]
    fn expresses_through_dependent_combinations() {
        let mut s = SpanSolver::new();
        let g0 = s.add(vec_of(&[(0, 1), (1, 1)]));
        let g1 = s.add(vec_of(&[(1, 1), (2, 1)]));
        let g2 = s.add(vec_of(&[(0, 1), (2, -1)]));
        assert_eq!(s.rank(), 2);
        assert!(!s.contains(&vec_of(&[(0, 1)])));
        let target = vec_of(&[(0, 2), (1, 2)]);
        let combo = s.express(&target).unwrap();
        assert!(combo.iter().all(|(g, _)| [g0, g1, g2].contains(g)));
        assert!(s.contains(&target));
    }

    #[test]
    fn unknown_column_is_not_in_span() {
        let mut s = SpanSolver::new();
        s.add(vec_of(&[(0, 3)]));
        assert!(!s.contains(&vec_of(&[(9, 1)])));
        assert_eq!(
            s.express(&vec_of(&[(0, 1)])),
            Some(vec![(0, BigRational::new(1.into(), 3.into()))])
        );
    }

    proptest! {
        // Any combination of generators is expressible, and the returned
        // coefficients reproduce the target exactly.
        #[test]
        fn express_reconstructs_target(
            gens in prop::collection::vec(prop::collection::vec((0u8..6, -3i64..4), 1..5), 1..8),
            coefs in prop::collection::vec(-3i64..4, 8),
        ) {
            let mut s = SpanSolver::new();
            let gens: Vec<Vec<(u8, BigRational)>> = gens.iter().map(|g| vec_of(g)).collect();
            for g in &gens {
                s.add(g.clone());
            }
            let mut target: BTreeMap<u8, BigRational> = BTreeMap::new();
            for (g, c) in gens.iter().zip(&coefs) {
                for (k, x) in g {
                    *target.entry(*k).or_insert_with(BigRational::zero) += x * rational(*c);
                }
            }
            let target: Vec<(u8, BigRational)> = target.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            let combo = s.express(&target);
            prop_assert!(combo.is_some());
            let mut rebuilt: BTreeMap<u8, BigRational> = BTreeMap::new();
            for (g, c) in combo.unwrap() {
                for (k, x) in &gens[g] {
                    *rebuilt.entry(*k).or_insert_with(BigRational::zero) += x * &c;
                }
            }
            let rebuilt: Vec<(u8, BigRational)> = rebuilt.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            prop_assert_eq!(rebuilt, target);
        }
    }
}
