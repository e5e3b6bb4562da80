use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::graph::{OracleGraph, SpecialEdgeChoice};
use super::monomial::{normal_form_monomial, raw_product, PathMonomial};

/// A finite rational combination of monomials. Zero coefficients are never
/// stored. Elements produced by [`normal_form`] and [`multiply`] are
/// supported on irreducible monomials.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LpaElement {
    terms: BTreeMap<PathMonomial, BigRational>,
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl LpaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: PathMonomial) -> Self {
        Self::term(m, BigRational::one())
    }

    pub fn term(m: PathMonomial, c: BigRational) -> Self {
        let mut x = Self::zero();
        x.add_term(m, c);
        x
    }

    /// `1 = Σ_v p_v`.
    pub fn unit(graph: &OracleGraph) -> Self {
        let mut x = Self::zero();
        for v in 0..graph.vertex_count() {
            x.add_term(PathMonomial::vertex(v), BigRational::one());
        }
        x
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PathMonomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &PathMonomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, m: PathMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &LpaElement) -> LpaElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> LpaElement {
        if c.is_zero() {
            return Self::zero();
        }
        LpaElement {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn sub(&self, other: &LpaElement) -> LpaElement {
        self.add(&other.scale(&rational(-1)))
    }

    /// Degrees of the monomials in the support.
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.terms.keys().map(PathMonomial::degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn display(&self, graph: &OracleGraph) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                if c.is_one() {
                    m.display(graph)
                } else {
                    format!("({c}) {}", m.display(graph))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Rewrites every monomial to irreducible ones.
pub fn normal_form(graph: &OracleGraph, special: &SpecialEdgeChoice, x: &LpaElement) -> LpaElement {
    let mut out = LpaElement::zero();
    for (m, c) in x.terms() {
        for (n, sign) in normal_form_monomial(graph, special, m) {
            out.add_term(n, c * rational(i64::from(sign)));
        }
    }
    out
}

/// Product of two monomials, in normal form.
pub fn multiply_monomials(graph: &OracleGraph, a: &PathMonomial, b: &PathMonomial) -> LpaElement {
    match raw_product(graph, a, b) {
        Some(m) => normal_form(graph, graph.special_edges(), &LpaElement::monomial(m)),
        None => LpaElement::zero(),
    }
}

/// Product of two elements, in normal form.
pub fn multiply(graph: &OracleGraph, x: &LpaElement, y: &LpaElement) -> LpaElement {
    let mut raw = LpaElement::zero();
    for (a, ca) in x.terms() {
        for (b, cb) in y.terms() {
            if let Some(m) = raw_product(graph, a, b) {
                raw.add_term(m, ca * cb);
            }
        }
    }
    normal_form(graph, graph.special_edges(), &raw)
}
