use std::fmt::Write as _;

use super::graph::{OracleGraph, SpecialEdgeChoice};

/// `s_μ s_ν*` with `r(μ) = r(ν) = base`. With both paths empty this is the
/// vertex projection `p_base`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathMonomial {
    pub mu: Vec<usize>,
    pub nu: Vec<usize>,
    pub base: usize,
}

impl PathMonomial {
    pub fn vertex(v: usize) -> Self {
        PathMonomial {
            mu: Vec::new(),
            nu: Vec::new(),
            base: v,
        }
    }

    pub fn edge(graph: &OracleGraph, e: usize) -> Self {
        PathMonomial {
            mu: vec![e],
            nu: Vec::new(),
            base: graph.range(e),
        }
    }

    pub fn edge_adjoint(graph: &OracleGraph, e: usize) -> Self {
        PathMonomial {
            mu: Vec::new(),
            nu: vec![e],
            base: graph.range(e),
        }
    }

    /// Checks composability and the common-range condition.
    pub fn is_valid(&self, graph: &OracleGraph) -> bool {
        let ends_at_base = |p: &[usize]| p.last().is_none_or(|&e| graph.range(e) == self.base);
        self.base < graph.vertex_count()
            && self
                .mu
                .iter()
                .chain(&self.nu)
                .all(|&e| e < graph.edge_count())
            && graph.is_path(&self.mu)
            && graph.is_path(&self.nu)
            && ends_at_base(&self.mu)
            && ends_at_base(&self.nu)
    }

    pub fn degree(&self) -> i64 {
        self.mu.len() as i64 - self.nu.len() as i64
    }

    /// `|μ| + |ν|`.
    pub fn length(&self) -> usize {
        self.mu.len() + self.nu.len()
    }

    /// Vertex `s(μ)`: `p_left · m = m`.
    pub fn left_vertex(&self, graph: &OracleGraph) -> usize {
        graph.path_start(&self.mu, self.base)
    }

    /// Vertex `s(ν)`: `m · p_right = m`.
    pub fn right_vertex(&self, graph: &OracleGraph) -> usize {
        graph.path_start(&self.nu, self.base)
    }

    pub fn adjoint(&self) -> Self {
        PathMonomial {
            mu: self.nu.clone(),
            nu: self.mu.clone(),
            base: self.base,
        }
    }

    pub fn is_irreducible(&self, special: &SpecialEdgeChoice) -> bool {
        match (self.mu.last(), self.nu.last()) {
            (Some(&a), Some(&b)) => !(a == b && special.is_special(a)),
            _ => true,
        }
    }

    pub fn display(&self, graph: &OracleGraph) -> String {
        if self.mu.is_empty() && self.nu.is_empty() {
            return format!("p({})", graph.vertex_name(self.base));
        }
        let join = |p: &[usize]| {
            p.iter()
                .map(|&e| graph.edge_id(e))
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut out = String::new();
        if !self.mu.is_empty() {
            let _ = write!(out, "s({})", join(&self.mu));
        }
        if !self.nu.is_empty() {
            let _ = write!(out, "s*({})", join(&self.nu));
        }
        out
    }
}

/// The product of two monomials before normal form: `s_μ s_ν* · s_α s_β*`
/// contracts `ν` against `α` using `s_e* s_e = p_{r(e)}` and
/// `s_e* s_f = 0` for `e ≠ f`. Zero unless one of `ν`, `α` extends the other.
pub fn raw_product(
    graph: &OracleGraph,
    a: &PathMonomial,
    b: &PathMonomial,
) -> Option<PathMonomial> {
    if graph.path_start(&a.nu, a.base) != graph.path_start(&b.mu, b.base) {
        return None;
    }
    if let Some(rest) = b.mu.strip_prefix(a.nu.as_slice()) {
        let mut mu = a.mu.clone();
        mu.extend_from_slice(rest);
        Some(PathMonomial {
            mu,
            nu: b.nu.clone(),
            base: b.base,
        })
    } else if let Some(rest) = a.nu.strip_prefix(b.mu.as_slice()) {
        let mut nu = b.nu.clone();
        nu.extend_from_slice(rest);
        Some(PathMonomial {
            mu: a.mu.clone(),
            nu,
            base: a.base,
        })
    } else {
        None
    }
}

/// Normal form of a single monomial. Repeatedly applies
/// `s_{μγ} s_{νγ}* = s_μ s_ν* - Σ_{e ≠ γ, s(e) = s(γ)} s_{μe} s_{νe}*`
/// for special `γ`. The sibling terms are irreducible as soon as they are
/// produced, so the result has coefficients ±1 on distinct monomials.
pub fn normal_form_monomial(
    graph: &OracleGraph,
    special: &SpecialEdgeChoice,
    m: &PathMonomial,
) -> Vec<(PathMonomial, i8)> {
    let mut mu = m.mu.clone();
    let mut nu = m.nu.clone();
    let mut base = m.base;
    let mut out = Vec::new();
    while let (Some(&a), Some(&b)) = (mu.last(), nu.last()) {
        if a != b || !special.is_special(a) {
            break;
        }
        mu.pop();
        nu.pop();
        base = graph.source(a);
        for &e in special.siblings(base) {
            let mut mu_e = mu.clone();
            mu_e.push(e);
            let mut nu_e = nu.clone();
            nu_e.push(e);
            out.push((
                PathMonomial {
                    mu: mu_e,
                    nu: nu_e,
                    base: graph.range(e),
                },
                -1,
            ));
        }
    }
    out.push((PathMonomial { mu, nu, base }, 1));
    out
}
