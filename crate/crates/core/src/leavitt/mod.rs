//! A symbolic Leavitt path algebra over the rationals, used as an
//! independent one-sided verifier: it certifies that a gauge grading is
//! strong by exhibiting `1` as an explicit sum of products of homogeneous
//! monomials of opposite degree.

mod acyclic;
mod element;
mod enumerate;
mod graph;
mod monomial;
mod search;
mod span;

pub use acyclic::{irreducible_monomial_count, lpa_dimension_acyclic};
pub use element::{multiply, multiply_monomials, normal_form, rational, LpaElement};
pub use enumerate::{component_of_length, enumerate_component, PathTable};
pub use graph::{OracleGraph, SpecialEdgeChoice};
pub use monomial::{normal_form_monomial, raw_product, PathMonomial};
pub use search::{
    check_graph, strong_grading_check, unit_membership_witness, Certificate, CertificateTerm,
    Direction, OracleError, OracleOptions, OracleVerdict,
};
pub use span::SpanSolver;
