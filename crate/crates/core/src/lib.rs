//! Freeness of gauge actions on Cuntz-Pimsner algebras of finite-dimensional
//! commutative correspondences and on graph C*-algebras with finitely many
//! vertices.
//!
//! * [`graph`]: directed multigraphs and receiver layers `S_n`.
//! * [`correspondence`]: dimension-matrix correspondences, the ideal chain
//!   `I_n`, the ideal `J_E` and the freeness verdicts.
//! * [`leavitt`]: a symbolic Leavitt path algebra that certifies freeness
//!   by exhibiting strong-grading certificates.
//! * [`report`]: input documents, reports, and the analyze/verify workflows.

pub mod correspondence;
pub mod graph;
pub mod group;
pub mod leavitt;
pub mod report;

pub use correspondence::{CommutativeCorrespondence, Ideal, IdealChain, Verdict, Witness};
pub use graph::{DirectedMultigraph, ExtendedNat, VertexSet};
pub use group::GaugeGroup;
