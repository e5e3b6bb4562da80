//! Input documents, freeness reports, and the analyze/verify workflows.
//!
//! An input is a single JSON document in one of two shapes:
//!
//! ```json
//! {"vertices": ["u", "v"],
//!  "edges": [{"id": "e", "src": "u", "dst": "v"}],
//!  "infinite": [{"src": "v", "dst": "v"}]}
//! ```
//!
//! ```json
//! {"points": ["u", "v"], "dims": [[0, 1], [0, "inf"]]}
//! ```
//!
//! Reports serialize with sorted keys and declaration-ordered vertex lists,
//! so identical inputs and options give byte-identical output.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::correspondence::{CommutativeCorrespondence, Verdict, Witness};
use crate::graph::{DirectedMultigraph, ExtendedNat, VertexSet};
use crate::group::{GaugeGroup, GroupError};
use crate::leavitt::{
    strong_grading_check, Certificate, OracleError, OracleGraph, OracleOptions, OracleVerdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("line {line}, column {column}: {message}")]
    Malformed {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> InputError {
    InputError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("internal cross-check failed for {group}: {detail}")]
    CrossCheck { group: String, detail: String },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub src: String,
    pub dst: String,
}

/// A dimension-matrix entry: a nonnegative integer or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimEntry(pub ExtendedNat);

impl Serialize for DimEntry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            ExtendedNat::Finite(n) => s.serialize_u64(n),
            ExtendedNat::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for DimEntry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct EntryVisitor;

        impl Visitor<'_> for EntryVisitor {
            type Value = DimEntry;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative integer or \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, n: u64) -> Result<DimEntry, E> {
                Ok(DimEntry(ExtendedNat::Finite(n)))
            }

            fn visit_i64<E: de::Error>(self, n: i64) -> Result<DimEntry, E> {
                u64::try_from(n)
                    .map(|n| DimEntry(ExtendedNat::Finite(n)))
                    .map_err(|_| E::custom(format!("negative entry {n}")))
            }

            fn visit_f64<E: de::Error>(self, x: f64) -> Result<DimEntry, E> {
                if x < 0.0 {
                    Err(E::custom(format!("negative entry {x}")))
                } else {
                    Err(E::custom(format!("non-integer entry {x}")))
                }
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<DimEntry, E> {
                if s == "inf" {
                    Ok(DimEntry(ExtendedNat::Infinite))
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(s), &self))
                }
            }
        }

        d.deserialize_any(EntryVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphDocument {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    pub infinite: Vec<BundleSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixDocument {
    pub points: Vec<String>,
    pub dims: Vec<Vec<DimEntry>>,
}

/// A validated input in graph or matrix form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum InputDocument {
    Graph(GraphDocument),
    Matrix(MatrixDocument),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    vertices: Option<Vec<String>>,
    edges: Option<Vec<EdgeSpec>>,
    infinite: Option<Vec<BundleSpec>>,
    points: Option<Vec<String>>,
    dims: Option<Vec<Vec<DimEntry>>>,
}

fn check_unique_names(field: &str, names: &[String]) -> Result<(), InputError> {
    if names.is_empty() {
        return Err(invalid(field, "must list at least one name"));
    }
    let mut seen = HashSet::new();
    for (i, name) in names.iter().enumerate() {
        if !seen.insert(name.as_str()) {
            return Err(invalid(
                format!("{field}[{i}]"),
                format!("duplicate id `{name}`"),
            ));
        }
    }
    Ok(())
}

/// Parses and validates a JSON input document. The error names the first
/// violation by line and column (syntax and value errors) or by field path.
pub fn parse_input(bytes: &[u8]) -> Result<InputDocument, InputError> {
    let raw: RawDocument = serde_json::from_slice(bytes).map_err(|e| InputError::Malformed {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    let graph_form = raw.vertices.is_some() || raw.edges.is_some() || raw.infinite.is_some();
    let matrix_form = raw.points.is_some() || raw.dims.is_some();
    match (graph_form, matrix_form) {
        (true, true) => Err(invalid(
            "document",
            "mixes graph fields (vertices/edges/infinite) with matrix fields (points/dims)",
        )),
        (false, false) => Err(invalid(
            "document",
            "expected graph fields (vertices, edges, infinite) or matrix fields (points, dims)",
        )),
        (true, false) => {
            let vertices = raw.vertices.ok_or_else(|| invalid("vertices", "missing"))?;
            let doc = GraphDocument {
                vertices,
                edges: raw.edges.unwrap_or_default(),
                infinite: raw.infinite.unwrap_or_default(),
            };
            validate_graph(&doc)?;
            Ok(InputDocument::Graph(doc))
        }
        (false, true) => {
            let points = raw.points.ok_or_else(|| invalid("points", "missing"))?;
            let dims = raw.dims.ok_or_else(|| invalid("dims", "missing"))?;
            let doc = MatrixDocument { points, dims };
            validate_matrix(&doc)?;
            Ok(InputDocument::Matrix(doc))
        }
    }
}

/// serde_json appends " at line L column C"; the position is reported
/// separately.
fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

fn validate_graph(doc: &GraphDocument) -> Result<(), InputError> {
    check_unique_names("vertices", &doc.vertices)?;
    let declared: HashSet<&str> = doc.vertices.iter().map(String::as_str).collect();
    let mut ids = HashSet::new();
    for (i, e) in doc.edges.iter().enumerate() {
        if !ids.insert(e.id.as_str()) {
            return Err(invalid(
                format!("edges[{i}].id"),
                format!("duplicate id `{}`", e.id),
            ));
        }
        for (name, end) in [("src", &e.src), ("dst", &e.dst)] {
            if !declared.contains(end.as_str()) {
                return Err(invalid(
                    format!("edges[{i}].{name}"),
                    format!("unknown vertex `{end}`"),
                ));
            }
        }
    }
    for (i, b) in doc.infinite.iter().enumerate() {
        for (name, end) in [("src", &b.src), ("dst", &b.dst)] {
            if !declared.contains(end.as_str()) {
                return Err(invalid(
                    format!("infinite[{i}].{name}"),
                    format!("unknown vertex `{end}`"),
                ));
            }
        }
    }
    Ok(())
}

fn validate_matrix(doc: &MatrixDocument) -> Result<(), InputError> {
    check_unique_names("points", &doc.points)?;
    let n = doc.points.len();
    if doc.dims.len() != n {
        return Err(invalid(
            "dims",
            format!("non-square matrix: {} rows for {n} points", doc.dims.len()),
        ));
    }
    for (i, row) in doc.dims.iter().enumerate() {
        if row.len() != n {
            return Err(invalid(
                format!("dims[{i}]"),
                format!("non-square matrix: {} entries for {n} points", row.len()),
            ));
        }
    }
    Ok(())
}

impl InputDocument {
    pub fn is_graph(&self) -> bool {
        matches!(self, InputDocument::Graph(_))
    }

    /// Compact JSON with sorted keys. Parsing it gives back `self`.
    pub fn canonical_json(&self) -> String {
        serde_json::to_value(self)
            .expect("documents serialize")
            .to_string()
    }

    /// The graph of a graph-form document. A matrix-form document becomes
    /// `D[u][v]` parallel edges `u -> v` (an infinite bundle for `inf`).
    pub fn to_graph(&self) -> DirectedMultigraph {
        let built = match self {
            InputDocument::Graph(g) => DirectedMultigraph::new(
                g.vertices.iter().cloned(),
                g.edges
                    .iter()
                    .map(|e| (e.id.clone(), e.src.clone(), e.dst.clone())),
                g.infinite.iter().map(|b| (b.src.clone(), b.dst.clone())),
            ),
            InputDocument::Matrix(m) => {
                let mut edges = Vec::new();
                let mut bundles = Vec::new();
                for (u, row) in m.dims.iter().enumerate() {
                    for (v, entry) in row.iter().enumerate() {
                        let (src, dst) = (&m.points[u], &m.points[v]);
                        match entry.0 {
                            ExtendedNat::Finite(d) => {
                                for i in 0..d {
                                    edges.push((
                                        format!("{src}->{dst}#{i}"),
                                        src.clone(),
                                        dst.clone(),
                                    ));
                                }
                            }
                            ExtendedNat::Infinite => bundles.push((src.clone(), dst.clone())),
                        }
                    }
                }
                DirectedMultigraph::new(m.points.iter().cloned(), edges, bundles)
            }
        };
        built.expect("validated documents build")
    }

    pub fn to_correspondence(&self) -> CommutativeCorrespondence {
        match self {
            InputDocument::Graph(_) => CommutativeCorrespondence::from_graph(&self.to_graph()),
            InputDocument::Matrix(m) => CommutativeCorrespondence::new(
                m.points.iter().cloned(),
                m.dims
                    .iter()
                    .map(|row| row.iter().map(|e| e.0).collect())
                    .collect(),
            )
            .expect("validated documents build"),
        }
    }
}

/// Parses a comma-separated group list such as `full,2,Z/3`. Repeats are
/// dropped, order is kept.
pub fn parse_groups(list: &str) -> Result<Vec<GaugeGroup>, GroupError> {
    let mut out = Vec::new();
    for item in list.split(',').filter(|s| !s.trim().is_empty()) {
        let g: GaugeGroup = item.parse()?;
        if !out.contains(&g) {
            out.push(g);
        }
    }
    if out.is_empty() {
        return Err(GroupError::Unparseable(list.to_string()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conditions {
    pub faithful: bool,
    pub finitely_generated: bool,
    pub artinian: bool,
    pub katsura_support: Vec<String>,
    pub kernel_support: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainSummary {
    /// `supp(I_n)`, which for graphs is the receiver layer `S_n`.
    pub supports: Vec<Vec<String>>,
    pub stabilization_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub sinks: Vec<String>,
    pub infinite_emitters: Vec<String>,
    pub row_finite: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessReport {
    AllConditionsHold {
        stabilization_index: usize,
        stable_support: Vec<String>,
    },
    NotFaithful {
        zero_rows: Vec<String>,
    },
    NotFinitelyGenerated {
        infinite_entries: Vec<[String; 2]>,
    },
    Covered {
        walks: Vec<Vec<String>>,
    },
    Uncovered {
        points: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleStatus {
    Skipped,
    Certified,
    UndecidedAt(usize),
    ResourceCap(u64),
}

impl fmt::Display for OracleStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleStatus::Skipped => f.write_str("skipped"),
            OracleStatus::Certified => f.write_str("certified"),
            OracleStatus::UndecidedAt(n) => write!(f, "undecided_at({n})"),
            OracleStatus::ResourceCap(n) => write!(f, "resource_cap({n})"),
        }
    }
}

impl Serialize for OracleStatus {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermReport {
    pub coefficient: String,
    pub left: String,
    pub right: String,
}

/// One direction of a strong-grading certificate, `Σ c · left · right = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub direction: String,
    pub max_factor_length: usize,
    pub terms: Vec<TermReport>,
}

impl CertificateReport {
    fn new(graph: &OracleGraph, c: &Certificate) -> Self {
        CertificateReport {
            direction: c.direction.to_string(),
            max_factor_length: c.max_factor_length(),
            terms: c
                .terms
                .iter()
                .map(|t| TermReport {
                    coefficient: t.coefficient.to_string(),
                    left: t.left.display(graph),
                    right: t.right.display(graph),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupEntry {
    pub group: String,
    pub analyzer_verdict: String,
    pub free: bool,
    pub witness: WitnessReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_level_free: Option<bool>,
    pub oracle_status: OracleStatus,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificate: Vec<CertificateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreenessReport {
    pub input: InputDocument,
    pub conditions: Conditions,
    pub chain: ChainSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSummary>,
    pub groups: Vec<GroupEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_max_len: Option<usize>,
}

/// How a report should end a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Disagreement,
    ResourceCap,
}

impl FreenessReport {
    /// Disagreement outranks a resource cap.
    pub fn outcome(&self) -> Outcome {
        if self.groups.iter().any(|g| g.agreement == Some(false)) {
            Outcome::Disagreement
        } else if self
            .groups
            .iter()
            .any(|g| matches!(g.oracle_status, OracleStatus::ResourceCap(_)))
        {
            Outcome::ResourceCap
        } else {
            Outcome::Success
        }
    }

    /// Pretty JSON with sorted keys, newline terminated.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        let mut s = serde_json::to_string_pretty(&value).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let set = |names: &[String]| format!("{{{}}}", names.join(", "));
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        let _ = match &self.input {
            InputDocument::Graph(g) => writeln!(
                out,
                "input: graph with {} vertices, {} edges, {} infinite bundles",
                g.vertices.len(),
                g.edges.len(),
                g.infinite.len()
            ),
            InputDocument::Matrix(m) => {
                writeln!(
                    out,
                    "input: dimension matrix over {} points",
                    m.points.len()
                )
            }
        };
        let c = &self.conditions;
        let _ = writeln!(
            out,
            "conditions: faithful={} finitely_generated={} artinian={}",
            yes_no(c.faithful),
            yes_no(c.finitely_generated),
            yes_no(c.artinian)
        );
        let _ = writeln!(out, "katsura ideal support: {}", set(&c.katsura_support));
        let layers: Vec<String> = self
            .chain
            .supports
            .iter()
            .enumerate()
            .map(|(n, s)| format!("I_{n}={}", set(s)))
            .collect();
        let _ = writeln!(
            out,
            "ideal chain: {} (stabilizes at {})",
            layers.join(" "),
            self.chain.stabilization_index
        );
        if let Some(g) = &self.graph {
            let _ = writeln!(
                out,
                "graph: sinks={} infinite_emitters={} row_finite={}",
                set(&g.sinks),
                set(&g.infinite_emitters),
                yes_no(g.row_finite)
            );
        }
        for entry in &self.groups {
            let _ = write!(
                out,
                "group {}: {} ({})",
                entry.group,
                entry.analyzer_verdict,
                witness_text(&entry.witness)
            );
            if let Some(free) = entry.graph_level_free {
                let _ = write!(
                    out,
                    "; graph level: {}",
                    if free { "free" } else { "not free" }
                );
            }
            let _ = write!(out, "; oracle: {}", entry.oracle_status);
            if let Some(agree) = entry.agreement {
                let _ = write!(
                    out,
                    "; {}",
                    if agree { "agreement" } else { "DISAGREEMENT" }
                );
            }
            out.push('\n');
            for cert in &entry.certificate {
                let sum: Vec<String> = cert
                    .terms
                    .iter()
                    .map(|t| format!("({}) {} · {}", t.coefficient, t.left, t.right))
                    .collect();
                let _ = writeln!(
                    out,
                    "  certificate {}: 1 = {}",
                    cert.direction,
                    sum.join(" + ")
                );
            }
        }
        out
    }
}

fn witness_text(w: &WitnessReport) -> String {
    let set = |names: &[String]| format!("{{{}}}", names.join(", "));
    match w {
        WitnessReport::AllConditionsHold {
            stabilization_index,
            stable_support,
        } => format!(
            "all conditions hold; chain stabilizes at {stabilization_index} on {}",
            set(stable_support)
        ),
        WitnessReport::NotFaithful { zero_rows } => format!("not faithful at {}", set(zero_rows)),
        WitnessReport::NotFinitelyGenerated { infinite_entries } => {
            let pairs: Vec<String> = infinite_entries
                .iter()
                .map(|[u, v]| format!("{u}->{v}"))
                .collect();
            format!("infinite fibers at {}", pairs.join(", "))
        }
        WitnessReport::Covered { walks } if walks.is_empty() => {
            "no sinks or infinite emitters".to_string()
        }
        WitnessReport::Covered { walks } => {
            let ws: Vec<String> = walks.iter().map(|w| w.join("->")).collect();
            format!("covered by {}", ws.join(", "))
        }
        WitnessReport::Uncovered { points } => format!("uncovered points {}", set(points)),
    }
}

fn names(points: &[String], set: &VertexSet) -> Vec<String> {
    set.iter().map(|i| points[i].clone()).collect()
}

fn witness_report(points: &[String], w: &Witness) -> WitnessReport {
    let name = |i: &usize| points[*i].clone();
    match w {
        Witness::AllConditionsHold {
            stabilization_index,
            stable_support,
        } => WitnessReport::AllConditionsHold {
            stabilization_index: *stabilization_index,
            stable_support: names(points, stable_support),
        },
        Witness::NotFaithful { zero_rows } => WitnessReport::NotFaithful {
            zero_rows: zero_rows.iter().map(name).collect(),
        },
        Witness::NotFinitelyGenerated { infinite_entries } => WitnessReport::NotFinitelyGenerated {
            infinite_entries: infinite_entries
                .iter()
                .map(|(u, v)| [name(u), name(v)])
                .collect(),
        },
        Witness::Covered { walks } => WitnessReport::Covered {
            walks: walks.iter().map(|w| w.iter().map(name).collect()).collect(),
        },
        Witness::Uncovered { points: p } => WitnessReport::Uncovered {
            points: p.iter().map(name).collect(),
        },
    }
}

fn graph_level_free(graph: &DirectedMultigraph, group: GaugeGroup) -> bool {
    match group {
        GaugeGroup::Full => graph.full_action_condition(),
        GaugeGroup::Cyclic(k) => graph.cyclic_action_condition(k as usize),
    }
}

fn verdict_text(free: bool) -> String {
    if free { "free" } else { "not free" }.to_string()
}

/// Runs the correspondence-level verdicts for every group. Graph inputs are
/// also checked against the graph-level conditions and the receiver layers;
/// any mismatch is an error.
pub fn analyze(doc: &InputDocument, groups: &[GaugeGroup]) -> Result<FreenessReport, ReportError> {
    let corr = doc.to_correspondence();
    let points = corr.points();
    let chain = corr.ideal_chain();
    let graph = doc.is_graph().then(|| doc.to_graph());

    if let Some(g) = &graph {
        for (n, ideal) in chain.ideals.iter().enumerate() {
            if ideal.support != g.receivers_at_least(n) {
                return Err(ReportError::CrossCheck {
                    group: "ideal chain".into(),
                    detail: format!("supp(I_{n}) differs from the receiver layer S_{n}"),
                });
            }
        }
    }

    let mut entries = Vec::with_capacity(groups.len());
    for &group in groups {
        let verdict: Verdict = corr.gauge_free(group);
        corr.check_witness(&verdict)
            .map_err(|detail| ReportError::CrossCheck {
                group: group.to_string(),
                detail,
            })?;
        let graph_free = graph.as_ref().map(|g| graph_level_free(g, group));
        if let Some(gf) = graph_free {
            if gf != verdict.free {
                return Err(ReportError::CrossCheck {
                    group: group.to_string(),
                    detail: format!(
                        "correspondence level says {}, graph level says {}",
                        verdict_text(verdict.free),
                        verdict_text(gf)
                    ),
                });
            }
        }
        entries.push(GroupEntry {
            group: group.to_string(),
            analyzer_verdict: verdict_text(verdict.free),
            free: verdict.free,
            witness: witness_report(points, &verdict.witness),
            graph_level_free: graph_free,
            oracle_status: OracleStatus::Skipped,
            certificate: Vec::new(),
            agreement: None,
        });
    }

    Ok(FreenessReport {
        input: doc.clone(),
        conditions: Conditions {
            faithful: corr.is_faithful(),
            finitely_generated: corr.is_fg(),
            artinian: chain.is_artinian,
            katsura_support: names(points, &corr.katsura_ideal().support),
            kernel_support: names(points, &corr.kernel().support),
        },
        chain: ChainSummary {
            supports: chain
                .ideals
                .iter()
                .map(|i| names(points, &i.support))
                .collect(),
            stabilization_index: chain.stabilization_index,
        },
        graph: graph.as_ref().map(|g| GraphSummary {
            sinks: names(points, &g.sinks()),
            infinite_emitters: names(points, &g.infinite_emitters()),
            row_finite: g.is_row_finite(),
        }),
        groups: entries,
        oracle_max_len: None,
    })
}

/// [`analyze`], then an oracle strong-grading check per group with factors
/// of length at most `max_len`. The oracle can only certify freeness, so
/// "not free" with an undecided oracle counts as agreement.
pub fn verify(
    doc: &InputDocument,
    groups: &[GaugeGroup],
    max_len: usize,
    options: &OracleOptions,
) -> Result<FreenessReport, ReportError> {
    let mut report = analyze(doc, groups)?;
    let oracle_graph = OracleGraph::materialize(&doc.to_graph(), options.bundle_size);
    let results: Vec<Result<OracleVerdict, OracleError>> = groups
        .par_iter()
        .map(|&g| strong_grading_check(&oracle_graph, g, max_len, options))
        .collect();
    for (entry, result) in report.groups.iter_mut().zip(results) {
        match result {
            Ok(OracleVerdict::CertifiedFree { certificates }) => {
                entry.oracle_status = OracleStatus::Certified;
                entry.certificate = certificates
                    .iter()
                    .map(|c| CertificateReport::new(&oracle_graph, c))
                    .collect();
                entry.agreement = Some(entry.free);
            }
            Ok(OracleVerdict::UndecidedAt { max_len }) => {
                entry.oracle_status = OracleStatus::UndecidedAt(max_len);
                entry.agreement = Some(!entry.free);
            }
            Err(OracleError::ResourceCap { limit }) => {
                entry.oracle_status = OracleStatus::ResourceCap(limit);
            }
            Err(e) => return Err(e.into()),
        }
    }
    report.oracle_max_len = Some(max_len);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn groups(s: &str) -> Vec<GaugeGroup> {
        parse_groups(s).unwrap()
    }

    const LOOP: &str = r#"{"vertices":["v"],"edges":[{"id":"e","src":"v","dst":"v"}]}"#;
    const EDGE: &str = r#"{"vertices":["u","v"],"edges":[{"id":"e","src":"u","dst":"v"}]}"#;
    const BUNDLE: &str = r#"{"points":["v"],"dims":[["inf"]]}"#;

    #[test]
    fn parses_both_forms() {
        let doc = parse_input(LOOP.as_bytes()).unwrap();
        assert!(doc.is_graph());
        assert_eq!(doc.to_graph().multiplicity(0, 0), ExtendedNat::Finite(1));

        let doc = parse_input(BUNDLE.as_bytes()).unwrap();
        assert!(!doc.is_graph());
        assert_eq!(doc.to_correspondence().dim(0, 0), ExtendedNat::Infinite);
    }

    #[test]
    fn diagnostics_name_the_violation() {
        let cases: &[(&str, &str)] = &[
            (
                r#"{"vertices":["u"],"edges":[{"id":"e","src":"u","dst":"w"}]}"#,
                "edges[0].dst: unknown vertex `w`",
            ),
            (r#"{"vertices":["u","u"]}"#, "vertices[1]: duplicate id `u`"),
            (
                r#"{"vertices":["u"],"edges":[{"id":"e","src":"u","dst":"u"},{"id":"e","src":"u","dst":"u"}]}"#,
                "edges[1].id: duplicate id `e`",
            ),
            (
                r#"{"points":["a","b"],"dims":[[0,1],[1]]}"#,
                "dims[1]: non-square matrix: 1 entries for 2 points",
            ),
            (
                r#"{"points":["a"],"dims":[[0],[1]]}"#,
                "dims: non-square matrix: 2 rows for 1 points",
            ),
            (
                r#"{"vertices":["u"],"infinite":[{"src":"x","dst":"u"}]}"#,
                "infinite[0].src: unknown vertex `x`",
            ),
        ];
        for (input, message) in cases {
            assert_eq!(
                parse_input(input.as_bytes()).unwrap_err().to_string(),
                *message
            );
        }
    }

    #[test]
    fn syntax_and_value_errors_carry_positions() {
        let err = parse_input(b"{\"points\":[\"a\"],\n\"dims\":[[-2]]}").unwrap_err();
        match err {
            InputError::Malformed { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("negative entry -2"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_input(b"{\"vertices\": [\"v\"").unwrap_err(),
            InputError::Malformed { line: 1, .. }
        ));
        assert!(parse_input(br#"{"vertices":["v"],"points":["v"]}"#).is_err());
        assert!(parse_input(br#"{"vertices":["v"],"colour":1}"#).is_err());
    }

    #[test]
    fn canonical_json_round_trips() {
        for input in [LOOP, EDGE, BUNDLE] {
            let doc = parse_input(input.as_bytes()).unwrap();
            let again = parse_input(doc.canonical_json().as_bytes()).unwrap();
            assert_eq!(again, doc);
        }
        let doc = parse_input(EDGE.as_bytes()).unwrap();
        assert_eq!(
            doc.canonical_json(),
            r#"{"edges":[{"dst":"v","id":"e","src":"u"}],"infinite":[],"vertices":["u","v"]}"#
        );
    }

    #[test]
    fn group_lists() {
        assert_eq!(
            groups("full,2,Z/3,2"),
            vec![
                GaugeGroup::Full,
                GaugeGroup::Cyclic(2),
                GaugeGroup::Cyclic(3)
            ]
        );
        let err = parse_groups("full,1").unwrap_err();
        assert!(err.to_string().contains("k >= 2"));
    }

    fn verdicts(report: &FreenessReport) -> Vec<bool> {
        report.groups.iter().map(|g| g.free).collect()
    }

    #[test]
    fn analyze_examples() {
        let run = |input: &str, gs: &str| {
            analyze(&parse_input(input.as_bytes()).unwrap(), &groups(gs)).unwrap()
        };
        assert_eq!(verdicts(&run(LOOP, "full,2,3")), [true, true, true]);
        assert_eq!(verdicts(&run(EDGE, "full,2,3")), [false, true, false]);
        assert_eq!(verdicts(&run(BUNDLE, "full,2")), [false, true]);
        let r = run(EDGE, "full");
        assert_eq!(r.groups[0].graph_level_free, Some(false));
        assert_eq!(
            r.groups[0].witness,
            WitnessReport::NotFaithful {
                zero_rows: vec!["v".into()]
            }
        );
        assert_eq!(r.outcome(), Outcome::Success);
    }

    #[test]
    fn verify_examples() {
        let opts = OracleOptions::default();
        let run = |input: &str, gs: &str, n: usize| {
            verify(
                &parse_input(input.as_bytes()).unwrap(),
                &groups(gs),
                n,
                &opts,
            )
            .unwrap()
        };
        let r = run(LOOP, "full", 4);
        assert_eq!(r.groups[0].oracle_status, OracleStatus::Certified);
        assert_eq!(r.groups[0].agreement, Some(true));
        assert_eq!(r.groups[0].certificate.len(), 2);

        let r = run(EDGE, "2", 3);
        assert_eq!(r.groups[0].oracle_status, OracleStatus::Certified);
        assert_eq!(r.outcome(), Outcome::Success);

        let r = run(EDGE, "full", 6);
        assert_eq!(r.groups[0].oracle_status, OracleStatus::UndecidedAt(6));
        assert_eq!(r.groups[0].agreement, Some(true));
    }

    #[test]
    fn matrix_form_of_a_graph_gives_identical_verdicts() {
        let graph = parse_input(EDGE.as_bytes()).unwrap();
        let matrix = parse_input(br#"{"points":["u","v"],"dims":[[0,1],[0,0]]}"#).unwrap();
        let gs = groups("full,2,3,4");
        let a = analyze(&graph, &gs).unwrap();
        let b = analyze(&matrix, &gs).unwrap();
        assert_eq!(a.groups.len(), b.groups.len());
        for (x, y) in a.groups.iter().zip(&b.groups) {
            assert_eq!((x.free, &x.witness), (y.free, &y.witness));
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let doc = parse_input(EDGE.as_bytes()).unwrap();
        let opts = OracleOptions::default();
        let a = verify(&doc, &groups("full,2,3"), 4, &opts)
            .unwrap()
            .to_json();
        let b = verify(&doc, &groups("full,2,3"), 4, &opts)
            .unwrap()
            .to_json();
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["groups"][1]["oracle_status"], "certified");
        assert_eq!(v["groups"][2]["oracle_status"], "undecided_at(4)");
    }
}
