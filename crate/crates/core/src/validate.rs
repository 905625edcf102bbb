//! Structural well-formedness checks.
//!
//! Validation never fails; every violation becomes a [`Finding`] so callers
//! can show all of them at once.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{EdgeKind, PopanEdge, PopanGraph, ProductKind, Role};

/// Finding codes emitted by [`validate`] and [`crate::planner::verify_plan`].
pub mod codes {
    /// Edge endpoints do not have the roles its kind requires.
    pub const ROLE: &str = "E_ROLE";
    /// Arrowheads violate the rule for the edge kind.
    pub const ARROW: &str = "E_ARROW";
    /// Conditional flag on an edge that is not a product-to-process link.
    pub const CONDITIONAL: &str = "E_COND";
    /// Edge joins a node to itself.
    pub const SELF_LOOP: &str = "E_SELF";
    /// Product kind missing on a product, or present on a non-product.
    pub const KIND: &str = "E_KIND";
    pub const INITIAL: &str = "E_INITIAL";
    pub const LAST: &str = "E_LAST";
    /// Product without any process link.
    pub const NO_PROCESS: &str = "E_NOPROC";
    /// Two process links between the same product and process.
    pub const DUPLICATE_LINK: &str = "E_DUPLINK";
    /// Linked process without a resource.
    pub const NO_RESOURCE: &str = "W_NORES";
    /// Conditional link whose process has no sequence edge.
    pub const NO_SEQUENCE: &str = "W_NOSEQ";

    pub const ORDER: &str = "E_ORDER";
    pub const MISSING_STEP: &str = "E_MISSING";
    pub const DUPLICATE_STEP: &str = "E_DUPSTEP";
    pub const UNKNOWN_STEP: &str = "E_UNKNOWNSTEP";
    pub const RESOURCES: &str = "E_RESOURCES";
    pub const MODE: &str = "E_MODE";
}

/// Subject used for findings about the graph as a whole.
pub const GRAPH_SUBJECT: &str = "<graph>";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub severity: Severity,
    pub code: String,
    #[serde(rename = "subjectId")]
    pub subject_id: String,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let severity = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{severity}[{}] {}: {}",
            self.code, self.subject_id, self.message
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    /// Sorts findings by code then subject and derives `ok`.
    pub fn from_findings(mut findings: Vec<Finding>) -> Self {
        findings.sort_by(|x, y| {
            (&x.code, &x.subject_id, &x.message).cmp(&(&y.code, &y.subject_id, &y.message))
        });
        let ok = !findings.iter().any(|f| f.severity == Severity::Error);
        Self { ok, findings }
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Warning)
    }

    pub fn has_code(&self, code: &str) -> bool {
        self.findings.iter().any(|f| f.code == code)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for finding in &self.findings {
            writeln!(f, "{finding}")?;
        }
        let errors = self.errors().count();
        let warnings = self.warnings().count();
        write!(
            f,
            "{}: {errors} error(s), {warnings} warning(s)",
            if self.ok { "ok" } else { "invalid" }
        )
    }
}

pub(crate) fn error(code: &str, subject: impl Into<String>, message: impl Into<String>) -> Finding {
    Finding {
        severity: Severity::Error,
        code: code.to_owned(),
        subject_id: subject.into(),
        message: message.into(),
    }
}

fn warning(code: &str, subject: impl Into<String>, message: impl Into<String>) -> Finding {
    Finding {
        severity: Severity::Warning,
        code: code.to_owned(),
        ..error(code, subject, message)
    }
}

/// Checks every well-formedness rule and reports all violations.
pub fn validate(graph: &PopanGraph) -> ValidationReport {
    let mut findings = Vec::new();

    for node in graph.nodes() {
        match (node.role, node.kind) {
            (Role::Product, None) => findings.push(error(
                codes::KIND,
                node.id.as_str(),
                "product has no product kind",
            )),
            (Role::Process | Role::Resource, Some(kind)) => findings.push(error(
                codes::KIND,
                node.id.as_str(),
                format!("{} carries product kind {kind}", node.role),
            )),
            _ => {}
        }
    }

    for edge in graph.edges() {
        check_edge(graph, edge, &mut findings);
    }

    for (kind, code) in [
        (ProductKind::InitialProduct, codes::INITIAL),
        (ProductKind::LastProduct, codes::LAST),
    ] {
        let anchors: Vec<_> = graph.products_of_kind(kind).collect();
        match anchors.len() {
            1 => {}
            0 => findings.push(error(code, GRAPH_SUBJECT, format!("graph has no {kind}"))),
            n => findings.extend(anchors.iter().map(|node| {
                error(
                    code,
                    node.id.as_str(),
                    format!("one of {n} {kind} nodes; exactly one is allowed"),
                )
            })),
        }
    }

    let mut linked_processes = BTreeSet::new();
    let mut seen_links = BTreeSet::new();
    for edge in graph.edges_of_kind(EdgeKind::LinkingP2P) {
        let Some((product, process)) = product_process_pair(graph, edge) else {
            continue;
        };
        linked_processes.insert(process);
        if !seen_links.insert((product, process)) {
            findings.push(error(
                codes::DUPLICATE_LINK,
                edge.id.as_str(),
                format!("product {product} is already linked to process {process}"),
            ));
        }
        if edge.conditional
            && !graph
                .incident_edges(process)
                .any(|e| e.kind == EdgeKind::SequenceProcess)
        {
            findings.push(warning(
                codes::NO_SEQUENCE,
                edge.id.as_str(),
                format!("conditional link to process {process}, which has no sequence edge"),
            ));
        }
    }

    for node in graph.nodes().filter(|n| n.role == Role::Product) {
        if matches!(
            node.kind,
            Some(ProductKind::InitialProduct | ProductKind::LastProduct)
        ) {
            continue;
        }
        let has_process = graph.incident_edges(node.id.as_str()).any(|e| {
            e.kind == EdgeKind::LinkingP2P
                && product_process_pair(graph, e).is_some_and(|(p, _)| p == node.id.as_str())
        });
        if !has_process {
            findings.push(error(
                codes::NO_PROCESS,
                node.id.as_str(),
                "product is not linked to any process",
            ));
        }
    }

    for process in linked_processes {
        let has_resource = graph.incident_edges(process).any(|e| {
            e.kind == EdgeKind::LinkingP2R
                && e.other(&process.into())
                    .and_then(|other| graph.node(other.as_str()))
                    .is_some_and(|n| n.role == Role::Resource)
        });
        if !has_resource {
            findings.push(warning(
                codes::NO_RESOURCE,
                process,
                "process is not linked to any resource",
            ));
        }
    }

    ValidationReport::from_findings(findings)
}

fn check_edge(graph: &PopanGraph, edge: &PopanEdge, findings: &mut Vec<Finding>) {
    let subject = edge.id.as_str();
    if edge.a == edge.b {
        findings.push(error(
            codes::SELF_LOOP,
            subject,
            format!("edge joins {} to itself", edge.a),
        ));
    }

    let roles = (
        graph.node(edge.a.as_str()).map(|n| n.role),
        graph.node(edge.b.as_str()).map(|n| n.role),
    );
    let (want_a, want_b) = edge.kind.endpoint_roles();
    let roles_ok = roles == (Some(want_a), Some(want_b)) || roles == (Some(want_b), Some(want_a));
    if !roles_ok {
        let show = |r: Option<Role>| r.map_or("missing node", Role::as_str);
        findings.push(error(
            codes::ROLE,
            subject,
            format!(
                "{} edge must join {want_a} and {want_b}, found {} and {}",
                edge.kind,
                show(roles.0),
                show(roles.1)
            ),
        ));
    }

    if !edge.arrows_valid() {
        let rule = if edge.kind.is_arrowed() {
            "needs one OpenArrow and one FullArrow"
        } else {
            "must not carry arrows"
        };
        findings.push(error(
            codes::ARROW,
            subject,
            format!(
                "{} edge {rule}, found ({}, {})",
                edge.kind, edge.arrow_a, edge.arrow_b
            ),
        ));
    }

    if edge.conditional && edge.kind != EdgeKind::LinkingP2P {
        findings.push(error(
            codes::CONDITIONAL,
            subject,
            format!("{} edge cannot be conditional", edge.kind),
        ));
    }
}

/// The (product, process) endpoints of a correctly-typed product-to-process link.
pub(crate) fn product_process_pair<'g>(
    graph: &'g PopanGraph,
    edge: &'g PopanEdge,
) -> Option<(&'g str, &'g str)> {
    let role = |id: &str| graph.node(id).map(|n| n.role);
    match (role(edge.a.as_str()), role(edge.b.as_str())) {
        (Some(Role::Product), Some(Role::Process)) => Some((edge.a.as_str(), edge.b.as_str())),
        (Some(Role::Process), Some(Role::Product)) => Some((edge.b.as_str(), edge.a.as_str())),
        _ => None,
    }
}
