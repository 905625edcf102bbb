//! JSON authoring format for networks, the plan file, and the Graphviz
//! export of precedence graphs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    Arrow, BuildError, EdgeKind, Mode, NodeId, PopanEdge, PopanGraph, PopanNode, ProductKind, Role,
};
use crate::planner::{Plan, PrecedenceGraph, Step};

#[derive(Debug, Error)]
pub enum NativeError {
    #[error("cannot parse file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(
        "plan step indices must run 1..={expected} in order, found {found} at position {position}"
    )]
    StepIndex {
        expected: usize,
        found: usize,
        position: usize,
    },
}

fn is_false(value: &bool) -> bool {
    !*value
}

fn is_no_arrow(arrow: &Arrow) -> bool {
    *arrow == Arrow::None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NativeNode {
    pub id: String,
    pub role: Role,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ProductKind>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub label: String,
    #[serde(rename = "type", default, skip_serializing_if = "String::is_empty")]
    pub type_tag: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NativeEdge {
    pub id: String,
    pub kind: EdgeKind,
    pub a: String,
    pub b: String,
    #[serde(rename = "arrowA", default, skip_serializing_if = "is_no_arrow")]
    pub arrow_a: Arrow,
    #[serde(rename = "arrowB", default, skip_serializing_if = "is_no_arrow")]
    pub arrow_b: Arrow,
    #[serde(default, skip_serializing_if = "is_false")]
    pub conditional: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

/// The hand-editable model file: a list of nodes and a list of edges.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NativeModelFile {
    #[serde(default)]
    pub nodes: Vec<NativeNode>,
    #[serde(default)]
    pub edges: Vec<NativeEdge>,
}

impl NativeModelFile {
    pub fn from_graph(graph: &PopanGraph) -> Self {
        Self {
            nodes: graph
                .nodes()
                .map(|n| NativeNode {
                    id: n.id.to_string(),
                    role: n.role,
                    kind: n.kind,
                    label: n.label.clone(),
                    type_tag: n.type_tag.clone(),
                    metadata: n.metadata.clone(),
                })
                .collect(),
            edges: graph
                .edges()
                .map(|e| NativeEdge {
                    id: e.id.to_string(),
                    kind: e.kind,
                    a: e.a.to_string(),
                    b: e.b.to_string(),
                    arrow_a: e.arrow_a,
                    arrow_b: e.arrow_b,
                    conditional: e.conditional,
                    metadata: e.metadata.clone(),
                })
                .collect(),
        }
    }

    /// Builds the graph. Only identity and endpoint references are checked;
    /// run [`crate::validate::validate`] for the modelling rules.
    pub fn to_graph(&self) -> Result<PopanGraph, BuildError> {
        let mut builder = PopanGraph::builder();
        for n in &self.nodes {
            builder.add_node(PopanNode {
                id: NodeId::from(n.id.as_str()),
                role: n.role,
                kind: n.kind,
                label: n.label.clone(),
                type_tag: n.type_tag.clone(),
                metadata: n.metadata.clone(),
            })?;
        }
        for e in &self.edges {
            let mut edge = PopanEdge::new(e.id.as_str(), e.kind, e.a.as_str(), e.b.as_str())
                .with_arrows(e.arrow_a, e.arrow_b)
                .with_conditional(e.conditional);
            edge.metadata = e.metadata.clone();
            builder.add_edge(edge)?;
        }
        Ok(builder.build())
    }
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("model types serialize");
    text.push('\n');
    text
}

pub fn graph_to_native(graph: &PopanGraph) -> String {
    to_pretty_json(&NativeModelFile::from_graph(graph))
}

pub fn graph_from_native(text: &str) -> Result<PopanGraph, NativeError> {
    let file: NativeModelFile = serde_json::from_str(text)?;
    Ok(file.to_graph()?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFileStep {
    pub index: usize,
    pub product: NodeId,
    pub process: NodeId,
    pub resources: Vec<NodeId>,
}

/// Serialized plan with 1-based step indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub mode: Mode,
    pub steps: Vec<PlanFileStep>,
}

impl From<&Plan> for PlanFile {
    fn from(plan: &Plan) -> Self {
        Self {
            mode: plan.mode,
            steps: plan
                .steps
                .iter()
                .enumerate()
                .map(|(i, s)| PlanFileStep {
                    index: i + 1,
                    product: s.product.clone(),
                    process: s.process.clone(),
                    resources: s.resources.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<PlanFile> for Plan {
    type Error = NativeError;

    fn try_from(file: PlanFile) -> Result<Self, Self::Error> {
        let expected = file.steps.len();
        let steps = file
            .steps
            .into_iter()
            .enumerate()
            .map(|(position, s)| {
                if s.index != position + 1 {
                    return Err(NativeError::StepIndex {
                        expected,
                        found: s.index,
                        position: position + 1,
                    });
                }
                Ok(Step {
                    product: s.product,
                    process: s.process,
                    resources: s.resources,
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Plan {
            mode: file.mode,
            steps,
        })
    }
}

pub fn plan_to_json(plan: &Plan) -> String {
    to_pretty_json(&PlanFile::from(plan))
}

pub fn plan_from_json(text: &str) -> Result<Plan, NativeError> {
    let file: PlanFile = serde_json::from_str(text)?;
    file.try_into()
}

/// Numbered human-readable listing of a plan.
pub fn plan_to_text(plan: &Plan) -> String {
    let mut out = format!("{} plan, {} step(s)\n", plan.mode, plan.steps.len());
    for (i, step) in plan.steps.iter().enumerate() {
        let resources: Vec<&str> = step.resources.iter().map(NodeId::as_str).collect();
        let _ = writeln!(
            out,
            "{:>3}. {} {} [{}]",
            i + 1,
            step.process,
            step.product,
            resources.join(", ")
        );
    }
    out
}

fn dot_escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

/// The precedence graph in Graphviz DOT. Steps are numbered by their
/// position in `plan` when given, otherwise by precedence-graph index.
pub fn precedence_to_dot(precedence: &PrecedenceGraph, plan: Option<&Plan>) -> String {
    let position = |ix: usize| {
        plan.and_then(|p| {
            let step = &precedence.steps[ix];
            p.position(step.process.as_str(), step.product.as_str())
        })
    };
    let mut out = String::from("digraph precedence {\n");
    let _ = writeln!(out, "  label=\"{} precedence\";", precedence.mode);
    out.push_str("  rankdir=LR;\n  node [shape=box];\n");
    for (ix, step) in precedence.steps.iter().enumerate() {
        let number = position(ix)
            .map(|p| format!("{}. ", p + 1))
            .unwrap_or_default();
        let resources: Vec<&str> = step.resources.iter().map(NodeId::as_str).collect();
        let style = if precedence.conditional[ix] {
            ", style=dashed"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  s{ix} [label=\"{}\\n{}\\n[{}]\"{style}];",
            dot_escape(&format!("{number}{}", step.process)),
            dot_escape(step.product.as_str()),
            dot_escape(&resources.join(", "))
        );
    }
    for c in &precedence.constraints {
        let _ = writeln!(
            out,
            "  s{} -> s{} [label=\"{} ({})\"];",
            c.before,
            c.after,
            dot_escape(c.edge.as_str()),
            c.rule.as_str()
        );
    }
    out.push_str("}\n");
    out
}
