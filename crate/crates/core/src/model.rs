//! Domain types for product-oriented PPR asset networks.
//!
//! A network is a set of typed vertices (products, processes, resources) and
//! typed edges. Product-to-product and process-to-process edges carry one
//! arrowhead per endpoint: the open arrow marks the assembly direction, the
//! full arrow the disassembly direction.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

macro_rules! string_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(value: impl Into<String>) -> Self {
                Self(value.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(value: &str) -> Self {
                Self(value.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(value: String) -> Self {
                Self(value)
            }
        }

        impl std::borrow::Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

string_id!(
    /// Identifier of a vertex. Compared byte-wise.
    NodeId
);
string_id!(
    /// Identifier of an edge. Compared byte-wise.
    EdgeId
);

/// Returned when a vocabulary string does not name a known variant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {vocabulary} value {value:?}")]
pub struct UnknownVariant {
    pub vocabulary: &'static str,
    pub value: String,
}

macro_rules! vocabulary {
    ($(#[$meta:meta])* $name:ident, $label:literal { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $text)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = UnknownVariant;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(UnknownVariant { vocabulary: $label, value: s.to_owned() }),
                }
            }
        }
    };
}

vocabulary!(
    /// Classification of a product vertex.
    ProductKind, "product kind" {
        ElementaryProduct => "ElementaryProduct",
        SubProduct => "SubProduct",
        FastenerProduct => "FastenerProduct",
        InitialProduct => "InitialProduct",
        LastProduct => "LastProduct",
    }
);

vocabulary!(
    /// The PPR category of a vertex.
    Role, "role" {
        Product => "Product",
        Process => "Process",
        Resource => "Resource",
    }
);

vocabulary!(
    EdgeKind, "edge kind" {
        Physical => "Physical",
        Structural => "Structural",
        LinkingP2P => "LinkingP2P",
        SequenceProcess => "SequenceProcess",
        LinkingP2R => "LinkingP2R",
    }
);

vocabulary!(
    /// Arrowhead drawn at one endpoint of an edge.
    Arrow, "arrow" {
        OpenArrow => "OpenArrow",
        FullArrow => "FullArrow",
        None => "None",
    }
);

vocabulary!(
    /// Reading direction of the network.
    Mode, "mode" {
        Assembly => "assembly",
        Disassembly => "disassembly",
    }
);

// The variants come from a macro, so `#[default]` is not available.
#[allow(clippy::derivable_impls)]
impl Default for Arrow {
    fn default() -> Self {
        Arrow::None
    }
}

impl Mode {
    pub fn reversed(self) -> Mode {
        match self {
            Mode::Assembly => Mode::Disassembly,
            Mode::Disassembly => Mode::Assembly,
        }
    }

    /// The arrowhead that marks the target endpoint when reading in this mode.
    fn target_arrow(self) -> Arrow {
        match self {
            Mode::Assembly => Arrow::OpenArrow,
            Mode::Disassembly => Arrow::FullArrow,
        }
    }
}

impl EdgeKind {
    /// Physical, structural and sequence edges carry an open and a full arrow.
    pub fn is_arrowed(self) -> bool {
        matches!(
            self,
            EdgeKind::Physical | EdgeKind::Structural | EdgeKind::SequenceProcess
        )
    }

    /// Roles the two endpoints must have, in either order.
    pub fn endpoint_roles(self) -> (Role, Role) {
        match self {
            EdgeKind::Physical | EdgeKind::Structural => (Role::Product, Role::Product),
            EdgeKind::LinkingP2P => (Role::Product, Role::Process),
            EdgeKind::SequenceProcess => (Role::Process, Role::Process),
            EdgeKind::LinkingP2R => (Role::Process, Role::Resource),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopanNode {
    pub id: NodeId,
    pub role: Role,
    /// Set exactly when `role` is [`Role::Product`] in a well-formed graph.
    pub kind: Option<ProductKind>,
    pub label: String,
    /// Free category for processes and resources, e.g. "Screwing" or "Robot".
    pub type_tag: String,
    /// Extra attributes carried through from interchange files.
    pub metadata: BTreeMap<String, String>,
}

impl PopanNode {
    pub fn new(id: impl Into<NodeId>, role: Role) -> Self {
        Self {
            id: id.into(),
            role,
            kind: None,
            label: String::new(),
            type_tag: String::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn product(id: impl Into<NodeId>, kind: ProductKind) -> Self {
        Self {
            kind: Some(kind),
            ..Self::new(id, Role::Product)
        }
    }

    pub fn process(id: impl Into<NodeId>, type_tag: impl Into<String>) -> Self {
        Self {
            type_tag: type_tag.into(),
            ..Self::new(id, Role::Process)
        }
    }

    pub fn resource(id: impl Into<NodeId>, type_tag: impl Into<String>) -> Self {
        Self {
            type_tag: type_tag.into(),
            ..Self::new(id, Role::Resource)
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn is_product_of(&self, kind: ProductKind) -> bool {
        self.role == Role::Product && self.kind == Some(kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopanEdge {
    pub id: EdgeId,
    pub kind: EdgeKind,
    pub a: NodeId,
    pub b: NodeId,
    pub arrow_a: Arrow,
    pub arrow_b: Arrow,
    /// Only meaningful on [`EdgeKind::LinkingP2P`].
    pub conditional: bool,
    pub metadata: BTreeMap<String, String>,
}

/// Orientation of an edge under a [`Mode`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reading {
    Directed { from: NodeId, to: NodeId },
    Undirected,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("edge {edge} has arrows ({arrow_a}, {arrow_b}) which are invalid for a {kind} edge")]
pub struct InvalidArrows {
    pub edge: EdgeId,
    pub kind: EdgeKind,
    pub arrow_a: Arrow,
    pub arrow_b: Arrow,
}

impl PopanEdge {
    /// An edge without arrowheads and without the conditional flag.
    pub fn new(
        id: impl Into<EdgeId>,
        kind: EdgeKind,
        a: impl Into<NodeId>,
        b: impl Into<NodeId>,
    ) -> Self {
        Self {
            id: id.into(),
            kind,
            a: a.into(),
            b: b.into(),
            arrow_a: Arrow::None,
            arrow_b: Arrow::None,
            conditional: false,
            metadata: BTreeMap::new(),
        }
    }

    /// An arrowed edge whose assembly reading goes from `from` to `to`:
    /// full arrow at `from`, open arrow at `to`.
    pub fn assembly(
        id: impl Into<EdgeId>,
        kind: EdgeKind,
        from: impl Into<NodeId>,
        to: impl Into<NodeId>,
    ) -> Self {
        Self::new(id, kind, from, to).with_arrows(Arrow::FullArrow, Arrow::OpenArrow)
    }

    pub fn with_arrows(mut self, arrow_a: Arrow, arrow_b: Arrow) -> Self {
        self.arrow_a = arrow_a;
        self.arrow_b = arrow_b;
        self
    }

    pub fn with_conditional(mut self, conditional: bool) -> Self {
        self.conditional = conditional;
        self
    }

    /// Whether the arrowheads satisfy the rule for this edge kind.
    pub fn arrows_valid(&self) -> bool {
        if self.kind.is_arrowed() {
            matches!(
                (self.arrow_a, self.arrow_b),
                (Arrow::OpenArrow, Arrow::FullArrow) | (Arrow::FullArrow, Arrow::OpenArrow)
            )
        } else {
            self.arrow_a == Arrow::None && self.arrow_b == Arrow::None
        }
    }

    /// Orient the edge for `mode`: the reading points toward the endpoint
    /// carrying the open arrow for assembly and the full arrow for disassembly.
    pub fn reading(&self, mode: Mode) -> Result<Reading, InvalidArrows> {
        if !self.arrows_valid() {
            return Err(InvalidArrows {
                edge: self.id.clone(),
                kind: self.kind,
                arrow_a: self.arrow_a,
                arrow_b: self.arrow_b,
            });
        }
        if !self.kind.is_arrowed() {
            return Ok(Reading::Undirected);
        }
        let (from, to) = if self.arrow_b == mode.target_arrow() {
            (&self.a, &self.b)
        } else {
            (&self.b, &self.a)
        };
        Ok(Reading::Directed {
            from: from.clone(),
            to: to.clone(),
        })
    }

    /// The endpoint opposite to `node`, if `node` is an endpoint.
    pub fn other(&self, node: &NodeId) -> Option<&NodeId> {
        if &self.a == node {
            Some(&self.b)
        } else if &self.b == node {
            Some(&self.a)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("duplicate identifier {0:?}")]
    DuplicateId(String),
    #[error("identifiers must not be empty")]
    EmptyId,
    #[error("edge {edge} references unknown node {node:?}")]
    UnknownEndpoint { edge: EdgeId, node: NodeId },
}

/// An immutable network. Nodes and edges are keyed by identifier.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PopanGraph {
    nodes: BTreeMap<NodeId, PopanNode>,
    edges: BTreeMap<EdgeId, PopanEdge>,
    incidence: BTreeMap<NodeId, Vec<EdgeId>>,
}

impl PopanGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    pub fn node(&self, id: &str) -> Option<&PopanNode> {
        self.nodes.get(id)
    }

    pub fn edge(&self, id: &str) -> Option<&PopanEdge> {
        self.edges.get(id)
    }

    /// Nodes in identifier order.
    pub fn nodes(&self) -> impl Iterator<Item = &PopanNode> {
        self.nodes.values()
    }

    /// Edges in identifier order.
    pub fn edges(&self) -> impl Iterator<Item = &PopanEdge> {
        self.edges.values()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Edges touching `node`, in identifier order.
    pub fn incident_edges<'a>(&'a self, node: &str) -> impl Iterator<Item = &'a PopanEdge> + 'a {
        self.incidence
            .get(node)
            .into_iter()
            .flatten()
            .filter_map(|id| self.edges.get(id))
    }

    pub fn degree(&self, node: &str) -> usize {
        self.incidence.get(node).map_or(0, Vec::len)
    }

    pub fn edges_of_kind(&self, kind: EdgeKind) -> impl Iterator<Item = &PopanEdge> {
        self.edges.values().filter(move |e| e.kind == kind)
    }

    pub fn products_of_kind(&self, kind: ProductKind) -> impl Iterator<Item = &PopanNode> {
        self.nodes.values().filter(move |n| n.is_product_of(kind))
    }
}

/// Accumulates nodes and edges; [`GraphBuilder::build`] snapshots them into
/// an immutable [`PopanGraph`].
///
/// Only identity and referential integrity are checked here. Role and arrow
/// rules are reported by [`crate::validate::validate`], so malformed networks
/// can still be constructed.
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    nodes: BTreeMap<NodeId, PopanNode>,
    edges: BTreeMap<EdgeId, PopanEdge>,
}

impl GraphBuilder {
    pub fn add_node(&mut self, node: PopanNode) -> Result<&mut Self, BuildError> {
        if node.id.as_str().is_empty() {
            return Err(BuildError::EmptyId);
        }
        if self.nodes.contains_key(&node.id) {
            return Err(BuildError::DuplicateId(node.id.to_string()));
        }
        self.nodes.insert(node.id.clone(), node);
        Ok(self)
    }

    pub fn add_edge(&mut self, edge: PopanEdge) -> Result<&mut Self, BuildError> {
        if edge.id.as_str().is_empty() {
            return Err(BuildError::EmptyId);
        }
        if self.edges.contains_key(&edge.id) {
            return Err(BuildError::DuplicateId(edge.id.to_string()));
        }
        for endpoint in [&edge.a, &edge.b] {
            if !self.nodes.contains_key(endpoint) {
                return Err(BuildError::UnknownEndpoint {
                    edge: edge.id.clone(),
                    node: endpoint.clone(),
                });
            }
        }
        self.edges.insert(edge.id.clone(), edge);
        Ok(self)
    }

    pub fn build(&self) -> PopanGraph {
        let mut incidence: BTreeMap<NodeId, Vec<EdgeId>> = BTreeMap::new();
        for edge in self.edges.values() {
            incidence
                .entry(edge.a.clone())
                .or_default()
                .push(edge.id.clone());
            if edge.b != edge.a {
                incidence
                    .entry(edge.b.clone())
                    .or_default()
                    .push(edge.id.clone());
            }
        }
        PopanGraph {
            nodes: self.nodes.clone(),
            edges: self.edges.clone(),
            incidence,
        }
    }
}

impl From<&PopanGraph> for GraphBuilder {
    fn from(graph: &PopanGraph) -> Self {
        Self {
            nodes: graph.nodes.clone(),
            edges: graph.edges.clone(),
        }
    }
}
