//! AutomationML (CAEX 2.15) representation of PoPAN networks.

mod document;
mod mapping;
mod reader;
mod writer;

use thiserror::Error;

use crate::validate::ValidationReport;

pub use document::{
    Attribute, CaexDocument, InstanceHierarchy, InterfaceClass, InterfaceClassLib,
    InterfaceInstance, InternalElement, InternalLink, RoleClass, RoleClassLib, SystemUnitClass,
    SystemUnitClassLib, SCHEMA_VERSION,
};
pub use mapping::{
    from_caex, popan_libraries, to_caex, EDGE_VERTEX_INTERFACE, EDGE_VERTEX_INTERFACE_PATH,
    INSTANCE_HIERARCHY, INTERFACE_CLASS_LIB, ROLE_CLASS_LIB, SUBMODEL_ROLE_PATH,
    SYSTEM_UNIT_CLASS_LIB,
};
pub use reader::read_caex;
pub use writer::write_caex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AmlError {
    #[error("graph is not valid:\n{0}")]
    InvalidGraph(ValidationReport),
    #[error("missing {0}")]
    MissingLibrary(String),
    #[error("malformed element {element}: {reason}")]
    MalformedElement { element: String, reason: String },
    #[error("dangling link {link}: {reason}")]
    DanglingLink { link: String, reason: String },
    #[error("{element}: {value:?} is not a valid {attribute}")]
    VocabularyViolation {
        element: String,
        attribute: String,
        value: String,
    },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported CAEX schema version {0:?} (expected {SCHEMA_VERSION})")]
    UnsupportedSchemaVersion(String),
}

/// Writes a graph as canonical CAEX text.
pub fn graph_to_aml(graph: &crate::PopanGraph) -> Result<String, AmlError> {
    Ok(write_caex(&to_caex(graph)?))
}

/// Reads a graph from CAEX text.
pub fn graph_from_aml(text: &str) -> Result<crate::PopanGraph, AmlError> {
    from_caex(&read_caex(text)?)
}
