//! Product-oriented Product–Process–Resource asset networks (PoPAN).
//!
//! A PoPAN graph describes a product's structure together with the processes
//! and resources needed to assemble or disassemble it. This crate validates
//! such graphs, derives deterministic assembly and disassembly plans from a
//! single graph, and reads and writes them as AutomationML (CAEX 2.15).
//!
//! ```
//! use popan::{fixtures, plan, Mode};
//!
//! let battery = fixtures::ev_battery();
//! let steps = plan(&battery, Mode::Disassembly).unwrap().steps;
//! assert_eq!(steps[0].process.as_str(), "Screwing");
//! assert_eq!(steps[1].product.as_str(), "Lid");
//! ```

pub mod aml;
pub mod fixtures;
pub mod model;
pub mod native;
pub mod planner;
pub mod validate;

pub use model::{
    Arrow, BuildError, EdgeId, EdgeKind, GraphBuilder, Mode, NodeId, PopanEdge, PopanGraph,
    PopanNode, ProductKind, Reading, Role,
};
pub use planner::{
    build_precedence, enumerate_valid_plans, plan, verify_plan, Plan, PlanError, PrecedenceGraph,
    Step,
};
pub use validate::{validate, Finding, Severity, ValidationReport};
