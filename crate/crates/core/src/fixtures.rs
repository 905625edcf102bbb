//! Built-in example networks.
//!
//! Nodes whose label starts with [`CONSTRUCTED_PREFIX`] (and edges whose
//! `provenance` metadata is `constructed`) are filler needed to make a
//! network complete; they are not part of the documented examples.

use crate::model::{EdgeKind, PopanEdge, PopanGraph, PopanNode, ProductKind};

pub const CONSTRUCTED_PREFIX: &str = "constructed:";

pub const NAMES: &[&str] = &["generic", "ev-battery"];

pub fn by_name(name: &str) -> Option<PopanGraph> {
    match name {
        "generic" => Some(generic()),
        "ev-battery" => Some(ev_battery()),
        _ => None,
    }
}

fn constructed(edge: PopanEdge) -> PopanEdge {
    let mut edge = edge;
    edge.metadata
        .insert("provenance".to_owned(), "constructed".to_owned());
    edge
}

fn build(nodes: Vec<PopanNode>, edges: Vec<PopanEdge>) -> PopanGraph {
    let mut builder = PopanGraph::builder();
    for node in nodes {
        builder.add_node(node).expect("fixture node ids are unique");
    }
    for edge in edges {
        builder
            .add_edge(edge)
            .expect("fixture edges are consistent");
    }
    builder.build()
}

/// The generic product: initial and last products, products 1 to 3, a
/// fastener conditionally linked to its process, and a sequence edge making
/// process 1 run before the fastener process when assembling.
pub fn generic() -> PopanGraph {
    use EdgeKind::*;
    use ProductKind::*;

    let nodes = vec![
        PopanNode::product("InitialProduct", InitialProduct).with_label("Initial Product"),
        PopanNode::product("LastProduct", LastProduct).with_label("Last Product"),
        PopanNode::product("Product1", ElementaryProduct).with_label("Product 1"),
        PopanNode::product("Product2", ElementaryProduct).with_label("Product 2"),
        PopanNode::product("Product3", ElementaryProduct).with_label("Product 3"),
        PopanNode::product("FastenerProductI", FastenerProduct).with_label("Fastener Product i"),
        PopanNode::process("Process1", "Assembling").with_label("Process 1"),
        PopanNode::process("FastenerProcessI", "Fastening").with_label("Fastener Process i"),
        PopanNode::process("Process2", "Assembling").with_label("constructed: Process 2"),
        PopanNode::process("Process3", "Assembling").with_label("constructed: Process 3"),
        PopanNode::process("ProcessLast", "Assembling").with_label("constructed: Last Process"),
        PopanNode::resource("Resource1", "Tool").with_label("Resource 1"),
        PopanNode::resource("Resource2", "Tool").with_label("Resource 2"),
    ];
    let edges = vec![
        PopanEdge::assembly("PH1", Physical, "InitialProduct", "FastenerProductI"),
        PopanEdge::assembly("PH2", Physical, "FastenerProductI", "Product1"),
        constructed(PopanEdge::assembly(
            "PH3",
            Physical,
            "InitialProduct",
            "Product2",
        )),
        constructed(PopanEdge::assembly(
            "PH4",
            Physical,
            "Product3",
            "LastProduct",
        )),
        PopanEdge::assembly("ST1", Structural, "Product1", "Product3"),
        PopanEdge::assembly("ST2", Structural, "Product2", "Product3"),
        PopanEdge::assembly("ST3", Structural, "Product3", "LastProduct"),
        PopanEdge::new("LK1", LinkingP2P, "FastenerProductI", "FastenerProcessI")
            .with_conditional(true),
        PopanEdge::new("LK2", LinkingP2P, "Product1", "Process1").with_conditional(true),
        constructed(PopanEdge::new("LK3", LinkingP2P, "Product2", "Process2")),
        constructed(PopanEdge::new("LK4", LinkingP2P, "Product3", "Process3")),
        constructed(PopanEdge::new(
            "LK5",
            LinkingP2P,
            "LastProduct",
            "ProcessLast",
        )),
        PopanEdge::assembly("SQ1", SequenceProcess, "Process1", "FastenerProcessI"),
        PopanEdge::new("RS1", LinkingP2R, "FastenerProcessI", "Resource1"),
        PopanEdge::new("RS2", LinkingP2R, "Process1", "Resource2"),
        constructed(PopanEdge::new("RS3", LinkingP2R, "Process2", "Resource2")),
        constructed(PopanEdge::new("RS4", LinkingP2R, "Process3", "Resource2")),
        constructed(PopanEdge::new(
            "RS5",
            LinkingP2R,
            "ProcessLast",
            "Resource2",
        )),
    ];
    build(nodes, edges)
}

/// An arrowed edge whose disassembly reading goes from `from` to `to`.
fn disassembly(id: &str, kind: EdgeKind, from: &str, to: &str) -> PopanEdge {
    PopanEdge::assembly(id, kind, to, from)
}

/// A simplified electric-vehicle battery. The lid (last product) is held by
/// M6 bolts and conditionally linked to the shared manipulation process,
/// which must wait for the screwing process when disassembling. The empty
/// battery box is the initial product. The module branch is filler.
pub fn ev_battery() -> PopanGraph {
    use EdgeKind::*;
    use ProductKind::*;

    let nodes = vec![
        PopanNode::product("BatteryBox", InitialProduct).with_label("Battery box (empty)"),
        PopanNode::product("Lid", LastProduct).with_label("Lid"),
        PopanNode::product("BoltsM6", FastenerProduct).with_label("Bolts M6"),
        PopanNode::product("ModuleScrews", FastenerProduct)
            .with_label("constructed: Module screws"),
        PopanNode::product("Module1", SubProduct).with_label("constructed: Battery module 1"),
        PopanNode::product("Module2", SubProduct).with_label("constructed: Battery module 2"),
        PopanNode::process("Screwing", "Screwing").with_label("Screwing"),
        PopanNode::process("Manipulation", "Manipulation").with_label("Manipulation"),
        PopanNode::process("ModuleUnscrewing", "Screwing")
            .with_label("constructed: Module unscrewing"),
        PopanNode::resource("ScrewdriverRobot", "Robot").with_label("Robot with screwdriver"),
        PopanNode::resource("GripperRobot", "Robot").with_label("Robot with gripper"),
    ];
    let edges = vec![
        disassembly("PH1", Physical, "Lid", "BoltsM6"),
        disassembly("PH2", Physical, "BoltsM6", "BatteryBox"),
        constructed(disassembly("PH3", Physical, "ModuleScrews", "Module1")),
        constructed(disassembly("PH4", Physical, "ModuleScrews", "Module2")),
        constructed(disassembly("PH5", Physical, "Module1", "BatteryBox")),
        constructed(disassembly("PH6", Physical, "Module2", "BatteryBox")),
        constructed(disassembly("PH7", Physical, "ModuleScrews", "BatteryBox")),
        disassembly("ST1", Structural, "Lid", "BatteryBox"),
        constructed(disassembly("ST2", Structural, "Lid", "ModuleScrews")),
        disassembly("SQ1", SequenceProcess, "Screwing", "Manipulation"),
        PopanEdge::new("LK1", LinkingP2P, "Lid", "Manipulation").with_conditional(true),
        PopanEdge::new("LK2", LinkingP2P, "BoltsM6", "Screwing"),
        PopanEdge::new("LK3", LinkingP2P, "BatteryBox", "Manipulation"),
        constructed(PopanEdge::new("LK4", LinkingP2P, "Module1", "Manipulation")),
        constructed(PopanEdge::new("LK5", LinkingP2P, "Module2", "Manipulation")),
        constructed(PopanEdge::new(
            "LK6",
            LinkingP2P,
            "ModuleScrews",
            "ModuleUnscrewing",
        )),
        PopanEdge::new("RS1", LinkingP2R, "Screwing", "ScrewdriverRobot"),
        PopanEdge::new("RS2", LinkingP2R, "Manipulation", "GripperRobot"),
        constructed(PopanEdge::new(
            "RS3",
            LinkingP2R,
            "ModuleUnscrewing",
            "ScrewdriverRobot",
        )),
    ];
    build(nodes, edges)
}
