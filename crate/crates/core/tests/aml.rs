mod common;

use popan::aml::{
    self, from_caex, read_caex, to_caex, write_caex, AmlError, EDGE_VERTEX_INTERFACE_PATH,
};
use popan::{
    fixtures, plan, EdgeKind, GraphBuilder, Mode, PopanEdge, PopanGraph, PopanNode, ProductKind,
};
use proptest::prelude::*;

const GENERIC_AML: &str = include_str!("data/generic.aml");

/// The lid, its bolts and the fastening step around them.
fn lid_region() -> PopanGraph {
    let mut b = PopanGraph::builder();
    b.add_node(PopanNode::product("Box", ProductKind::InitialProduct))
        .unwrap()
        .add_node(PopanNode::product("Lid", ProductKind::LastProduct).with_label("Lid"))
        .unwrap()
        .add_node(PopanNode::product("Bolts", ProductKind::FastenerProduct))
        .unwrap()
        .add_node(PopanNode::process("Screwing", "Fastening"))
        .unwrap()
        .add_node(PopanNode::resource("Robot", "Screwdriver"))
        .unwrap()
        .add_edge(PopanEdge::assembly(
            "PH1",
            EdgeKind::Physical,
            "Lid",
            "Bolts",
        ))
        .unwrap()
        .add_edge(PopanEdge::assembly(
            "ST1",
            EdgeKind::Structural,
            "Box",
            "Lid",
        ))
        .unwrap()
        .add_edge(PopanEdge::new(
            "LK1",
            EdgeKind::LinkingP2P,
            "Bolts",
            "Screwing",
        ))
        .unwrap()
        .add_edge(PopanEdge::new(
            "RS1",
            EdgeKind::LinkingP2R,
            "Screwing",
            "Robot",
        ))
        .unwrap();
    b.build()
}

fn expect_err(text: &str) -> AmlError {
    aml::graph_from_aml(text).expect_err("mutated document must be rejected")
}

#[test]
fn golden_generic_matches_writer() {
    let text = aml::graph_to_aml(&fixtures::generic()).unwrap();
    assert_eq!(text, GENERIC_AML);
}

#[test]
fn golden_generic_reads_back_to_fixture() {
    assert_eq!(
        aml::graph_from_aml(GENERIC_AML).unwrap(),
        fixtures::generic()
    );
}

#[test]
fn lid_region_round_trips() {
    let graph = lid_region();
    let doc = to_caex(&graph).unwrap();
    assert_eq!(doc.internal_links().count(), 2 * graph.edge_count());
    assert_eq!(from_caex(&doc).unwrap(), graph);
    let text = write_caex(&doc);
    assert_eq!(read_caex(&text).unwrap(), doc);
}

#[test]
fn empty_graph_gives_libraries_and_empty_hierarchy() {
    let doc = to_caex(&PopanGraph::default()).unwrap();
    assert_eq!(doc.instance_hierarchies.len(), 1);
    assert!(doc.instance_hierarchies[0].internal_elements.is_empty());
    assert_eq!(doc.interface_class_libs.len(), 1);
    assert_eq!(doc.role_class_libs.len(), 1);
    assert_eq!(doc.system_unit_class_libs.len(), 1);
    let back = aml::graph_from_aml(&write_caex(&doc)).unwrap();
    assert!(back.is_empty());
}

#[test]
fn node_with_three_edges_has_three_interfaces() {
    let graph = fixtures::generic();
    assert_eq!(graph.degree("FastenerProcessI"), 3);
    let doc = to_caex(&graph).unwrap();
    let element = doc.instance_hierarchies[0]
        .internal_elements
        .iter()
        .find(|e| e.name == "FastenerProcessI")
        .unwrap();
    assert_eq!(element.external_interfaces.len(), 3);
    assert!(element
        .external_interfaces
        .iter()
        .all(|i| i.ref_base_class_path.as_deref() == Some(EDGE_VERTEX_INTERFACE_PATH)));
}

#[test]
fn conditional_attribute_only_when_set() {
    let doc = to_caex(&fixtures::generic()).unwrap();
    let edges = &doc.instance_hierarchies[0].internal_elements;
    let find = |name: &str| edges.iter().find(|e| e.name == name).unwrap();
    assert_eq!(find("LK1").value("Conditional"), Some("true"));
    assert_eq!(find("LK3").value("Conditional"), None);
}

#[test]
fn invalid_graph_is_refused() {
    let mut b = GraphBuilder::from(&fixtures::generic());
    b.add_edge(PopanEdge::new(
        "bad",
        EdgeKind::Physical,
        "Product1",
        "Product2",
    ))
    .unwrap();
    assert!(matches!(
        to_caex(&b.build()),
        Err(AmlError::InvalidGraph(_))
    ));
}

#[test]
fn special_characters_survive() {
    let mut b = GraphBuilder::from(&lid_region());
    b.add_node(PopanNode::resource("R<&>\"'", "Gripper").with_label("a < b & \"c\"\nline\ttab"))
        .unwrap()
        .add_edge(PopanEdge::new(
            "RS2",
            EdgeKind::LinkingP2R,
            "Screwing",
            "R<&>\"'",
        ))
        .unwrap();
    let graph = b.build();
    let text = aml::graph_to_aml(&graph).unwrap();
    assert!(text.contains("a &lt; b &amp;"));
    assert_eq!(aml::graph_from_aml(&text).unwrap(), graph);
}

#[test]
fn writing_is_byte_stable() {
    for name in fixtures::NAMES {
        let graph = fixtures::by_name(name).unwrap();
        let first = aml::graph_to_aml(&graph).unwrap();
        let second = aml::graph_to_aml(&graph).unwrap();
        assert_eq!(first, second);
        let reread = aml::graph_to_aml(&aml::graph_from_aml(&first).unwrap()).unwrap();
        assert_eq!(first, reread, "{name}");
    }
}

#[test]
fn edge_with_one_endpoint_is_malformed() {
    let start = GENERIC_AML
        .find(r#"<ExternalInterface Name="EndpointB" ID="edge.PH1:EndpointB""#)
        .unwrap();
    let end = start
        + GENERIC_AML[start..].find("</ExternalInterface>").unwrap()
        + "</ExternalInterface>".len();
    let mut text = format!("{}{}", &GENERIC_AML[..start], &GENERIC_AML[end..]);
    let link = text
        .find(r#"<InternalLink Name="LinkB" RefPartnerSideA="edge.PH1:EndpointB""#)
        .unwrap();
    let link_end = link + text[link..].find("/>").unwrap() + 2;
    text.replace_range(link..link_end, "");
    match expect_err(&text) {
        AmlError::MalformedElement { element, .. } => assert!(element.contains("PH1"), "{element}"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn unknown_arrow_is_a_vocabulary_violation() {
    let anchor = GENERIC_AML.find(r#"ID="edge.PH1:EndpointA""#).unwrap();
    let value = anchor
        + GENERIC_AML[anchor..]
            .find("<Value>FullArrow</Value>")
            .unwrap();
    let text = format!(
        "{}<Value>Bent</Value>{}",
        &GENERIC_AML[..value],
        &GENERIC_AML[value + "<Value>FullArrow</Value>".len()..]
    );
    match expect_err(&text) {
        AmlError::VocabularyViolation {
            element,
            attribute,
            value,
        } => {
            assert_eq!(element, "edge.PH1:EndpointA");
            assert_eq!(attribute, "Arrow");
            assert_eq!(value, "Bent");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn link_to_unknown_element_dangles() {
    let text = GENERIC_AML.replacen(
        r#"RefPartnerSideB="node.InitialProduct:EdgeVertexInterface_PH1""#,
        r#"RefPartnerSideB="node.Nowhere:EdgeVertexInterface_PH1""#,
        1,
    );
    assert!(matches!(expect_err(&text), AmlError::DanglingLink { .. }));
}

#[test]
fn missing_library_is_reported() {
    let mut doc = to_caex(&fixtures::generic()).unwrap();
    doc.role_class_libs.clear();
    assert!(matches!(from_caex(&doc), Err(AmlError::MissingLibrary(_))));
    let mut doc = to_caex(&fixtures::generic()).unwrap();
    doc.instance_hierarchies.clear();
    assert!(matches!(from_caex(&doc), Err(AmlError::MissingLibrary(_))));
}

#[test]
fn other_schema_versions_are_rejected() {
    let text = GENERIC_AML.replacen(r#"SchemaVersion="2.15""#, r#"SchemaVersion="3.0""#, 1);
    assert!(matches!(expect_err(&text), AmlError::UnsupportedSchemaVersion(v) if v == "3.0"));
}

#[test]
fn truncated_file_reports_a_position() {
    let text = &GENERIC_AML[..GENERIC_AML.len() / 2];
    assert!(matches!(expect_err(text), AmlError::Syntax { line, .. } if line > 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn random_graphs_round_trip(seed in any::<u64>()) {
        let graph = common::random_valid_graph(seed, 10);
        let doc = to_caex(&graph).unwrap();

        prop_assert_eq!(doc.internal_links().count(), 2 * graph.edge_count());
        for element in &doc.instance_hierarchies[0].internal_elements {
            if let Some(id) = element.id.strip_prefix("node.") {
                prop_assert_eq!(element.external_interfaces.len(), graph.degree(id));
            }
        }

        let text = write_caex(&doc);
        prop_assert_eq!(&read_caex(&text).unwrap(), &doc);
        let back = aml::graph_from_aml(&text).unwrap();
        prop_assert_eq!(&back, &graph);
        for mode in [Mode::Assembly, Mode::Disassembly] {
            prop_assert_eq!(plan(&graph, mode).ok(), plan(&back, mode).ok());
        }
    }
}
