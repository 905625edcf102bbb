//! Mapping between [`PopanGraph`] and [`CaexDocument`].
//!
//! Every vertex and every edge becomes an internal element directly under the
//! `PoPAN` instance hierarchy. An edge element carries two interfaces,
//! `EndpointA` and `EndpointB`, holding the arrowheads and a direction (`Out`
//! where the assembly reading leaves, `In` where it enters, `InOut` for
//! linking edges). A vertex element carries one interface per incident edge
//! with `Direction=InOut` and `Arrow=None`. The edge element owns the two
//! internal links joining its endpoints to those vertex interfaces.

use std::collections::BTreeMap;

use super::document::{
    Attribute, CaexDocument, InstanceHierarchy, InterfaceClass, InterfaceClassLib,
    InterfaceInstance, InternalElement, InternalLink, RoleClass, RoleClassLib, SystemUnitClass,
    SystemUnitClassLib,
};
use super::AmlError;
use crate::model::{
    Arrow, EdgeKind, Mode, NodeId, PopanEdge, PopanGraph, PopanNode, ProductKind, Reading, Role,
};
use crate::validate::validate;

pub const INTERFACE_CLASS_LIB: &str = "PoPANInterfaceClassLib";
pub const ROLE_CLASS_LIB: &str = "PoPANRoleClassLib";
pub const SYSTEM_UNIT_CLASS_LIB: &str = "PoPANSystemUnitClassLib";
pub const INSTANCE_HIERARCHY: &str = "PoPAN";
pub const EDGE_VERTEX_INTERFACE: &str = "EdgeVertexInterface";
pub const EDGE_VERTEX_INTERFACE_PATH: &str = "PoPANInterfaceClassLib/EdgeVertexInterface";
pub const SUBMODEL_ROLE_PATH: &str = "AssetAdministrationShellRoleClassLib/Submodel";
pub const EDGE_ROLE: &str = "Edge";
pub const DEFAULT_FILE_NAME: &str = "popan.aml";

const BASE_ROLE_PATH: &str = "AutomationMLBaseRoleClassLib/AutomationMLBaseRole";
const BASE_INTERFACE_PATH: &str = "AutomationMLInterfaceClassLib/AutomationMLBaseInterface";
const ENDPOINT_A: &str = "EndpointA";
const ENDPOINT_B: &str = "EndpointB";
const ATTR_ID: &str = "Id";
const ATTR_TYPE: &str = "Type";
const ATTR_CONDITIONAL: &str = "Conditional";
const ATTR_DIRECTION: &str = "Direction";
const ATTR_ARROW: &str = "Arrow";
const RESERVED: &[&str] = &[ATTR_ID, ATTR_TYPE, ATTR_CONDITIONAL];
const DIRECTIONS: &[&str] = &["In", "Out", "InOut"];

fn role_path(role: &str) -> String {
    format!("{ROLE_CLASS_LIB}/{role}")
}

fn node_element_id(id: &NodeId) -> String {
    format!("node.{id}")
}

fn edge_element_id(edge: &PopanEdge) -> String {
    format!("edge.{}", edge.id)
}

fn vertex_interface_name(edge: &PopanEdge) -> String {
    format!("{EDGE_VERTEX_INTERFACE}_{}", edge.id)
}

fn side(element_id: &str, interface: &str) -> String {
    format!("{element_id}:{interface}")
}

fn edge_vertex_interface(
    element_id: &str,
    name: &str,
    direction: &str,
    arrow: Arrow,
) -> InterfaceInstance {
    InterfaceInstance {
        name: name.to_owned(),
        id: Some(side(element_id, name)),
        ref_base_class_path: Some(EDGE_VERTEX_INTERFACE_PATH.to_owned()),
        attributes: vec![
            Attribute::string(ATTR_ARROW, arrow.as_str()),
            Attribute::string(ATTR_DIRECTION, direction),
        ],
    }
}

fn metadata_attributes(
    metadata: &BTreeMap<String, String>,
) -> impl Iterator<Item = Attribute> + '_ {
    metadata
        .iter()
        .filter(|(k, _)| !RESERVED.contains(&k.as_str()))
        .map(|(k, v)| Attribute::string(k, v))
}

/// The interface, role and system unit class libraries shared by all PoPAN files.
pub fn popan_libraries() -> (InterfaceClassLib, RoleClassLib, SystemUnitClassLib) {
    let arrows: Vec<&str> = Arrow::ALL.iter().map(|a| a.as_str()).collect();
    let interface_lib = InterfaceClassLib {
        name: INTERFACE_CLASS_LIB.to_owned(),
        classes: vec![InterfaceClass {
            name: EDGE_VERTEX_INTERFACE.to_owned(),
            ref_base_class_path: Some(BASE_INTERFACE_PATH.to_owned()),
            attributes: vec![
                Attribute::nominal(ATTR_ARROW, Some("None"), &arrows),
                Attribute::nominal(ATTR_DIRECTION, Some("InOut"), DIRECTIONS),
            ],
        }],
    };

    let product_kinds: Vec<&str> = ProductKind::ALL.iter().map(|k| k.as_str()).collect();
    let edge_kinds: Vec<&str> = EdgeKind::ALL.iter().map(|k| k.as_str()).collect();
    let role_names = [
        (Role::Product.as_str(), Some(product_kinds.as_slice())),
        (Role::Process.as_str(), None),
        (Role::Resource.as_str(), None),
        (EDGE_ROLE, Some(edge_kinds.as_slice())),
    ];
    let role_lib = RoleClassLib {
        name: ROLE_CLASS_LIB.to_owned(),
        classes: role_names
            .iter()
            .map(|(name, types)| RoleClass {
                name: (*name).to_owned(),
                ref_base_class_path: Some(BASE_ROLE_PATH.to_owned()),
                attributes: vec![
                    Attribute::nominal(ATTR_ID, None, &[]),
                    Attribute::nominal(ATTR_TYPE, None, types.unwrap_or_default()),
                ],
                external_interfaces: vec![InterfaceInstance {
                    name: EDGE_VERTEX_INTERFACE.to_owned(),
                    id: None,
                    ref_base_class_path: Some(EDGE_VERTEX_INTERFACE_PATH.to_owned()),
                    attributes: Vec::new(),
                }],
            })
            .collect(),
    };

    let prototypes = role_names
        .iter()
        .map(|(name, _)| {
            let id = format!("prototype.{name}");
            let mut roles = vec![role_path(name)];
            if *name == Role::Product.as_str() {
                roles.push(SUBMODEL_ROLE_PATH.to_owned());
            }
            InternalElement {
                name: (*name).to_owned(),
                external_interfaces: vec![edge_vertex_interface(
                    &id,
                    EDGE_VERTEX_INTERFACE,
                    "InOut",
                    Arrow::None,
                )],
                id,
                attributes: vec![
                    Attribute::nominal(ATTR_ID, None, &[]),
                    Attribute::nominal(ATTR_TYPE, None, &[]),
                ],
                supported_roles: roles,
                ..InternalElement::default()
            }
        })
        .collect();
    let unit_lib = SystemUnitClassLib {
        name: SYSTEM_UNIT_CLASS_LIB.to_owned(),
        classes: vec![SystemUnitClass {
            name: "PoPANElements".to_owned(),
            internal_elements: prototypes,
            ..SystemUnitClass::default()
        }],
    };
    (interface_lib, role_lib, unit_lib)
}

/// Builds the CAEX representation of a valid graph. An empty graph maps to
/// the libraries and an empty instance hierarchy.
pub fn to_caex(graph: &PopanGraph) -> Result<CaexDocument, AmlError> {
    let report = validate(graph);
    if !graph.is_empty() && !report.ok {
        return Err(AmlError::InvalidGraph(report));
    }

    let mut elements = Vec::with_capacity(graph.node_count() + graph.edge_count());
    for node in graph.nodes() {
        elements.push(node_element(graph, node));
    }
    for edge in graph.edges() {
        elements.push(edge_element(edge));
    }

    let (interface_lib, role_lib, unit_lib) = popan_libraries();
    Ok(CaexDocument {
        file_name: DEFAULT_FILE_NAME.to_owned(),
        instance_hierarchies: vec![InstanceHierarchy {
            name: INSTANCE_HIERARCHY.to_owned(),
            internal_elements: elements,
        }],
        interface_class_libs: vec![interface_lib],
        role_class_libs: vec![role_lib],
        system_unit_class_libs: vec![unit_lib],
        ..CaexDocument::default()
    }
    .canonical())
}

fn node_element(graph: &PopanGraph, node: &PopanNode) -> InternalElement {
    let element_id = node_element_id(&node.id);
    let type_value = match (node.role, node.kind) {
        (Role::Product, Some(kind)) => kind.as_str().to_owned(),
        _ => node.type_tag.clone(),
    };
    let mut attributes = vec![
        Attribute::string(ATTR_ID, node.id.as_str()),
        Attribute::string(ATTR_TYPE, type_value),
    ];
    attributes.extend(metadata_attributes(&node.metadata));

    let mut supported_roles = vec![role_path(node.role.as_str())];
    if node.role == Role::Product {
        supported_roles.push(SUBMODEL_ROLE_PATH.to_owned());
    }

    InternalElement {
        name: node.id.to_string(),
        description: (!node.label.is_empty()).then(|| node.label.clone()),
        attributes,
        external_interfaces: graph
            .incident_edges(node.id.as_str())
            .map(|edge| {
                edge_vertex_interface(
                    &element_id,
                    &vertex_interface_name(edge),
                    "InOut",
                    Arrow::None,
                )
            })
            .collect(),
        id: element_id,
        supported_roles,
        ..InternalElement::default()
    }
}

fn edge_element(edge: &PopanEdge) -> InternalElement {
    let element_id = edge_element_id(edge);
    let (direction_a, direction_b) = match edge.reading(Mode::Assembly) {
        Ok(Reading::Directed { from, .. }) if from == edge.a => ("Out", "In"),
        Ok(Reading::Directed { .. }) => ("In", "Out"),
        _ => ("InOut", "InOut"),
    };

    let mut attributes = vec![
        Attribute::string(ATTR_ID, edge.id.as_str()),
        Attribute::string(ATTR_TYPE, edge.kind.as_str()),
    ];
    if edge.conditional {
        attributes.push(Attribute::boolean(ATTR_CONDITIONAL, true));
    }
    attributes.extend(metadata_attributes(&edge.metadata));

    let links = [
        (ENDPOINT_A, &edge.a, "LinkA"),
        (ENDPOINT_B, &edge.b, "LinkB"),
    ]
    .into_iter()
    .map(|(endpoint, node, name)| InternalLink {
        name: name.to_owned(),
        side_a: side(&element_id, endpoint),
        side_b: side(&node_element_id(node), &vertex_interface_name(edge)),
    })
    .collect();

    InternalElement {
        name: edge.id.to_string(),
        attributes,
        external_interfaces: vec![
            edge_vertex_interface(&element_id, ENDPOINT_A, direction_a, edge.arrow_a),
            edge_vertex_interface(&element_id, ENDPOINT_B, direction_b, edge.arrow_b),
        ],
        id: element_id,
        supported_roles: vec![role_path(EDGE_ROLE)],
        internal_links: links,
        ..InternalElement::default()
    }
}

fn check_libraries(doc: &CaexDocument) -> Result<(), AmlError> {
    let has_interface = doc
        .interface_class_lib(INTERFACE_CLASS_LIB)
        .is_some_and(|lib| lib.classes.iter().any(|c| c.name == EDGE_VERTEX_INTERFACE));
    if !has_interface {
        return Err(AmlError::MissingLibrary(format!(
            "interface class library {INTERFACE_CLASS_LIB} with {EDGE_VERTEX_INTERFACE}"
        )));
    }
    let role_lib = doc
        .role_class_lib(ROLE_CLASS_LIB)
        .ok_or_else(|| AmlError::MissingLibrary(format!("role class library {ROLE_CLASS_LIB}")))?;
    for role in [
        Role::Product.as_str(),
        Role::Process.as_str(),
        Role::Resource.as_str(),
        EDGE_ROLE,
    ] {
        if !role_lib.classes.iter().any(|c| c.name == role) {
            return Err(AmlError::MissingLibrary(format!(
                "role class {role} in {ROLE_CLASS_LIB}"
            )));
        }
    }
    Ok(())
}

fn malformed(element: &InternalElement, reason: impl Into<String>) -> AmlError {
    AmlError::MalformedElement {
        element: element.id.clone(),
        reason: reason.into(),
    }
}

fn is_edge_vertex_interface(iface: &InterfaceInstance) -> bool {
    iface
        .ref_base_class_path
        .as_deref()
        .is_some_and(|p| p == EDGE_VERTEX_INTERFACE_PATH || p.ends_with("/EdgeVertexInterface"))
}

fn check_interface_vocabulary(element: &InternalElement) -> Result<(), AmlError> {
    for iface in element
        .external_interfaces
        .iter()
        .filter(|i| is_edge_vertex_interface(i))
    {
        let subject = iface
            .id
            .clone()
            .unwrap_or_else(|| side(&element.id, &iface.name));
        if let Some(direction) = iface.value(ATTR_DIRECTION) {
            if !DIRECTIONS.contains(&direction) {
                return Err(AmlError::VocabularyViolation {
                    element: subject,
                    attribute: ATTR_DIRECTION.to_owned(),
                    value: direction.to_owned(),
                });
            }
        }
        if let Some(arrow) = iface.value(ATTR_ARROW) {
            if arrow.parse::<Arrow>().is_err() {
                return Err(AmlError::VocabularyViolation {
                    element: subject,
                    attribute: ATTR_ARROW.to_owned(),
                    value: arrow.to_owned(),
                });
            }
        }
    }
    Ok(())
}

fn popan_role(element: &InternalElement) -> Result<&str, AmlError> {
    let prefix = format!("{ROLE_CLASS_LIB}/");
    let roles: Vec<&str> = element
        .supported_roles
        .iter()
        .filter_map(|r| r.strip_prefix(&prefix))
        .collect();
    match roles.as_slice() {
        [role] => Ok(role),
        [] => Err(malformed(element, "no PoPAN role class")),
        _ => Err(malformed(element, "more than one PoPAN role class")),
    }
}

fn required_value<'e>(element: &'e InternalElement, name: &str) -> Result<&'e str, AmlError> {
    element
        .value(name)
        .ok_or_else(|| malformed(element, format!("missing attribute {name}")))
}

fn vocabulary<T: std::str::FromStr>(
    element: &InternalElement,
    attribute: &str,
    value: &str,
) -> Result<T, AmlError> {
    value.parse().map_err(|_| AmlError::VocabularyViolation {
        element: element.id.clone(),
        attribute: attribute.to_owned(),
        value: value.to_owned(),
    })
}

fn extra_metadata(element: &InternalElement) -> BTreeMap<String, String> {
    element
        .attributes
        .iter()
        .filter(|a| !RESERVED.contains(&a.name.as_str()))
        .filter_map(|a| Some((a.name.clone(), a.value.clone()?)))
        .collect()
}

/// Rebuilds a graph from a PoPAN CAEX document.
pub fn from_caex(doc: &CaexDocument) -> Result<PopanGraph, AmlError> {
    check_libraries(doc)?;
    let hierarchy = doc.instance_hierarchy(INSTANCE_HIERARCHY).ok_or_else(|| {
        AmlError::MissingLibrary(format!("instance hierarchy {INSTANCE_HIERARCHY}"))
    })?;

    let mut vertices: BTreeMap<&str, (&InternalElement, NodeId)> = BTreeMap::new();
    let mut edges = Vec::new();
    let mut builder = PopanGraph::builder();

    for element in &hierarchy.internal_elements {
        check_interface_vocabulary(element)?;
        if !element.children.is_empty() {
            return Err(malformed(element, "PoPAN elements cannot be nested"));
        }
        let role = popan_role(element)?;
        if role == EDGE_ROLE {
            edges.push(element);
            continue;
        }
        let role: Role = vocabulary(element, "role", role)?;
        let id = required_value(element, ATTR_ID)?;
        let type_value = element.value(ATTR_TYPE).unwrap_or_default();
        let mut node = PopanNode::new(id, role);
        if role == Role::Product {
            node.kind = Some(vocabulary(element, ATTR_TYPE, type_value)?);
        } else {
            node.type_tag = type_value.to_owned();
        }
        node.label = element.description.clone().unwrap_or_default();
        node.metadata = extra_metadata(element);
        builder
            .add_node(node)
            .map_err(|e| malformed(element, e.to_string()))?;
        if vertices
            .insert(element.id.as_str(), (element, NodeId::from(id)))
            .is_some()
        {
            return Err(malformed(element, "duplicate element ID"));
        }
    }

    // "<element ID>:<interface name>" -> (element ID, whether it is an edge element)
    let mut sides: BTreeMap<String, (&str, bool)> = BTreeMap::new();
    for (element, is_edge) in vertices
        .values()
        .map(|(ie, _)| (*ie, false))
        .chain(edges.iter().map(|ie| (*ie, true)))
    {
        for iface in &element.external_interfaces {
            sides.insert(
                side(&element.id, &iface.name),
                (element.id.as_str(), is_edge),
            );
        }
    }

    let links: Vec<&InternalLink> = doc.internal_links().collect();
    for link in &links {
        let mut kinds = [false; 2];
        for (slot, partner) in [&link.side_a, &link.side_b].into_iter().enumerate() {
            let Some(&(_, is_edge)) = sides.get(partner.as_str()) else {
                return Err(AmlError::DanglingLink {
                    link: link.name.clone(),
                    reason: format!("partner {partner:?} does not name an existing interface"),
                });
            };
            kinds[slot] = is_edge;
        }
        if kinds[0] == kinds[1] {
            return Err(AmlError::DanglingLink {
                link: link.name.clone(),
                reason: "a link must join one edge element and one vertex element".to_owned(),
            });
        }
    }

    for element in edges {
        let id = required_value(element, ATTR_ID)?;
        let kind: EdgeKind = vocabulary(element, ATTR_TYPE, required_value(element, ATTR_TYPE)?)?;
        let conditional = match element.value(ATTR_CONDITIONAL) {
            None => false,
            Some(value) => vocabulary::<bool>(element, ATTR_CONDITIONAL, value)?,
        };

        let endpoints: Vec<&InterfaceInstance> = element
            .external_interfaces
            .iter()
            .filter(|i| is_edge_vertex_interface(i))
            .collect();
        if endpoints.len() != 2 {
            return Err(malformed(
                element,
                format!(
                    "edge has {} endpoint interfaces, expected 2",
                    endpoints.len()
                ),
            ));
        }
        let endpoint = |name: &str| -> Result<(NodeId, Arrow), AmlError> {
            let iface = element
                .interface(name)
                .filter(|i| is_edge_vertex_interface(i))
                .ok_or_else(|| malformed(element, format!("missing endpoint interface {name}")))?;
            let arrow = match iface.value(ATTR_ARROW) {
                Some(value) => vocabulary(element, ATTR_ARROW, value)?,
                None => Arrow::None,
            };
            let own_side = side(&element.id, name);
            let partners: Vec<&str> = links
                .iter()
                .filter_map(|l| {
                    if l.side_a == own_side {
                        Some(l.side_b.as_str())
                    } else if l.side_b == own_side {
                        Some(l.side_a.as_str())
                    } else {
                        None
                    }
                })
                .collect();
            let partner = match partners.as_slice() {
                [partner] => *partner,
                [] => {
                    return Err(AmlError::DanglingLink {
                        link: own_side,
                        reason: "edge endpoint is not linked to a vertex".to_owned(),
                    })
                }
                _ => {
                    return Err(malformed(
                        element,
                        format!("{name} is linked more than once"),
                    ))
                }
            };
            let (vertex, _) = sides[partner];
            let (_, node_id) = &vertices[vertex];
            Ok((node_id.clone(), arrow))
        };
        let (a, arrow_a) = endpoint(ENDPOINT_A)?;
        let (b, arrow_b) = endpoint(ENDPOINT_B)?;

        let mut edge = PopanEdge::new(id, kind, a, b)
            .with_arrows(arrow_a, arrow_b)
            .with_conditional(conditional);
        edge.metadata = extra_metadata(element);
        builder
            .add_edge(edge)
            .map_err(|e| malformed(element, e.to_string()))?;
    }

    Ok(builder.build())
}
