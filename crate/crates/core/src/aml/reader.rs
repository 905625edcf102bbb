//! CAEX text input.
//!
//! Accepts the subset produced by [`super::write_caex`] and tolerates
//! reordered XML attributes, arbitrary whitespace, comments and unknown
//! elements, which are skipped.

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::document::{
    Attribute, CaexDocument, InstanceHierarchy, InterfaceClass, InterfaceClassLib,
    InterfaceInstance, InternalElement, InternalLink, RoleClass, RoleClassLib, SystemUnitClass,
    SystemUnitClassLib, SCHEMA_VERSION,
};
use super::AmlError;

/// Minimal element tree built before interpreting CAEX.
#[derive(Debug)]
struct Node {
    name: String,
    attrs: Vec<(String, String)>,
    children: Vec<Node>,
    text: String,
    offset: usize,
}

impl Node {
    fn attr(&self, key: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn children<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Node> + 'a {
        self.children.iter().filter(move |c| c.name == name)
    }

    fn child(&self, name: &str) -> Option<&Node> {
        self.children.iter().find(|c| c.name == name)
    }
}

struct Cursor<'a> {
    text: &'a str,
}

impl Cursor<'_> {
    fn error(&self, offset: usize, message: impl Into<String>) -> AmlError {
        let offset = offset.min(self.text.len());
        let before = &self.text.as_bytes()[..offset];
        let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
        let line_start = before
            .iter()
            .rposition(|&b| b == b'\n')
            .map_or(0, |p| p + 1);
        let column = String::from_utf8_lossy(&before[line_start..])
            .chars()
            .count()
            + 1;
        AmlError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn required<'n>(&self, node: &'n Node, key: &str) -> Result<&'n str, AmlError> {
        node.attr(key).ok_or_else(|| {
            self.error(
                node.offset,
                format!("<{}> is missing attribute {key}", node.name),
            )
        })
    }
}

fn start_node(
    cursor: &Cursor<'_>,
    start: &BytesStart<'_>,
    offset: usize,
) -> Result<Node, AmlError> {
    let name = String::from_utf8_lossy(start.name().as_ref()).into_owned();
    let mut attrs = Vec::new();
    for attr in start.attributes() {
        let attr = attr.map_err(|e| cursor.error(offset, e.to_string()))?;
        let key = String::from_utf8_lossy(attr.key.as_ref()).into_owned();
        let value = attr
            .unescape_value()
            .map_err(|e| cursor.error(offset, e.to_string()))?
            .into_owned();
        attrs.push((key, value));
    }
    Ok(Node {
        name,
        attrs,
        children: Vec::new(),
        text: String::new(),
        offset,
    })
}

fn parse_tree(cursor: &Cursor<'_>) -> Result<Node, AmlError> {
    let mut reader = Reader::from_str(cursor.text);
    reader.config_mut().check_end_names = true;
    let mut stack: Vec<Node> = Vec::new();
    let mut root: Option<Node> = None;

    loop {
        let offset = reader.buffer_position() as usize;
        let event = reader
            .read_event()
            .map_err(|e| cursor.error(reader.error_position() as usize, e.to_string()))?;
        match event {
            Event::Start(start) => stack.push(start_node(cursor, &start, offset)?),
            Event::Empty(start) => {
                let node = start_node(cursor, &start, offset)?;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(node),
                    None if root.is_none() => root = Some(node),
                    None => return Err(cursor.error(offset, "content after the root element")),
                }
            }
            Event::End(_) => {
                let node = stack.pop().expect("end names are checked by the reader");
                match stack.last_mut() {
                    Some(parent) => parent.children.push(node),
                    None => root = Some(node),
                }
            }
            Event::Text(text) => {
                let text = text
                    .unescape()
                    .map_err(|e| cursor.error(offset, e.to_string()))?;
                match stack.last_mut() {
                    Some(parent) => parent.text.push_str(&text),
                    None if text.trim().is_empty() => {}
                    None => return Err(cursor.error(offset, "text outside the root element")),
                }
            }
            Event::CData(data) => {
                let data = String::from_utf8_lossy(&data.into_inner()).into_owned();
                if let Some(parent) = stack.last_mut() {
                    parent.text.push_str(&data);
                }
            }
            Event::Eof => {
                if let Some(open) = stack.last() {
                    return Err(cursor.error(
                        cursor.text.len(),
                        format!("unexpected end of input: <{}> is not closed", open.name),
                    ));
                }
                break;
            }
            Event::Decl(_) | Event::PI(_) | Event::Comment(_) | Event::DocType(_) => {}
        }
    }
    root.ok_or_else(|| cursor.error(cursor.text.len(), "document has no root element"))
}

/// Parses CAEX text into a document.
pub fn read_caex(text: &str) -> Result<CaexDocument, AmlError> {
    let cursor = Cursor { text };
    let root = parse_tree(&cursor)?;
    if root.name != "CAEXFile" {
        return Err(cursor.error(
            root.offset,
            format!("expected <CAEXFile> root, found <{}>", root.name),
        ));
    }
    let version = cursor.required(&root, "SchemaVersion")?;
    if version != SCHEMA_VERSION {
        return Err(AmlError::UnsupportedSchemaVersion(version.to_owned()));
    }

    let mut doc = CaexDocument {
        file_name: root.attr("FileName").unwrap_or_default().to_owned(),
        schema_version: version.to_owned(),
        ..CaexDocument::default()
    };
    for child in &root.children {
        match child.name.as_str() {
            "InstanceHierarchy" => doc.instance_hierarchies.push(InstanceHierarchy {
                name: cursor.required(child, "Name")?.to_owned(),
                internal_elements: child
                    .children("InternalElement")
                    .map(|ie| internal_element(&cursor, ie))
                    .collect::<Result<_, _>>()?,
            }),
            "InterfaceClassLib" => doc.interface_class_libs.push(InterfaceClassLib {
                name: cursor.required(child, "Name")?.to_owned(),
                classes: child
                    .children("InterfaceClass")
                    .map(|c| {
                        Ok(InterfaceClass {
                            name: cursor.required(c, "Name")?.to_owned(),
                            ref_base_class_path: c.attr("RefBaseClassPath").map(str::to_owned),
                            attributes: attributes(&cursor, c)?,
                        })
                    })
                    .collect::<Result<_, AmlError>>()?,
            }),
            "RoleClassLib" => doc.role_class_libs.push(RoleClassLib {
                name: cursor.required(child, "Name")?.to_owned(),
                classes: child
                    .children("RoleClass")
                    .map(|c| {
                        Ok(RoleClass {
                            name: cursor.required(c, "Name")?.to_owned(),
                            ref_base_class_path: c.attr("RefBaseClassPath").map(str::to_owned),
                            attributes: attributes(&cursor, c)?,
                            external_interfaces: interfaces(&cursor, c)?,
                        })
                    })
                    .collect::<Result<_, AmlError>>()?,
            }),
            "SystemUnitClassLib" => doc.system_unit_class_libs.push(SystemUnitClassLib {
                name: cursor.required(child, "Name")?.to_owned(),
                classes: child
                    .children("SystemUnitClass")
                    .map(|c| {
                        Ok(SystemUnitClass {
                            name: cursor.required(c, "Name")?.to_owned(),
                            ref_base_class_path: c.attr("RefBaseClassPath").map(str::to_owned),
                            attributes: attributes(&cursor, c)?,
                            external_interfaces: interfaces(&cursor, c)?,
                            internal_elements: c
                                .children("InternalElement")
                                .map(|ie| internal_element(&cursor, ie))
                                .collect::<Result<_, _>>()?,
                            supported_roles: supported_roles(&cursor, c)?,
                        })
                    })
                    .collect::<Result<_, AmlError>>()?,
            }),
            _ => {}
        }
    }
    Ok(doc)
}

fn internal_element(cursor: &Cursor<'_>, node: &Node) -> Result<InternalElement, AmlError> {
    Ok(InternalElement {
        name: cursor.required(node, "Name")?.to_owned(),
        id: cursor.required(node, "ID")?.to_owned(),
        description: node.child("Description").map(|d| d.text.clone()),
        attributes: attributes(cursor, node)?,
        external_interfaces: interfaces(cursor, node)?,
        children: node
            .children("InternalElement")
            .map(|ie| internal_element(cursor, ie))
            .collect::<Result<_, _>>()?,
        supported_roles: supported_roles(cursor, node)?,
        internal_links: node
            .children("InternalLink")
            .map(|link| {
                Ok(InternalLink {
                    name: cursor.required(link, "Name")?.to_owned(),
                    side_a: cursor.required(link, "RefPartnerSideA")?.to_owned(),
                    side_b: cursor.required(link, "RefPartnerSideB")?.to_owned(),
                })
            })
            .collect::<Result<_, AmlError>>()?,
    })
}

fn supported_roles(cursor: &Cursor<'_>, node: &Node) -> Result<Vec<String>, AmlError> {
    node.children("SupportedRoleClass")
        .map(|r| Ok(cursor.required(r, "RefRoleClassPath")?.to_owned()))
        .collect()
}

fn interfaces(cursor: &Cursor<'_>, node: &Node) -> Result<Vec<InterfaceInstance>, AmlError> {
    node.children("ExternalInterface")
        .map(|iface| {
            Ok(InterfaceInstance {
                name: cursor.required(iface, "Name")?.to_owned(),
                id: iface.attr("ID").map(str::to_owned),
                ref_base_class_path: iface.attr("RefBaseClassPath").map(str::to_owned),
                attributes: attributes(cursor, iface)?,
            })
        })
        .collect()
}

fn attributes(cursor: &Cursor<'_>, node: &Node) -> Result<Vec<Attribute>, AmlError> {
    node.children("Attribute")
        .map(|attr| {
            let nominal_values = attr
                .children("Constraint")
                .flat_map(|c| c.children("NominalScaledType"))
                .flat_map(|n| n.children("RequiredValue"))
                .map(|v| v.text.clone())
                .collect();
            Ok(Attribute {
                name: cursor.required(attr, "Name")?.to_owned(),
                data_type: attr.attr("AttributeDataType").map(str::to_owned),
                value: attr.child("Value").map(|v| v.text.clone()),
                nominal_values,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<CAEXFile FileName="x.aml" SchemaVersion="2.15">
  <InstanceHierarchy Name="PoPAN">
    <InternalElement Name="A" ID="node.A">
      <Attribute Name="Id" AttributeDataType="xs:string">
        <Value>A</Value>
      </Attribute>
    </InternalElement>
  </InstanceHierarchy>
</CAEXFile>
"#;

    #[test]
    fn reads_minimal_document() {
        let doc = read_caex(SMALL).unwrap();
        let ie = &doc.instance_hierarchies[0].internal_elements[0];
        assert_eq!(ie.value("Id"), Some("A"));
        assert_eq!(doc.file_name, "x.aml");
    }

    #[test]
    fn truncated_input_reports_position() {
        let cut = &SMALL[..SMALL.find("</InternalElement>").unwrap()];
        match read_caex(cut) {
            Err(AmlError::Syntax { line, column, .. }) => {
                assert_eq!(line, 8);
                assert_eq!(column, 5);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn mismatched_tag_is_syntax_error() {
        let broken = SMALL.replace("</Attribute>", "</Attribut>");
        let Err(AmlError::Syntax { line, .. }) = read_caex(&broken) else {
            panic!("expected syntax error");
        };
        assert_eq!(line, 7);
    }

    #[test]
    fn other_schema_version_rejected() {
        let v3 = SMALL.replace("SchemaVersion=\"2.15\"", "SchemaVersion=\"3.0\"");
        assert!(matches!(
            read_caex(&v3),
            Err(AmlError::UnsupportedSchemaVersion(v)) if v == "3.0"
        ));
    }

    #[test]
    fn attribute_order_comments_and_whitespace_tolerated() {
        let variant = SMALL
            .replace(
                r#"<InternalElement Name="A" ID="node.A">"#,
                "<!-- vertex -->\n<InternalElement   ID=\"node.A\"\n Name=\"A\" >",
            )
            .replace(
                r#"<CAEXFile FileName="x.aml" SchemaVersion="2.15">"#,
                r#"<CAEXFile SchemaVersion="2.15" FileName="x.aml"><Unknown/>"#,
            );
        assert_eq!(read_caex(&variant).unwrap(), read_caex(SMALL).unwrap());
    }

    #[test]
    fn escaped_values_are_decoded() {
        let doc =
            read_caex(&SMALL.replace("<Value>A</Value>", "<Value>a &lt;b&gt; &amp; c</Value>"))
                .unwrap();
        assert_eq!(
            doc.instance_hierarchies[0].internal_elements[0].value("Id"),
            Some("a <b> & c")
        );
    }
}
