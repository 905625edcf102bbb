//! Canonical CAEX text output.
//!
//! Output is UTF-8 with LF line endings and two-space indentation. Element
//! order follows the CAEX 2.15 schema sequence; within an internal element,
//! attributes, interfaces, children and links are sorted by name. XML
//! attributes are written as Name, ID, RefBaseClassPath, then the rest.

use super::document::{Attribute, CaexDocument, InterfaceInstance, InternalElement, InternalLink};

const XSI_NAMESPACE: &str = "http://www.w3.org/2001/XMLSchema-instance";
const AUTOMATIONML_VERSION: &str = "2.0";

struct XmlOut {
    buf: String,
    depth: usize,
}

impl XmlOut {
    fn indent(&mut self) {
        for _ in 0..self.depth {
            self.buf.push_str("  ");
        }
    }

    fn tag(&mut self, name: &str, attrs: &[(&str, &str)]) {
        self.indent();
        self.buf.push('<');
        self.buf.push_str(name);
        for (key, value) in attrs {
            self.buf.push(' ');
            self.buf.push_str(key);
            self.buf.push_str("=\"");
            escape_into(&mut self.buf, value, true);
            self.buf.push('"');
        }
    }

    fn open(&mut self, name: &str, attrs: &[(&str, &str)]) {
        self.tag(name, attrs);
        self.buf.push_str(">\n");
        self.depth += 1;
    }

    fn empty(&mut self, name: &str, attrs: &[(&str, &str)]) {
        self.tag(name, attrs);
        self.buf.push_str(" />\n");
    }

    fn close(&mut self, name: &str) {
        self.depth -= 1;
        self.indent();
        self.buf.push_str("</");
        self.buf.push_str(name);
        self.buf.push_str(">\n");
    }

    fn text(&mut self, name: &str, text: &str) {
        if text.is_empty() {
            self.empty(name, &[]);
            return;
        }
        self.tag(name, &[]);
        self.buf.push('>');
        escape_into(&mut self.buf, text, false);
        self.buf.push_str("</");
        self.buf.push_str(name);
        self.buf.push_str(">\n");
    }
}

fn escape_into(out: &mut String, text: &str, attribute: bool) {
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' if attribute => out.push_str("&quot;"),
            '\n' if attribute => out.push_str("&#10;"),
            '\t' if attribute => out.push_str("&#9;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
}

fn named<'a>(
    name: &'a str,
    id: Option<&'a str>,
    base: Option<&'a str>,
) -> Vec<(&'static str, &'a str)> {
    let mut attrs = vec![("Name", name)];
    if let Some(id) = id {
        attrs.push(("ID", id));
    }
    if let Some(base) = base {
        attrs.push(("RefBaseClassPath", base));
    }
    attrs
}

/// Serializes `doc` to canonical CAEX text.
pub fn write_caex(doc: &CaexDocument) -> String {
    let doc = doc.canonical();
    let mut out = XmlOut {
        buf: String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"),
        depth: 0,
    };
    out.open(
        "CAEXFile",
        &[
            ("FileName", &doc.file_name),
            ("SchemaVersion", &doc.schema_version),
            ("xmlns:xsi", XSI_NAMESPACE),
            (
                "xsi:noNamespaceSchemaLocation",
                &format!("CAEX_ClassModel_V{}.xsd", doc.schema_version),
            ),
        ],
    );
    out.empty(
        "AdditionalInformation",
        &[("AutomationMLVersion", AUTOMATIONML_VERSION)],
    );

    for hierarchy in &doc.instance_hierarchies {
        let attrs = named(&hierarchy.name, None, None);
        if hierarchy.internal_elements.is_empty() {
            out.empty("InstanceHierarchy", &attrs);
            continue;
        }
        out.open("InstanceHierarchy", &attrs);
        for ie in &hierarchy.internal_elements {
            write_internal_element(&mut out, ie);
        }
        out.close("InstanceHierarchy");
    }

    for lib in &doc.interface_class_libs {
        out.open("InterfaceClassLib", &named(&lib.name, None, None));
        for class in &lib.classes {
            let attrs = named(&class.name, None, class.ref_base_class_path.as_deref());
            write_with_attributes(&mut out, "InterfaceClass", &attrs, &class.attributes);
        }
        out.close("InterfaceClassLib");
    }

    for lib in &doc.role_class_libs {
        out.open("RoleClassLib", &named(&lib.name, None, None));
        for class in &lib.classes {
            let attrs = named(&class.name, None, class.ref_base_class_path.as_deref());
            if class.attributes.is_empty() && class.external_interfaces.is_empty() {
                out.empty("RoleClass", &attrs);
                continue;
            }
            out.open("RoleClass", &attrs);
            write_attributes(&mut out, &class.attributes);
            write_interfaces(&mut out, &class.external_interfaces);
            out.close("RoleClass");
        }
        out.close("RoleClassLib");
    }

    for lib in &doc.system_unit_class_libs {
        out.open("SystemUnitClassLib", &named(&lib.name, None, None));
        for class in &lib.classes {
            let attrs = named(&class.name, None, class.ref_base_class_path.as_deref());
            out.open("SystemUnitClass", &attrs);
            write_attributes(&mut out, &class.attributes);
            write_interfaces(&mut out, &class.external_interfaces);
            for ie in &class.internal_elements {
                write_internal_element(&mut out, ie);
            }
            write_roles(&mut out, &class.supported_roles);
            out.close("SystemUnitClass");
        }
        out.close("SystemUnitClassLib");
    }

    out.close("CAEXFile");
    out.buf
}

fn write_internal_element(out: &mut XmlOut, ie: &InternalElement) {
    out.open("InternalElement", &named(&ie.name, Some(&ie.id), None));
    if let Some(description) = &ie.description {
        out.text("Description", description);
    }
    write_attributes(out, &ie.attributes);
    write_interfaces(out, &ie.external_interfaces);
    for child in &ie.children {
        write_internal_element(out, child);
    }
    write_roles(out, &ie.supported_roles);
    for link in &ie.internal_links {
        write_link(out, link);
    }
    out.close("InternalElement");
}

fn write_roles(out: &mut XmlOut, roles: &[String]) {
    for role in roles {
        out.empty("SupportedRoleClass", &[("RefRoleClassPath", role)]);
    }
}

fn write_link(out: &mut XmlOut, link: &InternalLink) {
    out.empty(
        "InternalLink",
        &[
            ("Name", &link.name),
            ("RefPartnerSideA", &link.side_a),
            ("RefPartnerSideB", &link.side_b),
        ],
    );
}

fn write_interfaces(out: &mut XmlOut, interfaces: &[InterfaceInstance]) {
    for iface in interfaces {
        let attrs = named(
            &iface.name,
            iface.id.as_deref(),
            iface.ref_base_class_path.as_deref(),
        );
        write_with_attributes(out, "ExternalInterface", &attrs, &iface.attributes);
    }
}

fn write_with_attributes(
    out: &mut XmlOut,
    tag: &str,
    attrs: &[(&str, &str)],
    attributes: &[Attribute],
) {
    if attributes.is_empty() {
        out.empty(tag, attrs);
    } else {
        out.open(tag, attrs);
        write_attributes(out, attributes);
        out.close(tag);
    }
}

fn write_attributes(out: &mut XmlOut, attributes: &[Attribute]) {
    for attribute in attributes {
        let mut attrs = vec![("Name", attribute.name.as_str())];
        if let Some(data_type) = &attribute.data_type {
            attrs.push(("AttributeDataType", data_type));
        }
        if attribute.value.is_none() && attribute.nominal_values.is_empty() {
            out.empty("Attribute", &attrs);
            continue;
        }
        out.open("Attribute", &attrs);
        if let Some(value) = &attribute.value {
            out.text("Value", value);
        }
        if !attribute.nominal_values.is_empty() {
            let constraint = format!("{}Values", attribute.name);
            out.open("Constraint", &[("Name", &constraint)]);
            out.open("NominalScaledType", &[]);
            for value in &attribute.nominal_values {
                out.text("RequiredValue", value);
            }
            out.close("NominalScaledType");
            out.close("Constraint");
        }
        out.close("Attribute");
    }
}
