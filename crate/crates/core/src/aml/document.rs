//! In-memory model of the CAEX 2.15 subset used for PoPAN files.

/// The only CAEX schema version read and written.
pub const SCHEMA_VERSION: &str = "2.15";

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Attribute {
    pub name: String,
    pub data_type: Option<String>,
    pub value: Option<String>,
    /// Allowed values, written as a nominal-scaled constraint.
    pub nominal_values: Vec<String>,
}

impl Attribute {
    pub fn string(name: impl Into<String>, value: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            data_type: Some("xs:string".to_owned()),
            value: Some(value.into()),
            nominal_values: Vec::new(),
        }
    }

    pub fn boolean(name: impl Into<String>, value: bool) -> Self {
        Self {
            data_type: Some("xs:boolean".to_owned()),
            ..Self::string(name, value.to_string())
        }
    }

    /// A string attribute constrained to `values`.
    pub fn nominal(name: impl Into<String>, default: Option<&str>, values: &[&str]) -> Self {
        Self {
            name: name.into(),
            data_type: Some("xs:string".to_owned()),
            value: default.map(str::to_owned),
            nominal_values: values.iter().map(|v| (*v).to_owned()).collect(),
        }
    }
}

fn find_attribute<'a>(attributes: &'a [Attribute], name: &str) -> Option<&'a Attribute> {
    attributes.iter().find(|a| a.name == name)
}

/// An external interface on an element or class.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InterfaceInstance {
    pub name: String,
    pub id: Option<String>,
    pub ref_base_class_path: Option<String>,
    pub attributes: Vec<Attribute>,
}

impl InterfaceInstance {
    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        find_attribute(&self.attributes, name)
    }

    pub fn value(&self, name: &str) -> Option<&str> {
        self.attribute(name).and_then(|a| a.value.as_deref())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InternalLink {
    pub name: String,
    /// `"<element ID>:<interface name>"`.
    pub side_a: String,
    pub side_b: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InternalElement {
    pub name: String,
    pub id: String,
    pub description: Option<String>,
    pub attributes: Vec<Attribute>,
    pub external_interfaces: Vec<InterfaceInstance>,
    pub children: Vec<InternalElement>,
    /// Role class paths, e.g. `PoPANRoleClassLib/Product`.
    pub supported_roles: Vec<String>,
    pub internal_links: Vec<InternalLink>,
}

impl InternalElement {
    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        find_attribute(&self.attributes, name)
    }

    pub fn value(&self, name: &str) -> Option<&str> {
        self.attribute(name).and_then(|a| a.value.as_deref())
    }

    pub fn interface(&self, name: &str) -> Option<&InterfaceInstance> {
        self.external_interfaces.iter().find(|i| i.name == name)
    }

    /// Sorts attributes, interfaces, children and links by name, recursively.
    pub fn canonicalize(&mut self) {
        self.attributes.sort_by(|x, y| x.name.cmp(&y.name));
        self.external_interfaces.sort_by(|x, y| x.name.cmp(&y.name));
        for iface in &mut self.external_interfaces {
            iface.attributes.sort_by(|x, y| x.name.cmp(&y.name));
        }
        self.children.sort_by(|x, y| x.name.cmp(&y.name));
        for child in &mut self.children {
            child.canonicalize();
        }
        self.internal_links.sort_by(|x, y| x.name.cmp(&y.name));
    }

    /// This element and all its descendants, depth first.
    pub fn walk(&self) -> Vec<&InternalElement> {
        let mut out = vec![self];
        for child in &self.children {
            out.extend(child.walk());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InstanceHierarchy {
    pub name: String,
    pub internal_elements: Vec<InternalElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InterfaceClass {
    pub name: String,
    pub ref_base_class_path: Option<String>,
    pub attributes: Vec<Attribute>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InterfaceClassLib {
    pub name: String,
    pub classes: Vec<InterfaceClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RoleClass {
    pub name: String,
    pub ref_base_class_path: Option<String>,
    pub attributes: Vec<Attribute>,
    pub external_interfaces: Vec<InterfaceInstance>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RoleClassLib {
    pub name: String,
    pub classes: Vec<RoleClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SystemUnitClass {
    pub name: String,
    pub ref_base_class_path: Option<String>,
    pub attributes: Vec<Attribute>,
    pub external_interfaces: Vec<InterfaceInstance>,
    pub internal_elements: Vec<InternalElement>,
    pub supported_roles: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SystemUnitClassLib {
    pub name: String,
    pub classes: Vec<SystemUnitClass>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaexDocument {
    pub file_name: String,
    pub schema_version: String,
    pub instance_hierarchies: Vec<InstanceHierarchy>,
    pub interface_class_libs: Vec<InterfaceClassLib>,
    pub role_class_libs: Vec<RoleClassLib>,
    pub system_unit_class_libs: Vec<SystemUnitClassLib>,
}

impl Default for CaexDocument {
    fn default() -> Self {
        Self {
            file_name: String::new(),
            schema_version: SCHEMA_VERSION.to_owned(),
            instance_hierarchies: Vec::new(),
            interface_class_libs: Vec::new(),
            role_class_libs: Vec::new(),
            system_unit_class_libs: Vec::new(),
        }
    }
}

impl CaexDocument {
    pub fn instance_hierarchy(&self, name: &str) -> Option<&InstanceHierarchy> {
        self.instance_hierarchies.iter().find(|h| h.name == name)
    }

    pub fn interface_class_lib(&self, name: &str) -> Option<&InterfaceClassLib> {
        self.interface_class_libs.iter().find(|l| l.name == name)
    }

    pub fn role_class_lib(&self, name: &str) -> Option<&RoleClassLib> {
        self.role_class_libs.iter().find(|l| l.name == name)
    }

    /// The document with every internal element's contents sorted by name,
    /// which is the order the writer emits.
    pub fn canonical(&self) -> CaexDocument {
        let mut doc = self.clone();
        for hierarchy in &mut doc.instance_hierarchies {
            for ie in &mut hierarchy.internal_elements {
                ie.canonicalize();
            }
        }
        for lib in &mut doc.system_unit_class_libs {
            for class in &mut lib.classes {
                for ie in &mut class.internal_elements {
                    ie.canonicalize();
                }
            }
        }
        doc
    }

    /// Every internal link in the instance hierarchies.
    pub fn internal_links(&self) -> impl Iterator<Item = &InternalLink> {
        self.instance_hierarchies
            .iter()
            .flat_map(|h| h.internal_elements.iter())
            .flat_map(InternalElement::walk)
            .flat_map(|ie| ie.internal_links.iter())
    }
}
