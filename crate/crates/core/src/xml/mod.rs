//! XML documents: process models, extension models and operation catalogs.
//!
//! Serialization is canonical: two-space indentation, LF line ends, model
//! elements and references sorted by id, attribute maps sorted by key.
//! Document order is kept wherever it carries meaning (text blocks,
//! exemplars, exclusions, new assets of an extension).
//!
//! ```text
//! <processModel schemaVersion="1" metamodel="1.3">
//!   <element id="r1" kind="Role" name="Quality Manager">
//!     <description>…</description>
//!     <attribute key="roleClass">…</attribute>
//!     <textBlock id="body">…</textBlock>
//!   </element>
//!   <reference id="resp1" kind="Responsibility" source="w1" target="r1"/>
//! </processModel>
//! ```

mod dom;
mod trace;

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::atomic::AtomicKind;
use crate::catalog::{OperationCatalog, OperationExemplar, OperationTypeDef, StepTemplate};
use crate::merge::ExtensionModel;
use crate::model::{
    ElementKind, MetamodelVersion, ModelError, ProcessElement, ProcessModel, Reference, ReferenceKind, TextBlock,
};

use dom::{Node, XmlWriter};

pub use trace::serialize_trace;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum XmlError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{path}: {reason}")]
    Schema { path: String, reason: String },
    #[error("{path}: duplicate id `{id}`")]
    DuplicateId { id: String, path: String },
    #[error("extension model declares no parent")]
    MissingParentDeclaration,
    #[error("{path}: duplicate operation type `{name}`")]
    DuplicateTypeName { name: String, path: String },
    #[error("{path}: unknown atomic kind `{kind}`")]
    UnknownAtomicKind { kind: String, path: String },
    #[error("{path}: unknown target kind `{kind}`")]
    UnknownTargetKind { kind: String, path: String },
}

impl XmlError {
    pub(crate) fn schema(path: &str, reason: impl Into<String>) -> Self {
        XmlError::Schema { path: path.to_string(), reason: reason.into() }
    }
}

fn expect_root(node: &Node, name: &str) -> Result<(), XmlError> {
    if node.name != name {
        return Err(XmlError::schema("/", format!("expected root <{name}>, found <{}>", node.name)));
    }
    let path = format!("/{name}");
    match node.attr("schemaVersion") {
        Some(SCHEMA_VERSION) => Ok(()),
        Some(other) => Err(XmlError::schema(&path, format!("unsupported schemaVersion `{other}`"))),
        None => Err(XmlError::schema(&path, "missing attribute `schemaVersion`")),
    }
}

fn parse_metamodel(node: &Node, path: &str) -> Result<MetamodelVersion, XmlError> {
    let raw = node.require_attr("metamodel", path)?;
    raw.parse().map_err(|_| XmlError::schema(path, format!("unknown metamodel `{raw}`")))
}

fn check_attrs(node: &Node, path: &str, allowed: &[&str]) -> Result<(), XmlError> {
    for (k, _) in &node.attrs {
        if !allowed.contains(&k.as_str()) {
            return Err(XmlError::schema(path, format!("unexpected attribute `{k}`")));
        }
    }
    Ok(())
}

fn insert_attribute(map: &mut BTreeMap<String, String>, key: &str, value: &str, path: &str) -> Result<(), XmlError> {
    if map.insert(key.to_string(), value.to_string()).is_some() {
        return Err(XmlError::schema(path, format!("attribute key `{key}` given twice")));
    }
    Ok(())
}

fn read_attribute_child(child: &Node, path: &str, map: &mut BTreeMap<String, String>) -> Result<(), XmlError> {
    check_attrs(child, path, &["key"])?;
    child.no_children(path)?;
    let key = child.require_attr("key", path)?;
    if key.is_empty() {
        return Err(XmlError::schema(path, "empty attribute key"));
    }
    insert_attribute(map, key, &child.text, path)
}

fn read_element(node: &Node, path: &str) -> Result<ProcessElement, XmlError> {
    node.no_text(path)?;
    let id = node.require_attr("id", path)?;
    let kind_raw = node.require_attr("kind", path)?;
    let kind: ElementKind =
        kind_raw.parse().map_err(|_| XmlError::schema(path, format!("unknown element kind `{kind_raw}`")))?;
    let name = node.require_attr("name", path)?;
    let mut element = ProcessElement::new(id, kind, name);
    let path = format!("{path}[@id='{id}']");
    // attributes the schema does not know are kept verbatim
    for (k, v) in &node.attrs {
        if !matches!(k.as_str(), "id" | "kind" | "name") {
            insert_attribute(&mut element.attributes, k, v, &path)?;
        }
    }
    let mut seen_description = false;
    for child in &node.children {
        let child_path = format!("{path}/{}", child.name);
        match child.name.as_str() {
            "description" => {
                check_attrs(child, &child_path, &[])?;
                child.no_children(&child_path)?;
                if seen_description {
                    return Err(XmlError::schema(&child_path, "more than one description"));
                }
                seen_description = true;
                element.description = child.text.clone();
            }
            "attribute" => read_attribute_child(child, &child_path, &mut element.attributes)?,
            "textBlock" => {
                check_attrs(child, &child_path, &["id"])?;
                child.no_children(&child_path)?;
                let block = child.require_attr("id", &child_path)?;
                element.text_blocks.push(TextBlock::new(block, child.text.clone()));
            }
            other => return Err(XmlError::schema(&child_path, format!("unexpected element <{other}>"))),
        }
    }
    element.validate().map_err(|e| XmlError::schema(&path, e.to_string()))?;
    Ok(element)
}

fn read_reference(node: &Node, path: &str) -> Result<Reference, XmlError> {
    node.no_text(path)?;
    let id = node.require_attr("id", path)?;
    let kind_raw = node.require_attr("kind", path)?;
    let kind: ReferenceKind =
        kind_raw.parse().map_err(|_| XmlError::schema(path, format!("unknown reference kind `{kind_raw}`")))?;
    let source = node.require_attr("source", path)?;
    let target = node.require_attr("target", path)?;
    let mut reference = Reference::new(id, kind, source, target);
    let path = format!("{path}[@id='{id}']");
    for (k, v) in &node.attrs {
        if !matches!(k.as_str(), "id" | "kind" | "source" | "target") {
            insert_attribute(&mut reference.attributes, k, v, &path)?;
        }
    }
    for child in &node.children {
        let child_path = format!("{path}/{}", child.name);
        match child.name.as_str() {
            "attribute" => read_attribute_child(child, &child_path, &mut reference.attributes)?,
            other => return Err(XmlError::schema(&child_path, format!("unexpected element <{other}>"))),
        }
    }
    reference.validate().map_err(|e| XmlError::schema(&path, e.to_string()))?;
    Ok(reference)
}

fn model_error(err: ModelError, path: &str) -> XmlError {
    match err {
        ModelError::DuplicateId(id) => XmlError::DuplicateId { id, path: path.to_string() },
        other => XmlError::schema(path, other.to_string()),
    }
}

/// Parses a `<processModel>` document.
pub fn parse_model(input: &[u8]) -> Result<ProcessModel, XmlError> {
    let root = dom::parse_document(input)?;
    expect_root(&root, "processModel")?;
    check_attrs(&root, "/processModel", &["schemaVersion", "metamodel"])?;
    root.no_text("/processModel")?;
    let mut model = ProcessModel::new(parse_metamodel(&root, "/processModel")?);
    for child in &root.children {
        let path = format!("/processModel/{}", child.name);
        match child.name.as_str() {
            "element" => {
                let e = read_element(child, &path)?;
                model.insert_element(e).map_err(|err| model_error(err, &path))?;
            }
            "reference" => {
                let r = read_reference(child, &path)?;
                model.insert_reference(r).map_err(|err| model_error(err, &path))?;
            }
            other => return Err(XmlError::schema(&path, format!("unexpected element <{other}>"))),
        }
    }
    Ok(model)
}

fn write_element(w: &mut XmlWriter, e: &ProcessElement) {
    let attrs = [("id", e.id.as_str()), ("kind", e.kind.as_str()), ("name", e.name.as_str())];
    if e.description.is_empty() && e.attributes.is_empty() && e.text_blocks.is_empty() {
        return w.empty("element", &attrs);
    }
    w.open("element", &attrs);
    if !e.description.is_empty() {
        w.text("description", &[], &e.description);
    }
    for (k, v) in &e.attributes {
        w.text("attribute", &[("key", k)], v);
    }
    for b in &e.text_blocks {
        w.text("textBlock", &[("id", &b.id)], &b.text);
    }
    w.close("element");
}

fn write_reference(w: &mut XmlWriter, r: &Reference) {
    let attrs = [
        ("id", r.id.as_str()),
        ("kind", r.kind.as_str()),
        ("source", r.source.as_str()),
        ("target", r.target.as_str()),
    ];
    if r.attributes.is_empty() {
        return w.empty("reference", &attrs);
    }
    w.open("reference", &attrs);
    for (k, v) in &r.attributes {
        w.text("attribute", &[("key", k)], v);
    }
    w.close("reference");
}

/// Canonical bytes of a process model.
pub fn serialize_model(model: &ProcessModel) -> Vec<u8> {
    let mut w = XmlWriter::new();
    let attrs = [("schemaVersion", SCHEMA_VERSION), ("metamodel", model.metamodel().as_str())];
    if model.element_count() == 0 && model.reference_count() == 0 {
        w.empty("processModel", &attrs);
        return w.finish();
    }
    w.open("processModel", &attrs);
    for e in model.elements() {
        write_element(&mut w, e);
    }
    for r in model.references() {
        write_reference(&mut w, r);
    }
    w.close("processModel");
    w.finish()
}

type SectionHandler<'a> = dyn FnMut(&Node, &str) -> Result<(), XmlError> + 'a;

/// Parses an `<extensionModel>` document.
pub fn parse_extension(input: &[u8]) -> Result<ExtensionModel, XmlError> {
    let root = dom::parse_document(input)?;
    expect_root(&root, "extensionModel")?;
    const ROOT: &str = "/extensionModel";
    check_attrs(&root, ROOT, &["schemaVersion", "id", "parent", "metamodel"])?;
    root.no_text(ROOT)?;
    let parent = match root.attr("parent") {
        Some(p) if !p.is_empty() => p.to_string(),
        _ => return Err(XmlError::MissingParentDeclaration),
    };
    let variant_id = root.require_attr("id", ROOT)?;
    if variant_id.is_empty() {
        return Err(XmlError::schema(ROOT, "empty variant id"));
    }
    let mut ext = ExtensionModel::new(variant_id, parent, parse_metamodel(&root, ROOT)?);
    let mut ids = HashSet::new();
    let mut seen_sections = HashSet::new();
    for section in &root.children {
        let path = format!("{ROOT}/{}", section.name);
        if !seen_sections.insert(section.name.as_str()) {
            return Err(XmlError::schema(&path, "section given twice"));
        }
        check_attrs(section, &path, &[])?;
        section.no_text(&path)?;
        let (expected_child, handler): (&str, &mut SectionHandler) = match section.name.as_str() {
            "newElements" => ("element", &mut |node, p| {
                let e = read_element(node, p)?;
                if !ids.insert(e.id.clone()) {
                    return Err(XmlError::DuplicateId { id: e.id, path: p.to_string() });
                }
                ext.new_elements.push(e);
                Ok(())
            }),
            "newReferences" => ("reference", &mut |node, p| {
                let r = read_reference(node, p)?;
                if !ids.insert(r.id.clone()) {
                    return Err(XmlError::DuplicateId { id: r.id, path: p.to_string() });
                }
                ext.new_references.push(r);
                Ok(())
            }),
            "exclusions" => ("exclude", &mut |node, p| {
                check_attrs(node, p, &["id"])?;
                node.no_children(p)?;
                node.no_text(p)?;
                let id = node.require_attr("id", p)?;
                if id.is_empty() {
                    return Err(XmlError::schema(p, "empty id"));
                }
                ext.exclusions.push(id.to_string());
                Ok(())
            }),
            "operations" => ("exemplar", &mut |node, p| {
                ext.exemplars.push(read_exemplar(node, p)?);
                Ok(())
            }),
            other => return Err(XmlError::schema(&path, format!("unexpected element <{other}>"))),
        };
        for (i, child) in section.children.iter().enumerate() {
            let child_path = format!("{path}/{}[{}]", child.name, i + 1);
            if child.name != expected_child {
                return Err(XmlError::schema(&child_path, format!("expected <{expected_child}>")));
            }
            handler(child, &child_path)?;
        }
    }
    Ok(ext)
}

fn read_exemplar(node: &Node, path: &str) -> Result<OperationExemplar, XmlError> {
    check_attrs(node, path, &["type", "target"])?;
    node.no_text(path)?;
    let type_name = node.require_attr("type", path)?;
    let target = node.require_attr("target", path)?;
    if type_name.is_empty() || target.is_empty() {
        return Err(XmlError::schema(path, "empty type or target"));
    }
    let mut exemplar = OperationExemplar::new(type_name, target);
    for child in &node.children {
        let child_path = format!("{path}/{}", child.name);
        if child.name != "arg" {
            return Err(XmlError::schema(&child_path, format!("unexpected element <{}>", child.name)));
        }
        check_attrs(child, &child_path, &["name"])?;
        child.no_children(&child_path)?;
        let name = child.require_attr("name", &child_path)?;
        if exemplar.args.insert(name.to_string(), child.text.clone()).is_some() {
            return Err(XmlError::schema(&child_path, format!("argument `{name}` given twice")));
        }
    }
    Ok(exemplar)
}

/// Canonical bytes of an extension model.
pub fn serialize_extension(ext: &ExtensionModel) -> Vec<u8> {
    let mut w = XmlWriter::new();
    let attrs = [
        ("schemaVersion", SCHEMA_VERSION),
        ("id", ext.variant_id.as_str()),
        ("parent", ext.parent_id.as_str()),
        ("metamodel", ext.metamodel.as_str()),
    ];
    if ext.new_elements.is_empty()
        && ext.new_references.is_empty()
        && ext.exclusions.is_empty()
        && ext.exemplars.is_empty()
    {
        w.empty("extensionModel", &attrs);
        return w.finish();
    }
    w.open("extensionModel", &attrs);
    if !ext.new_elements.is_empty() {
        w.open("newElements", &[]);
        for e in &ext.new_elements {
            write_element(&mut w, e);
        }
        w.close("newElements");
    }
    if !ext.new_references.is_empty() {
        w.open("newReferences", &[]);
        for r in &ext.new_references {
            write_reference(&mut w, r);
        }
        w.close("newReferences");
    }
    if !ext.exclusions.is_empty() {
        w.open("exclusions", &[]);
        for id in &ext.exclusions {
            w.empty("exclude", &[("id", id)]);
        }
        w.close("exclusions");
    }
    if !ext.exemplars.is_empty() {
        w.open("operations", &[]);
        for ex in &ext.exemplars {
            let attrs = [("type", ex.type_name.as_str()), ("target", ex.target.as_str())];
            if ex.args.is_empty() {
                w.empty("exemplar", &attrs);
                continue;
            }
            w.open("exemplar", &attrs);
            for (name, value) in &ex.args {
                w.text("arg", &[("name", name)], value);
            }
            w.close("exemplar");
        }
        w.close("operations");
    }
    w.close("extensionModel");
    w.finish()
}

/// Parses an `<operationCatalog>` document.
pub fn parse_catalog(input: &[u8]) -> Result<OperationCatalog, XmlError> {
    let root = dom::parse_document(input)?;
    expect_root(&root, "operationCatalog")?;
    const ROOT: &str = "/operationCatalog";
    check_attrs(&root, ROOT, &["schemaVersion"])?;
    root.no_text(ROOT)?;
    let mut catalog = OperationCatalog::new();
    for (i, node) in root.children.iter().enumerate() {
        let path = format!("{ROOT}/{}[{}]", node.name, i + 1);
        if node.name != "operationType" {
            return Err(XmlError::schema(&path, format!("unexpected element <{}>", node.name)));
        }
        let def = read_operation_type(node, &path)?;
        let name = def.name.clone();
        catalog.insert(def).map_err(|err| match err {
            crate::catalog::CatalogError::DuplicateTypeName(name) => {
                XmlError::DuplicateTypeName { name, path: path.clone() }
            }
            other => XmlError::schema(&format!("{ROOT}/operationType[@name='{name}']"), other.to_string()),
        })?;
    }
    Ok(catalog)
}

fn read_operation_type(node: &Node, path: &str) -> Result<OperationTypeDef, XmlError> {
    check_attrs(node, path, &["name", "group", "targetKind", "metamodel", "synthetic", "params"])?;
    node.no_text(path)?;
    let name = node.require_attr("name", path)?;
    let group_raw = node.require_attr("group", path)?;
    let group =
        group_raw.parse().map_err(|_| XmlError::schema(path, format!("unknown operation group `{group_raw}`")))?;
    let target_raw = node.require_attr("targetKind", path)?;
    let target_kind = target_raw
        .parse()
        .map_err(|_| XmlError::UnknownTargetKind { kind: target_raw.to_string(), path: path.to_string() })?;
    let metamodel = parse_metamodel(node, path)?;
    let synthetic = match node.attr("synthetic") {
        None | Some("false") => false,
        Some("true") => true,
        Some(other) => return Err(XmlError::schema(path, format!("synthetic must be true or false, not `{other}`"))),
    };
    let params = node.attr("params").unwrap_or("").split_whitespace().map(str::to_string).collect();
    let mut recipe = Vec::new();
    for (i, step) in node.children.iter().enumerate() {
        let step_path = format!("{path}/{}[{}]", step.name, i + 1);
        if step.name != "step" {
            return Err(XmlError::schema(&step_path, format!("unexpected element <{}>", step.name)));
        }
        step.no_children(&step_path)?;
        step.no_text(&step_path)?;
        let atomic_raw = step.require_attr("atomic", &step_path)?;
        let kind: AtomicKind = atomic_raw
            .parse()
            .map_err(|_| XmlError::UnknownAtomicKind { kind: atomic_raw.to_string(), path: step_path.clone() })?;
        let target = step.attr("target").unwrap_or("$target");
        let mut template = StepTemplate::new(kind, target);
        for (k, v) in &step.attrs {
            if k != "atomic" && k != "target" {
                template.args.insert(k.clone(), v.clone());
            }
        }
        recipe.push(template);
    }
    Ok(OperationTypeDef { name: name.to_string(), group, target_kind, metamodel, params, recipe, synthetic })
}

/// Canonical bytes of a catalog: types in name order.
pub fn serialize_catalog(catalog: &OperationCatalog) -> Vec<u8> {
    let mut w = XmlWriter::new();
    let attrs = [("schemaVersion", SCHEMA_VERSION)];
    if catalog.is_empty() {
        w.empty("operationCatalog", &attrs);
        return w.finish();
    }
    w.open("operationCatalog", &attrs);
    for def in catalog.iter() {
        let target_kind = def.target_kind.to_string();
        let params = def.params.join(" ");
        let mut attrs = vec![
            ("name", def.name.as_str()),
            ("group", def.group.as_str()),
            ("targetKind", target_kind.as_str()),
            ("metamodel", def.metamodel.as_str()),
            ("synthetic", if def.synthetic { "true" } else { "false" }),
        ];
        if !params.is_empty() {
            attrs.push(("params", &params));
        }
        w.open("operationType", &attrs);
        for step in &def.recipe {
            let mut attrs = vec![("atomic", step.kind.as_str()), ("target", step.target.as_str())];
            attrs.extend(step.args.iter().map(|(k, v)| (k.as_str(), v.as_str())));
            w.empty("step", &attrs);
        }
        w.close("operationType");
    }
    w.close("operationCatalog");
    w.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::TARGET_PLACEHOLDER;

    const MINIMAL: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<processModel schemaVersion="1" metamodel="1.3">
  <element id="r1" kind="Role" name="Quality Manager"/>
</processModel>
"#;

    #[test]
    fn minimal_document() {
        let m = parse_model(MINIMAL.as_bytes()).unwrap();
        assert_eq!(m.element_count(), 1);
        assert_eq!(m.resolve("r1").unwrap().kind, ElementKind::Role);
        assert_eq!(serialize_model(&m), MINIMAL.as_bytes());
    }

    #[test]
    fn duplicate_element_ids_are_rejected() {
        let doc = r#"<processModel schemaVersion="1" metamodel="1.3">
  <element id="r1" kind="Role" name="A"/>
  <element id="r1" kind="Role" name="B"/>
</processModel>"#;
        assert!(matches!(parse_model(doc.as_bytes()), Err(XmlError::DuplicateId { id, .. }) if id == "r1"));
    }

    #[test]
    fn malformed_xml_reports_line() {
        let doc = "<processModel schemaVersion=\"1\" metamodel=\"1.3\">\n  <element id=\"r1\" kind=\"Role\" name=\"A\">\n</processModel>";
        match parse_model(doc.as_bytes()) {
            Err(XmlError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn schema_errors_carry_paths() {
        let doc = r#"<processModel schemaVersion="1" metamodel="1.3"><element id="r1" kind="Robot" name="A"/></processModel>"#;
        match parse_model(doc.as_bytes()) {
            Err(XmlError::Schema { path, reason }) => {
                assert_eq!(path, "/processModel/element");
                assert!(reason.contains("Robot"));
            }
            other => panic!("{other:?}"),
        }
        let doc = r#"<processModel schemaVersion="2" metamodel="1.3"/>"#;
        assert!(matches!(parse_model(doc.as_bytes()), Err(XmlError::Schema { .. })));
        let doc = r#"<processModel schemaVersion="1" metamodel="1.4"/>"#;
        assert!(matches!(parse_model(doc.as_bytes()), Err(XmlError::Schema { .. })));
        let doc = r#"<processModel schemaVersion="1" metamodel="1.3"><element id="r1" kind="Role" name="A"><foo/></element></processModel>"#;
        assert!(matches!(parse_model(doc.as_bytes()), Err(XmlError::Schema { .. })));
    }

    #[test]
    fn unknown_attributes_are_preserved() {
        let doc = r#"<processModel schemaVersion="1" metamodel="1.3B">
  <element id="r1" kind="Role" name="A" legacyId="R-17"><attribute key="roleClass">Legacy</attribute></element>
  <reference id="x" kind="MethodLink" source="r1" target="r1" weight="3"/>
</processModel>"#;
        let m = parse_model(doc.as_bytes()).unwrap();
        assert_eq!(m.resolve("r1").unwrap().attributes["legacyId"], "R-17");
        assert_eq!(m.resolve("r1").unwrap().attributes["roleClass"], "Legacy");
        assert_eq!(m.reference("x").unwrap().attributes["weight"], "3");
        let again = parse_model(&serialize_model(&m)).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn text_is_escaped_and_preserved() {
        let e = ProcessElement::new("s1", ElementKind::Section, "A & <B>")
            .with_description("  line one\nline \"two\" & <three>  ")
            .with_attribute("note", "tab\there\nnewline")
            .with_text_block("body", "x < y");
        let m = ProcessModel::new(MetamodelVersion::Mm13).add_element(e).unwrap();
        let bytes = serialize_model(&m);
        assert_eq!(parse_model(&bytes).unwrap(), m);
        assert_eq!(serialize_model(&parse_model(&bytes).unwrap()), bytes);
    }

    #[test]
    fn permuted_input_serializes_identically() {
        let a = r#"<processModel schemaVersion="1" metamodel="1.3">
  <element id="b" kind="Role" name="B"><attribute key="z">1</attribute><attribute key="a">2</attribute></element>
  <element id="a" kind="Role" name="A"/>
</processModel>"#;
        let b = r#"<processModel schemaVersion="1" metamodel="1.3">
  <element id="a" kind="Role" name="A"/>
  <element id="b" kind="Role" name="B"><attribute key="a">2</attribute><attribute key="z">1</attribute></element>
</processModel>"#;
        assert_eq!(
            serialize_model(&parse_model(a.as_bytes()).unwrap()),
            serialize_model(&parse_model(b.as_bytes()).unwrap())
        );
    }

    const EXTENSION: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<extensionModel schemaVersion="1" id="D" parent="reference" metamodel="1.3">
  <newElements>
    <element id="r9" kind="Role" name="Agile Coach"/>
  </newElements>
</extensionModel>
"#;

    #[test]
    fn extension_without_exemplars() {
        let ext = parse_extension(EXTENSION.as_bytes()).unwrap();
        assert_eq!(ext.variant_id, "D");
        assert_eq!(ext.parent_id, "reference");
        assert_eq!(ext.new_elements.len(), 1);
        assert!(ext.exemplars.is_empty());
        assert_eq!(serialize_extension(&ext), EXTENSION.as_bytes());
    }

    #[test]
    fn extension_without_parent() {
        let doc = r#"<extensionModel schemaVersion="1" id="X" metamodel="1.3"/>"#;
        assert_eq!(parse_extension(doc.as_bytes()), Err(XmlError::MissingParentDeclaration));
        let doc = r#"<extensionModel schemaVersion="1" id="X" parent="" metamodel="1.3"/>"#;
        assert_eq!(parse_extension(doc.as_bytes()), Err(XmlError::MissingParentDeclaration));
    }

    #[test]
    fn extension_keeps_document_order() {
        let doc = r#"<extensionModel schemaVersion="1" id="X" parent="reference" metamodel="1.3">
  <operations>
    <exemplar type="RenameRole" target="r2"><arg name="newName">B</arg></exemplar>
    <exemplar type="RenameRole" target="r1"><arg name="newName">A</arg></exemplar>
    <exemplar type="RemoveSupportingRole" target="s1"/>
  </operations>
  <exclusions><exclude id="m2"/><exclude id="m1"/></exclusions>
</extensionModel>"#;
        let ext = parse_extension(doc.as_bytes()).unwrap();
        let targets: Vec<_> = ext.exemplars.iter().map(|e| e.target.as_str()).collect();
        assert_eq!(targets, ["r2", "r1", "s1"]);
        assert_eq!(ext.exclusions, ["m2", "m1"]);
        assert_eq!(parse_extension(&serialize_extension(&ext)).unwrap(), ext);
    }

    #[test]
    fn extension_rejects_duplicate_new_ids_and_bad_sections() {
        let doc = r#"<extensionModel schemaVersion="1" id="X" parent="p" metamodel="1.3">
  <newElements><element id="a" kind="Role" name="A"/></newElements>
  <newReferences><reference id="a" kind="MethodLink" source="a" target="b"/></newReferences>
</extensionModel>"#;
        assert!(matches!(parse_extension(doc.as_bytes()), Err(XmlError::DuplicateId { .. })));
        let doc = r#"<extensionModel schemaVersion="1" id="X" parent="p" metamodel="1.3"><operations><exclude id="a"/></operations></extensionModel>"#;
        assert!(matches!(parse_extension(doc.as_bytes()), Err(XmlError::Schema { .. })));
    }

    #[test]
    fn shipped_catalog_has_69_types() {
        let c = parse_catalog(OperationCatalog::builtin_source().as_bytes()).unwrap();
        assert_eq!(c.len(), 69);
        let again = parse_catalog(&serialize_catalog(&c)).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn catalog_duplicate_type_name() {
        let doc = r#"<operationCatalog schemaVersion="1">
  <operationType name="RenameRole" group="Role Variations" targetKind="Role" metamodel="1.3" params="newName"><step atomic="RenameElement" newName="$newName"/></operationType>
  <operationType name="RenameRole" group="Role Variations" targetKind="Role" metamodel="1.3" params="newName"><step atomic="RenameElement" newName="$newName"/></operationType>
</operationCatalog>"#;
        assert!(
            matches!(parse_catalog(doc.as_bytes()), Err(XmlError::DuplicateTypeName { name, .. }) if name == "RenameRole")
        );
    }

    #[test]
    fn catalog_unknown_atomic_kind() {
        let doc = r#"<operationCatalog schemaVersion="1">
  <operationType name="Beam" group="Role Variations" targetKind="Role" metamodel="1.3"><step atomic="Teleport"/></operationType>
</operationCatalog>"#;
        assert!(
            matches!(parse_catalog(doc.as_bytes()), Err(XmlError::UnknownAtomicKind { kind, .. }) if kind == "Teleport")
        );
    }

    #[test]
    fn catalog_unknown_target_kind_and_bad_recipe() {
        let doc = r#"<operationCatalog schemaVersion="1">
  <operationType name="RenameRobot" group="Role Variations" targetKind="Robot" metamodel="1.3" params="newName"><step atomic="RenameElement" newName="$newName"/></operationType>
</operationCatalog>"#;
        assert!(matches!(parse_catalog(doc.as_bytes()), Err(XmlError::UnknownTargetKind { .. })));
        let doc = r#"<operationCatalog schemaVersion="1">
  <operationType name="RenameRole" group="Role Variations" targetKind="Role" metamodel="1.3"><step atomic="RenameElement" newName="$newName"/></operationType>
</operationCatalog>"#;
        assert!(matches!(parse_catalog(doc.as_bytes()), Err(XmlError::Schema { .. })));
    }

    #[test]
    fn step_target_defaults_to_exemplar_target() {
        let doc = r#"<operationCatalog schemaVersion="1">
  <operationType name="RenameRole" group="Role Variations" targetKind="Role" metamodel="1.3" params="newName"><step atomic="RenameElement" newName="$newName"/></operationType>
</operationCatalog>"#;
        let c = parse_catalog(doc.as_bytes()).unwrap();
        assert_eq!(c.lookup("RenameRole").unwrap().recipe[0].target, format!("${TARGET_PLACEHOLDER}"));
    }
}
