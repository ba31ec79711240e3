use std::collections::{BTreeMap, BTreeSet};

use super::{
    ElementKind, MetamodelVersion, ModelError, ProcessElement, ProcessModel, Reference, ReferenceKind, TextBlock,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementChange {
    Name {
        before: String,
        after: String,
    },
    Kind {
        before: ElementKind,
        after: ElementKind,
    },
    Description {
        before: String,
        after: String,
    },
    Attribute {
        key: String,
        before: Option<String>,
        after: Option<String>,
    },
    /// Text of one block changed; block order and ids are unchanged.
    TextBlock {
        block: String,
        before: String,
        after: String,
    },
    /// Block ids or order changed; the whole list is replaced.
    TextBlocks {
        before: Vec<TextBlock>,
        after: Vec<TextBlock>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementModification {
    pub id: String,
    pub changes: Vec<ElementChange>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReferenceChange {
    Kind { before: ReferenceKind, after: ReferenceKind },
    Source { before: String, after: String },
    Target { before: String, after: String },
    Attribute { key: String, before: Option<String>, after: Option<String> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceModification {
    pub id: String,
    pub changes: Vec<ReferenceChange>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MetamodelChange {
    pub before: MetamodelVersion,
    pub after: MetamodelVersion,
}

/// Field-level difference between two models. All lists are in id order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChangeSet {
    pub metamodel: Option<MetamodelChange>,
    pub added_elements: Vec<ProcessElement>,
    pub removed_elements: Vec<ProcessElement>,
    pub modified_elements: Vec<ElementModification>,
    pub added_references: Vec<Reference>,
    pub removed_references: Vec<Reference>,
    pub modified_references: Vec<ReferenceModification>,
}

impl ChangeSet {
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of touched items (elements, references, metamodel tag).
    pub fn len(&self) -> usize {
        usize::from(self.metamodel.is_some())
            + self.added_elements.len()
            + self.removed_elements.len()
            + self.modified_elements.len()
            + self.added_references.len()
            + self.removed_references.len()
            + self.modified_references.len()
    }

    /// Ids of every element and reference this change set touches.
    pub fn touched_ids(&self) -> BTreeSet<&str> {
        let mut ids = BTreeSet::new();
        ids.extend(self.added_elements.iter().map(|e| e.id.as_str()));
        ids.extend(self.removed_elements.iter().map(|e| e.id.as_str()));
        ids.extend(self.modified_elements.iter().map(|m| m.id.as_str()));
        ids.extend(self.added_references.iter().map(|r| r.id.as_str()));
        ids.extend(self.removed_references.iter().map(|r| r.id.as_str()));
        ids.extend(self.modified_references.iter().map(|m| m.id.as_str()));
        ids
    }

    /// Applies the change set, checking every recorded `before` value.
    pub fn apply(&self, model: &ProcessModel) -> Result<ProcessModel, ModelError> {
        let mut out = model.clone();
        self.apply_in_place(&mut out)?;
        Ok(out)
    }

    pub(crate) fn apply_in_place(&self, model: &mut ProcessModel) -> Result<(), ModelError> {
        if let Some(change) = self.metamodel {
            if model.metamodel != change.before {
                return Err(mismatch(format!("metamodel is {}, expected {}", model.metamodel, change.before)));
            }
            model.metamodel = change.after;
        }
        for r in &self.removed_references {
            match model.references.remove(&r.id) {
                Some(found) if found == *r => {}
                Some(_) => return Err(mismatch(format!("reference `{}` differs from recorded value", r.id))),
                None => return Err(ModelError::UnknownId(r.id.clone())),
            }
        }
        for e in &self.removed_elements {
            match model.elements.remove(&e.id) {
                Some(found) if found == *e => {}
                Some(_) => return Err(mismatch(format!("element `{}` differs from recorded value", e.id))),
                None => return Err(ModelError::UnknownId(e.id.clone())),
            }
        }
        for e in &self.added_elements {
            model.insert_element(e.clone())?;
        }
        for r in &self.added_references {
            model.insert_reference(r.clone())?;
        }
        for m in &self.modified_elements {
            let element = model.elements.get_mut(&m.id).ok_or_else(|| ModelError::UnknownId(m.id.clone()))?;
            for change in &m.changes {
                apply_element_change(element, change)?;
            }
        }
        for m in &self.modified_references {
            let reference = model.references.get_mut(&m.id).ok_or_else(|| ModelError::UnknownId(m.id.clone()))?;
            for change in &m.changes {
                apply_reference_change(reference, change)?;
            }
        }
        Ok(())
    }

    pub(crate) fn element_modified(id: &str, changes: Vec<ElementChange>) -> Self {
        ChangeSet {
            modified_elements: vec![ElementModification { id: id.to_string(), changes }],
            ..ChangeSet::default()
        }
    }

    pub(crate) fn reference_modified(id: &str, changes: Vec<ReferenceChange>) -> Self {
        ChangeSet {
            modified_references: vec![ReferenceModification { id: id.to_string(), changes }],
            ..ChangeSet::default()
        }
    }
}

fn mismatch(msg: String) -> ModelError {
    ModelError::ChangeMismatch(msg)
}

fn check<T: PartialEq + std::fmt::Debug>(what: &str, found: &T, expected: &T) -> Result<(), ModelError> {
    if found == expected {
        Ok(())
    } else {
        Err(mismatch(format!("{what} is {found:?}, expected {expected:?}")))
    }
}

fn apply_attribute(
    attributes: &mut BTreeMap<String, String>,
    key: &str,
    before: &Option<String>,
    after: &Option<String>,
) -> Result<(), ModelError> {
    check(&format!("attribute `{key}`"), &attributes.get(key).cloned(), before)?;
    match after {
        Some(v) => attributes.insert(key.to_string(), v.clone()),
        None => attributes.remove(key),
    };
    Ok(())
}

fn apply_element_change(element: &mut ProcessElement, change: &ElementChange) -> Result<(), ModelError> {
    match change {
        ElementChange::Name { before, after } => {
            check("name", &element.name, before)?;
            element.name = after.clone();
        }
        ElementChange::Kind { before, after } => {
            check("kind", &element.kind, before)?;
            element.kind = *after;
        }
        ElementChange::Description { before, after } => {
            check("description", &element.description, before)?;
            element.description = after.clone();
        }
        ElementChange::Attribute { key, before, after } => {
            apply_attribute(&mut element.attributes, key, before, after)?;
        }
        ElementChange::TextBlock { block, before, after } => {
            let id = element.id.clone();
            let b = element
                .text_block_mut(block)
                .ok_or_else(|| mismatch(format!("element `{id}` has no text block `{block}`")))?;
            check("text block", &b.text, before)?;
            b.text = after.clone();
        }
        ElementChange::TextBlocks { before, after } => {
            check("text blocks", &element.text_blocks, before)?;
            element.text_blocks = after.clone();
        }
    }
    Ok(())
}

fn apply_reference_change(reference: &mut Reference, change: &ReferenceChange) -> Result<(), ModelError> {
    match change {
        ReferenceChange::Kind { before, after } => {
            check("kind", &reference.kind, before)?;
            reference.kind = *after;
        }
        ReferenceChange::Source { before, after } => {
            check("source", &reference.source, before)?;
            reference.source = after.clone();
        }
        ReferenceChange::Target { before, after } => {
            check("target", &reference.target, before)?;
            reference.target = after.clone();
        }
        ReferenceChange::Attribute { key, before, after } => {
            apply_attribute(&mut reference.attributes, key, before, after)?;
        }
    }
    Ok(())
}

fn diff_attributes(
    a: &BTreeMap<String, String>,
    b: &BTreeMap<String, String>,
) -> Vec<(String, Option<String>, Option<String>)> {
    let keys: BTreeSet<&String> = a.keys().chain(b.keys()).collect();
    keys.into_iter()
        .filter_map(|k| {
            let before = a.get(k).cloned();
            let after = b.get(k).cloned();
            (before != after).then(|| (k.clone(), before, after))
        })
        .collect()
}

fn diff_elements(a: &ProcessElement, b: &ProcessElement) -> Vec<ElementChange> {
    let mut changes = Vec::new();
    if a.kind != b.kind {
        changes.push(ElementChange::Kind { before: a.kind, after: b.kind });
    }
    if a.name != b.name {
        changes.push(ElementChange::Name { before: a.name.clone(), after: b.name.clone() });
    }
    if a.description != b.description {
        changes.push(ElementChange::Description { before: a.description.clone(), after: b.description.clone() });
    }
    for (key, before, after) in diff_attributes(&a.attributes, &b.attributes) {
        changes.push(ElementChange::Attribute { key, before, after });
    }
    let same_layout = a.text_blocks.len() == b.text_blocks.len()
        && a.text_blocks.iter().zip(&b.text_blocks).all(|(x, y)| x.id == y.id);
    if same_layout {
        for (x, y) in a.text_blocks.iter().zip(&b.text_blocks) {
            if x.text != y.text {
                changes.push(ElementChange::TextBlock {
                    block: x.id.clone(),
                    before: x.text.clone(),
                    after: y.text.clone(),
                });
            }
        }
    } else {
        changes.push(ElementChange::TextBlocks { before: a.text_blocks.clone(), after: b.text_blocks.clone() });
    }
    changes
}

fn diff_references(a: &Reference, b: &Reference) -> Vec<ReferenceChange> {
    let mut changes = Vec::new();
    if a.kind != b.kind {
        changes.push(ReferenceChange::Kind { before: a.kind, after: b.kind });
    }
    if a.source != b.source {
        changes.push(ReferenceChange::Source { before: a.source.clone(), after: b.source.clone() });
    }
    if a.target != b.target {
        changes.push(ReferenceChange::Target { before: a.target.clone(), after: b.target.clone() });
    }
    for (key, before, after) in diff_attributes(&a.attributes, &b.attributes) {
        changes.push(ReferenceChange::Attribute { key, before, after });
    }
    changes
}

/// Computes the minimal field-level change set turning `a` into `b`.
pub fn compare_models(a: &ProcessModel, b: &ProcessModel) -> ChangeSet {
    let mut cs = ChangeSet::default();
    if a.metamodel != b.metamodel {
        cs.metamodel = Some(MetamodelChange { before: a.metamodel, after: b.metamodel });
    }
    for (id, ea) in &a.elements {
        match b.elements.get(id) {
            None => cs.removed_elements.push(ea.clone()),
            Some(eb) => {
                let changes = diff_elements(ea, eb);
                if !changes.is_empty() {
                    cs.modified_elements.push(ElementModification { id: id.clone(), changes });
                }
            }
        }
    }
    cs.added_elements =
        b.elements.iter().filter(|(id, _)| !a.elements.contains_key(*id)).map(|(_, e)| e.clone()).collect();
    for (id, ra) in &a.references {
        match b.references.get(id) {
            None => cs.removed_references.push(ra.clone()),
            Some(rb) => {
                let changes = diff_references(ra, rb);
                if !changes.is_empty() {
                    cs.modified_references.push(ReferenceModification { id: id.clone(), changes });
                }
            }
        }
    }
    cs.added_references =
        b.references.iter().filter(|(id, _)| !a.references.contains_key(*id)).map(|(_, r)| r.clone()).collect();
    cs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ElementKind;
    use proptest::prelude::*;

    fn base() -> ProcessModel {
        ProcessModel::builder(MetamodelVersion::Mm13)
            .element(ProcessElement::new("r1", ElementKind::Role, "Quality Manager"))
            .element(ProcessElement::new("w1", ElementKind::WorkProduct, "Plan"))
            .reference(Reference::new("resp1", ReferenceKind::Responsibility, "w1", "r1"))
            .build()
            .unwrap()
    }

    #[test]
    fn identical_models_have_empty_diff() {
        let m = base();
        assert!(compare_models(&m, &m).is_empty());
    }

    #[test]
    fn rename_is_one_field_change() {
        let a = base();
        let mut b = a.clone();
        b.element_mut("r1").unwrap().name = "QA Lead".into();
        let cs = compare_models(&a, &b);
        assert_eq!(cs.len(), 1);
        assert_eq!(
            cs.modified_elements[0].changes,
            vec![ElementChange::Name { before: "Quality Manager".into(), after: "QA Lead".into() }]
        );
        assert_eq!(cs.apply(&a).unwrap(), b);
    }

    #[test]
    fn apply_refuses_stale_before_values() {
        let a = base();
        let mut b = a.clone();
        b.element_mut("r1").unwrap().name = "QA Lead".into();
        let cs = compare_models(&a, &b);
        assert!(matches!(cs.apply(&b), Err(ModelError::ChangeMismatch(_))));
    }

    fn arb_kind() -> impl Strategy<Value = ElementKind> {
        prop::sample::select(ElementKind::ALL.to_vec())
    }

    fn arb_element(id: String) -> impl Strategy<Value = ProcessElement> {
        (
            arb_kind(),
            "[a-c]{1,3}",
            "[a-c ]{0,4}",
            prop::collection::btree_map("[k-m]", "[0-9]{1,2}", 0..3),
            prop::collection::vec(("[x-z]", "[a-b]{0,3}"), 0..3),
        )
            .prop_map(move |(kind, name, description, attributes, blocks)| {
                let mut e = ProcessElement::new(id.clone(), kind, name).with_description(description);
                e.attributes = attributes;
                for (bid, text) in blocks {
                    if e.text_block(&bid).is_none() {
                        e.text_blocks.push(TextBlock::new(bid, text));
                    }
                }
                e
            })
    }

    fn arb_model() -> impl Strategy<Value = ProcessModel> {
        let ids = prop::collection::btree_set(0u32..60, 0..50);
        (ids, prop::sample::select(MetamodelVersion::ALL.to_vec()))
            .prop_flat_map(|(ids, mm)| {
                let elems: Vec<_> = ids.iter().map(|i| arb_element(format!("e{i}"))).collect();
                let id_list: Vec<String> = ids.iter().map(|i| format!("e{i}")).collect();
                let refs = prop::collection::vec(
                    (0u32..30, prop::sample::select(ReferenceKind::ALL.to_vec()), 0usize..100, 0usize..100),
                    0..20,
                );
                (elems, refs, Just(id_list), Just(mm))
            })
            .prop_map(|(elems, refs, ids, mm)| {
                let mut m = ProcessModel::new(mm);
                for e in elems {
                    m.insert_element(e).unwrap();
                }
                if !ids.is_empty() {
                    for (rid, kind, s, t) in refs {
                        let r = Reference::new(
                            format!("ref{rid}"),
                            kind,
                            ids[s % ids.len()].clone(),
                            ids[t % ids.len()].clone(),
                        );
                        let _ = m.insert_reference(r);
                    }
                }
                m
            })
    }

    proptest! {
        #[test]
        fn compare_then_apply_round_trips(a in arb_model(), b in arb_model()) {
            let cs = compare_models(&a, &b);
            prop_assert_eq!(cs.apply(&a).unwrap(), b.clone());
            prop_assert!(compare_models(&b, &b).is_empty());
        }
    }
}
