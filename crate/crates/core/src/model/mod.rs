//! In-memory process models.
//!
//! A [`ProcessModel`] is two overlaid id-indexed collections: the structure
//! model ([`ProcessElement`]s) and the dependency model ([`Reference`]s).
//! Element and reference ids share one namespace, so an operation target id
//! is never ambiguous.
//!
//! Models are values. The public operations take `&self` and return a new
//! model; nothing mutates a model another caller can observe.

mod diff;
mod kinds;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::issue::{Endpoint, Issue};

pub use diff::{
    compare_models, ChangeSet, ElementChange, ElementModification, MetamodelChange, ReferenceChange,
    ReferenceModification,
};
pub use kinds::{ElementKind, MetamodelVersion, ReferenceKind, UnknownName};

/// Attribute key holding the dotted ordering number of chapters, sections,
/// disciplines and other ordered elements.
pub const ORDERING_NUMBER: &str = "orderingNumber";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown id `{0}`")]
    UnknownId(String),
    #[error("empty id")]
    EmptyId,
    #[error("element `{0}` has an empty name")]
    EmptyName(String),
    #[error("element `{id}` has duplicate text block `{block}`")]
    DuplicateTextBlock { id: String, block: String },
    #[error("change set does not apply: {0}")]
    ChangeMismatch(String),
}

/// A block of body text inside a chapter, section or similar element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TextBlock {
    pub id: String,
    pub text: String,
}

impl TextBlock {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self { id: id.into(), text: text.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcessElement {
    pub id: String,
    pub kind: ElementKind,
    pub name: String,
    pub description: String,
    pub attributes: BTreeMap<String, String>,
    pub text_blocks: Vec<TextBlock>,
}

impl ProcessElement {
    pub fn new(id: impl Into<String>, kind: ElementKind, name: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            kind,
            name: name.into(),
            description: String::new(),
            attributes: BTreeMap::new(),
            text_blocks: Vec::new(),
        }
    }

    pub fn with_description(mut self, description: impl Into<String>) -> Self {
        self.description = description.into();
        self
    }

    pub fn with_attribute(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.attributes.insert(key.into(), value.into());
        self
    }

    pub fn with_text_block(mut self, id: impl Into<String>, text: impl Into<String>) -> Self {
        self.text_blocks.push(TextBlock::new(id, text));
        self
    }

    pub fn text_block(&self, id: &str) -> Option<&TextBlock> {
        self.text_blocks.iter().find(|b| b.id == id)
    }

    pub(crate) fn text_block_mut(&mut self, id: &str) -> Option<&mut TextBlock> {
        self.text_blocks.iter_mut().find(|b| b.id == id)
    }

    pub fn ordering_number(&self) -> Option<&str> {
        self.attributes.get(ORDERING_NUMBER).map(String::as_str)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.id.is_empty() {
            return Err(ModelError::EmptyId);
        }
        if self.name.is_empty() {
            return Err(ModelError::EmptyName(self.id.clone()));
        }
        for (i, block) in self.text_blocks.iter().enumerate() {
            if block.id.is_empty() {
                return Err(ModelError::EmptyId);
            }
            if self.text_blocks[..i].iter().any(|b| b.id == block.id) {
                return Err(ModelError::DuplicateTextBlock { id: self.id.clone(), block: block.id.clone() });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reference {
    pub id: String,
    pub kind: ReferenceKind,
    pub source: String,
    pub target: String,
    pub attributes: BTreeMap<String, String>,
}

impl Reference {
    pub fn new(
        id: impl Into<String>,
        kind: ReferenceKind,
        source: impl Into<String>,
        target: impl Into<String>,
    ) -> Self {
        Self { id: id.into(), kind, source: source.into(), target: target.into(), attributes: BTreeMap::new() }
    }

    pub fn with_attribute(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.attributes.insert(key.into(), value.into());
        self
    }

    pub fn touches(&self, id: &str) -> bool {
        self.source == id || self.target == id
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.id.is_empty() || self.source.is_empty() || self.target.is_empty() {
            return Err(ModelError::EmptyId);
        }
        Ok(())
    }
}

/// Parses a dotted ordering number ("3", "2.10.1") into comparable components.
pub fn parse_ordering_number(s: &str) -> Option<Vec<u64>> {
    if s.is_empty() {
        return None;
    }
    s.split('.').map(|part| part.parse::<u64>().ok()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcessModel {
    metamodel: MetamodelVersion,
    elements: BTreeMap<String, ProcessElement>,
    references: BTreeMap<String, Reference>,
}

impl ProcessModel {
    pub fn new(metamodel: MetamodelVersion) -> Self {
        Self { metamodel, elements: BTreeMap::new(), references: BTreeMap::new() }
    }

    pub fn builder(metamodel: MetamodelVersion) -> ProcessModelBuilder {
        ProcessModelBuilder { model: ProcessModel::new(metamodel), error: None }
    }

    pub fn metamodel(&self) -> MetamodelVersion {
        self.metamodel
    }

    /// Elements in id order.
    pub fn elements(&self) -> impl Iterator<Item = &ProcessElement> + '_ {
        self.elements.values()
    }

    /// References in id order.
    pub fn references(&self) -> impl Iterator<Item = &Reference> + '_ {
        self.references.values()
    }

    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    pub fn reference_count(&self) -> usize {
        self.references.len()
    }

    pub fn element(&self, id: &str) -> Option<&ProcessElement> {
        self.elements.get(id)
    }

    pub fn reference(&self, id: &str) -> Option<&Reference> {
        self.references.get(id)
    }

    pub fn contains_id(&self, id: &str) -> bool {
        self.elements.contains_key(id) || self.references.contains_key(id)
    }

    /// Looks up an element by id.
    pub fn resolve(&self, id: &str) -> Result<&ProcessElement, ModelError> {
        self.elements.get(id).ok_or_else(|| ModelError::UnknownId(id.to_string()))
    }

    /// References whose source or target is `id`, in reference id order.
    pub fn incident_references<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Reference> + 'a {
        self.references.values().filter(move |r| r.touches(id))
    }

    /// Elements of one kind in document order: ascending ordering number,
    /// unnumbered elements last, ties broken by id.
    pub fn ordered(&self, kind: ElementKind) -> Vec<&ProcessElement> {
        let mut out: Vec<_> = self.elements.values().filter(|e| e.kind == kind).collect();
        out.sort_by_cached_key(|e| {
            let key = e.ordering_number().and_then(parse_ordering_number);
            (key.is_none(), key, e.id.clone())
        });
        out
    }

    pub fn with_metamodel(&self, metamodel: MetamodelVersion) -> Self {
        let mut out = self.clone();
        out.metamodel = metamodel;
        out
    }

    pub fn add_element(&self, element: ProcessElement) -> Result<Self, ModelError> {
        let mut out = self.clone();
        out.insert_element(element)?;
        Ok(out)
    }

    pub fn add_reference(&self, reference: Reference) -> Result<Self, ModelError> {
        let mut out = self.clone();
        out.insert_reference(reference)?;
        Ok(out)
    }

    /// Removes an element together with every reference incident to it.
    /// Returns the new model and the cascaded references.
    pub fn remove_element(&self, id: &str) -> Result<(Self, Vec<Reference>), ModelError> {
        let mut out = self.clone();
        let (_, cascade) = out.take_element(id)?;
        Ok((out, cascade))
    }

    pub fn remove_reference(&self, id: &str) -> Result<Self, ModelError> {
        let mut out = self.clone();
        out.take_reference(id)?;
        Ok(out)
    }

    /// Reports dangling endpoints, kind-constraint violations and ids used by
    /// both an element and a reference. Empty iff the model is consistent.
    pub fn check_consistency(&self) -> Vec<Issue> {
        let mut issues = Vec::new();
        for id in self.references.keys() {
            if self.elements.contains_key(id) {
                issues.push(Issue::DuplicateId { id: id.clone() });
            }
        }
        for r in self.references.values() {
            let source = self.elements.get(&r.source);
            let target = self.elements.get(&r.target);
            if source.is_none() {
                issues.push(Issue::DanglingReference {
                    reference: r.id.clone(),
                    endpoint: Endpoint::Source,
                    id: r.source.clone(),
                });
            }
            if target.is_none() {
                issues.push(Issue::DanglingReference {
                    reference: r.id.clone(),
                    endpoint: Endpoint::Target,
                    id: r.target.clone(),
                });
            }
            if let (Some(s), Some(t)) = (source, target) {
                if !r.kind.admits(s.kind, t.kind) {
                    issues.push(Issue::KindConstraintViolation {
                        reference: r.id.clone(),
                        kind: r.kind,
                        source: s.kind,
                        target: t.kind,
                    });
                }
            }
        }
        issues
    }

    pub fn is_consistent(&self) -> bool {
        self.check_consistency().is_empty()
    }

    pub(crate) fn set_metamodel(&mut self, metamodel: MetamodelVersion) {
        self.metamodel = metamodel;
    }

    pub(crate) fn insert_element(&mut self, element: ProcessElement) -> Result<(), ModelError> {
        element.validate()?;
        if self.contains_id(&element.id) {
            return Err(ModelError::DuplicateId(element.id));
        }
        self.elements.insert(element.id.clone(), element);
        Ok(())
    }

    pub(crate) fn insert_reference(&mut self, reference: Reference) -> Result<(), ModelError> {
        reference.validate()?;
        if self.contains_id(&reference.id) {
            return Err(ModelError::DuplicateId(reference.id));
        }
        self.references.insert(reference.id.clone(), reference);
        Ok(())
    }

    pub(crate) fn take_element(&mut self, id: &str) -> Result<(ProcessElement, Vec<Reference>), ModelError> {
        let element = self.elements.remove(id).ok_or_else(|| ModelError::UnknownId(id.to_string()))?;
        let incident: Vec<String> = self.references.values().filter(|r| r.touches(id)).map(|r| r.id.clone()).collect();
        let cascade = incident.iter().filter_map(|rid| self.references.remove(rid)).collect();
        Ok((element, cascade))
    }

    pub(crate) fn take_reference(&mut self, id: &str) -> Result<Reference, ModelError> {
        self.references.remove(id).ok_or_else(|| ModelError::UnknownId(id.to_string()))
    }

    pub(crate) fn element_mut(&mut self, id: &str) -> Option<&mut ProcessElement> {
        self.elements.get_mut(id)
    }

    pub(crate) fn reference_mut(&mut self, id: &str) -> Option<&mut Reference> {
        self.references.get_mut(id)
    }
}

/// Accumulates elements and references; the first id clash is reported by
/// [`ProcessModelBuilder::build`].
#[derive(Debug)]
pub struct ProcessModelBuilder {
    model: ProcessModel,
    error: Option<ModelError>,
}

impl ProcessModelBuilder {
    pub fn element(mut self, element: ProcessElement) -> Self {
        if self.error.is_none() {
            if let Err(e) = self.model.insert_element(element) {
                self.error = Some(e);
            }
        }
        self
    }

    pub fn reference(mut self, reference: Reference) -> Self {
        if self.error.is_none() {
            if let Err(e) = self.model.insert_reference(reference) {
                self.error = Some(e);
            }
        }
        self
    }

    pub fn build(self) -> Result<ProcessModel, ModelError> {
        match self.error {
            Some(e) => Err(e),
            None => Ok(self.model),
        }
    }
}
