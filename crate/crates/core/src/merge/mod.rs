//! Variant derivation: ancestor chains, the three-phase merge and masking.
//!
//! One merge step integrates an extension's new assets, deletes its
//! exclusions (removing incident references along the way) and then runs its
//! operation exemplars in document order. A chain is merged root first.
//! Inputs are never modified; every change lands in a [`MergeTrace`].

mod trace;

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::atomic;
use crate::catalog::{expand_exemplar, validate_exemplar, OperationCatalog, OperationExemplar};
use crate::model::{ChangeSet, MetamodelChange, MetamodelVersion, ModelError, ProcessElement, ProcessModel, Reference};
use crate::Issue;

pub use trace::{MergeTrace, TraceEntry, TraceEvent};

/// Id under which the reference model is known to extensions.
pub const DEFAULT_ROOT_ID: &str = "reference";

/// A variant's declaration relative to its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionModel {
    pub variant_id: String,
    pub parent_id: String,
    pub metamodel: MetamodelVersion,
    pub new_elements: Vec<ProcessElement>,
    pub new_references: Vec<Reference>,
    pub exclusions: Vec<String>,
    pub exemplars: Vec<OperationExemplar>,
}

impl ExtensionModel {
    pub fn new(variant_id: impl Into<String>, parent_id: impl Into<String>, metamodel: MetamodelVersion) -> Self {
        Self {
            variant_id: variant_id.into(),
            parent_id: parent_id.into(),
            metamodel,
            new_elements: Vec::new(),
            new_references: Vec::new(),
            exclusions: Vec::new(),
            exemplars: Vec::new(),
        }
    }

    pub fn with_element(mut self, element: ProcessElement) -> Self {
        self.new_elements.push(element);
        self
    }

    pub fn with_reference(mut self, reference: Reference) -> Self {
        self.new_references.push(reference);
        self
    }

    pub fn with_exclusion(mut self, id: impl Into<String>) -> Self {
        self.exclusions.push(id.into());
        self
    }

    pub fn with_exemplar(mut self, exemplar: OperationExemplar) -> Self {
        self.exemplars.push(exemplar);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.new_elements.is_empty()
            && self.new_references.is_empty()
            && self.exclusions.is_empty()
            && self.exemplars.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MergeError {
    #[error("unknown variant `{0}`")]
    UnknownVariant(String),
    #[error("variant `{0}` is defined twice")]
    DuplicateVariant(String),
    #[error("parent links form a cycle: {}", path.join(" -> "))]
    CycleDetected { path: Vec<String> },
    #[error("variant `{variant}` points to unknown parent `{parent}`")]
    MissingParent { variant: String, parent: String },
    #[error("variant `{variant_id}` failed validation ({} issue(s))", issues.len())]
    ValidationFailed { variant_id: String, issues: Vec<Issue> },
    #[error("variant `{variant_id}`: {first} and {second} both replace {field} of `{target}`")]
    Conflict { variant_id: String, target: String, field: String, first: String, second: String },
}

impl MergeError {
    /// Issues carried by a validation failure; empty for other errors.
    pub fn issues(&self) -> &[Issue] {
        match self {
            MergeError::ValidationFailed { issues, .. } => issues,
            _ => &[],
        }
    }
}

/// A reference model together with the extensions derived from it.
/// Extensions keep their insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariantSet {
    root_id: String,
    root: ProcessModel,
    extensions: Vec<ExtensionModel>,
    index: HashMap<String, usize>,
}

impl VariantSet {
    pub fn new(root: ProcessModel) -> Self {
        Self::with_root_id(DEFAULT_ROOT_ID, root)
    }

    pub fn with_root_id(root_id: impl Into<String>, root: ProcessModel) -> Self {
        Self { root_id: root_id.into(), root, extensions: Vec::new(), index: HashMap::new() }
    }

    pub fn insert(&mut self, ext: ExtensionModel) -> Result<(), MergeError> {
        if ext.variant_id == self.root_id || self.index.contains_key(&ext.variant_id) {
            return Err(MergeError::DuplicateVariant(ext.variant_id));
        }
        self.index.insert(ext.variant_id.clone(), self.extensions.len());
        self.extensions.push(ext);
        Ok(())
    }

    pub fn with_extension(mut self, ext: ExtensionModel) -> Result<Self, MergeError> {
        self.insert(ext)?;
        Ok(self)
    }

    pub fn root_id(&self) -> &str {
        &self.root_id
    }

    pub fn root(&self) -> &ProcessModel {
        &self.root
    }

    pub fn get(&self, variant_id: &str) -> Option<&ExtensionModel> {
        self.index.get(variant_id).map(|&i| &self.extensions[i])
    }

    pub fn extensions(&self) -> &[ExtensionModel] {
        &self.extensions
    }

    pub fn variant_ids(&self) -> impl Iterator<Item = &str> + '_ {
        self.extensions.iter().map(|e| e.variant_id.as_str())
    }

    pub fn len(&self) -> usize {
        self.extensions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.extensions.is_empty()
    }

    /// Direct children of `id` (the root id or a variant id).
    pub fn children<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a ExtensionModel> + 'a {
        self.extensions.iter().filter(move |e| e.parent_id == id)
    }

    /// Number of extensions between the root and `variant_id`, inclusive.
    pub fn depth(&self, variant_id: &str) -> Result<usize, MergeError> {
        resolve_chain(self, variant_id).map(|c| c.len())
    }

    /// Checks that every variant reaches the root without a cycle.
    pub fn check_tree(&self) -> Result<(), MergeError> {
        self.extensions.iter().try_for_each(|e| resolve_chain(self, &e.variant_id).map(drop))
    }
}

/// Ancestors of `leaf_id` followed by the leaf itself; empty for the root id.
pub fn resolve_chain<'a>(set: &'a VariantSet, leaf_id: &str) -> Result<Vec<&'a ExtensionModel>, MergeError> {
    if leaf_id == set.root_id {
        return Ok(Vec::new());
    }
    let mut current = set.get(leaf_id).ok_or_else(|| MergeError::UnknownVariant(leaf_id.to_string()))?;
    let mut chain = vec![current];
    let mut seen = HashSet::from([current.variant_id.as_str()]);
    while current.parent_id != set.root_id {
        let parent = set.get(&current.parent_id).ok_or_else(|| MergeError::MissingParent {
            variant: current.variant_id.clone(),
            parent: current.parent_id.clone(),
        })?;
        if !seen.insert(parent.variant_id.as_str()) {
            let mut path: Vec<String> = chain.iter().rev().map(|e| e.variant_id.clone()).collect();
            path.push(parent.variant_id.clone());
            return Err(MergeError::CycleDetected { path });
        }
        chain.push(parent);
        current = parent;
    }
    chain.reverse();
    Ok(chain)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MergeOptions {
    /// Lets a later text replacement override an earlier one on the same
    /// field, recording a [`TraceEvent::ConflictWarning`] instead of failing.
    pub last_wins: bool,
}

fn failed(ext: &ExtensionModel, issues: Vec<Issue>) -> MergeError {
    MergeError::ValidationFailed { variant_id: ext.variant_id.clone(), issues }
}

/// Merges one extension into `base`.
pub fn merge_once(
    base: &ProcessModel,
    ext: &ExtensionModel,
    catalog: &OperationCatalog,
    options: MergeOptions,
) -> Result<(ProcessModel, MergeTrace), MergeError> {
    let mut model = base.clone();
    let mut trace = MergeTrace::new();
    integrate(&mut model, ext, &mut trace)?;
    exclude(&mut model, ext, &mut trace)?;
    operate(&mut model, ext, catalog, options, &mut trace)?;
    let issues = model.check_consistency();
    if !issues.is_empty() {
        return Err(failed(ext, issues));
    }
    Ok((model, trace))
}

/// Merges the whole ancestor chain of `leaf_id` onto the root model.
pub fn merge_chain(
    set: &VariantSet,
    leaf_id: &str,
    catalog: &OperationCatalog,
    options: MergeOptions,
) -> Result<(ProcessModel, MergeTrace), MergeError> {
    let chain = resolve_chain(set, leaf_id)?;
    let mut model = set.root.clone();
    let mut trace = MergeTrace::new();
    for ext in chain {
        let (next, t) = merge_once(&model, ext, catalog, options)?;
        model = next;
        trace.extend(t);
    }
    Ok((model, trace))
}

/// Merges every variant of the set, in parallel across variants.
pub fn merge_all(
    set: &VariantSet,
    catalog: &OperationCatalog,
    options: MergeOptions,
) -> BTreeMap<String, Result<(ProcessModel, MergeTrace), MergeError>> {
    let ids: Vec<&str> = set.variant_ids().collect();
    if ids.is_empty() {
        return BTreeMap::new();
    }
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(ids.len());
    let chunk = ids.len().div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = ids
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter().map(|id| (id.to_string(), merge_chain(set, id, catalog, options))).collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("merge worker panicked")).collect()
    })
}

/// Exclusion plus substitution of configuration containers, traced as
/// untyped changes.
pub fn apply_masking(
    base: &ProcessModel,
    variant_id: &str,
    exclusions: &[String],
    substitutes: &[ProcessElement],
    substitute_refs: &[Reference],
) -> Result<(ProcessModel, MergeTrace), MergeError> {
    let ext = ExtensionModel {
        variant_id: variant_id.to_string(),
        parent_id: String::new(),
        metamodel: base.metamodel(),
        new_elements: substitutes.to_vec(),
        new_references: substitute_refs.to_vec(),
        exclusions: exclusions.to_vec(),
        exemplars: Vec::new(),
    };
    let issues: Vec<Issue> = exclusions
        .iter()
        .filter_map(|id| match base.element(id) {
            Some(e) if e.kind.is_container() => None,
            Some(e) => Some(Issue::IllegalTarget {
                id: id.clone(),
                reason: format!("masking applies to process modules and project type variants, not {}", e.kind),
            }),
            None if base.reference(id).is_some() => Some(Issue::IllegalTarget {
                id: id.clone(),
                reason: "masking applies to process modules and project type variants, not references".into(),
            }),
            None => Some(Issue::UnknownExclusion { id: id.clone() }),
        })
        .collect();
    if !issues.is_empty() {
        return Err(failed(&ext, issues));
    }
    let mut model = base.clone();
    let mut trace = MergeTrace::new();
    integrate(&mut model, &ext, &mut trace)?;
    exclude(&mut model, &ext, &mut trace)?;
    Ok((model, trace))
}

fn integrate(model: &mut ProcessModel, ext: &ExtensionModel, trace: &mut MergeTrace) -> Result<(), MergeError> {
    let mut issues = Vec::new();
    let before = model.metamodel();
    if ext.metamodel < before {
        issues.push(Issue::MetamodelDowngrade { base: before, declared: ext.metamodel });
    }
    let mut probe: HashSet<&str> = HashSet::new();
    for id in ext.new_elements.iter().map(|e| &e.id).chain(ext.new_references.iter().map(|r| &r.id)) {
        if model.contains_id(id) || !probe.insert(id) {
            issues.push(Issue::DuplicateId { id: id.clone() });
        }
    }
    for e in &ext.new_elements {
        if let Err(err) = e.validate() {
            issues.push(Issue::InvalidArgument {
                context: format!("new element `{}`", e.id),
                argument: "id/name".into(),
                reason: err.to_string(),
            });
        }
    }
    for r in &ext.new_references {
        if let Err(err) = r.validate() {
            issues.push(Issue::InvalidArgument {
                context: format!("new reference `{}`", r.id),
                argument: "id".into(),
                reason: err.to_string(),
            });
        }
    }
    if !issues.is_empty() {
        return Err(failed(ext, issues));
    }

    let variant = ext.variant_id.as_str();
    if ext.metamodel > before {
        model.set_metamodel(ext.metamodel);
        let change =
            ChangeSet { metamodel: Some(MetamodelChange { before, after: ext.metamodel }), ..ChangeSet::default() };
        trace.push(variant, TraceEvent::MetamodelAdopted { from: before, to: ext.metamodel }, vec![change]);
    }
    for e in &ext.new_elements {
        model.insert_element(e.clone()).expect("ids checked above");
        let change = ChangeSet { added_elements: vec![e.clone()], ..ChangeSet::default() };
        trace.push(variant, TraceEvent::AssetAdded { id: e.id.clone() }, vec![change]);
    }
    for r in &ext.new_references {
        model.insert_reference(r.clone()).expect("ids checked above");
        let change = ChangeSet { added_references: vec![r.clone()], ..ChangeSet::default() };
        trace.push(variant, TraceEvent::AssetAdded { id: r.id.clone() }, vec![change]);
    }
    Ok(())
}

fn exclude(model: &mut ProcessModel, ext: &ExtensionModel, trace: &mut MergeTrace) -> Result<(), MergeError> {
    let issues: Vec<Issue> = ext
        .exclusions
        .iter()
        .filter(|id| !model.contains_id(id))
        .map(|id| Issue::UnknownExclusion { id: id.clone() })
        .collect();
    if !issues.is_empty() {
        return Err(failed(ext, issues));
    }
    let variant = ext.variant_id.as_str();
    for id in &ext.exclusions {
        // already gone through an earlier cascade or a repeated id
        if !model.contains_id(id) {
            continue;
        }
        if model.element(id).is_some() {
            let (element, mut cascade) = model.take_element(id).map_err(|e| model_failure(ext, e))?;
            cascade.sort_by(|a, b| a.id.cmp(&b.id));
            let substitutes: Vec<String> = if element.kind.is_container() {
                ext.new_elements.iter().filter(|e| e.kind == element.kind).map(|e| e.id.clone()).collect()
            } else {
                Vec::new()
            };
            let cascade_count = cascade.len();
            let change = ChangeSet {
                removed_elements: vec![element.clone()],
                removed_references: cascade,
                ..ChangeSet::default()
            };
            trace.push(variant, TraceEvent::ExclusionApplied { id: id.clone(), cascade_count }, vec![change]);
            if !substitutes.is_empty() {
                let description = format!(
                    "{} `{}` replaced by {}",
                    element.kind,
                    element.id,
                    substitutes.iter().map(|s| format!("`{s}`")).collect::<Vec<_>>().join(", ")
                );
                trace.push(
                    variant,
                    TraceEvent::UntypedChange { description, excluded: element.id, substitutes },
                    Vec::new(),
                );
            }
        } else {
            let reference = model.take_reference(id).map_err(|e| model_failure(ext, e))?;
            let change = ChangeSet { removed_references: vec![reference], ..ChangeSet::default() };
            trace.push(variant, TraceEvent::ExclusionApplied { id: id.clone(), cascade_count: 0 }, vec![change]);
        }
    }
    let issues = model.check_consistency();
    if !issues.is_empty() {
        return Err(failed(ext, issues));
    }
    Ok(())
}

fn model_failure(ext: &ExtensionModel, err: ModelError) -> MergeError {
    let issue = match err {
        ModelError::UnknownId(id) => Issue::UnknownId { id },
        ModelError::DuplicateId(id) => Issue::DuplicateId { id },
        other => Issue::InvalidArgument {
            context: ext.variant_id.clone(),
            argument: "model".into(),
            reason: other.to_string(),
        },
    };
    failed(ext, vec![issue])
}

fn operate(
    model: &mut ProcessModel,
    ext: &ExtensionModel,
    catalog: &OperationCatalog,
    options: MergeOptions,
    trace: &mut MergeTrace,
) -> Result<(), MergeError> {
    let issues: Vec<Issue> = ext.exemplars.iter().flat_map(|ex| validate_exemplar(catalog, model, ex)).collect();
    if !issues.is_empty() {
        return Err(failed(ext, issues));
    }
    let mut expanded = Vec::with_capacity(ext.exemplars.len());
    for ex in &ext.exemplars {
        let def = catalog.get(&ex.type_name).expect("validated exemplar has a known type");
        expanded.push(expand_exemplar(def, ex).map_err(|issue| failed(ext, vec![issue]))?);
    }

    let mut first_writer: HashMap<(String, String), usize> = HashMap::new();
    let mut warnings: Vec<Vec<TraceEvent>> = vec![Vec::new(); expanded.len()];
    for (i, steps) in expanded.iter().enumerate() {
        for step in steps {
            let Some((target, field)) = step.replaced_field() else { continue };
            let key = (target.to_string(), field.to_string());
            match first_writer.get(&key) {
                Some(&j) if j != i => {
                    let (first, second) = (&ext.exemplars[j].type_name, &ext.exemplars[i].type_name);
                    if !options.last_wins {
                        return Err(MergeError::Conflict {
                            variant_id: ext.variant_id.clone(),
                            target: key.0,
                            field: key.1,
                            first: first.clone(),
                            second: second.clone(),
                        });
                    }
                    warnings[i].push(TraceEvent::ConflictWarning {
                        target: key.0.clone(),
                        field: key.1.clone(),
                        overridden: first.clone(),
                        by: second.clone(),
                    });
                    first_writer.insert(key, i);
                }
                Some(_) => {}
                None => {
                    first_writer.insert(key, i);
                }
            }
        }
    }

    let variant = ext.variant_id.as_str();
    for ((ex, steps), warnings) in ext.exemplars.iter().zip(expanded).zip(warnings) {
        for w in warnings {
            trace.push(variant, w, Vec::new());
        }
        let mut changes = Vec::with_capacity(steps.len());
        for step in &steps {
            let effect = atomic::apply_in_place(model, step).map_err(|issue| failed(ext, vec![issue]))?;
            changes.push(effect.changes);
        }
        trace.push(
            variant,
            TraceEvent::OperationExecuted {
                type_name: ex.type_name.clone(),
                target: ex.target.clone(),
                step_count: steps.len(),
            },
            changes,
        );
    }
    Ok(())
}
