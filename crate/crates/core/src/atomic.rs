//! Atomic model transformations and their interpreter.
//!
//! Every typed variability operation expands into a sequence of
//! [`AtomicStep`]s. A step names its target (an element or reference id) and
//! carries named string arguments. [`validate_step`] and [`apply_atomic`]
//! share one precondition check, so a step validates cleanly exactly when it
//! applies.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::issue::Issue;
use crate::model::{
    parse_ordering_number, ChangeSet, ElementChange, ProcessModel, Reference, ReferenceChange, ReferenceKind,
    ORDERING_NUMBER,
};

named_enum!(AtomicKind {
    RenameElement,
    ReplaceText,
    AddText,
    SwapReferences,
    RemoveElement,
    RemoveReference,
    AddReference,
    ChangeAttribute,
    MoveElement,
});

pub mod arg {
    pub const NEW_NAME: &str = "newName";
    pub const FIELD: &str = "field";
    pub const TEXT: &str = "text";
    pub const POSITION: &str = "position";
    pub const NEW_TARGET: &str = "newTarget";
    pub const NEW_SOURCE: &str = "newSource";
    pub const REFERENCE_ID: &str = "referenceId";
    pub const REFERENCE_KIND: &str = "referenceKind";
    pub const REFERENCE_TARGET: &str = "referenceTarget";
    pub const KEY: &str = "key";
    pub const VALUE: &str = "value";
    pub const NEW_ORDERING_NUMBER: &str = "newOrderingNumber";
}

impl AtomicKind {
    /// Arguments that must be present and non-empty.
    pub fn required_args(self) -> &'static [&'static str] {
        use arg::*;
        match self {
            AtomicKind::RenameElement => &[NEW_NAME],
            AtomicKind::ReplaceText => &[FIELD, TEXT],
            AtomicKind::AddText => &[FIELD, POSITION, TEXT],
            AtomicKind::SwapReferences => &[],
            AtomicKind::RemoveElement | AtomicKind::RemoveReference => &[],
            AtomicKind::AddReference => &[REFERENCE_ID, REFERENCE_KIND, REFERENCE_TARGET],
            AtomicKind::ChangeAttribute => &[KEY, VALUE],
            AtomicKind::MoveElement => &[NEW_ORDERING_NUMBER],
        }
    }

    /// Every argument name the kind accepts.
    pub fn accepted_args(self) -> &'static [&'static str] {
        match self {
            AtomicKind::SwapReferences => &[arg::NEW_TARGET, arg::NEW_SOURCE],
            other => other.required_args(),
        }
    }
}

/// Selects the piece of text an AddText/ReplaceText step edits.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TextField {
    Description,
    TextBlock(String),
    Attribute(String),
}

impl fmt::Display for TextField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TextField::Description => f.write_str("description"),
            TextField::TextBlock(id) => write!(f, "textBlock({id})"),
            TextField::Attribute(key) => write!(f, "attribute({key})"),
        }
    }
}

impl FromStr for TextField {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "description" {
            return Ok(TextField::Description);
        }
        let inner = |prefix: &str| {
            s.strip_prefix(prefix)
                .and_then(|rest| rest.strip_suffix(')'))
                .filter(|inner| !inner.is_empty())
                .map(str::to_string)
        };
        if let Some(id) = inner("textBlock(") {
            Ok(TextField::TextBlock(id))
        } else if let Some(key) = inner("attribute(") {
            Ok(TextField::Attribute(key))
        } else {
            Err(format!("`{s}` is not description, textBlock(id) or attribute(key)"))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TextPosition {
    Prefix,
    Postfix,
}

impl TextPosition {
    pub fn as_str(self) -> &'static str {
        match self {
            TextPosition::Prefix => "prefix",
            TextPosition::Postfix => "postfix",
        }
    }
}

impl FromStr for TextPosition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "prefix" => Ok(TextPosition::Prefix),
            "postfix" => Ok(TextPosition::Postfix),
            _ => Err(format!("`{s}` is neither prefix nor postfix")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomicStep {
    pub kind: AtomicKind,
    pub target: String,
    pub args: BTreeMap<String, String>,
}

impl AtomicStep {
    pub fn new(kind: AtomicKind, target: impl Into<String>) -> Self {
        Self { kind, target: target.into(), args: BTreeMap::new() }
    }

    pub fn arg(mut self, name: &str, value: impl Into<String>) -> Self {
        self.args.insert(name.to_string(), value.into());
        self
    }

    pub fn rename(target: impl Into<String>, new_name: impl Into<String>) -> Self {
        Self::new(AtomicKind::RenameElement, target).arg(arg::NEW_NAME, new_name)
    }

    pub fn replace_text(target: impl Into<String>, field: TextField, text: impl Into<String>) -> Self {
        Self::new(AtomicKind::ReplaceText, target).arg(arg::FIELD, field.to_string()).arg(arg::TEXT, text)
    }

    pub fn add_text(
        target: impl Into<String>,
        field: TextField,
        position: TextPosition,
        text: impl Into<String>,
    ) -> Self {
        Self::new(AtomicKind::AddText, target)
            .arg(arg::FIELD, field.to_string())
            .arg(arg::POSITION, position.as_str())
            .arg(arg::TEXT, text)
    }

    pub fn swap_target(reference: impl Into<String>, new_target: impl Into<String>) -> Self {
        Self::new(AtomicKind::SwapReferences, reference).arg(arg::NEW_TARGET, new_target)
    }

    pub fn swap_source(reference: impl Into<String>, new_source: impl Into<String>) -> Self {
        Self::new(AtomicKind::SwapReferences, reference).arg(arg::NEW_SOURCE, new_source)
    }

    pub fn remove_element(target: impl Into<String>) -> Self {
        Self::new(AtomicKind::RemoveElement, target)
    }

    pub fn remove_reference(target: impl Into<String>) -> Self {
        Self::new(AtomicKind::RemoveReference, target)
    }

    pub fn add_reference(
        source: impl Into<String>,
        id: impl Into<String>,
        kind: ReferenceKind,
        target: impl Into<String>,
    ) -> Self {
        Self::new(AtomicKind::AddReference, source)
            .arg(arg::REFERENCE_ID, id)
            .arg(arg::REFERENCE_KIND, kind.as_str())
            .arg(arg::REFERENCE_TARGET, target)
    }

    pub fn change_attribute(target: impl Into<String>, key: impl Into<String>, value: impl Into<String>) -> Self {
        Self::new(AtomicKind::ChangeAttribute, target).arg(arg::KEY, key).arg(arg::VALUE, value)
    }

    pub fn move_to(target: impl Into<String>, ordering_number: impl Into<String>) -> Self {
        Self::new(AtomicKind::MoveElement, target).arg(arg::NEW_ORDERING_NUMBER, ordering_number)
    }

    fn get(&self, name: &str) -> Option<&str> {
        self.args.get(name).map(String::as_str).filter(|v| !v.is_empty())
    }

    fn context(&self) -> String {
        format!("{} on `{}`", self.kind, self.target)
    }

    /// The (element, field) a ReplaceText step overwrites, if this is one.
    pub fn replaced_field(&self) -> Option<(&str, TextField)> {
        if self.kind != AtomicKind::ReplaceText {
            return None;
        }
        let field = self.get(arg::FIELD)?.parse().ok()?;
        Some((self.target.as_str(), field))
    }
}

impl fmt::Display for AtomicStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}", self.kind, self.target)?;
        for (k, v) in &self.args {
            write!(f, ", {k}={v:?}")?;
        }
        f.write_str(")")
    }
}

/// Effect of one applied step.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StepEffect {
    pub changes: ChangeSet,
    /// References removed because their element was removed.
    pub cascaded: Vec<Reference>,
}

/// Returns every violated precondition of `step` on `model`; empty iff
/// [`apply_atomic`] succeeds.
pub fn validate_step(model: &ProcessModel, step: &AtomicStep) -> Vec<Issue> {
    let mut issues = Vec::new();
    check_step(model, step, &mut issues);
    issues
}

/// Applies one step, returning a new model.
pub fn apply_atomic(model: &ProcessModel, step: &AtomicStep) -> Result<ProcessModel, Issue> {
    let mut out = model.clone();
    apply_in_place(&mut out, step)?;
    Ok(out)
}

/// Applies a sequence of steps in order; the first failing step aborts.
pub fn apply_steps(model: &ProcessModel, steps: &[AtomicStep]) -> Result<ProcessModel, Issue> {
    let mut out = model.clone();
    for step in steps {
        apply_in_place(&mut out, step)?;
    }
    Ok(out)
}

pub(crate) fn apply_in_place(model: &mut ProcessModel, step: &AtomicStep) -> Result<StepEffect, Issue> {
    let mut issues = Vec::new();
    check_step(model, step, &mut issues);
    if let Some(first) = issues.into_iter().next() {
        return Err(first);
    }
    Ok(execute(model, step))
}

fn check_step(model: &ProcessModel, step: &AtomicStep, issues: &mut Vec<Issue>) {
    for name in step.args.keys() {
        if !step.kind.accepted_args().contains(&name.as_str()) {
            issues.push(Issue::InvalidArgument {
                context: step.context(),
                argument: name.clone(),
                reason: "is not accepted by this atomic kind".into(),
            });
        }
    }
    for name in step.kind.required_args() {
        if step.get(name).is_none() {
            issues.push(Issue::MissingArgument { context: step.context(), argument: name.to_string() });
        }
    }
    if !issues.is_empty() {
        return;
    }

    let target = step.target.as_str();
    let element = model.element(target);
    let reference = model.reference(target);
    if element.is_none() && reference.is_none() {
        issues.push(Issue::UnknownId { id: target.to_string() });
        return;
    }
    let needs_element = |issues: &mut Vec<Issue>| {
        if element.is_none() {
            issues.push(Issue::IllegalTarget {
                id: target.to_string(),
                reason: format!("{} needs an element, found a reference", step.kind),
            });
        }
    };

    match step.kind {
        AtomicKind::RenameElement | AtomicKind::RemoveElement => needs_element(issues),
        AtomicKind::ReplaceText | AtomicKind::AddText => {
            needs_element(issues);
            if step.kind == AtomicKind::AddText {
                if let Err(reason) = step.args[arg::POSITION].parse::<TextPosition>() {
                    issues.push(Issue::InvalidArgument {
                        context: step.context(),
                        argument: arg::POSITION.into(),
                        reason,
                    });
                }
            }
            match step.args[arg::FIELD].parse::<TextField>() {
                Err(reason) => {
                    issues.push(Issue::InvalidArgument { context: step.context(), argument: arg::FIELD.into(), reason })
                }
                Ok(field) => {
                    if let Some(e) = element {
                        let present = match &field {
                            TextField::Description => true,
                            TextField::TextBlock(id) => e.text_block(id).is_some(),
                            TextField::Attribute(key) => e.attributes.contains_key(key),
                        };
                        if !present {
                            issues.push(Issue::FieldNotFound { id: target.into(), field: field.to_string() });
                        }
                    }
                }
            }
        }
        AtomicKind::SwapReferences => match reference {
            None => issues.push(Issue::IllegalTarget {
                id: target.into(),
                reason: "SwapReferences needs a reference, found an element".into(),
            }),
            Some(r) => {
                if step.get(arg::NEW_TARGET).is_none() && step.get(arg::NEW_SOURCE).is_none() {
                    issues.push(Issue::MissingArgument { context: step.context(), argument: arg::NEW_TARGET.into() });
                    return;
                }
                let source = step.get(arg::NEW_SOURCE).unwrap_or(&r.source);
                let dest = step.get(arg::NEW_TARGET).unwrap_or(&r.target);
                check_endpoints(model, r.kind, source, dest, target, issues);
            }
        },
        AtomicKind::RemoveReference => {
            if reference.is_none() {
                issues.push(Issue::IllegalTarget {
                    id: target.into(),
                    reason: "RemoveReference needs a reference, found an element".into(),
                });
            }
        }
        AtomicKind::AddReference => {
            needs_element(issues);
            let id = &step.args[arg::REFERENCE_ID];
            if model.contains_id(id) {
                issues.push(Issue::DuplicateId { id: id.clone() });
            }
            match step.args[arg::REFERENCE_KIND].parse::<ReferenceKind>() {
                Err(e) => issues.push(Issue::InvalidArgument {
                    context: step.context(),
                    argument: arg::REFERENCE_KIND.into(),
                    reason: e.to_string(),
                }),
                Ok(kind) => {
                    if element.is_some() {
                        check_endpoints(model, kind, target, &step.args[arg::REFERENCE_TARGET], id, issues);
                    }
                }
            }
        }
        AtomicKind::ChangeAttribute => {}
        AtomicKind::MoveElement => {
            needs_element(issues);
            let value = &step.args[arg::NEW_ORDERING_NUMBER];
            if parse_ordering_number(value).is_none() {
                issues.push(Issue::InvalidArgument {
                    context: step.context(),
                    argument: arg::NEW_ORDERING_NUMBER.into(),
                    reason: format!("`{value}` is not a dotted ordering number"),
                });
            }
        }
    }
}

fn check_endpoints(
    model: &ProcessModel,
    kind: ReferenceKind,
    source: &str,
    target: &str,
    reference: &str,
    issues: &mut Vec<Issue>,
) {
    let s = model.element(source);
    let t = model.element(target);
    if s.is_none() {
        issues.push(Issue::UnknownId { id: source.into() });
    }
    if t.is_none() {
        issues.push(Issue::UnknownId { id: target.into() });
    }
    if let (Some(s), Some(t)) = (s, t) {
        if !kind.admits(s.kind, t.kind) {
            issues.push(Issue::IllegalTarget {
                id: reference.into(),
                reason: format!("{kind} cannot connect {} `{}` to {} `{}`", s.kind, s.id, t.kind, t.id),
            });
        }
    }
}

fn edit_text(current: &str, step: &AtomicStep) -> String {
    let text = &step.args[arg::TEXT];
    match step.kind {
        AtomicKind::ReplaceText => text.clone(),
        _ => match step.args[arg::POSITION].parse::<TextPosition>() {
            Ok(TextPosition::Prefix) => format!("{text}{current}"),
            _ => format!("{current}{text}"),
        },
    }
}

fn set_attribute_change(
    attributes: &BTreeMap<String, String>,
    key: &str,
    value: &str,
) -> Option<(String, Option<String>, Option<String>)> {
    let before = attributes.get(key).cloned();
    (before.as_deref() != Some(value)).then(|| (key.to_string(), before, Some(value.to_string())))
}

/// Performs a step whose preconditions hold.
fn execute(model: &mut ProcessModel, step: &AtomicStep) -> StepEffect {
    let target = step.target.as_str();
    let mut effect = StepEffect::default();
    let element_changes: Vec<ElementChange> = match step.kind {
        AtomicKind::RenameElement => {
            let e = model.element(target).expect("checked");
            let new_name = &step.args[arg::NEW_NAME];
            if &e.name == new_name {
                vec![]
            } else {
                vec![ElementChange::Name { before: e.name.clone(), after: new_name.clone() }]
            }
        }
        AtomicKind::ReplaceText | AtomicKind::AddText => {
            let e = model.element(target).expect("checked");
            let field: TextField = step.args[arg::FIELD].parse().expect("checked");
            match field {
                TextField::Description => {
                    let after = edit_text(&e.description, step);
                    (after != e.description)
                        .then(|| ElementChange::Description { before: e.description.clone(), after })
                        .into_iter()
                        .collect()
                }
                TextField::TextBlock(block) => {
                    let before = &e.text_block(&block).expect("checked").text;
                    let after = edit_text(before, step);
                    (&after != before)
                        .then(|| ElementChange::TextBlock { block, before: before.clone(), after })
                        .into_iter()
                        .collect()
                }
                TextField::Attribute(key) => {
                    let before = &e.attributes[&key];
                    let after = edit_text(before, step);
                    (&after != before)
                        .then(|| ElementChange::Attribute { key, before: Some(before.clone()), after: Some(after) })
                        .into_iter()
                        .collect()
                }
            }
        }
        AtomicKind::MoveElement => {
            let e = model.element(target).expect("checked");
            set_attribute_change(&e.attributes, ORDERING_NUMBER, &step.args[arg::NEW_ORDERING_NUMBER])
                .map(|(key, before, after)| ElementChange::Attribute { key, before, after })
                .into_iter()
                .collect()
        }
        AtomicKind::ChangeAttribute => {
            let key = &step.args[arg::KEY];
            let value = &step.args[arg::VALUE];
            if let Some(e) = model.element(target) {
                set_attribute_change(&e.attributes, key, value)
                    .map(|(key, before, after)| ElementChange::Attribute { key, before, after })
                    .into_iter()
                    .collect()
            } else {
                let r = model.reference(target).expect("checked");
                let changes: Vec<_> = set_attribute_change(&r.attributes, key, value)
                    .map(|(key, before, after)| ReferenceChange::Attribute { key, before, after })
                    .into_iter()
                    .collect();
                if !changes.is_empty() {
                    effect.changes = ChangeSet::reference_modified(target, changes);
                }
                vec![]
            }
        }
        AtomicKind::SwapReferences => {
            let r = model.reference(target).expect("checked");
            let mut changes = Vec::new();
            if let Some(s) = step.get(arg::NEW_SOURCE).filter(|s| *s != r.source) {
                changes.push(ReferenceChange::Source { before: r.source.clone(), after: s.to_string() });
            }
            if let Some(t) = step.get(arg::NEW_TARGET).filter(|t| *t != r.target) {
                changes.push(ReferenceChange::Target { before: r.target.clone(), after: t.to_string() });
            }
            if !changes.is_empty() {
                effect.changes = ChangeSet::reference_modified(target, changes);
            }
            vec![]
        }
        AtomicKind::RemoveElement => {
            let (element, cascade) = model.take_element(target).expect("checked");
            effect.changes.removed_elements.push(element);
            effect.changes.removed_references = cascade.clone();
            effect.cascaded = cascade;
            vec![]
        }
        AtomicKind::RemoveReference => {
            let r = model.take_reference(target).expect("checked");
            effect.changes.removed_references.push(r);
            vec![]
        }
        AtomicKind::AddReference => {
            let kind = step.args[arg::REFERENCE_KIND].parse().expect("checked");
            let r = Reference::new(
                step.args[arg::REFERENCE_ID].clone(),
                kind,
                target,
                step.args[arg::REFERENCE_TARGET].clone(),
            );
            model.insert_reference(r.clone()).expect("checked");
            effect.changes.added_references.push(r);
            vec![]
        }
    };
    if !element_changes.is_empty() {
        effect.changes = ChangeSet::element_modified(target, element_changes);
        let modification = &effect.changes.modified_elements[0];
        let e = model.element_mut(target).expect("checked");
        for change in &modification.changes {
            apply_to_element(e, change);
        }
    } else if !effect.changes.modified_references.is_empty() {
        let modification = effect.changes.modified_references[0].clone();
        let r = model.reference_mut(target).expect("checked");
        for change in &modification.changes {
            match change {
                ReferenceChange::Source { after, .. } => r.source = after.clone(),
                ReferenceChange::Target { after, .. } => r.target = after.clone(),
                ReferenceChange::Attribute { key, after, .. } => {
                    r.attributes.insert(key.clone(), after.clone().unwrap_or_default());
                }
                ReferenceChange::Kind { after, .. } => r.kind = *after,
            }
        }
    }
    effect
}

fn apply_to_element(e: &mut crate::model::ProcessElement, change: &ElementChange) {
    match change {
        ElementChange::Name { after, .. } => e.name = after.clone(),
        ElementChange::Description { after, .. } => e.description = after.clone(),
        ElementChange::Attribute { key, after, .. } => match after {
            Some(v) => {
                e.attributes.insert(key.clone(), v.clone());
            }
            None => {
                e.attributes.remove(key);
            }
        },
        ElementChange::TextBlock { block, after, .. } => {
            if let Some(b) = e.text_block_mut(block) {
                b.text = after.clone();
            }
        }
        ElementChange::TextBlocks { after, .. } => e.text_blocks = after.clone(),
        ElementChange::Kind { after, .. } => e.kind = *after,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{compare_models, ElementKind, MetamodelVersion, ProcessElement};

    fn model() -> ProcessModel {
        ProcessModel::builder(MetamodelVersion::Mm13)
            .element(
                ProcessElement::new("r1", ElementKind::Role, "Quality Manager").with_description("Ensures quality."),
            )
            .element(ProcessElement::new("r2", ElementKind::Role, "Project Lead"))
            .element(ProcessElement::new("w1", ElementKind::WorkProduct, "QA Plan"))
            .element(ProcessElement::new("w2", ElementKind::WorkProduct, "Test Plan"))
            .element(
                ProcessElement::new("s1", ElementKind::Section, "Intro")
                    .with_attribute(ORDERING_NUMBER, "1.1")
                    .with_text_block("body", "Old text."),
            )
            .reference(Reference::new("resp1", ReferenceKind::Responsibility, "w1", "r1"))
            .reference(Reference::new("sup1", ReferenceKind::SupportingRole, "w1", "r2"))
            .build()
            .unwrap()
    }

    #[test]
    fn rename_changes_only_the_name() {
        let m = model();
        let out = apply_atomic(&m, &AtomicStep::rename("r1", "QA Lead")).unwrap();
        assert_eq!(out.element("r1").unwrap().name, "QA Lead");
        let cs = compare_models(&m, &out);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs.modified_elements[0].id, "r1");
    }

    #[test]
    fn rename_to_current_name_is_identity() {
        let m = model();
        let out = apply_atomic(&m, &AtomicStep::rename("r1", "Quality Manager")).unwrap();
        assert!(compare_models(&m, &out).is_empty());
    }

    #[test]
    fn replace_and_add_text() {
        let m = model();
        let out =
            apply_atomic(&m, &AtomicStep::replace_text("s1", TextField::TextBlock("body".into()), "New.")).unwrap();
        assert_eq!(out.element("s1").unwrap().text_block("body").unwrap().text, "New.");
        let out =
            apply_atomic(&out, &AtomicStep::add_text("r1", TextField::Description, TextPosition::Prefix, "Note: "))
                .unwrap();
        assert_eq!(out.element("r1").unwrap().description, "Note: Ensures quality.");
        let out =
            apply_atomic(&out, &AtomicStep::add_text("r1", TextField::Description, TextPosition::Postfix, " Always."))
                .unwrap();
        assert_eq!(out.element("r1").unwrap().description, "Note: Ensures quality. Always.");
    }

    #[test]
    fn missing_text_block_is_field_not_found() {
        let issues = validate_step(&model(), &AtomicStep::replace_text("s1", TextField::TextBlock("nope".into()), "x"));
        assert_eq!(issues, vec![Issue::FieldNotFound { id: "s1".into(), field: "textBlock(nope)".into() }]);
    }

    #[test]
    fn valid_rename_has_no_issues() {
        assert!(validate_step(&model(), &AtomicStep::rename("r1", "X")).is_empty());
    }

    #[test]
    fn absent_target_is_unknown_id() {
        assert_eq!(validate_step(&model(), &AtomicStep::rename("r9", "X")), vec![Issue::UnknownId { id: "r9".into() }]);
        assert_eq!(apply_atomic(&model(), &AtomicStep::rename("r9", "X")), Err(Issue::UnknownId { id: "r9".into() }));
    }

    #[test]
    fn missing_and_empty_arguments() {
        let step = AtomicStep::new(AtomicKind::RenameElement, "r1");
        assert_eq!(validate_step(&model(), &step)[0].code(), "MissingArgument");
        let step = AtomicStep::rename("r1", "");
        assert_eq!(validate_step(&model(), &step)[0].code(), "MissingArgument");
        let step = AtomicStep::new(AtomicKind::SwapReferences, "resp1");
        assert_eq!(validate_step(&model(), &step)[0].code(), "MissingArgument");
    }

    #[test]
    fn swap_to_wrong_kind_is_illegal_target() {
        let issues = validate_step(&model(), &AtomicStep::swap_target("resp1", "w2"));
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].code(), "IllegalTarget");
    }

    #[test]
    fn swap_repoints_responsibility() {
        let m = model();
        let out = apply_atomic(&m, &AtomicStep::swap_target("resp1", "r2")).unwrap();
        assert_eq!(out.reference("resp1").unwrap().target, "r2");
        assert_eq!(compare_models(&m, &out).len(), 1);
    }

    #[test]
    fn remove_element_cascades_and_reports() {
        let mut m = model();
        let effect = apply_in_place(&mut m, &AtomicStep::remove_element("w1")).unwrap();
        assert_eq!(effect.cascaded.len(), 2);
        assert_eq!(m.reference_count(), 0);
        assert!(m.is_consistent());
    }

    #[test]
    fn remove_reference_on_element_is_illegal() {
        assert_eq!(validate_step(&model(), &AtomicStep::remove_reference("r1"))[0].code(), "IllegalTarget");
    }

    #[test]
    fn add_reference_checks_kinds_and_ids() {
        let m = model();
        let ok = AtomicStep::add_reference("w2", "resp2", ReferenceKind::Responsibility, "r2");
        let out = apply_atomic(&m, &ok).unwrap();
        assert!(out.is_consistent());
        let dup = AtomicStep::add_reference("w2", "resp1", ReferenceKind::Responsibility, "r2");
        assert_eq!(validate_step(&m, &dup), vec![Issue::DuplicateId { id: "resp1".into() }]);
        let bad = AtomicStep::add_reference("w2", "resp3", ReferenceKind::Responsibility, "w1");
        assert_eq!(validate_step(&m, &bad)[0].code(), "IllegalTarget");
    }

    #[test]
    fn change_attribute_on_element_and_reference() {
        let m = model();
        let out = apply_atomic(&m, &AtomicStep::change_attribute("r1", "roleClass", "Legacy")).unwrap();
        assert_eq!(out.element("r1").unwrap().attributes["roleClass"], "Legacy");
        let out = apply_atomic(&out, &AtomicStep::change_attribute("resp1", "name", "owns")).unwrap();
        assert_eq!(out.reference("resp1").unwrap().attributes["name"], "owns");
        assert_eq!(compare_models(&m, &out).len(), 2);
    }

    #[test]
    fn move_element_requires_dotted_number() {
        let m = model();
        let out = apply_atomic(&m, &AtomicStep::move_to("s1", "3.2")).unwrap();
        assert_eq!(out.element("s1").unwrap().ordering_number(), Some("3.2"));
        assert_eq!(validate_step(&m, &AtomicStep::move_to("s1", "third"))[0].code(), "InvalidArgument");
    }

    #[test]
    fn unknown_argument_is_rejected() {
        let step = AtomicStep::rename("r1", "X").arg("colour", "blue");
        assert_eq!(validate_step(&model(), &step)[0].code(), "InvalidArgument");
    }

    #[test]
    fn field_selector_parsing() {
        assert_eq!("description".parse::<TextField>(), Ok(TextField::Description));
        assert_eq!("textBlock(b1)".parse::<TextField>(), Ok(TextField::TextBlock("b1".into())));
        assert_eq!("attribute(k)".parse::<TextField>(), Ok(TextField::Attribute("k".into())));
        assert!("textBlock()".parse::<TextField>().is_err());
        assert!("body".parse::<TextField>().is_err());
    }

    #[test]
    fn effect_matches_model_difference() {
        let m = model();
        let steps = [
            AtomicStep::rename("r1", "QA Lead"),
            AtomicStep::swap_target("resp1", "r2"),
            AtomicStep::remove_element("w1"),
            AtomicStep::change_attribute("r2", "roleClass", "Legacy"),
        ];
        for step in &steps {
            let mut after = m.clone();
            let effect = apply_in_place(&mut after, step).unwrap();
            assert_eq!(effect.changes, compare_models(&m, &after), "{step}");
        }
    }
}
