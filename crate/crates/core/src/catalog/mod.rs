//! Registry of typed variability operation types.
//!
//! A type binds a name to one target kind, the metamodel release that
//! defines it, and a recipe of atomic step templates. Exemplars in extension
//! models instantiate a type against one target id; [`validate_exemplar`]
//! checks typing and metamodel gating, [`expand_exemplar`] turns a valid
//! exemplar into concrete atomic steps.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::atomic::{self, AtomicKind, AtomicStep};
use crate::issue::Issue;
use crate::model::{ElementKind, MetamodelVersion, ProcessModel, ReferenceKind, UnknownName};

const BUILTIN_CATALOG: &str = include_str!("builtin.xml");

/// Placeholder bound to the exemplar's target id in every recipe.
pub const TARGET_PLACEHOLDER: &str = "target";

/// Logical family of operation types, as used in the usage tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OperationGroup {
    Discipline,
    WorkProduct,
    Topic,
    Activity,
    Task,
    Role,
    Tailoring,
    DecisionGate,
    DescriptionReplacements,
    DescriptionAddOns,
    DescriptionRearrangements,
    DescriptionRemovals,
    ToolMethodReference,
    Mapping,
    Appendix,
}

impl OperationGroup {
    pub const ALL: &'static [OperationGroup] = &[
        OperationGroup::Discipline,
        OperationGroup::WorkProduct,
        OperationGroup::Topic,
        OperationGroup::Activity,
        OperationGroup::Task,
        OperationGroup::Role,
        OperationGroup::Tailoring,
        OperationGroup::DecisionGate,
        OperationGroup::DescriptionReplacements,
        OperationGroup::DescriptionAddOns,
        OperationGroup::DescriptionRearrangements,
        OperationGroup::DescriptionRemovals,
        OperationGroup::ToolMethodReference,
        OperationGroup::Mapping,
        OperationGroup::Appendix,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OperationGroup::Discipline => "Discipline Variations",
            OperationGroup::WorkProduct => "Work Product Variations",
            OperationGroup::Topic => "Topic Variations",
            OperationGroup::Activity => "Activity Variations",
            OperationGroup::Task => "Task Variations",
            OperationGroup::Role => "Role Variations",
            OperationGroup::Tailoring => "Tailoring Variations",
            OperationGroup::DecisionGate => "Decision Gate Variations",
            OperationGroup::DescriptionReplacements => "Description Replacements",
            OperationGroup::DescriptionAddOns => "Description Add-ons",
            OperationGroup::DescriptionRearrangements => "Description Re-Arrangements",
            OperationGroup::DescriptionRemovals => "Description Removements",
            OperationGroup::ToolMethodReference => "Tool/Method Ref. Variations",
            OperationGroup::Mapping => "Mapping Variations",
            OperationGroup::Appendix => "Appendix Variations",
        }
    }
}

impl fmt::Display for OperationGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OperationGroup {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OperationGroup::ALL.iter().copied().find(|g| g.as_str() == s).ok_or_else(|| UnknownName(s.to_string()))
    }
}

/// What an operation type may be applied to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TargetKind {
    Element(ElementKind),
    Reference(ReferenceKind),
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetKind::Element(k) => k.fmt(f),
            TargetKind::Reference(k) => k.fmt(f),
        }
    }
}

impl FromStr for TargetKind {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(TargetKind::Element).or_else(|_| s.parse().map(TargetKind::Reference))
    }
}

/// An atomic step whose target and argument values may contain `$name`
/// placeholders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepTemplate {
    pub kind: AtomicKind,
    pub target: String,
    pub args: BTreeMap<String, String>,
}

impl StepTemplate {
    pub fn new(kind: AtomicKind, target: impl Into<String>) -> Self {
        Self { kind, target: target.into(), args: BTreeMap::new() }
    }

    pub fn arg(mut self, name: &str, value: impl Into<String>) -> Self {
        self.args.insert(name.to_string(), value.into());
        self
    }

    fn placeholders(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for value in std::iter::once(&self.target).chain(self.args.values()) {
            out.extend(placeholders(value).into_iter().map(str::to_string));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperationTypeDef {
    pub name: String,
    pub group: OperationGroup,
    pub target_kind: TargetKind,
    pub metamodel: MetamodelVersion,
    /// Exemplar arguments the recipe consumes, besides the target.
    pub params: Vec<String>,
    pub recipe: Vec<StepTemplate>,
    /// Placeholder type standing in for an entry whose real definition is
    /// unknown.
    pub synthetic: bool,
}

impl OperationTypeDef {
    /// Checks the recipe is non-empty, uses only declared placeholders and
    /// binds exactly the arguments each atomic kind accepts.
    pub fn validate(&self) -> Result<(), CatalogError> {
        let invalid = |reason: String| CatalogError::InvalidDefinition { name: self.name.clone(), reason };
        if self.name.is_empty() {
            return Err(invalid("empty type name".into()));
        }
        if self.recipe.is_empty() {
            return Err(invalid("empty recipe".into()));
        }
        let declared: BTreeSet<&str> = self.params.iter().map(String::as_str).chain([TARGET_PLACEHOLDER]).collect();
        if declared.len() != self.params.len() + 1 {
            return Err(invalid("duplicate or reserved parameter name".into()));
        }
        for (i, step) in self.recipe.iter().enumerate() {
            for p in step.placeholders() {
                if !declared.contains(p.as_str()) {
                    return Err(invalid(format!("step {} uses undeclared placeholder `${p}`", i + 1)));
                }
            }
            for name in step.args.keys() {
                if !step.kind.accepted_args().contains(&name.as_str()) {
                    return Err(invalid(format!("step {} binds `{name}`, not accepted by {}", i + 1, step.kind)));
                }
            }
            for name in step.kind.required_args() {
                if step.args.get(*name).is_none_or(String::is_empty) {
                    return Err(invalid(format!("step {} lacks `{name}` required by {}", i + 1, step.kind)));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OperationExemplar {
    pub type_name: String,
    pub target: String,
    pub args: BTreeMap<String, String>,
}

impl OperationExemplar {
    pub fn new(type_name: impl Into<String>, target: impl Into<String>) -> Self {
        Self { type_name: type_name.into(), target: target.into(), args: BTreeMap::new() }
    }

    pub fn arg(mut self, name: &str, value: impl Into<String>) -> Self {
        self.args.insert(name.to_string(), value.into());
        self
    }
}

impl fmt::Display for OperationExemplar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.type_name, self.target)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("duplicate operation type `{0}`")]
    DuplicateTypeName(String),
    #[error("unknown operation type `{0}`")]
    UnknownOperationType(String),
    #[error("operation type `{name}`: {reason}")]
    InvalidDefinition { name: String, reason: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OperationCatalog {
    types: BTreeMap<String, OperationTypeDef>,
}

impl OperationCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// The shipped catalog of 69 types.
    pub fn builtin() -> Self {
        crate::xml::parse_catalog(BUILTIN_CATALOG.as_bytes()).expect("builtin catalog is well-formed")
    }

    /// Source text of the shipped catalog.
    pub fn builtin_source() -> &'static str {
        BUILTIN_CATALOG
    }

    pub fn insert(&mut self, def: OperationTypeDef) -> Result<(), CatalogError> {
        def.validate()?;
        if self.types.contains_key(&def.name) {
            return Err(CatalogError::DuplicateTypeName(def.name));
        }
        self.types.insert(def.name.clone(), def);
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Result<&OperationTypeDef, CatalogError> {
        self.types.get(name).ok_or_else(|| CatalogError::UnknownOperationType(name.to_string()))
    }

    pub fn get(&self, name: &str) -> Option<&OperationTypeDef> {
        self.types.get(name)
    }

    /// Types in name order.
    pub fn iter(&self) -> impl Iterator<Item = &OperationTypeDef> + '_ {
        self.types.values()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> + '_ {
        self.types.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    /// Number of types each metamodel release defines; every release is present.
    pub fn count_by_metamodel(&self) -> BTreeMap<MetamodelVersion, usize> {
        let mut counts: BTreeMap<_, _> = MetamodelVersion::ALL.iter().map(|m| (*m, 0)).collect();
        for def in self.types.values() {
            *counts.entry(def.metamodel).or_default() += 1;
        }
        counts
    }
}

/// Returns the `$name` placeholders in `value`.
fn placeholders(value: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut rest = value;
    while let Some(pos) = rest.find('$') {
        let after = &rest[pos + 1..];
        let len = ident_len(after);
        if len > 0 {
            out.push(&after[..len]);
        }
        rest = &after[len..];
    }
    out
}

fn ident_len(s: &str) -> usize {
    let mut chars = s.char_indices();
    match chars.next() {
        Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return 0,
    }
    chars.find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_')).map_or(s.len(), |(i, _)| i)
}

fn substitute(template: &str, bindings: &BTreeMap<&str, &str>) -> Result<String, String> {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(pos) = rest.find('$') {
        out.push_str(&rest[..pos]);
        let after = &rest[pos + 1..];
        let len = ident_len(after);
        if len == 0 {
            out.push('$');
        } else {
            let name = &after[..len];
            out.push_str(bindings.get(name).ok_or_else(|| name.to_string())?);
        }
        rest = &after[len..];
    }
    out.push_str(rest);
    Ok(out)
}

/// Substitutes the exemplar's target and arguments into the type's recipe.
pub fn expand_exemplar(def: &OperationTypeDef, exemplar: &OperationExemplar) -> Result<Vec<AtomicStep>, Issue> {
    let missing = |argument: String| Issue::MissingArgument {
        context: format!("{} on `{}`", def.name, exemplar.target),
        argument,
    };
    let mut bindings: BTreeMap<&str, &str> = BTreeMap::new();
    bindings.insert(TARGET_PLACEHOLDER, &exemplar.target);
    for param in &def.params {
        match exemplar.args.get(param).filter(|v| !v.is_empty()) {
            Some(v) => bindings.insert(param, v),
            None => return Err(missing(param.clone())),
        };
    }
    def.recipe
        .iter()
        .map(|template| {
            let mut step = AtomicStep::new(template.kind, substitute(&template.target, &bindings).map_err(missing)?);
            for (name, value) in &template.args {
                step.args.insert(name.clone(), substitute(value, &bindings).map_err(missing)?);
            }
            Ok(step)
        })
        .collect()
}

/// Checks an exemplar against the catalog and the model it will run on.
///
/// Reports unknown types, unknown targets, target-kind mismatches,
/// metamodel gating, missing or undeclared arguments, and finally any
/// precondition failure of the expanded steps executed in sequence.
pub fn validate_exemplar(catalog: &OperationCatalog, base: &ProcessModel, exemplar: &OperationExemplar) -> Vec<Issue> {
    let def = match catalog.get(&exemplar.type_name) {
        Some(def) => def,
        None => return vec![Issue::UnknownOperationType { name: exemplar.type_name.clone() }],
    };
    let mut issues = Vec::new();
    if def.metamodel > base.metamodel() {
        issues.push(Issue::MetamodelGate {
            type_name: def.name.clone(),
            defined_in: def.metamodel,
            base: base.metamodel(),
        });
    }
    let actual = if let Some(e) = base.element(&exemplar.target) {
        Some(TargetKind::Element(e.kind))
    } else {
        base.reference(&exemplar.target).map(|r| TargetKind::Reference(r.kind))
    };
    match actual {
        None => issues.push(Issue::UnknownTargetId { type_name: def.name.clone(), target: exemplar.target.clone() }),
        Some(kind) if kind != def.target_kind => issues.push(Issue::TypeMismatch {
            type_name: def.name.clone(),
            target: exemplar.target.clone(),
            expected: def.target_kind.to_string(),
            actual: kind.to_string(),
        }),
        Some(_) => {}
    }
    for param in &def.params {
        if exemplar.args.get(param).is_none_or(String::is_empty) {
            issues.push(Issue::MissingArgument {
                context: format!("{} on `{}`", def.name, exemplar.target),
                argument: param.clone(),
            });
        }
    }
    for name in exemplar.args.keys() {
        if !def.params.contains(name) {
            issues.push(Issue::UnexpectedArgument { type_name: def.name.clone(), argument: name.clone() });
        }
    }
    if !issues.is_empty() {
        return issues;
    }

    let steps = match expand_exemplar(def, exemplar) {
        Ok(steps) => steps,
        Err(issue) => return vec![issue],
    };
    if let [step] = steps.as_slice() {
        return atomic::validate_step(base, step);
    }
    let mut scratch = base.clone();
    for step in &steps {
        let step_issues = atomic::validate_step(&scratch, step);
        if !step_issues.is_empty() {
            return step_issues;
        }
        atomic::apply_in_place(&mut scratch, step).expect("validated step applies");
    }
    Vec::new()
}
