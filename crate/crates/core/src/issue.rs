use std::fmt;

use crate::model::{ElementKind, MetamodelVersion, ReferenceKind};

/// Which end of a reference an issue is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Source,
    Target,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Endpoint::Source => "source",
            Endpoint::Target => "target",
        })
    }
}

/// A problem found by a check. Checks return issues as data; callers decide
/// whether they are fatal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Issue {
    DuplicateId { id: String },
    DanglingReference { reference: String, endpoint: Endpoint, id: String },
    KindConstraintViolation { reference: String, kind: ReferenceKind, source: ElementKind, target: ElementKind },
    UnknownId { id: String },
    MissingArgument { context: String, argument: String },
    InvalidArgument { context: String, argument: String, reason: String },
    FieldNotFound { id: String, field: String },
    IllegalTarget { id: String, reason: String },
    UnknownOperationType { name: String },
    UnknownTargetId { type_name: String, target: String },
    TypeMismatch { type_name: String, target: String, expected: String, actual: String },
    MetamodelGate { type_name: String, defined_in: MetamodelVersion, base: MetamodelVersion },
    UnexpectedArgument { type_name: String, argument: String },
    UnknownExclusion { id: String },
    MetamodelDowngrade { base: MetamodelVersion, declared: MetamodelVersion },
}

impl Issue {
    /// Stable short name of the issue kind, used in diagnostics and reports.
    pub fn code(&self) -> &'static str {
        match self {
            Issue::DuplicateId { .. } => "DuplicateId",
            Issue::DanglingReference { .. } => "DanglingReference",
            Issue::KindConstraintViolation { .. } => "KindConstraintViolation",
            Issue::UnknownId { .. } => "UnknownId",
            Issue::MissingArgument { .. } => "MissingArgument",
            Issue::InvalidArgument { .. } => "InvalidArgument",
            Issue::FieldNotFound { .. } => "FieldNotFound",
            Issue::IllegalTarget { .. } => "IllegalTarget",
            Issue::UnknownOperationType { .. } => "UnknownOperationType",
            Issue::UnknownTargetId { .. } => "UnknownTargetId",
            Issue::TypeMismatch { .. } => "TypeMismatch",
            Issue::MetamodelGate { .. } => "MetamodelGate",
            Issue::UnexpectedArgument { .. } => "UnexpectedArgument",
            Issue::UnknownExclusion { .. } => "UnknownExclusion",
            Issue::MetamodelDowngrade { .. } => "MetamodelDowngrade",
        }
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.code())?;
        match self {
            Issue::DuplicateId { id } => write!(f, "id `{id}` is used more than once"),
            Issue::DanglingReference { reference, endpoint, id } => {
                write!(f, "reference `{reference}` {endpoint} `{id}` does not exist")
            }
            Issue::KindConstraintViolation { reference, kind, source, target } => {
                write!(f, "reference `{reference}` of kind {kind} cannot connect {source} to {target}")
            }
            Issue::UnknownId { id } => write!(f, "no element or reference with id `{id}`"),
            Issue::MissingArgument { context, argument } => {
                write!(f, "{context} requires argument `{argument}`")
            }
            Issue::InvalidArgument { context, argument, reason } => {
                write!(f, "{context}: argument `{argument}` {reason}")
            }
            Issue::FieldNotFound { id, field } => write!(f, "`{id}` has no field {field}"),
            Issue::IllegalTarget { id, reason } => write!(f, "`{id}`: {reason}"),
            Issue::UnknownOperationType { name } => write!(f, "no operation type named `{name}`"),
            Issue::UnknownTargetId { type_name, target } => {
                write!(f, "{type_name} targets `{target}`, which does not exist")
            }
            Issue::TypeMismatch { type_name, target, expected, actual } => {
                write!(f, "{type_name} expects a {expected} but `{target}` is a {actual}")
            }
            Issue::MetamodelGate { type_name, defined_in, base } => {
                write!(f, "{type_name} is defined by metamodel {defined_in}, newer than the base metamodel {base}")
            }
            Issue::UnexpectedArgument { type_name, argument } => {
                write!(f, "{type_name} does not declare argument `{argument}`")
            }
            Issue::UnknownExclusion { id } => write!(f, "excluded id `{id}` does not exist"),
            Issue::MetamodelDowngrade { base, declared } => {
                write!(f, "extension declares metamodel {declared}, older than its base metamodel {base}")
            }
        }
    }
}

impl std::error::Error for Issue {}
