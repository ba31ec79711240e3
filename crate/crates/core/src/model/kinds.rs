use std::fmt;
use std::str::FromStr;

/// Returned when a wire name does not match any variant of a closed enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownName(pub String);

impl fmt::Display for UnknownName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown name `{}`", self.0)
    }
}

impl std::error::Error for UnknownName {}

named_enum!(
    /// Kind of a process element in the structure model.
    ElementKind {
        Discipline,
        WorkProduct,
        Topic,
        SubTopic,
        Activity,
        Task,
        Role,
        DecisionGate,
        ProcessModule,
        ProjectTypeVariant,
        Chapter,
        Section,
        GlossaryItem,
        Abbreviation,
        LiteratureReference,
        MethodReference,
        ToolReference,
        MappingEntry,
        AppendixEntry,
    }
);

named_enum!(
    /// Kind of a dependency-model reference between two elements.
    ReferenceKind {
        Responsibility,
        SupportingRole,
        TopicAssignment,
        CreatingDependency,
        TailoringDependency,
        ModuleContainment,
        ConfigurationEntry,
        LiteratureLink,
        MethodLink,
        ToolLink,
        MappingLink,
    }
);

impl ElementKind {
    /// Configuration containers are the only kinds pre-tailoring (and masking) may exclude.
    pub fn is_container(self) -> bool {
        matches!(self, ElementKind::ProcessModule | ElementKind::ProjectTypeVariant)
    }
}

impl ReferenceKind {
    /// Admissible (source, target) kinds. `None` means any element kind.
    pub fn admits(self, source: ElementKind, target: ElementKind) -> bool {
        use ElementKind as E;
        let (sources, targets): (Option<&[ElementKind]>, Option<&[ElementKind]>) = match self {
            ReferenceKind::Responsibility => (Some(&[E::WorkProduct]), Some(&[E::Role])),
            ReferenceKind::SupportingRole => (Some(&[E::WorkProduct]), Some(&[E::Role])),
            ReferenceKind::TopicAssignment => (Some(&[E::WorkProduct]), Some(&[E::Topic])),
            ReferenceKind::CreatingDependency => (Some(&[E::WorkProduct]), Some(&[E::WorkProduct])),
            ReferenceKind::TailoringDependency => (Some(&[E::ProcessModule]), Some(&[E::ProcessModule])),
            ReferenceKind::ModuleContainment => (
                Some(&[E::ProcessModule]),
                Some(&[
                    E::Discipline,
                    E::WorkProduct,
                    E::Topic,
                    E::SubTopic,
                    E::Activity,
                    E::Task,
                    E::Role,
                    E::DecisionGate,
                ]),
            ),
            ReferenceKind::ConfigurationEntry => (Some(&[E::ProjectTypeVariant]), Some(&[E::ProcessModule])),
            ReferenceKind::LiteratureLink => (None, Some(&[E::LiteratureReference])),
            ReferenceKind::MethodLink => (None, Some(&[E::MethodReference])),
            ReferenceKind::ToolLink => (None, Some(&[E::ToolReference])),
            ReferenceKind::MappingLink => (Some(&[E::MappingEntry]), None),
        };
        sources.is_none_or(|s| s.contains(&source)) && targets.is_none_or(|t| t.contains(&target))
    }
}

/// Metamodel release a model or an operation type belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetamodelVersion {
    Mm13,
    Mm13B,
    Mm13Z,
}

impl MetamodelVersion {
    pub const ALL: &'static [MetamodelVersion] =
        &[MetamodelVersion::Mm13, MetamodelVersion::Mm13B, MetamodelVersion::Mm13Z];

    pub fn as_str(self) -> &'static str {
        match self {
            MetamodelVersion::Mm13 => "1.3",
            MetamodelVersion::Mm13B => "1.3B",
            MetamodelVersion::Mm13Z => "1.3Z",
        }
    }
}

impl fmt::Display for MetamodelVersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetamodelVersion {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1.3" => Ok(MetamodelVersion::Mm13),
            "1.3B" => Ok(MetamodelVersion::Mm13B),
            "1.3Z" => Ok(MetamodelVersion::Mm13Z),
            _ => Err(UnknownName(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for kind in ElementKind::ALL {
            assert_eq!(kind.as_str().parse::<ElementKind>().unwrap(), *kind);
        }
        for kind in ReferenceKind::ALL {
            assert_eq!(kind.as_str().parse::<ReferenceKind>().unwrap(), *kind);
        }
        for mm in MetamodelVersion::ALL {
            assert_eq!(mm.as_str().parse::<MetamodelVersion>().unwrap(), *mm);
        }
        assert!("Teleporter".parse::<ElementKind>().is_err());
    }

    #[test]
    fn element_and_reference_kind_names_are_disjoint() {
        for kind in ElementKind::ALL {
            assert!(kind.as_str().parse::<ReferenceKind>().is_err());
        }
    }

    #[test]
    fn metamodel_order() {
        assert!(MetamodelVersion::Mm13 < MetamodelVersion::Mm13B);
        assert!(MetamodelVersion::Mm13B < MetamodelVersion::Mm13Z);
    }

    #[test]
    fn responsibility_points_from_work_product_to_role() {
        let r = ReferenceKind::Responsibility;
        assert!(r.admits(ElementKind::WorkProduct, ElementKind::Role));
        assert!(!r.admits(ElementKind::WorkProduct, ElementKind::WorkProduct));
        assert!(!r.admits(ElementKind::Role, ElementKind::Role));
        assert!(ReferenceKind::LiteratureLink.admits(ElementKind::Section, ElementKind::LiteratureReference));
    }
}
