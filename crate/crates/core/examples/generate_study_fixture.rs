//! Writes the bundled fixtures: a reference process with five variants whose
//! exemplars follow a fixed per-type usage distribution, and a small masking
//! scenario.
//!
//! ```text
//! cargo run --example generate_study_fixture [-- <output dir>]
//! ```
//!
//! Family tree: `reference` <- Bund <- {B, C}; `reference` <- {A, D}.
//! Every exemplar gets its own target in the reference model so that all
//! variants merge cleanly; which group an unnamed synthetic type belongs to
//! is a fixture choice.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use procline::catalog::OperationExemplar;
use procline::merge::{ExtensionModel, DEFAULT_ROOT_ID};
use procline::model::{ElementKind, MetamodelVersion, ProcessElement, ProcessModel, Reference, ReferenceKind};
use procline::xml::{serialize_extension, serialize_model};

/// Exemplars per variant and operation type.
const USAGE: &[(&str, &[(&str, usize)])] = &[
    (
        "Bund",
        &[
            ("SyntheticRenameDiscipline", 1),
            ("RenameWorkProduct", 1),
            ("SyntheticRenameTopic", 2),
            ("RenameRole", 4),
            ("ReplaceSectionText", 25),
            ("ArrangeSection", 1),
            ("ChangeDisciplineNumber", 11),
            ("SyntheticReplaceDisciplineDescription", 1),
            ("SyntheticRemoveCreatingDependency", 7),
            ("SyntheticRenameAndDescribeWorkProduct", 4),
            ("RemoveTopicAssignment", 16),
            ("SyntheticArrangeTopic", 3),
            ("SyntheticReplaceActivityDescription", 1),
            ("SyntheticRemoveTailoringDependency", 2),
            ("SyntheticRenameProjectTypeVariant", 2),
            ("SyntheticChangeDecisionGateNumber", 5),
            ("SyntheticAddDecisionGateDescriptionPostfix", 5),
            ("SyntheticChangeChapterNumber", 1),
            ("SyntheticRemoveSection", 3),
            ("SyntheticReplaceMappingEntry", 3),
            ("SyntheticRemoveMappingLink", 1),
            ("RemoveLiteratureReference", 19),
            ("SyntheticReplaceAppendixText", 2),
            ("ChangeRoleClass", 20),
            ("ReplaceRoleDescription", 27),
        ],
    ),
    (
        "A",
        &[
            ("RenameWorkProduct", 3),
            ("SyntheticRenameTopic", 5),
            ("SyntheticRenameActivity", 1),
            ("SyntheticRemoveProcessModule", 1),
            ("SyntheticRenameDecisionGate", 2),
            ("SyntheticReplaceDecisionGateDescription", 1),
            ("ReplaceSectionText", 1),
            ("SyntheticAddChapterTextPostfix", 2),
            ("ArrangeSection", 1),
        ],
    ),
    (
        "B",
        &[
            ("SyntheticReplaceWorkProductDescription", 3),
            ("SyntheticReplaceTopicDescription", 5),
            ("SyntheticAddTopicDescriptionPostfix", 4),
            ("RenameRole", 18),
            ("ChangeResponsibility", 6),
            ("SyntheticRemoveProcessModule", 1),
            ("SyntheticReplaceDecisionGateDescription", 1),
            ("ReplaceSectionText", 4),
            ("SyntheticAddChapterTextPostfix", 2),
            ("SyntheticAddSectionTextPostfix", 2),
            ("ArrangeSection", 6),
            ("SyntheticRenameAndDescribeWorkProduct", 2),
            ("SyntheticRemoveLiteratureLink", 1),
            ("ReplaceRoleDescription", 7),
            ("RemoveSupportingRole", 10),
        ],
    ),
    (
        "C",
        &[
            ("SyntheticRenameDiscipline", 2),
            ("SyntheticAddTopicDescriptionPostfix", 1),
            ("ChangeResponsibility", 10),
            ("SyntheticAddRoleDescriptionPostfix", 4),
            ("ReplaceSectionText", 16),
            ("SyntheticReplaceChapterText", 5),
            ("SyntheticReplaceSectionTitle", 3),
            ("SyntheticAddSectionTextPostfix", 1),
            ("ArrangeSection", 4),
            ("SyntheticArrangeChapter", 1),
            ("SyntheticReplaceMethodReference", 6),
            ("SyntheticReplaceToolReference", 5),
            ("SyntheticReplaceDisciplineDescription", 1),
            ("SyntheticRenameAndDescribeWorkProduct", 1),
            ("SyntheticRemoveLiteratureLink", 2),
            ("SyntheticRemoveSubTopic", 3),
            ("SyntheticRemoveMappingLink", 1),
            ("ChangeRoleClass", 16),
            ("RemoveSupportingRole", 2),
        ],
    ),
];

const ROLE_CLASSES: &[&str] = &["Legacy", "Management", "Engineering", "Quality", "External"];

fn names(kind: ElementKind) -> &'static [&'static str] {
    use ElementKind::*;
    match kind {
        Discipline => &[
            "Project Management",
            "Quality Assurance",
            "Configuration Management",
            "System Development",
            "Acquisition",
            "Evaluation",
        ],
        WorkProduct => &[
            "Project Manual",
            "QA Manual",
            "Project Plan",
            "Risk List",
            "Status Report",
            "Evaluation Report",
            "System Specification",
            "Test Specification",
            "Change Request",
            "Delivery Note",
        ],
        Topic => &[
            "Objectives",
            "Risks",
            "Schedule",
            "Budget",
            "Interfaces",
            "Acceptance Criteria",
            "Constraints",
            "Stakeholders",
        ],
        SubTopic => &["Scope", "Assumptions", "Dependencies", "Open Points"],
        Activity => &["Plan Project", "Assess Quality", "Manage Changes", "Specify System"],
        Task => &["Prepare Review", "Record Decision"],
        Role => &[
            "Project Manager",
            "Quality Manager",
            "Configuration Manager",
            "System Architect",
            "Developer",
            "Tester",
            "Evaluator",
            "Procurement Officer",
            "Data Protection Officer",
            "Security Officer",
        ],
        DecisionGate => &[
            "Project Approved",
            "Project Defined",
            "Requirements Specified",
            "System Designed",
            "System Integrated",
            "Acceptance Completed",
        ],
        ProcessModule => &[
            "Project Management",
            "Quality Assurance",
            "Configuration Management",
            "Problem and Change Management",
            "System Development",
        ],
        ProjectTypeVariant => &[
            "Development Project (Acquirer)",
            "Development Project (Supplier)",
            "Introduction of a Process Model",
            "Maintenance Project",
        ],
        Chapter => {
            &["Introduction", "Fundamentals", "Tailoring", "Roles", "Work Products", "Activities", "Conventions"]
        }
        Section => &[
            "Purpose",
            "Structure",
            "Responsibilities",
            "Procedure",
            "Examples",
            "References",
            "Notes",
            "Quality Criteria",
        ],
        GlossaryItem => &["Baseline", "Milestone"],
        Abbreviation => &["QA", "CM"],
        LiteratureReference => {
            &["ISO 9001", "ISO/IEC 12207", "ISO/IEC 15504", "CMMI for Development", "IEEE 1012", "ISO 10007"]
        }
        MethodReference => &["Function Point Analysis", "Use Case Modeling", "Earned Value Analysis"],
        ToolReference => &["Issue Tracker", "Version Control System", "Requirements Database"],
        MappingEntry => &["CMMI Project Planning", "CMMI Process and Product QA", "ISO 9001 Clause 7"],
        AppendixEntry => &["Document Templates", "Sample Schedule"],
    }
}

fn prefix(kind: ElementKind) -> &'static str {
    use ElementKind::*;
    match kind {
        Discipline => "disc",
        WorkProduct => "wp",
        Topic => "topic",
        SubTopic => "subtopic",
        Activity => "act",
        Task => "task",
        Role => "role",
        DecisionGate => "dg",
        ProcessModule => "pm",
        ProjectTypeVariant => "ptv",
        Chapter => "ch",
        Section => "sec",
        GlossaryItem => "gloss",
        Abbreviation => "abbr",
        LiteratureReference => "lit",
        MethodReference => "method",
        ToolReference => "tool",
        MappingEntry => "map",
        AppendixEntry => "app",
    }
}

fn has_ordering_number(kind: ElementKind) -> bool {
    use ElementKind::*;
    matches!(kind, Discipline | Topic | SubTopic | DecisionGate | Chapter | Section)
}

fn has_body(kind: ElementKind) -> bool {
    matches!(kind, ElementKind::Chapter | ElementKind::Section | ElementKind::AppendixEntry)
}

#[derive(Default)]
struct Builder {
    elements: Vec<ProcessElement>,
    references: Vec<Reference>,
    seq: BTreeMap<&'static str, usize>,
}

impl Builder {
    fn next_id(&mut self, prefix: &'static str) -> (String, usize) {
        let n = self.seq.entry(prefix).or_insert(0);
        *n += 1;
        (format!("{prefix}-{:03}", *n), *n)
    }

    fn element(&mut self, kind: ElementKind) -> String {
        let (id, n) = self.next_id(prefix(kind));
        let pool = names(kind);
        let base = pool[(n - 1) % pool.len()];
        let name = if n <= pool.len() { base.to_string() } else { format!("{base} {}", (n - 1) / pool.len() + 1) };
        let mut e = ProcessElement::new(&id, kind, &name).with_description(format!("{name}: {}.", describe(kind)));
        if has_ordering_number(kind) {
            e = e.with_attribute("orderingNumber", format!("{}.{}", 1 + (n - 1) / 20, 1 + (n - 1) % 20));
        }
        if has_body(kind) {
            e = e.with_text_block("body", format!("Reference text of {name}."));
        }
        self.elements.push(e);
        id
    }

    fn reference(&mut self, kind: ReferenceKind, source: &str, target: &str) -> String {
        let (id, _) = self.next_id(ref_prefix(kind));
        self.references.push(Reference::new(&id, kind, source, target));
        id
    }

    fn ordering_number(&self, id: &str) -> String {
        let e = self.elements.iter().find(|e| e.id == id).expect("known element");
        let current = e.ordering_number().expect("numbered kind");
        let (major, minor) = current.split_once('.').expect("two components");
        format!("{}.{}", major.parse::<u64>().unwrap() + 10, minor)
    }

    fn name(&self, id: &str) -> &str {
        &self.elements.iter().find(|e| e.id == id).expect("known element").name
    }
}

fn describe(kind: ElementKind) -> &'static str {
    use ElementKind::*;
    match kind {
        Discipline => "groups related work products",
        WorkProduct => "result or intermediate result of the project",
        Topic => "content item of a work product",
        SubTopic => "detail of a topic",
        Activity => "produces a work product",
        Task => "step of an activity",
        Role => "responsible for work products",
        DecisionGate => "project milestone with a go/no-go decision",
        ProcessModule => "self-contained unit of process assets",
        ProjectTypeVariant => "selects the process modules for a project class",
        Chapter => "part of the process documentation",
        Section => "part of a chapter",
        GlossaryItem => "term definition",
        Abbreviation => "abbreviation",
        LiteratureReference => "external literature",
        MethodReference => "method supporting an activity",
        ToolReference => "tool supporting an activity",
        MappingEntry => "correspondence to an external standard",
        AppendixEntry => "supplementary material",
    }
}

fn ref_prefix(kind: ReferenceKind) -> &'static str {
    use ReferenceKind::*;
    match kind {
        Responsibility => "resp",
        SupportingRole => "supp",
        TopicAssignment => "ta",
        CreatingDependency => "cdep",
        TailoringDependency => "tdep",
        ModuleContainment => "mc",
        ConfigurationEntry => "ce",
        LiteratureLink => "ll",
        MethodLink => "ml",
        ToolLink => "tl",
        MappingLink => "mapl",
    }
}

/// Shared context the fresh targets hang off.
struct Pool {
    roles: Vec<String>,
    work_products: Vec<String>,
    topics: Vec<String>,
    modules: Vec<String>,
    ptv_dev: String,
    ptv_masked: String,
    sections: Vec<String>,
    literature: Vec<String>,
    mapping: Vec<String>,
}

fn pool(b: &mut Builder) -> Pool {
    let roles: Vec<String> = (0..6).map(|_| b.element(ElementKind::Role)).collect();
    let work_products: Vec<String> = (0..6).map(|_| b.element(ElementKind::WorkProduct)).collect();
    let topics: Vec<String> = (0..4).map(|_| b.element(ElementKind::Topic)).collect();
    let modules: Vec<String> = (0..5).map(|_| b.element(ElementKind::ProcessModule)).collect();
    let ptv_dev = b.element(ElementKind::ProjectTypeVariant);
    let ptv_masked = b.element(ElementKind::ProjectTypeVariant);
    for _ in 0..4 {
        b.element(ElementKind::Discipline);
    }
    let chapters: Vec<String> = (0..4).map(|_| b.element(ElementKind::Chapter)).collect();
    let sections: Vec<String> = (0..4).map(|_| b.element(ElementKind::Section)).collect();
    let literature: Vec<String> = (0..3).map(|_| b.element(ElementKind::LiteratureReference)).collect();
    let mapping: Vec<String> = (0..2).map(|_| b.element(ElementKind::MappingEntry)).collect();
    b.element(ElementKind::GlossaryItem);
    b.element(ElementKind::Abbreviation);
    let _ = chapters;

    for (i, wp) in work_products.iter().enumerate() {
        b.reference(ReferenceKind::Responsibility, wp, &roles[i % roles.len()]);
        b.reference(ReferenceKind::TopicAssignment, wp, &topics[i % topics.len()]);
        b.reference(ReferenceKind::ModuleContainment, &modules[i % modules.len()], wp);
    }
    for r in &roles {
        b.reference(ReferenceKind::ModuleContainment, &modules[0], r);
    }
    for m in &modules[..3] {
        b.reference(ReferenceKind::ConfigurationEntry, &ptv_dev, m);
    }
    for m in &modules {
        b.reference(ReferenceKind::ConfigurationEntry, &ptv_masked, m);
    }
    b.reference(ReferenceKind::TailoringDependency, &modules[4], &modules[2]);
    b.reference(ReferenceKind::LiteratureLink, &sections[0], &literature[0]);
    b.reference(ReferenceKind::MappingLink, &mapping[0], &work_products[0]);
    Pool { roles, work_products, topics, modules, ptv_dev, ptv_masked, sections, literature, mapping }
}

fn pick(list: &[String], n: usize) -> &str {
    &list[n % list.len()]
}

/// Creates the target of one exemplar in the reference model and returns the
/// exemplar.
fn exemplar(b: &mut Builder, p: &Pool, variant: &str, type_name: &str, n: usize) -> OperationExemplar {
    use ElementKind as E;
    use ReferenceKind as R;
    let text = |what: &str| format!("{what}, as tailored for variant {variant}.");
    let on = |target: String| OperationExemplar::new(type_name, target);
    match type_name {
        "SyntheticRenameDiscipline"
        | "RenameWorkProduct"
        | "SyntheticRenameTopic"
        | "RenameRole"
        | "SyntheticRenameProjectTypeVariant"
        | "SyntheticRenameActivity"
        | "SyntheticRenameDecisionGate"
        | "SyntheticReplaceSectionTitle" => {
            let kind = match type_name {
                "SyntheticRenameDiscipline" => E::Discipline,
                "RenameWorkProduct" => E::WorkProduct,
                "SyntheticRenameTopic" => E::Topic,
                "RenameRole" => E::Role,
                "SyntheticRenameProjectTypeVariant" => E::ProjectTypeVariant,
                "SyntheticRenameActivity" => E::Activity,
                "SyntheticRenameDecisionGate" => E::DecisionGate,
                _ => E::Section,
            };
            let t = b.element(kind);
            let name = format!("{} ({variant})", b.name(&t));
            on(t).arg("newName", name)
        }
        "ReplaceSectionText"
        | "SyntheticReplaceChapterText"
        | "SyntheticReplaceAppendixText"
        | "SyntheticAddChapterTextPostfix"
        | "SyntheticAddSectionTextPostfix" => {
            let kind = match type_name {
                "ReplaceSectionText" | "SyntheticAddSectionTextPostfix" => E::Section,
                "SyntheticReplaceAppendixText" => E::AppendixEntry,
                _ => E::Chapter,
            };
            let t = b.element(kind);
            let body = text(&format!("Text of {}", b.name(&t)));
            on(t).arg("blockId", "body").arg("text", body)
        }
        "ArrangeSection"
        | "ChangeDisciplineNumber"
        | "SyntheticArrangeTopic"
        | "SyntheticChangeDecisionGateNumber"
        | "SyntheticChangeChapterNumber"
        | "SyntheticArrangeChapter" => {
            let kind = match type_name {
                "ArrangeSection" => E::Section,
                "ChangeDisciplineNumber" => E::Discipline,
                "SyntheticArrangeTopic" => E::Topic,
                "SyntheticChangeDecisionGateNumber" => E::DecisionGate,
                _ => E::Chapter,
            };
            let t = b.element(kind);
            let number = b.ordering_number(&t);
            on(t).arg("orderingNumber", number)
        }
        "SyntheticReplaceDisciplineDescription"
        | "SyntheticReplaceActivityDescription"
        | "SyntheticAddDecisionGateDescriptionPostfix"
        | "SyntheticReplaceMappingEntry"
        | "ReplaceRoleDescription"
        | "SyntheticReplaceDecisionGateDescription"
        | "SyntheticReplaceWorkProductDescription"
        | "SyntheticReplaceTopicDescription"
        | "SyntheticAddTopicDescriptionPostfix"
        | "SyntheticAddRoleDescriptionPostfix"
        | "SyntheticReplaceMethodReference"
        | "SyntheticReplaceToolReference" => {
            let kind = match type_name {
                "SyntheticReplaceDisciplineDescription" => E::Discipline,
                "SyntheticReplaceActivityDescription" => E::Activity,
                "SyntheticAddDecisionGateDescriptionPostfix" | "SyntheticReplaceDecisionGateDescription" => {
                    E::DecisionGate
                }
                "SyntheticReplaceMappingEntry" => E::MappingEntry,
                "ReplaceRoleDescription" | "SyntheticAddRoleDescriptionPostfix" => E::Role,
                "SyntheticReplaceWorkProductDescription" => E::WorkProduct,
                "SyntheticReplaceTopicDescription" | "SyntheticAddTopicDescriptionPostfix" => E::Topic,
                "SyntheticReplaceMethodReference" => E::MethodReference,
                _ => E::ToolReference,
            };
            let t = b.element(kind);
            let body = if type_name.contains("Postfix") {
                format!(" Applies to variant {variant}.")
            } else {
                text(&format!("Description of {}", b.name(&t)))
            };
            on(t).arg("text", body)
        }
        "SyntheticRenameAndDescribeWorkProduct" => {
            let t = b.element(E::WorkProduct);
            let name = format!("{} ({variant})", b.name(&t));
            let body = text(&format!("Description of {name}"));
            on(t).arg("newName", name).arg("text", body)
        }
        "ChangeRoleClass" => {
            let t = b.element(E::Role);
            on(t).arg("roleClass", ROLE_CLASSES[n % ROLE_CLASSES.len()])
        }
        "SyntheticRemoveSection"
        | "SyntheticRemoveSubTopic"
        | "SyntheticRemoveProcessModule"
        | "RemoveLiteratureReference" => {
            let t = match type_name {
                "SyntheticRemoveSection" => b.element(E::Section),
                "SyntheticRemoveSubTopic" => {
                    let t = b.element(E::SubTopic);
                    b.reference(R::ModuleContainment, pick(&p.modules, n), &t);
                    t
                }
                "SyntheticRemoveProcessModule" => {
                    let t = b.element(E::ProcessModule);
                    b.reference(R::ConfigurationEntry, &p.ptv_dev, &t);
                    t
                }
                _ => {
                    let t = b.element(E::LiteratureReference);
                    b.reference(R::LiteratureLink, pick(&p.sections, n), &t);
                    t
                }
            };
            on(t)
        }
        "SyntheticRemoveCreatingDependency" => {
            let t = b.reference(R::CreatingDependency, pick(&p.work_products, n), pick(&p.work_products, n + 1));
            on(t)
        }
        "RemoveTopicAssignment" => {
            let t = b.reference(R::TopicAssignment, pick(&p.work_products, n), pick(&p.topics, n + 1));
            on(t)
        }
        "SyntheticRemoveTailoringDependency" => {
            let t = b.reference(R::TailoringDependency, pick(&p.modules, n), pick(&p.modules, n + 1));
            on(t)
        }
        "SyntheticRemoveMappingLink" => {
            let t = b.reference(R::MappingLink, pick(&p.mapping, n), pick(&p.work_products, n));
            on(t)
        }
        "SyntheticRemoveLiteratureLink" => {
            let t = b.reference(R::LiteratureLink, pick(&p.sections, n), pick(&p.literature, n));
            on(t)
        }
        "RemoveSupportingRole" => {
            let t = b.reference(R::SupportingRole, pick(&p.work_products, n), pick(&p.roles, n + 2));
            on(t)
        }
        "ChangeResponsibility" => {
            let t = b.reference(R::Responsibility, pick(&p.work_products, n), pick(&p.roles, n));
            on(t).arg("newRole", pick(&p.roles, n + 1))
        }
        other => panic!("no fixture recipe for {other}"),
    }
}

fn metamodel_of(variant: &str) -> MetamodelVersion {
    match variant {
        "A" | "D" => MetamodelVersion::Mm13,
        "C" => MetamodelVersion::Mm13Z,
        _ => MetamodelVersion::Mm13B,
    }
}

fn parent_of(variant: &str) -> &'static str {
    match variant {
        "B" | "C" => "Bund",
        _ => DEFAULT_ROOT_ID,
    }
}

fn study(dir: &Path) -> std::io::Result<()> {
    let mut b = Builder::default();
    let p = pool(&mut b);
    let mut extensions = Vec::new();
    for (variant, usage) in USAGE {
        let mut ext = ExtensionModel::new(*variant, parent_of(variant), metamodel_of(variant));
        for (type_name, count) in *usage {
            for n in 0..*count {
                ext.exemplars.push(exemplar(&mut b, &p, variant, type_name, n));
            }
        }
        extensions.push(ext);
    }

    // Bund masks a top-level configuration: the original project type
    // variant goes, an agency-specific one with the same modules comes in.
    let bund = &mut extensions[0];
    let masked_name = b.name(&p.ptv_masked).to_string();
    bund.exclusions.push(p.ptv_masked.clone());
    bund.new_elements.push(
        ProcessElement::new("ptv-bund-001", ElementKind::ProjectTypeVariant, format!("{masked_name} (Bund)"))
            .with_description("Replaces the reference configuration for federal agencies."),
    );
    for (i, m) in p.modules.iter().enumerate() {
        bund.new_references.push(Reference::new(
            format!("ce-bund-{:03}", i + 1),
            ReferenceKind::ConfigurationEntry,
            "ptv-bund-001",
            m,
        ));
    }

    // D adds its own sub-process instead of using typed operations.
    let mut d = ExtensionModel::new("D", parent_of("D"), metamodel_of("D"))
        .with_element(
            ProcessElement::new("pm-d-001", ElementKind::ProcessModule, "Agile Delivery")
                .with_description("Iteration planning and review for small teams."),
        )
        .with_element(
            ProcessElement::new("role-d-001", ElementKind::Role, "Agile Coach")
                .with_description("Facilitates iteration planning and reviews."),
        )
        .with_element(
            ProcessElement::new("wp-d-001", ElementKind::WorkProduct, "Iteration Backlog")
                .with_description("Prioritised work items of the current iteration."),
        )
        .with_reference(Reference::new("mc-d-001", ReferenceKind::ModuleContainment, "pm-d-001", "role-d-001"))
        .with_reference(Reference::new("mc-d-002", ReferenceKind::ModuleContainment, "pm-d-001", "wp-d-001"))
        .with_reference(Reference::new("resp-d-001", ReferenceKind::Responsibility, "wp-d-001", "role-d-001"))
        .with_reference(Reference::new("ce-d-001", ReferenceKind::ConfigurationEntry, &p.ptv_dev, "pm-d-001"));
    d.new_elements.sort_by(|x, y| x.id.cmp(&y.id));
    extensions.push(d);

    let mut builder = ProcessModel::builder(MetamodelVersion::Mm13);
    for e in b.elements {
        builder = builder.element(e);
    }
    for r in b.references {
        builder = builder.reference(r);
    }
    let root = builder.build().expect("unique fixture ids");
    assert!(root.is_consistent(), "{:?}", root.check_consistency());

    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("reference.xml"), serialize_model(&root))?;
    for ext in &extensions {
        let file = match ext.variant_id.as_str() {
            "Bund" => "bund.xml".to_string(),
            v => format!("variant-{}.xml", v.to_lowercase()),
        };
        std::fs::write(dir.join(file), serialize_extension(ext))?;
    }
    Ok(())
}

fn masking(dir: &Path) -> std::io::Result<()> {
    let modules = ["pm-qa", "pm-cm", "pm-sd"];
    let mut builder = ProcessModel::builder(MetamodelVersion::Mm13B)
        .element(ProcessElement::new("pm-qa", ElementKind::ProcessModule, "Quality Assurance"))
        .element(ProcessElement::new("pm-cm", ElementKind::ProcessModule, "Configuration Management"))
        .element(ProcessElement::new("pm-sd", ElementKind::ProcessModule, "System Development"))
        .element(
            ProcessElement::new("ptv-supplier", ElementKind::ProjectTypeVariant, "Development Project (Supplier)")
                .with_description("Reference configuration for supplier projects."),
        )
        .element(ProcessElement::new("ptv-maint", ElementKind::ProjectTypeVariant, "Maintenance Project"));
    for (i, m) in modules.iter().enumerate() {
        builder = builder.reference(Reference::new(
            format!("ce-{}", i + 1),
            ReferenceKind::ConfigurationEntry,
            "ptv-supplier",
            *m,
        ));
    }
    builder = builder.reference(Reference::new("ce-4", ReferenceKind::ConfigurationEntry, "ptv-maint", "pm-cm"));
    let root = builder.build().expect("unique ids");

    let mut ext = ExtensionModel::new("Bund", DEFAULT_ROOT_ID, MetamodelVersion::Mm13B)
        .with_element(
            ProcessElement::new(
                "ptv-supplier-bund",
                ElementKind::ProjectTypeVariant,
                "Development Project (Supplier, Bund)",
            )
            .with_description("Agency configuration for supplier projects."),
        )
        .with_exclusion("ptv-supplier");
    for (i, m) in modules.iter().enumerate() {
        ext = ext.with_reference(Reference::new(
            format!("ce-bund-{}", i + 1),
            ReferenceKind::ConfigurationEntry,
            "ptv-supplier-bund",
            *m,
        ));
    }

    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("reference.xml"), serialize_model(&root))?;
    std::fs::write(dir.join("bund.xml"), serialize_extension(&ext))?;
    Ok(())
}

fn main() -> std::io::Result<()> {
    let out = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"));
    study(&out.join("study"))?;
    masking(&out.join("masking"))?;
    println!("fixtures written to {}", out.display());
    Ok(())
}
