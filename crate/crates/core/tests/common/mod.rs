//! Seeded generators for random models and extensions, shared by the
//! integration tests.

#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;

use procline::catalog::{OperationCatalog, OperationExemplar, TargetKind};
use procline::merge::{ExtensionModel, VariantSet, DEFAULT_ROOT_ID};
use procline::model::{ElementKind, MetamodelVersion, ProcessElement, ProcessModel, Reference, ReferenceKind};
use procline::xml::{parse_extension, parse_model};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub const ELEMENT_KINDS: &[ElementKind] = &[
    ElementKind::Discipline,
    ElementKind::WorkProduct,
    ElementKind::Topic,
    ElementKind::SubTopic,
    ElementKind::Activity,
    ElementKind::Task,
    ElementKind::Role,
    ElementKind::DecisionGate,
    ElementKind::ProcessModule,
    ElementKind::ProjectTypeVariant,
    ElementKind::Chapter,
    ElementKind::Section,
    ElementKind::GlossaryItem,
    ElementKind::Abbreviation,
    ElementKind::LiteratureReference,
    ElementKind::MethodReference,
    ElementKind::ToolReference,
    ElementKind::MappingEntry,
    ElementKind::AppendixEntry,
];

pub const REFERENCE_KINDS: &[ReferenceKind] = &[
    ReferenceKind::Responsibility,
    ReferenceKind::SupportingRole,
    ReferenceKind::TopicAssignment,
    ReferenceKind::CreatingDependency,
    ReferenceKind::TailoringDependency,
    ReferenceKind::ModuleContainment,
    ReferenceKind::ConfigurationEntry,
    ReferenceKind::LiteratureLink,
    ReferenceKind::MethodLink,
    ReferenceKind::ToolLink,
    ReferenceKind::MappingLink,
];

const WORDS: &[&str] = &["Plan", "Quality", "Review", "System", "Risk", "Module", "Test", "Agile", "Audit", "Contract"];

pub fn rng(seed: u64) -> TestRng {
    TestRng::seed_from_u64(seed)
}

fn words(rng: &mut TestRng, n: usize) -> String {
    (0..n).map(|_| *WORDS.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
}

fn ordering_number(rng: &mut TestRng) -> String {
    format!("{}.{}", rng.gen_range(1..10), rng.gen_range(1..30))
}

pub fn random_element(rng: &mut TestRng, id: String) -> ProcessElement {
    let kind = *ELEMENT_KINDS.choose(rng).unwrap();
    let n = rng.gen_range(1..4);
    let mut e = ProcessElement::new(id, kind, words(rng, n));
    if rng.gen_bool(0.7) {
        let n = rng.gen_range(2..6);
        e = e.with_description(words(rng, n));
    }
    if rng.gen_bool(0.5) {
        e = e.with_attribute("orderingNumber", ordering_number(rng));
    }
    if matches!(kind, ElementKind::Chapter | ElementKind::Section | ElementKind::AppendixEntry) || rng.gen_bool(0.1) {
        e = e.with_text_block("body", words(rng, 4));
    }
    e
}

fn random_reference(rng: &mut TestRng, id: String, elements: &[ProcessElement]) -> Option<Reference> {
    for _ in 0..20 {
        let kind = *REFERENCE_KINDS.choose(rng).unwrap();
        let s = elements.choose(rng)?;
        let t = elements.choose(rng)?;
        if kind.admits(s.kind, t.kind) {
            return Some(Reference::new(id, kind, &s.id, &t.id));
        }
    }
    None
}

fn random_metamodel(rng: &mut TestRng) -> MetamodelVersion {
    *MetamodelVersion::ALL.choose(rng).unwrap()
}

/// Random consistent model with up to `max_elements` elements.
pub fn random_model(rng: &mut TestRng, max_elements: usize) -> ProcessModel {
    let n = rng.gen_range(1..=max_elements);
    let elements: Vec<ProcessElement> = (0..n).map(|i| random_element(rng, format!("e{i}"))).collect();
    let refs: Vec<Reference> =
        (0..rng.gen_range(0..=n)).filter_map(|i| random_reference(rng, format!("r{i}"), &elements)).collect();
    let mut b = ProcessModel::builder(random_metamodel(rng));
    for e in elements {
        b = b.element(e);
    }
    for r in refs {
        b = b.reference(r);
    }
    b.build().unwrap()
}

fn ids_of_kind(model: &[ProcessElement], refs: &[Reference], kind: TargetKind) -> Vec<String> {
    match kind {
        TargetKind::Element(k) => model.iter().filter(|e| e.kind == k).map(|e| e.id.clone()).collect(),
        TargetKind::Reference(k) => refs.iter().filter(|r| r.kind == k).map(|r| r.id.clone()).collect(),
    }
}

fn arg_value(rng: &mut TestRng, param: &str, elements: &[ProcessElement], seq: &mut usize) -> String {
    let of_kind = |kind: ElementKind, rng: &mut TestRng| {
        let ids: Vec<&ProcessElement> = elements.iter().filter(|e| e.kind == kind).collect();
        ids.choose(rng).map_or_else(|| "missing".to_string(), |e| e.id.clone())
    };
    match param {
        "newName" => words(rng, 2),
        "text" => words(rng, 3),
        "orderingNumber" => {
            if rng.gen_bool(0.05) {
                "x.1".into()
            } else {
                ordering_number(rng)
            }
        }
        "blockId" => {
            if rng.gen_bool(0.9) {
                "body".into()
            } else {
                "intro".into()
            }
        }
        "roleClass" => ["Management", "Engineering", "Quality"].choose(rng).unwrap().to_string(),
        "newRole" | "baseRole" => of_kind(ElementKind::Role, rng),
        "module" => of_kind(ElementKind::ProcessModule, rng),
        "discipline" => of_kind(ElementKind::Discipline, rng),
        "entryId" => {
            *seq += 1;
            format!("ce-new-{seq}")
        }
        _ => words(rng, 1),
    }
}

/// Random extension of `base`. Most parts are valid by construction; a small
/// share of choices deliberately break a precondition.
pub fn random_extension(
    rng: &mut TestRng,
    base: &ProcessModel,
    catalog: &OperationCatalog,
    variant: &str,
    parent: &str,
    max_exemplars: usize,
) -> ExtensionModel {
    let metamodel = if rng.gen_bool(0.05) {
        random_metamodel(rng)
    } else {
        let higher: Vec<_> = MetamodelVersion::ALL.iter().filter(|m| **m >= base.metamodel()).collect();
        **higher.choose(rng).unwrap()
    };
    let mut ext = ExtensionModel::new(variant, parent, metamodel);
    let mut elements: Vec<ProcessElement> = base.elements().cloned().collect();
    let mut refs: Vec<Reference> = base.references().cloned().collect();

    for i in 0..rng.gen_range(0..4) {
        let id = if rng.gen_bool(0.03) { "e0".to_string() } else { format!("{variant}-n{i}") };
        let e = random_element(rng, id);
        elements.push(e.clone());
        ext.new_elements.push(e);
    }
    for i in 0..rng.gen_range(0..3) {
        if let Some(r) = random_reference(rng, format!("{variant}-nr{i}"), &elements) {
            refs.push(r.clone());
            ext.new_references.push(r);
        }
    }
    if rng.gen_bool(0.02) {
        ext.new_references.push(Reference::new(
            format!("{variant}-dangling"),
            ReferenceKind::MethodLink,
            "e0",
            "nowhere",
        ));
    }

    let containers: Vec<String> = elements.iter().filter(|e| e.kind.is_container()).map(|e| e.id.clone()).collect();
    for _ in 0..rng.gen_range(0..3) {
        let id = if rng.gen_bool(0.8) {
            containers.choose(rng).cloned()
        } else if rng.gen_bool(0.5) {
            refs.choose(rng).map(|r| r.id.clone())
        } else {
            Some("ghost".to_string())
        };
        if let Some(id) = id {
            ext.exclusions.push(id);
        }
    }

    let merged_mm = base.metamodel().max(metamodel);
    let defs: Vec<_> = catalog.iter().collect();
    let mut seq = 0;
    for _ in 0..rng.gen_range(0..=max_exemplars) {
        let def = loop {
            let def = *defs.choose(rng).unwrap();
            let gate_ok = def.metamodel <= merged_mm || rng.gen_bool(0.05);
            if gate_ok && !ids_of_kind(&elements, &refs, def.target_kind).is_empty() {
                break def;
            }
        };
        let target = if rng.gen_bool(0.97) {
            ids_of_kind(&elements, &refs, def.target_kind).choose(rng).unwrap().clone()
        } else {
            elements.choose(rng).unwrap().id.clone()
        };
        let mut ex = OperationExemplar::new(&def.name, target);
        for p in &def.params {
            if rng.gen_bool(0.99) {
                let v = arg_value(rng, p, &elements, &mut seq);
                ex = ex.arg(p, v);
            }
        }
        ext.exemplars.push(ex);
    }
    ext
}

pub fn fixture_dir(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub const STUDY_FILES: &[&str] = &["bund.xml", "variant-a.xml", "variant-b.xml", "variant-c.xml", "variant-d.xml"];

/// The bundled study process line.
pub fn study_set() -> VariantSet {
    let dir = fixture_dir("study");
    let root = parse_model(&std::fs::read(dir.join("reference.xml")).unwrap()).unwrap();
    let mut set = VariantSet::with_root_id(DEFAULT_ROOT_ID, root);
    for f in STUDY_FILES {
        set.insert(parse_extension(&std::fs::read(dir.join(f)).unwrap()).unwrap()).unwrap();
    }
    set
}

pub fn masking_set() -> VariantSet {
    let dir = fixture_dir("masking");
    let root = parse_model(&std::fs::read(dir.join("reference.xml")).unwrap()).unwrap();
    VariantSet::new(root)
        .with_extension(parse_extension(&std::fs::read(dir.join("bund.xml")).unwrap()).unwrap())
        .unwrap()
}
