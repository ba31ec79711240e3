mod common;

use proptest::prelude::*;

use procline::catalog::OperationExemplar;
use procline::merge::{ExtensionModel, DEFAULT_ROOT_ID};
use procline::model::{ElementKind, MetamodelVersion, ProcessElement, ProcessModel, Reference};
use procline::xml::{parse_extension, parse_model, serialize_extension, serialize_model};

fn text() -> impl Strategy<Value = String> {
    "[ -~äöüß\t\n<>&\"']{0,24}"
}

fn name() -> impl Strategy<Value = String> {
    "[A-Za-z][ -~äöü<>&]{0,16}"
}

fn element(index: usize) -> impl Strategy<Value = ProcessElement> {
    (
        prop::sample::select(common::ELEMENT_KINDS),
        name(),
        text(),
        prop::collection::btree_map("[a-z]{1,6}", text(), 0..3),
        prop::option::of(text()),
    )
        .prop_map(move |(kind, name, description, attributes, block)| {
            let mut e = ProcessElement::new(format!("e{index}"), kind, name).with_description(description);
            e.attributes = attributes;
            if let Some(b) = block {
                e = e.with_text_block("body", b);
            }
            e
        })
}

fn model() -> impl Strategy<Value = ProcessModel> {
    (1usize..12)
        .prop_flat_map(|n| {
            let elements: Vec<_> = (0..n).map(element).collect();
            (elements, prop::sample::select(MetamodelVersion::ALL))
        })
        .prop_map(|(elements, mm)| {
            let mut b = ProcessModel::builder(mm);
            let ids: Vec<(String, ElementKind)> = elements.iter().map(|e| (e.id.clone(), e.kind)).collect();
            for e in elements {
                b = b.element(e);
            }
            let mut n = 0;
            for (s, sk) in &ids {
                for (t, tk) in &ids {
                    if let Some(kind) = common::REFERENCE_KINDS.iter().find(|k| k.admits(*sk, *tk)) {
                        n += 1;
                        b = b.reference(Reference::new(format!("r{n}"), *kind, s, t));
                    }
                }
            }
            b.build().unwrap()
        })
}

proptest! {
    #[test]
    fn model_serialization_is_a_fixed_point(m in model()) {
        let bytes = serialize_model(&m);
        let parsed = parse_model(&bytes).unwrap();
        prop_assert_eq!(&parsed, &m);
        prop_assert_eq!(serialize_model(&parsed), bytes);
    }

    #[test]
    fn extension_serialization_is_a_fixed_point(
        m in model(),
        exclusions in prop::collection::vec("[a-z0-9]{1,5}", 0..3),
        args in prop::collection::btree_map("[a-zA-Z]{1,8}", text(), 0..3),
    ) {
        let mut ext = ExtensionModel::new("V", DEFAULT_ROOT_ID, m.metamodel());
        ext.new_elements = m.elements().cloned().collect();
        ext.new_references = m.references().cloned().collect();
        ext.exclusions = exclusions;
        let mut ex = OperationExemplar::new("RenameRole", "e0");
        ex.args = args;
        ext.exemplars.push(ex);
        let bytes = serialize_extension(&ext);
        let parsed = parse_extension(&bytes).unwrap();
        prop_assert_eq!(&parsed, &ext);
        prop_assert_eq!(serialize_extension(&parsed), bytes);
    }
}
