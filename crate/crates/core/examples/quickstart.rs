//! Build a tiny reference model in code, derive one variant from it and
//! print the merged model and its trace.
//!
//! ```text
//! cargo run --example quickstart
//! ```

use procline::catalog::{OperationCatalog, OperationExemplar};
use procline::merge::{merge_once, ExtensionModel, MergeOptions, DEFAULT_ROOT_ID};
use procline::model::{ElementKind, MetamodelVersion, ProcessElement, ProcessModel, Reference, ReferenceKind};
use procline::xml::serialize_model;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let reference = ProcessModel::builder(MetamodelVersion::Mm13)
        .element(ProcessElement::new("role-qm", ElementKind::Role, "Quality Manager").with_description("Owns quality."))
        .element(ProcessElement::new("wp-qa", ElementKind::WorkProduct, "QA Manual"))
        .element(
            ProcessElement::new("sec-purpose", ElementKind::Section, "Purpose")
                .with_attribute("orderingNumber", "1.1")
                .with_text_block("body", "This process applies to all projects."),
        )
        .reference(Reference::new("resp-qa", ReferenceKind::Responsibility, "wp-qa", "role-qm"))
        .build()?;

    let variant = ExtensionModel::new("Agency", DEFAULT_ROOT_ID, MetamodelVersion::Mm13)
        .with_element(ProcessElement::new("role-dpo", ElementKind::Role, "Data Protection Officer"))
        .with_exemplar(OperationExemplar::new("RenameRole", "role-qm").arg("newName", "QA Lead"))
        .with_exemplar(
            OperationExemplar::new("ReplaceSectionText", "sec-purpose")
                .arg("blockId", "body")
                .arg("text", "This process applies to agency projects."),
        );

    let (merged, trace) = merge_once(&reference, &variant, &OperationCatalog::builtin(), MergeOptions::default())?;
    print!("{}", String::from_utf8(serialize_model(&merged))?);
    println!();
    print!("{trace}");
    Ok(())
}
