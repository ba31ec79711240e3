//! Replace a whole project type variant without typed operations and show
//! how the trace flags the substitution for compliance review.
//!
//! ```text
//! cargo run --example masking
//! ```

use procline::merge::apply_masking;
use procline::model::{ElementKind, MetamodelVersion, ProcessElement, ProcessModel, Reference, ReferenceKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let reference = ProcessModel::builder(MetamodelVersion::Mm13B)
        .element(ProcessElement::new("pm-qa", ElementKind::ProcessModule, "Quality Assurance"))
        .element(ProcessElement::new("pm-sd", ElementKind::ProcessModule, "System Development"))
        .element(ProcessElement::new("ptv-supplier", ElementKind::ProjectTypeVariant, "Development Project (Supplier)"))
        .reference(Reference::new("ce-1", ReferenceKind::ConfigurationEntry, "ptv-supplier", "pm-qa"))
        .reference(Reference::new("ce-2", ReferenceKind::ConfigurationEntry, "ptv-supplier", "pm-sd"))
        .build()?;

    let substitute = ProcessElement::new("ptv-agency", ElementKind::ProjectTypeVariant, "Development Project (Agency)");
    let entries = [
        Reference::new("ce-agency-1", ReferenceKind::ConfigurationEntry, "ptv-agency", "pm-qa"),
        Reference::new("ce-agency-2", ReferenceKind::ConfigurationEntry, "ptv-agency", "pm-sd"),
    ];
    let (masked, trace) = apply_masking(&reference, "Agency", &["ptv-supplier".to_string()], &[substitute], &entries)?;

    println!("original present: {}", masked.element("ptv-supplier").is_some());
    println!("substitute present: {}", masked.element("ptv-agency").is_some());
    print!("{trace}");
    for item in trace.review_items() {
        println!("needs review: {}", item.event);
    }

    let err = apply_masking(&reference, "Agency", &["pm-qa-missing".to_string()], &[], &[]).unwrap_err();
    println!("{err}");
    for issue in err.issues() {
        println!("  {issue}");
    }
    Ok(())
}
