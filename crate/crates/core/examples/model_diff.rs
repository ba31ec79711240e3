//! Compare two process models, apply the difference back and apply single
//! atomic steps with their preconditions checked first.
//!
//! ```text
//! cargo run --example model_diff
//! ```

use procline::atomic::{apply_atomic, validate_step, AtomicStep, TextField, TextPosition};
use procline::model::{
    compare_models, ElementKind, MetamodelVersion, ProcessElement, ProcessModel, Reference, ReferenceKind,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let before = ProcessModel::builder(MetamodelVersion::Mm13)
        .element(ProcessElement::new("role-pm", ElementKind::Role, "Project Manager"))
        .element(ProcessElement::new("role-qm", ElementKind::Role, "Quality Manager"))
        .element(
            ProcessElement::new("wp-plan", ElementKind::WorkProduct, "Project Plan")
                .with_description("Schedule and budget."),
        )
        .reference(Reference::new("resp-plan", ReferenceKind::Responsibility, "wp-plan", "role-pm"))
        .build()?;

    let steps = [
        AtomicStep::rename("role-qm", "QA Lead"),
        AtomicStep::add_text("wp-plan", TextField::Description, TextPosition::Postfix, " Updated monthly."),
        AtomicStep::swap_target("resp-plan", "role-qm"),
        AtomicStep::remove_element("role-pm"),
        AtomicStep::swap_target("resp-plan", "wp-plan"),
    ];
    let mut after = before.clone();
    for step in &steps {
        let issues = validate_step(&after, step);
        if issues.is_empty() {
            after = apply_atomic(&after, step)?;
            println!("applied  {step}");
        } else {
            for issue in issues {
                println!("rejected {step}: {issue}");
            }
        }
    }

    let diff = compare_models(&before, &after);
    println!();
    println!("{} changes touching {:?}", diff.len(), diff.touched_ids());
    for e in &diff.removed_elements {
        println!("removed  {} {}", e.kind, e.id);
    }
    for m in &diff.modified_elements {
        println!("modified {}: {:?}", m.id, m.changes);
    }
    for m in &diff.modified_references {
        println!("modified {}: {:?}", m.id, m.changes);
    }
    assert_eq!(diff.apply(&before)?, after);
    Ok(())
}
