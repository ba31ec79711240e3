//! Load the bundled study process line from XML, merge every variant in
//! parallel and report what each merge did.
//!
//! ```text
//! cargo run --example merge_process_line
//! ```

use std::path::Path;

use procline::catalog::OperationCatalog;
use procline::merge::{merge_all, resolve_chain, MergeOptions, VariantSet, DEFAULT_ROOT_ID};
use procline::xml::{parse_extension, parse_model};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/study");
    let root = parse_model(&std::fs::read(dir.join("reference.xml"))?)?;
    let mut set = VariantSet::with_root_id(DEFAULT_ROOT_ID, root);
    for file in ["bund.xml", "variant-a.xml", "variant-b.xml", "variant-c.xml", "variant-d.xml"] {
        set.insert(parse_extension(&std::fs::read(dir.join(file))?)?)?;
    }
    set.check_tree()?;

    let catalog = OperationCatalog::builtin();
    for (id, result) in merge_all(&set, &catalog, MergeOptions::default()) {
        let chain: Vec<&str> = resolve_chain(&set, &id)?.iter().map(|e| e.variant_id.as_str()).collect();
        match result {
            Ok((model, trace)) => {
                println!(
                    "{id:<5} chain {:<12} metamodel {:<5} {:>4} elements {:>4} references, {:>3} operations, {} for review",
                    chain.join(" > "),
                    model.metamodel().to_string(),
                    model.element_count(),
                    model.reference_count(),
                    trace.count("OperationExecuted"),
                    trace.review_items().count(),
                );
            }
            Err(e) => println!("{id:<5} failed: {e}"),
        }
    }
    Ok(())
}
