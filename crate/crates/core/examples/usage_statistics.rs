//! Usage analytics over the bundled study process line: the group matrix,
//! unused types, the top ten and a CSV export.
//!
//! ```text
//! cargo run --example usage_statistics [-- <csv output path>]
//! ```

use std::path::Path;

use procline::analytics::{export_stats_csv, render_text, top_n, unused_report, usage_report};
use procline::catalog::OperationCatalog;
use procline::merge::VariantSet;
use procline::xml::{parse_extension, parse_model};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/study");
    let mut set = VariantSet::new(parse_model(&std::fs::read(dir.join("reference.xml"))?)?);
    for file in ["bund.xml", "variant-a.xml", "variant-b.xml", "variant-c.xml", "variant-d.xml"] {
        set.insert(parse_extension(&std::fs::read(dir.join(file))?)?)?;
    }

    let report = usage_report(&OperationCatalog::builtin(), &set);
    print!("{}", render_text(&report));

    let unused = unused_report(&report);
    println!();
    println!("never used ({:.1}%):", unused.fraction * 100.0);
    for name in &unused.types {
        println!("  {name}");
    }

    let top = top_n(&report, 3);
    println!();
    println!("top three: {}", top.iter().map(|r| format!("{} ({})", r.name, r.count)).collect::<Vec<_>>().join(", "));

    if let Some(path) = std::env::args_os().nth(1) {
        std::fs::write(&path, export_stats_csv(&report))?;
        println!("per-type CSV written to {}", Path::new(&path).display());
    }
    Ok(())
}
