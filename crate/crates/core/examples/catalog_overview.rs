//! Summarize the shipped operation catalog: types per group and defining
//! metamodel, and the atomic recipe of a few types.
//!
//! ```text
//! cargo run --example catalog_overview
//! ```

use std::collections::BTreeMap;

use procline::catalog::{OperationCatalog, OperationGroup};
use procline::model::MetamodelVersion;

fn main() {
    let catalog = OperationCatalog::builtin();
    let mut per_group: BTreeMap<OperationGroup, BTreeMap<MetamodelVersion, usize>> = BTreeMap::new();
    for def in catalog.iter() {
        *per_group.entry(def.group).or_default().entry(def.metamodel).or_default() += 1;
    }

    println!("{:<30} {:>5} {:>5}", "Group", "1.3", "1.3B");
    for group in OperationGroup::ALL {
        let counts = per_group.get(group).cloned().unwrap_or_default();
        let get = |m| counts.get(&m).copied().unwrap_or(0);
        println!("{:<30} {:>5} {:>5}", group.to_string(), get(MetamodelVersion::Mm13), get(MetamodelVersion::Mm13B));
    }
    let totals = catalog.count_by_metamodel();
    println!("{} types: {:?}", catalog.len(), totals);

    for name in ["RenameRole", "ChangeResponsibility", "SyntheticRenameAndDescribeWorkProduct"] {
        let def = catalog.lookup(name).expect("shipped type");
        println!();
        println!("{} ({}, targets {}, params {:?})", def.name, def.metamodel, def.target_kind, def.params);
        for step in &def.recipe {
            println!("  {:?} {} {:?}", step.kind, step.target, step.args);
        }
    }
}
