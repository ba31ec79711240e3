//! Defined-versus-used statistics over a family of variants.
//!
//! The counting unit is the exemplar: two exemplars addressing the same
//! element count twice. A type is used when at least one variant holds at
//! least one exemplar of it.

mod export;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::catalog::{OperationCatalog, OperationGroup};
use crate::merge::VariantSet;
use crate::model::MetamodelVersion;

pub use export::{export_group_csv, export_stats_csv, StatsRow, STATS_HEADER};

#[derive(Clone, Debug, PartialEq, Eq)]
struct TypeInfo {
    group: OperationGroup,
    metamodel: MetamodelVersion,
    synthetic: bool,
}

/// Usage statistics of one catalog over one variant set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UsageReport {
    types: BTreeMap<String, TypeInfo>,
    variants: Vec<String>,
    per_variant_type: BTreeMap<(String, String), usize>,
    unknown: BTreeMap<(String, String), usize>,
}

impl UsageReport {
    /// Variant ids in variant-set order.
    pub fn variants(&self) -> &[String] {
        &self.variants
    }

    pub fn catalog_size(&self) -> usize {
        self.types.len()
    }

    /// Catalog type names in name order.
    pub fn type_names(&self) -> impl Iterator<Item = &str> + '_ {
        self.types.keys().map(String::as_str)
    }

    pub fn defined_per_metamodel(&self) -> BTreeMap<MetamodelVersion, usize> {
        let mut counts: BTreeMap<MetamodelVersion, usize> = MetamodelVersion::ALL.iter().map(|&m| (m, 0)).collect();
        for info in self.types.values() {
            *counts.entry(info.metamodel).or_default() += 1;
        }
        counts
    }

    pub fn group_of(&self, type_name: &str) -> Option<OperationGroup> {
        self.types.get(type_name).map(|t| t.group)
    }

    pub fn metamodel_of(&self, type_name: &str) -> Option<MetamodelVersion> {
        self.types.get(type_name).map(|t| t.metamodel)
    }

    pub fn is_synthetic(&self, type_name: &str) -> bool {
        self.types.get(type_name).is_some_and(|t| t.synthetic)
    }

    /// Exemplars of `type_name` in `variant`.
    pub fn variant_type_count(&self, variant: &str, type_name: &str) -> usize {
        self.per_variant_type.get(&(variant.to_string(), type_name.to_string())).copied().unwrap_or(0)
    }

    /// Exemplars of `type_name` across all variants.
    pub fn type_count(&self, type_name: &str) -> usize {
        self.per_variant_type.iter().filter(|((_, t), _)| t == type_name).map(|(_, c)| c).sum()
    }

    /// Every catalog type with its total count, zeros included.
    pub fn per_type_counts(&self) -> BTreeMap<&str, usize> {
        let mut counts: BTreeMap<&str, usize> = self.types.keys().map(|k| (k.as_str(), 0)).collect();
        for ((_, t), c) in &self.per_variant_type {
            *counts.get_mut(t.as_str()).expect("counted types are catalog types") += c;
        }
        counts
    }

    /// One matrix cell: exemplars in `variant` whose type belongs to `group`
    /// and is defined by `metamodel`.
    pub fn cell(&self, variant: &str, group: OperationGroup, metamodel: MetamodelVersion) -> usize {
        self.per_variant_type
            .iter()
            .filter(|((v, t), _)| {
                v == variant && self.types.get(t).is_some_and(|i| i.group == group && i.metamodel == metamodel)
            })
            .map(|(_, c)| c)
            .sum()
    }

    pub fn group_total(&self, variant: &str, group: OperationGroup) -> usize {
        MetamodelVersion::ALL.iter().map(|&m| self.cell(variant, group, m)).sum()
    }

    /// Exemplars of known types in `variant`.
    pub fn variant_total(&self, variant: &str) -> usize {
        self.per_variant_type.iter().filter(|((v, _), _)| v == variant).map(|(_, c)| c).sum()
    }

    /// Exemplars of known types across all variants.
    pub fn grand_total(&self) -> usize {
        self.per_variant_type.values().sum()
    }

    /// Exemplars whose type is not in the catalog, per (variant, type name).
    pub fn unknown_types(&self) -> &BTreeMap<(String, String), usize> {
        &self.unknown
    }

    pub fn used_types(&self) -> BTreeSet<&str> {
        self.per_variant_type.keys().map(|(_, t)| t.as_str()).collect()
    }

    pub fn unused_types(&self) -> BTreeSet<&str> {
        let used = self.used_types();
        self.types.keys().map(String::as_str).filter(|t| !used.contains(t)).collect()
    }
}

/// Counts the exemplars of every extension in `set` against `catalog`.
pub fn usage_report(catalog: &OperationCatalog, set: &VariantSet) -> UsageReport {
    let types = catalog
        .iter()
        .map(|d| (d.name.clone(), TypeInfo { group: d.group, metamodel: d.metamodel, synthetic: d.synthetic }))
        .collect::<BTreeMap<_, _>>();
    let mut per_variant_type = BTreeMap::new();
    let mut unknown = BTreeMap::new();
    for ext in set.extensions() {
        for ex in &ext.exemplars {
            let key = (ext.variant_id.clone(), ex.type_name.clone());
            let bucket = if types.contains_key(&ex.type_name) { &mut per_variant_type } else { &mut unknown };
            *bucket.entry(key).or_insert(0) += 1;
        }
    }
    UsageReport { types, variants: set.variant_ids().map(str::to_string).collect(), per_variant_type, unknown }
}

/// One line of a frequency ranking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedType {
    pub name: String,
    pub count: usize,
    pub metamodel: MetamodelVersion,
}

/// The `n` most used types: count descending, then the newer defining
/// metamodel first, then name ascending. Unused types never appear.
pub fn top_n(report: &UsageReport, n: usize) -> Vec<RankedType> {
    let mut ranked: Vec<RankedType> = report
        .per_type_counts()
        .into_iter()
        .filter(|&(_, c)| c > 0)
        .map(|(name, count)| RankedType {
            name: name.to_string(),
            count,
            metamodel: report.metamodel_of(name).expect("catalog type"),
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.count.cmp(&a.count).then_with(|| b.metamodel.cmp(&a.metamodel)).then_with(|| a.name.cmp(&b.name))
    });
    ranked.truncate(n);
    ranked
}

/// Unused and defined counts of one metamodel version.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnusedShare {
    pub unused: usize,
    pub defined: usize,
}

impl UnusedShare {
    /// Unused share in percent; 0 when nothing is defined.
    pub fn percent(&self) -> f64 {
        percent(self.unused, self.defined)
    }
}

/// Types without any exemplar.
#[derive(Clone, Debug, PartialEq)]
pub struct UnusedReport {
    pub types: BTreeSet<String>,
    /// Unused share of the whole catalog, in `0.0..=1.0`.
    pub fraction: f64,
    pub per_metamodel: BTreeMap<MetamodelVersion, UnusedShare>,
}

pub fn unused_report(report: &UsageReport) -> UnusedReport {
    let unused = report.unused_types();
    let mut per_metamodel: BTreeMap<MetamodelVersion, UnusedShare> = report
        .defined_per_metamodel()
        .into_iter()
        .map(|(m, defined)| (m, UnusedShare { unused: 0, defined }))
        .collect();
    for t in &unused {
        let m = report.metamodel_of(t).expect("catalog type");
        per_metamodel.get_mut(&m).expect("all versions present").unused += 1;
    }
    let fraction = if report.catalog_size() == 0 { 0.0 } else { unused.len() as f64 / report.catalog_size() as f64 };
    UnusedReport { types: unused.into_iter().map(str::to_string).collect(), fraction, per_metamodel }
}

fn percent(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        100.0 * part as f64 / whole as f64
    }
}

fn write_row(out: &mut String, first: &str, width: usize, cells: &[String], cell_width: usize) {
    let _ = write!(out, "{first:<width$}");
    for c in cells {
        let _ = write!(out, " {c:>cell_width$}");
    }
    out.push('\n');
}

/// Aligned text tables: exemplars per group and variant with totals, the
/// same split by defining metamodel, the unused share and the top ten.
pub fn render_text(report: &UsageReport) -> String {
    let mut out = String::new();
    let label_width = OperationGroup::ALL.iter().map(|g| g.as_str().len()).max().unwrap_or(0).max(5);
    let cell_width = report.variants.iter().map(String::len).max().unwrap_or(0).max(5);

    let mut header: Vec<String> = report.variants.clone();
    header.push("Σ".into());
    write_row(&mut out, "Group", label_width, &header, cell_width);
    for &g in OperationGroup::ALL {
        let mut cells: Vec<String> = report.variants.iter().map(|v| report.group_total(v, g).to_string()).collect();
        cells.push(report.variants.iter().map(|v| report.group_total(v, g)).sum::<usize>().to_string());
        write_row(&mut out, g.as_str(), label_width, &cells, cell_width);
    }
    let mut totals: Vec<String> = report.variants.iter().map(|v| report.variant_total(v).to_string()).collect();
    totals.push(report.grand_total().to_string());
    write_row(&mut out, "Total", label_width, &totals, cell_width);

    let versions: Vec<MetamodelVersion> =
        report.defined_per_metamodel().into_iter().filter(|&(_, n)| n > 0).map(|(m, _)| m).collect();
    out.push('\n');
    let split_header: Vec<String> =
        report.variants.iter().flat_map(|v| versions.iter().map(move |m| format!("{v}/{m}"))).collect();
    let split_width = split_header.iter().map(String::len).max().unwrap_or(0).max(5);
    write_row(&mut out, "Group", label_width, &split_header, split_width);
    for &g in OperationGroup::ALL {
        let cells: Vec<String> = report
            .variants
            .iter()
            .flat_map(|v| versions.iter().map(move |&m| report.cell(v, g, m).to_string()))
            .collect();
        write_row(&mut out, g.as_str(), label_width, &cells, split_width);
    }

    let unused = unused_report(report);
    out.push('\n');
    let _ = writeln!(
        out,
        "Unused types: {} of {} ({:.1}%)",
        unused.types.len(),
        report.catalog_size(),
        100.0 * unused.fraction
    );
    for (m, share) in &unused.per_metamodel {
        if share.defined > 0 {
            let _ = writeln!(out, "  metamodel {m}: {} of {} ({:.1}%)", share.unused, share.defined, share.percent());
        }
    }

    let top = top_n(report, 10);
    if !top.is_empty() {
        let share: usize = top.iter().map(|t| t.count).sum();
        out.push('\n');
        let _ = writeln!(
            out,
            "Top {}: {share} of {} exemplars ({:.1}%)",
            top.len(),
            report.grand_total(),
            percent(share, report.grand_total())
        );
        let name_width = top.iter().map(|t| t.name.len()).max().unwrap_or(0);
        for (i, t) in top.iter().enumerate() {
            let _ = writeln!(out, "{:>4}  {:<name_width$}  {:>4}  {}", i + 1, t.name, t.count, t.metamodel);
        }
    }
    if !report.unknown.is_empty() {
        out.push('\n');
        out.push_str("Exemplars of unknown types:\n");
        for ((v, t), c) in &report.unknown {
            let _ = writeln!(out, "  {v}: {t} x{c}");
        }
    }
    out
}
