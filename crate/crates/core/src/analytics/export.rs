//! Spreadsheet export: UTF-8, comma separated, every field quoted, CRLF
//! record ends.

use super::UsageReport;

pub const STATS_HEADER: [&str; 5] =
    ["variantId", "operationGroup", "operationType", "definingMetamodel", "exemplarCount"];

/// One exported record. `operation_type` and `defining_metamodel` are `*` in
/// group-level exports; both are empty for exemplars of unknown types.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct StatsRow {
    pub variant_id: String,
    pub operation_group: String,
    pub operation_type: String,
    pub defining_metamodel: String,
    pub exemplar_count: usize,
}

fn write_rows(mut rows: Vec<StatsRow>) -> Vec<u8> {
    rows.sort();
    let mut w = csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::Always)
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    w.write_record(STATS_HEADER).expect("writing to memory");
    for r in rows {
        w.write_record([
            r.variant_id.as_str(),
            &r.operation_group,
            &r.operation_type,
            &r.defining_metamodel,
            &r.exemplar_count.to_string(),
        ])
        .expect("writing to memory");
    }
    w.into_inner().expect("writing to memory")
}

/// One row per variant and catalog type (zeros included), plus rows for
/// exemplars of unknown types; sorted by variant, group, type.
pub fn export_stats_csv(report: &UsageReport) -> Vec<u8> {
    let mut rows = Vec::new();
    for v in report.variants() {
        for (name, info) in &report.types {
            rows.push(StatsRow {
                variant_id: v.clone(),
                operation_group: info.group.to_string(),
                operation_type: name.clone(),
                defining_metamodel: info.metamodel.to_string(),
                exemplar_count: report.variant_type_count(v, name),
            });
        }
    }
    for ((v, t), c) in report.unknown_types() {
        rows.push(StatsRow {
            variant_id: v.clone(),
            operation_group: String::new(),
            operation_type: t.clone(),
            defining_metamodel: String::new(),
            exemplar_count: *c,
        });
    }
    write_rows(rows)
}

/// One row per variant and operation group, with `*` for type and
/// metamodel; sorted by variant and group.
pub fn export_group_csv(report: &UsageReport) -> Vec<u8> {
    let mut rows = Vec::new();
    for v in report.variants() {
        for &g in crate::catalog::OperationGroup::ALL {
            rows.push(StatsRow {
                variant_id: v.clone(),
                operation_group: g.to_string(),
                operation_type: "*".into(),
                defining_metamodel: "*".into(),
                exemplar_count: report.group_total(v, g),
            });
        }
    }
    write_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::usage_report;
    use crate::catalog::{OperationCatalog, OperationExemplar};
    use crate::merge::{ExtensionModel, VariantSet, DEFAULT_ROOT_ID};
    use crate::model::{MetamodelVersion, ProcessModel};

    #[test]
    fn empty_report_is_header_only() {
        let report =
            usage_report(&OperationCatalog::builtin(), &VariantSet::new(ProcessModel::new(MetamodelVersion::Mm13)));
        let expected = "\"variantId\",\"operationGroup\",\"operationType\",\"definingMetamodel\",\"exemplarCount\"\r\n";
        assert_eq!(String::from_utf8(export_stats_csv(&report)).unwrap(), expected);
        assert_eq!(String::from_utf8(export_group_csv(&report)).unwrap(), expected);
    }

    #[test]
    fn rows_are_sorted_and_complete() {
        let set = VariantSet::new(ProcessModel::new(MetamodelVersion::Mm13))
            .with_extension(
                ExtensionModel::new("Z", DEFAULT_ROOT_ID, MetamodelVersion::Mm13)
                    .with_exemplar(OperationExemplar::new("RenameRole", "r1")),
            )
            .unwrap()
            .with_extension(ExtensionModel::new("A", DEFAULT_ROOT_ID, MetamodelVersion::Mm13))
            .unwrap();
        let report = usage_report(&OperationCatalog::builtin(), &set);
        let bytes = export_stats_csv(&report);
        assert_eq!(bytes, export_stats_csv(&report));
        let mut reader = csv::Reader::from_reader(bytes.as_slice());
        let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
        assert_eq!(rows.len(), 2 * 69);
        assert_eq!(&rows[0][0], "A");
        assert_eq!(&rows[69][0], "Z");
        let rename = rows.iter().find(|r| &r[0] == "Z" && &r[2] == "RenameRole").unwrap();
        assert_eq!(&rename[4], "1");
        let groups = csv::Reader::from_reader(export_group_csv(&report).as_slice()).records().count();
        assert_eq!(groups, 2 * 15);
    }
}
