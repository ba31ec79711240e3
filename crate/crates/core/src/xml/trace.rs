use crate::merge::{MergeTrace, TraceEvent};

use super::dom::XmlWriter;
use super::SCHEMA_VERSION;

/// Serializes the trace events (not their change sets) in execution order.
///
/// ```text
/// <mergeTrace schemaVersion="1">
///   <entry seq="1" variant="Bund" event="ExclusionApplied" id="ptv1" cascadeCount="3"/>
///   <entry seq="2" variant="Bund" event="UntypedChange" excluded="ptv1" substitutes="ptv1b" review="true">…</entry>
/// </mergeTrace>
/// ```
pub fn serialize_trace(trace: &MergeTrace) -> Vec<u8> {
    let mut w = XmlWriter::new();
    let root = [("schemaVersion", SCHEMA_VERSION)];
    if trace.is_empty() {
        w.empty("mergeTrace", &root);
        return w.finish();
    }
    w.open("mergeTrace", &root);
    for (i, entry) in trace.iter().enumerate() {
        let seq = (i + 1).to_string();
        let mut attrs: Vec<(&str, String)> =
            vec![("seq", seq), ("variant", entry.variant.clone()), ("event", entry.event.name().to_string())];
        let mut text = String::new();
        match &entry.event {
            TraceEvent::MetamodelAdopted { from, to } => {
                attrs.push(("from", from.to_string()));
                attrs.push(("to", to.to_string()));
            }
            TraceEvent::AssetAdded { id } => attrs.push(("id", id.clone())),
            TraceEvent::ExclusionApplied { id, cascade_count } => {
                attrs.push(("id", id.clone()));
                attrs.push(("cascadeCount", cascade_count.to_string()));
            }
            TraceEvent::UntypedChange { description, excluded, substitutes } => {
                attrs.push(("excluded", excluded.clone()));
                attrs.push(("substitutes", substitutes.join(" ")));
                text = description.clone();
            }
            TraceEvent::OperationExecuted { type_name, target, step_count } => {
                attrs.push(("type", type_name.clone()));
                attrs.push(("target", target.clone()));
                attrs.push(("stepCount", step_count.to_string()));
            }
            TraceEvent::ConflictWarning { target, field, overridden, by } => {
                attrs.push(("target", target.clone()));
                attrs.push(("field", field.clone()));
                attrs.push(("overridden", overridden.clone()));
                attrs.push(("by", by.clone()));
            }
        }
        if entry.event.requires_review() {
            attrs.push(("review", "true".into()));
        }
        let borrowed: Vec<(&str, &str)> = attrs.iter().map(|(k, v)| (*k, v.as_str())).collect();
        w.text("entry", &borrowed, &text);
    }
    w.close("mergeTrace");
    w.finish()
}
