use std::fmt;

use crate::model::{ChangeSet, MetamodelVersion, ModelError, ProcessModel};

/// What a trace entry records.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    MetamodelAdopted {
        from: MetamodelVersion,
        to: MetamodelVersion,
    },
    AssetAdded {
        id: String,
    },
    ExclusionApplied {
        id: String,
        cascade_count: usize,
    },
    /// A container was excluded and replaced by new assets of the same kind
    /// without a typed operation. Always flagged for compliance review.
    UntypedChange {
        description: String,
        excluded: String,
        substitutes: Vec<String>,
    },
    OperationExecuted {
        type_name: String,
        target: String,
        step_count: usize,
    },
    /// Two exemplars replaced the same field; the later one won.
    ConflictWarning {
        target: String,
        field: String,
        overridden: String,
        by: String,
    },
}

impl TraceEvent {
    pub fn name(&self) -> &'static str {
        match self {
            TraceEvent::MetamodelAdopted { .. } => "MetamodelAdopted",
            TraceEvent::AssetAdded { .. } => "AssetAdded",
            TraceEvent::ExclusionApplied { .. } => "ExclusionApplied",
            TraceEvent::UntypedChange { .. } => "UntypedChange",
            TraceEvent::OperationExecuted { .. } => "OperationExecuted",
            TraceEvent::ConflictWarning { .. } => "ConflictWarning",
        }
    }

    pub fn requires_review(&self) -> bool {
        matches!(self, TraceEvent::UntypedChange { .. } | TraceEvent::ConflictWarning { .. })
    }
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::MetamodelAdopted { from, to } => write!(f, "MetamodelAdopted {from} -> {to}"),
            TraceEvent::AssetAdded { id } => write!(f, "AssetAdded {id}"),
            TraceEvent::ExclusionApplied { id, cascade_count } => {
                write!(f, "ExclusionApplied {id} (cascade {cascade_count})")
            }
            TraceEvent::UntypedChange { description, .. } => write!(f, "UntypedChange {description}"),
            TraceEvent::OperationExecuted { type_name, target, step_count } => {
                let unit = if *step_count == 1 { "step" } else { "steps" };
                write!(f, "OperationExecuted {type_name} on {target} ({step_count} {unit})")
            }
            TraceEvent::ConflictWarning { target, field, overridden, by } => {
                write!(f, "ConflictWarning {target}.{field}: {by} overrides {overridden}")
            }
        }
    }
}

/// One trace entry: the contributing variant, the event, and the exact
/// changes it made, in execution order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub variant: String,
    pub event: TraceEvent,
    pub changes: Vec<ChangeSet>,
}

/// Ordered audit record of a merge.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MergeTrace {
    entries: Vec<TraceEntry>,
}

impl MergeTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[TraceEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TraceEntry> {
        self.entries.iter()
    }

    pub(crate) fn push(&mut self, variant: &str, event: TraceEvent, changes: Vec<ChangeSet>) {
        self.entries.push(TraceEntry { variant: variant.to_string(), event, changes });
    }

    pub fn extend(&mut self, other: MergeTrace) {
        self.entries.extend(other.entries);
    }

    /// Entries that a compliance review has to look at.
    pub fn review_items(&self) -> impl Iterator<Item = &TraceEntry> + '_ {
        self.entries.iter().filter(|e| e.event.requires_review())
    }

    pub fn count(&self, event_name: &str) -> usize {
        self.entries.iter().filter(|e| e.event.name() == event_name).count()
    }

    /// Applies every recorded change set to `root` in order.
    pub fn replay(&self, root: &ProcessModel) -> Result<ProcessModel, ModelError> {
        let mut model = root.clone();
        for change in self.entries.iter().flat_map(|e| &e.changes) {
            change.apply_in_place(&mut model)?;
        }
        Ok(model)
    }
}

impl<'a> IntoIterator for &'a MergeTrace {
    type Item = &'a TraceEntry;
    type IntoIter = std::slice::Iter<'a, TraceEntry>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

/// One line per entry: sequence number, variant, event, review marker.
impl fmt::Display for MergeTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            write!(f, "{:>4}  [{}] {}", i + 1, e.variant, e.event)?;
            if e.event.requires_review() {
                f.write_str("  [review]")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
