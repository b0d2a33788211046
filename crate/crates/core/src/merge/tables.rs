use std::collections::BTreeMap;

use super::Rejection;
use crate::model::*;
use crate::rule::RuleId;

/// Entries added and warnings raised by one table merge.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TableMergeReport {
    /// Table name to the entry names it gained, in merge order.
    pub added: BTreeMap<String, Vec<String>>,
    pub warnings: Vec<String>,
}

/// How two same-named entries of one table compare.
trait TableEntry: Named + Clone {
    const TABLE: &'static str;

    /// `Err` with a reason when the entries are not equivalent, `Ok(Some)`
    /// with a warning for tolerated differences.
    fn compare(&self, other: &Self) -> Result<Option<String>, String>;
}

macro_rules! exact_entry {
    ($($ty:ty => $table:literal),+) => {
        $(impl TableEntry for $ty {
            const TABLE: &'static str = $table;
            fn compare(&self, other: &Self) -> Result<Option<String>, String> {
                if self == other { Ok(None) } else { Err(format!("{:?} vs {:?}", self, other)) }
            }
        })+
    };
}

exact_entry!(
    Dimension => "dimensions",
    Transportation => "transportations",
    UpdateRate => "updateRates"
);

impl TableEntry for DataTypeDef {
    const TABLE: &'static str = "dataTypes";

    fn compare(&self, other: &Self) -> Result<Option<String>, String> {
        if self.category != other.category {
            Err(format!("category {} vs {}", self.category, other.category))
        } else if self.definition != other.definition {
            Err(format!(
                "definition {:?} vs {:?}",
                self.definition, other.definition
            ))
        } else {
            Ok(None)
        }
    }
}

impl TableEntry for SynchronizationPoint {
    const TABLE: &'static str = "synchronizations";

    fn compare(&self, other: &Self) -> Result<Option<String>, String> {
        if self.tag_data_type != other.tag_data_type {
            Err(format!(
                "tag data type {} vs {}",
                self.tag_data_type, other.tag_data_type
            ))
        } else if self.semantics != other.semantics {
            Ok(Some(format!(
                "synchronization {} has differing semantics text",
                self.label
            )))
        } else {
            Ok(None)
        }
    }
}

impl TableEntry for NoteEntry {
    const TABLE: &'static str = "notes";

    fn compare(&self, other: &Self) -> Result<Option<String>, String> {
        if self.body == other.body {
            Ok(None)
        } else {
            Err("note bodies differ".into())
        }
    }
}

fn merge_table<T: TableEntry>(
    current: &mut NamedTable<T>,
    incoming: &NamedTable<T>,
    report: &mut TableMergeReport,
) -> Result<(), Rejection> {
    for entry in incoming.iter() {
        match current.get(entry.key()) {
            None => {
                report
                    .added
                    .entry(T::TABLE.to_owned())
                    .or_default()
                    .push(entry.key().to_owned());
                let _ = current.insert(entry.clone());
            }
            Some(existing) => match existing.compare(entry) {
                Ok(None) => {}
                Ok(Some(warning)) => report.warnings.push(warning),
                Err(reason) => {
                    return Err(Rejection::new(
                        RuleId::TableConflict,
                        format!(
                            "duplicate {} entry {} is not equivalent: {reason}",
                            T::TABLE,
                            entry.key()
                        ),
                    )
                    .at(&format!("{}:{}", T::TABLE, entry.key())))
                }
            },
        }
    }
    Ok(())
}

/// Merges the flat tables and the switches table of `incoming` into `current`.
///
/// Entries new by name are added; entries already present must be
/// equivalent. Switches must match exactly when both sides have them; a
/// table present on one side only is adopted.
pub fn merge_tables(
    current: &mut ObjectModule,
    incoming: &ObjectModule,
) -> Result<TableMergeReport, Rejection> {
    let mut report = TableMergeReport::default();
    merge_table(&mut current.data_types, &incoming.data_types, &mut report)?;
    merge_table(&mut current.dimensions, &incoming.dimensions, &mut report)?;
    merge_table(
        &mut current.transportations,
        &incoming.transportations,
        &mut report,
    )?;
    merge_table(
        &mut current.synchronizations,
        &incoming.synchronizations,
        &mut report,
    )?;
    merge_table(
        &mut current.update_rates,
        &incoming.update_rates,
        &mut report,
    )?;
    merge_table(&mut current.notes, &incoming.notes, &mut report)?;

    match (&current.switches, &incoming.switches) {
        (Some(ours), Some(theirs)) if ours != theirs => {
            let differing: Vec<String> = ours
                .iter()
                .zip(theirs.iter())
                .filter(|(a, b)| a.1 != b.1)
                .map(|((key, a), (_, b))| format!("{key}={a} vs {b}"))
                .collect();
            return Err(Rejection::new(
                RuleId::SwitchesMismatch,
                format!(
                    "switches tables must be identical; differing: {}",
                    differing.join(", ")
                ),
            )
            .at("switches"));
        }
        (None, Some(theirs)) => {
            current.switches = Some(*theirs);
            report
                .added
                .entry("switches".into())
                .or_default()
                .push("switches".into());
        }
        _ => {}
    }
    Ok(report)
}
