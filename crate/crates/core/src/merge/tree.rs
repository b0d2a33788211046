use super::equivalence::{check_extension_policy, classes_equivalent, Equivalence, Side};
use super::Rejection;
use crate::model::{ClassDef, ClassSpec};
use crate::rule::RuleId;

/// What happened to the classes of one tree merge.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreeMergeReport {
    /// Classes inserted, including every class of an inserted subtree.
    pub added: Vec<String>,
    pub duplicates_ignored: Vec<String>,
    /// Scaffolding in the current tree replaced by a regular definition.
    pub scaffolding_resolved: Vec<String>,
    pub warnings: Vec<String>,
}

/// Merges `incoming` into a copy of `current`, top-down from the root level.
pub fn merge_class_tree<S: ClassSpec>(
    current: &[ClassDef<S>],
    incoming: &[ClassDef<S>],
) -> Result<(Vec<ClassDef<S>>, TreeMergeReport), Rejection> {
    let mut merged = current.to_vec();
    let mut report = TreeMergeReport::default();
    merge_into(&mut merged, incoming, &mut report)?;
    Ok((merged, report))
}

pub(crate) fn merge_into<S: ClassSpec>(
    current: &mut Vec<ClassDef<S>>,
    incoming: &[ClassDef<S>],
    report: &mut TreeMergeReport,
) -> Result<(), Rejection> {
    merge_level(current, incoming, &mut Vec::new(), report)
}

fn merge_level<S: ClassSpec>(
    siblings: &mut Vec<ClassDef<S>>,
    incoming: &[ClassDef<S>],
    path: &mut Vec<String>,
    report: &mut TreeMergeReport,
) -> Result<(), Rejection> {
    for candidate in incoming {
        let parent_fqn = if path.is_empty() {
            S::ROOT.to_owned()
        } else {
            format!("{}.{}", S::ROOT, path.join("."))
        };
        let fqn = format!("{parent_fqn}.{}", candidate.name);

        // The parent exists because we descended into it, so the policy is
        // checked against this level alone.
        if let Err(violation) = check_extension_policy(candidate, &[], siblings) {
            return Err(Rejection::new(violation.rule, violation.reason).at(&fqn));
        }

        match siblings.iter_mut().find(|c| c.name == candidate.name) {
            Some(existing) => {
                match classes_equivalent(existing, candidate) {
                    Equivalence::Identical { warnings } => {
                        report.duplicates_ignored.push(fqn.clone());
                        report
                            .warnings
                            .extend(warnings.into_iter().map(|w| format!("{fqn}: {w}")));
                    }
                    Equivalence::ScaffoldingOf(Side::First) => {
                        existing.body = candidate.body.clone();
                        report.scaffolding_resolved.push(fqn.clone());
                    }
                    Equivalence::ScaffoldingOf(Side::Second) => {
                        report.duplicates_ignored.push(fqn.clone());
                    }
                    Equivalence::Conflict(reason) => {
                        return Err(Rejection::new(
                            RuleId::ClassConflict,
                            format!("conflicting duplicate {}: {reason}", S::CLASS_KIND),
                        )
                        .at(&fqn));
                    }
                }
                path.push(candidate.name.clone());
                let result = merge_level(&mut existing.children, &candidate.children, path, report);
                path.pop();
                result?;
            }
            None => {
                candidate.walk(&parent_fqn, &mut |name, _| {
                    report.added.push(name.to_owned())
                });
                siblings.push(candidate.clone());
            }
        }
    }
    Ok(())
}
