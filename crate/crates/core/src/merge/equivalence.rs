use std::collections::HashSet;

use crate::model::{find_class, ClassBody, ClassDef, ClassSpec, Member, OBJECT_ROOT};
use crate::rule::RuleId;

/// Which argument of [`classes_equivalent`] a result refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    /// Same definition. Semantics text differences are reported as warnings.
    Identical {
        warnings: Vec<String>,
    },
    /// Exactly one side is scaffolding; the named side is the placeholder.
    ScaffoldingOf(Side),
    Conflict(String),
}

/// Compares two definitions of the same fully-qualified class.
///
/// Regular definitions are identical when the sharing indicator, the
/// class-level delivery settings (interactions), and the ordered member
/// lists agree field by field.
pub fn classes_equivalent<S: ClassSpec>(a: &ClassDef<S>, b: &ClassDef<S>) -> Equivalence {
    let (sa, sb) = match (&a.body, &b.body) {
        (ClassBody::Scaffolding, ClassBody::Scaffolding) => {
            return Equivalence::Identical {
                warnings: Vec::new(),
            }
        }
        (ClassBody::Scaffolding, ClassBody::Regular(_)) => {
            return Equivalence::ScaffoldingOf(Side::First)
        }
        (ClassBody::Regular(_), ClassBody::Scaffolding) => {
            return Equivalence::ScaffoldingOf(Side::Second)
        }
        (ClassBody::Regular(sa), ClassBody::Regular(sb)) => (sa, sb),
    };
    if let Some(reason) = sa.header_mismatch(sb) {
        return Equivalence::Conflict(reason);
    }
    let (ma, mb) = (sa.members(), sb.members());
    let names_a: Vec<&str> = ma.iter().map(Member::name).collect();
    let names_b: Vec<&str> = mb.iter().map(Member::name).collect();
    if names_a != names_b {
        let set_a: HashSet<_> = names_a.iter().collect();
        let set_b: HashSet<_> = names_b.iter().collect();
        let what = if set_a == set_b { "order" } else { "set" };
        return Equivalence::Conflict(format!(
            "{} {what} differs ([{}] vs [{}])",
            S::MEMBER_KIND,
            names_a.join(","),
            names_b.join(",")
        ));
    }
    let mut warnings = Vec::new();
    for (x, y) in ma.iter().zip(mb) {
        if !x.same_definition(y) {
            return Equivalence::Conflict(format!("{} {} differs", S::MEMBER_KIND, x.name()));
        }
        if x.semantics() != y.semantics() {
            warnings.push(format!(
                "{} {} has differing semantics text",
                S::MEMBER_KIND,
                x.name()
            ));
        }
    }
    Equivalence::Identical { warnings }
}

/// Why a candidate class may not be merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyViolation {
    pub rule: RuleId,
    pub reason: String,
}

pub(crate) fn extension_rule<S: ClassSpec>() -> RuleId {
    if S::ROOT == OBJECT_ROOT {
        RuleId::AttributeExtension
    } else {
        RuleId::ParameterExtension
    }
}

/// Checks a candidate class at `parent_path` (segments below the root)
/// against the permitted extensions: new root-level classes and new
/// subclasses of existing classes are allowed; adding attributes to an
/// existing object class or parameters to an existing interaction class
/// is not.
pub fn check_extension_policy<S: ClassSpec>(
    candidate: &ClassDef<S>,
    parent_path: &[&str],
    current: &[ClassDef<S>],
) -> Result<(), PolicyViolation> {
    let siblings = if parent_path.is_empty() {
        current
    } else {
        match find_class(current, parent_path) {
            Some(parent) => &parent.children,
            None => {
                return Err(PolicyViolation {
                    rule: RuleId::Ancestry,
                    reason: format!(
                        "superclass {}.{} of {} is not in the current FOM",
                        S::ROOT,
                        parent_path.join("."),
                        candidate.name
                    ),
                })
            }
        }
    };
    let Some(existing) = siblings.iter().find(|c| c.name == candidate.name) else {
        return Ok(());
    };
    if let (ClassBody::Regular(old), ClassBody::Regular(new)) = (&existing.body, &candidate.body) {
        let known: HashSet<&str> = old.members().iter().map(Member::name).collect();
        let added: Vec<&str> = new
            .members()
            .iter()
            .map(Member::name)
            .filter(|n| !known.contains(n))
            .collect();
        if !added.is_empty() {
            let option = if S::ROOT == OBJECT_ROOT { "c" } else { "d" };
            return Err(PolicyViolation {
                rule: extension_rule::<S>(),
                reason: format!(
                    "option ({option}) extension not permitted: adding {} {} to existing {} {}",
                    S::MEMBER_KIND,
                    added.join(","),
                    S::CLASS_KIND,
                    candidate.name
                ),
            });
        }
    }
    Ok(())
}
