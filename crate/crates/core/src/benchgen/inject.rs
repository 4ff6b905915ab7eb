//! Bug mutations applied to one step's output, and the cascade that carries
//! the corrupted value downstream.

use serde::{Deserialize, Serialize};

use crate::trace::BugType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MutationKind {
    OperatorFlip,
    MessageTruncation,
    VariableSwap,
    ValidationSkip,
    RoleSwap,
}

impl MutationKind {
    pub fn for_bug(bug: BugType) -> Self {
        match bug {
            BugType::LogicError => MutationKind::OperatorFlip,
            BugType::CommunicationFailure => MutationKind::MessageTruncation,
            BugType::DataCorruption => MutationKind::VariableSwap,
            BugType::MissingValidation => MutationKind::ValidationSkip,
            BugType::RoleConfusion => MutationKind::RoleSwap,
        }
    }
}

/// Slot values a step's output was rendered from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepSlots {
    pub artifact: String,
    pub rule_var: String,
    pub op: String,
    pub limit: String,
    pub check: String,
    pub handoff_var: String,
    pub next_role: Option<String>,
}

impl StepSlots {
    pub fn rule(&self) -> String {
        format!("{} {} {}", self.rule_var, self.op, self.limit)
    }

    pub fn verified(&self) -> String {
        format!(" Verified {}.", self.check)
    }

    pub fn handoff(&self) -> Option<String> {
        self.next_role
            .as_ref()
            .map(|r| format!(" Handing {} to {}.", self.handoff_var, r))
    }
}

/// A textual edit: the first occurrence of `find` becomes `replace`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mutation {
    pub kind: MutationKind,
    pub find: String,
    pub replace: String,
    /// Corrupted value that downstream steps carry forward.
    pub carried: String,
    pub description: String,
}

impl Mutation {
    /// Applies the edit, or `None` when `find` does not occur in `text`.
    pub fn apply(&self, text: &str) -> Option<String> {
        text.contains(&self.find)
            .then(|| text.replacen(&self.find, &self.replace, 1))
    }
}

pub fn flip_operator(op: &str) -> &'static str {
    match op {
        ">" => "<=",
        ">=" => "<",
        "<" => ">=",
        "<=" => ">",
        "==" => "!=",
        _ => "==",
    }
}

/// Builds the mutation of `kind` for a step rendered from `slots` into
/// `output`. `other_role` names a roster role that is not the intended
/// recipient.
pub fn build_mutation(kind: MutationKind, slots: &StepSlots, output: &str, other_role: &str) -> Mutation {
    match kind {
        MutationKind::OperatorFlip => {
            let flipped = flip_operator(&slots.op);
            let to = format!("{} {} {}", slots.rule_var, flipped, slots.limit);
            Mutation {
                kind,
                find: slots.rule(),
                replace: to.clone(),
                carried: to,
                description: format!(
                    "Comparison flipped from {} to {} in the {} rule",
                    slots.op, flipped, slots.rule_var
                ),
            }
        }
        MutationKind::MessageTruncation => {
            // Keep roughly the first 40% of the text, cut at a word boundary.
            let cut = output.len() * 2 / 5;
            let at = output[..cut].rfind(' ').unwrap_or(cut);
            Mutation {
                kind,
                find: output[at..].to_string(),
                replace: String::new(),
                carried: format!("partial {}", slots.artifact),
                description: format!("Hand-off message cut short after {at} characters"),
            }
        }
        MutationKind::VariableSwap => {
            let to = format!("{} {} {}", slots.handoff_var, slots.op, slots.limit);
            Mutation {
                kind,
                find: slots.rule(),
                replace: to.clone(),
                carried: to,
                description: format!("Variable {} used in place of {}", slots.handoff_var, slots.rule_var),
            }
        }
        MutationKind::ValidationSkip => Mutation {
            kind,
            find: slots.verified(),
            replace: String::new(),
            carried: format!("unverified {}", slots.check),
            description: format!("Verification of {} skipped", slots.check),
        },
        MutationKind::RoleSwap => {
            let intended = slots.next_role.as_deref().unwrap_or(other_role);
            Mutation {
                kind,
                find: slots.handoff().unwrap_or_default(),
                replace: format!(
                    " Signed off {} directly as {}. Handing {} to {}.",
                    slots.check, other_role, slots.handoff_var, other_role
                ),
                carried: format!("{} sign-off by {}", slots.check, other_role),
                description: format!("Step acted as {other_role} instead of routing to {intended}"),
            }
        }
    }
}

/// Text appended to a downstream step that inherited the corrupted value.
pub fn cascade_note(carried: &str) -> String {
    format!(" Carried forward {carried}.")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slots() -> StepSlots {
        StepSlots {
            artifact: "patch".into(),
            rule_var: "total".into(),
            op: ">".into(),
            limit: "10".into(),
            check: "empty input".into(),
            handoff_var: "count".into(),
            next_role: Some("Reviewer".into()),
        }
    }

    const OUT: &str = "Implemented patch for a csv parser. Rule: total > 10. Verified empty input. Handing count to Reviewer.";

    #[test]
    fn each_kind_changes_the_text() {
        for kind in [
            MutationKind::OperatorFlip,
            MutationKind::MessageTruncation,
            MutationKind::VariableSwap,
            MutationKind::ValidationSkip,
            MutationKind::RoleSwap,
        ] {
            let m = build_mutation(kind, &slots(), OUT, "Executor");
            let got = m.apply(OUT).expect("find text present");
            assert_ne!(got, OUT, "{kind:?}");
        }
    }

    #[test]
    fn specific_edits() {
        let s = slots();
        let flip = build_mutation(MutationKind::OperatorFlip, &s, OUT, "Executor");
        assert!(flip.apply(OUT).unwrap().contains("total <= 10"));
        let swap = build_mutation(MutationKind::VariableSwap, &s, OUT, "Executor");
        assert!(swap.apply(OUT).unwrap().contains("Rule: count > 10."));
        let skip = build_mutation(MutationKind::ValidationSkip, &s, OUT, "Executor");
        assert!(!skip.apply(OUT).unwrap().contains("Verified"));
        let cut = build_mutation(MutationKind::MessageTruncation, &s, OUT, "Executor");
        let short = cut.apply(OUT).unwrap();
        assert!(OUT.starts_with(&short) && short.len() < OUT.len() / 2);
        let role = build_mutation(MutationKind::RoleSwap, &s, OUT, "Executor");
        assert!(role.apply(OUT).unwrap().ends_with("Handing count to Executor."));
    }

    #[test]
    fn flips_are_involutive_on_strict_pairs() {
        for op in [">", ">=", "<", "<="] {
            assert_eq!(flip_operator(flip_operator(op)), op);
        }
    }
}
