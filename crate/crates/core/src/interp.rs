//! Views over interpretations: the three-level tree, fact text, and diffs.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::model::{pretty_print, Dialect, GroundLiteral, Interpretation, ModelError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Marker {
    #[serde(rename = "I")]
    Interpretation,
    #[serde(rename = "P")]
    Predicate,
    #[serde(rename = "L")]
    Literal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub label: String,
    pub marker: Marker,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<TreeNode>,
}

/// Root `I`, one `P` node per predicate (name/arity, both signs together),
/// one `L` node per literal.
pub fn to_tree(interpretation: &Interpretation) -> TreeNode {
    let mut root = TreeNode {
        label: interpretation
            .label
            .clone()
            .unwrap_or_else(|| "interpretation".into()),
        marker: Marker::Interpretation,
        children: Vec::new(),
    };
    // literal order already groups by (name, arity)
    for lit in interpretation.iter() {
        let sig = lit.signature().to_string();
        if root.children.last().map(|p| &p.label) != Some(&sig) {
            root.children.push(TreeNode {
                label: sig,
                marker: Marker::Predicate,
                children: Vec::new(),
            });
        }
        root.children.last_mut().unwrap().children.push(TreeNode {
            label: lit.to_string(),
            marker: Marker::Literal,
            children: Vec::new(),
        });
    }
    root
}

/// One fact per line, in tree order, without a trailing newline.
pub fn to_facts<'a>(
    literals: impl IntoIterator<Item = &'a GroundLiteral>,
    dialect: Dialect,
) -> Result<String, ModelError> {
    let mut sorted: Vec<&GroundLiteral> = literals.into_iter().collect();
    sorted.sort();
    sorted.dedup();
    let facts = sorted
        .into_iter()
        .map(|l| pretty_print(l, dialect))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(facts.join("\n"))
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct InterpretationDiff {
    pub only_left: BTreeSet<GroundLiteral>,
    pub only_right: BTreeSet<GroundLiteral>,
    pub common: BTreeSet<GroundLiteral>,
}

impl InterpretationDiff {
    pub fn is_identical(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty()
    }
}

pub fn diff(left: &Interpretation, right: &Interpretation) -> InterpretationDiff {
    let (l, r) = (left.literals(), right.literals());
    InterpretationDiff {
        only_left: l.difference(r).cloned().collect(),
        only_right: r.difference(l).cloned().collect(),
        common: l.intersection(r).cloned().collect(),
    }
}
