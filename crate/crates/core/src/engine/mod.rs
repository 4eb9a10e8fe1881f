//! Reference grounder and answer-set engine for small programs.
//!
//! Grounding instantiates rules bottom-up over the atoms that could possibly
//! be derived. Enumeration is a backtracking search over atom assignments;
//! every candidate it reaches is checked against the reduct definition
//! before it is reported.

mod ground;
mod solve;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::model::{GroundLiteral, ModelError};
use crate::span::SourceSpan;

pub use ground::ground;
pub use solve::{answer_sets, enumerate, solve, SolveOptions};

pub type AtomId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("variable {variable} is unsafe at {span}")]
    Unsafe { variable: String, span: SourceSpan },
    #[error("unsupported construct at {span}: {construct}")]
    Unsupported { construct: String, span: SourceSpan },
    #[error("evaluation error at {span}: {message}")]
    Evaluation { message: String, span: SourceSpan },
    #[error("capacity exceeded: more than {bound} ground {what}")]
    Capacity { what: &'static str, bound: usize },
    #[error("enumeration cancelled")]
    Cancelled,
}

impl EngineError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            EngineError::Unsafe { .. } => "unsafe-variable",
            EngineError::Unsupported { .. } => "unsupported-construct",
            EngineError::Evaluation { .. } => "evaluation-error",
            EngineError::Capacity { .. } => "capacity-exceeded",
            EngineError::Cancelled => "cancelled",
        }
    }

    fn evaluation(e: ModelError, span: &SourceSpan) -> Self {
        EngineError::Evaluation {
            message: match e {
                ModelError::Evaluation(m) => m,
                other => other.to_string(),
            },
            span: span.clone(),
        }
    }
}

/// Size bounds for grounding and enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_atoms: usize,
    pub max_rules: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_atoms: 5000,
            max_rules: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundRule {
    pub head: Vec<AtomId>,
    pub body_pos: Vec<AtomId>,
    /// Atoms under default negation.
    pub body_neg: Vec<AtomId>,
}

/// A variable-free program over a fixed, sorted atom base. Atom ids follow
/// the literal order of [`GroundLiteral`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroundProgram {
    atoms: Vec<GroundLiteral>,
    rules: Vec<GroundRule>,
}

impl GroundProgram {
    pub fn atoms(&self) -> &[GroundLiteral] {
        &self.atoms
    }

    pub fn atom(&self, id: AtomId) -> &GroundLiteral {
        &self.atoms[id]
    }

    pub fn id(&self, literal: &GroundLiteral) -> Option<AtomId> {
        self.atoms.binary_search(literal).ok()
    }

    pub fn rules(&self) -> &[GroundRule] {
        &self.rules
    }

    pub fn base(&self) -> BTreeSet<GroundLiteral> {
        self.atoms.iter().cloned().collect()
    }

    fn ids(&self, set: &BTreeSet<GroundLiteral>) -> Option<Vec<bool>> {
        let mut mask = vec![false; self.atoms.len()];
        for l in set {
            mask[self.id(l)?] = true;
        }
        Some(mask)
    }

    fn to_set(&self, mask: &[bool]) -> BTreeSet<GroundLiteral> {
        mask.iter()
            .enumerate()
            .filter(|(_, &t)| t)
            .map(|(i, _)| self.atoms[i].clone())
            .collect()
    }

    /// Pairs `(a, -a)` that both occur in the base.
    fn complementary_pairs(&self) -> Vec<(AtomId, AtomId)> {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(_, l)| l.strong_negation)
            .filter_map(|(i, l)| self.id(&l.complement()).map(|j| (j, i)))
            .collect()
    }
}

impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ids: &[AtomId], prefix: &str| {
            ids.iter()
                .map(|&i| format!("{prefix}{}", self.atoms[i]))
                .collect::<Vec<_>>()
        };
        for r in &self.rules {
            let head = join(&r.head, "").join(" | ");
            let mut body = join(&r.body_pos, "");
            body.extend(join(&r.body_neg, "not "));
            match (head.is_empty(), body.is_empty()) {
                (_, true) => writeln!(f, "{head}.")?,
                (true, false) => writeln!(f, ":- {}.", body.join(", "))?,
                (false, false) => writeln!(f, "{head} :- {}.", body.join(", "))?,
            }
        }
        Ok(())
    }
}

/// Collects ground rules over literals and assigns atom ids on `build`.
#[derive(Debug, Clone, Default)]
pub struct GroundProgramBuilder {
    atoms: BTreeSet<GroundLiteral>,
    rules: Vec<[Vec<GroundLiteral>; 3]>,
}

impl GroundProgramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_atom(&mut self, atom: GroundLiteral) -> &mut Self {
        self.atoms.insert(atom);
        self
    }

    pub fn add_rule(
        &mut self,
        head: Vec<GroundLiteral>,
        body_pos: Vec<GroundLiteral>,
        body_neg: Vec<GroundLiteral>,
    ) -> &mut Self {
        for l in head.iter().chain(&body_pos).chain(&body_neg) {
            if !self.atoms.contains(l) {
                self.atoms.insert(l.clone());
            }
        }
        self.rules.push([head, body_pos, body_neg]);
        self
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn build(self) -> GroundProgram {
        let atoms: Vec<GroundLiteral> = self.atoms.into_iter().collect();
        let index: HashMap<&GroundLiteral, AtomId> =
            atoms.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let ids = |ls: &[GroundLiteral]| {
            let mut v: Vec<AtomId> = ls.iter().map(|l| index[l]).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let rules: BTreeSet<GroundRule> = self
            .rules
            .iter()
            .map(|[h, p, n]| GroundRule {
                head: ids(h),
                body_pos: ids(p),
                body_neg: ids(n),
            })
            .collect();
        GroundProgram {
            rules: rules.into_iter().collect(),
            atoms,
        }
    }
}

/// Drops rules whose negative body meets `candidate` and strips the
/// negative bodies of the rest.
pub fn reduct(program: &GroundProgram, candidate: &BTreeSet<GroundLiteral>) -> GroundProgram {
    let in_candidate = |id: AtomId| candidate.contains(&program.atoms[id]);
    GroundProgram {
        atoms: program.atoms.clone(),
        rules: program
            .rules
            .iter()
            .filter(|r| !r.body_neg.iter().any(|&a| in_candidate(a)))
            .map(|r| GroundRule {
                head: r.head.clone(),
                body_pos: r.body_pos.clone(),
                body_neg: Vec::new(),
            })
            .collect(),
    }
}

/// Whether `candidate` is a minimal model of the reduct of `program`
/// relative to it. Candidates holding both an atom and its strong negation
/// are rejected.
pub fn is_answer_set(program: &GroundProgram, candidate: &BTreeSet<GroundLiteral>) -> bool {
    match program.ids(candidate) {
        Some(mask) => solve::is_answer_set_mask(program, &mask),
        None => false,
    }
}
