//! Finding an interpretation whose visualization is a given atom set.
//!
//! The search program extends the visualization program with a guess over
//! the candidate instances of each abducible predicate and one constraint
//! per wanted visualization atom. Answer sets are then filtered for an exact
//! match of the visualization atoms. Before solving, every visualization
//! atom the grounder deems derivable but which is not wanted is forbidden by
//! a constraint, which makes most candidates fail early.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use aspwb_core::engine::{ground, EngineError, Limits};
use aspwb_core::{
    BodyLiteral, GroundLiteral, Interpretation, PredicateSig, Program, Rule, StandardLiteral, Term,
};
use serde::{Deserialize, Serialize};

use crate::solver::AnswerSetSolver;
use crate::vocab::{is_vis_predicate, VisAtomSet};
use crate::VizError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AbductionProblem {
    pub vis_program: Program,
    pub target: VisAtomSet,
    pub abducibles: BTreeSet<PredicateSig>,
    /// Candidate instances of the abducible predicates.
    pub domains: Interpretation,
}

impl AbductionProblem {
    fn check(&self) -> Result<(), VizError> {
        for a in &self.abducibles {
            if is_vis_predicate(&a.name) {
                return Err(VizError::Problem(format!("abducible {a} is a visualization predicate")));
            }
        }
        for l in self.domains.iter() {
            if l.strong_negation || !self.abducibles.contains(&l.signature()) {
                return Err(VizError::Problem(format!("domain literal {l} is not an abducible atom")));
            }
        }
        Ok(())
    }
}

fn fresh_prefix(program: &Program, abducibles: &BTreeSet<PredicateSig>) -> String {
    let mut names: BTreeSet<&str> = abducibles.iter().map(|a| a.name.as_str()).collect();
    for r in &program.rules {
        for l in r.standard_literals() {
            names.insert(&l.predicate);
        }
    }
    let mut prefix = String::from("abd_");
    while names.iter().any(|n| n.starts_with(&prefix)) {
        prefix.insert(3, 'x');
    }
    prefix
}

fn constraint(l: StandardLiteral) -> Rule {
    Rule::new(Vec::new(), vec![BodyLiteral::Standard(l)])
}

/// The search program for `problem`, before pruning.
pub fn lambda(problem: &AbductionProblem) -> Result<Program, VizError> {
    problem.check()?;
    let mut p = problem.vis_program.clone();
    let prefix = fresh_prefix(&p, &problem.abducibles);
    for a in &problem.abducibles {
        let vars: Vec<Term> = (1..=a.arity).map(|i| Term::var(format!("X{i}"))).collect();
        let dom = format!("{prefix}dom_{}", a.name);
        let head = vec![
            StandardLiteral::atom(&a.name, vars.clone()),
            StandardLiteral::atom(format!("{prefix}not_{}", a.name), vars.clone()),
        ];
        p.rules.push(Rule::new(head, vec![BodyLiteral::Standard(StandardLiteral::atom(dom, vars))]));
    }
    for l in problem.domains.iter() {
        let mut fact = StandardLiteral::from(l);
        fact.predicate = format!("{prefix}dom_{}", l.predicate);
        p.rules.push(Rule::fact(fact));
    }
    for v in problem.target.iter() {
        p.rules.push(constraint(StandardLiteral::from(v).negated()));
    }
    Ok(p)
}

fn prune(program: &mut Program, target: &VisAtomSet) -> Result<(), VizError> {
    let g = match ground(program, Limits::default()) {
        Ok(g) => g,
        Err(e @ (EngineError::Capacity { .. } | EngineError::Cancelled)) => return Err(e.into()),
        // Left to the solver, which may support more.
        Err(_) => return Ok(()),
    };
    let unwanted: Vec<&GroundLiteral> = g
        .atoms()
        .iter()
        .filter(|a| is_vis_predicate(&a.predicate) && !target.atoms().contains(a))
        .collect();
    for w in unwanted {
        program.rules.push(constraint(StandardLiteral::from(w)));
    }
    Ok(())
}

/// Returns the abducible part of the first answer set whose visualization
/// atoms equal the target exactly.
pub fn abduce(problem: &AbductionProblem, solver: &dyn AnswerSetSolver) -> Result<Interpretation, VizError> {
    let mut program = lambda(problem)?;
    prune(&mut program, &problem.target)?;
    let mut found = None;
    solver.answer_sets(&program, &mut |m| {
        let vis = m.project(|l| is_vis_predicate(&l.predicate));
        if vis.same_literals(problem.target.atoms()) {
            found = Some(m.project(|l| problem.abducibles.contains(&l.signature())));
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    found.ok_or(VizError::AbductionUnsat)
}
