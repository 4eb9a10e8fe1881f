use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::model::{Interpretation, Program};

use super::{ground, AtomId, EngineError, GroundProgram, GroundRule, Limits};

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    /// Stop after this many answer sets.
    pub limit: Option<usize>,
    /// Checked between search steps; setting it aborts with
    /// [`EngineError::Cancelled`].
    pub cancel: Option<Arc<AtomicBool>>,
    pub limits: Limits,
}

type Assignment = Vec<Option<bool>>;

enum Status {
    Satisfied,
    Conflict,
    Unit(AtomId, bool),
    Open,
}

fn status(r: &GroundRule, a: &Assignment) -> Status {
    let mut open = 0;
    let mut last = (0, false);
    for &h in &r.head {
        match a[h] {
            Some(true) => return Status::Satisfied,
            None => {
                open += 1;
                last = (h, true);
            }
            Some(false) => {}
        }
    }
    for &b in &r.body_pos {
        match a[b] {
            Some(false) => return Status::Satisfied,
            None => {
                open += 1;
                last = (b, false);
            }
            Some(true) => {}
        }
    }
    for &b in &r.body_neg {
        match a[b] {
            Some(true) => return Status::Satisfied,
            None => {
                open += 1;
                last = (b, true);
            }
            Some(false) => {}
        }
    }
    match open {
        0 => Status::Conflict,
        1 => Status::Unit(last.0, last.1),
        _ => Status::Open,
    }
}

/// Whether rule `r` could still be the single support of atom `atom`.
fn may_support(r: &GroundRule, atom: AtomId, a: &Assignment) -> bool {
    r.body_pos.iter().all(|&b| a[b] != Some(false))
        && r.body_neg.iter().all(|&b| a[b] != Some(true))
        && r.head.iter().all(|&h| h == atom || a[h] != Some(true))
}

struct Search {
    rules: Vec<GroundRule>,
    supporters: Vec<Vec<usize>>,
}

impl Search {
    fn new(program: &GroundProgram) -> Self {
        let mut rules = program.rules.clone();
        for (a, na) in program.complementary_pairs() {
            rules.push(GroundRule {
                head: Vec::new(),
                body_pos: vec![a, na],
                body_neg: Vec::new(),
            });
        }
        let mut supporters = vec![Vec::new(); program.atoms.len()];
        for (i, r) in rules.iter().enumerate() {
            for &h in &r.head {
                supporters[h].push(i);
            }
        }
        Self {
            rules,
            supporters,
        }
    }

    fn set(a: &mut Assignment, atom: AtomId, value: bool) -> Result<bool, ()> {
        match a[atom] {
            Some(v) if v == value => Ok(false),
            Some(_) => Err(()),
            None => {
                a[atom] = Some(value);
                Ok(true)
            }
        }
    }

    /// Unit propagation on rule clauses plus support reasoning. `false` on
    /// conflict.
    fn propagate(&self, a: &mut Assignment) -> bool {
        self.propagate_inner(a).is_ok()
    }

    fn propagate_inner(&self, a: &mut Assignment) -> Result<(), ()> {
        loop {
            let mut changed = false;
            for r in &self.rules {
                match status(r, a) {
                    Status::Conflict => return Err(()),
                    Status::Unit(atom, v) => changed |= Self::set(a, atom, v)?,
                    _ => {}
                }
            }
            for atom in 0..a.len() {
                if a[atom] == Some(false) {
                    continue;
                }
                let mut candidates = self.supporters[atom]
                    .iter()
                    .filter(|&&r| may_support(&self.rules[r], atom, a));
                match (candidates.next(), candidates.next()) {
                    (None, _) => changed |= Self::set(a, atom, false)?,
                    (Some(&only), None) if a[atom] == Some(true) => {
                        let r = &self.rules[only];
                        for &b in &r.body_pos {
                            changed |= Self::set(a, b, true)?;
                        }
                        for &b in &r.body_neg {
                            changed |= Self::set(a, b, false)?;
                        }
                        for &h in r.head.iter().filter(|&&h| h != atom) {
                            changed |= Self::set(a, h, false)?;
                        }
                    }
                    _ => {}
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }
}

/// Tiny DPLL: is the clause set satisfiable? Literals are `(var, polarity)`.
fn satisfiable(vars: usize, clauses: &[Vec<(usize, bool)>]) -> bool {
    let mut stack: Vec<Vec<Option<bool>>> = vec![vec![None; vars]];
    'outer: while let Some(mut a) = stack.pop() {
        loop {
            let mut changed = false;
            for c in clauses {
                let mut open = None;
                let mut n_open = 0;
                let mut sat = false;
                for &(v, pol) in c {
                    match a[v] {
                        Some(x) if x == pol => {
                            sat = true;
                            break;
                        }
                        None => {
                            n_open += 1;
                            open = Some((v, pol));
                        }
                        _ => {}
                    }
                }
                if sat {
                    continue;
                }
                match (n_open, open) {
                    (0, _) => continue 'outer,
                    (1, Some((v, pol))) => {
                        a[v] = Some(pol);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        match a.iter().position(Option::is_none) {
            None => return true,
            Some(v) => {
                let mut f = a.clone();
                f[v] = Some(false);
                stack.push(f);
                a[v] = Some(true);
                stack.push(a);
            }
        }
    }
    false
}

pub(super) fn is_answer_set_mask(program: &GroundProgram, m: &[bool]) -> bool {
    if program
        .complementary_pairs()
        .iter()
        .any(|&(a, b)| m[a] && m[b])
    {
        return false;
    }
    let reduct = program
        .rules
        .iter()
        .filter(|r| !r.body_neg.iter().any(|&b| m[b]));
    // rules whose positive body holds in M; only these constrain subsets
    let mut active: Vec<(Vec<AtomId>, &[AtomId])> = Vec::new();
    for r in reduct {
        if r.body_pos.iter().all(|&b| m[b]) {
            let head: Vec<AtomId> = r.head.iter().copied().filter(|&h| m[h]).collect();
            if head.is_empty() {
                return false;
            }
            active.push((head, &r.body_pos));
        }
    }
    let members: Vec<AtomId> = (0..m.len()).filter(|&i| m[i]).collect();
    if members.is_empty() {
        return true;
    }
    if active.iter().all(|(h, _)| h.len() == 1) {
        // normal case: M must equal the least model of the active rules
        let mut least = vec![false; m.len()];
        loop {
            let mut changed = false;
            for (h, body) in &active {
                if !least[h[0]] && body.iter().all(|&b| least[b]) {
                    least[h[0]] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        return least == m;
    }
    let local: std::collections::HashMap<AtomId, usize> =
        members.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut clauses: Vec<Vec<(usize, bool)>> = active
        .iter()
        .map(|(h, body)| {
            body.iter()
                .map(|b| (local[b], false))
                .chain(h.iter().map(|x| (local[x], true)))
                .collect()
        })
        .collect();
    clauses.push((0..members.len()).map(|i| (i, false)).collect());
    !satisfiable(members.len(), &clauses)
}

/// Streams answer sets to `on_model` in lexicographic order of their
/// characteristic vectors over the sorted atom base, with membership
/// ordered before absence. Returns the number reported.
pub fn enumerate(
    program: &GroundProgram,
    options: &SolveOptions,
    mut on_model: impl FnMut(Interpretation) -> ControlFlow<()>,
) -> Result<usize, EngineError> {
    if program.atoms.len() > options.limits.max_atoms {
        return Err(EngineError::Capacity {
            what: "atoms",
            bound: options.limits.max_atoms,
        });
    }
    if program.rules.len() > options.limits.max_rules {
        return Err(EngineError::Capacity {
            what: "rules",
            bound: options.limits.max_rules,
        });
    }
    if options.limit == Some(0) {
        return Ok(0);
    }
    let search = Search::new(program);
    let mut found = 0;
    let mut stack: Vec<Assignment> = vec![vec![None; program.atoms.len()]];
    while let Some(mut a) = stack.pop() {
        if let Some(c) = &options.cancel {
            if c.load(Ordering::Relaxed) {
                return Err(EngineError::Cancelled);
            }
        }
        if !search.propagate(&mut a) {
            continue;
        }
        match a.iter().position(Option::is_none) {
            Some(i) => {
                let mut f = a.clone();
                f[i] = Some(false);
                stack.push(f);
                a[i] = Some(true);
                stack.push(a);
            }
            None => {
                let mask: Vec<bool> = a.iter().map(|v| *v == Some(true)).collect();
                if is_answer_set_mask(program, &mask) {
                    found += 1;
                    let interp = Interpretation::from_literals(program.to_set(&mask))
                        .expect("answer sets are consistent");
                    if on_model(interp).is_break() || Some(found) == options.limit {
                        break;
                    }
                }
            }
        }
    }
    Ok(found)
}

pub fn answer_sets(
    program: &GroundProgram,
    limit: Option<usize>,
) -> Result<Vec<Interpretation>, EngineError> {
    let mut out = Vec::new();
    let options = SolveOptions {
        limit,
        ..SolveOptions::default()
    };
    enumerate(program, &options, |i| {
        out.push(i);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Grounds and solves in one step.
pub fn solve(program: &Program, options: &SolveOptions) -> Result<Vec<Interpretation>, EngineError> {
    let ground = ground(program, options.limits)?;
    let mut out = Vec::new();
    enumerate(&ground, options, |i| {
        out.push(i);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}
