//! Bottom-up instantiation.
//!
//! 1. Predicates defined only by definite rules over such predicates are
//!    deterministic; their least model is computed first and used to
//!    expand conditional literals.
//! 2. The set of possibly derivable atoms is computed as a fixpoint that
//!    ignores negation and treats every disjunct as derivable.
//! 3. Every rule is instantiated over that set. Negative literals on atoms
//!    that can never be derived are dropped.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::analysis::unsafe_variables;
use crate::model::*;
use crate::span::SourceSpan;

use super::{EngineError, GroundProgram, GroundProgramBuilder, Limits};

type Key = (bool, String, usize);
type Binding = BTreeMap<String, Value>;

fn key(l: &StandardLiteral) -> Key {
    (l.strong_negation, l.predicate.clone(), l.args.len())
}

#[derive(Default)]
struct Store {
    by_pred: HashMap<Key, Vec<GroundLiteral>>,
    all: HashSet<GroundLiteral>,
}

impl Store {
    fn insert(&mut self, l: GroundLiteral) -> bool {
        if self.all.contains(&l) {
            return false;
        }
        self.by_pred
            .entry((l.strong_negation, l.predicate.clone(), l.args.len()))
            .or_default()
            .push(l.clone());
        self.all.insert(l);
        true
    }

    fn get(&self, k: &Key) -> &[GroundLiteral] {
        self.by_pred.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    fn contains(&self, l: &GroundLiteral) -> bool {
        self.all.contains(l)
    }
}

fn unsupported(construct: impl Into<String>, span: &SourceSpan) -> EngineError {
    EngineError::Unsupported {
        construct: construct.into(),
        span: span.clone(),
    }
}

fn subst(t: &Term, b: &Binding) -> Term {
    match &t.kind {
        TermKind::Variable { name } => match b.get(name) {
            Some(v) => Term {
                span: t.span.clone(),
                ..v.to_term()
            },
            None => t.clone(),
        },
        TermKind::Constant(_) => t.clone(),
        TermKind::Function { name, args } => Term {
            kind: TermKind::Function {
                name: name.clone(),
                args: args.iter().map(|a| subst(a, b)).collect(),
            },
            span: t.span.clone(),
        },
        TermKind::Arithmetic { op, left, right } => Term {
            kind: TermKind::Arithmetic {
                op: *op,
                left: Box::new(subst(left, b)),
                right: Box::new(subst(right, b)),
            },
            span: t.span.clone(),
        },
        TermKind::Interval { low, high } => Term {
            kind: TermKind::Interval {
                low: Box::new(subst(low, b)),
                high: Box::new(subst(high, b)),
            },
            span: t.span.clone(),
        },
    }
}

fn eval(t: &Term, b: &Binding) -> Result<Value, EngineError> {
    subst(t, b).eval().map_err(|e| EngineError::evaluation(e, &t.span))
}

fn values(t: &Term, b: &Binding) -> Result<Vec<Value>, EngineError> {
    subst(t, b).values().map_err(|e| EngineError::evaluation(e, &t.span))
}

/// Variables under arithmetic or intervals; they must be bound before a
/// literal containing them can be matched.
fn nonbinding_vars(t: &Term, inside: bool, out: &mut Vec<String>) {
    match &t.kind {
        TermKind::Variable { name } if inside && name != "_" => out.push(name.clone()),
        TermKind::Function { args, .. } => {
            args.iter().for_each(|a| nonbinding_vars(a, inside, out))
        }
        TermKind::Arithmetic { left, right, .. } | TermKind::Interval { low: left, high: right } => {
            nonbinding_vars(left, true, out);
            nonbinding_vars(right, true, out);
        }
        _ => {}
    }
}

fn term_vars(t: &Term) -> Vec<String> {
    let mut v = Vec::new();
    t.variables(&mut v);
    v.into_iter()
        .filter_map(|t| t.as_variable().map(String::from))
        .filter(|n| n != "_")
        .collect()
}

fn match_term(pattern: &Term, v: &Value, b: &mut Binding) -> Result<bool, EngineError> {
    match &pattern.kind {
        TermKind::Variable { name } if name == "_" => Ok(true),
        TermKind::Variable { name } => match b.get(name) {
            Some(bound) => Ok(bound == v),
            None => {
                b.insert(name.clone(), v.clone());
                Ok(true)
            }
        },
        TermKind::Constant(c) => Ok(&Value::from(c.clone()) == v),
        TermKind::Function { name, args } => match v {
            Value::Function(n, vs) if n == name && vs.len() == args.len() => {
                for (a, x) in args.iter().zip(vs) {
                    if !match_term(a, x, b)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(false),
        },
        TermKind::Arithmetic { .. } => Ok(&eval(pattern, b)? == v),
        TermKind::Interval { .. } => Ok(values(pattern, b)?.contains(v)),
    }
}

fn match_literal(l: &StandardLiteral, atom: &GroundLiteral, b: &mut Binding) -> Result<bool, EngineError> {
    for (a, v) in l.args.iter().zip(&atom.args) {
        if !match_term(a, v, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All ground instances of a literal under `b` (several with intervals).
fn instances(l: &StandardLiteral, b: &Binding) -> Result<Vec<GroundLiteral>, EngineError> {
    let mut combos: Vec<Vec<Value>> = vec![Vec::new()];
    for a in &l.args {
        let vals = values(a, b)?;
        combos = combos
            .into_iter()
            .flat_map(|prefix| {
                vals.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    Ok(combos
        .into_iter()
        .map(|args| GroundLiteral {
            strong_negation: l.strong_negation,
            predicate: l.predicate.clone(),
            args,
        })
        .collect())
}

fn compare(bl: &BuiltinLiteral, b: &Binding) -> Result<bool, EngineError> {
    let l = eval(&bl.left, b)?;
    let r = eval(&bl.right, b)?;
    Ok(bl.op.holds(l.cmp(&r)))
}

/// Joins positive literals against `store` and evaluates builtins,
/// collecting every complete binding.
fn join(
    lits: &[&StandardLiteral],
    builtins: &[&BuiltinLiteral],
    store: &Store,
    b: Binding,
    span: &SourceSpan,
    out: &mut Vec<Binding>,
) -> Result<(), EngineError> {
    let bound = |v: &String, b: &Binding| b.contains_key(v);
    // builtins first: checks when ready, assignments when one side is free
    for (i, bl) in builtins.iter().enumerate() {
        let lv = term_vars(&bl.left);
        let rv = term_vars(&bl.right);
        let rest: Vec<&BuiltinLiteral> = builtins
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, x)| *x)
            .collect();
        if lv.iter().chain(&rv).all(|v| bound(v, &b)) {
            if compare(bl, &b)? {
                return join(lits, &rest, store, b, span, out);
            }
            return Ok(());
        }
        if bl.op == CompareOp::Eq {
            for (var, other, ov) in [(&bl.left, &bl.right, &rv), (&bl.right, &bl.left, &lv)] {
                if let Some(name) = var.as_variable() {
                    if name != "_" && !bound(&name.to_string(), &b) && ov.iter().all(|v| bound(v, &b)) {
                        for v in values(other, &b)? {
                            let mut nb = b.clone();
                            nb.insert(name.to_string(), v);
                            join(lits, &rest, store, nb, span, out)?;
                        }
                        return Ok(());
                    }
                }
            }
        }
    }
    let ready = lits.iter().position(|l| {
        let mut nb = Vec::new();
        l.args.iter().for_each(|a| nonbinding_vars(a, false, &mut nb));
        nb.iter().all(|v| bound(v, &b))
    });
    match ready {
        Some(i) => {
            let l = lits[i];
            let rest: Vec<&StandardLiteral> = lits
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, x)| *x)
                .collect();
            for atom in store.get(&key(l)) {
                let mut nb = b.clone();
                if match_literal(l, atom, &mut nb)? {
                    join(&rest, builtins, store, nb, span, out)?;
                }
            }
            Ok(())
        }
        None if lits.is_empty() && builtins.is_empty() => {
            out.push(b);
            Ok(())
        }
        None => Err(EngineError::Evaluation {
            message: "cannot bind the variables of this rule".into(),
            span: span.clone(),
        }),
    }
}

struct Prepared<'a> {
    rule: &'a Rule,
    /// Positive plain literals that drive the join.
    pos: Vec<&'a StandardLiteral>,
    /// Positive literals containing intervals: expanded, never matched.
    interval_pos: Vec<&'a StandardLiteral>,
    neg: Vec<&'a StandardLiteral>,
    conditional: Vec<&'a StandardLiteral>,
    builtins: Vec<&'a BuiltinLiteral>,
}

impl<'a> Prepared<'a> {
    fn new(rule: &'a Rule) -> Result<Self, EngineError> {
        let mut p = Prepared {
            rule,
            pos: Vec::new(),
            interval_pos: Vec::new(),
            neg: Vec::new(),
            conditional: Vec::new(),
            builtins: Vec::new(),
        };
        for b in &rule.body {
            match b {
                BodyLiteral::Aggregate(a) => {
                    return Err(unsupported("aggregate", &a.span));
                }
                BodyLiteral::Builtin(bl) => p.builtins.push(bl),
                BodyLiteral::Standard(l) if !l.conditions.is_empty() => p.conditional.push(l),
                BodyLiteral::Standard(l) if l.default_negation => {
                    if l.args.iter().any(|a| term_vars(a).len() < count_vars(a)) {
                        return Err(unsupported("anonymous variable in a negated literal", &l.span));
                    }
                    p.neg.push(l)
                }
                BodyLiteral::Standard(l) if l.args.iter().any(Term::contains_interval) => {
                    p.interval_pos.push(l)
                }
                BodyLiteral::Standard(l) => p.pos.push(l),
            }
        }
        if rule.head.len() > 1
            && rule.head.iter().any(|l| l.args.iter().any(Term::contains_interval))
        {
            return Err(unsupported("interval in a disjunctive head", &rule.span));
        }
        Ok(p)
    }

    /// Definite rules: one unconditional head atom and no negation or
    /// conditions in the body.
    fn is_definite(&self) -> bool {
        self.rule.head.len() == 1
            && self.rule.head[0].conditions.is_empty()
            && self.neg.is_empty()
            && self.conditional.is_empty()
    }
}

fn count_vars(t: &Term) -> usize {
    let mut v = Vec::new();
    t.variables(&mut v);
    v.len()
}

struct Instance {
    heads: Vec<Vec<GroundLiteral>>,
    pos: Vec<GroundLiteral>,
    neg: Vec<GroundLiteral>,
}

struct Grounder {
    det: Store,
    limits: Limits,
}

impl Grounder {
    /// Instances of `l : conditions` under `b`, using the deterministic part.
    fn expand(&self, l: &StandardLiteral, b: &Binding) -> Result<Vec<GroundLiteral>, EngineError> {
        let positive: Vec<&StandardLiteral> =
            l.conditions.iter().filter(|c| !c.default_negation).collect();
        let mut bindings = Vec::new();
        join(&positive, &[], &self.det, b.clone(), &l.span, &mut bindings)?;
        let mut out = Vec::new();
        'next: for nb in bindings {
            for c in l.conditions.iter().filter(|c| c.default_negation) {
                for inst in instances(c, &nb)? {
                    if self.det.contains(&inst) {
                        continue 'next;
                    }
                }
            }
            out.extend(instances(l, &nb)?);
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn instantiate(&self, p: &Prepared, store: &Store) -> Result<Vec<Instance>, EngineError> {
        let mut bindings = Vec::new();
        join(&p.pos, &p.builtins, store, Binding::new(), &p.rule.span, &mut bindings)?;
        let mut out = Vec::new();
        'binding: for b in bindings {
            let mut pos: Vec<GroundLiteral> = Vec::new();
            for l in &p.pos {
                pos.extend(instances(l, &b)?);
            }
            for l in &p.interval_pos {
                for inst in instances(l, &b)? {
                    if !store.contains(&inst) {
                        continue 'binding;
                    }
                    pos.push(inst);
                }
            }
            let mut neg = Vec::new();
            for l in &p.neg {
                neg.extend(instances(l, &b)?);
            }
            for l in &p.conditional {
                let expanded = self.expand(l, &b)?;
                if l.default_negation {
                    neg.extend(expanded);
                } else {
                    // kept even when underivable so the expansion stays visible
                    pos.extend(expanded);
                }
            }
            let heads = if p.rule.head.len() == 1 && p.rule.head[0].conditions.is_empty() {
                // a single head with intervals yields one rule per atom
                instances(&p.rule.head[0], &b)?
                    .into_iter()
                    .map(|h| vec![h])
                    .collect()
            } else {
                let mut disjunction = Vec::new();
                for h in &p.rule.head {
                    if h.conditions.is_empty() {
                        disjunction.extend(instances(h, &b)?);
                    } else {
                        disjunction.extend(self.expand(h, &b)?);
                    }
                }
                vec![disjunction]
            };
            out.push(Instance { heads, pos, neg });
        }
        Ok(out)
    }

    /// Fixpoint of head atoms over `rules`, ignoring negation.
    fn derivable(&self, rules: &[&Prepared], store: &mut Store) -> Result<(), EngineError> {
        loop {
            let mut changed = false;
            for p in rules {
                for inst in self.instantiate(p, store)? {
                    for h in inst.heads.into_iter().flatten() {
                        changed |= store.insert(h);
                    }
                }
                if store.all.len() > self.limits.max_atoms {
                    return Err(EngineError::Capacity {
                        what: "atoms",
                        bound: self.limits.max_atoms,
                    });
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }
}

/// Predicates whose extension may differ between answer sets.
fn nondeterministic(prepared: &[Prepared]) -> HashSet<Key> {
    let mut nondet: HashSet<Key> = HashSet::new();
    for p in prepared.iter().filter(|p| !p.is_definite()) {
        nondet.extend(p.rule.head.iter().map(key));
    }
    loop {
        let before = nondet.len();
        for p in prepared.iter().filter(|p| p.is_definite()) {
            if p.pos.iter().chain(&p.interval_pos).any(|l| nondet.contains(&key(l))) {
                nondet.insert(key(&p.rule.head[0]));
            }
        }
        if nondet.len() == before {
            return nondet;
        }
    }
}

pub fn ground(program: &Program, limits: Limits) -> Result<GroundProgram, EngineError> {
    for rule in &program.rules {
        if let Some((variable, span)) = unsafe_variables(rule).into_iter().next() {
            return Err(EngineError::Unsafe { variable, span });
        }
    }
    let prepared = program
        .rules
        .iter()
        .map(Prepared::new)
        .collect::<Result<Vec<_>, _>>()?;

    let nondet = nondeterministic(&prepared);
    for p in &prepared {
        let heads = p.rule.head.iter().filter(|h| !h.conditions.is_empty());
        for l in p.conditional.iter().copied().chain(heads) {
            for c in &l.conditions {
                if nondet.contains(&key(c)) {
                    return Err(unsupported(
                        format!("condition over non-deterministic predicate {}", c.signature()),
                        &c.span,
                    ));
                }
            }
        }
    }

    let mut g = Grounder {
        det: Store::default(),
        limits,
    };
    let det_rules: Vec<&Prepared> = prepared
        .iter()
        .filter(|p| p.is_definite() && !nondet.contains(&key(&p.rule.head[0])))
        .collect();
    let mut det = Store::default();
    g.derivable(&det_rules, &mut det)?;
    g.det = det;

    let all: Vec<&Prepared> = prepared.iter().collect();
    let mut possible = Store::default();
    g.derivable(&all, &mut possible)?;

    let mut builder = GroundProgramBuilder::new();
    for p in &prepared {
        for inst in g.instantiate(p, &possible)? {
            let neg: Vec<GroundLiteral> = inst
                .neg
                .into_iter()
                .filter(|l| possible.contains(l))
                .collect();
            for head in inst.heads {
                builder.add_rule(head, inst.pos.clone(), neg.clone());
            }
            if builder.rule_count() > limits.max_rules {
                return Err(EngineError::Capacity {
                    what: "rules",
                    bound: limits.max_rules,
                });
            }
        }
    }
    let ground = builder.build();
    if ground.atoms().len() > limits.max_atoms {
        return Err(EngineError::Capacity {
            what: "atoms",
            bound: limits.max_atoms,
        });
    }
    Ok(ground)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn g(src: &str) -> Result<GroundProgram, EngineError> {
        let p = parse(src, Dialect::Gringo);
        assert!(!p.has_errors(), "{:?}", p.diagnostics);
        ground(&p.program, Limits::default())
    }

    #[test]
    fn intervals_expand() {
        assert_eq!(g("p(1..3).").unwrap().to_string(), "p(1).\np(2).\np(3).\n");
    }

    #[test]
    fn conditional_expansion() {
        let src = "edge(1,2). red(1). red(2). edge(2,3). \
                   colored :- redEdge(X,Y):edge(X,Y):red(X):red(Y).";
        let text = g(src).unwrap().to_string();
        assert!(text.contains("colored :- redEdge(1,2)."), "{text}");
    }

    #[test]
    fn builtins_prune() {
        let text = g("c(1). c(2). a(X) :- c(X), X > 1.").unwrap().to_string();
        assert!(text.contains("a(2) :- c(2)."));
        assert!(!text.contains("a(1)"));
    }

    #[test]
    fn assignments_and_arithmetic() {
        let text = g("n(1). n(2). s(Y) :- n(X), Y = X * 10.").unwrap().to_string();
        assert!(text.contains("s(20) :- n(2)."), "{text}");
        assert!(matches!(
            g("n(a). s(Y) :- n(X), Y = X + 1."),
            Err(EngineError::Evaluation { .. })
        ));
    }

    #[test]
    fn rejects() {
        assert!(matches!(g("a(X) :- not c(X)."), Err(EngineError::Unsafe { .. })));
        assert!(matches!(
            g("ok :- 1 < #count{X : p(X)}."),
            Err(EngineError::Unsupported { .. })
        ));
        assert!(matches!(
            g("q(1) | r(1). ok :- p(X) : q(X)."),
            Err(EngineError::Unsupported { .. })
        ));
        let err = ground(
            &parse("p(0). p(X+1) :- p(X).", Dialect::Gringo).program,
            Limits { max_atoms: 50, max_rules: 1000 },
        );
        assert_eq!(err, Err(EngineError::Capacity { what: "atoms", bound: 50 }));
    }

    #[test]
    fn negative_atoms_never_derivable_are_dropped() {
        let text = g("a :- not b.").unwrap().to_string();
        assert_eq!(text, "a.\n");
    }
}
