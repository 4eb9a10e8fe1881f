//! Safety check against a direct per-rule classification of variables.

use std::collections::BTreeSet;

use aspwb_core::analysis::{check_safety, unsafe_variables};
use aspwb_core::*;
use proptest::prelude::*;

const VARS: &[&str] = &["X", "Y", "Z", "W", "_"];

fn simple_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        3 => prop::sample::select(VARS).prop_map(Term::var),
        1 => (0i64..3).prop_map(Term::int),
        1 => prop::sample::select(VARS).prop_map(|v| Term::func("f", vec![Term::var(v)])),
        1 => prop::sample::select(VARS).prop_map(|v| Term::arith(ArithOp::Add, Term::var(v), Term::int(1))),
    ]
}

fn atom() -> impl Strategy<Value = StandardLiteral> {
    (prop::sample::select(&["p", "q", "r"][..]), prop::collection::vec(simple_term(), 0..3))
        .prop_map(|(p, args)| StandardLiteral::atom(p, args))
}

#[derive(Debug, Clone)]
enum Item {
    Pos(StandardLiteral),
    Neg(StandardLiteral),
    Cond(StandardLiteral, Vec<StandardLiteral>),
    Cmp(CompareOp, Term, Term),
}

fn item() -> impl Strategy<Value = Item> {
    prop_oneof![
        4 => atom().prop_map(Item::Pos),
        2 => atom().prop_map(Item::Neg),
        1 => (atom(), prop::collection::vec(atom(), 1..3)).prop_map(|(l, c)| Item::Cond(l, c)),
        2 => (prop::sample::select(&[CompareOp::Eq, CompareOp::Lt][..]), simple_term(), simple_term())
            .prop_map(|(o, l, r)| Item::Cmp(o, l, r)),
    ]
}

fn rule() -> impl Strategy<Value = (Vec<StandardLiteral>, Vec<Item>)> {
    (prop::collection::vec(atom(), 0..2), prop::collection::vec(item(), 1..5))
}

fn vars_of(t: &Term, out: &mut BTreeSet<String>) {
    match &t.kind {
        TermKind::Variable { name } if name != "_" => {
            out.insert(name.clone());
        }
        TermKind::Function { args, .. } => args.iter().for_each(|a| vars_of(a, out)),
        TermKind::Arithmetic { left, right, .. } => {
            vars_of(left, out);
            vars_of(right, out);
        }
        _ => {}
    }
}

fn direct_vars(t: &Term, out: &mut BTreeSet<String>) {
    match &t.kind {
        TermKind::Variable { name } if name != "_" => {
            out.insert(name.clone());
        }
        TermKind::Function { args, .. } => args.iter().for_each(|a| direct_vars(a, out)),
        _ => {}
    }
}

fn lit_vars(l: &StandardLiteral, f: fn(&Term, &mut BTreeSet<String>)) -> BTreeSet<String> {
    let mut s = BTreeSet::new();
    l.args.iter().for_each(|a| f(a, &mut s));
    s
}

/// Classification: bound by positive literals (plain positions), then by
/// `V = t` with t already bound; everything else that occurs is unsafe,
/// except variables local to a conditional literal bound by its conditions.
fn oracle(head: &[StandardLiteral], body: &[Item]) -> BTreeSet<String> {
    let mut bound = BTreeSet::new();
    for i in body {
        if let Item::Pos(l) = i {
            bound.extend(lit_vars(l, direct_vars));
        }
    }
    loop {
        let before = bound.len();
        for i in body {
            if let Item::Cmp(CompareOp::Eq, l, r) = i {
                for (a, b) in [(l, r), (r, l)] {
                    if let Some(v) = a.as_variable() {
                        let mut need = BTreeSet::new();
                        vars_of(b, &mut need);
                        // `_` denotes no value, so it cannot feed an assignment
                        if v != "_" && need.is_subset(&bound) && !b.to_string().contains('_') {
                            bound.insert(v.to_string());
                        }
                    }
                }
            }
        }
        if bound.len() == before {
            break;
        }
    }
    let mut unsafe_vars = BTreeSet::new();
    let mut need = |vars: BTreeSet<String>, local: &BTreeSet<String>| {
        for v in vars {
            if !bound.contains(&v) && !local.contains(&v) {
                unsafe_vars.insert(v);
            }
        }
    };
    let none = BTreeSet::new();
    for l in head {
        need(lit_vars(l, vars_of), &none);
    }
    for i in body {
        match i {
            Item::Pos(l) | Item::Neg(l) => need(lit_vars(l, vars_of), &none),
            Item::Cmp(_, l, r) => {
                let mut s = BTreeSet::new();
                vars_of(l, &mut s);
                vars_of(r, &mut s);
                need(s, &none);
            }
            Item::Cond(l, conds) => {
                let local: BTreeSet<String> =
                    conds.iter().flat_map(|c| lit_vars(c, direct_vars)).collect();
                need(lit_vars(l, vars_of), &local);
                for c in conds {
                    need(lit_vars(c, vars_of), &local);
                }
            }
        }
    }
    unsafe_vars
}

fn to_rule(head: &[StandardLiteral], body: &[Item]) -> Rule {
    Rule::new(
        head.to_vec(),
        body.iter()
            .map(|i| match i {
                Item::Pos(l) => BodyLiteral::Standard(l.clone()),
                Item::Neg(l) => BodyLiteral::Standard(l.clone().negated()),
                Item::Cond(l, c) => BodyLiteral::Standard(StandardLiteral {
                    conditions: c.clone(),
                    ..l.clone()
                }),
                Item::Cmp(o, l, r) => BodyLiteral::Builtin(BuiltinLiteral::new(*o, l.clone(), r.clone())),
            })
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn safety_matches_classification((head, body) in rule()) {
        let text = pretty_print(&to_rule(&head, &body), Dialect::Gringo).unwrap();
        let parsed = parse(&text, Dialect::Gringo);
        prop_assert!(!parsed.has_errors(), "{}", text);
        let found = unsafe_variables(&parsed.program.rules[0]);
        let names: BTreeSet<String> = found.iter().map(|(n, _)| n.clone()).collect();
        prop_assert_eq!(names.len(), found.len(), "one report per variable");
        prop_assert_eq!(names, oracle(&head, &body), "{}", text);
        for (name, span) in &found {
            prop_assert_eq!(span.slice(&text), name.as_str());
        }
        prop_assert_eq!(check_safety(&parsed.program).len(), found.len());
    }
}

#[test]
fn spec_examples() {
    let count = |s: &str| check_safety(&parse(s, Dialect::Gringo).program).len();
    assert_eq!(count("a(X) :- c(X)."), 0);
    assert_eq!(count("a(X) :- not c(X)."), 1);
    assert_eq!(count("a(X,Y) :- c(X)."), 1);
}
