//! Property tests for the parser, printer, and analysis services.

use aspwb_core::analysis::{build_outline, occurrences_at, OutlineNode};
use aspwb_core::parse::{lex, TokenKind};
use aspwb_core::*;
use proptest::prelude::*;

const SYMBOLS: &[&str] = &["a", "b", "c", "foo", "bar_1", "x'"];
const PREDICATES: &[&str] = &["p", "q", "r", "edge", "node", "col"];
const VARIABLES: &[&str] = &["X", "Y", "Z", "Abc", "_"];

fn constant() -> impl Strategy<Value = Term> {
    prop_oneof![
        (-20i64..40).prop_map(Term::int),
        prop::sample::select(SYMBOLS).prop_map(Term::sym),
        "[a-z \"\\\\.%]{0,5}".prop_map(Term::string),
    ]
}

fn variable() -> impl Strategy<Value = Term> {
    prop::sample::select(VARIABLES).prop_map(Term::var)
}

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![constant(), variable()];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (prop::sample::select(SYMBOLS), prop::collection::vec(inner.clone(), 1..3))
                .prop_map(|(f, args)| Term::func(f, args)),
            (
                prop::sample::select(&[ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div][..]),
                inner.clone(),
                inner
            )
                .prop_map(|(op, l, r)| Term::arith(op, l, r)),
        ]
    })
}

fn arg() -> impl Strategy<Value = Term> {
    prop_oneof![
        4 => term(),
        1 => (0i64..3, 3i64..6).prop_map(|(l, h)| Term::interval(Term::int(l), Term::int(h))),
    ]
}

fn atom() -> impl Strategy<Value = StandardLiteral> {
    (
        prop::sample::select(PREDICATES),
        prop::collection::vec(arg(), 0..3),
        any::<bool>(),
    )
        .prop_map(|(p, args, strong)| {
            let l = StandardLiteral::atom(p, args);
            if strong {
                l.strong()
            } else {
                l
            }
        })
}

fn literal(dialect: Dialect, negation: bool) -> impl Strategy<Value = StandardLiteral> {
    let conds = if dialect == Dialect::Gringo { 0..3usize } else { 0..1usize };
    (
        atom(),
        any::<bool>(),
        prop::collection::vec((atom(), any::<bool>()), conds),
    )
        .prop_map(move |(mut l, neg, conds)| {
            l.default_negation = negation && neg;
            l.conditions = conds
                .into_iter()
                .map(|(c, n)| if n { c.negated() } else { c })
                .collect();
            l
        })
}

fn compare() -> impl Strategy<Value = CompareOp> {
    prop::sample::select(
        &[
            CompareOp::Eq,
            CompareOp::Ne,
            CompareOp::Lt,
            CompareOp::Le,
            CompareOp::Gt,
            CompareOp::Ge,
        ][..],
    )
}

fn builtin() -> impl Strategy<Value = BuiltinLiteral> {
    (compare(), term(), term()).prop_map(|(op, l, r)| BuiltinLiteral::new(op, l, r))
}

fn aggregate(dialect: Dialect) -> impl Strategy<Value = AggregateLiteral> {
    let element = (
        prop::collection::vec(term(), 1..3),
        prop::collection::vec(
            prop_oneof![
                atom().prop_map(ConditionLiteral::Standard),
                atom().prop_map(|a| ConditionLiteral::Standard(a.negated())),
                builtin().prop_map(ConditionLiteral::Builtin),
            ],
            0..3,
        ),
    )
        .prop_map(|(terms, conditions)| AggregateElement {
            terms,
            conditions,
            span: SourceSpan::default(),
        });
    (
        prop::sample::select(
            &[
                AggregateFunction::Count,
                AggregateFunction::Sum,
                AggregateFunction::Min,
                AggregateFunction::Max,
            ][..],
        ),
        prop::collection::vec(element, 0..3),
        prop::option::of((term(), compare())),
        prop::option::of((compare(), term())),
        any::<bool>(),
    )
        .prop_map(move |(function, elements, lower, upper, neg)| {
            let (lower, upper) = match (lower, upper) {
                (None, None) => (None, Some((CompareOp::Gt, Term::int(1)))),
                other => other,
            };
            AggregateLiteral {
                function,
                elements,
                lower_guard: lower.map(|(term, op)| Guard { term, op }),
                upper_guard: upper.map(|(op, term)| Guard { term, op }),
                dialect,
                default_negation: neg,
                span: SourceSpan::default(),
            }
        })
}

fn body_literal(dialect: Dialect) -> impl Strategy<Value = BodyLiteral> {
    prop_oneof![
        5 => literal(dialect, true).prop_map(BodyLiteral::Standard),
        2 => builtin().prop_map(BodyLiteral::Builtin),
        1 => aggregate(dialect).prop_map(BodyLiteral::Aggregate),
    ]
}

fn rule(dialect: Dialect) -> impl Strategy<Value = Rule> {
    (
        prop::collection::vec(literal(dialect, false), 0..3),
        prop::collection::vec(body_literal(dialect), 0..4),
    )
        .prop_map(|(head, body)| {
            if head.is_empty() && body.is_empty() {
                Rule::fact(StandardLiteral::atom("p", vec![]))
            } else {
                Rule::new(head, body)
            }
        })
}

fn dialect() -> impl Strategy<Value = Dialect> {
    prop_oneof![Just(Dialect::Gringo), Just(Dialect::Dlv)]
}

fn program() -> impl Strategy<Value = Program> {
    dialect().prop_flat_map(|d| {
        prop::collection::vec(rule(d), 0..6).prop_map(move |rules| {
            let mut p = Program::new(d);
            p.rules = rules;
            p
        })
    })
}

/// Structural form used for comparisons: no spans, no derived flags.
fn normalise(mut p: Program) -> Program {
    p.strip_spans();
    for r in &mut p.rules {
        for b in &mut r.body {
            if let BodyLiteral::Builtin(bl) = b {
                bl.is_assignment = false;
            }
        }
    }
    p
}

/// Random program-like text with a bias towards the tokens that matter.
fn noisy_text() -> impl Strategy<Value = String> {
    let piece = prop::sample::select(
        &[
            "p", "q(X)", "(", ")", "{", "}", ".", ". ", ",", ":-", ":", ";", "|", " v ", "not ",
            "#count", "1", "..", "=", "<", "+", "\"", "\"s.\"", "%", "%*", "*%", "\n", " ", "-",
            "#const", "[", "]", ":~", "_", "Y", "'", "@", "!", "#show",
        ][..],
    );
    prop::collection::vec(piece, 0..40).prop_map(|v| v.concat())
}

fn program_text() -> impl Strategy<Value = (Dialect, String)> {
    let comment = prop::sample::select(
        &[
            "% a comment",
            "%* block\ncomment *%",
            "%! name(r1)",
            "%*! name(r2) *%",
            "% trailing. with dots",
            "",
            "\n",
        ][..],
    );
    program().prop_flat_map(move |p| {
        let n = p.rules.len() + 1;
        (Just(p), prop::collection::vec(comment.clone(), n))
    })
    .prop_map(|(p, comments)| {
        let mut text = String::new();
        // DLV has line comments only
        let comment = |c: &'static str| -> &'static str {
            if p.dialect == Dialect::Dlv && c.starts_with("%*") {
                ""
            } else {
                c
            }
        };
        for (i, r) in p.rules.iter().enumerate() {
            text.push_str(comment(comments[i]));
            text.push('\n');
            text.push_str(&pretty_print(r, p.dialect).unwrap());
            text.push(' ');
        }
        text.push_str(comment(comments[p.rules.len()]));
        (p.dialect, text)
    })
}

fn check_spans(node: &OutlineNode) -> bool {
    node.children
        .iter()
        .all(|c| node.span.encloses(&c.span) && check_spans(c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity(p in program()) {
        let text = pretty_print(&p, p.dialect).unwrap();
        let parsed = parse(&text, p.dialect);
        prop_assert!(!parsed.has_errors(), "{}\n{:?}", text, parsed.diagnostics);
        prop_assert_eq!(normalise(parsed.program), normalise(p), "{}", text);
    }

    #[test]
    fn recovery_is_bounded(text in noisy_text(), d in dialect()) {
        let result = parse(&text, d);
        let dots = lex(&text, d).tokens.iter().filter(|t| t.kind == TokenKind::Dot).count();
        prop_assert!(result.errors().count() <= dots + 1);
        for diag in &result.diagnostics {
            prop_assert!(diag.span.end_byte <= text.len());
        }
        for r in &result.program.rules {
            prop_assert!(r.span.end_byte <= text.len());
        }
    }

    #[test]
    fn comments_are_conserved((d, text) in program_text()) {
        let result = parse(&text, d);
        prop_assert!(!result.has_errors(), "{}\n{:?}", text, result.diagnostics);
        let lexed = lex(&text, d).comments.len();
        prop_assert_eq!(result.program.comment_count(), lexed);
        // and they survive printing
        let printed = pretty_print(&result.program, d).unwrap();
        let again = parse(&printed, d);
        let texts = |p: &Program| {
            let mut v: Vec<String> = p.standalone_comments.iter()
                .chain(p.rules.iter().flat_map(|r| &r.comments))
                .map(|c| c.text.clone())
                .collect();
            v.sort();
            v
        };
        prop_assert_eq!(texts(&again.program), texts(&result.program), "{}", printed);
    }

    #[test]
    fn spans_reparse_to_the_same_rule(p in program()) {
        let text = pretty_print(&p, p.dialect).unwrap();
        let parsed = parse(&text, p.dialect).program;
        for r in &parsed.rules {
            let again = parse(r.span.slice(&text), p.dialect).program;
            prop_assert_eq!(again.rules.len(), 1);
            prop_assert_eq!(again.rules[0].without_spans(), r.without_spans());
        }
    }

    #[test]
    fn outline_is_complete(p in program()) {
        let text = pretty_print(&p, p.dialect).unwrap();
        let parsed = parse(&text, p.dialect).program;
        let outline = build_outline(&parsed);
        prop_assert_eq!(outline.children.len(), parsed.rules.len());
        prop_assert!(check_spans(&outline));
    }

    #[test]
    fn occurrences_are_symmetric(p in program()) {
        let text = pretty_print(&p, p.dialect).unwrap();
        let parsed = parse(&text, p.dialect).program;
        for r in &parsed.rules {
            let mut probes: Vec<Position> = r.standard_literals().iter().map(|l| l.predicate_span.start()).collect();
            for t in r.terms() {
                t.visit(&mut |t| probes.push(t.span.start()));
            }
            for pos in probes {
                if let Some(set) = occurrences_at(&parsed, pos) {
                    for s in &set.spans {
                        let other = occurrences_at(&parsed, s.start());
                        prop_assert_eq!(other.as_ref(), Some(&set));
                    }
                }
            }
        }
    }
}

#[test]
fn sample_corpus_round_trips() {
    let corpus = [
        ("a(X) :- c(X).", Dialect::Gringo),
        ("a(X) :- c(X).", Dialect::Dlv),
        ("colored :- redEdge(X,Y):edge(X,Y):red(X):red(Y).", Dialect::Gringo),
        ("serves(R,D,P) :- dishAvailable(R,D), price(R,D,P).", Dialect::Gringo),
        ("serves(R,D,P) :- dishAvailable(R,D), price(R,D,P).", Dialect::Dlv),
    ];
    for (src, d) in corpus {
        let r = parse(src, d);
        assert!(!r.has_errors(), "{src}: {:?}", r.diagnostics);
        let printed = pretty_print(&r.program, d).unwrap();
        assert_eq!(printed.trim_end(), src);
        assert_eq!(
            normalise(parse(&printed, d).program),
            normalise(r.program)
        );
    }
}

#[test]
fn herbrand_constants_examples() {
    let c = |s: &str| herbrand_constants(&parse(s, Dialect::Gringo).program);
    assert_eq!(
        c("p(a). q(b,a)."),
        [Constant::Symbol("a".into()), Constant::Symbol("b".into())].into()
    );
    assert_eq!(c("r(1..3)."), (1..=3).map(Constant::Integer).collect());
    assert!(c("").is_empty());
}
