use aspwb_core::interp::{diff, to_facts, to_tree, Marker};
use aspwb_core::parse::parse_interpretation;
use aspwb_core::*;
use proptest::prelude::*;

fn value() -> impl Strategy<Value = Value> {
    let leaf = prop_oneof![
        (-50i64..50).prop_map(Value::Integer),
        prop::sample::select(&["a", "b", "c1", "z_z"][..]).prop_map(Value::sym),
        "[a-zA-Z0-9 ,.%\"\\\\]{0,6}".prop_map(Value::String),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        (prop::sample::select(&["f", "g"][..]), prop::collection::vec(inner, 1..3))
            .prop_map(|(f, a)| Value::Function(f.to_string(), a))
    })
}

fn literal() -> impl Strategy<Value = GroundLiteral> {
    (
        prop::sample::select(&["p", "q", "edge", "r2"][..]),
        prop::collection::vec(value(), 0..3),
        any::<bool>(),
    )
        .prop_map(|(p, args, neg)| {
            if neg {
                GroundLiteral::negative(p, args)
            } else {
                GroundLiteral::new(p, args)
            }
        })
}

fn interpretation() -> impl Strategy<Value = Interpretation> {
    prop::collection::vec(literal(), 0..12).prop_map(|ls| {
        let mut i = Interpretation::new();
        for l in ls {
            let _ = i.insert(l);
        }
        i
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn facts_round_trip(i in interpretation()) {
        for d in [Dialect::Gringo, Dialect::Dlv] {
            let text = to_facts(&i, d).unwrap();
            let back = parse_interpretation(&text, d).unwrap();
            prop_assert!(back.same_literals(&i), "{}", text);
        }
    }

    #[test]
    fn tree_cardinality(i in interpretation()) {
        let t = to_tree(&i);
        let literals: usize = t.children.iter().map(|p| p.children.len()).sum();
        prop_assert_eq!(literals, i.len());
        let sigs: std::collections::BTreeSet<_> = i.iter().map(|l| l.signature()).collect();
        prop_assert_eq!(t.children.len(), sigs.len());
        prop_assert!(t.children.iter().all(|p| p.marker == Marker::Predicate
            && p.children.iter().all(|l| l.marker == Marker::Literal)));
    }

    #[test]
    fn diff_is_a_mirrored_partition(a in interpretation(), b in interpretation()) {
        let d = diff(&a, &b);
        let r = diff(&b, &a);
        prop_assert_eq!(&d.only_left, &r.only_right);
        prop_assert_eq!(&d.only_right, &r.only_left);
        prop_assert_eq!(&d.common, &r.common);
        prop_assert!(d.only_left.is_disjoint(&d.common) && d.only_right.is_disjoint(&d.common));
        let union: std::collections::BTreeSet<_> =
            a.literals().union(b.literals()).cloned().collect();
        let parts: std::collections::BTreeSet<_> =
            d.only_left.iter().chain(&d.only_right).chain(&d.common).cloned().collect();
        prop_assert_eq!(union, parts);
    }

    #[test]
    fn insertion_keeps_consistency(ls in prop::collection::vec(literal(), 0..20)) {
        let mut i = Interpretation::new();
        for l in ls {
            let before = i.len();
            if i.insert(l.clone()).is_err() {
                prop_assert_eq!(i.len(), before);
            }
            prop_assert!(i.iter().all(|x| !i.contains(&x.complement())));
        }
    }
}
