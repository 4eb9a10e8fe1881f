use std::collections::BTreeSet;

use aspwb_tools::{parse_solver_output, OutputFormat};
use proptest::prelude::*;

fn literal() -> impl Strategy<Value = String> {
    let arg = prop_oneof!["[a-z][a-z0-9]{0,3}", (0i64..100).prop_map(|n| n.to_string())];
    (
        any::<bool>(),
        "[a-z][a-z_0-9]{0,4}",
        prop::collection::vec(arg, 0..3),
    )
        .prop_map(|(neg, p, args)| {
            let sign = if neg { "-" } else { "" };
            if args.is_empty() {
                format!("{sign}{p}")
            } else {
                format!("{sign}{p}({})", args.join(","))
            }
        })
}

// Literal sets without complementary pairs.
fn model() -> impl Strategy<Value = Vec<String>> {
    prop::collection::btree_set(literal(), 0..6).prop_map(|s| {
        let mut seen = BTreeSet::new();
        s.into_iter()
            .filter(|l| {
                let atom = l.trim_start_matches('-').to_string();
                seen.insert(atom)
            })
            .collect()
    })
}

fn clasp_text(models: &[Vec<String>], unsat: bool) -> String {
    let mut s = String::from("clasp version 3.3.5\nReading from stdin\nSolving...\n");
    for (i, m) in models.iter().enumerate() {
        s += &format!("Answer: {}\n{}\n", i + 1, m.join(" "));
    }
    s += if unsat { "UNSATISFIABLE\n" } else { "SATISFIABLE\n" };
    s += "\nModels       : 3\nCalls        : 1\nTime         : 0.002s\nCPU Time     : 0.001s\n";
    s
}

fn dlv_text(models: &[Vec<String>]) -> String {
    let mut s = String::from("DLV [build BEN/Dec 21 2011   gcc 4.6.1]\n\n");
    for m in models {
        s += &format!("{{{}}}\n", m.join(", "));
    }
    s
}

// Reference extraction working on raw lines only.
fn clasp_oracle(text: &str) -> (Vec<BTreeSet<String>>, bool) {
    let lines: Vec<&str> = text.lines().collect();
    let mut models = Vec::new();
    for (i, l) in lines.iter().enumerate() {
        if l.starts_with("Answer:") {
            models.push(lines[i + 1].split_whitespace().map(str::to_string).collect());
        }
    }
    let sat = lines.contains(&"SATISFIABLE");
    if !sat {
        models.clear();
    }
    (models, sat)
}

fn dlv_oracle(text: &str) -> (Vec<BTreeSet<String>>, bool) {
    let models: Vec<BTreeSet<String>> = text
        .lines()
        .filter(|l| l.starts_with('{'))
        .map(|l| {
            l[1..l.len() - 1]
                .split(", ")
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect()
        })
        .collect();
    let sat = !models.is_empty();
    (models, sat)
}

fn sets(out: &aspwb_tools::SolverOutput) -> Vec<BTreeSet<String>> {
    out.interpretations
        .iter()
        .map(|i| i.iter().map(|l| l.to_string()).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn clasp_matches_oracle(models in prop::collection::vec(model(), 0..5), unsat in any::<bool>()) {
        let text = clasp_text(&models, unsat);
        let out = parse_solver_output(&text, OutputFormat::ClaspLike).unwrap();
        let (expected, sat) = clasp_oracle(&text);
        prop_assert_eq!(out.satisfiable, sat);
        prop_assert_eq!(sets(&out), expected);
    }

    #[test]
    fn dlv_matches_oracle(models in prop::collection::vec(model(), 0..5)) {
        let text = dlv_text(&models);
        let out = parse_solver_output(&text, OutputFormat::DlvLike).unwrap();
        let (expected, sat) = dlv_oracle(&text);
        prop_assert_eq!(out.satisfiable, sat);
        prop_assert_eq!(sets(&out), expected);
    }

    #[test]
    fn garbage_line_is_located(models in prop::collection::vec(model(), 1..4), at in 0usize..20) {
        let text = dlv_text(&models);
        let mut lines: Vec<&str> = text.lines().collect();
        let at = at % (lines.len() + 1);
        lines.insert(at, "@@ garbage");
        let err = parse_solver_output(&lines.join("\n"), OutputFormat::DlvLike).unwrap_err();
        prop_assert_eq!(err.line, at + 1);
    }
}

#[test]
fn examples() {
    let out = parse_solver_output("Answer: 1\nq(1,2) q(2,4)\nSATISFIABLE", OutputFormat::ClaspLike).unwrap();
    assert_eq!((out.interpretations.len(), out.interpretations[0].len(), out.satisfiable), (1, 2, true));
    let out = parse_solver_output("{a, -b}", OutputFormat::DlvLike).unwrap();
    assert_eq!(sets(&out)[0], ["-b", "a"].iter().map(|s| s.to_string()).collect());
    let out = parse_solver_output("UNSATISFIABLE", OutputFormat::ClaspLike).unwrap();
    assert!(!out.satisfiable && out.interpretations.is_empty());
}
