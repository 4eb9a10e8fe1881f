#![allow(dead_code)]

use std::collections::BTreeSet;

use aspwb_core::engine::{solve, SolveOptions};
use aspwb_core::{parse, Dialect, Interpretation};
use aspwb_viz::{parse_vis_program, QUEENS_VIS};

pub fn queens_program(n: usize) -> String {
    format!(
        "d(1..{n}).
q(X,Y) | nq(X,Y) :- d(X), d(Y).
:- q(X,Y), q(X,Z), Y < Z.
:- q(X,Y), q(Z,Y), X < Z.
:- q(X,Y), q(U,V), X < U, U-X == V-Y.
:- q(X,Y), q(U,V), X < U, U-X == Y-V.
row(X) :- q(X,Y).
:- d(X), not row(X).
"
    )
}

/// All n-queens placements found by the internal engine, as q/2 atoms.
pub fn queens_solutions(n: usize) -> Vec<Interpretation> {
    let r = parse(&queens_program(n), Dialect::Gringo);
    assert!(!r.has_errors(), "{:?}", r.diagnostics);
    solve(&r.program, &SolveOptions::default())
        .unwrap()
        .into_iter()
        .map(|i| i.project(|l| l.predicate == "q"))
        .collect()
}

pub fn queens_vis() -> aspwb_core::Program {
    parse_vis_program(QUEENS_VIS, Dialect::Gringo).unwrap()
}

pub fn q_atoms(cells: &[(i64, i64)]) -> Interpretation {
    let text: Vec<String> = cells.iter().map(|(r, c)| format!("q({r},{c})")).collect();
    aspwb_core::parse::parse_interpretation(&text.join(" "), Dialect::Gringo).unwrap()
}

/// What the queens visualization program derives from a set of q cells,
/// written out directly from its rules.
pub fn queens_vis_oracle(cells: &BTreeSet<(i64, i64)>) -> BTreeSet<String> {
    let dom: BTreeSet<i64> = cells.iter().flat_map(|&(r, c)| [r, c]).collect();
    let mut out = BTreeSet::new();
    out.insert("visposition(board,0,0)".to_string());
    for &n in &dom {
        if !dom.contains(&(n + 1)) {
            out.insert(format!("visgrid(board,{n},{n},40,40)"));
        }
    }
    for &x in &dom {
        for &y in &dom {
            out.insert(format!("visrect(cell({x},{y}),40,40)"));
            out.insert(format!("visfillgrid(board,{x},{y},cell({x},{y}))"));
            let colour = if (x + y) % 2 == 0 { "white" } else { "\"#B58863\"" };
            out.insert(format!("viscolor(cell({x},{y}),{colour})"));
        }
    }
    for &(x, y) in cells {
        out.insert(format!("visellipse(queen({x}),40,40)"));
        out.insert(format!("visfillgrid(board,{x},{y},queen({x}))"));
        out.insert(format!("viscolor(queen({x}),black)"));
        out.insert(format!("viszorder(queen({x}),1)"));
    }
    out
}

pub fn strings(i: &Interpretation) -> BTreeSet<String> {
    i.iter().map(|l| l.to_string()).collect()
}
